//! Nonarchimedean Green function (resolvent kernel of the Hecke operator):
//! closed form through the max-norm of the matrix entries.

use crate::qfield::padic::ord_int;
use crate::{cr, Error, Result, C};

/// 2x2 matrix with exact rational entries (num, den).
#[derive(Debug, Clone, Copy)]
pub struct RatMat {
    pub e: [[(i128, i128); 2]; 2],
}

impl RatMat {
    pub fn from_ints(m: [[i64; 2]; 2]) -> Self {
        RatMat {
            e: [
                [(m[0][0] as i128, 1), (m[0][1] as i128, 1)],
                [(m[1][0] as i128, 1), (m[1][1] as i128, 1)],
            ],
        }
    }

    fn det(&self) -> (i128, i128) {
        let [[a, b], [c_, d]] = self.e;
        (a.0 * d.0 * b.1 * c_.1 - b.0 * c_.0 * a.1 * d.1, a.1 * d.1 * b.1 * c_.1)
    }
}

/// Green function value Phi_v(sigma; g): closed form
///   (q^{-(sigma+1)/2} - q^{(sigma+1)/2})^{-1}
///     {|det g|^{-1} max(|a|,|b|,|c|,|d|)^2}^{-(sigma+1)/2}.
pub fn green_value(sigma: C, g: &RatMat, p: u64) -> Result<C> {
    let (dn, dd) = g.det();
    if dn == 0 {
        return Err(Error::SingularMatrix);
    }
    let ord_det = ord_int(dn, p) - ord_int(dd, p);
    let mut min_ord = i32::MAX;
    for row in &g.e {
        for &(n, d) in row {
            if n != 0 {
                min_ord = min_ord.min(ord_int(n, p) - ord_int(d, p));
            }
        }
    }
    // exponent of q in |det|^{-1} max^2: ord_det - 2 min_ord >= 0
    let e = ord_det - 2 * min_ord;
    let q = p as f64;
    let lq = q.ln();
    let pref = ((cr(-lq) * (sigma + 1.0) / 2.0).exp() - (cr(lq) * (sigma + 1.0) / 2.0).exp()).inv();
    Ok(pref * (cr(-lq) * (sigma + 1.0) / 2.0 * e as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn identity_and_cartan_values() {
        let s = c(2.3, 0.4);
        let p = 3u64;
        let q = 3.0f64;
        let lq = q.ln();
        let base = green_value(s, &RatMat::from_ints([[1, 0], [0, 1]]), p).unwrap();
        let want = ((cr(-lq) * (s + 1.0) / 2.0).exp() - (cr(lq) * (s + 1.0) / 2.0).exp()).inv();
        assert!((base - want).norm() < 1e-13);
        // diag(p, 1): one extra factor q^{-(s+1)/2}
        let v = green_value(s, &RatMat::from_ints([[3, 0], [0, 1]]), p).unwrap();
        assert!((v - base * (cr(-lq) * (s + 1.0) / 2.0).exp()).norm() < 1e-13);
    }

    #[test]
    fn central_invariance() {
        let s = c(1.7, -0.8);
        let p = 5u64;
        let g = RatMat::from_ints([[7, 5], [10, 9]]);
        let cg = RatMat::from_ints([[7 * 125, 5 * 125], [10 * 125, 9 * 125]]);
        let a = green_value(s, &g, p).unwrap();
        let b = green_value(s, &cg, p).unwrap();
        assert!((a - b).norm() < 1e-13);
    }

    #[test]
    fn singular_matrix_signal() {
        assert!(matches!(
            green_value(c(2.0, 0.0), &RatMat::from_ints([[1, 2], [2, 4]]), 3),
            Err(Error::SingularMatrix)
        ));
    }

    #[test]
    fn bi_k_invariance_spotcheck() {
        // multiply by an integral unimodular matrix on either side
        let s = c(2.1, 0.3);
        let p = 3u64;
        let g = [[9i64, 2], [3, 5]];
        let k = [[2i64, 1], [1, 1]]; // det 1
        let mul = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| {
            let mut o = [[0i64; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    o[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                }
            }
            o
        };
        let a = green_value(s, &RatMat::from_ints(g), p).unwrap();
        let b = green_value(s, &RatMat::from_ints(mul(k, g)), p).unwrap();
        let c2 = green_value(s, &RatMat::from_ints(mul(g, k)), p).unwrap();
        assert!((a - b).norm() < 1e-13);
        assert!((a - c2).norm() < 1e-13);
    }
}
