//! Minimal Laurent-polynomial arithmetic over Complex64, used to evaluate
//! the local factors through their rearranged polynomial forms (exact
//! cancellation of removable singularities instead of numerical luck).

use crate::{cr, C};

/// Laurent polynomial sum_{k} coeffs[k] * X^{lo + k}.
#[derive(Debug, Clone)]
pub struct Laurent {
    pub lo: i32,
    pub coeffs: Vec<C>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { lo: 0, coeffs: vec![] }
    }

    /// c * X^k
    pub fn monomial(c: C, k: i32) -> Self {
        Laurent { lo: k, coeffs: vec![c] }
    }

    pub fn coeff(&self, k: i32) -> C {
        let idx = k - self.lo;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            C::new(0.0, 0.0)
        } else {
            self.coeffs[idx as usize]
        }
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.coeffs.len() as i32 - 1
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        if self.coeffs.is_empty() {
            return other.clone();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut coeffs = vec![C::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[(self.lo - lo) as usize + i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            coeffs[(other.lo - lo) as usize + i] += c;
        }
        Laurent { lo, coeffs }
    }

    pub fn scale(&self, c: C) -> Laurent {
        Laurent { lo: self.lo, coeffs: self.coeffs.iter().map(|&a| a * c).collect() }
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Laurent::zero();
        }
        let lo = self.lo + other.lo;
        let mut coeffs = vec![C::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Laurent { lo, coeffs }
    }

    /// Exact division by a monic-in-lowest-term divisor given as a plain
    /// polynomial in X (lo = 0). Panics in debug builds if the remainder is
    /// not numerically negligible — callers divide only when divisibility is
    /// an algebraic identity.
    pub fn div_exact(&self, divisor: &[C]) -> Laurent {
        if self.coeffs.is_empty() {
            return Laurent::zero();
        }
        let d0 = divisor[0];
        assert!(d0.norm() > 0.0);
        let n = self.coeffs.len();
        let dn = divisor.len();
        assert!(n + 1 >= dn, "degree too small for division");
        let mut rem = self.coeffs.clone();
        let qlen = n + 1 - dn;
        let mut q = vec![C::new(0.0, 0.0); qlen];
        for i in 0..qlen {
            let c = rem[i] / d0;
            q[i] = c;
            for (j, &d) in divisor.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
        let scale: f64 = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
        debug_assert!(
            rem[qlen..].iter().all(|c| c.norm() <= 1e-9 * scale),
            "non-exact Laurent division; remainder {:?}",
            &rem[qlen..]
        );
        Laurent { lo: self.lo, coeffs: q }
    }

    pub fn eval(&self, x: C) -> C {
        // Horner on the polynomial part, then the monomial shift.
        let mut acc = C::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc * x.powi(self.lo)
    }
}
