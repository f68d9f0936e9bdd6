//! Associated Legendre function of the first kind, principal branch on the
//! plane cut along (-inf, +1].

use super::hyp2f1::gauss_2f1_eps;
use super::{cgamma, lcgamma};
use crate::{cr, Error, Result, C};

/// P_nu^mu(x) for integer mu <= 0, x off the cut (-inf, +1], via the
/// hypergeometric reduction
///
///   P_nu^mu(x) = ((x+1)/(x-1))^{mu/2} / Gamma(1-mu) * 2F1(-nu, nu+1; 1-mu; (1-x)/2)
///
/// with principal powers. Purely imaginary x (both signs) is inside the
/// domain and uses the same code path.
pub fn legendre_p(mu: i32, nu: C, x: C) -> Result<C> {
    if mu > 0 {
        return Err(Error::InvalidInput("legendre_p requires mu <= 0".into()));
    }
    if x.im == 0.0 && x.re <= 1.0 {
        return Err(Error::OnCutArgument);
    }
    let one_minus_mu = cr(1.0 - mu as f64);
    let w = (cr(1.0) - x) / 2.0;
    let pre = ((x + 1.0) / (x - 1.0)).powc(cr(mu as f64 / 2.0));
    let f = gauss_2f1_eps(-nu, nu + 1.0, one_minus_mu, w, 1e-16)?;
    // Gamma(1-mu) with 1-mu a positive integer: exact via lcgamma for large mu.
    let g = if 1 - mu <= 20 {
        cgamma(one_minus_mu)?
    } else {
        lcgamma(one_minus_mu)?.exp()
    };
    Ok(pre / g * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn degree_zero_is_one() {
        let v = legendre_p(0, cr(0.0), cr(3.0)).unwrap();
        assert!((v - cr(1.0)).norm() < 1e-14);
    }

    #[test]
    fn high_precision_reference_points() {
        // mpmath legenp(-0.3, -3, x, type=3), 25 digits.
        let v = legendre_p(-3, cr(-0.3), cr(2.0)).unwrap();
        assert!((v - cr(0.03131284028078487890791995)).norm() < 1e-14);

        let vi = legendre_p(-3, cr(-0.3), c(0.0, 0.7)).unwrap();
        let want = c(-0.1643766964689699427581805, 0.04801703576646362805343442);
        assert!((vi - want).norm() < 1e-13);

        let vmi = legendre_p(-3, cr(-0.3), c(0.0, -0.7)).unwrap();
        assert!((vmi - want.conj()).norm() < 1e-13);
    }

    #[test]
    fn sine_integral_representation_oracle() {
        // For a > 0 and lam = ((a-1)/(a+1))^2, the proof of the archimedean
        // decay estimate gives
        //   P_{(z-1)/2}^{1-l}(lam^{-1/2}) = a^{(l-1)/2} |a-1|^{(1-z)/2}
        //     / (sqrt(pi) Gamma(l - 1/2))
        //     * int_0^pi (2 sqrt(a) cos t + a + 1)^{(z+1)/2 - l} sin^{2l-2} t dt.
        let l = 4i32;
        let z = 0.4f64;
        let a = 2.0f64;
        let lam = ((a - 1.0) / (a + 1.0)).powi(2);
        let x = cr(lam.powf(-0.5));
        let nu = cr((z - 1.0) / 2.0);
        let direct = legendre_p(1 - l, nu, x).unwrap();

        // midpoint rule on a smooth periodic-like integrand; 20000 points is
        // far beyond 1e-10.
        let n = 20_000usize;
        let mut acc = 0.0f64;
        for k in 0..n {
            let t = (k as f64 + 0.5) * std::f64::consts::PI / n as f64;
            let base = 2.0 * a.sqrt() * t.cos() + a + 1.0;
            acc += base.powf((z + 1.0) / 2.0 - l as f64) * t.sin().powi(2 * l - 2);
        }
        acc *= std::f64::consts::PI / n as f64;
        let gamma_l_half = cgamma(cr(l as f64 - 0.5)).unwrap().re;
        let want = a.powf((l as f64 - 1.0) / 2.0) * (a - 1.0).abs().powf((1.0 - z) / 2.0)
            / (std::f64::consts::PI.sqrt() * gamma_l_half)
            * acc;
        assert!(
            (direct - cr(want)).norm() < 1e-10,
            "direct {direct} vs integral {want}"
        );
    }

    #[test]
    fn degree_symmetry() {
        // P_nu^mu = P_{-nu-1}^mu
        for &(nu, x) in &[(c(0.21, 0.4), cr(1.8)), (cr(-0.3), c(0.0, 1.33)), (c(-0.15, 0.0), cr(5.0))] {
            let a = legendre_p(-3, nu, x).unwrap();
            let b = legendre_p(-3, -nu - 1.0, x).unwrap();
            assert!((a - b).norm() <= 1e-11 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn on_cut_signals() {
        assert!(matches!(legendre_p(-2, cr(0.3), cr(0.5)), Err(Error::OnCutArgument)));
        assert!(matches!(legendre_p(-2, cr(0.3), cr(-3.0)), Err(Error::OnCutArgument)));
    }

    #[test]
    fn large_imaginary_argument_converges() {
        // |1-x|/2 > 1 with the Pfaff argument on the unit circle; needs the
        // polynomial-decay boundary path (c - a - b = l - 1 >= 3).
        let v = legendre_p(1 - 4, cr(-0.3), c(0.0, 3.0)).unwrap();
        // mpmath: legenp(-0.3, -3, 3i, type=3)
        let want = c(0.10597747598730822902, 0.12904179068426587283);
        assert!((v - want).norm() < 2e-9, "got {v}");
    }
}
