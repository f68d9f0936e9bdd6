//! Unipotent local factors U_v(w): the four closed forms (archimedean,
//! resolvent place, level place, generic finite place).

use crate::specfun::{cgamma, gamma_r};
use crate::{cr, Error, Result, C};
use std::f64::consts::PI;

/// Which local situation the unipotent integral sits in.
#[derive(Debug, Clone, Copy)]
pub enum UnipCase {
    /// real place of weight l
    Arch { l: u32 },
    /// place of S carrying the resolvent parameter
    SType { q: f64, sigma: C },
    /// place dividing the level
    Level { q: f64 },
    /// any other finite place
    Generic { q: f64 },
}

/// U_v(w) in each of the four cases; the local different is trivial over Q
/// so the q^{-d/2} prefactors are 1.
pub fn unip_local(w: C, case: UnipCase) -> Result<C> {
    match case {
        UnipCase::Arch { l } => {
            if !(1.0 - (l as f64) < w.re && w.re < 1.0) {
                return Err(Error::StripViolation("arch unipotent needs 1 - l < Re w < 1"));
            }
            Ok(gamma_r(cr(1.0) - w)?
                * cr(2.0f64).powc(cr(2.0) - 2.0 * w)
                * cr(PI).powc(cr(1.0) - w / 2.0)
                * cgamma(cr(l as f64) + w - 1.0)?
                / (cgamma(w / 2.0)? * cgamma(cr(l as f64))?))
        }
        UnipCase::SType { q, sigma } => {
            if !(-sigma.re < w.re && w.re < 1.0) {
                return Err(Error::StripViolation("S-type unipotent needs -Re s < Re w < 1"));
            }
            let lq = q.ln();
            Ok(-(cr(-lq) * (sigma + 1.0) / 2.0).exp()
                / ((cr(1.0) - (cr(lq) * (w - 1.0)).exp()) * (cr(1.0) - (cr(-lq) * (sigma + w)).exp())))
        }
        UnipCase::Level { q } => {
            if w.re >= 1.0 {
                return Err(Error::StripViolation("level unipotent needs Re w < 1"));
            }
            let lq = q.ln();
            let qw = (cr(lq) * w).exp();
            Ok((cr(1.0) + qw) / (cr(1.0 + q) * (cr(1.0) - qw / q)))
        }
        UnipCase::Generic { q } => {
            if w.re >= 1.0 {
                return Err(Error::StripViolation("generic unipotent needs Re w < 1"));
            }
            let lq = q.ln();
            Ok((cr(1.0) - (cr(lq) * (w - 1.0)).exp()).inv())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn closed_forms_paper_cases() {
        let w = c(0.3, 0.2);
        let q = 3.0f64;
        let lq = q.ln();
        let g = unip_local(w, UnipCase::Generic { q }).unwrap();
        assert!((g - (cr(1.0) - (cr(lq) * (w - 1.0)).exp()).inv()).norm() < 1e-14);
        let lv = unip_local(w, UnipCase::Level { q }).unwrap();
        let qw = (cr(lq) * w).exp();
        let want = (cr(1.0) + qw) / ((cr(1.0) - qw / q) * (1.0 + q));
        assert!((lv - want).norm() < 1e-14);
    }

    #[test]
    fn finite_cases_against_shell_sums() {
        // Generic: sum over |t| <= 1 shells of |t|^{1-w} d*t; Level: the
        // Bruhat-split version; SType: Green-weighted shells over all of F_v.
        let q = 5.0f64;
        let lq = q.ln();
        let w = c(0.4, -0.3);
        let shell = |j: i32, expnt: C| (cr(-lq) * expnt * j as f64).exp();
        // generic: sum_{j >= 0} q^{-j(1-w)}
        let mut acc = C::new(0.0, 0.0);
        for j in 0..2000 {
            acc += shell(j, cr(1.0) - w);
        }
        let g = unip_local(w, UnipCase::Generic { q }).unwrap();
        assert!((acc - g).norm() < 1e-12);
        // level place: vol(K0) + sum_{j >= 1} q^{-j(1-w)}
        let mut acc = cr(1.0 / (1.0 + q));
        for j in 1..2000 {
            acc += shell(j, cr(1.0) - w);
        }
        let lv = unip_local(w, UnipCase::Level { q }).unwrap();
        assert!((acc - lv).norm() < 1e-12);
        // S-type: (q^{-(s+1)/2}-q^{(s+1)/2})^{-1} sum_j max(1,|t|)^{-(s+1)} |t|^{1-w};
        // combine the exponents before exponentiating so the j -> -inf tail
        // does not evaluate as 0 * inf.
        let sigma = c(2.5, 0.6);
        let mut acc = C::new(0.0, 0.0);
        for j in -800..800 {
            let expnt = if j < 0 { cr(1.0) - w - (sigma + 1.0) } else { cr(1.0) - w };
            acc += shell(j, expnt);
        }
        acc = acc * ((cr(-lq) * (sigma + 1.0) / 2.0).exp() - (cr(lq) * (sigma + 1.0) / 2.0).exp()).inv();
        let sv = unip_local(w, UnipCase::SType { q, sigma }).unwrap();
        assert!((acc - sv).norm() < 1e-11, "{acc} vs {sv}");
    }

    #[test]
    fn arch_case_against_quadrature() {
        // U_inf(w) = int_R (1 - it/2)^{-l} |t|^{-w} dt at (l, w) = (4, 0.3)
        let l = 4u32;
        let w = cr(0.3);
        let direct = unip_local(w, UnipCase::Arch { l }).unwrap();
        // substitute t = ±e^v, integrate both half-lines by trapezoid
        // |t|^{-w} dt over both half-lines becomes e^{v(1-w)} dv at t = e^v
        let mut acc = C::new(0.0, 0.0);
        let (v0, v1, n) = (-60.0f64, 60.0f64, 240_000usize);
        let h = (v1 - v0) / n as f64;
        for k in 0..=n {
            let v = v0 + k as f64 * h;
            let t = v.exp();
            let weight = if k == 0 || k == n { 0.5 } else { 1.0 };
            let f = c(1.0, -t / 2.0).powi(-(l as i32)) + c(1.0, t / 2.0).powi(-(l as i32));
            acc += cr(weight * h * t.powf(1.0 - w.re)) * f;
        }
        assert!(
            (acc - direct).norm() < 1e-8 * (1.0 + direct.norm()),
            "quad {acc} vs closed {direct}"
        );
    }

    #[test]
    fn strip_violations() {
        assert!(unip_local(cr(1.2), UnipCase::Generic { q: 3.0 }).is_err());
        assert!(unip_local(cr(-4.0), UnipCase::Arch { l: 4 }).is_err());
        assert!(unip_local(cr(-3.0), UnipCase::SType { q: 3.0, sigma: cr(2.0) }).is_err());
    }
}
