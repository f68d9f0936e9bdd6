//! Explicit truncation certificates for the geometric-side sums. Every
//! "<<" of the convergence arguments is replaced by a computable constant;
//! the bounds are conservative but honest: dropped tails are bounded, never
//! estimated.

use crate::specfun::{cgamma, gauss_2f1, riemann_zeta};
use crate::{cr, Result, C};

/// Rigorous envelope for the merged archimedean factor
/// Gamma_R((1-z)/2) O^{+,(z)}(b), b > 1, via the termwise-absolute
/// hypergeometric bound |2F1(-nu, nu+1; l; w)| <= 2F1(|nu|, |nu|+1; l; |w|).
pub fn arch_plus_envelope(z: C, l: u32, b: f64) -> Result<f64> {
    debug_assert!(b > 1.0);
    let lf = l as f64;
    let nu_abs = ((z - 1.0) / 2.0).norm();
    let w_abs = ((b - 1.0) / 2.0).min(0.9);
    let f_abs = gauss_2f1(cr(nu_abs), cr(nu_abs + 1.0), cr(lf), cr(w_abs))?.re;
    // prefactor: 2 pi Gamma(l + (z-1)/2) Gamma(l + (-z-1)/2) /
    //            (Gamma(l) Gamma_R((1+z)/2)) ; bound by moduli
    let pref = 2.0 * std::f64::consts::PI
        * (cgamma(cr(lf) + (z - 1.0) / 2.0)?.norm())
        * (cgamma(cr(lf) + (-z - 1.0) / 2.0)?.norm())
        / (cgamma(cr(lf))?.re
            * (cr(std::f64::consts::PI).powc(-(cr(1.0) + z) / 4.0)
                * cgamma((cr(1.0) + z) / 4.0)?)
            .norm());
    // |P^{1-l}_{(z-1)/2}(b)| <= ((b+1)/(b-1))^{(1-l)/2} F_abs / Gamma(l)
    let p_bound = ((b + 1.0) / (b - 1.0)).powf((1.0 - lf) / 2.0) * f_abs / cgamma(cr(lf))?.re;
    Ok(pref * (b * b - 1.0).sqrt() * p_bound)
}

/// Rademacher-type convexity envelope for |L_fin(s, chi_d)| with conductor
/// |d|, valid on -1/2 <= Re s <= 3/2:
///   |L| <= zeta(3/2) (|d| (|s| + 2) / (2 pi))^{(3/2 - Re s)/2}.
/// For Re s > 3/2 the trivial bound zeta(Re s) applies.
pub fn dirichlet_envelope(s: C, d_abs: f64) -> Result<f64> {
    if s.re > 1.5 {
        return Ok(riemann_zeta(cr(s.re))?.re);
    }
    let z32 = riemann_zeta(cr(1.5))?.re;
    Ok(z32
        * (d_abs * (s.norm() + 2.0) / (2.0 * std::f64::consts::PI))
            .max(1.0)
            .powf((1.5 - s.re) / 2.0))
}

/// Envelope for the completed conductor-normalized character L-value
/// |d|^{Re s/2} |Gamma_R(s + a)| |L_fin|.
pub fn lambda_cond_envelope(s: C, d: i64) -> Result<f64> {
    let a = if d < 0 { 1.0 } else { 0.0 };
    let d_abs = d.unsigned_abs() as f64;
    let g = (cr(std::f64::consts::PI).powc(-(s + a) / 2.0) * cgamma((s + a) / 2.0)?).norm();
    Ok(d_abs.powf(s.re / 2.0) * g * dirichlet_envelope(s, d_abs)?)
}

/// Explicit constant for the almost-all-places product bound
/// prod_{v not in S} |O_0-type factor| <= C_fin * prod |arg|_v^{(|Re z|+1)/4 + 1/2}:
/// with eps = 1/2 the per-place inequality 3x <= A 2^{x/2} needs
/// A = max 3x 2^{-x/2} (about 3.2 at x = 3), and the finitely many primes
/// with q^{1/2} < A 2^{1/2} are collected into the constant.
pub fn almost_all_constant() -> f64 {
    let mut a_eps: f64 = 0.0;
    for x in 1..200 {
        a_eps = a_eps.max(3.0 * x as f64 * 2.0f64.powf(-(x as f64) / 2.0));
    }
    let q_thr = (a_eps * 2.0f64.sqrt()).powi(2);
    let mut c = 1.0f64;
    for p in 2..=(q_thr.ceil() as u64) {
        if crate::qfield::prime_factors(p) == vec![p] {
            c *= a_eps;
        }
    }
    // level places carry the extra 4(1+sqrt q)/(1+q) <= 2.5 absorbed by the
    // caller per level prime; the dyadic-5 correction is bounded by 3.
    c * 3.0
}

/// Geometric tail of sum_{k >= 0} r^k v0 for 0 < r < 1.
pub fn geometric_tail(v0: f64, r: f64) -> f64 {
    if r >= 1.0 {
        f64::INFINITY
    } else {
        v0 / (1.0 - r)
    }
}
