//! Archimedean local factors: discrete-series matrix coefficients, the
//! O^{±} orbital building blocks (Legendre closed forms), and spherical
//! functions on the split torus (finite and archimedean places).

use super::laurent::Laurent;
use crate::specfun::{cgamma, gamma_r, gauss_2f1, legendre_p};
use crate::{c, cr, Error, Result, C};
use std::f64::consts::PI;

/// Discrete-series matrix coefficient of weight l:
/// delta(det g > 0) (4 det g)^{l/2} {(a+d) - i(b-c)}^{-l}.
pub fn matcoef(l: u32, g: [[f64; 2]; 2]) -> Result<C> {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    if det == 0.0 {
        return Err(Error::SingularMatrix);
    }
    if det < 0.0 {
        return Ok(C::new(0.0, 0.0));
    }
    let w = c(g[0][0] + g[1][1], -(g[0][1] - g[1][0]));
    Ok(cr((4.0 * det).powf(l as f64 / 2.0)) * w.powi(-(l as i32)))
}

fn check_arch_strip(z: C, l: u32) -> Result<()> {
    if z.re.abs() >= 2.0 * l as f64 - 1.0 {
        return Err(Error::StripViolation("archimedean factor requires |Re z| < 2l - 1"));
    }
    Ok(())
}

/// 1/Gamma_R(s) with the entire-function semantics: 0 at the poles of
/// Gamma_R (z = ±1 of the O^+ prefactor hits these).
fn recip_gamma_r(s: C) -> Result<C> {
    if s.im == 0.0 && s.re <= 0.0 && (s.re / 2.0).fract() == 0.0 {
        return Ok(C::new(0.0, 0.0));
    }
    Ok(gamma_r(s)?.inv())
}

/// O^{+,(z)}(a): zero for |a| <= 1, otherwise the Gamma-prefactored Legendre
/// closed form. The argument |a| > 1 keeps the Legendre function off its cut.
pub fn ocal_arch_plus(z: C, l: u32, a: f64) -> Result<C> {
    check_arch_strip(z, l)?;
    if a.abs() <= 1.0 {
        return Ok(C::new(0.0, 0.0));
    }
    let pre = 2.0 * PI / cgamma(cr(l as f64))?.re
        * cgamma(cr(l as f64) + (z - 1.0) / 2.0)?
        * cgamma(cr(l as f64) + (-z - 1.0) / 2.0)?
        * recip_gamma_r((cr(1.0) + z) / 2.0)?
        * recip_gamma_r((cr(1.0) - z) / 2.0)?;
    if pre.norm() == 0.0 {
        return Ok(C::new(0.0, 0.0));
    }
    let p = legendre_p(1 - l as i32, (z - 1.0) / 2.0, cr(a.abs()))?;
    Ok(pre * (a * a - 1.0).sqrt() * p)
}

/// Gamma_R((1-z)/2) O^{+,(z)}(a): the merged form used by the hyperbolic
/// term, where the completed-zeta prefactor's pole at z = 1 cancels the
/// Gamma_R zero. Finite at z = 1.
pub fn ocal_arch_plus_merged(z: C, l: u32, a: f64) -> Result<C> {
    check_arch_strip(z, l)?;
    if a.abs() <= 1.0 {
        return Ok(C::new(0.0, 0.0));
    }
    let pre = 2.0 * PI / cgamma(cr(l as f64))?.re
        * cgamma(cr(l as f64) + (z - 1.0) / 2.0)?
        * cgamma(cr(l as f64) + (-z - 1.0) / 2.0)?
        * recip_gamma_r((cr(1.0) + z) / 2.0)?;
    let p = legendre_p(1 - l as i32, (z - 1.0) / 2.0, cr(a.abs()))?;
    Ok(pre * (a * a - 1.0).sqrt() * p)
}

/// O^{-,(z)}(a): the nonsplit-torus archimedean factor, a Legendre-function
/// jump across the imaginary axis. Even in a; at a = 0 the closed Gamma
/// value of the cut jump is used.
pub fn ocal_arch_minus(z: C, l: u32, a: f64) -> Result<C> {
    check_arch_strip(z, l)?;
    let lf = l as f64;
    if a == 0.0 {
        let sign = if (l / 2) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(cr(2f64.powi(l as i32 - 1) * sign * PI.sqrt())
            * cgamma(cr(lf / 2.0) + (z - 1.0) / 4.0)?
            * cgamma(cr(lf / 2.0) + (-z - 1.0) / 4.0)?
            / cgamma(cr(lf))?);
    }
    let pre = c(0.0, PI) / cgamma(cr(lf))?
        * cgamma(cr(lf) + (z - 1.0) / 2.0)?
        * cgamma(cr(lf) + (-z - 1.0) / 2.0)?;
    let pa = legendre_p(1 - l as i32, (z - 1.0) / 2.0, c(0.0, a))?;
    let pma = legendre_p(1 - l as i32, (z - 1.0) / 2.0, c(0.0, -a))?;
    Ok(pre * cr(a.signum() * (1.0 + a * a).sqrt()) * (pa - pma))
}

/// Spherical function phi^{(w,z)} on n(x) at a finite place, as a function of
/// e = ord(x) (the value depends on x only through |x|). Rearranged in
/// s = q^{z/4} so the removable singularities at q^z = 1 cancel exactly.
pub fn spherical_phi_finite_shell(q: f64, w: C, z: C, ord_x: i32) -> Result<C> {
    let lq = q.ln();
    let e = ord_x.min(0); // h depends on max(1, |x|)
    let s = (cr(lq) * z / 4.0).exp();
    let dd = (cr(-lq) * (w + 0.5)).exp(); // q^{-w - 1/2}
    let e0 = (cr(lq) * (w - 0.5)).exp(); // q^{w - 1/2}
    // N(s) = (1 - D s^2)(1 - E0 s^2) s^{2e} - s^4 (1 - D/s^2)(1 - E0/s^2) s^{-2e}
    let t1 = Laurent::monomial(cr(1.0), 0)
        .add(&Laurent::monomial(-dd, 2))
        .mul(&Laurent::monomial(cr(1.0), 0).add(&Laurent::monomial(-e0, 2)))
        .mul(&Laurent::monomial(cr(1.0), 2 * e));
    let t2 = Laurent::monomial(cr(1.0), 0)
        .add(&Laurent::monomial(-dd, -2))
        .mul(&Laurent::monomial(cr(1.0), 0).add(&Laurent::monomial(-e0, -2)))
        .mul(&Laurent::monomial(cr(-1.0), 4 - 2 * e));
    let n = t1.add(&t2);
    let quot = n.div_exact(&[cr(1.0), cr(0.0), cr(0.0), cr(0.0), cr(-1.0)]); // 1 - s^4
    let zeta1 = 1.0 / (1.0 - 1.0 / q);
    let pref = (cr(lq) * (w + 0.5) * e as f64).exp(); // q^{e(2w+1)/2}
    Ok(cr(zeta1) * pref * quot.eval(s))
}

/// Archimedean spherical function phi^{(w,z)} on n(x). Removable z = 0
/// singularity handled by an even-symmetric two-point stencil.
pub fn spherical_phi(w: C, z: C, x: f64) -> Result<C> {
    if z.norm() < 1e-5 {
        // phi is even and analytic in z; averaging over z0 and i z0 cancels
        // the z^2 term, leaving an O(z0^4) error.
        let z0 = 1e-3;
        let a = spherical_phi_arch_inner(w, cr(z0), x)?;
        let b = spherical_phi_arch_inner(w, c(0.0, z0), x)?;
        return Ok((a + b) / 2.0);
    }
    spherical_phi_arch_inner(w, z, x)
}

fn spherical_phi_arch_inner(w: C, z: C, x: f64) -> Result<C> {
    let a_plus = arch_a(w, z)?;
    let a_minus = arch_a(w, -z)?;
    Ok(a_plus * arch_h(w, z, x)? + a_minus * arch_h(w, -z, x)?)
}

/// A_v(w, z) at the real place: Gamma_R(1) Gamma_R(-z) /
/// (Gamma_R((-z+2w+1)/2) Gamma_R((-z-2w+1)/2)); Gamma_R(1) = 1.
fn arch_a(w: C, z: C) -> Result<C> {
    Ok(gamma_r(-z)? / (gamma_r((-z + 2.0 * w + 1.0) / 2.0)? * gamma_r((-z - 2.0 * w + 1.0) / 2.0)?))
}

fn arch_h(w: C, z: C, x: f64) -> Result<C> {
    let u = 1.0 / (1.0 + x * x);
    let f = gauss_2f1(
        (z + 2.0 * w + 1.0) / 4.0,
        (z - 2.0 * w + 1.0) / 4.0,
        (z + 2.0) / 2.0,
        cr(u),
    )?;
    Ok(cr(1.0 + x * x).powc(-(z + 2.0 * w + 1.0) / 4.0) * f)
}
