//! Riemann and Hurwitz zeta by Euler–Maclaurin, and the completed zeta
//! Lambda(s) = Gamma_R(s) zeta(s) (base field Q, unit discriminant).

use super::gamma_r;
use crate::{cr, Error, Result, C};

// B_2, B_4, ..., B_28.
const BERNOULLI: [f64; 14] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
];

/// Hurwitz zeta zeta(s, a) for a > 0, s != 1, by Euler–Maclaurin summation.
/// Accurate to ~1e-13 relative for |Im s| <= 60 on the ranges used here.
pub fn hurwitz_zeta(s: C, a: f64) -> Result<C> {
    if (s - cr(1.0)).norm() == 0.0 {
        return Err(Error::Pole { what: "hurwitz zeta", s });
    }
    Ok(hurwitz_zeta_reg(s, a)? + (s - 1.0).inv())
}

/// Pole-subtracted Hurwitz zeta: zeta(s, a) - 1/(s-1), entire in s. At s = 1
/// the value is -psi(a). Character sums with sum chi = 0 go through this so
/// the per-term poles never appear numerically.
pub fn hurwitz_zeta_reg(s: C, a: f64) -> Result<C> {
    if a <= 0.0 {
        return Err(Error::InvalidInput("hurwitz_zeta requires a > 0".into()));
    }
    let n = (16.0 + 0.9 * s.im.abs()).ceil() as usize + 4;
    let mut sum = C::new(0.0, 0.0);
    for k in 0..n {
        sum += (cr(k as f64 + a)).powc(-s);
    }
    let m = cr(n as f64 + a);
    // m^{1-s}/(s-1) - 1/(s-1) = -log(m) * phi((1-s) log m), phi(x) = (e^x-1)/x
    let x = (cr(1.0) - s) * m.ln();
    let phi = if x.norm() < 1e-8 { cr(1.0) + x / 2.0 } else { (x.exp() - 1.0) / x };
    sum -= m.ln() * phi;
    sum += 0.5 * m.powc(-s);
    // Euler–Maclaurin correction: sum_j B_2j/(2j)! * (s)_{2j-1} * m^{-s-2j+1}
    let mut poch = s; // (s)_1
    let mut fact = 2.0; // (2j)! at j = 1
    let mut mp = m.powc(-s - 1.0);
    let m2 = m * m;
    for (j, &b) in BERNOULLI.iter().enumerate() {
        sum += cr(b / fact) * poch * mp;
        let jj = 2.0 * (j as f64 + 1.0);
        poch *= (s + (jj - 1.0)) * (s + jj);
        fact *= (jj + 1.0) * (jj + 2.0);
        mp /= m2;
    }
    Ok(sum)
}

/// Riemann zeta.
pub fn riemann_zeta(s: C) -> Result<C> {
    hurwitz_zeta(s, 1.0)
}

/// Completed zeta Lambda(s) = Gamma_R(s) zeta(s); functional equation
/// Lambda(s) = Lambda(1-s); simple poles at s = 0 and s = 1.
pub fn completed_zeta(s: C) -> Result<C> {
    if (s - cr(1.0)).norm() < 1e-300 || s.norm() < 1e-300 {
        return Err(Error::Pole { what: "completed zeta", s });
    }
    // Gamma_R has poles at nonpositive even integers that cancel trivial
    // zeros of zeta; evaluate on the reflected side there.
    if s.im == 0.0 && s.re < 0.0 && (s.re / 2.0).fract() == 0.0 {
        return completed_zeta(cr(1.0) - s);
    }
    Ok(gamma_r(s)? * riemann_zeta(s)?)
}
