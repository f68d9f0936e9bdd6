//! Gauss hypergeometric function 2F1 on the parameter ranges used by the
//! spherical-function and Legendre evaluations: power series at the origin
//! plus the Pfaff/Euler transformations and the 1-w and 1/w connection
//! formulas, principal branches throughout.

use super::cgamma;
use crate::{cr, Error, Result, C};

const MAX_TERMS: usize = 200_000;

fn is_nonpositive_integer(s: C) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0
}

fn near_integer(s: C, eps: f64) -> bool {
    s.im.abs() < eps && (s.re - s.re.round()).abs() < eps
}

/// Plain power series at the origin; caller guarantees |w| < 1, or |w| = 1
/// with Re(c-a-b) > 1 (polynomial tail decay).
fn series(a: C, b: C, c_: C, w: C, eps: f64) -> Result<C> {
    let mut term = cr(1.0);
    let mut sum = cr(1.0);
    let mut comp = C::new(0.0, 0.0); // Kahan compensation
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c_ + nf) * (nf + 1.0)) * w;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.norm() < 0.1 * eps * sum.norm().max(1e-300) && n > 8 {
            return Ok(sum);
        }
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(Error::NonConvergentRegion(w.norm()));
        }
    }
    let kappa = (c_ - a - b).re;
    if w.norm() <= 1.0 + 1e-12 && kappa > 1.0 {
        let tail = term.norm() * (MAX_TERMS as f64) / (kappa - 1.0).max(0.5);
        if tail < eps.max(1e-12) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergentRegion(w.norm()))
}

/// Convergence quality of a candidate series: smaller is better, infinity
/// means unusable. `kappa` is Re(c - a' - b') for the candidate's upper
/// parameters (controls the |arg| = 1 boundary case).
fn quality(arg: C, kappa: f64) -> f64 {
    let r = arg.norm();
    if r < 1.0 - 1e-9 {
        r
    } else if r <= 1.0 + 1e-12 && kappa > 1.5 && (arg - cr(1.0)).norm() > 1e-9 {
        1.0
    } else {
        f64::INFINITY
    }
}

pub fn gauss_2f1(a: C, b: C, c_: C, w: C) -> Result<C> {
    gauss_2f1_eps(a, b, c_, w, 1e-15)
}

pub fn gauss_2f1_eps(a: C, b: C, c_: C, w: C, eps: f64) -> Result<C> {
    if is_nonpositive_integer(c_) {
        return Err(Error::Pole { what: "2F1 lower parameter", s: c_ });
    }
    if w.norm() == 0.0 {
        return Ok(cr(1.0));
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        // Terminating polynomial.
        return series(a, b, c_, w, eps);
    }
    // Gauss summation at w = 1 (needs Re(c-a-b) > 0).
    if (w - cr(1.0)).norm() < 1e-14 {
        if (c_ - a - b).re > 0.0 {
            return Ok((cgamma(c_)? * cgamma(c_ - a - b)?) / (cgamma(c_ - a)? * cgamma(c_ - b)?));
        }
        return Err(Error::NonConvergentRegion(1.0));
    }

    let wp = w / (w - 1.0);
    let kab = (c_ - a - b).re;
    // direct, Pfaff (two ways), Euler
    let mut cand: Vec<(f64, u8)> = vec![
        (quality(w, kab), 0),
        (quality(wp, (b - a).re), 1),
        (quality(wp, (a - b).re), 2),
        (quality(w, -kab), 3),
    ];
    // connection at 1 - w (c - a - b not an integer)
    if !near_integer(c_ - a - b, 1e-8) {
        cand.push((quality(cr(1.0) - w, 0.0) * 0.999, 4));
    }
    // connection at 1/w (a - b not an integer, -w off the negative cut)
    if !near_integer(a - b, 1e-8) && !(w.im == 0.0 && w.re > 0.0) {
        cand.push((quality(w.inv(), 0.0) * 0.999, 5));
    }
    let (q, best) = cand
        .iter()
        .cloned()
        .min_by(|x, y| x.0.partial_cmp(&y.0).unwrap())
        .unwrap();
    if q.is_infinite() {
        return Err(Error::NonConvergentRegion(w.norm()));
    }
    match best {
        0 => series(a, b, c_, w, eps),
        1 => Ok((cr(1.0) - w).powc(-a) * series(a, c_ - b, c_, wp, eps)?),
        2 => Ok((cr(1.0) - w).powc(-b) * series(c_ - a, b, c_, wp, eps)?),
        3 => Ok((cr(1.0) - w).powc(c_ - a - b) * series(c_ - a, c_ - b, c_, w, eps)?),
        4 => {
            // F = G1 * F(a,b;a+b-c+1;1-w) + G2 * (1-w)^{c-a-b} F(c-a,c-b;c-a-b+1;1-w)
            let omw = cr(1.0) - w;
            let g1 = cgamma(c_)? * cgamma(c_ - a - b)? / (cgamma(c_ - a)? * cgamma(c_ - b)?);
            let g2 = cgamma(c_)? * cgamma(a + b - c_)? / (cgamma(a)? * cgamma(b)?);
            Ok(g1 * series(a, b, a + b - c_ + 1.0, omw, eps)?
                + g2 * omw.powc(c_ - a - b) * series(c_ - a, c_ - b, c_ - a - b + 1.0, omw, eps)?)
        }
        _ => {
            // F = G1 * (-w)^{-a} F(a,1-c+a;1-b+a;1/w) + G2 * (-w)^{-b} F(b,1-c+b;1-a+b;1/w)
            let iw = w.inv();
            let g1 = cgamma(c_)? * cgamma(b - a)? / (cgamma(b)? * cgamma(c_ - a)?);
            let g2 = cgamma(c_)? * cgamma(a - b)? / (cgamma(a)? * cgamma(c_ - b)?);
            Ok(g1 * (-w).powc(-a) * series(a, cr(1.0) - c_ + a, cr(1.0) - b + a, iw, eps)?
                + g2 * (-w).powc(-b) * series(b, cr(1.0) - c_ + b, cr(1.0) - a + b, iw, eps)?)
        }
    }
}
