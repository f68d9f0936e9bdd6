//! Real Dirichlet L-functions for quadratic (Kronecker) characters, finite
//! and completed. The finite part goes through Hurwitz zeta so the completed
//! functional equation stays an independent check rather than an identity of
//! the construction.

use super::zeta::{hurwitz_zeta_reg, riemann_zeta};
use super::{cgamma, lcgamma};
use super::{gamma_r, zeta::completed_zeta};
use crate::{cr, Error, Result, C};

/// Fundamental discriminant of a quadratic field, or 1 for the trivial
/// character.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FundamentalDiscriminant(pub i64);

impl FundamentalDiscriminant {
    pub fn new(d: i64) -> Result<Self> {
        if is_fundamental_discriminant(d) {
            Ok(FundamentalDiscriminant(d))
        } else {
            Err(Error::InvalidInput(format!("{d} is not a fundamental discriminant")))
        }
    }
}

fn squarefree(mut n: i64) -> bool {
    if n == 0 {
        return false;
    }
    n = n.abs();
    let mut p = 2i64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// D = 1, or D ≡ 1 (mod 4) squarefree, or D = 4m with m ≡ 2,3 (mod 4)
/// squarefree.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    if d.rem_euclid(4) == 1 {
        return squarefree(d);
    }
    if d % 4 == 0 {
        let m = d / 4;
        let r = m.rem_euclid(4);
        return (r == 2 || r == 3) && squarefree(m);
    }
    false
}

/// Kronecker symbol (a/n) for n >= 0, fully multiplicative extension of the
/// Jacobi symbol with the standard conventions at 2, -1 and 0.
pub fn kronecker_symbol(a: i64, n: i64) -> i32 {
    let mut a = a;
    let mut n = n;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // factor out 2s from n
    while n % 2 == 0 {
        n /= 2;
        match a.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0, // a even
        }
    }
    a = a.rem_euclid(n);
    // Jacobi symbol loop
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n.rem_euclid(8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// chi_D(n) for the quadratic character attached to the fundamental
/// discriminant D.
pub fn chi_d(d: FundamentalDiscriminant, n: i64) -> i32 {
    kronecker_symbol(d.0, n)
}

/// L(s, chi_D). With `completed` the value is |D|^{s/2} Gamma_R(s + a) L(s, chi_D)
/// with a = 0 for D > 0 and a = 1 for D < 0, so the functional equation reads
/// Lambda(s) = Lambda(1-s). For D = 1 this reduces to (completed) zeta.
pub fn dirichlet_l(s: C, d: FundamentalDiscriminant, completed: bool) -> Result<C> {
    let dd = d.0;
    if dd == 1 {
        return if completed { completed_zeta(s) } else { riemann_zeta(s) };
    }
    let finite = dirichlet_l_finite(s, d)?;
    if !completed {
        return Ok(finite);
    }
    let a = if dd < 0 { 1.0 } else { 0.0 };
    // Near the trivial zeros the product Gamma_R(pole) * L(zero) is a finite
    // removable form; evaluate on the reflected side there.
    let w = (s + a) / 2.0;
    if w.im.abs() < 0.05 && w.re < 0.25 && (w.re - w.re.round()).abs() < 0.05 && w.re.round() <= 0.0
    {
        return dirichlet_l(cr(1.0) - s, d, true);
    }
    let q = (dd.abs() as f64).sqrt();
    Ok(cr(q).powc(s) * gamma_r(s + a)? * finite)
}

fn dirichlet_l_finite(s: C, d: FundamentalDiscriminant) -> Result<C> {
    if d.0.unsigned_abs() > 4000 {
        // character-sum AFE: O(sqrt|D|) terms instead of O(|D|) Hurwitz
        // evaluations; the two routes are cross-checked on an overlap band.
        return dirichlet_l_finite_afe(s, d);
    }
    dirichlet_l_finite_hurwitz(s, d)
}

pub(crate) fn dirichlet_l_finite_hurwitz(s: C, d: FundamentalDiscriminant) -> Result<C> {
    let dd = d.0;
    let m = dd.unsigned_abs() as i64;
    // L(s, chi) = |D|^{-s} sum_{r=1}^{|D|} chi(r) zeta(s, r/|D|); since
    // sum_r chi(r) = 0 the per-term poles at s = 1 cancel, so each term is
    // taken pole-subtracted and the sum is entire in s.
    let mut acc = C::new(0.0, 0.0);
    for r in 1..=m {
        let ch = chi_d(d, r);
        if ch == 0 {
            continue;
        }
        let h = hurwitz_zeta_reg(s, r as f64 / m as f64)?;
        acc += cr(ch as f64) * h;
    }
    Ok(cr(m as f64).powc(-s) * acc)
}

/// Smoothed approximate functional equation for the finite part: with
/// Lambda(s) = (|D|/pi)^{(s+a)/2} Gamma((s+a)/2) L_fin(s) entire and
/// Lambda(s) = Lambda(1-s) (real primitive character, root number +1),
///   Lambda(s) = B(s) + B(1-s),
///   B(w) = sum_m chi(m) m^{-w} (1/2 pi i) int_{(c)} G_D(w+u) m^{-u} du/u,
/// the kernel decaying once m >> sqrt(|D|).
pub(crate) fn dirichlet_l_finite_afe(s: C, d: FundamentalDiscriminant) -> Result<C> {
    let dd = d.0;
    let a = if dd < 0 { 1.0 } else { 0.0 };
    let d_abs = dd.unsigned_abs() as f64;
    let log_gd = |w: C| -> Result<C> {
        Ok(cr((d_abs / std::f64::consts::PI).ln()) * (w + a) / 2.0 + lcgamma((w + a) / 2.0)?)
    };
    let b = |w: C| -> Result<C> {
        // kernel nodes shared over m
        let c0 = (1.0 - w.re).max(0.0) + 1.3;
        let h = 0.05f64;
        let vmax = 46.0 + w.im.abs();
        let n = (2.0 * vmax / h) as usize;
        let mut nodes = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let v = -vmax + i as f64 * h;
            let u = C::new(c0, v);
            let weight = if i == 0 || i == n { 0.5 } else { 1.0 };
            nodes.push((u, (log_gd(w + u)?).exp() / u * cr(weight * h / (2.0 * std::f64::consts::PI))));
        }
        let m_cut = (3.0 * (d_abs * (2.0 + s.im.abs())).sqrt()).ceil() as i64 + 60;
        let mut acc = C::new(0.0, 0.0);
        for m in 1..=m_cut {
            let ch = chi_d(d, m);
            if ch == 0 {
                continue;
            }
            let lm = (m as f64).ln();
            let mut v = C::new(0.0, 0.0);
            for &(u, g) in &nodes {
                v += g * (-u * lm).exp();
            }
            acc += cr(ch as f64) * cr(m as f64).powc(-w) * v;
        }
        Ok(acc)
    };
    let lambda = b(s)? + b(cr(1.0) - s)?;
    Ok(lambda / (cr(d_abs / std::f64::consts::PI).powc((s + a) / 2.0) * cgamma((s + a) / 2.0)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use std::f64::consts::PI;

    fn fd(d: i64) -> FundamentalDiscriminant {
        FundamentalDiscriminant::new(d).unwrap()
    }

    #[test]
    fn kronecker_basics() {
        assert_eq!(kronecker_symbol(5, 11), 1); // 4^2 = 16 = 5 mod 11
        assert_eq!(kronecker_symbol(22, 11), 0); // ramified
        assert_eq!(kronecker_symbol(1, 7), 1);
        assert_eq!(kronecker_symbol(-4, 3), -1);
        assert_eq!(kronecker_symbol(-4, 5), 1);
        assert_eq!(kronecker_symbol(5, 2), -1); // 5 = 5 mod 8
        assert_eq!(kronecker_symbol(17, 2), 1); // 17 = 1 mod 8
        assert_eq!(kronecker_symbol(12, 2), 0);
    }

    #[test]
    fn fundamental_discriminant_classification() {
        for d in [1, 5, -3, -4, 8, -8, 12, 13, -20, 21] {
            assert!(is_fundamental_discriminant(d), "{d}");
        }
        for d in [0, 2, 3, -5, 4, 9, 20, -12, 25] {
            assert!(!is_fundamental_discriminant(d), "{d}");
        }
    }

    #[test]
    fn trivial_character_reduces_to_zeta() {
        let s = c(1.3, 0.7);
        let a = dirichlet_l(s, fd(1), false).unwrap();
        let b = riemann_zeta(s).unwrap();
        assert!((a - b).norm() < 1e-14);
        let ac = dirichlet_l(s, fd(1), true).unwrap();
        let bc = completed_zeta(s).unwrap();
        assert!((ac - bc).norm() < 1e-14);
    }

    #[test]
    fn leibniz_value() {
        // L(1, chi_{-4}) = pi/4, checked against the alternating series oracle.
        let v = dirichlet_l(cr(1.0), fd(-4), false).unwrap();
        assert!((v - cr(PI / 4.0)).norm() < 1e-12);
        let mut alt = 0.0f64;
        // Pair consecutive terms for an O(N^-2) alternating-series oracle.
        let n_max = 200_000u64;
        let mut k = 0u64;
        while 4 * k + 3 <= n_max {
            alt += 1.0 / (4 * k + 1) as f64 - 1.0 / (4 * k + 3) as f64;
            k += 1;
        }
        assert!((v.re - alt).abs() < 1e-5);
    }

    #[test]
    fn mpmath_reference_point() {
        // L(2, chi_5) = 0.7062114032597409699310032 (mpmath Hurwitz + direct
        // series to 25 digits)
        let v = dirichlet_l(cr(2.0), fd(5), false).unwrap();
        assert!((v - cr(0.7062114032597409699310032)).norm() < 1e-13);
    }

    #[test]
    fn completed_functional_equation_spotcheck() {
        let s = c(0.3, 2.0);
        for d in [5, -4, -3, 8, 12, -23, 97] {
            let a = dirichlet_l(s, fd(d), true).unwrap();
            let b = dirichlet_l(cr(1.0) - s, fd(d), true).unwrap();
            assert!((a - b).norm() / a.norm().max(1e-30) < 1e-9, "D = {d}: {a} vs {b}");
        }
    }

    #[test]
    fn functional_equation_discriminant_sweep() {
        // |D| <= 200, s on a small grid in the critical strip.
        let grid = [c(0.25, 0.0), c(0.5, 1.5), c(0.8, -3.0)];
        for d in -200i64..=200 {
            if !is_fundamental_discriminant(d) || d == 1 {
                continue;
            }
            let d = fd(d);
            for &s in &grid {
                let a = dirichlet_l(s, d, true).unwrap();
                let b = dirichlet_l(cr(1.0) - s, d, true).unwrap();
                let denom = a.norm().max(b.norm()).max(1e-30);
                assert!((a - b).norm() / denom < 1e-9, "D = {:?}, s = {s}", d);
            }
        }
    }

    #[test]
    fn class_number_formula_oracle() {
        // Finite closed forms independent of the Hurwitz route:
        //   D < 0: L(1, chi_D) = -pi |D|^{-3/2} sum_{r=1}^{|D|-1} chi(r) r
        //   D > 0: L(1, chi_D) = -D^{-1/2} sum_{r=1}^{D-1} chi(r) log sin(pi r / D)
        for d in -100i64..=100 {
            if !is_fundamental_discriminant(d) || d == 1 {
                continue;
            }
            let fdd = fd(d);
            let v = dirichlet_l(cr(1.0), fdd, false).unwrap().re;
            let want = if d < 0 {
                let m = (-d) as u64;
                let mut s = 0.0f64;
                for r in 1..m {
                    s += chi_d(fdd, r as i64) as f64 * r as f64;
                }
                -PI * (m as f64).powf(-1.5) * s
            } else {
                let m = d as u64;
                let mut s = 0.0f64;
                for r in 1..m {
                    s += chi_d(fdd, r as i64) as f64 * (PI * r as f64 / m as f64).sin().ln();
                }
                -s / (m as f64).sqrt()
            };
            assert!((v - want).abs() < 1e-8, "D = {d}: {v} vs {want}");
        }
    }

    #[test]
    fn afe_route_matches_hurwitz_route() {
        // overlap band: both routes valid, independent machinery
        for d in [1009i64, -1004, 2021, -2531, 3992] {
            if !is_fundamental_discriminant(d) {
                continue;
            }
            let fdd = fd(d);
            for &s in &[cr(0.75), c(0.5, 1.2), cr(1.0), cr(2.0)] {
                let a = super::dirichlet_l_finite_hurwitz(s, fdd).unwrap();
                let b = super::dirichlet_l_finite_afe(s, fdd).unwrap();
                assert!(
                    (a - b).norm() < 1e-9 * (1.0 + a.norm()),
                    "D={d} s={s}: hurwitz {a} afe {b}"
                );
            }
        }
    }

    #[test]
    fn conductor_iff_ramified() {
        for d in [-4, 5, 8, -23, 60] {
            let fdd = fd(d);
            for p in [2i64, 3, 5, 7, 11, 13] {
                let ram = d % p == 0;
                assert_eq!(chi_d(fdd, p) == 0, ram, "D = {d}, p = {p}");
            }
        }
    }
}
