//! Arithmetic of Q and its completions: places, Kronecker symbols,
//! discriminant/conductor decompositions Delta = d f^2, the local square
//! class normal forms Delta/4 = delta0 * m^2, and enumeration of elliptic
//! class representatives.

pub mod padic;

mod classes;

pub use classes::{enumerate_elliptic_classes, prime_factors, EllipticClassRep};

pub use crate::specfun::{is_fundamental_discriminant, kronecker_symbol};
use crate::{Error, Result};

/// A completion of Q: the real place carrying an even weight, or a finite
/// place over p (residue size q = p, local different exponent d = 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Place {
    Archimedean { weight: u32 },
    Finite { p: u64 },
}

impl Place {
    pub fn arch(weight: u32) -> Result<Self> {
        if weight < 4 || weight % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "archimedean weight must be even and >= 4, got {weight}"
            )));
        }
        Ok(Place::Archimedean { weight })
    }

    pub fn finite(p: u64) -> Self {
        Place::Finite { p }
    }

    pub fn q(&self) -> Option<f64> {
        match self {
            Place::Finite { p } => Some(*p as f64),
            _ => None,
        }
    }
}

/// Behaviour of the quadratic character eps_delta at a finite place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpsClass {
    /// delta is a local square: trivial character.
    Split,
    /// delta a nonsquare unit (times a square): unramified nontrivial.
    Inert,
    /// ramified character (odd valuation classes, dyadic -1/-5/±2/±10).
    Ramified,
}

/// Local normal form Delta/4 = delta0 * m^2 at p, with delta0 an exact class
/// representative: for odd p one of {1, u, p, p*u} (u the least nonsquare
/// unit mod p); for p = 2 one of {±1, ±5, ±2, ±10}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalDeltaForm {
    pub p: u64,
    pub delta0: i64,
    /// ord_p(m); may be negative at p = 2 (odd discriminants give m = u/2).
    pub m_ord: i32,
}

impl LocalDeltaForm {
    pub fn eps_class(&self) -> EpsClass {
        let p = self.p as i64;
        if self.delta0 == 1 {
            return EpsClass::Split;
        }
        if self.p == 2 {
            match self.delta0 {
                5 => EpsClass::Inert,
                _ => EpsClass::Ramified,
            }
        } else if self.delta0 % p == 0 {
            EpsClass::Ramified
        } else {
            EpsClass::Inert
        }
    }

    /// Character value eps_delta on a uniformizer: +1 split, -1 inert,
    /// 0 ramified.
    pub fn eps_unramified_value(&self) -> i32 {
        match self.eps_class() {
            EpsClass::Split => 1,
            EpsClass::Inert => -1,
            EpsClass::Ramified => 0,
        }
    }

    /// true when ord_p(delta0) = 1.
    pub fn is_uniformizer_class(&self) -> bool {
        self.delta0 % self.p as i64 == 0
    }
}

fn least_nonsquare_unit(p: u64) -> i64 {
    debug_assert!(p % 2 == 1);
    for u in 2..p as i64 {
        if kronecker_symbol(u, p as i64) == -1 {
            return u;
        }
    }
    unreachable!("every odd p has a nonsquare unit")
}

/// Local square-class decomposition of Delta/4 at p; `ZeroDiscriminant` when
/// t^2 = 4n.
pub fn local_delta_decomposition(t: i64, n: i64, p: u64) -> Result<LocalDeltaForm> {
    let delta = (t as i128) * (t as i128) - 4 * (n as i128);
    if delta == 0 {
        return Err(Error::ZeroDiscriminant);
    }
    let e_delta = padic::ord_int(delta, p);
    let unit = delta / (p as i128).pow(e_delta as u32);
    if p == 2 {
        let e = e_delta - 2; // ord_2(Delta/4)
        let m_ord = e.div_euclid(2);
        let r = e.rem_euclid(2);
        // class of the odd unit mod 8 -> representative in {1, 5, -1, -5}
        let rep = match unit.rem_euclid(8) {
            1 => 1i64,
            3 => -5,
            5 => 5,
            7 => -1,
            _ => unreachable!(),
        };
        Ok(LocalDeltaForm { p, delta0: if r == 0 { rep } else { 2 * rep }, m_ord })
    } else {
        let m_ord = e_delta.div_euclid(2);
        let r = e_delta.rem_euclid(2);
        let sq = kronecker_symbol((unit.rem_euclid(p as i128)) as i64, p as i64) == 1;
        let u = if sq { 1 } else { least_nonsquare_unit(p) };
        Ok(LocalDeltaForm { p, delta0: if r == 0 { u } else { p as i64 * u }, m_ord })
    }
}

/// Fundamental discriminant and conductor-type generator: Delta = d * f^2
/// with d the discriminant of Q(sqrt(Delta)) and f a positive integer.
pub fn fundamental_data(t: i64, n: i64) -> Result<(i64, u64)> {
    let delta = t
        .checked_mul(t)
        .and_then(|x| x.checked_sub(4 * n))
        .ok_or_else(|| Error::InvalidInput("discriminant overflow".into()))?;
    fundamental_data_of_disc(delta)
}

/// Same, from the discriminant itself (must be 0 or 1 mod 4).
pub fn fundamental_data_of_disc(delta: i64) -> Result<(i64, u64)> {
    if delta == 0 {
        return Err(Error::ZeroDiscriminant);
    }
    if is_square_i64(delta) {
        return Err(Error::SquareDiscriminant);
    }
    debug_assert!(delta.rem_euclid(4) <= 1, "not a discriminant: {delta}");
    let (mut m, mut f) = (delta, 1u64);
    let mut p = 2i64;
    while p * p <= m.abs() {
        while m % (p * p) == 0 {
            m /= p * p;
            f *= p as u64;
        }
        p += 1;
    }
    if m.rem_euclid(4) == 1 {
        Ok((m, f))
    } else {
        // m = 2, 3 mod 4; then Delta = 0 mod 4 forces f even
        debug_assert!(f % 2 == 0);
        Ok((4 * m, f / 2))
    }
}

pub(crate) fn is_square_i64(x: i64) -> bool {
    if x < 0 {
        return false;
    }
    let r = (x as f64).sqrt().round() as i64;
    (r.max(1) - 1..=r + 1).any(|s| s * s == x)
}

/// |n / m_p^2|_p via the valuation route, returned as the exponent e with
/// value p^{-e}.
pub fn n_local_norm_direct(t: i64, n: i64, p: u64) -> Result<i32> {
    let form = local_delta_decomposition(t, n, p)?;
    Ok(padic::ord_int(n as i128, p) - 2 * form.m_ord)
}

/// |n / m_p^2|_p via the published case table (split by discriminant class
/// and dyadic subcase); exponent convention as above. Kept separate from the
/// valuation route so the two can be cross-checked.
pub fn n_local_norm(t: i64, n: i64, p: u64) -> Result<i32> {
    let delta = (t as i128) * (t as i128) - 4 * (n as i128);
    if delta == 0 {
        return Err(Error::ZeroDiscriminant);
    }
    let pi = p as i128;
    let t2 = (t as i128) * (t as i128);
    let n4 = 4 * (n as i128);
    let ord_t2 = if t == 0 { i32::MAX } else { 2 * padic::ord_int(t as i128, p) };
    let ord_4n = padic::ord_int(n4, p);
    let e_delta = padic::ord_int(delta, p);
    let t2_lt_4n = ord_t2 > ord_4n; // |t|^2 < |4n|
    let in_u = |m: u32| -> bool {
        // 4n/t^2 in U(m) = 1 + p^m O
        if t == 0 || ord_t2 != ord_4n {
            return false;
        }
        let pm = pi.pow(m + ord_4n as u32);
        (n4 - t2).rem_euclid(pm) == 0
    };
    let unit_ratio = t != 0 && ord_t2 == ord_4n;
    let ord_4n_over_delta = ord_4n - e_delta;

    let form = local_delta_decomposition(t, n, p)?;
    let e = if form.delta0 == 1 {
        // split class
        if t2_lt_4n || (unit_ratio && !in_u(1)) {
            0
        } else if ord_t2 < ord_4n {
            ord_4n - ord_t2 // |t|^{-2} |4n|
        } else {
            ord_4n_over_delta // 4n/t^2 in U(1)
        }
    } else if form.is_uniformizer_class() {
        // odd local valuation
        if t2_lt_4n {
            1
        } else if in_u(2) {
            1 + ord_4n_over_delta
        } else {
            0
        }
    } else if p != 2 {
        // nondyadic unit-nonsquare
        if in_u(1) {
            ord_4n_over_delta
        } else {
            0
        }
    } else if form.delta0 == 5 {
        // dyadic 5. In the middle regime (t odd unit ratio against n) the
        // value is |(t/2m)^2 - 5| = |4| = q^{-2}: both squares sit in 1+8Z_2
        // so the difference has exact valuation 2.
        if unit_ratio {
            ord_4n_over_delta
        } else if t != 0 && padic::ord_int(n as i128, 2) == ord_t2 {
            2
        } else {
            0
        }
    } else {
        // dyadic -1, -5: the three regimes are |t|^2 < |4n| (value 1),
        // 2n/t^2 a unit (value 1/2), 4n/t^2 a unit (value |4n/(t^2-4n)|).
        let ord_2n = padic::ord_int(2 * n as i128, 2);
        if t != 0 && ord_2n == ord_t2 {
            1
        } else if t != 0 && ord_4n == ord_t2 {
            ord_4n_over_delta
        } else {
            debug_assert!(t2_lt_4n);
            0
        }
    };
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_delta_examples() {
        let f = local_delta_decomposition(0, -1, 3).unwrap();
        assert_eq!(f.delta0, 1);
        assert_eq!(f.m_ord, 0);
        let f = local_delta_decomposition(1, 1, 3).unwrap();
        assert!(f.is_uniformizer_class());
        assert_eq!(f.eps_class(), EpsClass::Ramified);
        let f = local_delta_decomposition(0, 1, 2).unwrap();
        assert_eq!(f.delta0, -1);
        assert_eq!(f.m_ord, 0);
        assert_eq!(f.eps_class(), EpsClass::Ramified);
        // Delta = 5: odd discriminant at 2, m = 1/2 times a unit, class 5
        let f = local_delta_decomposition(1, -1, 2).unwrap();
        assert_eq!(f.delta0, 5);
        assert_eq!(f.m_ord, -1);
        assert_eq!(f.eps_class(), EpsClass::Inert);
        // Delta = -3 = 5 mod 8
        let f = local_delta_decomposition(1, 1, 2).unwrap();
        assert_eq!(f.delta0, 5);
    }

    #[test]
    fn fundamental_data_examples() {
        assert_eq!(fundamental_data_of_disc(5).unwrap(), (5, 1));
        assert_eq!(fundamental_data_of_disc(20).unwrap(), (5, 2));
        assert_eq!(fundamental_data_of_disc(-4).unwrap(), (-4, 1));
        assert_eq!(fundamental_data_of_disc(-3).unwrap(), (-3, 1));
        assert_eq!(fundamental_data_of_disc(45).unwrap(), (5, 3));
        assert_eq!(fundamental_data_of_disc(-12).unwrap(), (-3, 2));
        assert_eq!(fundamental_data_of_disc(8).unwrap(), (8, 1));
        assert!(matches!(fundamental_data(2, 1), Err(Error::ZeroDiscriminant)));
        assert!(matches!(fundamental_data(3, 2), Err(Error::SquareDiscriminant)));
    }

    #[test]
    fn fundamental_data_invariant_sweep() {
        for delta in -10_000i64..=10_000 {
            if delta == 0 || delta.rem_euclid(4) > 1 || is_square_i64(delta) {
                continue;
            }
            let (d, f) = fundamental_data_of_disc(delta).unwrap();
            assert_eq!(d * (f as i64) * (f as i64), delta, "delta = {delta}");
            assert!(is_fundamental_discriminant(d), "delta = {delta} d = {d}");
            for p in [2i64, 3, 5, 7] {
                assert_eq!(kronecker_symbol(d, p) == 0, d % p == 0);
            }
        }
    }

    #[test]
    fn n_local_norm_table_matches_direct() {
        let mut checked = 0u32;
        for t in -40i64..=40 {
            for n in -40i64..=40 {
                if n == 0 || t * t == 4 * n {
                    continue;
                }
                for p in [2u64, 3, 5, 7, 11] {
                    let a = n_local_norm(t, n, p).unwrap();
                    let b = n_local_norm_direct(t, n, p).unwrap();
                    assert_eq!(a, b, "t={t} n={n} p={p}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn n_local_norm_paper_cases() {
        // generic unit case -> exponent 0 (|n/m^2| = 1)
        assert_eq!(n_local_norm(1, 3, 5).unwrap(), 0);
        // uniformizer class with |t|^2 < |4n| -> q^{-1}
        assert_eq!(n_local_norm(0, 3, 3).unwrap(), 1);
        // split case with |t|^2 > |4n| -> |4n/t^2|
        assert_eq!(n_local_norm(1, 5, 5).unwrap(), 1);
    }

    #[test]
    fn place_validation() {
        assert!(Place::arch(12).is_ok());
        assert!(Place::arch(3).is_err());
        assert!(Place::arch(2).is_err());
    }
}
