//! The spectral side: Hecke/Satake data for newforms, old-form weights,
//! adjoint L-values and the weighted average over the cuspidal spectrum.

mod fixtures;
pub(crate) mod qexp;
mod sym2;

pub use fixtures::{load_fixture_dir, write_level1_fixture, FixtureFile};
pub use qexp::level1_eigenform;
pub use sym2::{sym2_dirichlet_coeffs, sym2_l_finite_series, sym2_l_value, sym2_l_value_scaled};

use crate::localfactors::{sigma_n_at_x, SymLaurentPoly};
use crate::{c, cr, Error, Result, C};
use serde::{Deserialize, Serialize};

/// Hecke data of a newform: level, weight, eigenvalues a_p in the classical
/// normalization (|a_p| <= 2 p^{(k-1)/2} at good p).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct NewformData {
    pub level: u64,
    pub weight: u32,
    pub label: String,
    /// (p, a_p) pairs, strictly increasing in p
    pub ap: Vec<(u64, i128)>,
    /// number of newforms of this level and weight (completeness check)
    pub expected_form_count: u32,
}

impl NewformData {
    pub fn a(&self, p: u64) -> Result<i128> {
        self.ap
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, a)| a)
            .ok_or(Error::MissingEigenvalue(p))
    }

    /// Validate the Ramanujan bound at good primes and the Atkin–Lehner
    /// magnitude |a_p| = p^{(k-2)/2} at primes dividing the (squarefree)
    /// level.
    pub fn validate(&self) -> Result<()> {
        if self.weight < 4 || self.weight % 2 != 0 {
            return Err(Error::InvalidInput(format!("weight must be even >= 4: {}", self.weight)));
        }
        for &(p, a) in &self.ap {
            let af = a as f64;
            if self.level % p == 0 {
                let want = (p as f64).powf((self.weight as f64 - 2.0) / 2.0);
                if (af.abs() - want).abs() > 1e-6 * want.max(1.0) {
                    return Err(Error::InvalidInput(format!(
                        "|a_{p}| must equal p^{{(k-2)/2}} at the ramified prime, got {a}"
                    )));
                }
            } else {
                let bound = 2.0 * (p as f64).powf((self.weight as f64 - 1.0) / 2.0);
                if af.abs() > bound * (1.0 + 1e-12) {
                    return Err(Error::InvalidInput(format!(
                        "Ramanujan bound violated at p = {p}: |{a}| > {bound}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Internally generated level-one newform of the given weight, with
/// eigenvalues up to `bound`.
pub fn level1_newform(weight: u32, bound: u64) -> Result<NewformData> {
    let coeffs = level1_eigenform(weight, bound as usize)?;
    let ap = qexp::primes_up_to(bound)
        .into_iter()
        .map(|p| (p, coeffs[p as usize]))
        .collect();
    let f = NewformData {
        level: 1,
        weight,
        label: format!("1.{weight}.a"),
        ap,
        expected_form_count: 1,
    };
    f.validate()?;
    Ok(f)
}

/// Normalized Satake datum at a good prime.
#[derive(Debug, Clone, Copy)]
pub struct SatakeDatum {
    pub p: u64,
    /// x_p = a_p / p^{(k-1)/2} in [-2, 2]
    pub x: f64,
    /// Q = x_p / (p^{1/2} + p^{-1/2}) in (-1, 1)
    pub q_ratio: f64,
    /// spectral parameter nu with q^{nu/2} + q^{-nu/2} = x_p, reduced to the
    /// fundamental domain (purely imaginary under Ramanujan)
    pub nu: C,
}

pub fn satake(f: &NewformData, p: u64) -> Result<SatakeDatum> {
    if f.level % p == 0 {
        return Err(Error::InvalidInput(format!("satake parameter needs p = {p} unramified")));
    }
    let a = f.a(p)?;
    let x = a as f64 / (p as f64).powf((f.weight as f64 - 1.0) / 2.0);
    let q_ratio = x / ((p as f64).sqrt() + 1.0 / (p as f64).sqrt());
    let nu = if x.abs() <= 2.0 {
        // q^{nu/2} = e^{i theta}, 2 cos theta = x
        let theta = (x / 2.0).acos();
        c(0.0, 2.0 * theta / (p as f64).ln())
    } else {
        cr(2.0 * ((x / 2.0) + ((x / 2.0) * (x / 2.0) - 1.0).sqrt()).ln() / (p as f64).ln())
    };
    Ok(SatakeDatum { p, x, q_ratio, nu })
}

/// Old-form multiplicity weight W^{(z)}_N(f) for a form of conductor
/// dividing N:
///   nr(N/f)^{(1-z)/2} prod_{p | N/f} {1 + (Q(I(|.|^{z/2})) - Q_p^2)/(1 - Q_p^2)}.
pub fn oldform_weight(f: &NewformData, target_level: u64, z: C) -> Result<C> {
    if target_level % f.level != 0 {
        return Err(Error::NonDivisorLevel { form: f.level, target: target_level });
    }
    let extra = target_level / f.level;
    let mut w = cr(extra as f64).powc((cr(1.0) - z) / 2.0);
    for p in crate::qfield::prime_factors(extra) {
        let sat = satake(f, p)?;
        let sq = (p as f64).sqrt();
        let lq = (p as f64).ln();
        let q_ind = ((cr(lq) * z / 2.0).exp() + (cr(-lq) * z / 2.0).exp()) / (sq + 1.0 / sq);
        let q2 = sat.q_ratio * sat.q_ratio;
        w *= cr(1.0) + (q_ind - q2) / (1.0 - q2);
    }
    Ok(w)
}

/// How the test function enters the spectral average.
#[derive(Debug, Clone)]
pub enum SpectralMode {
    /// Corollary-style: per-prime symmetric Laurent test functions.
    TestFunction { alpha: Vec<(u64, SymLaurentPoly)> },
    /// Theorem-style: raw resolvent parameters s_v (the spectral sum then
    /// carries the resolvent denominators and the C(l, n) constant is
    /// applied by the caller of the identity).
    Resolvent { s: Vec<(u64, C)> },
}

/// The normalized spectral average
///   I^0_cusp = (1/2) N^{(z-1)/2} sum_f W^{(z)}_N(f) L((z+1)/2, Ad f)/L(1, Ad f) A(f)
/// with A(f) = alpha(nu_S(f)) in test-function mode and
/// A(f) = prod_S {(q^{(1+nu)/2}+q^{(1-nu)/2}) - (q^{(1+s)/2}+q^{(1-s)/2})}^{-1}
/// in resolvent mode.
pub fn spectral_side(
    level: u64,
    weight: u32,
    mode: &SpectralMode,
    z: C,
    data: &[NewformData],
) -> Result<C> {
    validate_completeness(level, weight, data)?;
    let mut total = C::new(0.0, 0.0);
    for f in data {
        f.validate()?;
        let w = oldform_weight(f, level, z)?;
        let num = sym2_l_value(f, (z + 1.0) / 2.0)?;
        let den = sym2_l_value(f, cr(1.0))?;
        let lratio = num / den;
        let a_of_f = match mode {
            SpectralMode::TestFunction { alpha } => {
                let mut prod = cr(1.0);
                for (p, poly) in alpha {
                    let sat = satake(f, *p)?;
                    prod *= cr(poly.eval_at_satake_x(sat.x));
                }
                prod
            }
            SpectralMode::Resolvent { s } => {
                let mut prod = cr(1.0);
                for (p, sigma) in s {
                    let sat = satake(f, *p)?;
                    let lq = (*p as f64).ln();
                    let x_of = |w: C| {
                        (cr(lq) * (cr(1.0) + w) / 2.0).exp() + (cr(lq) * (cr(1.0) - w) / 2.0).exp()
                    };
                    prod *= (cr((*p as f64).sqrt() * sat.x) - x_of(*sigma)).inv();
                }
                prod
            }
        };
        total += w * lratio * a_of_f;
    }
    Ok(cr(0.5) * cr(level as f64).powc((z - 1.0) / 2.0) * total)
}

/// The spectral constant C(l, n) = (4 pi / (l - 1)) prod_{p | n} (1 + p)^{-1}.
pub fn spectral_constant(weight: u32, level: u64) -> f64 {
    let mut c0 = 4.0 * std::f64::consts::PI / (weight as f64 - 1.0);
    for p in crate::qfield::prime_factors(level) {
        c0 /= 1.0 + p as f64;
    }
    c0
}

fn validate_completeness(level: u64, weight: u32, data: &[NewformData]) -> Result<()> {
    // every form must have weight `weight` and level dividing `level`; the
    // per-conductor counts must match the expected dimensions.
    let mut divisors: Vec<u64> = (1..=level).filter(|d| level % d == 0).collect();
    divisors.sort_unstable();
    for d in divisors {
        let forms: Vec<&NewformData> = data.iter().filter(|f| f.level == d).collect();
        if forms.is_empty() {
            // dimension may genuinely be zero only if the caller says so via
            // an explicit zero-count witness; absent data is incomplete
            // unless no form of that conductor is expected. Level-one data
            // always carries its own witness.
            if d == 1 {
                return Err(Error::IncompleteData(format!(
                    "missing level-{d} forms of weight {weight}"
                )));
            }
            continue;
        }
        let expected = forms[0].expected_form_count as usize;
        if forms.len() != expected {
            return Err(Error::IncompleteData(format!(
                "level {d}: have {} forms, expected {expected}",
                forms.len()
            )));
        }
        for f in &forms {
            if f.weight != weight {
                return Err(Error::IncompleteData(format!(
                    "form {} has weight {}, expected {weight}",
                    f.label, f.weight
                )));
            }
        }
    }
    Ok(())
}

/// sigma_n evaluated at the Satake point of f at p (test helper and the
/// bridge between the two spectral modes).
pub fn sigma_at_satake(f: &NewformData, p: u64, n: u32) -> Result<f64> {
    Ok(sigma_n_at_x(n, satake(f, p)?.x))
}
