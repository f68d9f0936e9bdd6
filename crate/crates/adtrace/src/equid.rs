//! Satake-parameter equidistribution machinery: empirical spectral measures,
//! the interpolating limit measures on [-2, 2], the limit constants, and the
//! convergence report.

use crate::localfactors::sigma_n_at_x;
use crate::qfield::prime_factors;
use crate::specfun::{cgamma, riemann_zeta};
use crate::specside::{oldform_weight, satake, sym2_l_value, NewformData};
use crate::{cr, Error, Result};
use std::f64::consts::PI;

/// Polynomial test function on [-2, 2]^S, stored per coordinate on the
/// sigma_n basis (a product of one-variable polynomials).
#[derive(Debug, Clone)]
pub struct MomentPoly {
    /// per S-prime: coefficients c_n of sum_n c_n sigma_n(x)
    pub per_prime: Vec<Vec<f64>>,
}

impl MomentPoly {
    /// the constant function 1 (sigma_0/2 in every coordinate)
    pub fn constant_one(s_len: usize) -> Self {
        MomentPoly { per_prime: vec![vec![0.5]; s_len] }
    }

    pub fn eval(&self, xs: &[f64]) -> f64 {
        self.per_prime
            .iter()
            .zip(xs)
            .map(|(cs, &x)| {
                cs.iter().enumerate().map(|(n, c)| c * sigma_n_at_x(n as u32, x)).sum::<f64>()
            })
            .product()
    }
}

/// One row of the convergence table.
#[derive(Debug, Clone)]
pub struct MeasureMoment {
    pub level: u64,
    pub z: f64,
    pub empirical: f64,
    pub limit: f64,
    pub discrepancy: f64,
    pub forms_used: usize,
}

/// <lambda_p^{(z)}, f> by Gauss–Chebyshev quadrature of the density
/// (1 + q^{(z+1)/2})/pi * sqrt(1 - x^2/4) / ((q^{(1+z)/4} + q^{-(1+z)/4})^2 - x^2).
pub fn lambda_limit_moment(z: f64, f: impl Fn(f64) -> f64, p: u64) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::InvalidInput("lambda moment needs z in [0, 1]".into()));
    }
    let q = p as f64;
    let a2 = (q.powf((1.0 + z) / 4.0) + q.powf(-(1.0 + z) / 4.0)).powi(2);
    let pref = (1.0 + q.powf((z + 1.0) / 2.0)) / PI;
    let n = 4000usize;
    let mut acc = 0.0;
    for k in 1..=n {
        let theta = k as f64 * PI / (n as f64 + 1.0);
        let w = PI / (n as f64 + 1.0) * theta.sin() * theta.sin();
        let x = 2.0 * theta.cos();
        acc += w * 2.0 * f(x) / (a2 - x * x);
    }
    Ok(pref * acc)
}

/// Closed sigma_n moments of lambda_p^{(z)} via the Poisson-kernel
/// expansion: with r = q^{-(1+z)/4} and A = r + 1/r,
///   <lambda, sigma_n> = (pref/A)(1 + (-1)^n) (2r/(1-r^2)) pi
///                       [r^n/2 - (r^{n+2} + r^{|n-2|})/4].
/// Independent of the quadrature route.
pub fn lambda_moment_sigma_closed(z: f64, n: u32, p: u64) -> f64 {
    let q = p as f64;
    let r = q.powf(-(1.0 + z) / 4.0);
    let a = r + 1.0 / r;
    let pref = (1.0 + q.powf((z + 1.0) / 2.0)) / PI;
    if n % 2 == 1 {
        return 0.0;
    }
    let nn = n as i32;
    let j = 2.0 * r / (1.0 - r * r)
        * PI
        * (r.powi(nn) / 2.0 - (r.powi(nn + 2) + r.powi((nn - 2).abs())) / 4.0);
    pref / a * 2.0 * j
}

/// M(n) = sum_{p | n} log p / (1 + p^{-1/2}); satisfies
/// (1/2) log n <= M(n) <= log n for squarefree n.
pub fn m_of_level(level: u64) -> f64 {
    prime_factors(level)
        .into_iter()
        .map(|p| (p as f64).ln() / (1.0 + (p as f64).powf(-0.5)))
        .sum()
}

/// The empirical measure moment <Lambda^{(z)}_{l,n}, f>.
pub fn empirical_moment(
    level: u64,
    weight: u32,
    z: f64,
    f: &MomentPoly,
    s_primes: &[u64],
    data: &[NewformData],
) -> Result<f64> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::InvalidInput("empirical moment needs z in [0, 1]".into()));
    }
    if data.is_empty() {
        return Err(Error::IncompleteData("no newform data".into()));
    }
    let zc = cr(z);
    let mut pref = 1.0f64;
    if z == 0.0 {
        let m = m_of_level(level);
        if m == 0.0 {
            return Err(Error::InvalidInput(
                "the z = 0 normalization M(n) degenerates at level 1".into(),
            ));
        }
        pref /= m;
    }
    for p in prime_factors(level) {
        let q = p as f64;
        pref *= q.powf((z - 1.0) / 2.0) / (1.0 + q.powf((z + 1.0) / 2.0));
    }
    let mut acc = 0.0f64;
    for form in data {
        form.validate()?;
        let w = oldform_weight(form, level, zc)?;
        let num = sym2_l_value(form, (zc + 1.0) / 2.0)?;
        let den = sym2_l_value(form, cr(1.0))?;
        let xs: Vec<f64> = s_primes
            .iter()
            .map(|&p| satake(form, p).map(|s| s.x))
            .collect::<Result<Vec<_>>>()?;
        acc += (w * num / den).re * f.eval(&xs);
    }
    Ok(pref * acc)
}

/// C_l^{(z)} and r(z) over Q:
///   C = 2 {2^{(1-z)/2} pi^{-(3z+1)/4} Gamma((z+3)/4)} Gamma(l + (z-1)/2) /
///       (4 pi Gamma(l-1)),
///   r(z) = zeta_fin(z+1) for z > 0, r(0) = Res_{s=1} zeta_fin(s) = 1.
/// The r convention is genuinely discontinuous at 0 and is kept verbatim.
pub fn limit_constants(z: f64, weight: u32) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::InvalidInput("limit constants need z in [0, 1]".into()));
    }
    let l = weight as f64;
    let c = 2.0
        * 2.0f64.powf((1.0 - z) / 2.0)
        * PI.powf(-(3.0 * z + 1.0) / 4.0)
        * cgamma(cr((z + 3.0) / 4.0))?.re
        * cgamma(cr(l + (z - 1.0) / 2.0))?.re
        / (4.0 * PI * cgamma(cr(l - 1.0))?.re);
    let r = if z > 0.0 { riemann_zeta(cr(z + 1.0))?.re } else { 1.0 };
    Ok((c, r))
}

/// Per-(level, z) discrepancy rows |<Lambda, f> - r C <prod lambda, f>|.
/// Levels without data are skipped.
pub fn convergence_report(
    levels: &[u64],
    weight: u32,
    z_grid: &[f64],
    f: &MomentPoly,
    s_primes: &[u64],
    data_by_level: &dyn Fn(u64) -> Option<Vec<NewformData>>,
) -> Result<Vec<MeasureMoment>> {
    let mut rows = Vec::new();
    for &level in levels {
        let data = match data_by_level(level) {
            Some(d) => d,
            None => continue,
        };
        for &z in z_grid {
            let emp = empirical_moment(level, weight, z, f, s_primes, &data)?;
            let (c, r) = limit_constants(z, weight)?;
            let mut lim = r * c;
            for (i, &p) in s_primes.iter().enumerate() {
                let cs = f.per_prime[i].clone();
                lim *= lambda_limit_moment(
                    z,
                    |x| cs.iter().enumerate().map(|(n, cb)| cb * sigma_n_at_x(n as u32, x)).sum(),
                    p,
                )?;
            }
            rows.push(MeasureMoment {
                level,
                z,
                empirical: emp,
                limit: lim,
                discrepancy: (emp - lim).abs(),
                forms_used: data.len(),
            });
        }
    }
    Ok(rows)
}
