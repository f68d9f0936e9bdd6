//! Period of the Eisenstein series along the elliptic torus of a class:
//! the closed product formula (Hecke's evaluation) and the independent
//! place-by-place assembly used as its oracle.

use crate::qfield::{local_delta_decomposition, EllipticClassRep};
use crate::specfun::{completed_zeta, dirichlet_l, gamma_r, FundamentalDiscriminant};
use crate::{cr, Error, Result, C};

/// Gamma-completed Dirichlet L (no conductor power): Gamma_R(s + a) L_fin.
pub fn gamma_completed_l(s: C, d: i64) -> Result<C> {
    let fd = FundamentalDiscriminant::new(d)?;
    if d == 1 {
        return completed_zeta(s);
    }
    let a = if d < 0 { 1.0 } else { 0.0 };
    Ok(gamma_r(s + a)? * dirichlet_l(s, fd, false)?)
}

/// E^Delta(z; 1) by the closed product formula: powers of |m_v|, the dyadic
/// and split |2|-corrections, the discriminant power and the zeta/L ratio.
/// Pole signal at z = ±1 (the completed zeta factors).
pub fn eis_period(rep: &EllipticClassRep, z: C) -> Result<C> {
    if (z - cr(1.0)).norm() < 1e-12 || (z + cr(1.0)).norm() < 1e-12 {
        return Err(Error::Pole { what: "eisenstein period", s: z });
    }
    let delta = rep.delta as f64;
    // prod over all places of |m_v|^{-1}: finite part from the local
    // decompositions, archimedean |m| = sqrt(|Delta|)/2.
    let mut inv_m: f64 = 2.0 / delta.abs().sqrt();
    let mut split2_corr = cr(1.0);
    let mut dyadic5 = cr(1.0);
    let mut primes = rep.support_primes();
    if !primes.contains(&2) {
        primes.push(2);
    }
    for &p in &primes {
        let form = local_delta_decomposition(rep.t, rep.n, p)?;
        inv_m *= (p as f64).powi(form.m_ord);
        if p == 2 {
            if form.delta0 == 1 {
                split2_corr = cr(2.0);
            }
            if form.delta0 == 5 {
                let l2 = 2.0f64.ln();
                dyadic5 = cr(1.0 / 3.0)
                    * (cr(l2) * ((z + 1.0) / 2.0 + 1.0)).exp()
                    * (cr(1.0) + (cr(-l2) * z).exp());
            }
        }
    }
    // archimedean split (Delta > 0) carries |2|_inf^{-1} = 1/2; Delta < 0
    // carries the factor 1/2 of the compact torus.
    let arch_corr = 0.5;
    let disc_pow = cr(rep.d_delta.unsigned_abs() as f64).powc((z + 1.0) / 4.0);
    let lratio = completed_zeta((z + 1.0) / 2.0)? * gamma_completed_l((z + 1.0) / 2.0, rep.d_delta)?
        / completed_zeta(z + 1.0)?;
    Ok(cr(inv_m) * split2_corr * cr(arch_corr) * disc_pow * lratio * dyadic5)
}

/// Place-by-place assembly of the same period (the oracle route):
/// prod_v Y_v(z) with
///   Y_v = |m_v|^{-1} |Delta_v^0 m_v|_v^{-(z+1)/2} zeta_{E_v}/zeta_{F_v}
/// grouped into global L-values times finitely many corrections.
pub fn eis_period_assembly(rep: &EllipticClassRep, z: C) -> Result<C> {
    let delta = rep.delta as f64;
    let mut primes = rep.support_primes();
    if !primes.contains(&2) {
        primes.push(2);
        primes.sort_unstable();
    }
    // global zeta_E((z+1)/2)/zeta_F(z+1) = zeta((z+1)/2) L((z+1)/2, chi_d) / zeta(z+1)
    let mut total = completed_zeta((z + 1.0) / 2.0)?
        * gamma_completed_l((z + 1.0) / 2.0, rep.d_delta)?
        / completed_zeta(z + 1.0)?;
    // finite places: |m_v|^{-1} |delta0 m_v|_v^{-(z+1)/2}
    // = q^{m_ord} * q^{(m_ord + ord delta0)(z+1)/2}
    for &p in &primes {
        let form = local_delta_decomposition(rep.t, rep.n, p)?;
        let q = p as f64;
        let ord_d0 = if form.is_uniformizer_class() { 1 } else { 0 };
        total *= cr(q.powi(form.m_ord));
        total *= (cr(q.ln()) * ((form.m_ord + ord_d0) as f64) * (z + 1.0) / 2.0).exp();
        if form.delta0 == 1 && p == 2 {
            // split dyadic place: extra |2|_2^{(z-1)/2}
            total *= (cr(-2.0f64.ln()) * (z - 1.0) / 2.0).exp();
        }
        if p == 2 && form.delta0 == 5 {
            total *= cr(2.0 / 3.0) * (cr(1.0) + (cr(-2.0f64.ln()) * z).exp());
        }
    }
    // archimedean: |m| = sqrt|Delta|/2; Y_inf = |m|^{-1} |m|^{-(z+1)/2} 2^{(z-1)/2}
    let m_inf = delta.abs().sqrt() / 2.0;
    total *= cr(m_inf).powc(-(z + 1.0) / 2.0 - 1.0);
    total *= cr(2.0f64).powc((z - 1.0) / 2.0);
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn closed_matches_assembly_sweep() {
        // 50 random-ish classes with |Delta| <= 500, three z values
        let zs = [cr(2.3), cr(0.3), c(1.7, 0.5)];
        let mut count = 0;
        'outer: for t in 0..12i64 {
            for n in [-11i64, -7, -3, -2, -1, 1, 2, 3, 5, 6, 9, 12, 15] {
                let delta = t * t - 4 * n;
                if delta == 0 || crate::qfield::is_square_i64(delta) || delta.abs() > 500 {
                    continue;
                }
                let rep = EllipticClassRep::new(t, n).unwrap();
                for &z in &zs {
                    let a = eis_period(&rep, z).unwrap();
                    let b = eis_period_assembly(&rep, z).unwrap();
                    assert!(
                        (a - b).norm() <= 1e-10 * (1.0 + a.norm()),
                        "(t,n)=({t},{n}) z={z}: closed {a} assembly {b}"
                    );
                }
                count += 1;
                if count >= 50 {
                    break 'outer;
                }
            }
        }
        assert!(count >= 50);
    }

    #[test]
    fn growth_bound() {
        // |(z^2-1) Lambda(z+1) E^Delta| << prod |m_v|^{-1} |d|^{(1+eps)/4 + ro(z)/4}
        let z = cr(0.4);
        let eps = 0.3;
        for &(t, n) in &[(1i64, 1i64), (3, -5), (7, 2), (5, 11)] {
            let rep = EllipticClassRep::new(t, n).unwrap();
            let e = eis_period(&rep, z).unwrap();
            let lhs = ((z * z - 1.0) * completed_zeta(z + 1.0).unwrap() * e).norm();
            let mut inv_m = 2.0 / (rep.delta.abs() as f64).sqrt();
            let mut primes = rep.support_primes();
            if !primes.contains(&2) {
                primes.push(2);
            }
            for &p in &primes {
                let form = local_delta_decomposition(t, n, p).unwrap();
                inv_m *= (p as f64).powi(form.m_ord);
            }
            let ro = z.re.abs().max(1.0);
            let rhs = inv_m * (rep.d_delta.unsigned_abs() as f64).powf((1.0 + eps) / 4.0 + ro / 4.0);
            // generous explicit constant
            assert!(lhs <= 40.0 * rhs, "(t,n)=({t},{n}): {lhs} vs {rhs}");
        }
    }

    #[test]
    fn pole_signal_at_unit_z() {
        let rep = EllipticClassRep::new(1, 1).unwrap();
        assert!(eis_period(&rep, cr(1.0)).is_err());
    }
}
