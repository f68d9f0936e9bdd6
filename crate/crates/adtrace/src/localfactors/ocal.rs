//! Nonarchimedean closed-form building blocks: O_0, O_1, the resolvent
//! factor S, its contour-integrated form S-hat, and the Upsilon factor of
//! the test-function mode. All evaluations go through rearranged Laurent
//! polynomials in s = q^{z/4}, so the removable singularities at q^{z/2} = 1
//! never appear.

use super::laurent::Laurent;
use super::SymLaurentPoly;
use crate::qfield::LocalDeltaForm;
use crate::{cr, Error, Result, C};

/// eps in {+1, -1, 0} for split / inert / ramified.
fn eps_of(form: &LocalDeltaForm) -> f64 {
    form.eps_unramified_value() as f64
}

/// Geometric block S(m) = (1 - X^{2m})/(1 - X^2) as a Laurent polynomial in
/// X (used with X = s^2 below, expressed directly in s-powers).
fn geometric_s4(m: i32) -> Laurent {
    // sum_{j=0}^{m-1} s^{4j} for m >= 0; -s^{4m} * S(-m) for m < 0
    if m >= 0 {
        let mut coeffs = vec![C::new(0.0, 0.0); if m == 0 { 0 } else { (4 * (m - 1) + 1) as usize }];
        for j in 0..m {
            coeffs[(4 * j) as usize] = cr(1.0);
        }
        Laurent { lo: 0, coeffs }
    } else {
        let pos = geometric_s4(-m);
        Laurent { lo: pos.lo + 4 * m, coeffs: pos.coeffs.iter().map(|&c| -c).collect() }
    }
}

/// O_{v,0}^{delta,(z)}(a) for |a|_v = q^{-e}: the two-term closed form,
/// evaluated through the polynomial rearrangement
///   q^{-e/4} [ s^e S((2-e)/2) - eps q^{-1/2} s^{e+2} S(-e/2) ] / (1 + s^2)
/// valid for e even; for e odd the (1+s^2) pole is genuine and the division
/// below keeps exactly the removable factor (1 - s^2).
pub fn ocal0(form: &LocalDeltaForm, z: C, e: i32) -> Result<C> {
    let q = form.p as f64;
    let eps = eps_of(form);
    let s = (cr(q.ln()) * z / 4.0).exp();
    // N(s) = (s^e - s^{4-e}) - eps q^{-1/2} (s^{e+2} - s^{2-e})
    let n = Laurent::monomial(cr(1.0), e)
        .add(&Laurent::monomial(cr(-1.0), 4 - e))
        .add(&Laurent::monomial(cr(-eps * q.powf(-0.5)), e + 2))
        .add(&Laurent::monomial(cr(eps * q.powf(-0.5)), 2 - e));
    let quot = n.div_exact(&[cr(1.0), cr(0.0), cr(-1.0)]); // divide by 1 - s^2
    let denom = cr(1.0) + s * s;
    if denom.norm() < 1e-12 {
        return Err(Error::Pole { what: "ocal0 at q^{z/2} = -1", s: z });
    }
    Ok(cr(q.powf(-(e as f64) / 4.0)) * quot.eval(s) / denom)
}

/// O_{v,1}^{delta,(z)}(a): the level-place variant carrying the factor
/// (1 + q^{(±z+1)/2})/(1 + q) in each term.
pub fn ocal1(form: &LocalDeltaForm, z: C, e: i32) -> Result<C> {
    let q = form.p as f64;
    let eps = eps_of(form);
    let s = (cr(q.ln()) * z / 4.0).exp();
    let beta = q.powf(0.5) - eps * q.powf(-0.5);
    // N1(s) = (s^e - s^{4-e}) + beta (s^{e+2} - s^{2-e}) + eps (s^{-e} - s^{4+e})
    let n = Laurent::monomial(cr(1.0), e)
        .add(&Laurent::monomial(cr(-1.0), 4 - e))
        .add(&Laurent::monomial(cr(beta), e + 2))
        .add(&Laurent::monomial(cr(-beta), 2 - e))
        .add(&Laurent::monomial(cr(eps), -e))
        .add(&Laurent::monomial(cr(-eps), 4 + e));
    let quot = n.div_exact(&[cr(1.0), cr(0.0), cr(-1.0)]);
    let denom = (cr(1.0) + s * s) * (1.0 + q);
    if denom.norm() < 1e-12 {
        return Err(Error::Pole { what: "ocal1 at q^{z/2} = -1", s: z });
    }
    Ok(cr(q.powf(-(e as f64) / 4.0)) * quot.eval(s) / denom)
}

/// S_v^{delta,(z)}(sigma; a), |a|_v = q^{-e}. Validity strip
/// Re sigma > (|Re z| - 1)/2.
pub fn scal(form: &LocalDeltaForm, z: C, sigma: C, e: i32) -> Result<C> {
    let q = form.p as f64;
    if sigma.re <= (z.re.abs() - 1.0) / 2.0 {
        return Err(Error::StripViolation("scal requires Re s > (|Re z| - 1)/2"));
    }
    let eps = eps_of(form);
    let lq = q.ln();
    let s = (cr(lq) * z / 4.0).exp();
    let pref = -(cr(-lq) * (sigma + 1.0) / 2.0).exp(); // -q^{-(sigma+1)/2}
    let a_big = (cr(-lq) * (sigma + 0.5)).exp(); // A = q^{-(sigma + 1/2)}
    if e >= 0 {
        // single-term branch
        let z1 = cr(1.0) - (cr(-lq) * (sigma + (z + 1.0) / 2.0)).exp();
        let z2 = cr(1.0) - (cr(-lq) * (sigma + (cr(1.0) - z) / 2.0)).exp();
        let lfac = cr(1.0) - eps * (cr(-lq) * (sigma + 1.0)).exp();
        let apow = (cr(-lq) * (sigma + 1.0) / 2.0 * e as f64).exp();
        Ok(pref * lfac / (z1 * z2) * apow)
    } else {
        // two-term branch |a| > 1, rearranged in s to cancel the removable
        // q^{z/2} = 1 singularity
        let eqh = cr(eps * q.powf(-0.5));
        // P(s) = (1 - eps q^{-1/2} s^2)(1 - A s^2) s^e
        //      - s^4 (1 - eps q^{-1/2} s^{-2})(1 - A s^{-2}) s^{-e}
        let t1 = Laurent::monomial(cr(1.0), 0)
            .add(&Laurent::monomial(-eqh, 2))
            .mul(&Laurent::monomial(cr(1.0), 0).add(&Laurent::monomial(-a_big, 2)))
            .mul(&Laurent::monomial(cr(1.0), e));
        let t2 = Laurent::monomial(cr(1.0), 0)
            .add(&Laurent::monomial(-eqh, -2))
            .mul(&Laurent::monomial(cr(1.0), 0).add(&Laurent::monomial(-a_big, -2)))
            .mul(&Laurent::monomial(cr(-1.0), 4 - e));
        let p = t1.add(&t2);
        let quot = p.div_exact(&[cr(1.0), cr(0.0), cr(-1.0)]);
        let s2 = s * s;
        let denom = (cr(1.0) + s2)
            * (cr(1.0) - a_big / s2)
            * (cr(1.0) - a_big * s2);
        Ok(pref * cr(q.powf(-(e as f64) / 4.0)) * quot.eval(s) / denom)
    }
}

/// The contour-integrated resolvent factor
///   S-hat(alpha; a) = (1/2 pi i) int_{L(c)} S(sigma; a) alpha(sigma) dmu(sigma)
/// evaluated exactly as a residue at zeta = 0 (zeta = q^{-sigma/2}, contour
/// radius q^{-c/2} with c >> 1). The integrand is rational in zeta, so the
/// value is a finite coefficient extraction.
pub fn scal_hat(form: &LocalDeltaForm, z: C, alpha: &SymLaurentPoly, e: i32) -> Result<C> {
    let q = form.p as f64;
    let eps = eps_of(form);
    let lq = q.ln();
    let a = (cr(-lq) * (z + 1.0) / 2.0).exp(); // q^{-(z+1)/2}
    let b = (cr(lq) * (z - 1.0) / 2.0).exp(); // q^{(z-1)/2}
    let mut total = C::new(0.0, 0.0);
    for &(n, cn) in &alpha.coeffs {
        total += cn * scal_hat_sigma_n(q, eps, a, b, z, e, n as i32)?;
    }
    Ok(total)
}

fn scal_hat_sigma_n(q: f64, eps: f64, a: C, b: C, z: C, e: i32, n: i32) -> Result<C> {
    let lq = q.ln();
    if e >= 0 {
        // q^{-e/2} Res_{zeta=0} [ zeta^{e-1} (zeta^2 - 1)(1 - eps q^{-1} zeta^2)
        //                         (zeta^n + zeta^{-n}) / ((1-a zeta^2)(1-b zeta^2)) ]
        let p = Laurent::monomial(cr(1.0), e + 1)
            .add(&Laurent::monomial(cr(-1.0), e - 1))
            .mul(
                &Laurent::monomial(cr(1.0), 0).add(&Laurent::monomial(cr(-eps / q), 2)),
            )
            .mul(&Laurent::monomial(cr(1.0), n).add(&Laurent::monomial(cr(1.0), -n)));
        let res = residue_against_geom2(&p, a, b);
        Ok(cr(q.powf(-(e as f64) / 2.0)) * res)
    } else {
        // |a|_v > 1 branch: S has the two-term form; the dmu-weighted
        // integrand is  -(zeta - zeta^{-1}) [ K1/(1 - a zeta^2) + K2/(1 - b zeta^2) ]
        // with the z-dependent constants below; residue at zeta = 0 after
        // flipping orientation gives
        //   Res [ (zeta - zeta^{-1}) (zeta^n + zeta^{-n}) (K1 G_a + K2 G_b) ].
        let zeta_m_z = cr(1.0) - (cr(lq) * z).exp(); // 1/zeta_v(-z) = 1 - q^z
        let zeta_p_z = cr(1.0) - (cr(-lq) * z).exp();
        let l_m = cr(1.0) - eps * (cr(lq) * (z - 1.0) / 2.0).exp(); // 1/L((1-z)/2)
        let l_p = cr(1.0) - eps * (cr(-lq) * (z + 1.0) / 2.0).exp();
        let apow_m = cr(q.powf(-(e as f64) / 4.0)) * (cr(lq) * z * (e as f64) / 4.0).exp(); // |a|^{(1-z)/4}
        let apow_p = cr(q.powf(-(e as f64) / 4.0)) * (cr(-lq) * z * (e as f64) / 4.0).exp();
        if zeta_m_z.norm() < 1e-7 {
            return Err(Error::Pole { what: "scal_hat near q^z = 1; use the rearranged z", s: z });
        }
        let k1 = l_m / zeta_m_z * apow_m;
        let k2 = l_p / zeta_p_z * apow_p;
        let p = Laurent::monomial(cr(1.0), 1)
            .add(&Laurent::monomial(cr(-1.0), -1))
            .mul(&Laurent::monomial(cr(1.0), n).add(&Laurent::monomial(cr(1.0), -n)));
        let res = residue_against_single(&p, a).scale(k1).add(&residue_against_single(&p, b).scale(k2));
        Ok(res.eval(cr(1.0)))
    }
}

/// Res_{zeta=0} p(zeta) / ((1 - a zeta^2)(1 - b zeta^2)): coefficient of
/// zeta^{-1} of p times the double geometric series.
fn residue_against_geom2(p: &Laurent, a: C, b: C) -> C {
    let mut res = C::new(0.0, 0.0);
    // g_k = sum_{i+j=k} a^i b^j ; contributes with p's coefficient at -1-2k
    let kmax = ((-1 - p.lo) / 2).max(-1);
    let mut apow = vec![cr(1.0)];
    let mut bpow = vec![cr(1.0)];
    for k in 0..=kmax.max(0) as usize {
        apow.push(apow[k] * a);
        bpow.push(bpow[k] * b);
    }
    for k in 0..=kmax {
        if k < 0 {
            continue;
        }
        let c = p.coeff(-1 - 2 * k);
        if c.norm() == 0.0 {
            continue;
        }
        let mut g = C::new(0.0, 0.0);
        for i in 0..=k {
            g += apow[i as usize] * bpow[(k - i) as usize];
        }
        res += c * g;
    }
    res
}

/// Res_{zeta=0} p(zeta)/(1 - a zeta^2), returned as a degree-0 Laurent
/// "constant" for composability.
fn residue_against_single(p: &Laurent, a: C) -> Laurent {
    let mut res = C::new(0.0, 0.0);
    let kmax = (-1 - p.lo) / 2;
    let mut apow = cr(1.0);
    for k in 0..=kmax.max(-1) {
        if k >= 0 {
            let c = p.coeff(-1 - 2 * k);
            res += c * apow;
            apow *= a;
        }
    }
    Laurent::monomial(res, 0)
}

/// Per-place Upsilon factor of the test-function mode:
///   (1/2 pi i) int_{L(c)} -q^{-(sigma+1)/2} / (1 - q^{-sigma-(z+1)/2}) alpha dmu
/// = Res_{zeta=0} (zeta - 1/zeta) alpha(zeta) / (1 - q^{-(z+1)/2} zeta^2).
pub fn upsilon_factor(q: f64, z: C, alpha: &SymLaurentPoly) -> C {
    let a = (cr(-q.ln()) * (z + 1.0) / 2.0).exp();
    let mut total = C::new(0.0, 0.0);
    for &(n, cn) in &alpha.coeffs {
        let n = n as i32;
        let p = Laurent::monomial(cr(1.0), 1)
            .add(&Laurent::monomial(cr(-1.0), -1))
            .mul(&Laurent::monomial(cr(1.0), n).add(&Laurent::monomial(cr(1.0), -n)));
        total += cn * residue_against_single(&p, a).eval(cr(1.0));
    }
    total
}

/// The resolvent pairing
///   (1/2 pi i) int_{L(c)} {q^{(1+nu)/2}+q^{(1-nu)/2}-q^{(1+sigma)/2}-q^{(1-sigma)/2}}^{-1}
///     alpha(sigma) dmu(sigma) = -alpha(nu),
/// evaluated by the same residue machinery (used to cross-check the raw-s
/// and test-function modes against each other).
pub fn resolvent_pairing(q: f64, nu: C, alpha: &SymLaurentPoly) -> C {
    // roots of zeta^2 - x zeta + 1 with x = q^{nu/2} + q^{-nu/2} are
    // q^{±nu/2}; G(zeta) = 1/((zeta - r)(zeta - 1/r)) expanded at 0.
    let r = (cr(-q.ln()) * nu / 2.0).exp(); // q^{-nu/2}
    let mut total = C::new(0.0, 0.0);
    for &(n, cn) in &alpha.coeffs {
        let n = n as i32;
        let p = Laurent::monomial(cr(1.0), 1)
            .add(&Laurent::monomial(cr(-1.0), -1))
            .mul(&Laurent::monomial(cr(1.0), n).add(&Laurent::monomial(cr(1.0), -n)));
        // G(zeta) = sum_k g_k zeta^k with g_k = (r^{k+1} - r^{-(k+1)})/(r - 1/r)
        // times 1/(r * (1/r)) bookkeeping; do it by series division instead:
        // 1/(1 - x zeta + zeta^2) = sum h_k zeta^k, h_{-1}=0, h_0=1,
        // h_{k} = x h_{k-1} - h_{k-2}.
        let x = r + r.inv();
        let kmax = -1 - p.lo;
        let mut h_prev = C::new(0.0, 0.0);
        let mut h = cr(1.0);
        let mut res = C::new(0.0, 0.0);
        for k in 0..=kmax.max(0) {
            res += p.coeff(-1 - k) * h;
            let h_next = x * h - h_prev;
            h_prev = h;
            h = h_next;
        }
        total += cn * res;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfactors::contour_quadrature;
    use crate::qfield::LocalDeltaForm;
    use crate::{c, cr};

    fn form(p: u64, delta0: i64) -> LocalDeltaForm {
        LocalDeltaForm { p, delta0, m_ord: 0 }
    }

    #[test]
    fn unit_values_exact() {
        let z = c(0.37, 0.21);
        for p in [3u64, 5, 7] {
            let q = p as f64;
            let split = form(p, 1);
            let inert = form(p, 2); // any nonsquare unit tag (eps by class)
            let ram = form(p, p as i64);
            // choose a genuinely inert tag: find nonsquare unit
            let mut u = 2i64;
            while crate::qfield::kronecker_symbol(u, p as i64) != -1 {
                u += 1;
            }
            let inert = LocalDeltaForm { p, delta0: u, ..inert };
            assert!((ocal0(&split, z, 0).unwrap() - cr(1.0)).norm() < 1e-14);
            assert!((ocal0(&inert, z, 0).unwrap() - cr(1.0)).norm() < 1e-14);
            assert!((ocal0(&ram, z, 0).unwrap() - cr(1.0)).norm() < 1e-14);
            assert!((ocal1(&split, z, 0).unwrap() - cr(2.0 / (1.0 + q))).norm() < 1e-14);
            assert!((ocal1(&ram, z, 0).unwrap() - cr(1.0 / (1.0 + q))).norm() < 1e-14);
            assert!(ocal1(&inert, z, 0).unwrap().norm() < 1e-14);
        }
    }

    /// Naive two-term evaluation, the oracle for the rearranged route away
    /// from the singular locus.
    fn ocal0_naive(form: &LocalDeltaForm, z: C, e: i32) -> C {
        let q = form.p as f64;
        let lq = q.ln();
        let eps = eps_of(form);
        let zeta = |w: C| (cr(1.0) - (cr(-lq) * w).exp()).inv();
        let lfun = |w: C| (cr(1.0) - eps * (cr(-lq) * w).exp()).inv();
        let apow = |expnt: C| (cr(-lq) * expnt * (e as f64)).exp();
        zeta(-z) / lfun((cr(1.0) - z) / 2.0) * apow((cr(1.0) - z) / 4.0)
            + zeta(z) / lfun((cr(1.0) + z) / 2.0) * apow((cr(1.0) + z) / 4.0)
    }

    #[test]
    fn rearranged_matches_naive_two_term() {
        let zs = [c(0.7, 0.3), c(-1.3, 0.8), c(2.0, -0.5)];
        for p in [3u64, 5] {
            for d0 in [1i64, 2, 3, p as i64] {
                let f = LocalDeltaForm { p, delta0: d0, m_ord: 0 };
                if f.eps_class() == crate::qfield::EpsClass::Inert
                    && crate::qfield::kronecker_symbol(d0, p as i64) != -1
                {
                    continue;
                }
                for &z in &zs {
                    for e in [-4i32, -3, -1, 0, 1, 2, 5] {
                        let a = ocal0(&f, z, e).unwrap();
                        let b = ocal0_naive(&f, z, e);
                        assert!((a - b).norm() < 1e-11 * (1.0 + b.norm()), "p={p} d0={d0} z={z} e={e}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn z_to_minus_z_symmetry() {
        let f = form(5, 2);
        let z = c(0.9, 1.1);
        for e in [-3i32, 0, 2] {
            let a = ocal0(&f, z, e).unwrap();
            let b = ocal0(&f, -z, e).unwrap();
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
            let a1 = ocal1(&f, z, e).unwrap();
            let b1 = ocal1(&f, -z, e).unwrap();
            assert!((a1 - b1).norm() < 1e-12 * (1.0 + a1.norm()));
        }
    }

    #[test]
    fn near_singularity_stability() {
        // |q^{z/2} - 1| in [1e-9, 1e-3]: values vary smoothly (the rearranged
        // form has no cancellation); check second differences are bounded.
        let f = form(3, 2);
        let q: f64 = 3.0;
        for expo in [-9.0f64, -7.0, -5.0, -3.0] {
            let delta = 10f64.powf(expo);
            // z with q^{z/2} = 1 + delta
            let z0 = 2.0 * (1.0 + delta).ln() / q.ln();
            let h = z0 * 0.1 + 1e-12;
            let vm = ocal0(&f, cr(z0 - h), -2).unwrap();
            let v0 = ocal0(&f, cr(z0), -2).unwrap();
            let vp = ocal0(&f, cr(z0 + h), -2).unwrap();
            let second = (vp - 2.0 * v0 + vm).norm();
            assert!(second < 1e-6, "rough at delta = {delta}: {second}");
            assert!(v0.re.is_finite());
        }
        // exact z = 0
        assert!(ocal0(&f, cr(0.0), -2).unwrap().re.is_finite());
    }

    #[test]
    fn ocal0_bound_of_lemma() {
        // |O_0| <= 3 |ord(a)| |a|^{(|Re z|+1)/4} for a not in O
        let mut state = 1234567u64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..300 {
            let p = [3u64, 5, 7][(rnd() * 3.0) as usize];
            let d0 = [1i64, 2, 3, p as i64][(rnd() * 4.0) as usize];
            let f = LocalDeltaForm { p, delta0: d0, m_ord: 0 };
            let z = c(4.0 * rnd() - 2.0, 4.0 * rnd() - 2.0);
            let e = -(1 + (rnd() * 6.0) as i32);
            let v = ocal0(&f, z, e).unwrap();
            let bound = 3.0 * (e.abs() as f64)
                * (p as f64).powf((-e as f64) * (z.re.abs() + 1.0) / 4.0);
            assert!(v.norm() <= bound * (1.0 + 1e-9), "p={p} z={z} e={e}: {} vs {bound}", v.norm());
        }
    }

    #[test]
    fn scal_branches_agree_at_unit() {
        // e = 0 sits in both branches; the two closed forms coincide there.
        let f = form(5, 2);
        let z = c(0.6, 0.4);
        let sigma = c(2.2, 0.7);
        let le = scal(&f, z, sigma, 0).unwrap();
        // force the two-term branch by calling with e = -0 through the
        // rearranged path: rebuild with e = -1 then move one step of the
        // functional identity is overkill; instead compare against the naive
        // |a| > 1 evaluation at e -> 0.
        let naive = {
            let q = 5.0f64;
            let lq = q.ln();
            let eps = -1.0; // 2 is a nonsquare mod 5
            let zeta = |w: C| (cr(1.0) - (cr(-lq) * w).exp()).inv();
            let lfun = |w: C| (cr(1.0) - eps * (cr(-lq) * w).exp()).inv();
            -(cr(-lq) * (sigma + 1.0) / 2.0).exp()
                * (zeta(-z) * zeta(sigma + (z + 1.0) / 2.0) / lfun((cr(1.0) - z) / 2.0)
                    + zeta(z) * zeta(sigma + (cr(1.0) - z) / 2.0) / lfun((cr(1.0) + z) / 2.0))
        };
        assert!((le - naive).norm() < 1e-11 * (1.0 + naive.norm()), "{le} vs {naive}");
    }

    #[test]
    fn scal_z_symmetry_and_strip() {
        let f = form(3, 3);
        let z = c(1.2, -0.4);
        let sigma = c(1.9, 0.3);
        for e in [-4i32, -1, 0, 2] {
            let a = scal(&f, z, sigma, e).unwrap();
            let b = scal(&f, -z, sigma, e).unwrap();
            assert!((a - b).norm() < 1e-11 * (1.0 + a.norm()), "e={e}");
        }
        assert!(matches!(
            scal(&f, cr(4.0), cr(1.0), 0),
            Err(Error::StripViolation(_))
        ));
    }

    #[test]
    fn scal_hat_vanishing_law() {
        // S-hat(sigma_n; a) = 0 for ord(a) > n
        let z = c(0.4, 0.2);
        for p in [3u64, 5, 7] {
            for d0 in [1i64, 2] {
                let f = LocalDeltaForm { p, delta0: d0, m_ord: 0 };
                for n in 0..=6u32 {
                    for e in (n as i32 + 1)..=(n as i32 + 4) {
                        let alpha = SymLaurentPoly::sigma(n);
                        let v = scal_hat(&f, z, &alpha, e).unwrap();
                        assert!(v.norm() <= 1e-12, "p={p} n={n} e={e}: {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn scal_hat_matches_contour_quadrature() {
        let z = c(0.45, 0.15);
        for p in [3u64, 5] {
            let q = p as f64;
            for d0 in [1i64, 2, 3] {
                let f = LocalDeltaForm { p, delta0: d0, m_ord: 0 };
                for n in 0..=4u32 {
                    for e in [-4i32, -2, -1, 0, 1, 2, 4] {
                        let alpha = SymLaurentPoly::sigma(n);
                        let direct = scal_hat(&f, z, &alpha, e).unwrap();
                        let c0 = 2.0; // right of the strip bound; small enough that zeta^{-n} stays tame
                        let quad = contour_quadrature(q, c0, 256, |sigma| {
                            scal(&f, z, sigma, e).unwrap() * alpha.eval_at_spectral(q, sigma)
                        });
                        assert!(
                            (direct - quad).norm() < 1e-10 * (1.0 + direct.norm()),
                            "p={p} d0={d0} n={n} e={e}: {direct} vs {quad}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn upsilon_matches_contour_quadrature() {
        let z = c(0.5, 0.2);
        for p in [3u64, 5] {
            let q = p as f64;
            for n in 0..=4u32 {
                let alpha = SymLaurentPoly::sigma(n);
                let direct = upsilon_factor(q, z, &alpha);
                let quad = contour_quadrature(q, 2.0, 256, |sigma| {
                    let lq = q.ln();
                    let num = -(cr(-lq) * (sigma + 1.0) / 2.0).exp();
                    let den = cr(1.0) - (cr(-lq) * (sigma + (z + 1.0) / 2.0)).exp();
                    num / den * alpha.eval_at_spectral(q, sigma)
                });
                assert!(
                    (direct - quad).norm() < 1e-10 * (1.0 + direct.norm()),
                    "p={p} n={n}: {direct} vs {quad}"
                );
            }
        }
    }

    #[test]
    fn resolvent_pairing_is_minus_alpha() {
        let q = 3.0f64;
        for n in 0..=5u32 {
            let alpha = SymLaurentPoly::sigma(n);
            for &nu in &[c(0.0, 0.9), c(0.0, 0.3), c(0.2, 0.5)] {
                let direct = resolvent_pairing(q, nu, &alpha);
                let want = -alpha.eval_at_spectral(q, nu);
                assert!((direct - want).norm() < 1e-10 * (1.0 + want.norm()), "n={n} nu={nu}");
                // and the quadrature route agrees
                let quad = contour_quadrature(q, 4.0, 256, |sigma| {
                    let x = |w: C| {
                        (cr(q.ln()) * (cr(1.0) + w) / 2.0).exp()
                            + (cr(q.ln()) * (cr(1.0) - w) / 2.0).exp()
                    };
                    (x(nu) - x(sigma)).inv() * alpha.eval_at_spectral(q, sigma)
                });
                assert!((quad - want).norm() < 1e-9 * (1.0 + want.norm()), "quad n={n} nu={nu}");
            }
        }
    }
}
