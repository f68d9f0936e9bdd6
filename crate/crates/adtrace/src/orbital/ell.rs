//! Elliptic local orbital integrals: the case-by-case closed forms (with
//! their delta-gates) and the brute-force oracles. The nonarchimedean oracle
//! evaluates the double integral of the kernel over (t, x) by exact p-adic
//! ball refinement with closed geometric tails; the archimedean oracle is
//! the y-integral of the closed x-integral (Gaussian-type kernel).

use super::hyp::{hyp_oracle_padic, FiniteKernel};
use super::padic_int::{integrate_ball, BallEval, OrdTest, PolyExpr, Rat};
use super::quad::{exp_line, QuadBudget};
use crate::localfactors::{ocal0, ocal1, ocal_arch_minus, ocal_arch_plus, scal};
use crate::qfield::padic::{inv_mod, ord_int, sqrt_mod_pk};
use crate::qfield::{local_delta_decomposition, EllipticClassRep, LocalDeltaForm};
use crate::specfun::cgamma;
use crate::{c, cr, Error, Result, C};

/// Eps factor 2^{(-z-1)/2} * 3 (1 + 2^{-z})^{-1} of the dyadic-5 case.
fn dyadic5_factor(z: C) -> C {
    let l2 = 2.0f64.ln();
    (cr(-l2) * (z + 1.0) / 2.0).exp() * 3.0 / (cr(1.0) + (cr(-l2) * z).exp())
}

/// Closed form of the elliptic local orbital integral at the finite place p,
/// for the class representative rep, with the resolvent parameter `sigma`
/// when the place lies in S and `level` marking places dividing the level.
pub fn ell_closed_finite(
    rep: &EllipticClassRep,
    p: u64,
    kernel: FiniteKernel,
    z: C,
) -> Result<C> {
    let form = local_delta_decomposition(rep.t, rep.n, p)?;
    let q = p as f64;
    let ord2 = if p == 2 { 1 } else { 0 };
    // |m_v| and |2 m_v| as powers of q
    let abs_m = q.powi(-form.m_ord);
    let abs_2m = q.powi(-(form.m_ord + ord2));
    // ord of t/(2m) (infinite for t = 0) and of n/m^2, n/(2m)^2
    let ord_t_over_2m: Option<i32> =
        if rep.t == 0 { None } else { Some(ord_int(rep.t as i128, p) - ord2 - form.m_ord) };
    let e_m = ord_int(rep.n as i128, p) - 2 * form.m_ord; // ord n/m^2
    let e_2m = e_m - 2 * ord2; // ord n/(2m)^2

    let split = form.delta0 == 1;
    let uniformizer = form.is_uniformizer_class();
    let dyadic_neg = p == 2 && (form.delta0 == -1 || form.delta0 == -5);
    let dyadic5 = p == 2 && form.delta0 == 5;

    match kernel {
        FiniteKernel::Maximal => {
            if split {
                // delta(t/2m not unit or n/4m^2 not in p) * |2m| O_0(n/4m^2)
                let gate = ord_t_over_2m != Some(0) || e_2m <= 0;
                if !gate {
                    return Ok(C::new(0.0, 0.0));
                }
                Ok(cr(abs_2m) * ocal0(&form, z, e_2m)?)
            } else if dyadic5 {
                Ok(cr(abs_2m) * dyadic5_factor(z) * ocal0(&form, z, e_2m)?)
            } else if dyadic_neg {
                let gate = ord_t_over_2m != Some(0);
                if !gate {
                    return Ok(C::new(0.0, 0.0));
                }
                Ok(cr(abs_m) * ocal0(&form, z, e_m)?)
            } else if uniformizer {
                // delta(t/2m not in p): fails for t = 0 (the integral is
                // obstructed by the odd valuation of the determinant).
                let gate = matches!(ord_t_over_2m, Some(v) if v <= 0);
                if !gate {
                    return Ok(C::new(0.0, 0.0));
                }
                Ok(cr(abs_m) * ocal0(&form, z, e_m)?)
            } else {
                // nondyadic unit-nonsquare: no gate
                Ok(cr(abs_m) * ocal0(&form, z, e_m)?)
            }
        }
        FiniteKernel::Level => {
            let gate = if split {
                ord_t_over_2m != Some(0) || e_m <= 0
            } else if uniformizer {
                e_m <= 0
            } else {
                // unramified nontrivial
                e_m < 0
            };
            if !gate {
                return Ok(C::new(0.0, 0.0));
            }
            Ok(cr(abs_m) * ocal1(&form, z, e_m)?)
        }
        FiniteKernel::Green { sigma } => Ok(cr(abs_m) * scal(&form, z, sigma, e_m)?),
    }
}

/// Closed form at the real place: 2 |m| O^{sgn(Delta)}(t / 2|m|) with
/// |m| = sqrt(|Delta|)/2.
pub fn ell_closed_arch(rep: &EllipticClassRep, l: u32, z: C) -> Result<C> {
    let delta = rep.delta as f64;
    let m_abs = delta.abs().sqrt() / 2.0;
    let a = rep.t as f64 / (2.0 * m_abs);
    let o = if delta > 0.0 {
        ocal_arch_plus(z, l, a)?
    } else {
        ocal_arch_minus(z, l, a)?
    };
    Ok(cr(2.0 * m_abs) * o)
}

/// phi_{0,v}(1_2): the Waldspurger-model normalization constant at a finite
/// place (tabulated by discriminant class; |m| = q^{-m_ord}).
fn phi0_value(form: &LocalDeltaForm, z: C) -> C {
    let q = form.p as f64;
    let lq = q.ln();
    let abs_m_inv = cr(q.powi(form.m_ord));
    if form.delta0 == 1 {
        // split case reduces to the hyperbolic setting; not used here.
        unreachable!("phi0_value is only called for nonsplit classes");
    }
    if form.p == 2 {
        match form.delta0 {
            5 => abs_m_inv * cr(2.0 / 3.0) * (cr(1.0) + (cr(-lq) * z).exp()),
            -1 | -5 => abs_m_inv * (cr(1.0) + (cr(-lq) * (z + 1.0) / 2.0).exp()),
            _ => abs_m_inv * (cr(1.0) + (cr(lq) * (z + 1.0) / 2.0).exp()),
        }
    } else if form.is_uniformizer_class() {
        abs_m_inv * (cr(1.0) + (cr(lq) * (z + 1.0) / 2.0).exp())
    } else {
        abs_m_inv
    }
}

/// The exact representative of a = t/(2 m_p) in Q_p to working precision:
/// returns (ord, unit mod p^k) with a = p^ord * unit, or None for t = 0.
/// m_p = p^{m_ord} mu with mu the Hensel square root of the unit part of
/// Delta/4 divided by the class representative.
fn a_parameter(rep: &EllipticClassRep, form: &LocalDeltaForm, prec: u32) -> Result<Option<Rat>> {
    if rep.t == 0 {
        return Ok(None);
    }
    let p = form.p;
    let pi = p as i128;
    let pk = pi.pow(prec);
    // Delta/4 = delta0 * m^2 with m = p^{m_ord} mu; the unit square is
    // u = Delta / (4 delta0 p^{2 m_ord}).
    let delta = (rep.t as i128) * (rep.t as i128) - 4 * rep.n as i128;
    let u = Rat::new(delta, 4 * form.delta0 as i128).mul(pow_rat(p, -2 * form.m_ord));
    debug_assert_eq!(u.ord(p), Some(0), "unit part must be a unit");
    let den_inv = inv_mod(unit_part_mod(u.d, p, pk), pk);
    let u_mod = (unit_part_mod(u.n, p, pk) * den_inv).rem_euclid(pk);
    let mu = sqrt_mod_pk(u_mod, p, prec)
        .ok_or_else(|| Error::InvalidInput("unit part is not a square; wrong class data".into()))?;
    // a = t / (2 p^{m_ord} mu): exact as a rational once mu is fixed mod p^prec
    let two_m = Rat::new(2 * mu, 1).mul(pow_rat(p, form.m_ord));
    Ok(Some(Rat::new(rep.t as i128, 1).mul(rat_inv(two_m)).trunc(p, prec)))
}

fn unit_part_mod(x: i128, p: u64, pk: i128) -> i128 {
    let pi = p as i128;
    let mut v = x;
    while v % pi == 0 {
        v /= pi;
    }
    v.rem_euclid(pk)
}

fn pow_rat(p: u64, e: i32) -> Rat {
    let pi = p as i128;
    if e >= 0 {
        Rat::new(pi.pow(e as u32), 1)
    } else {
        Rat::new(1, pi.pow((-e) as u32))
    }
}

fn rat_inv(r: Rat) -> Rat {
    Rat::new(r.d, r.n)
}

/// Nonarchimedean oracle for the elliptic orbital integral: evaluates
///   phi_0(1)^{-1} * iint k(M(t,x)) |t|^{(z-1)/2} d*t dx,
///   M(t,x) = [[a - tau x, (1 - tau x^2)/t], [tau t, a + tau x]],
/// as an exact shell/ball sum. Split classes reduce to the hyperbolic
/// oracle through the torus identification.
pub fn ell_oracle_padic(
    rep: &EllipticClassRep,
    p: u64,
    kernel: FiniteKernel,
    z: C,
    depth: u32,
) -> Result<C> {
    let form = local_delta_decomposition(rep.t, rep.n, p)?;
    let prec = super::padic_int::working_prec(p);
    if form.delta0 == 1 {
        // split torus: E = |2m| F(b), b = (a+1)/(a-1); all exact rationals.
        let a = split_a_parameter(rep, &form, prec)?;
        let b_num = a.add(Rat::int(1)).trunc(p, prec);
        let b_den = a.sub(Rat::int(1)).trunc(p, prec);
        let b = b_num.mul(rat_inv(b_den)).trunc(p, prec);
        let q = p as f64;
        let abs_2m = q.powi(-(form.m_ord + if p == 2 { 1 } else { 0 }));
        let f = hyp_oracle_padic(p, kernel, z, b.n, b.d, depth)?;
        return Ok(cr(abs_2m) * f);
    }
    let tau = Rat::int(form.delta0 as i128);
    let a_opt = a_parameter(rep, &form, prec)?;
    let a = a_opt.unwrap_or(Rat::int(0));
    let det = a.mul(a).sub(tau).trunc(p, prec); // a^2 - tau = n / m^2 exactly
    let raw = ell_double_integral(p, kernel, z, tau, a, det, depth)?;
    Ok(raw / phi0_value(&form, z))
}

fn split_a_parameter(rep: &EllipticClassRep, form: &LocalDeltaForm, prec: u32) -> Result<Rat> {
    // Delta/4 square: a = t/(2m) with m = p^{m_ord} mu, mu^2 = (Delta/4) p^{-2 m_ord}
    let p = form.p;
    let pi = p as i128;
    let pk = pi.pow(prec);
    let delta = (rep.t as i128) * (rep.t as i128) - 4 * rep.n as i128;
    let u = Rat::new(delta, 4).mul(pow_rat(p, -2 * form.m_ord));
    debug_assert_eq!(u.ord(p), Some(0));
    let den_inv = inv_mod(unit_part_mod(u.d, p, pk), pk);
    let u_mod = (unit_part_mod(u.n, p, pk) * den_inv).rem_euclid(pk);
    let mu = sqrt_mod_pk(u_mod, p, prec)
        .ok_or_else(|| Error::InvalidInput("split class unit part must be a square".into()))?;
    let two_m = Rat::new(2 * mu, 1).mul(pow_rat(p, form.m_ord));
    Ok(Rat::new(rep.t as i128, 1).mul(rat_inv(two_m)).trunc(p, prec))
}

/// The (t, x) double integral with k the K-projection of the local kernel.
fn ell_double_integral(
    p: u64,
    kernel: FiniteKernel,
    z: C,
    tau: Rat,
    a: Rat,
    det: Rat,
    depth: u32,
) -> Result<C> {
    let q = p as f64;
    let lq = q.ln();
    let ord_det = det.ord(p).expect("det nonzero for irreducible classes");
    let ord_tau = tau.ord(p).unwrap();
    let t_weight = |j: i32| (cr(-lq) * (z - 1.0) / 2.0 * j as f64).exp();

    match kernel {
        FiniteKernel::Maximal | FiniteKernel::Level => {
            if ord_det % 2 != 0 {
                return Ok(C::new(0.0, 0.0));
            }
            let m0 = ord_det / 2;
            let is_level = kernel == FiniteKernel::Level;
            // indicator support in t: ord(tau t) >= m0 bounds j below, and
            // ord((1 - tau x^2)/t) >= m0 with ord(1 - tau x^2) <= 2 bounds it
            // above; both boundary shells are asserted to vanish.
            let j_min = m0 - ord_tau - 1;
            let j_max = 3 - m0;
            let mut total = C::new(0.0, 0.0);
            for j in j_min..=(j_max) {
                let xint = ell_indicator_x_integral(p, is_level, tau, a, m0, j, depth)?;
                if (j == j_min || j == j_max) && xint.norm() > 1e-300 {
                    return Err(Error::InsufficientDepth {
                        depth,
                        tail: xint.norm(),
                        target: 0.0,
                    });
                }
                total += xint * t_weight(j);
            }
            Ok(total)
        }
        FiniteKernel::Green { sigma } => {
            ell_green_double_integral(p, sigma, z, tau, a, det, depth)
        }
    }
}

/// x-integral of the indicator kernel at fixed t-valuation j (the unit part
/// of t does not enter: every entry's order depends on t through |t| only).
fn ell_indicator_x_integral(
    p: u64,
    level: bool,
    tau: Rat,
    a: Rat,
    m0: i32,
    j: i32,
    depth: u32,
) -> Result<C> {
    // entries: E1 = a - tau x, E2 = a + tau x, E3 = tau t (ord = ord tau + j),
    // E4 = (1 - tau x^2)/t (ord = ord(1 - tau x^2) - j)
    let e1 = PolyExpr::affine(a, Rat::int(0).sub(tau));
    let e2 = PolyExpr::affine(a, tau);
    let g = PolyExpr { a: Rat::int(1), b: Rat::int(0), c: Rat::int(0).sub(tau) };
    let ord_tau = tau.ord(p).unwrap();
    let e3_ord = ord_tau + j;
    if e3_ord < m0 {
        return Ok(C::new(0.0, 0.0));
    }
    let e3_ok_level_slot = e3_ord >= m0 + 1; // (2,1) entry of the direct term
    let x_lo = (m0 - ord_tau - 2).min(-2);
    let q = p as f64;
    let mut f = |c0: Rat, r: i32| -> BallEval {
        let t1 = e1.test_ord_ge(p, c0, r, m0);
        let t2 = e2.test_ord_ge(p, c0, r, m0);
        // E4 >= m0  <=>  ord(1 - tau x^2) >= m0 + j
        let t4 = g.test_ord_ge(p, c0, r, m0 + j);
        if t1 == OrdTest::Fails || t2 == OrdTest::Fails || t4 == OrdTest::Fails {
            return BallEval::Const(C::new(0.0, 0.0));
        }
        if t1 == OrdTest::Unknown || t2 == OrdTest::Unknown || t4 == OrdTest::Unknown {
            return BallEval::Refine;
        }
        if !level {
            return BallEval::Const(cr(1.0));
        }
        // K_0(p): direct term needs the (2,1) entry tau t in p^{m0+1};
        // each Bruhat term (after the in-variable shift) needs
        // (1 - tau x^2)/t in p^{m0+1}, i.e. ord(1 - tau x^2) >= m0 + 1 + j,
        // and contributes q-fold.
        let mut acc = C::new(0.0, 0.0);
        if e3_ok_level_slot {
            acc += cr(1.0);
        }
        match g.test_ord_ge(p, c0, r, m0 + 1 + j) {
            OrdTest::Holds => acc += cr(q),
            OrdTest::Fails => {}
            OrdTest::Unknown => return BallEval::Refine,
        }
        BallEval::Const(acc / (1.0 + q))
    };
    integrate_ball(p, Rat::int(0), x_lo, depth + 6, &mut f)
}

/// Green-kernel double integral: per (t-shell, x-ball) the value is
/// pref * q^{-(sigma+1)/2 * (ord det - 2 min-entry-ord)}; both t-tails are
/// exact geometric series once the dominant entry is certified.
fn ell_green_double_integral(
    p: u64,
    sigma: C,
    z: C,
    tau: Rat,
    a: Rat,
    det: Rat,
    depth: u32,
) -> Result<C> {
    if sigma.re <= (z.re.abs() - 1.0) / 2.0 || sigma.re <= 0.5 {
        return Err(Error::StripViolation("green oracle needs Re s > max(1/2, (|Re z|-1)/2)"));
    }
    let q = p as f64;
    let lq = q.ln();
    let ord_det = det.ord(p).unwrap();
    let ord_tau = tau.ord(p).unwrap();
    let pref = ((cr(-lq) * (sigma + 1.0) / 2.0).exp() - (cr(lq) * (sigma + 1.0) / 2.0).exp()).inv();
    let green_pow = |e: i32| (cr(-lq) * (sigma + 1.0) / 2.0 * e as f64).exp();
    let t_weight = |j: i32| (cr(-lq) * (z - 1.0) / 2.0 * j as f64).exp();

    // x-integral at fixed t-valuation j; also reports whether the
    // (1 - tau x^2)/t entry strictly dominated on every ball (that
    // certifies the t -> 0 tail regime: it only sinks further as j grows).
    let ord_a = a.ord(p); // None for a = 0
    let x_integral = |j: i32| -> Result<(C, bool)> {
        let e1 = PolyExpr::affine(a, Rat::int(0).sub(tau));
        let e2 = PolyExpr::affine(a, tau);
        let g = PolyExpr { a: Rat::int(1), b: Rat::int(0), c: Rat::int(0).sub(tau) };
        let e3_ord = ord_tau + j;
        let mut dominated = true;
        // outer cutoff: for ord(x) <= x_out the entry (tau x^2)/t dominates
        // every other entry (conditions below are monotone in ord(x)).
        let mut x_out = (j - 1)
            .min((-1 - ord_tau).div_euclid(2))
            .min(-1);
        if let Some(oa) = ord_a {
            x_out = x_out.min(oa - ord_tau - 1);
        }
        x_out -= 1;
        let mut total = C::new(0.0, 0.0);
        let mut f = |c0: Rat, r: i32| -> BallEval {
            use super::padic_int::OrdDecision::*;
            let decs = [e1.ord_on_ball(p, c0, r), e2.ord_on_ball(p, c0, r), g.ord_on_ball(p, c0, r)];
            let mut exact: Vec<(usize, i64)> = vec![(99, e3_ord as i64)];
            let mut bounded: Vec<i64> = vec![];
            for (idx, d) in decs.iter().enumerate() {
                let shift = if idx == 2 { -(j as i64) } else { 0 };
                match d {
                    Exact(v) => exact.push((idx, *v as i64 + shift)),
                    AtLeast(lb) => bounded.push(*lb + shift),
                }
            }
            let (imin, emin) = *exact.iter().min_by_key(|&&(_, v)| v).unwrap();
            if bounded.iter().any(|&lb| lb <= emin) {
                return BallEval::Refine;
            }
            // E4 (index 2) strictly smallest?
            let unique = exact.iter().filter(|&&(_, v)| v == emin).count() == 1;
            if !(imin == 2 && unique) {
                dominated = false;
            }
            BallEval::Const(green_pow((ord_det as i64 - 2 * emin) as i32))
        };
        total += integrate_ball(p, Rat::int(0), x_out, depth + 10, &mut f)?;
        // outer x-shells v < x_out: exp = ord det - 2 (ord tau + 2v - j);
        // ratio per outward step q^{-(2 sigma + 1)}: exact geometric sum.
        {
            let v0 = x_out - 1;
            let ratio = (cr(-lq) * (2.0 * sigma + 1.0)).exp();
            if ratio.norm() >= 1.0 - 1e-9 {
                return Err(Error::StripViolation("outer x-tail does not contract"));
            }
            let val0 = green_pow(ord_det - 2 * (ord_tau + 2 * v0 - j))
                * cr(q.powi(-v0) * (1.0 - 1.0 / q));
            total += val0 / (cr(1.0) - ratio);
        }
        Ok((total, dominated))
    };

    let mut total = C::new(0.0, 0.0);
    // central window in j
    let j_lo = -(depth as i32) - 4 - ord_det.abs();
    let j_hi = depth as i32 + 4 + ord_det.abs() + ord_tau.abs();
    let mut last: Option<(C, bool)> = None;
    for j in j_lo..=j_hi {
        let (xi, dom) = x_integral(j)?;
        total += xi * t_weight(j);
        last = Some((xi, dom));
    }
    // t -> 0 tail (j > j_hi): in the E4-dominated regime each j-step scales
    // by exactly q^{-(sigma+1)} q^{-(z-1)/2}.
    let (xi_last, dom) = last.unwrap();
    if !dom {
        return Err(Error::InsufficientDepth { depth, tail: xi_last.norm(), target: 0.0 });
    }
    let ratio_down = (cr(-lq) * ((sigma + 1.0) + (z - 1.0) / 2.0)).exp();
    if ratio_down.norm() >= 1.0 - 1e-9 {
        return Err(Error::StripViolation("t -> 0 tail does not contract"));
    }
    total += xi_last * t_weight(j_hi) * ratio_down / (cr(1.0) - ratio_down);

    // t -> infinity tail (j < j_lo): substitute x = t y; in that coordinate
    // every entry scales uniformly and the per-step ratio is
    // q^{-sigma + (z-1)/2}. Certify by comparing two boundary shells.
    let (v_a, _) = x_integral(j_lo)?;
    let (v_b, _) = x_integral(j_lo - 1)?;
    let ratio_up = (cr(-lq) * (sigma - (z - 1.0) / 2.0)).exp();
    if ratio_up.norm() >= 1.0 - 1e-9 {
        return Err(Error::StripViolation("t -> infinity tail does not contract"));
    }
    let predicted = v_a * t_weight(j_lo) * ratio_up;
    let actual = v_b * t_weight(j_lo - 1);
    if (predicted - actual).norm() > 1e-10 * (1.0 + actual.norm()) {
        return Err(Error::InsufficientDepth { depth, tail: (predicted - actual).norm(), target: 0.0 });
    }
    total += actual / (cr(1.0) - ratio_up);
    Ok(pref * total)
}

/// Archimedean oracle: quadrature of the closed x-integral against
/// |t|^{(z-1)/2} d*t over both half-lines; returns the O^- normalization
/// (i.e. E / (2|m|)).
pub fn ell_oracle_arch(l: u32, z: C, a: f64, budget: &QuadBudget) -> Result<C> {
    if z.re.abs() >= 2.0 * l as f64 - 1.0 {
        return Err(Error::StripViolation("|Re z| < 2l - 1 required"));
    }
    // B(t) = 2^l (1+a^2)^{l/2} Gamma(l - 1/2) sqrt(pi) / Gamma(l)
    //        (i t)^l (t^2 + 1 + 2 a t i)^{1/2 - l}
    let gl = cgamma(cr(l as f64))?.re;
    let glh = cgamma(cr(l as f64 - 0.5))?.re;
    let pre = cr(2.0f64.powi(l as i32) * (1.0 + a * a).powf(l as f64 / 2.0) * glh
        * std::f64::consts::PI.sqrt()
        / gl);
    // t = s e^v, s = ±1; integrand decays like |t|^{l + (Re z - 1)/2} at 0 and
    // |t|^{(Re z - 1)/2 + 1 - l} at infinity.
    let mut total = C::new(0.0, 0.0);
    // decay exponents of the v-integrand at -inf / +inf
    let dec_lo = (l as f64 + (z.re - 1.0) / 2.0).max(0.4);
    let dec_hi = (l as f64 - 1.0 - (z.re - 1.0) / 2.0).max(0.4);
    for sign in [1.0f64, -1.0] {
        total += exp_line(
            |v: f64| -> Result<C> {
                let t = sign * v.exp();
                let it_l = c(0.0, t).powi(l as i32);
                let kern = c(t * t + 1.0, 2.0 * a * t).powc(cr(0.5 - l as f64));
                let weight = (cr(v) * (z - 1.0) / 2.0).exp();
                Ok(it_l * kern * weight)
            },
            -46.0 / dec_lo,
            46.0 / dec_hi,
            budget,
        )?;
    }
    Ok(pre * total / 2.0)
}
