//! Exact p-adic integration of locally constant integrands by adaptive ball
//! refinement. A ball is x in c + p^r Z_p; the integrand reports either a
//! provably constant value on the ball or asks for a split into the p
//! sub-balls. All arithmetic is exact (i128 rationals), so "provably" means
//! decided by valuation inequalities, not floating point.

use crate::qfield::padic::ord_int;
use crate::{Error, Result, C};

/// Exact rational with power-of-p denominators (d > 0, not necessarily
/// reduced).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rat {
    pub n: i128,
    pub d: i128,
}

impl Rat {
    pub fn int(n: i128) -> Self {
        Rat { n, d: 1 }
    }

    pub fn new(n: i128, d: i128) -> Self {
        assert!(d != 0);
        if d < 0 {
            Rat { n: -n, d: -d }
        } else {
            Rat { n, d }
        }
    }

    pub fn add(self, o: Rat) -> Rat {
        Rat::new(self.n * o.d + o.n * self.d, self.d * o.d)
    }

    pub fn sub(self, o: Rat) -> Rat {
        Rat::new(self.n * o.d - o.n * self.d, self.d * o.d)
    }

    pub fn mul(self, o: Rat) -> Rat {
        Rat::new(self.n * o.n, self.d * o.d)
    }

    pub fn is_zero(self) -> bool {
        self.n == 0
    }

    /// ord_p; None for 0 (infinite valuation).
    pub fn ord(self, p: u64) -> Option<i32> {
        if self.n == 0 {
            None
        } else {
            Some(ord_int(self.n, p) - ord_int(self.d, p))
        }
    }

    /// Remove common p-powers and clamp size (valid because every call site
    /// only ever inspects p-adic valuations of derived quantities).
    pub fn reduce(self, p: u64) -> Rat {
        let pi = p as i128;
        let mut n = self.n;
        let mut d = self.d;
        while n != 0 && n % pi == 0 && d % pi == 0 {
            n /= pi;
            d /= pi;
        }
        Rat { n, d }
    }

    /// Truncate to the canonical representative p^e * (unit mod p^k): the
    /// value changes by O(p^{e+k}), which is invisible to every valuation
    /// test below e + k. Keeps i128 heights bounded across long chains of
    /// exact arithmetic.
    pub fn trunc(self, p: u64, k: u32) -> Rat {
        if self.n == 0 {
            return Rat::int(0);
        }
        let pi = p as i128;
        let pk = pi.pow(k);
        let e = self.ord(p).unwrap();
        let mut n = self.n;
        let mut d = self.d;
        while n % pi == 0 {
            n /= pi;
        }
        while d % pi == 0 {
            d /= pi;
        }
        let unit = (n.rem_euclid(pk) * super::super::qfield::padic::inv_mod(d.rem_euclid(pk), pk))
            .rem_euclid(pk);
        if e >= 0 {
            Rat::new(unit * pi.pow(e as u32), 1)
        } else {
            Rat::new(unit, pi.pow((-e) as u32))
        }
    }
}

/// Working precision for truncated p-adic arithmetic: large enough for every
/// valuation threshold in the oracles, small enough that products of two
/// truncated units stay inside i128.
pub fn working_prec(p: u64) -> u32 {
    ((58.0 / (p as f64).log2()).floor() as u32).min(40)
}

/// Value of an integrand on a ball.
pub enum BallEval {
    /// Provably constant on the whole ball.
    Const(C),
    /// Not decidable at this radius; split the ball.
    Refine,
}

/// Affine-or-quadratic expression E(x) = a + b x + c x^2 with exact rational
/// coefficients, together with p-adic order logic on balls.
#[derive(Debug, Clone, Copy)]
pub struct PolyExpr {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

/// Outcome of testing "ord_p E(x) >= m" for all x in a ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdTest {
    Holds,
    Fails,
    Unknown,
}

impl PolyExpr {
    pub fn affine(a: Rat, b: Rat) -> Self {
        PolyExpr { a, b, c: Rat::int(0) }
    }

    pub fn eval(&self, x: Rat) -> Rat {
        self.a.add(self.b.mul(x)).add(self.c.mul(x).mul(x))
    }

    /// Evaluation with per-step truncation to the working precision; only
    /// p-adic orders of the result (below the precision) are meaningful.
    pub fn eval_for_ord(&self, p: u64, x: Rat) -> Rat {
        let k = working_prec(p);
        let bx = self.b.mul(x).trunc(p, k);
        let cxx = self.c.mul(x).trunc(p, k).mul(x).trunc(p, k);
        self.a.add(bx).trunc(p, k).add(cxx).trunc(p, k)
    }

    /// Exact order of E on the ball center + p^r Z_p when determined:
    /// ord(E(center)) when it is strictly below every increment bound
    /// ord(b) + r, ord(2 c center) + r, ord(c) + 2r.
    pub fn ord_on_ball(&self, p: u64, center: Rat, r: i32) -> OrdDecision {
        let v0 = self.eval_for_ord(p, center).ord(p);
        let mut inc = i64::MAX;
        if let Some(ob) = self.b.ord(p) {
            inc = inc.min(ob as i64 + r as i64);
        }
        if !self.c.is_zero() {
            if let Some(o2c) = self.c.mul(center).mul(Rat::int(2)).ord(p) {
                inc = inc.min(o2c as i64 + r as i64);
            }
            inc = inc.min(self.c.ord(p).unwrap() as i64 + 2 * r as i64);
        }
        match v0 {
            Some(v) if (v as i64) < inc => OrdDecision::Exact(v),
            Some(v) => OrdDecision::AtLeast((v as i64).min(inc)),
            None => OrdDecision::AtLeast(inc),
        }
    }

    /// Test ord_p E >= m uniformly on the ball.
    pub fn test_ord_ge(&self, p: u64, center: Rat, r: i32, m: i32) -> OrdTest {
        match self.ord_on_ball(p, center, r) {
            OrdDecision::Exact(v) => {
                if v >= m {
                    OrdTest::Holds
                } else {
                    OrdTest::Fails
                }
            }
            OrdDecision::AtLeast(lb) => {
                if lb >= m as i64 {
                    OrdTest::Holds
                } else {
                    OrdTest::Unknown
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum OrdDecision {
    Exact(i32),
    AtLeast(i64),
}

/// Integrate f over lo + p^{r0} Z_p with respect to the additive measure
/// normalized by vol(Z_p) = 1. `max_extra_depth` bounds the refinement below
/// the starting radius; exceeding it raises `InsufficientDepth`.
pub fn integrate_ball<F: FnMut(Rat, i32) -> BallEval>(
    p: u64,
    center: Rat,
    r0: i32,
    max_extra_depth: u32,
    f: &mut F,
) -> Result<C> {
    let mut total = C::new(0.0, 0.0);
    // worklist of (center, radius)
    let mut stack = vec![(center, r0)];
    let q = p as f64;
    while let Some((c0, r)) = stack.pop() {
        match f(c0, r) {
            BallEval::Const(v) => {
                total += v * q.powi(-r);
            }
            BallEval::Refine => {
                if (r - r0) as u32 >= max_extra_depth {
                    return Err(Error::InsufficientDepth {
                        depth: max_extra_depth,
                        tail: f64::NAN,
                        target: 0.0,
                    });
                }
                // split into p sub-balls c0 + k p^r + p^{r+1} Z_p
                let step = Rat::new((p as i128).pow(r.unsigned_abs()), 1);
                let step = if r >= 0 { step } else { Rat::new(1, step.n) };
                for k in 0..p {
                    let c_new = c0.add(step.mul(Rat::int(k as i128))).reduce(p);
                    stack.push((c_new, r + 1));
                }
            }
        }
    }
    Ok(total)
}

/// Integrate f over the unit sphere Z_p^* with the multiplicative measure
/// normalized so each valuation shell has mass 1:
/// d*t restricted to units = (additive measure) / (1 - 1/p).
pub fn integrate_units<F: FnMut(Rat, i32) -> BallEval>(
    p: u64,
    max_extra_depth: u32,
    f: &mut F,
) -> Result<C> {
    let mut total = C::new(0.0, 0.0);
    for k in 1..p {
        total += integrate_ball(p, Rat::int(k as i128), 1, max_extra_depth, f)?;
    }
    Ok(total / (1.0 - 1.0 / p as f64))
}
