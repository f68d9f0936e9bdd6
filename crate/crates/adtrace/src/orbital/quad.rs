//! Quadrature machinery for the archimedean oracles: tanh-sinh on finite
//! intervals (endpoint-singularity tolerant) and exponential-substitution
//! trapezoid rules on half-lines / the full line, all under an evaluation
//! budget with certified-by-refinement error estimates.

use crate::{Error, Result, C};
use std::cell::Cell;

pub struct QuadBudget {
    max_evals: usize,
    used: Cell<usize>,
    pub eps: f64,
}

impl QuadBudget {
    pub fn new(max_evals: usize, eps: f64) -> Self {
        QuadBudget { max_evals, used: Cell::new(0), eps }
    }

    fn spend(&self, n: usize) -> Result<()> {
        self.used.set(self.used.get() + n);
        if self.used.get() > self.max_evals {
            Err(Error::BudgetExhausted { err: f64::NAN, target: self.eps })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> usize {
        self.used.get()
    }
}

/// Tanh-sinh quadrature over (a, b). Refines the step until two consecutive
/// levels agree to eps (relative), then returns the finer value.
pub fn tanh_sinh<F: FnMut(f64) -> Result<C>>(
    mut f: F,
    a: f64,
    b: f64,
    budget: &QuadBudget,
) -> Result<C> {
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    let mut prev: Option<C> = None;
    let mut h = 0.5f64;
    for _level in 0..10 {
        let jmax = (4.5 / h).ceil() as i64;
        let mut acc = C::new(0.0, 0.0);
        let mut evals = 0usize;
        for j in -jmax..=jmax {
            let u = j as f64 * h;
            let sh = 0.5 * std::f64::consts::PI * u.sinh();
            let w = 0.5 * std::f64::consts::PI * u.cosh() / sh.cosh().powi(2);
            if w == 0.0 || !w.is_finite() {
                continue;
            }
            // distance to the near endpoint, computed without cancellation:
            // 1 - |tanh(sh)| = 2 / (e^{2|sh|} + 1)
            let dist = half * 2.0 / ((2.0 * sh.abs()).exp() + 1.0);
            let xx = if j >= 0 { b - dist } else { a + dist };
            let xx = if j == 0 { mid } else { xx };
            if xx <= a || xx >= b {
                continue;
            }
            acc += f(xx)? * (w * h * half);
            evals += 1;
        }
        budget.spend(evals)?;
        if let Some(p) = prev {
            let diff = (acc - p).norm();
            if diff <= budget.eps * (1.0 + acc.norm()) {
                return Ok(acc);
            }
        }
        prev = Some(acc);
        h /= 2.0;
    }
    Err(Error::BudgetExhausted { err: f64::NAN, target: budget.eps })
}

/// Trapezoid rule over the whole line in an exponentially decaying
/// coordinate; the integrand must decay at least exponentially as
/// |v| -> infinity (callers substitute t = e^v first).
pub fn exp_line<F: FnMut(f64) -> Result<C>>(
    mut f: F,
    v_lo: f64,
    v_hi: f64,
    budget: &QuadBudget,
) -> Result<C> {
    let mut n = 256usize;
    let mut prev: Option<C> = None;
    for _level in 0..8 {
        let h = (v_hi - v_lo) / n as f64;
        let mut acc = C::new(0.0, 0.0);
        for k in 0..=n {
            let v = v_lo + k as f64 * h;
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            acc += f(v)? * (w * h);
        }
        budget.spend(n + 1)?;
        if let Some(p) = prev {
            if (acc - p).norm() <= budget.eps * (1.0 + acc.norm()) {
                return Ok(acc);
            }
        }
        prev = Some(acc);
        n *= 2;
    }
    Err(Error::BudgetExhausted { err: f64::NAN, target: budget.eps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cr;

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        // int_0^1 x^{-1/2} dx = 2
        let budget = QuadBudget::new(100_000, 1e-12);
        let v = tanh_sinh(|x| Ok(cr(x.powf(-0.5))), 0.0, 1.0, &budget).unwrap();
        assert!((v - cr(2.0)).norm() < 1e-10, "{v}");
    }

    #[test]
    fn exp_line_gaussian() {
        // int e^{-v^2} dv = sqrt(pi)
        let budget = QuadBudget::new(100_000, 1e-12);
        let v = exp_line(|v| Ok(cr((-v * v).exp())), -8.0, 8.0, &budget).unwrap();
        assert!((v - cr(std::f64::consts::PI.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_signals() {
        let budget = QuadBudget::new(50, 1e-14);
        let r = tanh_sinh(|x| Ok(cr((x * 37.0).sin())), 0.0, 1.0, &budget);
        assert!(matches!(r, Err(Error::BudgetExhausted { .. })));
    }
}
