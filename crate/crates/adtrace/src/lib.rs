//! Numerical engine for a Jacquet–Zagier-type trace identity over Q.
//!
//! The library evaluates both sides of an explicit trace identity for
//! holomorphic cusp forms of even weight and squarefree level: the geometric
//! side (unipotent, hyperbolic and elliptic terms built from closed-form
//! local orbital integrals) and the spectral side (an average of adjoint
//! L-values over newforms, weighted by old-form multiplicities and Hecke
//! test functions). Every closed-form local factor ships with an
//! independent brute-force oracle (exact p-adic ball integration at finite
//! places, adaptive quadrature at the archimedean place).

pub mod equid;
pub mod verify;
pub mod geomside;
pub mod localfactors;
pub mod orbital;
pub mod qfield;
pub mod specfun;
pub mod specside;

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout.
pub type C = Complex64;

/// Library-wide error type. Variants mirror the documented failure signals
/// of the public operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("gamma pole at nonpositive integer {0}")]
    GammaPole(f64),
    #[error("hypergeometric series does not converge for this argument: |w| = {0}")]
    NonConvergentRegion(f64),
    #[error("legendre function evaluated on the cut (-inf, 1]")]
    OnCutArgument,
    #[error("pole of {what} at {s}")]
    Pole { what: &'static str, s: C },
    #[error("parameter outside validity strip: {0}")]
    StripViolation(&'static str),
    #[error("singular 2x2 matrix")]
    SingularMatrix,
    #[error("discriminant is zero")]
    ZeroDiscriminant,
    #[error("discriminant is a perfect square")]
    SquareDiscriminant,
    #[error("p-adic depth {depth} insufficient: tail bound {tail:.3e} exceeds target {target:.3e}")]
    InsufficientDepth { depth: u32, tail: f64, target: f64 },
    #[error("quadrature budget exhausted: error estimate {err:.3e} exceeds target {target:.3e}")]
    BudgetExhausted { err: f64, target: f64 },
    #[error("unsatisfiable configuration: {0}")]
    UnsatisfiableConfig(String),
    #[error("missing Hecke eigenvalue at p = {0}")]
    MissingEigenvalue(u64),
    #[error("newform data incomplete: {0}")]
    IncompleteData(String),
    #[error("form level {form} does not divide target level {target}")]
    NonDivisorLevel { form: u64, target: u64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Central numerical policy: every tolerance and truncation knob used by the
/// library, with the defaults the test-suite pins.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Target relative error for complex gamma.
    pub gamma_rel: f64,
    /// Target relative error for 2F1 evaluation.
    pub hyp2f1_rel: f64,
    /// Target relative error for Dirichlet L / zeta values.
    pub lfun_rel: f64,
    /// Switch to the rearranged stable form when |q^{z/2}-1| is below this.
    pub removable_singularity_window: f64,
    /// Default archimedean quadrature budget (integrand evaluations).
    pub quad_budget: usize,
    /// Default archimedean quadrature absolute/relative error target.
    pub quad_eps: f64,
    /// Default p-adic integration depth.
    pub padic_depth: u32,
    /// AFE coefficient-cutoff safety factor.
    pub afe_safety: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            gamma_rel: 1e-12,
            hyp2f1_rel: 1e-10,
            lfun_rel: 1e-10,
            removable_singularity_window: 1e-4,
            quad_budget: 100_000,
            quad_eps: 1e-9,
            padic_depth: 8,
            afe_safety: 3.0,
        }
    }
}

/// Truncation policy for the infinite geometric-side sums.
#[derive(Debug, Clone)]
pub struct TruncationPolicy {
    /// Height bound driving the elliptic t-enumeration: |t|/sqrt(|n|) <= height.
    pub height: f64,
    /// Hard cap on the prime-power exponent of n at places of S.
    pub max_nu: u32,
    /// p-adic depth for oracles run under this policy.
    pub depth: u32,
    /// Archimedean quadrature budget.
    pub budget: usize,
    /// Target absolute error for truncated sums.
    pub eps: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            height: 80.0,
            max_nu: 24,
            depth: 8,
            budget: 100_000,
            eps: 1e-8,
        }
    }
}

pub(crate) fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub(crate) fn cr(re: f64) -> C {
    C::new(re, 0.0)
}

/// Validate that a computed value is finite; NaN or infinity is promoted to
/// an error rather than propagated as a value.
pub fn ensure_finite(v: C, what: &'static str) -> Result<C> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Pole { what, s: v })
    }
}
