//! Local orbital integrals: closed-form hyperbolic and elliptic evaluators
//! with their independent brute-force oracles (exact p-adic ball
//! integration at finite places, adaptive quadrature at the real place),
//! plus the Eisenstein period along elliptic tori.

mod eis;
mod ell;
mod hyp;
pub mod padic_int;
pub mod quad;

pub use eis::{eis_period, eis_period_assembly, gamma_completed_l};
pub use ell::{ell_closed_arch, ell_closed_finite, ell_oracle_arch, ell_oracle_padic};
pub use hyp::{hyp_closed_arch, hyp_closed_finite, hyp_oracle_arch, hyp_oracle_padic, FiniteKernel};
pub use quad::QuadBudget;

use crate::qfield::{EllipticClassRep, Place};
use crate::{Error, Result, C};

/// A single local orbital-integral query: hyperbolic (split torus, rational
/// parameter a) or elliptic (class representative), at a given place.
#[derive(Debug, Clone)]
pub struct OrbitalQuery {
    pub place: Place,
    pub kind: OrbitalKind,
    pub z: C,
    /// resolvent parameter when the place lies in S
    pub sigma: Option<C>,
    /// marks a place dividing the level
    pub level_place: bool,
}

#[derive(Debug, Clone)]
pub enum OrbitalKind {
    Hyperbolic { a_num: i128, a_den: i128 },
    Elliptic { rep: EllipticClassRep },
}

impl OrbitalQuery {
    fn finite_kernel(&self) -> FiniteKernel {
        if let Some(sigma) = self.sigma {
            FiniteKernel::Green { sigma }
        } else if self.level_place {
            FiniteKernel::Level
        } else {
            FiniteKernel::Maximal
        }
    }

    /// Dispatch to the closed form for this query.
    pub fn closed(&self) -> Result<C> {
        match (&self.place, &self.kind) {
            (Place::Archimedean { weight }, OrbitalKind::Hyperbolic { a_num, a_den }) => {
                hyp_closed_arch(*weight, self.z, *a_num as f64 / *a_den as f64)
            }
            (Place::Archimedean { weight }, OrbitalKind::Elliptic { rep }) => {
                ell_closed_arch(rep, *weight, self.z)
            }
            (Place::Finite { p }, OrbitalKind::Hyperbolic { a_num, a_den }) => {
                hyp_closed_finite(*p, self.finite_kernel(), self.z, *a_num, *a_den)
            }
            (Place::Finite { p }, OrbitalKind::Elliptic { rep }) => {
                ell_closed_finite(rep, *p, self.finite_kernel(), self.z)
            }
        }
    }

    /// Dispatch to the matching oracle. `depth` controls p-adic refinement,
    /// `budget` the archimedean quadrature.
    pub fn oracle(&self, depth: u32, budget: &QuadBudget) -> Result<C> {
        match (&self.place, &self.kind) {
            (Place::Archimedean { weight }, OrbitalKind::Hyperbolic { a_num, a_den }) => {
                hyp_oracle_arch(*weight, self.z, *a_num as f64 / *a_den as f64, budget)
            }
            (Place::Archimedean { weight }, OrbitalKind::Elliptic { rep }) => {
                // oracle returns E / (2|m|); rescale to the closed convention
                let m_abs = (rep.delta.abs() as f64).sqrt() / 2.0;
                let a = rep.t as f64 / (2.0 * m_abs);
                Ok(ell_oracle_arch(*weight, self.z, a, budget)? * 2.0 * m_abs)
            }
            (Place::Finite { p }, OrbitalKind::Hyperbolic { a_num, a_den }) => {
                hyp_oracle_padic(*p, self.finite_kernel(), self.z, *a_num, *a_den, depth)
            }
            (Place::Finite { p }, OrbitalKind::Elliptic { rep }) => {
                ell_oracle_padic(rep, *p, self.finite_kernel(), self.z, depth)
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            OrbitalKind::Hyperbolic { a_num, a_den } => {
                if *a_den == 0 || *a_num == 0 || a_num == a_den {
                    return Err(Error::InvalidInput("hyperbolic a must avoid 0, 1".into()));
                }
            }
            OrbitalKind::Elliptic { rep } => {
                if rep.delta == 0 {
                    return Err(Error::ZeroDiscriminant);
                }
            }
        }
        Ok(())
    }
}
