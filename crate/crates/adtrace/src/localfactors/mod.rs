//! Closed-form evaluators for the local building blocks of the trace
//! identity: O_0, O_1, S and its contour-integrated form, the archimedean
//! O^{±}, unipotent local factors U_v(w), Green functions, discrete-series
//! matrix coefficients and spherical functions.

mod arch;
mod green;
pub(crate) mod laurent;
mod ocal;
mod unip;

pub use arch::{
    matcoef, ocal_arch_minus, ocal_arch_plus, ocal_arch_plus_merged, spherical_phi,
    spherical_phi_finite_shell,
};
pub use green::{green_value, RatMat};
pub use ocal::{ocal0, ocal1, resolvent_pairing, scal, scal_hat, upsilon_factor};
pub use unip::{unip_local, UnipCase};

use crate::{c, cr, C};

/// Symmetric Laurent test function on the basis sigma_n(zeta) = zeta^n +
/// zeta^{-n}. The n = 0 element is the constant 2 (sigma_0 = zeta^0 + zeta^0);
/// that convention keeps the basis uniform and is assumed everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct SymLaurentPoly {
    /// (n, coefficient) pairs, n >= 0, strictly increasing in n.
    pub coeffs: Vec<(u32, C)>,
}

impl SymLaurentPoly {
    pub fn sigma(n: u32) -> Self {
        SymLaurentPoly { coeffs: vec![(n, cr(1.0))] }
    }

    pub fn from_coeffs(mut coeffs: Vec<(u32, C)>) -> Self {
        coeffs.sort_by_key(|&(n, _)| n);
        SymLaurentPoly { coeffs }
    }

    /// alpha(zeta) = sum c_n (zeta^n + zeta^{-n}); sigma_0 evaluates to 2.
    pub fn eval_zeta(&self, zeta: C) -> C {
        let mut acc = C::new(0.0, 0.0);
        for &(n, cn) in &self.coeffs {
            acc += cn * (zeta.powi(n as i32) + zeta.powi(-(n as i32)));
        }
        acc
    }

    /// alpha evaluated at the spectral parameter sigma (zeta = q^{-sigma/2}).
    pub fn eval_at_spectral(&self, q: f64, sigma: C) -> C {
        self.eval_zeta((cr(-q.ln()) * sigma / 2.0).exp())
    }

    /// alpha evaluated at a Satake point x = q^{nu/2} + q^{-nu/2} in [-2,2]:
    /// sigma_n value is the Chebyshev-recursion image y_n with y_0 = 2,
    /// y_1 = x, y_{n+1} = x y_n - y_{n-1}.
    pub fn eval_at_satake_x(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for &(n, cn) in &self.coeffs {
            acc += cn.re * sigma_n_at_x(n, x);
        }
        acc
    }

    pub fn max_n(&self) -> u32 {
        self.coeffs.iter().map(|&(n, _)| n).max().unwrap_or(0)
    }
}

/// sigma_n evaluated through the Chebyshev three-term recursion.
pub fn sigma_n_at_x(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (2.0f64, x);
    if n == 0 {
        return 2.0;
    }
    for _ in 1..n {
        let next = x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Local spectral parameter at a finite place: the resolvent variable sigma
/// lives on X_v = C / (4 pi i / log q) Z; `reduce` maps into the fundamental
/// strip |Im sigma| <= 2 pi / log q.
#[derive(Debug, Clone, Copy)]
pub struct LocalSpectralParam {
    pub z: C,
    pub sigma: C,
}

impl LocalSpectralParam {
    pub fn reduce(q: f64, sigma: C) -> C {
        let period = 4.0 * std::f64::consts::PI / q.ln();
        let mut im = sigma.im % period;
        if im > period / 2.0 {
            im -= period;
        }
        if im < -period / 2.0 {
            im += period;
        }
        c(sigma.re, im)
    }
}

/// Trapezoid quadrature of (1/2 pi i) int_{L(c0)} f(sigma) dmu(sigma) over
/// one period of the contour; the integrand is periodic so the rule is
/// spectrally accurate. Used as the oracle for the residue evaluations.
pub fn contour_quadrature<F: Fn(C) -> C>(q: f64, c0: f64, points: usize, f: F) -> C {
    let lq = q.ln();
    let y_max = 2.0 * std::f64::consts::PI / lq;
    let mut acc = C::new(0.0, 0.0);
    for j in 0..points {
        // midpoint samples over [-Y, Y]
        let y = -y_max + (j as f64 + 0.5) * (2.0 * y_max / points as f64);
        let sigma = c(c0, y);
        let weight = (cr(lq) * (cr(1.0) + sigma) / 2.0).exp() - (cr(lq) * (cr(1.0) - sigma) / 2.0).exp();
        acc += f(sigma) * weight * cr(lq / 2.0);
    }
    // d sigma = i dy; (1/2 pi i) * i dy = dy / (2 pi)
    acc * cr(2.0 * y_max / points as f64) / cr(2.0 * std::f64::consts::PI)
}
