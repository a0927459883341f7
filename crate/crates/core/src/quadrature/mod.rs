//! Numerical integration engines.
//!
//! Everything here works on complex-valued integrands of one real (or
//! complex, along a polyline) variable. Results carry an honest error
//! estimate and the number of integrand evaluations.

mod chebyshev;
mod kronrod;
mod pv;
mod talbot;

pub use chebyshev::Chebyshev;
pub use kronrod::{integrate_adaptive, integrate_contour, integrate_semi_infinite};
pub use pv::{integrate_pv, oscillatory_tail, Domain, Endpoint, PVIntegrand};
pub use talbot::{inverse_laplace_on_contour, inverse_laplace_talbot, TalbotContour};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub(crate) fn zero() -> Self {
        QuadResult {
            value: Complex64::new(0.0, 0.0),
            abs_error: 0.0,
            evaluations: 0,
        }
    }

    pub(crate) fn add(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            abs_error: self.abs_error + other.abs_error,
            evaluations: self.evaluations + other.evaluations,
        }
    }

    pub(crate) fn scale(self, factor: Complex64) -> QuadResult {
        QuadResult {
            value: self.value * factor,
            abs_error: self.abs_error * factor.norm(),
            evaluations: self.evaluations,
        }
    }
}

/// Stopping rule `error <= max(abs, rel * |value|)`.
///
/// A bare `f64` converts to an absolute tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Tolerance { abs, rel: 0.0 }
    }

    pub fn relative(rel: f64) -> Self {
        Tolerance { abs: 0.0, rel }
    }

    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub fn target(&self, magnitude: f64) -> f64 {
        self.abs.max(self.rel * magnitude)
    }

    /// Same relative part, absolute part multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Tolerance {
            abs: self.abs * factor,
            rel: self.rel,
        }
    }
}

impl From<f64> for Tolerance {
    fn from(abs: f64) -> Self {
        Tolerance::absolute(abs)
    }
}
