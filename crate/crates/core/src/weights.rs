//! Momentum integrals against the initial packet.

use num_complex::Complex64;

use crate::math::{c, PI};
use crate::quadrature::{integrate_contour, Chebyshev, Tolerance};
use crate::system::{GaussianPacket, PhysParams};
use crate::{Error, Result};

/// Runs a fallible integrand inside an infallible quadrature; the first
/// failure is kept and reported afterwards.
pub(crate) struct Guard(Option<Error>);

impl Guard {
    pub(crate) fn new() -> Self {
        Guard(None)
    }

    pub(crate) fn take(&mut self, r: Result<Complex64>) -> Complex64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.get_or_insert(e);
                c(0.0, 0.0)
            }
        }
    }

    pub(crate) fn finish<T>(self, value: T) -> Result<T> {
        match self.0 {
            Some(e) => Err(e),
            None => Ok(value),
        }
    }
}

/// `∫dq/(2πħ) ψ₀(q) k(q)` along the saddle contour of time `t`.
pub(crate) fn packet_integral<K>(
    packet: &GaussianPacket,
    params: &PhysParams,
    t: f64,
    mut kernel: K,
    tol: Tolerance,
) -> Result<Complex64>
where
    K: FnMut(Complex64) -> Result<Complex64>,
{
    let hbar = params.hbar();
    let path = packet.saddle_contour(params, t);
    let mut guard = Guard::new();
    let r = integrate_contour(
        |q| {
            let w = packet.amplitude(q, hbar);
            if w == c(0.0, 0.0) {
                return w;
            }
            w * guard.take(kernel(q))
        },
        &path,
        tol,
    )?;
    guard.finish(r.value / (2.0 * PI * hbar))
}

/// `R(z) = ∫dq ψ₀(q) / (z + q²/2mħ)` along a ray `z = d·w`, `w ≥ 0`,
/// interpolated in `s = (w - a₀)/(w + a₀)` with `a₀ = p0²/2mħ`. Every
/// resolvent-type momentum integral in the closed forms reduces to it.
/// `R` is analytic off the negative real axis, so any ray with `d ≠ -1`
/// is smooth.
#[derive(Debug, Clone)]
pub(crate) struct Resolvent {
    interpolant: Option<Chebyshev>,
    scale: f64,
    a0: f64,
}

impl Resolvent {
    pub(crate) fn new(packet: &GaussianPacket, params: &PhysParams) -> Result<Self> {
        Self::along(packet, params, c(1.0, 0.0))
    }

    pub(crate) fn along(
        packet: &GaussianPacket,
        params: &PhysParams,
        direction: Complex64,
    ) -> Result<Self> {
        const REL: f64 = 1e-11;
        let hbar = params.hbar();
        let a0 = packet.p0() * packet.p0() / (2.0 * params.mass() * hbar);
        let exact = |w: f64| {
            packet_integral(
                packet,
                params,
                0.0,
                |q| Ok(1.0 / (direction * w + params.kinetic_rate(q))),
                Tolerance::new(0.0, 0.1 * REL),
            )
            .map(|v| v * (2.0 * PI * hbar))
        };
        let scale = exact(0.0)?.norm().max(exact(a0)?.norm());
        if scale == 0.0 {
            return Ok(Resolvent {
                interpolant: None,
                scale,
                a0,
            });
        }
        let mut guard = Guard::new();
        let (cheb, converged) = Chebyshev::adaptive(
            |s| {
                if s >= 1.0 {
                    return c(0.0, 0.0);
                }
                let z = a0 * (1.0 + s) / (1.0 - s);
                guard.take(exact(z)) / scale
            },
            -1.0,
            1.0,
            REL,
            1024,
        );
        guard.finish(())?;
        if !converged {
            return Err(Error::NoConvergence {
                abs_error: f64::NAN,
                tol: REL * scale,
            });
        }
        Ok(Resolvent {
            interpolant: Some(cheb),
            scale,
            a0,
        })
    }

    /// `R(d·w)`.
    pub(crate) fn at(&self, w: f64) -> Complex64 {
        match &self.interpolant {
            Some(cheb) => cheb.eval((w - self.a0) / (w + self.a0)) * self.scale,
            None => c(0.0, 0.0),
        }
    }
}
