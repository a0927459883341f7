//! Exact time-dependent scattering of Gaussian wave packets off a point
//! interaction `g δ(x)`, for a structureless particle and for a two-level
//! particle whose internal state is flipped by the interaction.
//!
//! The crate is `no_std` and only needs an allocator. It contains
//!
//! * [`system`]: physical parameters, the initial packet, momentum grids and
//!   sampled wave functions,
//! * [`quadrature`]: adaptive Gauss–Kronrod, principal values, oscillatory
//!   tails and Talbot inversion of Laplace transforms,
//! * [`scalar`] and [`spin`]: closed-form finite-time amplitudes at the
//!   origin, exact and asymptotic momentum-space wave functions, channel
//!   coefficients,
//! * [`lattice`]: a Crank–Nicolson propagator used as an independent check,
//! * [`delay`]: packet assembly in position space and time-delay estimates.
//!
//! Conventions: `<x|p> = exp(ipx/ħ)/sqrt(2πħ)` and `∫dp |ψ(p)|² = 1`.
//! The amplitude at the origin is `C(t) = ∫dq/(2πħ) ψ(q,t)`, so that
//! `ψ(x=0,t) = sqrt(2πħ) C(t)`.
#![no_std]
// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod delay;
mod error;
pub mod lattice;
pub(crate) mod math;
pub mod quadrature;
pub mod scalar;
pub mod spin;
pub mod system;
mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use system::{
    energy_of, initial_amplitude, norm_squared, ChannelCoefficients, GaussianPacket, MomentumGrid,
    MomentumWaveFunction, PhysParams, SpinorWaveFunction,
};
