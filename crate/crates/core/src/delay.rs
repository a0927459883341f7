//! Position-space assembly of the asymptotic packets and three estimates of
//! the time delay: the closed forms for the point interaction, the same
//! expressions with `C'/C` taken by finite differences, and a straight-line
//! fit to grid centroids.
//!
//! For a channel amplitude `C(p)` and `ρ = C'(p0)/C(p0)`,
//!
//! ```text
//! v     = (p0/m) [1 + 2(δp/p0)² p0 Re ρ]
//! delay = (mħ/p0) Im ρ / [1 + 2(δp/p0)² p0 Re ρ]
//! ```
//!
//! and a positive delay means the packet lags free motion.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::lattice::{HalfLines, Snapshot};
use crate::math::{c, I, PI};
#[allow(unused_imports)]
use crate::math::Float;
use crate::quadrature::{integrate_adaptive, Tolerance};
use crate::scalar::{reflection, transmission};
use crate::system::{GaussianPacket, PhysParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Transmit,
    Reflect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Scalar,
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Channel {
    pub side: Side,
    pub level: Level,
}

impl Channel {
    pub const TRANSMIT: Channel = Channel {
        side: Side::Transmit,
        level: Level::Scalar,
    };
    pub const REFLECT: Channel = Channel {
        side: Side::Reflect,
        level: Level::Scalar,
    };

    pub fn spin(side: Side, level: Level) -> Self {
        Channel { side, level }
    }

    /// `transmit`, `reflect_up`, ...
    pub fn tag(&self) -> &'static str {
        match (self.side, self.level) {
            (Side::Transmit, Level::Scalar) => "transmit",
            (Side::Reflect, Level::Scalar) => "reflect",
            (Side::Transmit, Level::Up) => "transmit_up",
            (Side::Reflect, Level::Up) => "reflect_up",
            (Side::Transmit, Level::Down) => "transmit_down",
            (Side::Reflect, Level::Down) => "reflect_down",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    CoefficientDerivative,
    CentroidFit,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::CoefficientDerivative => "coefficient_derivative",
            Method::CentroidFit => "centroid_fit",
        }
    }
}

/// `fit_residual` is set exactly for [`Method::CentroidFit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayReport {
    pub channel: Channel,
    pub method: Method,
    pub v_mean: f64,
    pub delay: f64,
    pub fit_residual: Option<f64>,
}

/// `C'(p0)/C(p0)` from central differences with step `h = 10⁻⁶ p0`, one
/// Richardson level (steps `h` and `2h`).
pub fn log_derivative<F: Fn(f64) -> Complex64>(coef: F, p0: f64) -> Result<Complex64> {
    let value = coef(p0);
    if !(value.norm() >= 1e-12) {
        return Err(Error::VanishingCoefficient { modulus: value.norm() });
    }
    let h = p0.abs() * 1e-6;
    let d1 = (coef(p0 + h) - coef(p0 - h)) / (2.0 * h);
    let d2 = (coef(p0 + 2.0 * h) - coef(p0 - 2.0 * h)) / (4.0 * h);
    Ok((4.0 * d1 - d2) / 3.0 / value)
}

fn report_from_ratio(ratio: Complex64, p0: f64, dp: f64, params: &PhysParams) -> (f64, f64) {
    let bracket = 1.0 + 2.0 * (dp / p0).powi(2) * p0 * ratio.re;
    let v = p0 / params.mass() * bracket;
    let delay = params.mass() * params.hbar() / p0 * ratio.im / bracket;
    (v, delay)
}

/// Mean velocity and delay of a channel with amplitude `coef(p)` around
/// `p0`, with `coef'` by finite differences.
pub fn delay_from_coefficient<F: Fn(f64) -> Complex64>(
    coef: F,
    channel: Channel,
    p0: f64,
    dp: f64,
    params: &PhysParams,
) -> Result<DelayReport> {
    let ratio = log_derivative(coef, p0)?;
    let (v_mean, delay) = report_from_ratio(ratio, p0, dp, params);
    Ok(DelayReport {
        channel,
        method: Method::CoefficientDerivative,
        v_mean,
        delay,
        fit_residual: None,
    })
}

/// Closed forms for the point interaction with `Ω = mg/ħp0`:
///
/// ```text
/// δ_tr = (ħ/2)(Ω/E)|T|² / [1 + 2(δp/p0)²|R|²],  v_tr = (p0/m)[1 + 2(δp/p0)²|R|²]
/// δ_rf = (ħ/2)(Ω/E)|T|² / [1 - 2(δp/p0)²|T|²],  v_rf = (p0/m)[1 - 2(δp/p0)²|T|²]
/// ```
///
/// The reflected bracket vanishes only for `δp/p0 ≥ 1/(√2|T|)`, far outside
/// the narrow-packet regime where these forms hold; no error is raised.
pub fn delay_closed_form_scalar(params: &PhysParams, p0: f64, dp: f64, side: Side) -> Result<DelayReport> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p0",
            reason: "must be positive and finite",
        });
    }
    let hbar = params.hbar();
    let omega = params.coupling_momentum() / p0;
    let energy = p0 * p0 / (2.0 * params.mass());
    let t2 = 1.0 / (1.0 + omega * omega);
    let r2 = omega * omega * t2;
    let spread = 2.0 * (dp / p0).powi(2);
    let bracket = match side {
        Side::Transmit => 1.0 + spread * r2,
        Side::Reflect => 1.0 - spread * t2,
    };
    Ok(DelayReport {
        channel: Channel {
            side,
            level: Level::Scalar,
        },
        method: Method::ClosedForm,
        v_mean: p0 / params.mass() * bracket,
        delay: 0.5 * hbar * omega / energy * t2 / bracket,
        fit_residual: None,
    })
}

/// `∫dp/√(2πħ) coef(p) e^{ipx/ħ - iE_p t/ħ} ψ₀(±p)` at each `x`; the upper
/// sign for the transmitted packet, the lower (mirrored momenta) for the
/// reflected one.
fn assemble<F: Fn(f64) -> Complex64>(
    coef: &F,
    packet: &GaussianPacket,
    params: &PhysParams,
    t: f64,
    xs: &[f64],
    mirror: bool,
    tol: Tolerance,
) -> Result<Vec<Complex64>> {
    let hbar = params.hbar();
    let mass = params.mass();
    let sign = if mirror { -1.0 } else { 1.0 };
    let centre = sign * packet.p0();
    let half = packet.support_half_width();
    let scale = 1.0 / (2.0 * PI * hbar).sqrt();
    xs.iter()
        .map(|&x| {
            let integrand = |p: f64| {
                let phase = (p * x - p * p * t / (2.0 * mass)) / hbar;
                coef(p) * Complex64::cis(phase) * packet.amplitude(c(sign * p, 0.0), hbar)
            };
            // split where the phase is stationary to help the adaptive rule
            let stationary = mass * x / t.max(f64::MIN_POSITIVE);
            let (lo, hi) = (centre - half, centre + half);
            let mut total = c(0.0, 0.0);
            let cuts: Vec<f64> = if t > 0.0 && stationary > lo && stationary < hi {
                [lo, stationary, hi].into()
            } else {
                [lo, hi].into()
            };
            for w in cuts.windows(2) {
                total += integrate_adaptive(integrand, w[0], w[1], tol)?.value;
            }
            Ok(total * scale)
        })
        .collect()
}

/// Transmitted packet `∫dp/√(2πħ) T(p) e^{-iE_p t/ħ + ipx/ħ} ψ₀(p)`.
/// Meaningful once the packet has left the origin, roughly
/// `t > 3|x0| m/p0`.
pub fn assemble_transmitted<F: Fn(f64) -> Complex64>(
    coef: F,
    packet: &GaussianPacket,
    params: &PhysParams,
    t: f64,
    xs: &[f64],
    tol: impl Into<Tolerance>,
) -> Result<Vec<Complex64>> {
    assemble(&coef, packet, params, t, xs, false, tol.into())
}

/// Reflected packet `∫dp/√(2πħ) R(p) e^{-iE_p t/ħ + ipx/ħ} ψ₀(-p)`; the
/// coefficient is evaluated at negative `p`.
pub fn assemble_reflected<F: Fn(f64) -> Complex64>(
    coef: F,
    packet: &GaussianPacket,
    params: &PhysParams,
    t: f64,
    xs: &[f64],
    tol: impl Into<Tolerance>,
) -> Result<Vec<Complex64>> {
    assemble(&coef, packet, params, t, xs, true, tol.into())
}

/// `u = 1/4δp² + it/2mħ`.
pub fn saddle_width(packet: &GaussianPacket, params: &PhysParams, t: f64) -> Complex64 {
    c(1.0 / (4.0 * packet.dp() * packet.dp()), t / (2.0 * params.mass() * params.hbar()))
}

/// First-order saddle form of the transmitted packet,
/// `C(p0) exp[-(x - x0 - p0t/m - iħρ)²/4ħ²u + i(p0x - E t)/ħ]` with
/// `ρ = C'(p0)/C(p0)`, normalized so that `C ≡ 1` gives the exact free
/// packet.
pub fn gaussian_saddle_packet<F: Fn(f64) -> Complex64>(
    coef: F,
    packet: &GaussianPacket,
    params: &PhysParams,
    t: f64,
    x: f64,
) -> Result<Complex64> {
    let hbar = params.hbar();
    let mass = params.mass();
    let p0 = packet.p0();
    let value = coef(p0);
    let ratio = log_derivative(&coef, p0)?;
    let u = saddle_width(packet, params, t);
    let shift = c(x - packet.x0() - p0 * t / mass, 0.0) - I * hbar * ratio;
    let carrier = (p0 * x - p0 * p0 * t / (2.0 * mass)) / hbar;
    let prefactor = (PI / u).sqrt() * (packet.norm() / (2.0 * PI * hbar).sqrt());
    Ok(value * prefactor * (-(shift * shift) / (4.0 * hbar * hbar * u)).exp() * Complex64::cis(carrier))
}

/// Real part of the saddle exponent in terms of the mean velocity and the
/// delay: `-(δp/ħ)²/(1 + (4E_δp t/ħ)²) [x - x0 - v(t - δ)]² + (δp/p0)² (p0 Re ρ)²`
/// with `E_δp = δp²/2m`.
pub fn saddle_log_modulus(ratio: Complex64, packet: &GaussianPacket, params: &PhysParams, t: f64, x: f64) -> f64 {
    let hbar = params.hbar();
    let mass = params.mass();
    let (p0, dp) = (packet.p0(), packet.dp());
    let (v, delay) = report_from_ratio(ratio, p0, dp, params);
    let e_dp = dp * dp / (2.0 * mass);
    let spread = 1.0 + (4.0 * e_dp * t / hbar).powi(2);
    let offset = x - packet.x0() - v * (t - delay);
    -(dp * dp) / (hbar * hbar) / spread * offset * offset + (dp / p0).powi(2) * (p0 * ratio.re).powi(2)
}

fn channel_lines(snapshot: &Snapshot, level: Level) -> &HalfLines {
    match level {
        Level::Scalar | Level::Up => &snapshot.up,
        Level::Down => &snapshot.down,
    }
}

/// Probability and centroid of a channel, the reflected centroid mirrored
/// to `-⟨x⟩` so that both sides move forward.
fn channel_sample(snapshot: &Snapshot, channel: Channel) -> (f64, f64) {
    let lines = channel_lines(snapshot, channel.level);
    match channel.side {
        Side::Transmit => (lines.prob_right, lines.centroid_right()),
        Side::Reflect => (lines.prob_left, -lines.centroid_left()),
    }
}

/// Relative change of a channel probability allowed across a fit.
pub const PLATEAU_TOL: f64 = 1e-4;
/// Fewest snapshots a fit may use.
pub const MIN_SNAPSHOTS: usize = 10;

/// A time after which every channel packet of the two-level or scalar
/// problem lies `widths` spatial widths clear of the origin, so that
/// half-line centroids are not biased by tails cut at `x = 0`.
pub fn separation_time(params: &PhysParams, packet: &GaussianPacket, widths: f64) -> f64 {
    let mass = params.mass();
    let hbar = params.hbar();
    let v = packet.p0() / mass;
    let arrival = -packet.x0() / v;
    let sigma0 = packet.position_width(hbar);
    let spread = |t: f64| (sigma0 * sigma0 + (packet.dp() * t / mass).powi(2)).sqrt();
    let mut t = arrival;
    for _ in 0..8 {
        t = arrival + widths * spread(t) / v;
    }
    t
}

/// Delay from a weighted straight-line fit `⟨x⟩ = a + v t` to a channel
/// centroid over the whole trace. The trace must start after the
/// interaction (see [`separation_time`]); across it the channel
/// probability may change by at most [`PLATEAU_TOL`], relative.
///
/// The zero-delay reference is the line a packet with a real channel
/// amplitude follows: `x0_eff + v t`, see [`launch_ratio`]. Then
/// `delay = (x0_eff - a)/v`. Reflected channels use `-⟨x⟩`.
pub fn delay_from_centroid(
    trace: &[Snapshot],
    channel: Channel,
    params: &PhysParams,
    packet: &GaussianPacket,
) -> Result<DelayReport> {
    if trace.len() < MIN_SNAPSHOTS {
        return Err(Error::FitIllConditioned { snapshots: trace.len() });
    }
    let (p_final, _) = channel_sample(&trace[trace.len() - 1], channel);
    let settled = |s: &Snapshot| (channel_sample(s, channel).0 - p_final).abs() <= PLATEAU_TOL * p_final;
    if !(p_final > 0.0) || !trace.iter().all(settled) {
        return Err(Error::PlateauNotReached);
    }
    let window = trace;
    // weighted least squares, weights = channel probability
    let (mut sw, mut st, mut sx, mut stt, mut stx) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for s in window {
        let (w, x) = channel_sample(s, channel);
        sw += w;
        st += w * s.time;
        sx += w * x;
        stt += w * s.time * s.time;
        stx += w * s.time * x;
    }
    let (mt, mx) = (st / sw, sx / sw);
    let var = stt / sw - mt * mt;
    if !(var > 0.0) {
        return Err(Error::FitIllConditioned { snapshots: window.len() });
    }
    let v = (stx / sw - mt * mx) / var;
    let a = mx - v * mt;
    let mut rss = 0.0;
    for s in window {
        let (w, x) = channel_sample(s, channel);
        rss += w * (x - a - v * s.time).powi(2);
    }
    let x0_eff = packet.x0() * launch_ratio(params, packet, channel.level)?;
    Ok(DelayReport {
        channel,
        method: Method::CentroidFit,
        v_mean: v,
        delay: (x0_eff - a) / v,
        fit_residual: Some((rss / sw).sqrt()),
    })
}

/// `x0_eff/x0` for a channel. A component of outgoing momentum `p` fed by
/// incident momentum `p_in` leaves along `x = x0 p/p_in + p t/m` when its
/// amplitude is real, so the centroid line starts from `x0 ⟨p/p_in⟩`. The
/// ratio is 1 unless the level changes; for the lower level
/// `p = sqrt(p_in² + 2mħω)` and the average runs over its asymptotic
/// momentum density `∝ Λ²p p_in/(p p_in + Λ²)² |ψ₀(p_in)|² dp_in`.
pub fn launch_ratio(params: &PhysParams, packet: &GaussianPacket, level: Level) -> Result<f64> {
    if level != Level::Down || params.omega() == 0.0 {
        return Ok(1.0);
    }
    let hbar = params.hbar();
    let lam2 = params.coupling_momentum().powi(2);
    let flip = params.flip_momentum_sq();
    let half = packet.support_half_width();
    let lo = (packet.p0() - half).max(0.0);
    let hi = packet.p0() + half;
    let weight = |p_in: f64| {
        let p = (p_in * p_in + flip).sqrt();
        let rho = packet.amplitude(c(p_in, 0.0), hbar).norm_sqr();
        (lam2 * p * p_in / (p * p_in + lam2).powi(2) * rho, p / p_in)
    };
    let tol = Tolerance::relative(1e-12);
    let mass = integrate_adaptive(|p| c(weight(p).0, 0.0), lo, hi, tol)?.value.re;
    let moment = integrate_adaptive(
        |p| {
            let (w, r) = weight(p);
            c(w * r, 0.0)
        },
        lo,
        hi,
        tol,
    )?
    .value
    .re;
    if !(mass > 0.0) {
        return Err(Error::VanishingCoefficient { modulus: mass });
    }
    Ok(moment / mass)
}

/// Channel amplitude of the point interaction: `1/(1 + img/ħp)` or
/// `-i(mg/ħp)/(1 + img/ħp)`.
pub fn scalar_coefficient(params: &PhysParams, side: Side) -> impl Fn(f64) -> Complex64 + '_ {
    move |p| match side {
        Side::Transmit => transmission(params, p),
        Side::Reflect => reflection(params, p),
    }
}
