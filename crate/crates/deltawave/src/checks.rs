//! Measurements shared by the `crosscheck` mode and the acceptance suite.
//! Each returns raw numbers; tolerances are applied by the caller.

use deltawave_core::delay::{
    delay_closed_form_scalar, delay_from_centroid, delay_from_coefficient, log_derivative, scalar_coefficient,
    separation_time, Channel, DelayReport, Level, Side,
};
use deltawave_core::lattice::{
    default_dt, init_from_packet, GridState, LatticeOptions, Propagator, Snapshot, SpatialGrid,
};
use deltawave_core::quadrature::{integrate_adaptive, Tolerance};
use deltawave_core::scalar::{
    asymptotic_distance, c_of_t, c_of_t_talbot, consistency_rhs, delta_t, transmission, transmission_reflection,
    ScalarEvolution, ScalarSolution,
};
use deltawave_core::spin::{
    c_down_of_t, c_down_of_t_talbot, c_up_of_t, c_up_of_t_talbot, spin_channel_coefficients, SpinEvolution,
    SpinSolution,
};
use deltawave_core::{Complex64, GaussianPacket, MomentumGrid, PhysParams, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest `||T|² + |R|² - 1|` over `samples` draws of
/// `g ∈ [-10, 10]`, `p ∈ [0.1, 10]` (ħ = m = 1).
pub fn unitarity_deviation(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let g = rng.gen_range(-10.0..10.0);
        let p = rng.gen_range(0.1..10.0);
        let k = transmission_reflection(&PhysParams::natural(g, 0.0)?, p)?;
        worst = worst.max((k.t_up.norm_sqr() + k.r_up.norm_sqr() - 1.0).abs());
    }
    Ok(worst)
}

/// As [`unitarity_deviation`] for the two-level flux sum, with
/// `ω ∈ [0, 10]` drawn as well.
pub fn spin_flux_deviation(seed: u64, samples: usize) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let g = rng.gen_range(-10.0..10.0);
        let omega = rng.gen_range(0.0..10.0);
        let p = rng.gen_range(0.1..10.0);
        let params = PhysParams::natural(g, omega)?;
        let k = spin_channel_coefficients(&params, p)?;
        worst = worst.max((k.flux_sum(&params) - 1.0).abs());
    }
    Ok(worst)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Relative gap between the closed form and Talbot inversion of `C(t)`.
pub fn origin_vs_talbot(sol: &ScalarSolution, t: f64, nodes: usize, tol: f64) -> Result<f64> {
    let tol = Tolerance::relative(tol);
    Ok(rel(c_of_t(sol, t, tol)?, c_of_t_talbot(sol, t, nodes, tol)?))
}

/// `(up, down)` relative gaps for the two-level origin amplitudes.
pub fn spin_origin_vs_talbot(sol: &SpinSolution, t: f64, nodes: usize, tol: f64) -> Result<(f64, f64)> {
    let tol = Tolerance::relative(tol);
    let up = rel(c_up_of_t(sol, t, tol)?, c_up_of_t_talbot(sol, t, nodes, tol)?);
    let down = rel(c_down_of_t(sol, t, tol)?, c_down_of_t_talbot(sol, t, nodes, tol)?);
    Ok((up, down))
}

/// `|C(t) - rhs(t)|/|C(t)|` for the closed history equation.
pub fn consistency_residual(sol: &ScalarSolution, t: f64, tol: f64) -> Result<f64> {
    let lhs = c_of_t(sol, t, Tolerance::relative(tol))?;
    let rhs = consistency_rhs(sol, t, Tolerance::relative(10.0 * tol))?;
    Ok(rel(rhs, lhs))
}

/// L² distance to the asymptotic form at each time.
pub fn distances(evolution: &ScalarEvolution, grid: &MomentumGrid, times: &[f64]) -> Result<Vec<f64>> {
    times.iter().map(|&t| asymptotic_distance(evolution, grid, t)).collect()
}

/// Closed-form and finite-difference reports of a scalar channel.
pub fn scalar_delay_pair(params: &PhysParams, p0: f64, dp: f64, side: Side) -> Result<(DelayReport, DelayReport)> {
    let closed = delay_closed_form_scalar(params, p0, dp, side)?;
    let channel = Channel { side, level: Level::Scalar };
    let fd = delay_from_coefficient(scalar_coefficient(params, side), channel, p0, dp, params)?;
    Ok((closed, fd))
}

/// Closed-form transmission delay at `Ω = mg/ħp0`, `p0` fixed.
pub fn limit_delay(omega: f64, p0: f64, dp: f64) -> Result<f64> {
    let params = PhysParams::natural(omega * p0, 0.0)?;
    Ok(delay_closed_form_scalar(&params, p0, dp, Side::Transmit)?.delay)
}

/// Largest `|Im C'/C|` over the four two-level amplitudes on a fixed
/// `(g, ω, p0)` lattice.
pub fn spin_phase_drift() -> Result<f64> {
    let mut worst = 0.0f64;
    for g in [-3.0, -1.0, -0.3, 0.3, 1.0, 3.0] {
        for omega in [0.25, 1.0, 4.0] {
            let params = PhysParams::natural(g, omega)?;
            for p0 in [1.0, 2.5, 5.0, 9.0] {
                let pick: [fn(&deltawave_core::ChannelCoefficients) -> Complex64; 4] =
                    [|k| k.t_up, |k| k.r_up, |k| k.t_down, |k| k.r_down];
                for f in pick {
                    let rho = log_derivative(|p| f(&spin_channel_coefficients(&params, p).expect("p > 0")), p0)?;
                    worst = worst.max(rho.im.abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Largest lower-level density `|ψ↓(p,t)|²` with `p² < 2mħω`, sampled on
/// `nodes` points of the open gate interval.
pub fn analytic_gate(evolution: &SpinEvolution, t: f64, nodes: usize) -> Result<f64> {
    let edge = evolution.solution().params().flip_momentum_sq().sqrt();
    let mut worst = 0.0f64;
    for k in 0..nodes {
        let p = edge * (2.0 * (k as f64 + 0.5) / nodes as f64 - 1.0);
        worst = worst.max(evolution.down_at(p, t)?.norm_sqr());
    }
    Ok(worst)
}

/// As [`analytic_gate`] for the lattice lower level, by direct Fourier sums.
pub fn grid_gate(state: &GridState, params: &PhysParams, nodes: usize) -> f64 {
    let edge = params.flip_momentum_sq().sqrt();
    (0..nodes)
        .map(|k| {
            let p = edge * (2.0 * (k as f64 + 0.5) / nodes as f64 - 1.0);
            state.momentum_amplitude(&state.down, p, params.hbar()).norm_sqr()
        })
        .fold(0.0, f64::max)
}

/// `∫dx Δ_t[x] G(x)` for `G(x) = exp(-x²/2w²)`, so `G(0) = 1`.
pub fn smeared_delta(t: f64, w: f64) -> Result<Complex64> {
    let half = 10.0 * w;
    // one panel per few oscillations keeps every panel cheap
    let panels = ((2.0 * half * t / (2.0 * std::f64::consts::PI)).ceil() as usize).clamp(1, 4096);
    let h = 2.0 * half / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..panels {
        let a = -half + k as f64 * h;
        total += integrate_adaptive(
            |x| delta_t(x, t) * (-0.5 * x * x / (w * w)).exp(),
            a,
            a + h,
            Tolerance::new(1e-15, 1e-12),
        )?
        .value;
    }
    Ok(total)
}

/// A finished lattice run.
pub struct GridRun {
    pub state: GridState,
    pub trace: Vec<Snapshot>,
    pub initial_norm: f64,
}

/// Propagates the packet from `t = 0` to `t_final`, one snapshot every
/// `stride` steps.
#[allow(clippy::too_many_arguments)]
pub fn grid_run(
    params: &PhysParams,
    packet: &GaussianPacket,
    grid: SpatialGrid,
    dt: Option<f64>,
    t_final: f64,
    stride: usize,
    options: LatticeOptions,
    spinor: bool,
) -> Result<GridRun> {
    let mut state = init_from_packet(grid, packet, params, options.stencil, spinor)?;
    let initial_norm = state.norm(options.stencil);
    let dt = dt.unwrap_or_else(|| default_dt(params, &grid));
    let trace = Propagator::new(grid, params, dt, spinor, options)?.run_until(&mut state, t_final, stride)?;
    Ok(GridRun {
        state,
        trace,
        initial_norm,
    })
}

/// Probabilities of the scalar channels averaged over the packet,
/// `∫|T(p)|²|ψ₀(p)|² dp` and the same for `R`.
pub fn averaged_probabilities(params: &PhysParams, packet: &GaussianPacket) -> Result<(f64, f64)> {
    let hbar = params.hbar();
    let half = packet.support_half_width();
    let tol = Tolerance::relative(1e-13);
    let (lo, hi) = (packet.p0() - half, packet.p0() + half);
    let density = |p: f64| packet.amplitude(Complex64::new(p, 0.0), hbar).norm_sqr();
    let t = integrate_adaptive(|p| Complex64::new(transmission(params, p).norm_sqr() * density(p), 0.0), lo, hi, tol)?;
    let total = integrate_adaptive(|p| Complex64::new(density(p), 0.0), lo, hi, tol)?;
    let t = t.value.re / total.value.re;
    Ok((t, 1.0 - t))
}

/// `(‖ψ_grid - ψ_T‖, ‖ψ_T‖)` over the nodes with `x > 0`, where `ψ_T` is
/// the assembled transmitted packet at the state time.
pub fn transmitted_field_gap(state: &GridState, params: &PhysParams, packet: &GaussianPacket) -> Result<(f64, f64)> {
    let grid = state.grid;
    let nodes: Vec<usize> = (grid.origin_index() + 1..grid.len()).collect();
    let xs: Vec<f64> = nodes.iter().map(|&j| grid.x(j)).collect();
    let assembled = deltawave_core::delay::assemble_transmitted(
        |p| transmission(params, p),
        packet,
        params,
        state.time,
        &xs,
        Tolerance::new(1e-14, 1e-10),
    )?;
    let (mut gap, mut norm) = (0.0, 0.0);
    for (&j, a) in nodes.iter().zip(&assembled) {
        gap += (state.up[j] - a).norm_sqr();
        norm += a.norm_sqr();
    }
    Ok(((gap * grid.dx()).sqrt(), (norm * grid.dx()).sqrt()))
}

/// Symmetric grid holding every channel packet up to `t_end` with eight
/// spread widths to spare.
pub fn delay_grid(params: &PhysParams, packet: &GaussianPacket, t_end: f64, dx: f64) -> Result<SpatialGrid> {
    let mass = params.mass();
    let sigma0 = packet.position_width(params.hbar());
    let spread = (sigma0 * sigma0 + (packet.dp() * t_end / mass).powi(2)).sqrt();
    let p_fast = (packet.p0().powi(2) + params.flip_momentum_sq()).sqrt() + 2.0 * packet.dp();
    let reach = packet.x0().abs().max(packet.x0() + p_fast * t_end / mass) + 8.0 * spread;
    SpatialGrid::spanning(-reach, reach, dx)
}

/// Centroid-fit delays of `channels` from one lattice run: silent
/// propagation to the separation time (six widths), then a trace over
/// `fit_span` with a snapshot every `stride` steps.
#[allow(clippy::too_many_arguments)]
pub fn centroid_delays(
    params: &PhysParams,
    packet: &GaussianPacket,
    grid: SpatialGrid,
    dt: f64,
    fit_span: f64,
    stride: usize,
    options: LatticeOptions,
    channels: &[Channel],
) -> Result<(Vec<DelayReport>, GridState, Vec<Snapshot>)> {
    let spinor = channels.iter().any(|c| c.level != Level::Scalar);
    let mut state = init_from_packet(grid, packet, params, options.stencil, spinor)?;
    let mut propagator = Propagator::new(grid, params, dt, spinor, options)?;
    let t0 = separation_time(params, packet, 6.0);
    propagator.run_until(&mut state, t0, usize::MAX)?;
    let trace = propagator.run_until(&mut state, t0 + fit_span, stride)?;
    let reports = channels
        .iter()
        .map(|&c| delay_from_centroid(&trace, c, params, packet))
        .collect::<Result<Vec<_>>>()?;
    Ok((reports, state, trace))
}

/// All four channels of the two-level problem.
pub const SPIN_CHANNELS: [Channel; 4] = [
    Channel { side: Side::Transmit, level: Level::Up },
    Channel { side: Side::Reflect, level: Level::Up },
    Channel { side: Side::Transmit, level: Level::Down },
    Channel { side: Side::Reflect, level: Level::Down },
];

/// Finite-difference delays of the four two-level channels at `p0`.
pub fn spin_coefficient_delays(params: &PhysParams, p0: f64, dp: f64) -> Result<Vec<DelayReport>> {
    SPIN_CHANNELS
        .iter()
        .map(|&channel| {
            let coef = move |p: f64| {
                let k = spin_channel_coefficients(params, p).expect("p > 0");
                match (channel.side, channel.level) {
                    (Side::Transmit, Level::Down) => k.t_down,
                    (Side::Reflect, Level::Down) => k.r_down,
                    (Side::Transmit, _) => k.t_up,
                    (Side::Reflect, _) => k.r_up,
                }
            };
            delay_from_coefficient(coef, channel, p0, dp, params)
        })
        .collect()
}

/// Default lattice time step for spacing `dx`.
pub fn lattice_dt(params: &PhysParams, dx: f64) -> f64 {
    params.mass() * dx * dx / params.hbar()
}

/// Exact two-level evolution for the given setup.
pub fn spin_evolution(params: &PhysParams, packet: &GaussianPacket, tol: f64) -> Result<SpinEvolution> {
    SpinSolution::new(*params, *packet).exact(tol)
}
