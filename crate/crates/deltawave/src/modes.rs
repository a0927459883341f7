use std::path::Path;

use deltawave_core::delay::{Channel, DelayReport, Level, Side};
use deltawave_core::lattice::{Coupling, LatticeOptions, Snapshot, SpatialGrid};
use deltawave_core::quadrature::Tolerance;
use deltawave_core::scalar::{c_of_t_talbot, psi_p_asymptotic, transmission_reflection, ScalarSolution};
use deltawave_core::spin::{c_down_of_t_talbot, c_up_of_t_talbot, psi_down_asymptotic, psi_up_asymptotic, spin_channel_coefficients, SpinSolution};
use deltawave_core::{Complex64, MomentumGrid, PhysParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::checks;
use crate::config::{Mode, ScanVariable, ScenarioConfig};
use crate::error::CliError;
use crate::output::{unit, Cell, DelayJson, Quantity, Table};
use crate::plot::{Plot, Series};

/// Files written by a mode, with their plots.
#[derive(Default)]
pub struct Artifacts {
    pub files: Vec<String>,
    pub plots: Vec<Plot>,
}

impl Artifacts {
    fn table(&mut self, dir: &Path, name: &str, table: &Table) -> Result<(), CliError> {
        table.write(&dir.join(name))?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
        crate::output::write_json(&dir.join(name), value)?;
        self.files.push(name.to_string());
        Ok(())
    }
}

pub fn run_mode(config: &ScenarioConfig, dir: &Path, art: &mut Artifacts) -> Result<Vec<Quantity>, CliError> {
    match config.mode {
        Mode::Coeffs => coeffs(config, dir, art),
        Mode::SpinCoeffs => spin_coeffs(config, dir, art),
        Mode::EvolveExact => evolve_exact(config, dir, art),
        Mode::EvolveGrid => evolve_grid(config, dir, art),
        Mode::DelayScan => delay_scan(config, dir, art),
        Mode::SpinEvolve => spin_evolve(config, dir, art),
        Mode::SpinDelay => spin_delay(config, dir, art),
        Mode::Crosscheck => crosscheck(config),
    }
}

/// `count` evenly spaced points, `lo` alone when `count = 1`.
fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
        .collect()
}

fn sweep(config: &ScenarioConfig) -> Vec<f64> {
    if config.sweep_count == 1 {
        vec![config.p0]
    } else {
        linspace(config.sweep_min, config.sweep_max, config.sweep_count)
    }
}

fn coeffs(config: &ScenarioConfig, dir: &Path, art: &mut Artifacts) -> Result<Vec<Quantity>, CliError> {
    let params = config.scalar_params();
    let one = Some(unit::ONE);
    let mut table = Table::new(&[
        ("p", Some(unit::MOMENTUM)),
        ("omega_coupling", one),
        ("t_re", one),
        ("t_im", one),
        ("r_re", one),
        ("r_im", one),
        ("prob_trans", one),
        ("prob_refl", one),
        ("flux", one),
    ]);
    let mut worst = 0.0f64;
    for p in sweep(config) {
        let k = transmission_reflection(&params, p)?;
        let (pt, pr) = (k.t_up.norm_sqr(), k.r_up.norm_sqr());
        worst = worst.max((pt + pr - 1.0).abs());
        table.push_nums(&[
            p,
            params.coupling_momentum() / p,
            k.t_up.re,
            k.t_up.im,
            k.r_up.re,
            k.r_up.im,
            pt,
            pr,
            pt + pr,
        ]);
    }
    art.table(dir, "coeffs.csv", &table)?;
    art.plots.push(Plot::new("coeffs.csv", "channel probabilities", 1, &[7, 8]));
    Ok(vec![Quantity::below("max_flux_deviation", unit::ONE, worst, 1e-14)])
}

fn spin_coeffs(config: &ScenarioConfig, dir: &Path, art: &mut Artifacts) -> Result<Vec<Quantity>, CliError> {
    let params = config.params();
    let one = Some(unit::ONE);
    let mut table = Table::new(&[
        ("p", Some(unit::MOMENTUM)),
        ("p_down", Some(unit::MOMENTUM)),
        ("t_up_re", one),
        ("t_up_im", one),
        ("r_up_re", one),
        ("r_up_im", one),
        ("t_down_re", one),
        ("t_down_im", one),
        ("r_down_re", one),
        ("r_down_im", one),
        ("flux", one),
    ]);
    let mut worst = 0.0f64;
    for p in sweep(config) {
        let k = spin_channel_coefficients(&params, p)?;
        let flux = k.flux_sum(&params);
        worst = worst.max((flux - 1.0).abs());
        let p_down = (p * p + params.flip_momentum_sq()).sqrt();
        table.push_nums(&[
            p, p_down, k.t_up.re, k.t_up.im, k.r_up.re, k.r_up.im, k.t_down.re, k.t_down.im, k.r_down.re, k.r_down.im, flux,
        ]);
    }
    art.table(dir, "spin_coeffs.csv", &table)?;
    art.plots.push(Plot::new("spin_coeffs.csv", "flux sum", 1, &[11]));
    let mut out = vec![Quantity::below("max_flux_deviation", unit::ONE, worst, 1e-12)];
    if params.coupling() != 0.0 {
        for r in checks::spin_coefficient_delays(&params, config.p0, config.dp)? {
            let energy = config.p0 * config.p0 / (2.0 * config.mass);
            out.push(Quantity::below(
                format!("coefficient_delay_{}_scaled", r.channel),
                unit::ONE,
                r.delay * energy / config.hbar,
                1e-9,
            ));
        }
    }
    Ok(out)
}

/// `-x0 m/p0`, when the packet centre reaches the origin.
fn arrival_time(config: &ScenarioConfig) -> f64 {
    -config.x0 * config.mass / config.p0
}

fn times(config: &ScenarioConfig) -> Vec<f64> {
    linspace(0.0, config.t_final, config.t_count)
}

fn momentum_grid(config: &ScenarioConfig) -> Result<MomentumGrid, CliError> {
    Ok(MomentumGrid::symmetric(config.p_max(), config.p_nodes)?)
}

fn evolve_exact(config: &ScenarioConfig, dir: &Path, art: &mut Artifacts) -> Result<Vec<Quantity>, CliError> {
    let params = config.scalar_params();
    let packet = config.packet();
    let sol = ScalarSolution::new(params, packet)?;
    let ev = sol.exact(Tolerance::relative(config.tol))?;
    let amp = Some(unit::ORIGIN);
    let mut origin = Table::new(&[("t", Some(unit::TIME)), ("c_re", amp), ("c_im", amp), ("c_abs", amp)]);
    for t in times(config) {
        let c = ev.origin(t)?;
        origin.push_nums(&[t, c.re, c.im, c.norm()]);
    }
    art.table(dir, "origin.csv", &origin)?;
    art.plots.push(Plot::new("origin.csv", "origin amplitude", 1, &[4]));

    let t = config.t_final;
    let grid = momentum_grid(config)?;
    let a = Some(unit::AMPLITUDE_P);
    let mut table = Table::new(&[
        ("p", Some(unit::MOMENTUM)),
        ("psi_re", a),
        ("psi_im", a),
        ("psi_asym_re", a),
        ("psi_asym_im", a),
        ("density", Some(unit::DENSITY_P)),
    ]);
    let (mut norm, mut right) = (0.0, 0.0);
    for (&p, &w) in grid.p_values().iter().zip(grid.weights()) {
        let psi = ev.at(p, t)?;
        let asym = psi_p_asymptotic(&sol, p, t);
        let rho = psi.norm_sqr();
        norm += rho * w;
        if p > 0.0 {
            right += rho * w;
        }
        table.push_nums(&[p, psi.re, psi.im, asym.re, asym.im, rho]);
    }
    art.table(dir, "momentum.csv", &table)?;
    art.plots.push(Plot::new("momentum.csv", "momentum density at t_final", 1, &[6]));

    let distance = deltawave_core::scalar::asymptotic_distance(&ev, &grid, t)?;
    let (avg_t, _) = checks::averaged_probabilities(&params, &packet)?;
    // Talbot has an absolute floor, so compare while the packet covers the origin
    let t_arrival = arrival_time(config);
    let tol = Tolerance::relative(config.tol);
    let talbot = c_of_t_talbot(&sol, t_arrival, config.talbot_nodes, tol)?;
    let closed = ev.origin(t_arrival)?;
    Ok(vec![
        Quantity::against("norm", unit::ONE, norm, 1.0, 1e-9),
        Quantity::info("asymptotic_distance", unit::ONE, distance),
        Quantity::against("momentum_weight_right_vs_average_transmission", unit::ONE, right, avg_t, 1e-6),
        Quantity::info("arrival_time", unit::TIME, t_arrival),
        Quantity::below("origin_closed_vs_talbot_at_arrival", unit::ONE, (closed - talbot).norm() / talbot.norm(), 1e-6),
    ])
}

fn trace_table(trace: &[Snapshot]) -> Table {
    let one = Some(unit::ONE);
    let mut table = Table::new(&[
        ("time", Some(unit::TIME)),
        ("norm", one),
        ("prob_trans_up", one),
        ("prob_refl_up", one),
        ("prob_trans_down", one),
        ("prob_refl_down", one),
        ("centroid_trans", Some(unit::LENGTH)),
        ("centroid_refl", Some(unit::LENGTH)),
    ]);
    for s in trace {
        table.push_nums(&[
            s.time,
            s.norm,
            s.up.prob_right,
            s.up.prob_left,
            s.down.prob_right,
            s.down.prob_left,
            s.centroid_trans(),
            s.centroid_refl(),
        ]);
    }
    table
}

fn norm_drift(trace: &[Snapshot], initial: f64) -> f64 {
    trace.iter().map(|s| (s.norm - initial).abs()).fold(0.0, f64::max)
}

fn evolve_grid(config: &ScenarioConfig, dir: &Path, art: &mut Artifacts) -> Result<Vec<Quantity>, CliError> {
    let params = config.scalar_params();
    let packet = config.packet();
    let grid = SpatialGrid::for_run_with_dx(&params, &packet, config.t_final, config.dx())?;
    let run = checks::grid_run(
        &params,
        &packet,
        grid,
        Some(config.dt()),
        config.t_final,
        config.stride,
        config.lattice_options(),
        false,
    )?;
    art.table(dir, "trace.csv", &trace_table(&run.trace))?;
    art.plots.push(Plot::new("trace.csv", "half-line probabilities", 1, &[3, 4]));
    art.plots.push(Plot::new("trace.csv", "centroids", 1, &[7, 8]));

    let last = run.trace.last().expect("trace holds the initial state");
    let (avg_t, avg_r) = checks::averaged_probabilities(&params, &packet)?;
    let k = transmission_reflection(&params, config.p0)?;
    let (gap, norm) = checks::transmitted_field_gap(&run.state, &params, &packet)?;
    Ok(vec![
        Quantity::info("nodes", unit::ONE, grid.len() as f64),
        Quantity::info("dx", unit::LENGTH, grid.dx()),
        Quantity::below("norm_drift", unit::ONE, norm_drift(&run.trace, run.initial_norm), 1e-9),
        Quantity::against("prob_trans_vs_average", unit::ONE, last.up.prob_right, avg_t, 1e-3),
        Quantity::against("prob_refl_vs_average", unit::ONE, last.up.prob_left, avg_r, 1e-3),
        Quantity::info("prob_trans_at_p0", unit::ONE, k.t_up.norm_sqr()),
        Quantity::below("transmitted_field_l2_relative", unit::ONE, gap / norm, 1e-3),
        Quantity::info("edge_density", unit::ONE, run.state.edge_density()),
    ])
}

/// Delay reports of one scan point.
#[derive(Serialize)]
struct ScanPoint {
    index: usize,
    g: f64,
    p0: f64,
    reports: Vec<DelayJson>,
}

struct PointResult {
    g: f64,
    p0: f64,
    pairs: Vec<(DelayReport, DelayReport)>,
    centroids: Vec<DelayReport>,
}

fn scan_point(config: &ScenarioConfig, g: f64, p0: f64) -> Result<PointResult, CliError> {
    let params = config.scalar_params().with_coupling(g)?;
    let packet = config.delay_packet();
    let packet = deltawave_core::GaussianPacket::new(p0, packet.dp(), packet.x0())?;
    let sides: &[Side] = if g == 0.0 { &[Side::Transmit] } else { &[Side::Transmit, Side::Reflect] };
    let pairs = sides
        .iter()
        .map(|&side| checks::scalar_delay_pair(&params, p0, packet.dp(), side))
        .collect::<Result<Vec<_>, _>>()?;
    let mut centroids = Vec::new();
    if config.scan_centroid {
        let channels: Vec<Channel> = sides.iter().map(|&side| Channel { side, level: Level::Scalar }).collect();
        let dx = config.delay_dx.unwrap_or(config.hbar / (8.0 * p0));
        let dt = config.delay_dt.unwrap_or(0.8 * config.mass * dx * dx / config.hbar);
        let t_end = deltawave_core::delay::separation_time(&params, &packet, 6.0) + config.fit_span;
        let grid = checks::delay_grid(&params, &packet, t_end, dx)?;
        let options = LatticeOptions {
            stencil: config.stencil,
            coupling: if config.matched { Coupling::Matched(p0) } else { Coupling::Bare },
        };
        let stride = fit_stride(config.fit_span, dt);
        centroids = checks::centroid_delays(&params, &packet, grid, dt, config.fit_span, stride, options, &channels)?.0;
    }
    Ok(PointResult { g, p0, pairs, centroids })
}

/// Steps between snapshots so that a fit sees about 40 of them.
fn fit_stride(span: f64, dt: f64) -> usize {
    ((span / dt / 40.0).floor() as usize).max(1)
}

/// Thread pool capped by `DELTAWAVE_THREADS` when set.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var("DELTAWAVE_THREADS") {
        let n: usize = value.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| CliError::Validation {
            field: "DELTAWAVE_THREADS",
            reason: format!("`{value}` is not a positive integer"),
        })?;
        builder = builder.num_threads(n);
    }
    Ok(builder.build().expect("thread pool"))
}

fn delay_scan(config: &ScenarioConfig, dir: &Path, art: &mut Artifacts) -> Result<Vec<Quantity>, CliError> {
    let values = linspace(config.scan_min, config.scan_max, config.scan_count);
    let points: Vec<(f64, f64)> = values
        .iter()
        .map(|&v| match config.scan {
            ScanVariable::Coupling => (v, config.p0),
            ScanVariable::Momentum => (config.g, v),
        })
        .collect();
    // collect keeps the index order whatever the scheduling
    let results: Vec<Result<PointResult, CliError>> =
        thread_pool()?.install(|| points.par_iter().map(|&(g, p0)| scan_point(config, g, p0)).collect());

    let mut table = Table::new(&[
        ("index", Some(unit::ONE)),
        ("g", Some(unit::COUPLING)),
        ("p0", Some(unit::MOMENTUM)),
        ("channel", None),
        ("method", None),
        ("v_mean", Some(unit::VELOCITY)),
        ("delay", Some(unit::TIME)),
        ("fit_residual", Some(unit::LENGTH)),
    ]);
    let mut json = Vec::new();
    let mut quantities = Vec::new();
    for (index, result) in results.into_iter().enumerate() {
        let point = result?;
        let mut reports: Vec<DelayReport> = Vec::new();
        for (closed, fd) in &point.pairs {
            reports.push(*closed);
            reports.push(*fd);
            let name = format!("point{index}_{}_closed_vs_fd", closed.channel);
            quantities.push(if closed.delay == 0.0 {
                Quantity::below(name, unit::TIME, fd.delay, 1e-12)
            } else {
                Quantity::relative(name, unit::TIME, fd.delay, closed.delay, 1e-8)
            });
        }
        for c in &point.centroids {
            reports.push(*c);
            let closed = point.pairs.iter().find(|(k, _)| k.channel == c.channel).expect("same channels").0;
            let name = format!("point{index}_{}_centroid_vs_closed", c.channel);
            quantities.push(if closed.delay == 0.0 {
                Quantity::info(name, unit::TIME, c.delay)
            } else {
                Quantity::relative(name, unit::TIME, c.delay, closed.delay, 0.05)
            });
        }
        for r in &reports {
            table.push(&[
                Cell::Int(index),
                Cell::Num(point.g),
                Cell::Num(point.p0),
                Cell::Text(r.channel.tag()),
                Cell::Text(r.method.tag()),
                Cell::Num(r.v_mean),
                Cell::Num(r.delay),
                Cell::Num(r.fit_residual.unwrap_or(f64::NAN)),
            ]);
        }
        json.push(ScanPoint {
            index,
            g: point.g,
            p0: point.p0,
            reports: reports.iter().map(DelayJson::from).collect(),
        });
    }
    art.table(dir, "delays.csv", &table)?;
    art.json(dir, "delays.json", &json)?;
    let x = if config.scan == ScanVariable::Coupling { 2 } else { 3 };
    art.plots.push(Plot {
        file: "delays.csv".into(),
        title: "closed-form delays".into(),
        series: vec![
            Series::filtered(x, 7, 4, "transmit", 5, "closed_form"),
            Series::filtered(x, 7, 4, "reflect", 5, "closed_form"),
        ],
    });
    Ok(quantities)
}

fn spin_evolve(config: &ScenarioConfig, dir: &Path, art: &mut Artifacts) -> Result<Vec<Quantity>, CliError> {
    let params = config.params();
    let packet = config.packet();
    let sol = SpinSolution::new(params, packet);
    let ev = sol.exact(Tolerance::relative(config.tol))?;
    let amp = Some(unit::ORIGIN);
    let mut origin = Table::new(&[
        ("t", Some(unit::TIME)),
        ("c_up_re", amp),
        ("c_up_im", amp),
        ("c_down_re", amp),
        ("c_down_im", amp),
    ]);
    for t in times(config) {
        let (u, d) = (ev.origin_up(t)?, ev.origin_down(t)?);
        origin.push_nums(&[t, u.re, u.im, d.re, d.im]);
    }
    art.table(dir, "origin.csv", &origin)?;
    art.plots.push(Plot::new("origin.csv", "origin amplitudes", 1, &[2, 4]));

    let t = config.t_final;
    let grid = momentum_grid(config)?;
    let a = Some(unit::AMPLITUDE_P);
    let mut table = Table::new(&[
        ("p", Some(unit::MOMENTUM)),
        ("up_re", a),
        ("up_im", a),
        ("down_re", a),
        ("down_im", a),
        ("up_asym_re", a),
        ("up_asym_im", a),
        ("down_asym_re", a),
        ("down_asym_im", a),
        ("density_up", Some(unit::DENSITY_P)),
        ("density_down", Some(unit::DENSITY_P)),
    ]);
    let (mut norm, mut distance) = (0.0, 0.0);
    for (&p, &w) in grid.p_values().iter().zip(grid.weights()) {
        let (u, d) = (ev.up_at(p, t)?, ev.down_at(p, t)?);
        let (ua, da) = (psi_up_asymptotic(&sol, p, t), psi_down_asymptotic(&sol, p, t));
        norm += (u.norm_sqr() + d.norm_sqr()) * w;
        distance += ((u - ua).norm_sqr() + (d - da).norm_sqr()) * w;
        table.push_nums(&[p, u.re, u.im, d.re, d.im, ua.re, ua.im, da.re, da.im, u.norm_sqr(), d.norm_sqr()]);
    }
    art.table(dir, "momentum.csv", &table)?;
    art.plots.push(Plot::new("momentum.csv", "momentum densities at t_final", 1, &[10, 11]));

    let t_arrival = arrival_time(config);
    let tol = Tolerance::relative(config.tol);
    let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm();
    Ok(vec![
        Quantity::against("norm", unit::ONE, norm, 1.0, 1e-9),
        Quantity::info("asymptotic_distance", unit::ONE, distance.sqrt()),
        Quantity::info("gate_density_max", unit::DENSITY_P, checks::analytic_gate(&ev, t, 64)?),
        Quantity::info("arrival_time", unit::TIME, t_arrival),
        Quantity::below(
            "origin_up_closed_vs_talbot_at_arrival",
            unit::ONE,
            rel(ev.origin_up(t_arrival)?, c_up_of_t_talbot(&sol, t_arrival, config.talbot_nodes, tol)?),
            1e-6,
        ),
        Quantity::below(
            "origin_down_closed_vs_talbot_at_arrival",
            unit::ONE,
            rel(ev.origin_down(t_arrival)?, c_down_of_t_talbot(&sol, t_arrival, config.talbot_nodes, tol)?),
            1e-6,
        ),
    ])
}

/// Centroid delays of the four two-level channels and the lattice gate at
/// the end of the fitted trace.
struct SpinGrid {
    reports: Vec<DelayReport>,
    trace: Vec<Snapshot>,
    gate: f64,
    time: f64,
}

fn spin_grid(config: &ScenarioConfig, params: &PhysParams) -> Result<SpinGrid, CliError> {
    let packet = config.packet();
    let (dx, dt) = (config.delay_dx(), config.delay_dt());
    let t_end = deltawave_core::delay::separation_time(params, &packet, 6.0) + config.fit_span;
    let grid = SpatialGrid::for_run_with_dx(params, &packet, t_end, dx)?;
    let stride = fit_stride(config.fit_span, dt);
    let (reports, state, trace) = checks::centroid_delays(
        params,
        &packet,
        grid,
        dt,
        config.fit_span,
        stride,
        config.lattice_options(),
        &checks::SPIN_CHANNELS,
    )?;
    Ok(SpinGrid {
        reports,
        trace,
        gate: checks::grid_gate(&state, params, 64),
        time: state.time,
    })
}

fn spin_delay(config: &ScenarioConfig, dir: &Path, art: &mut Artifacts) -> Result<Vec<Quantity>, CliError> {
    let params = config.params();
    let energy = config.p0 * config.p0 / (2.0 * config.mass);
    let scale = energy / config.hbar;
    let mut reports = checks::spin_coefficient_delays(&params, config.p0, config.dp)?;
    let mut quantities: Vec<Quantity> = reports
        .iter()
        .map(|r| Quantity::below(format!("coefficient_delay_{}_scaled", r.channel), unit::ONE, r.delay * scale, 1e-9))
        .collect();
    let run = spin_grid(config, &params)?;
    for r in &run.reports {
        quantities.push(Quantity::below(format!("centroid_delay_{}_scaled", r.channel), unit::ONE, r.delay * scale, 0.05));
    }
    quantities.push(Quantity::info("gate_time", unit::TIME, run.time));
    quantities.push(Quantity::below("grid_gate_density_max", unit::DENSITY_P, run.gate, 1e-12));
    reports.extend(run.reports);
    let json: Vec<DelayJson> = reports.iter().map(DelayJson::from).collect();
    art.json(dir, "delays.json", &json)?;
    art.table(dir, "trace.csv", &trace_table(&run.trace))?;
    art.plots.push(Plot::new("trace.csv", "channel probabilities over the fit", 1, &[3, 4, 5, 6]));
    art.plots.push(Plot::new("trace.csv", "centroids over the fit", 1, &[7, 8]));
    Ok(quantities)
}

/// The check list of `crosscheck`, in a fixed order.
pub fn crosscheck(config: &ScenarioConfig) -> Result<Vec<Quantity>, CliError> {
    let mut q = Vec::new();
    let scalar = config.scalar_params();
    let spin = config.params();
    let packet = config.packet();
    let tol = config.tol;
    let one = unit::ONE;

    q.push(Quantity::below("unitarity_max_deviation", one, checks::unitarity_deviation(config.seed, config.samples)?, 1e-14));
    q.push(Quantity::below("spin_flux_max_deviation", one, checks::spin_flux_deviation(config.seed, config.samples)?, 1e-13));

    let sol = ScalarSolution::new(scalar, packet)?;
    let ssol = SpinSolution::new(spin, packet);
    for t in [0.2, 1.0, 5.0] {
        q.push(Quantity::below(format!("origin_vs_talbot_t{t}"), one, checks::origin_vs_talbot(&sol, t, config.talbot_nodes, tol)?, 1e-6));
        let (up, down) = checks::spin_origin_vs_talbot(&ssol, t, config.talbot_nodes, tol)?;
        q.push(Quantity::below(format!("origin_up_vs_talbot_t{t}"), one, up, 1e-6));
        q.push(Quantity::below(format!("origin_down_vs_talbot_t{t}"), one, down, 1e-6));
    }
    q.push(Quantity::below("consistency_residual_t1", one, checks::consistency_residual(&sol, 1.0, tol)?, 1e-6));

    let ev = sol.exact(Tolerance::relative(tol))?;
    let grid = momentum_grid(config)?;
    let d = checks::distances(&ev, &grid, &[5.0, 20.0, 80.0])?;
    for (t, v) in [5.0, 20.0, 80.0].iter().zip(&d) {
        q.push(Quantity::info(format!("asymptotic_distance_t{t}"), one, *v));
    }
    q.push(Quantity::holds("asymptotic_distance_decreasing", d[0] > d[1] && d[1] > d[2]));
    q.push(Quantity::below("asymptotic_distance_final", one, d[2], 1e-3));

    let dpk = config.delay_packet();
    for g in [config.g.abs(), -config.g.abs()] {
        let params = scalar.with_coupling(g)?;
        for side in [Side::Transmit, Side::Reflect] {
            let (closed, fd) = checks::scalar_delay_pair(&params, config.p0, dpk.dp(), side)?;
            q.push(Quantity::relative(format!("delay_{}_g{g}_fd_vs_closed", closed.channel), unit::TIME, fd.delay, closed.delay, 1e-8));
        }
        let (closed, _) = checks::scalar_delay_pair(&params, config.p0, dpk.dp(), Side::Transmit)?;
        q.push(Quantity::holds(format!("delay_sign_matches_g{g}"), closed.delay.signum() == g.signum()));
    }
    {
        let t_end = deltawave_core::delay::separation_time(&scalar, &dpk, 6.0) + config.fit_span;
        let (dx, dt) = (config.delay_dx(), config.delay_dt());
        let dgrid = checks::delay_grid(&scalar, &dpk, t_end, dx)?;
        let (reports, _, _) = checks::centroid_delays(
            &scalar,
            &dpk,
            dgrid,
            dt,
            config.fit_span,
            fit_stride(config.fit_span, dt),
            config.lattice_options(),
            &[Channel::TRANSMIT, Channel::REFLECT],
        )?;
        for r in reports {
            let (closed, _) = checks::scalar_delay_pair(&scalar, config.p0, dpk.dp(), r.channel.side)?;
            q.push(Quantity::relative(format!("delay_{}_centroid_vs_closed", r.channel), unit::TIME, r.delay, closed.delay, 0.05));
        }
    }
    for omega in [1e-6, 1e6] {
        q.push(Quantity::below(format!("delay_limit_omega{omega:e}"), unit::TIME, checks::limit_delay(omega, config.p0, dpk.dp())?, 1e-5));
    }

    q.push(Quantity::below("spin_phase_drift_max", unit::DENSITY_P, checks::spin_phase_drift()?, 1e-10));
    let run = spin_grid(config, &spin)?;
    let scale = config.p0 * config.p0 / (2.0 * config.mass * config.hbar);
    for r in &run.reports {
        q.push(Quantity::below(format!("spin_centroid_delay_{}_scaled", r.channel), one, r.delay * scale, 0.05));
    }
    let sev = checks::spin_evolution(&spin, &packet, 1e-12)?;
    q.push(Quantity::below("gate_analytic", unit::DENSITY_P, checks::analytic_gate(&sev, run.time, 64)?, 1e-12));
    q.push(Quantity::below("gate_grid", unit::DENSITY_P, run.gate, 1e-12));

    // the smeared kernel tends to π G(0): weight π on each side of x = 0
    let smeared = checks::smeared_delta(1e3, 0.1)?;
    q.push(Quantity::relative("smeared_delta_t1000_re", one, smeared.re, std::f64::consts::PI, 1e-2));
    q.push(Quantity::below("smeared_delta_t1000_im", one, smeared.im, 1e-2));

    let grid_bench = SpatialGrid::for_run_with_dx(&scalar, &packet, config.t_final, config.dx())?;
    let bench = checks::grid_run(&scalar, &packet, grid_bench, Some(config.dt()), config.t_final, usize::MAX, config.lattice_options(), false)?;
    let last = bench.trace.last().expect("trace holds the initial state");
    let k = transmission_reflection(&scalar, config.p0)?;
    q.push(Quantity::below("grid_norm_drift", one, norm_drift(&bench.trace, bench.initial_norm), 1e-9));
    q.push(Quantity::against("grid_prob_trans", one, last.up.prob_right, k.t_up.norm_sqr(), 1e-3));
    q.push(Quantity::against("grid_prob_refl", one, last.up.prob_left, k.r_up.norm_sqr(), 1e-3));
    let (gap, norm) = checks::transmitted_field_gap(&bench.state, &scalar, &packet)?;
    q.push(Quantity::below("grid_transmitted_field_l2", one, gap / norm, 1e-3));
    Ok(q)
}
