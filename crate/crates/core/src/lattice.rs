//! Crank–Nicolson propagation on a uniform position grid, used as an
//! independent check of the closed forms.
//!
//! The grid Hamiltonian is written as a generalized problem
//! `iħ B ψ' = A ψ` with real symmetric tridiagonal `A` and `B`:
//!
//! * three-point stencil: `B = 1`, `A = -ħ²/2m D₂/dx²`;
//! * compact (Numerov) stencil: `B = (1, 10, 1)/12`, same `A`, fourth
//!   order in `dx`.
//!
//! A level energy `ħω` contributes `ħω B` to `A`; the point interaction
//! contributes `V₀` on the origin node, diagonal for a scalar state and
//! coupling the two levels of a spinor. One step solves
//! `(B + iτA) ψ_new = (B - iτA) ψ_old` with `τ = dt/2ħ`, which preserves
//! the weighted norm `dx ψ†Bψ` exactly. Outside the grid the wave function
//! is zero (hard walls).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math::{c, I};
#[allow(unused_imports)]
use crate::math::Float;
use crate::system::{GaussianPacket, PhysParams};
use crate::{Error, Result};

/// Nodes `x_j = (j - origin_index) dx`, so that `x = 0` is a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    n: usize,
    dx: f64,
    origin_index: usize,
}

impl SpatialGrid {
    pub fn new(n: usize, dx: f64, origin_index: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "must be a power of two, at least 8",
            });
        }
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dx",
                reason: "must be positive and finite",
            });
        }
        if origin_index == 0 || origin_index >= n - 1 {
            return Err(Error::InvalidParameter {
                name: "origin_index",
                reason: "origin must be an interior node",
            });
        }
        Ok(SpatialGrid { n, dx, origin_index })
    }

    /// Smallest power-of-two grid covering `[x_lo, x_hi]`, padded evenly.
    pub fn spanning(x_lo: f64, x_hi: f64, dx: f64) -> Result<Self> {
        if !(x_lo < 0.0 && x_hi > 0.0) {
            return Err(Error::InvalidParameter {
                name: "x_lo",
                reason: "span must contain the origin",
            });
        }
        let left = (-x_lo / dx).ceil() as usize;
        let right = (x_hi / dx).ceil() as usize;
        let n = (left + right + 1).next_power_of_two().max(8);
        let pad = n - (left + right + 1);
        Self::new(n, dx, left + pad / 2)
    }

    /// Default grid for a run to `t_final`: `dx = ħ/20p0`, and room for the
    /// fastest channel (momentum `sqrt(p0² + 2mħω)`) to travel `t_final`
    /// in either direction with ten spread widths to spare.
    pub fn for_run(params: &PhysParams, packet: &GaussianPacket, t_final: f64) -> Result<Self> {
        Self::for_run_with_dx(params, packet, t_final, params.hbar() / (20.0 * packet.p0()))
    }

    /// [`for_run`](Self::for_run) with a chosen spacing.
    pub fn for_run_with_dx(params: &PhysParams, packet: &GaussianPacket, t_final: f64, dx: f64) -> Result<Self> {
        let hbar = params.hbar();
        let mass = params.mass();
        let sigma0 = packet.position_width(hbar);
        let spread = (sigma0 * sigma0 + (packet.dp() * t_final / mass).powi(2)).sqrt();
        let p_fast = (packet.p0() * packet.p0() + params.flip_momentum_sq()).sqrt() + 2.0 * packet.dp();
        let reach = (packet.x0() + p_fast * t_final / mass).max(0.0) + 10.0 * spread;
        let start = packet.x0() - 10.0 * sigma0.max(spread);
        Self::spanning(start.min(-reach), reach.max(-packet.x0()), dx)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn origin_index(&self) -> usize {
        self.origin_index
    }

    pub fn x(&self, j: usize) -> f64 {
        (j as f64 - self.origin_index as f64) * self.dx
    }

    pub fn x_min(&self) -> f64 {
        self.x(0)
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    ThreePoint,
    /// Numerov weights `(1, 10, 1)/12` on the time derivative.
    #[default]
    Compact,
}

impl Stencil {
    /// `(diagonal, off-diagonal)` of `B`.
    fn weights(self) -> (f64, f64) {
        match self {
            Stencil::ThreePoint => (1.0, 0.0),
            Stencil::Compact => (10.0 / 12.0, 1.0 / 12.0),
        }
    }
}

/// Representation of `g δ(x)` on the origin node.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Coupling {
    /// `V₀ = g/dx`; probabilities converge at first order in `dx`.
    #[default]
    Bare,
    /// `V₀` chosen so that the lattice transmission amplitude of the scalar
    /// problem equals `1/(1 + img/ħp)` at the given momentum.
    Matched(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LatticeOptions {
    pub stencil: Stencil,
    pub coupling: Coupling,
}

/// On-node coupling `V₀` for the given options.
///
/// With `B` weights `(b0, b1)` the free rows read `a(ψ_{j-1} + ψ_{j+1}) +
/// dψ_j = 0`, `a = -κ - E b1`, `κ = ħ²/2m dx²`, and a plane wave `e^{iθj}`
/// has `E = 2κ(1 - cos θ)/(b0 + 2 b1 cos θ)`. The origin row then gives
/// the transmission `1/(1 - iV₀/(2a sin θ))`.
pub fn origin_coupling(params: &PhysParams, dx: f64, options: &LatticeOptions) -> Result<f64> {
    let g = params.coupling();
    match options.coupling {
        Coupling::Bare => Ok(g / dx),
        Coupling::Matched(p) => {
            let hbar = params.hbar();
            let theta = p.abs() * dx / hbar;
            if !(theta > 0.0 && theta < core::f64::consts::PI) {
                return Err(Error::InvalidParameter {
                    name: "p_ref",
                    reason: "reference momentum must lie inside the lattice zone",
                });
            }
            let kappa = hbar * hbar / (2.0 * params.mass() * dx * dx);
            let (b0, b1) = options.stencil.weights();
            let energy = 2.0 * kappa * (1.0 - theta.cos()) / (b0 + 2.0 * b1 * theta.cos());
            let hop = kappa + energy * b1;
            Ok(2.0 * hop * theta.sin() * params.mass() * g / (hbar * p.abs()))
        }
    }
}

/// Wave function on the grid. A scalar state has an empty `down`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub grid: SpatialGrid,
    pub up: Vec<Complex64>,
    pub down: Vec<Complex64>,
    pub time: f64,
}

/// Density within this many nodes of either wall is monitored.
const EDGE_NODES: usize = 32;

impl GridState {
    pub fn is_spinor(&self) -> bool {
        !self.down.is_empty()
    }

    fn components(&self) -> impl Iterator<Item = &[Complex64]> {
        core::iter::once(self.up.as_slice()).chain((!self.down.is_empty()).then_some(self.down.as_slice()))
    }

    /// Local density `Re ψ_j^* (Bψ)_j`; sums to the conserved norm.
    pub fn density(&self, component: &[Complex64], stencil: Stencil) -> Vec<f64> {
        let (b0, b1) = stencil.weights();
        let n = component.len();
        (0..n)
            .map(|j| {
                let left = if j > 0 { component[j - 1] } else { c(0.0, 0.0) };
                let right = if j + 1 < n { component[j + 1] } else { c(0.0, 0.0) };
                (component[j].conj() * (component[j] * b0 + (left + right) * b1)).re
            })
            .collect()
    }

    /// `dx Σ ψ†Bψ` over both components.
    pub fn norm(&self, stencil: Stencil) -> f64 {
        self.components()
            .map(|comp| self.density(comp, stencil).iter().sum::<f64>())
            .sum::<f64>()
            * self.grid.dx
    }

    /// Largest `|ψ|²` within the outermost nodes.
    pub fn edge_density(&self) -> f64 {
        let n = self.grid.n;
        let k = EDGE_NODES.min(n / 4);
        self.components()
            .flat_map(|comp| comp[..k].iter().chain(&comp[n - k..]))
            .map(|z| z.norm_sqr())
            .fold(0.0, f64::max)
    }

    /// `dx/√(2πħ) Σ_j e^{-ipx_j/ħ} ψ_j`.
    pub fn momentum_amplitude(&self, component: &[Complex64], p: f64, hbar: f64) -> Complex64 {
        let sum: Complex64 = component
            .iter()
            .enumerate()
            .map(|(j, z)| z * Complex64::cis(-p * self.grid.x(j) / hbar))
            .sum();
        sum * (self.grid.dx / (2.0 * core::f64::consts::PI * hbar).sqrt())
    }

    /// Half-line probabilities and centroids of one component, the origin
    /// node split evenly between the two sides.
    pub fn half_lines(&self, component: &[Complex64], stencil: Stencil) -> HalfLines {
        if component.is_empty() {
            return HalfLines::default();
        }
        let rho = self.density(component, stencil);
        let o = self.grid.origin_index;
        let dx = self.grid.dx;
        let mut out = HalfLines::default();
        for (j, r) in rho.iter().enumerate() {
            let x = self.grid.x(j);
            let w = if j == o { 0.5 * r } else { *r };
            if j >= o {
                out.prob_right += w;
                out.moment_right += w * x;
            }
            if j <= o {
                out.prob_left += w;
                out.moment_left += w * x;
            }
        }
        out.prob_right *= dx;
        out.prob_left *= dx;
        out.moment_right *= dx;
        out.moment_left *= dx;
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HalfLines {
    pub prob_right: f64,
    pub prob_left: f64,
    /// `dx Σ x ρ` over the right half-line.
    pub moment_right: f64,
    pub moment_left: f64,
}

impl HalfLines {
    pub fn centroid_right(&self) -> f64 {
        self.moment_right / self.prob_right
    }

    pub fn centroid_left(&self) -> f64 {
        self.moment_left / self.prob_left
    }
}

/// Samples the initial packet on the grid, normalized to unit weighted
/// norm. `spinor` adds an empty lower level.
pub fn init_from_packet(
    grid: SpatialGrid,
    packet: &GaussianPacket,
    params: &PhysParams,
    stencil: Stencil,
    spinor: bool,
) -> Result<GridState> {
    let width = packet.position_width(params.hbar());
    let needed = packet.x0() - 6.0 * width;
    if grid.x_min() > needed {
        return Err(Error::GridTooNarrow {
            edge_ratio: (packet.x0() - grid.x_min()) / width,
        });
    }
    if grid.x_max() < packet.x0() + 6.0 * width {
        return Err(Error::GridTooNarrow {
            edge_ratio: (grid.x_max() - packet.x0()) / width,
        });
    }
    let up: Vec<Complex64> = (0..grid.n)
        .map(|j| packet.free_position(params, grid.x(j), 0.0))
        .collect();
    let down = if spinor { vec![c(0.0, 0.0); grid.n] } else { Vec::new() };
    let mut state = GridState {
        grid,
        up,
        down,
        time: 0.0,
    };
    let scale = 1.0 / state.norm(stencil).sqrt();
    for z in &mut state.up {
        *z *= scale;
    }
    Ok(state)
}

/// Factors of the constant tridiagonal `B + iτA` of one component,
/// eliminated from both ends towards the origin node. The two sweeps are
/// independent recurrences, which the loops below interleave.
#[derive(Debug, Clone)]
struct Chain {
    /// Uniform off-diagonal of the left-hand matrix.
    off: Complex64,
    /// Conjugated diagonal, i.e. the diagonal of `B - iτA`.
    diag_conj: Vec<Complex64>,
    /// Reciprocal pivots.
    inv_pivot: Vec<Complex64>,
    /// `off/pivot`: couples node `j` to `j+1` left of the origin and to
    /// `j-1` right of it once eliminated.
    link: Vec<Complex64>,
    origin: usize,
}

impl Chain {
    fn new(off: Complex64, diag: Vec<Complex64>, origin: usize) -> Self {
        let n = diag.len();
        let mut inv_pivot = vec![c(0.0, 0.0); n];
        let mut link = vec![c(0.0, 0.0); n];
        let mut prev = c(0.0, 0.0);
        for j in 0..origin {
            inv_pivot[j] = (diag[j] - off * prev).inv();
            prev = off * inv_pivot[j];
            link[j] = prev;
        }
        let mut next = c(0.0, 0.0);
        for k in (origin + 1..n).rev() {
            inv_pivot[k] = (diag[k] - off * next).inv();
            next = off * inv_pivot[k];
            link[k] = next;
        }
        inv_pivot[origin] = (diag[origin] - off * (prev + next)).inv();
        Chain {
            off,
            diag_conj: diag.iter().map(|d| d.conj()).collect(),
            inv_pivot,
            link,
            origin,
        }
    }

    /// `(B - iτA)ψ`.
    fn apply_conjugate(&self, psi: &[Complex64], out: &mut [Complex64]) {
        let n = psi.len();
        let off = self.off.conj();
        out[0] = self.diag_conj[0] * psi[0] + off * psi[1];
        for j in 1..n - 1 {
            out[j] = self.diag_conj[j] * psi[j] + off * (psi[j - 1] + psi[j + 1]);
        }
        out[n - 1] = self.diag_conj[n - 1] * psi[n - 1] + off * psi[n - 2];
    }

    /// Solves `(B + iτA)x = rhs` in place.
    fn solve(&self, x: &mut [Complex64]) {
        solve_interleaved([self], [x]);
    }
}

/// Solves `K` systems sharing the origin node in one pass, so that their
/// `2K` recurrences overlap.
#[allow(clippy::needless_range_loop)]
fn solve_interleaved<const K: usize>(chains: [&Chain; K], xs: [&mut [Complex64]; K]) {
    let n = xs[0].len();
    let o = chains[0].origin;
    let (left, right) = (o, n - 1 - o);
    let common = left.min(right);
    let zero = c(0.0, 0.0);
    // Elimination towards the origin: y_j = r_j/p_j - link_j y_{j∓1}.
    let mut up = [zero; K];
    let mut down = [zero; K];
    for i in 0..common {
        let (j, k) = (i, n - 1 - i);
        for m in 0..K {
            let (ip, link, x) = (&chains[m].inv_pivot, &chains[m].link, &mut *xs[m]);
            up[m] = x[j] * ip[j] - link[j] * up[m];
            x[j] = up[m];
            down[m] = x[k] * ip[k] - link[k] * down[m];
            x[k] = down[m];
        }
    }
    for m in 0..K {
        let (ch, x) = (chains[m], &mut *xs[m]);
        for j in common..left {
            up[m] = x[j] * ch.inv_pivot[j] - ch.link[j] * up[m];
            x[j] = up[m];
        }
        for k in (o + 1..n - common).rev() {
            down[m] = x[k] * ch.inv_pivot[k] - ch.link[k] * down[m];
            x[k] = down[m];
        }
        let centre = (x[o] - ch.off * (up[m] + down[m])) * ch.inv_pivot[o];
        x[o] = centre;
        up[m] = centre;
        down[m] = centre;
    }
    // Substitution outwards: x_j = y_j - link_j x_{j±1}.
    let extra_left = left - common;
    let extra_right = right - common;
    for m in 0..K {
        let (link, x) = (&chains[m].link, &mut *xs[m]);
        for j in (o - extra_left..o).rev() {
            up[m] = x[j] - link[j] * up[m];
            x[j] = up[m];
        }
        for k in o + 1..o + 1 + extra_right {
            down[m] = x[k] - link[k] * down[m];
            x[k] = down[m];
        }
    }
    for i in 0..common {
        let (j, k) = (o - extra_left - 1 - i, o + extra_right + 1 + i);
        for m in 0..K {
            let (link, x) = (&chains[m].link, &mut *xs[m]);
            up[m] = x[j] - link[j] * up[m];
            x[j] = up[m];
            down[m] = x[k] - link[k] * down[m];
            x[k] = down[m];
        }
    }
}

/// Precomputed Crank–Nicolson step for fixed grid, parameters and `dt`.
#[derive(Debug, Clone)]
pub struct Propagator {
    grid: SpatialGrid,
    params: PhysParams,
    options: LatticeOptions,
    dt: f64,
    spinor: bool,
    up: Chain,
    down: Option<Chain>,
    /// `iτV₀`, the origin coupling between levels (spinor only).
    cross: Complex64,
    /// Responses `M⁻¹e_o` of each level to a unit source at the origin.
    green_up: Vec<Complex64>,
    green_down: Vec<Complex64>,
    scratch: Vec<Complex64>,
    scratch_down: Vec<Complex64>,
}

impl Propagator {
    pub fn new(grid: SpatialGrid, params: &PhysParams, dt: f64, spinor: bool, options: LatticeOptions) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: "must be positive and finite",
            });
        }
        if !spinor && params.omega() != 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega",
                reason: "a scalar state needs omega = 0",
            });
        }
        let hbar = params.hbar();
        let tau = dt / (2.0 * hbar);
        let kappa = hbar * hbar / (2.0 * params.mass() * grid.dx * grid.dx);
        let (b0, b1) = options.stencil.weights();
        let v0 = origin_coupling(params, grid.dx, &options)?;
        let n = grid.n;
        let o = grid.origin_index;
        let chain = |level: f64, onsite: f64| {
            let off = c(b1, tau * (-kappa + level * b1));
            let mut diag = vec![c(b0, tau * (2.0 * kappa + level * b0)); n];
            diag[o] += I * tau * onsite;
            Chain::new(off, diag, o)
        };
        let (up, down) = if spinor {
            (chain(hbar * params.omega(), 0.0), Some(chain(0.0, 0.0)))
        } else {
            (chain(0.0, v0), None)
        };
        let unit_response = |ch: &Chain| {
            let mut e = vec![c(0.0, 0.0); n];
            e[o] = c(1.0, 0.0);
            ch.solve(&mut e);
            e
        };
        let (green_up, green_down) = match &down {
            Some(d) => (unit_response(&up), unit_response(d)),
            None => (Vec::new(), Vec::new()),
        };
        Ok(Propagator {
            grid,
            params: *params,
            options,
            dt,
            spinor,
            up,
            down,
            cross: I * tau * v0,
            green_up,
            green_down,
            scratch: vec![c(0.0, 0.0); n],
            scratch_down: if spinor { vec![c(0.0, 0.0); n] } else { Vec::new() },
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn options(&self) -> &LatticeOptions {
        &self.options
    }

    fn check_state(&self, state: &GridState) -> Result<()> {
        if state.grid != self.grid || state.is_spinor() != self.spinor || state.up.len() != self.grid.n {
            return Err(Error::InvalidParameter {
                name: "state",
                reason: "grid or component layout differs from the propagator",
            });
        }
        Ok(())
    }

    /// One Crank–Nicolson step. The interlevel coupling sits on the origin
    /// node only, so the block system reduces to two tridiagonal solves
    /// plus a 2×2 solve for the origin values.
    pub fn step(&mut self, state: &mut GridState) -> Result<()> {
        self.check_state(state)?;
        let o = self.grid.origin_index;
        self.up.apply_conjugate(&state.up, &mut self.scratch);
        match &self.down {
            None => {
                self.up.solve(&mut self.scratch);
                state.up.copy_from_slice(&self.scratch);
            }
            Some(down) => {
                down.apply_conjugate(&state.down, &mut self.scratch_down);
                // right-hand side carries -iτV₀ σ₁ ψ_old at the origin
                self.scratch[o] -= self.cross * state.down[o];
                self.scratch_down[o] -= self.cross * state.up[o];
                solve_interleaved([&self.up, down], [&mut self.scratch, &mut self.scratch_down]);
                let k = self.cross;
                let (gu, gd) = (self.green_up[o], self.green_down[o]);
                let (ru, rd) = (self.scratch[o], self.scratch_down[o]);
                let det = c(1.0, 0.0) - k * k * gu * gd;
                let u0 = (ru - k * gu * rd) / det;
                let d0 = (rd - k * gd * ru) / det;
                for j in 0..self.grid.n {
                    state.up[j] = self.scratch[j] - k * d0 * self.green_up[j];
                    state.down[j] = self.scratch_down[j] - k * u0 * self.green_down[j];
                }
            }
        }
        state.time += self.dt;
        Ok(())
    }

    /// Steps until `t_final`, recording a snapshot every `stride` steps and
    /// at the end. The last step is shortened to land on `t_final`.
    pub fn run_until(&mut self, state: &mut GridState, t_final: f64, stride: usize) -> Result<Vec<Snapshot>> {
        self.check_state(state)?;
        if !(t_final >= state.time) {
            return Err(Error::InvalidParameter {
                name: "t_final",
                reason: "must not precede the state time",
            });
        }
        let stride = stride.max(1);
        let stencil = self.options.stencil;
        let mut trace = vec![Snapshot::of(state, stencil)];
        let span = t_final - state.time;
        let steps = (span / self.dt - 1e-9).ceil().max(0.0) as usize;
        if steps == 0 {
            return Ok(trace);
        }
        let start = state.time;
        let last_dt = span - (steps - 1) as f64 * self.dt;
        let mut tail = if (last_dt - self.dt).abs() > 1e-12 * self.dt {
            Some(self.with_dt(last_dt)?)
        } else {
            None
        };
        for k in 1..=steps {
            if k == steps {
                match tail.as_mut() {
                    Some(p) => p.step(state)?,
                    None => self.step(state)?,
                }
                state.time = t_final;
            } else {
                self.step(state)?;
                state.time = start + k as f64 * self.dt;
            }
            if k % stride == 0 || k == steps {
                let snap = Snapshot::of(state, stencil);
                let edge = state.edge_density();
                if edge > 1e-8 {
                    return Err(Error::BoundaryContamination {
                        time: state.time,
                        edge_density: edge,
                    });
                }
                trace.push(snap);
            }
        }
        Ok(trace)
    }

    fn with_dt(&self, dt: f64) -> Result<Self> {
        Propagator::new(self.grid, &self.params, dt, self.spinor, self.options)
    }
}

/// Observables after a step. For a scalar state the lower-level entries
/// are zero and its centroids NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub norm: f64,
    pub up: HalfLines,
    pub down: HalfLines,
}

impl Snapshot {
    pub fn of(state: &GridState, stencil: Stencil) -> Self {
        let up = state.half_lines(&state.up, stencil);
        let down = state.half_lines(&state.down, stencil);
        Snapshot {
            time: state.time,
            norm: up.prob_left + up.prob_right + down.prob_left + down.prob_right,
            up,
            down,
        }
    }

    /// Centroid of everything on `x > 0`, both levels.
    pub fn centroid_trans(&self) -> f64 {
        (self.up.moment_right + self.down.moment_right) / (self.up.prob_right + self.down.prob_right)
    }

    pub fn centroid_refl(&self) -> f64 {
        (self.up.moment_left + self.down.moment_left) / (self.up.prob_left + self.down.prob_left)
    }
}

/// One step with a freshly factored propagator; prefer [`Propagator`] for
/// repeated steps.
pub fn step_cn(state: &GridState, params: &PhysParams, dt: f64, options: LatticeOptions) -> Result<GridState> {
    let mut next = state.clone();
    Propagator::new(state.grid, params, dt, state.is_spinor(), options)?.step(&mut next)?;
    Ok(next)
}

/// Propagates a copy of `state` to `t_final`.
pub fn run_until(
    state: &GridState,
    params: &PhysParams,
    t_final: f64,
    dt: f64,
    stride: usize,
    options: LatticeOptions,
) -> Result<(GridState, Vec<Snapshot>)> {
    let mut next = state.clone();
    let trace = Propagator::new(state.grid, params, dt, state.is_spinor(), options)?.run_until(&mut next, t_final, stride)?;
    Ok((next, trace))
}

/// Default time step `m dx²/ħ`.
pub fn default_dt(params: &PhysParams, grid: &SpatialGrid) -> f64 {
    params.mass() * grid.dx * grid.dx / params.hbar()
}
