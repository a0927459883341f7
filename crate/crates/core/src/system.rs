//! Physical parameters, the initial Gaussian packet and sampled
//! momentum-space states.

use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)]
use crate::math::Float;
use crate::math::{pairwise_sum_real, PI};
use crate::{Error, Result};

/// Constants and couplings of the Hamiltonian
/// `p²/2m + ħω (1+σ₃)/2 + g δ(x) [σ₁]`.
///
/// `omega = 0` selects the structureless problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    hbar: f64,
    mass: f64,
    g: f64,
    omega: f64,
}

impl PhysParams {
    pub fn new(hbar: f64, mass: f64, g: f64, omega: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "hbar",
                reason: "must be positive and finite",
            });
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "mass",
                reason: "must be positive and finite",
            });
        }
        if !g.is_finite() {
            return Err(Error::InvalidParameter {
                name: "g",
                reason: "must be finite",
            });
        }
        if !(omega >= 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "omega",
                reason: "must be non-negative and finite",
            });
        }
        Ok(PhysParams {
            hbar,
            mass,
            g,
            omega,
        })
    }

    pub fn scalar(hbar: f64, mass: f64, g: f64) -> Result<Self> {
        Self::new(hbar, mass, g, 0.0)
    }

    /// ħ = m = 1 with the given coupling and splitting.
    pub fn natural(g: f64, omega: f64) -> Result<Self> {
        Self::new(1.0, 1.0, g, omega)
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn coupling(&self) -> f64 {
        self.g
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn with_coupling(self, g: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, g, self.omega)
    }

    pub fn with_omega(self, omega: f64) -> Result<Self> {
        Self::new(self.hbar, self.mass, self.g, omega)
    }

    /// `m g / ħ`, the momentum scale of the interaction. The dimensionless
    /// strength at momentum `p` is `coupling_momentum() / |p|`.
    pub fn coupling_momentum(&self) -> f64 {
        self.mass * self.g / self.hbar
    }

    /// `m g² / 2ħ³`: binding energy of the attractive well divided by ħ.
    pub fn binding_rate(&self) -> f64 {
        self.mass * self.g * self.g / (2.0 * self.hbar.powi(3))
    }

    /// `(g/ħ) sqrt(m/2ħ)`, signed square root of [`binding_rate`](Self::binding_rate).
    pub fn signed_binding_root(&self) -> f64 {
        self.g / self.hbar * (self.mass / (2.0 * self.hbar)).sqrt()
    }

    /// Kinetic frequency `q²/2mħ`, continued to complex momenta.
    pub fn kinetic_rate(&self, q: Complex64) -> Complex64 {
        q * q / (2.0 * self.mass * self.hbar)
    }

    /// `2mħω`, the squared momentum carried away by a spin flip.
    pub fn flip_momentum_sq(&self) -> f64 {
        2.0 * self.mass * self.hbar * self.omega
    }
}

/// Kinetic energy plus, for the upper internal level, the splitting ħω.
pub fn energy_of(params: &PhysParams, p: f64, spin_up: bool) -> f64 {
    let kinetic = p * p / (2.0 * params.mass);
    if spin_up {
        kinetic + params.hbar * params.omega
    } else {
        kinetic
    }
}

/// Momentum-space Gaussian `𝒩 exp[-(p-p0)²/4δp² - i(p-p0)x0/ħ]`
/// with `𝒩 = (2π δp²)^(-1/4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    p0: f64,
    dp: f64,
    x0: f64,
    norm: f64,
}

impl GaussianPacket {
    pub fn new(p0: f64, dp: f64, x0: f64) -> Result<Self> {
        if !(p0 > 0.0 && p0.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "p0",
                reason: "must be positive and finite",
            });
        }
        if !(dp > 0.0 && dp.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dp",
                reason: "must be positive and finite",
            });
        }
        if !(x0 < 0.0 && x0.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "x0",
                reason: "must be negative and finite",
            });
        }
        let norm = (2.0 * PI * dp * dp).powf(-0.25);
        Ok(GaussianPacket { p0, dp, x0, norm })
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn dp(&self) -> f64 {
        self.dp
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn with_x0(self, x0: f64) -> Result<Self> {
        Self::new(self.p0, self.dp, x0)
    }

    pub fn with_dp(self, dp: f64) -> Result<Self> {
        Self::new(self.p0, dp, self.x0)
    }

    /// Position-space width `ħ/2δp` of the initial packet.
    pub fn position_width(&self, hbar: f64) -> f64 {
        hbar / (2.0 * self.dp)
    }

    /// The packet starts clear of the origin: `x0 + ħ/2δp < 0`.
    pub fn well_separated(&self, hbar: f64) -> bool {
        self.x0 + self.position_width(hbar) < 0.0
    }

    /// Half-width of the momentum window outside which `|ψ₀|` is below
    /// `2·10⁻¹⁶` of its peak.
    pub fn support_half_width(&self) -> f64 {
        12.0 * self.dp
    }

    /// The amplitude continued to complex momentum; entire in `q`.
    pub fn amplitude(&self, q: Complex64, hbar: f64) -> Complex64 {
        let z = q - self.p0;
        let exponent = -z * z / (4.0 * self.dp * self.dp) - Complex64::i() * z * (self.x0 / hbar);
        exponent.exp() * self.norm
    }

    /// Freely evolved packet in position space,
    /// `∫dp/√(2πħ) e^{ipx/ħ - ip²t/2mħ} ψ₀(p)`.
    pub fn free_position(&self, params: &PhysParams, x: f64, t: f64) -> Complex64 {
        let (hbar, mass) = (params.hbar, params.mass);
        let alpha = Complex64::new(1.0 / (4.0 * self.dp * self.dp), t / (2.0 * mass * hbar));
        let offset = x - self.x0 - self.p0 * t / mass;
        let carrier = (self.p0 * x - self.p0 * self.p0 * t / (2.0 * mass)) / hbar;
        let envelope = (-(offset * offset) / (4.0 * alpha * hbar * hbar)).exp();
        (PI / alpha).sqrt() * envelope * Complex64::cis(carrier) * (self.norm / (2.0 * PI * hbar).sqrt())
    }

    /// Polyline `p0-L → p0-L+iη → p0+L+iη → p0+L` through the saddle of
    /// `ψ₀(q) exp(-iq²t/2mħ)`.
    ///
    /// Integrating `ψ₀ f` along it equals the real-window integral whenever
    /// `f` is analytic for `Re q > 0`, and avoids the cancellation that
    /// makes the real-axis value unreliable when the packet is far from
    /// the origin. `L` keeps `|ψ₀|` below `e^{-40}` of the saddle value at
    /// the real-axis ends, capped at `0.9 p0`.
    pub fn saddle_contour(&self, params: &PhysParams, t: f64) -> [Complex64; 4] {
        let eta = self.saddle_height(params, t).max(0.0);
        self.window_path(eta, self.window_half_width(eta))
    }

    /// Imaginary part of the saddle of `ψ₀(q) exp(-iq²t/2mħ)`: positive
    /// while the packet approaches the origin, negative afterwards.
    pub fn saddle_height(&self, params: &PhysParams, t: f64) -> f64 {
        let (hbar, mass) = (params.hbar, params.mass);
        let curvature = Complex64::new(1.0 / (2.0 * self.dp * self.dp), t / (mass * hbar));
        let shift = Complex64::new(0.0, -(self.x0 + self.p0 * t / mass) / hbar) / curvature;
        shift.im
    }

    pub(crate) fn window_half_width(&self, eta: f64) -> f64 {
        (eta * eta + 160.0 * self.dp * self.dp)
            .sqrt()
            .min(0.9 * self.p0)
    }

    /// `p0-L → p0-L+iη → p0+L+iη → p0+L`.
    pub(crate) fn window_path(&self, eta: f64, half: f64) -> [Complex64; 4] {
        let (lo, hi) = (self.p0 - half, self.p0 + half);
        [
            Complex64::new(lo, 0.0),
            Complex64::new(lo, eta),
            Complex64::new(hi, eta),
            Complex64::new(hi, 0.0),
        ]
    }
}

pub fn initial_amplitude(packet: &GaussianPacket, params: &PhysParams, p: f64) -> Complex64 {
    packet.amplitude(Complex64::new(p, 0.0), params.hbar)
}

/// Midpoint nodes on a symmetric interval. `p = 0` is never a node.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    p_values: Vec<f64>,
    weights: Vec<f64>,
}

impl MomentumGrid {
    /// `n` (even) equal cells covering `[-p_max, p_max]`.
    pub fn symmetric(p_max: f64, n: usize) -> Result<Self> {
        if !(p_max > 0.0 && p_max.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "p_max",
                reason: "must be positive and finite",
            });
        }
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidParameter {
                name: "nodes",
                reason: "must be even and at least 2",
            });
        }
        let h = 2.0 * p_max / n as f64;
        let half = n / 2;
        let mut p_values = Vec::with_capacity(n);
        for j in 0..n {
            // built from the centre outwards so that p[j] == -p[n-1-j] exactly
            let p = if j < half {
                -((half - j) as f64 - 0.5) * h
            } else {
                ((j - half) as f64 + 0.5) * h
            };
            p_values.push(p);
        }
        Ok(MomentumGrid {
            p_values,
            weights: alloc::vec![h; n],
        })
    }

    /// Default grid: `[-(p0 + 12 δp_eff), p0 + 12 δp_eff]` with
    /// `δp_eff = max(δp, sqrt(2mħω))`, 4096 nodes.
    pub fn for_packet(params: &PhysParams, packet: &GaussianPacket) -> Self {
        Self::for_packet_with_nodes(params, packet, 4096)
    }

    pub fn for_packet_with_nodes(params: &PhysParams, packet: &GaussianPacket, n: usize) -> Self {
        let dp_eff = packet.dp.max(params.flip_momentum_sq().sqrt());
        let p_max = packet.p0 + 12.0 * dp_eff;
        let n = n.max(2) + n % 2;
        Self::symmetric(p_max, n).expect("packet parameters are validated")
    }

    /// Arbitrary nodes; must be strictly increasing, symmetric about zero,
    /// with positive weights.
    pub fn from_nodes(p_values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if p_values.len() != weights.len() || p_values.is_empty() {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "must match the node count",
            });
        }
        if p_values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter {
                name: "p_values",
                reason: "must be strictly increasing",
            });
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "must be positive",
            });
        }
        let n = p_values.len();
        let scale = p_values[n - 1].abs().max(p_values[0].abs());
        for j in 0..n {
            if (p_values[j] + p_values[n - 1 - j]).abs() > 1e-12 * scale {
                return Err(Error::InvalidParameter {
                    name: "p_values",
                    reason: "must be symmetric about zero",
                });
            }
        }
        Ok(MomentumGrid { p_values, weights })
    }

    pub fn p_values(&self) -> &[f64] {
        &self.p_values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.p_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_values.is_empty()
    }

    /// Index of the node at `-p_values[j]`.
    pub fn mirror(&self, j: usize) -> usize {
        self.p_values.len() - 1 - j
    }
}

/// `ψ(p, t)` sampled on a [`MomentumGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumWaveFunction {
    grid: MomentumGrid,
    values: Vec<Complex64>,
    time: f64,
}

impl MomentumWaveFunction {
    pub fn new(grid: MomentumGrid, values: Vec<Complex64>, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter {
                name: "values",
                reason: "length must match the grid",
            });
        }
        if !(time >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "time",
                reason: "must be non-negative",
            });
        }
        Ok(MomentumWaveFunction { grid, values, time })
    }

    /// Samples `f(p)` at every node.
    pub fn sample<F: FnMut(f64) -> Complex64>(grid: MomentumGrid, time: f64, f: F) -> Result<Self> {
        let values = grid.p_values.iter().copied().map(f).collect();
        Self::new(grid, values, time)
    }

    pub fn initial(grid: MomentumGrid, packet: &GaussianPacket, params: &PhysParams) -> Self {
        Self::sample(grid, 0.0, |p| initial_amplitude(packet, params, p))
            .expect("sampled on its own grid")
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn time(&self) -> f64 {
        self.time
    }
}

/// Two-component state; the lower level starts empty.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorWaveFunction {
    grid: MomentumGrid,
    up: Vec<Complex64>,
    down: Vec<Complex64>,
    time: f64,
}

impl SpinorWaveFunction {
    pub fn new(
        grid: MomentumGrid,
        up: Vec<Complex64>,
        down: Vec<Complex64>,
        time: f64,
    ) -> Result<Self> {
        if up.len() != grid.len() || down.len() != grid.len() {
            return Err(Error::InvalidParameter {
                name: "components",
                reason: "length must match the grid",
            });
        }
        if !(time >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "time",
                reason: "must be non-negative",
            });
        }
        if time == 0.0 && down.iter().any(|v| v.norm_sqr() != 0.0) {
            return Err(Error::InvalidParameter {
                name: "down",
                reason: "must vanish in the initial state",
            });
        }
        Ok(SpinorWaveFunction {
            grid,
            up,
            down,
            time,
        })
    }

    pub fn initial(grid: MomentumGrid, packet: &GaussianPacket, params: &PhysParams) -> Self {
        let up = grid
            .p_values
            .iter()
            .map(|&p| initial_amplitude(packet, params, p))
            .collect();
        let down = alloc::vec![Complex64::new(0.0, 0.0); grid.len()];
        SpinorWaveFunction {
            grid,
            up,
            down,
            time: 0.0,
        }
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn up(&self) -> &[Complex64] {
        &self.up
    }

    pub fn down(&self) -> &[Complex64] {
        &self.down
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn up_component(&self) -> MomentumWaveFunction {
        MomentumWaveFunction {
            grid: self.grid.clone(),
            values: self.up.clone(),
            time: self.time,
        }
    }

    pub fn down_component(&self) -> MomentumWaveFunction {
        MomentumWaveFunction {
            grid: self.grid.clone(),
            values: self.down.clone(),
            time: self.time,
        }
    }
}

/// `∫dp |ψ(p)|²` by the grid weights.
///
/// Fails with [`Error::GridTooNarrow`] when either edge value exceeds
/// `10⁻¹²` of the peak modulus.
pub fn norm_squared(psi: &MomentumWaveFunction) -> Result<f64> {
    let peak = psi.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let edge = psi.values[0]
        .norm()
        .max(psi.values[psi.values.len() - 1].norm());
    if edge > 1e-12 * peak {
        return Err(Error::GridTooNarrow {
            edge_ratio: edge / peak,
        });
    }
    let terms: Vec<f64> = psi
        .values
        .iter()
        .zip(&psi.grid.weights)
        .map(|(v, w)| v.norm_sqr() * w)
        .collect();
    Ok(pairwise_sum_real(&terms))
}

/// Outgoing amplitudes at one incident momentum. The structureless problem
/// fills only the upper-level entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelCoefficients {
    pub t_up: Complex64,
    pub r_up: Complex64,
    pub t_down: Complex64,
    pub r_down: Complex64,
    pub p0: f64,
}

impl ChannelCoefficients {
    /// `|T↑|² + |R↑|² + (p'/p0)(|T↓|² + |R↓|²)` with `p' = sqrt(p0² + 2mħω)`.
    pub fn flux_sum(&self, params: &PhysParams) -> f64 {
        let p_flip = (self.p0 * self.p0 + params.flip_momentum_sq()).sqrt();
        self.t_up.norm_sqr()
            + self.r_up.norm_sqr()
            + p_flip / self.p0 * (self.t_down.norm_sqr() + self.r_down.norm_sqr())
    }
}
