//! The two-level particle: `H = p²/2m + ħω(1+σ₃)/2 + g δ(x) σ₁`, prepared
//! in the upper level.
//!
//! The origin amplitudes of the two levels are superpositions over the
//! initial momenta with kernels
//!
//! ```text
//! K↑(q,t) = X/(X+Λ²) e^{-i(a+ω)t}
//!         + 2ε²/(√(ω²+4ε²)(y₊+a+ω)) e^{iy₊t}
//!         + (ε/π) ∫₀^ω dy e^{-iyt} √(y(ω-y)) / ((a+ω-y)(y(ω-y)+ε²))
//!
//! K↓(q,t) = -iΛq/(X+Λ²) e^{-i(a+ω)t}
//!         + i(β/π) PV∫₀^∞ dy e^{iyt} √(y+ω) / ((√(y(y+ω)) - ε)(y+a+ω))
//!         - i(βε/π) ∫₀^ω dy e^{-iyt} √(ω-y) / ((a+ω-y)(y(ω-y)+ε²))
//! ```
//!
//! with `X = q sqrt(q² + 2mħω)`, `y₊ = (√(ω²+4ε²) - ω)/2` and the scalar
//! notation `a, Λ, ε, β`. The Laplace transforms are
//! `K̃↑ = W/((W - iε)(s + i(a+ω)))`, `W = √s √(s+iω)`, and
//! `K̃↓ = -β e^{iπ/4} K̃↑ / √s`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)]
use crate::math::Float;
use crate::math::{c, cis, I, PI};
use crate::quadrature::{
    integrate_adaptive, integrate_pv, inverse_laplace_on_contour, Domain, Endpoint, PVIntegrand,
    TalbotContour, Tolerance,
};
use crate::scalar::delta_t;
use crate::system::{ChannelCoefficients, GaussianPacket, PhysParams};
use crate::weights::{packet_integral, Resolvent};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinSolution {
    params: PhysParams,
    packet: GaussianPacket,
}

/// Rates shared by the kernels.
#[derive(Debug, Clone, Copy)]
struct Rates {
    lam: f64,
    eps: f64,
    beta: f64,
    omega: f64,
    /// `y₊`, the positive root of `y(y+ω) = ε²`
    y_plus: f64,
    /// `√(ω²+4ε²)`
    root: f64,
}

impl Rates {
    fn of(p: &PhysParams) -> Self {
        let eps = p.binding_rate();
        let omega = p.omega();
        let root = (omega * omega + 4.0 * eps * eps).sqrt();
        // y₊ = 2ε²/(ω + root) avoids cancellation for ε ≪ ω
        let y_plus = if eps == 0.0 {
            0.0
        } else {
            2.0 * eps * eps / (omega + root)
        };
        Rates {
            lam: p.coupling_momentum(),
            eps,
            beta: p.signed_binding_root(),
            omega,
            y_plus,
            root,
        }
    }

    /// Weight of the upper-level cut, `√(y(ω-y))/(y(ω-y)+ε²)`.
    fn up_cut(&self, y: f64) -> f64 {
        let w = y * (self.omega - y);
        w.max(0.0).sqrt() / (w + self.eps * self.eps)
    }

    /// Weight of the lower-level cut, `√(ω-y)/(y(ω-y)+ε²)`.
    fn down_cut(&self, y: f64) -> f64 {
        let w = y * (self.omega - y);
        (self.omega - y).max(0.0).sqrt() / (w + self.eps * self.eps)
    }

    /// `√(y+ω)/(√(y(y+ω)) - ε)` times `(y - y₊)`, regular at `y₊`.
    fn down_branch(&self, y: f64) -> f64 {
        let s = (y * (y + self.omega)).sqrt();
        (y + self.omega).sqrt() * (s + self.eps) / (y + self.y_plus + self.omega)
    }
}

/// `q sqrt(q² + 2mħω)`, continued from `q > 0`.
fn flux_root(params: &PhysParams, q: Complex64) -> Complex64 {
    q * (q * q + params.flip_momentum_sq()).sqrt()
}

impl SpinSolution {
    pub fn new(params: PhysParams, packet: GaussianPacket) -> Self {
        SpinSolution { params, packet }
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn packet(&self) -> &GaussianPacket {
        &self.packet
    }

    fn check_collision(&self, a: Complex64) -> Result<()> {
        let omega = self.params.omega();
        if omega > 0.0 && a.norm() < 1e-9 * omega.max(1.0) {
            return Err(Error::PoleAtBoundary {
                pole: omega,
                endpoint: omega,
            });
        }
        Ok(())
    }

    /// `K↑(q,t)` for `Re q > 0`.
    pub fn up_kernel(&self, q: Complex64, t: f64, tol: impl Into<Tolerance>) -> Result<Complex64> {
        let p = &self.params;
        let r = Rates::of(p);
        let a = p.kinetic_rate(q);
        let free = (-I * (a + r.omega) * t).exp();
        if r.lam == 0.0 {
            return Ok(free);
        }
        self.check_collision(a)?;
        let x = flux_root(p, q);
        let on_shell = x / (x + r.lam * r.lam) * free;
        let bound = 2.0 * r.eps * r.eps / (r.root * (a + r.y_plus + r.omega)) * cis(r.y_plus * t);
        let cut = if r.omega > 0.0 {
            integrate_pv(
                PVIntegrand::new(
                    |y: f64| r.up_cut(y) / (a + r.omega - y),
                    Domain::Finite { a: 0.0, b: r.omega },
                )
                .rate(-t)
                .endpoints(Endpoint::SquareRoot, Endpoint::SquareRoot),
                tol,
            )?
            .value
        } else {
            c(0.0, 0.0)
        };
        Ok(on_shell + bound + cut * (r.eps / PI))
    }

    /// `K↓(q,t)` for `Re q > 0`.
    pub fn down_kernel(
        &self,
        q: Complex64,
        t: f64,
        tol: impl Into<Tolerance>,
    ) -> Result<Complex64> {
        let tol = tol.into();
        let p = &self.params;
        let r = Rates::of(p);
        if r.lam == 0.0 {
            return Ok(c(0.0, 0.0));
        }
        let a = p.kinetic_rate(q);
        self.check_collision(a)?;
        let x = flux_root(p, q);
        let on_shell = -I * r.lam * q / (x + r.lam * r.lam) * (-I * (a + r.omega) * t).exp();
        let branch = integrate_pv(
            PVIntegrand::new(
                |y: f64| r.down_branch(y) / (a + y + r.omega),
                Domain::SemiInfinite { a: 0.0 },
            )
            .pole(r.y_plus)
            .rate(t)
            .endpoints(Endpoint::SquareRoot, Endpoint::Regular)
            .window_limit(0.5 * (a + r.omega + r.y_plus).norm()),
            tol.scaled(0.5),
        )?;
        let cut = if r.omega > 0.0 {
            integrate_pv(
                PVIntegrand::new(
                    |y: f64| r.down_cut(y) / (a + r.omega - y),
                    Domain::Finite { a: 0.0, b: r.omega },
                )
                .rate(-t)
                .endpoints(Endpoint::Regular, Endpoint::SquareRoot),
                tol.scaled(0.5),
            )?
            .value
        } else {
            c(0.0, 0.0)
        };
        Ok(on_shell + I * (r.beta / PI) * (branch.value - r.eps * cut))
    }

    /// `K̃↑(q,s)`.
    pub fn up_laplace_kernel(&self, q: Complex64, s: Complex64) -> Complex64 {
        let p = &self.params;
        let w = s.sqrt() * (s + I * p.omega()).sqrt();
        let resonance = w / (w - I * p.binding_rate());
        resonance / (s + I * (p.kinetic_rate(q) + p.omega()))
    }

    /// `K̃↓(q,s)`.
    pub fn down_laplace_kernel(&self, q: Complex64, s: Complex64) -> Complex64 {
        let beta = self.params.signed_binding_root();
        -beta * cis(PI / 4.0) / s.sqrt() * self.up_laplace_kernel(q, s)
    }

    /// Singular points of both transforms in `s`.
    pub fn laplace_singularities(&self, q: Complex64) -> Vec<Complex64> {
        let p = &self.params;
        let r = Rates::of(p);
        let mut out = vec![
            -I * (p.kinetic_rate(q) + r.omega),
            c(0.0, 0.0),
            c(0.0, -r.omega),
        ];
        if r.lam != 0.0 {
            out.push(c(0.0, r.y_plus));
        }
        out
    }

    /// Cached evaluator for the origin amplitudes and the exact spinor.
    pub fn exact(&self, tol: impl Into<Tolerance>) -> Result<SpinEvolution> {
        SpinEvolution::new(*self, tol)
    }
}

/// `C↓(t)`, the lower-level amplitude at the origin (same measure as the
/// scalar `C`).
pub fn c_down_of_t(sol: &SpinSolution, t: f64, tol: impl Into<Tolerance>) -> Result<Complex64> {
    SpinEvolution::new(*sol, tol)?.origin_down(t)
}

/// `C↑(t)`, the upper-level amplitude at the origin.
pub fn c_up_of_t(sol: &SpinSolution, t: f64, tol: impl Into<Tolerance>) -> Result<Complex64> {
    SpinEvolution::new(*sol, tol)?.origin_up(t)
}

fn talbot_origin<F>(
    sol: &SpinSolution,
    t: f64,
    n_nodes: usize,
    tol: Tolerance,
    kernel: F,
) -> Result<Complex64>
where
    F: Fn(Complex64, Complex64) -> Complex64,
{
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: "Laplace inversion needs finite t > 0",
        });
    }
    packet_integral(
        &sol.packet,
        &sol.params,
        t,
        |q| {
            let contour = TalbotContour::enclosing(t, &sol.laplace_singularities(q));
            Ok(inverse_laplace_on_contour(
                |s| kernel(q, s),
                t,
                n_nodes,
                &contour,
            ))
        },
        tol,
    )
}

/// `C↑(t)` with each kernel obtained by Talbot inversion.
pub fn c_up_of_t_talbot(
    sol: &SpinSolution,
    t: f64,
    n_nodes: usize,
    tol: impl Into<Tolerance>,
) -> Result<Complex64> {
    talbot_origin(sol, t, n_nodes, tol.into(), |q, s| {
        sol.up_laplace_kernel(q, s)
    })
}

/// `C↓(t)` with each kernel obtained by Talbot inversion.
pub fn c_down_of_t_talbot(
    sol: &SpinSolution,
    t: f64,
    n_nodes: usize,
    tol: impl Into<Tolerance>,
) -> Result<Complex64> {
    talbot_origin(sol, t, n_nodes, tol.into(), |q, s| {
        sol.down_laplace_kernel(q, s)
    })
}

/// On-shell channel amplitudes at momentum `p` of the upper level:
/// `T↑ = X/(X+Λ²)`, `R↑ = -Λ²/(X+Λ²)`.
fn up_coefficients(params: &PhysParams, p: f64) -> (f64, f64) {
    let lam2 = params.coupling_momentum().powi(2);
    let x = p.abs() * (p * p + params.flip_momentum_sq()).sqrt();
    if x + lam2 == 0.0 {
        return (1.0, 0.0);
    }
    (x / (x + lam2), -lam2 / (x + lam2))
}

/// `e^{-i(p²/2mħ+ω)t} [T↑(p) ψ₀(p) + R↑(p) ψ₀(-p)]`.
pub fn psi_up_asymptotic(sol: &SpinSolution, p: f64, t: f64) -> Complex64 {
    let params = &sol.params;
    let hbar = params.hbar();
    let (tr, rf) = up_coefficients(params, p);
    let a = p * p / (2.0 * params.mass() * hbar) + params.omega();
    let incident = sol.packet.amplitude(c(p, 0.0), hbar);
    let mirrored = sol.packet.amplitude(c(-p, 0.0), hbar);
    cis(-a * t) * (incident * tr + mirrored * rf)
}

/// Lower-level amplitude at momentum `p`, fed by incident momenta
/// `±sqrt(p² - 2mħω)`; identically zero for `p² ≤ 2mħω`.
pub fn psi_down_asymptotic(sol: &SpinSolution, p: f64, t: f64) -> Complex64 {
    let params = &sol.params;
    let hbar = params.hbar();
    let lam = params.coupling_momentum();
    let excess = p * p - params.flip_momentum_sq();
    if !(excess > 0.0) || lam == 0.0 {
        return c(0.0, 0.0);
    }
    let incident = excess.sqrt();
    let factor = p.abs() / (p.abs() * incident + lam * lam);
    let a = p * p / (2.0 * params.mass() * hbar);
    let feed = sol.packet.amplitude(c(incident, 0.0), hbar)
        + sol.packet.amplitude(c(-incident, 0.0), hbar);
    -I * lam * cis(-a * t) * factor * feed
}

/// With `D = sqrt(p0²(p0²+2mħω)) + (mg/ħ)²`:
/// `T↑ = p0 sqrt(p0²+2mħω)/D`, `R↑ = -(mg/ħ)²/D` and
/// `T↓ = R↓ = -i(mg/ħ) p0/D`.
pub fn spin_channel_coefficients(params: &PhysParams, p0: f64) -> Result<ChannelCoefficients> {
    if p0 == 0.0 {
        return Err(Error::ZeroMomentum);
    }
    let p0 = p0.abs();
    let lam = params.coupling_momentum();
    let x = p0 * (p0 * p0 + params.flip_momentum_sq()).sqrt();
    let d = x + lam * lam;
    let flip = c(0.0, -lam * p0 / d);
    Ok(ChannelCoefficients {
        t_up: c(x / d, 0.0),
        r_up: c(-lam * lam / d, 0.0),
        t_down: flip,
        r_down: flip,
        p0,
    })
}

/// Evaluator for the origin amplitudes `C↑`, `C↓` and the exact spinor
///
/// ```text
/// ψ↑(p,t) = e^{-i(a_p+ω)t} [ψ₀(p) - i(g/ħ) ∫₀^t dτ e^{i(a_p+ω)τ} C↓(τ)]
/// ψ↓(p,t) = e^{-ia_p t} [-i(g/ħ) ∫₀^t dτ e^{ia_p τ} C↑(τ)]
/// ```
///
/// Off-shell momentum integrals reduce to the cached resolvent of the
/// packet, as in [`ScalarEvolution`](crate::scalar::ScalarEvolution).
#[derive(Debug, Clone)]
pub struct SpinEvolution {
    sol: SpinSolution,
    resolvent: Option<Resolvent>,
    tol: Tolerance,
}

impl SpinEvolution {
    pub fn new(sol: SpinSolution, tol: impl Into<Tolerance>) -> Result<Self> {
        let resolvent = if sol.params.coupling() == 0.0 {
            None
        } else {
            Some(Resolvent::new(&sol.packet, &sol.params)?)
        };
        Ok(SpinEvolution {
            sol,
            resolvent,
            tol: tol.into(),
        })
    }

    pub fn solution(&self) -> &SpinSolution {
        &self.sol
    }

    fn resolvent(&self, z: f64) -> Complex64 {
        self.resolvent.as_ref().map_or(c(0.0, 0.0), |r| r.at(z))
    }

    fn check_time(t: f64) -> Result<()> {
        if t >= 0.0 && t.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name: "t",
                reason: "must be finite and non-negative",
            })
        }
    }

    /// `C↑(t)`.
    pub fn origin_up(&self, t: f64) -> Result<Complex64> {
        Self::check_time(t)?;
        let params = &self.sol.params;
        let r = Rates::of(params);
        let lam2 = r.lam * r.lam;
        let on_shell = packet_integral(
            &self.sol.packet,
            params,
            t,
            |q| {
                let free = (-I * (params.kinetic_rate(q) + r.omega) * t).exp();
                if lam2 == 0.0 {
                    return Ok(free);
                }
                let x = flux_root(params, q);
                Ok(x / (x + lam2) * free)
            },
            self.tol.scaled(0.5),
        )?;
        if r.lam == 0.0 {
            return Ok(on_shell);
        }
        let bound =
            2.0 * r.eps * r.eps / r.root * cis(r.y_plus * t) * self.resolvent(r.y_plus + r.omega);
        let cut = self.up_cut_integral(t, 0.0)?;
        Ok(on_shell + (bound + cut * (r.eps / PI)) / (2.0 * PI * params.hbar()))
    }

    /// `C↓(t)`.
    pub fn origin_down(&self, t: f64) -> Result<Complex64> {
        Self::check_time(t)?;
        let params = &self.sol.params;
        let r = Rates::of(params);
        if r.lam == 0.0 {
            return Ok(c(0.0, 0.0));
        }
        let lam2 = r.lam * r.lam;
        let on_shell = packet_integral(
            &self.sol.packet,
            params,
            t,
            |q| {
                let x = flux_root(params, q);
                Ok(-I * r.lam * q / (x + lam2)
                    * (-I * (params.kinetic_rate(q) + r.omega) * t).exp())
            },
            self.tol.scaled(0.5),
        )?;
        let branch = self.down_branch_integral(t, None, true)?;
        let cut = self.down_cut_integral(t, 0.0)?;
        Ok(on_shell + I * (r.beta / PI) * (branch - r.eps * cut) / (2.0 * PI * params.hbar()))
    }

    fn inner_tol(&self) -> Tolerance {
        Tolerance::new(self.tol.abs, 0.1 * self.tol.rel).scaled(0.25)
    }

    /// `∫₀^ω dy e^{-iy·rate} Δ-weight · √(y(ω-y))/(y(ω-y)+ε²) R(ω-y)`; with
    /// `shift` set, the exponential is replaced by `Δ_t[shift - y]`.
    fn up_cut_integral(&self, t: f64, shift: f64) -> Result<Complex64> {
        let r = Rates::of(&self.sol.params);
        if r.omega == 0.0 {
            return Ok(c(0.0, 0.0));
        }
        let with_delta = shift != 0.0;
        let v = integrate_pv(
            PVIntegrand::new(
                |y: f64| {
                    let w = r.up_cut(y) * self.resolvent(r.omega - y);
                    if with_delta {
                        w * delta_t(shift - y, t)
                    } else {
                        w * cis(-y * t)
                    }
                },
                Domain::Finite { a: 0.0, b: r.omega },
            )
            .endpoints(Endpoint::SquareRoot, Endpoint::SquareRoot),
            self.inner_tol(),
        )?;
        Ok(v.value)
    }

    /// Lower-level cut `∫₀^ω dy √(ω-y)/(y(ω-y)+ε²) R(ω-y)` against
    /// `e^{-iyt}` or `Δ_t[shift - y]`.
    fn down_cut_integral(&self, t: f64, shift: f64) -> Result<Complex64> {
        let r = Rates::of(&self.sol.params);
        if r.omega == 0.0 {
            return Ok(c(0.0, 0.0));
        }
        let with_delta = shift != 0.0;
        let v = integrate_pv(
            PVIntegrand::new(
                |y: f64| {
                    let w = r.down_cut(y) * self.resolvent(r.omega - y);
                    if with_delta {
                        w * delta_t(shift - y, t)
                    } else {
                        w * cis(-y * t)
                    }
                },
                Domain::Finite { a: 0.0, b: r.omega },
            )
            .endpoints(Endpoint::Regular, Endpoint::SquareRoot),
            self.inner_tol(),
        )?;
        Ok(v.value)
    }

    /// `PV∫₀^∞ dy √(y+ω)/(√(y(y+ω))-ε) R(y+ω)` against `e^{iyt}`
    /// (`oscillating`), optionally divided by `y + shift`.
    fn down_branch_integral(
        &self,
        t: f64,
        shift: Option<f64>,
        oscillating: bool,
    ) -> Result<Complex64> {
        let r = Rates::of(&self.sol.params);
        let smooth = |y: f64| {
            let v = c(r.down_branch(y), 0.0) * self.resolvent(y + r.omega);
            shift.map_or(v, |x| v / (y + x))
        };
        let mut integrand = PVIntegrand::new(smooth, Domain::SemiInfinite { a: 0.0 })
            .pole(r.y_plus)
            .endpoints(Endpoint::SquareRoot, Endpoint::Regular);
        if let Some(x) = shift {
            integrand = integrand.window_limit(0.5 * (x + r.y_plus));
        }
        if oscillating {
            integrand = integrand.rate(t);
        }
        Ok(integrate_pv(integrand, self.inner_tol())?.value)
    }

    /// On-shell term of `ψ` at momentum `p`: `∫dq ψ₀(q) k(q) Δ_t[a_p - a_q + detune]`
    /// over the real packet window, with `k` the on-shell kernel factor.
    fn on_shell_history<K>(
        &self,
        p_abs_res: Option<f64>,
        ap: f64,
        detune: f64,
        t: f64,
        kernel: K,
    ) -> Result<Complex64>
    where
        K: Fn(f64) -> Complex64,
    {
        let params = &self.sol.params;
        let packet = &self.sol.packet;
        let (hbar, mass) = (params.hbar(), params.mass());
        let half = packet.support_half_width();
        let (lo, hi) = (packet.p0() - half, packet.p0() + half);
        let mut breaks: Vec<f64> = vec![lo];
        for x in [Some(0.0), p_abs_res].into_iter().flatten() {
            if x > lo && x < hi {
                breaks.push(x);
            }
        }
        breaks.push(hi);
        breaks.sort_by(f64::total_cmp);
        let mut total = c(0.0, 0.0);
        for w in breaks.windows(2) {
            let v = integrate_adaptive(
                |q| {
                    let aq = q * q / (2.0 * mass * hbar);
                    packet.amplitude(c(q, 0.0), hbar) * kernel(q) * delta_t(ap - aq + detune, t)
                },
                w[0],
                w[1],
                self.tol.scaled(0.25),
            )?;
            total += v.value;
        }
        Ok(total)
    }

    /// `ψ↑(p,t)`.
    pub fn up_at(&self, p: f64, t: f64) -> Result<Complex64> {
        Self::check_time(t)?;
        let params = &self.sol.params;
        let (hbar, mass) = (params.hbar(), params.mass());
        let r = Rates::of(params);
        let ap = p * p / (2.0 * mass * hbar);
        let phase = cis(-(ap + r.omega) * t);
        let psi0 = self.sol.packet.amplitude(c(p, 0.0), hbar);
        if r.lam == 0.0 || t == 0.0 {
            return Ok(phase * psi0);
        }
        let lam2 = r.lam * r.lam;
        let on_shell = self.on_shell_history(Some(p.abs()), ap, 0.0, t, |q| {
            let x = q.abs() * (q * q + params.flip_momentum_sq()).sqrt();
            c(0.0, -r.lam * q.abs() / (x + lam2))
        })?;
        // Δ_t[a_p + ω + y] = (e^{i(a_p+ω)t} e^{iyt} - 1)/(i(a_p+ω+y))
        let shift = ap + r.omega;
        let rated = self.down_branch_integral(t, Some(shift), true)?;
        let flat = self.down_branch_integral(t, Some(shift), false)?;
        let branch = -I * (cis(shift * t) * rated - flat);
        let cut = self.down_cut_integral(t, shift)?;
        let scattered = on_shell + I * (r.beta / PI) * (branch - r.eps * cut);
        Ok(phase * (psi0 - I * (params.coupling() / hbar) / (2.0 * PI * hbar) * scattered))
    }

    /// `ψ↓(p,t)`.
    pub fn down_at(&self, p: f64, t: f64) -> Result<Complex64> {
        Self::check_time(t)?;
        let params = &self.sol.params;
        let (hbar, mass) = (params.hbar(), params.mass());
        let r = Rates::of(params);
        if r.lam == 0.0 || t == 0.0 {
            return Ok(c(0.0, 0.0));
        }
        let ap = p * p / (2.0 * mass * hbar);
        let lam2 = r.lam * r.lam;
        let excess = p * p - params.flip_momentum_sq();
        let resonance = if excess > 0.0 {
            Some(excess.sqrt())
        } else {
            None
        };
        let on_shell = self.on_shell_history(resonance, ap, -r.omega, t, |q| {
            let x = q.abs() * (q * q + params.flip_momentum_sq()).sqrt();
            c(x / (x + lam2), 0.0)
        })?;
        let bound = 2.0 * r.eps * r.eps / r.root
            * delta_t(ap + r.y_plus, t)
            * self.resolvent(r.y_plus + r.omega);
        let cut = self.up_cut_integral(t, ap)?;
        let scattered = on_shell + bound + cut * (r.eps / PI);
        Ok(cis(-ap * t) * (-I * (params.coupling() / hbar) / (2.0 * PI * hbar) * scattered))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(omega: f64) -> PhysParams {
        PhysParams::natural(1.0, omega).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let cc = spin_channel_coefficients(&unit(0.0), 1.0).unwrap();
        assert!((cc.t_up - c(0.5, 0.0)).norm() < 1e-15);
        assert!((cc.t_down - c(0.0, -0.5)).norm() < 1e-15);
        assert!((cc.r_up - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((cc.r_down - c(0.0, -0.5)).norm() < 1e-15);

        let cc = spin_channel_coefficients(&unit(1.0), 2.0).unwrap();
        let d = 2.0 * 6f64.sqrt() + 1.0;
        assert!((d - 5.898_979_485_566_356).abs() < 1e-12);
        assert!((cc.t_up.re - 0.830_479).abs() < 1e-6);
        assert!((cc.t_down.norm() - 0.339_042).abs() < 1e-6);
        assert!((cc.r_down.norm() - 0.339_042).abs() < 1e-6);
        assert!((cc.r_up.re + 0.169_521).abs() < 1e-6);
        assert!((cc.flux_sum(&unit(1.0)) - 1.0).abs() < 1e-12);

        let free = spin_channel_coefficients(&PhysParams::natural(0.0, 1.0).unwrap(), 2.0).unwrap();
        assert_eq!(free.t_up, c(1.0, 0.0));
        assert_eq!(
            free.t_down.norm() + free.r_up.norm() + free.r_down.norm(),
            0.0
        );
        assert_eq!(
            spin_channel_coefficients(&unit(1.0), 0.0),
            Err(Error::ZeroMomentum)
        );
    }

    #[test]
    fn down_asymptotic_example() {
        let sol = SpinSolution::new(unit(1.0), GaussianPacket::new(2.0, 0.2, -30.0).unwrap());
        let p = 6f64.sqrt();
        let v = psi_down_asymptotic(&sol, p, 0.0);
        let psi =
            sol.packet().amplitude(c(2.0, 0.0), 1.0) + sol.packet().amplitude(c(-2.0, 0.0), 1.0);
        let factor = v / psi;
        let expect = 6f64.sqrt() / (2.0 * 6f64.sqrt() + 1.0);
        assert!((factor - c(0.0, -expect)).norm() < 1e-12, "{factor}");
        assert_eq!(psi_down_asymptotic(&sol, 1.2, 3.0), c(0.0, 0.0));
    }

    #[test]
    fn kernels_match_laplace_transforms() {
        for (hbar, mass, g, omega) in [
            (1.0, 1.0, 1.0, 1.0),
            (1.0, 1.0, -1.0, 1.0),
            (0.7, 1.3, 0.8, 0.4),
            (1.0, 1.0, 1.0, 0.0),
        ] {
            let sol = SpinSolution::new(
                PhysParams::new(hbar, mass, g, omega).unwrap(),
                GaussianPacket::new(5.0, 0.2, -30.0).unwrap(),
            );
            for (q, t) in [(c(5.0, 0.0), 1.0), (c(4.0, 1.5), 0.4), (c(2.0, 0.0), 3.0)] {
                let contour = TalbotContour::enclosing(t, &sol.laplace_singularities(q));
                let up = sol.up_kernel(q, t, 1e-13).unwrap();
                let up_l =
                    inverse_laplace_on_contour(|s| sol.up_laplace_kernel(q, s), t, 512, &contour);
                assert!(
                    (up - up_l).norm() < 1e-9,
                    "up {hbar} {g} {omega} q={q} t={t}: {up} vs {up_l}"
                );
                let dn = sol.down_kernel(q, t, 1e-13).unwrap();
                let dn_l =
                    inverse_laplace_on_contour(|s| sol.down_laplace_kernel(q, s), t, 512, &contour);
                assert!(
                    (dn - dn_l).norm() < 1e-9,
                    "down {hbar} {g} {omega} q={q} t={t}: {dn} vs {dn_l}"
                );
            }
        }
    }
}
