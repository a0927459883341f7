//! The structureless particle: `H = p²/2m + g δ(x)`.
//!
//! The amplitude at the origin obeys a closed equation whose solution is a
//! superposition over the initial momenta,
//! `C(t) = ∫dq/(2πħ) ψ₀(q) K(q,t)` with
//!
//! ```text
//! K(q,t) = e^{-iat}/(1 + iΛ/q) + e^{iεt}/(1 + (q/Λ)²)
//!        + i(β/π) PV∫₀^∞ dy √y e^{iyt} / ((y - ε)(y + a))
//! ```
//!
//! where `a = q²/2mħ`, `Λ = mg/ħ`, `ε = mg²/2ħ³` and `β = (g/ħ)sqrt(m/2ħ)`
//! carries the sign of `g`. The same expression holds for either sign of
//! the coupling. Its Laplace transform is
//! `K̃(q,s) = r / ((r + iβ)(s + ia))` with `r = sqrt(is)`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)]
use crate::math::Float;
use crate::math::{c, cis, I, PI};
use crate::quadrature::{
    integrate_adaptive, integrate_contour, integrate_pv, integrate_semi_infinite,
    inverse_laplace_on_contour, Domain, Endpoint, PVIntegrand, TalbotContour, Tolerance,
};
use crate::system::{ChannelCoefficients, GaussianPacket, MomentumGrid, PhysParams};
use crate::weights::{packet_integral, Guard, Resolvent};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarSolution {
    params: PhysParams,
    packet: GaussianPacket,
}

impl ScalarSolution {
    pub fn new(params: PhysParams, packet: GaussianPacket) -> Result<Self> {
        if params.omega() != 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega",
                reason: "must be 0 for the structureless problem",
            });
        }
        Ok(ScalarSolution { params, packet })
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn packet(&self) -> &GaussianPacket {
        &self.packet
    }

    /// `K(q,t)` for `Re q > 0`.
    pub fn origin_kernel(
        &self,
        q: Complex64,
        t: f64,
        tol: impl Into<Tolerance>,
    ) -> Result<Complex64> {
        let p = &self.params;
        let a = p.kinetic_rate(q);
        let free = (-I * a * t).exp();
        if p.coupling() == 0.0 {
            return Ok(free);
        }
        let lam = p.coupling_momentum();
        let eps = p.binding_rate();
        let beta = p.signed_binding_root();
        let on_shell = free / (1.0 + I * lam / q);
        let ratio = q / lam;
        let bound = cis(eps * t) / (1.0 + ratio * ratio);
        let pv = integrate_pv(
            PVIntegrand::new(
                |y: f64| c(y.sqrt(), 0.0) / (a + y),
                Domain::SemiInfinite { a: 0.0 },
            )
            .pole(eps)
            .rate(t)
            .endpoints(Endpoint::SquareRoot, Endpoint::Regular)
            .window_limit(0.5 * (a + eps).norm()),
            tol,
        )?;
        Ok(on_shell + bound + I * (beta / PI) * pv.value)
    }

    /// `K̃(q,s)`, the Laplace transform of the kernel in `t`.
    pub fn laplace_kernel(&self, q: Complex64, s: Complex64) -> Complex64 {
        let a = self.params.kinetic_rate(q);
        let r = sqrt_is(s);
        r / ((r + I * self.params.signed_binding_root()) * (s + I * a))
    }

    /// Singular points of [`laplace_kernel`](Self::laplace_kernel) in `s`.
    pub fn laplace_singularities(&self, q: Complex64) -> Vec<Complex64> {
        let mut out = vec![-I * self.params.kinetic_rate(q), c(0.0, 0.0)];
        if self.params.coupling() < 0.0 {
            out.push(I * self.params.binding_rate());
        }
        out
    }

    /// Cached evaluator for `C(t)` and `ψ(p,t)`.
    pub fn exact(&self, tol: impl Into<Tolerance>) -> Result<ScalarEvolution> {
        ScalarEvolution::new(*self, tol)
    }
}

/// `sqrt(is)` with the cut along the negative real `s` axis. It agrees with
/// the principal `sqrt(is)` for `Re s > 0`, where the transforms are
/// defined, and keeps the cut to the left of every inversion contour.
pub fn sqrt_is(s: Complex64) -> Complex64 {
    cis(PI / 4.0) * s.sqrt()
}

/// `Δ_t[x] = (e^{ixt} - 1)/(ix)`, equal to `t` at `x = 0`.
pub fn delta_t(x: f64, t: f64) -> Complex64 {
    let xt = x * t;
    if xt.abs() < 1e-4 {
        return c(1.0 - xt * xt / 6.0, 0.5 * xt) * t;
    }
    cis(0.5 * xt) * (2.0 * (0.5 * xt).sin() / x)
}

/// `(T, R)` at momentum `p`, with the `p → 0` limit `(0, -1)` for `g ≠ 0`.
fn coefficients_at(params: &PhysParams, p: f64) -> (Complex64, Complex64) {
    let lam = params.coupling_momentum();
    if lam == 0.0 {
        return (c(1.0, 0.0), c(0.0, 0.0));
    }
    if p == 0.0 {
        return (c(0.0, 0.0), c(-1.0, 0.0));
    }
    let omega = lam / p.abs();
    let t = 1.0 / c(1.0, omega);
    (t, -I * omega * t)
}

/// `T = 1/(1+iΩ)` and `R = -iΩ/(1+iΩ)` with `Ω = mg/ħ|p0|`, in the
/// upper-level slots of the result.
pub fn transmission_reflection(params: &PhysParams, p0: f64) -> Result<ChannelCoefficients> {
    if p0 == 0.0 {
        return Err(Error::ZeroMomentum);
    }
    let (t, r) = coefficients_at(params, p0);
    Ok(ChannelCoefficients {
        t_up: t,
        r_up: r,
        t_down: c(0.0, 0.0),
        r_down: c(0.0, 0.0),
        p0: p0.abs(),
    })
}

/// `T(p)`; even in `p`.
pub fn transmission(params: &PhysParams, p: f64) -> Complex64 {
    coefficients_at(params, p).0
}

/// `R(p)`; even in `p`.
pub fn reflection(params: &PhysParams, p: f64) -> Complex64 {
    coefficients_at(params, p).1
}

/// `e^{-ip²t/2mħ} [T(p) ψ₀(p) + R(p) ψ₀(-p)]`.
pub fn psi_p_asymptotic(sol: &ScalarSolution, p: f64, t: f64) -> Complex64 {
    let params = &sol.params;
    let hbar = params.hbar();
    let (tr, rf) = coefficients_at(params, p);
    let a = p * p / (2.0 * params.mass() * hbar);
    let incident = sol.packet.amplitude(c(p, 0.0), hbar);
    let mirrored = sol.packet.amplitude(c(-p, 0.0), hbar);
    cis(-a * t) * (tr * incident + rf * mirrored)
}

/// `C(t) = ∫dq/(2πħ) ψ(q,t)`; the wave function at the origin is
/// `sqrt(2πħ) C(t)`.
///
/// Builds a [`ScalarEvolution`]; reuse one when evaluating many times.
pub fn c_of_t(sol: &ScalarSolution, t: f64, tol: impl Into<Tolerance>) -> Result<Complex64> {
    ScalarEvolution::new(*sol, tol)?.origin(t)
}

/// `C(t)` with the kernel obtained by Talbot inversion of `K̃(q,s)` at each
/// momentum, `n_nodes` per inversion. Independent of the closed form.
pub fn c_of_t_talbot(
    sol: &ScalarSolution,
    t: f64,
    n_nodes: usize,
    tol: impl Into<Tolerance>,
) -> Result<Complex64> {
    check_time(t)?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            reason: "Laplace inversion needs t > 0",
        });
    }
    packet_integral(
        &sol.packet,
        &sol.params,
        t,
        |q| {
            let contour = TalbotContour::enclosing(t, &sol.laplace_singularities(q));
            Ok(inverse_laplace_on_contour(
                |s| sol.laplace_kernel(q, s),
                t,
                n_nodes,
                &contour,
            ))
        },
        tol.into(),
    )
}

/// `∫dq/(2πħ) e^{-iq²t/2mħ} ψ₀(q)` in closed form: the origin amplitude
/// without the potential.
pub fn free_origin_amplitude(params: &PhysParams, packet: &GaussianPacket, t: f64) -> Complex64 {
    let (hbar, mass) = (params.hbar(), params.mass());
    let (p0, dp, x0) = (packet.p0(), packet.dp(), packet.x0());
    // exponent in z = q - p0: -A z² + B z + C
    let a = c(1.0 / (4.0 * dp * dp), t / (2.0 * mass * hbar));
    let b = c(0.0, -(x0 + p0 * t / mass) / hbar);
    let c0 = c(0.0, -p0 * p0 * t / (2.0 * mass * hbar));
    let gauss = (PI / a).sqrt() * (b * b / (4.0 * a) + c0).exp();
    gauss * packet.norm() / (2.0 * PI * hbar)
}

/// Right-hand side of the closed equation for the origin amplitude,
///
/// ```text
/// C_free(t) - i(g/ħ) ∫₀^t dt' C(t') G(t - t'),   G(τ) = sqrt(m/2πiħτ),
/// ```
///
/// evaluated with [`c_of_t`] inside the history integral. It equals
/// `C(t)` for the exact solution.
pub fn consistency_rhs(
    sol: &ScalarSolution,
    t: f64,
    tol: impl Into<Tolerance>,
) -> Result<Complex64> {
    check_time(t)?;
    let tol = tol.into();
    let evolution = ScalarEvolution::new(*sol, tol.scaled(0.1))?;
    let params = &sol.params;
    let free = free_origin_amplitude(params, &sol.packet, t);
    if params.coupling() == 0.0 || t == 0.0 {
        return Ok(free);
    }
    // t' = t - u² removes the 1/sqrt(t-t') endpoint
    let mut guard = Guard::new();
    let history = integrate_adaptive(
        |u| 2.0 * guard.take(evolution.origin(t - u * u)),
        0.0,
        t.sqrt(),
        tol,
    )?;
    let history = guard.finish(history.value)?;
    let green = (params.mass() / (2.0 * PI * params.hbar())).sqrt() * cis(-PI / 4.0);
    Ok(free - I * (params.coupling() / params.hbar()) * green * history)
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

/// Evaluator for the origin amplitude and the exact momentum-space wave
/// function
///
/// ```text
/// ψ(p,t) = e^{-ia_p t} [ψ₀(p) - i(g/ħ) ∫₀^t dτ e^{ia_p τ} C(τ)].
/// ```
///
/// `C` is expanded over the kernel, so that each exponential in `τ`
/// integrates to a `Δ_t`. The momentum integrals of the two kernel terms
/// that are not on the energy shell are done first and cached:
/// `b = ∫dq ψ₀(q)/(1+(q/Λ)²)` and `Q(y) = ∫dq ψ₀(q)/(y + a_q)`, the latter
/// as a Chebyshev interpolant in `s = (y-a₀)/(y+a₀)`. All momentum
/// integrals run along [`GaussianPacket::saddle_contour`], so relative
/// tolerances stay meaningful when `C` is exponentially small.
#[derive(Debug, Clone)]
pub struct ScalarEvolution {
    sol: ScalarSolution,
    bound_weight: Complex64,
    resolvent: Option<Resolvent>,
    rotated: Option<Resolvent>,
    tol: Tolerance,
}

impl ScalarEvolution {
    pub fn new(sol: ScalarSolution, tol: impl Into<Tolerance>) -> Result<Self> {
        let tol = tol.into();
        let params = sol.params;
        let packet = sol.packet;
        let hbar = params.hbar();
        let mut this = ScalarEvolution {
            sol,
            bound_weight: c(0.0, 0.0),
            resolvent: None,
            rotated: None,
            tol,
        };
        if params.coupling() == 0.0 {
            return Ok(this);
        }
        let lam = params.coupling_momentum();
        let weight_tol = Tolerance::new(0.0, 1e-12);
        let to_weight = 2.0 * PI * hbar;
        this.bound_weight = packet_integral(
            &packet,
            &params,
            0.0,
            |q| {
                let r = q / lam;
                Ok(1.0 / (1.0 + r * r))
            },
            weight_tol,
        )? * to_weight;

        this.resolvent = Some(Resolvent::new(&packet, &params)?);
        this.rotated = Some(Resolvent::along(&packet, &params, I)?);
        Ok(this)
    }

    pub fn solution(&self) -> &ScalarSolution {
        &self.sol
    }

    fn cut_weight_at(&self, y: f64) -> Complex64 {
        self.resolvent.as_ref().map_or(c(0.0, 0.0), |r| r.at(y))
    }

    /// `C(t) = ∫dq/(2πħ) ψ(q,t)`; the wave function at the origin is
    /// `sqrt(2πħ) C(t)`.
    pub fn origin(&self, t: f64) -> Result<Complex64> {
        check_time(t)?;
        let params = &self.sol.params;
        let packet = &self.sol.packet;
        let hbar = params.hbar();
        let lam = params.coupling_momentum();
        let on_shell = packet_integral(
            packet,
            params,
            t,
            |q| {
                let free = (-I * params.kinetic_rate(q) * t).exp();
                Ok(if lam == 0.0 {
                    free
                } else {
                    free / (1.0 + I * lam / q)
                })
            },
            self.tol.scaled(0.5),
        )?;
        if params.coupling() == 0.0 {
            return Ok(on_shell);
        }
        let eps = params.binding_rate();
        let beta = params.signed_binding_root();
        let bound = self.bound_weight * cis(eps * t);
        let cut = integrate_pv(
            PVIntegrand::new(
                |y: f64| c(y.sqrt(), 0.0) * self.cut_weight_at(y),
                Domain::SemiInfinite { a: 0.0 },
            )
            .pole(eps)
            .rate(t)
            .endpoints(Endpoint::SquareRoot, Endpoint::Regular),
            Tolerance::new(self.tol.abs, 0.1 * self.tol.rel).scaled(0.5),
        )?;
        Ok(on_shell + (bound + I * (beta / PI) * cut.value) / (2.0 * PI * hbar))
    }

    /// `ψ(p,t)` for `t ≥ 0`.
    pub fn at(&self, p: f64, t: f64) -> Result<Complex64> {
        check_time(t)?;
        let params = &self.sol.params;
        let packet = &self.sol.packet;
        let (hbar, mass) = (params.hbar(), params.mass());
        let ap = p * p / (2.0 * mass * hbar);
        let psi0 = packet.amplitude(c(p, 0.0), hbar);
        let phase = cis(-ap * t);
        if params.coupling() == 0.0 || t == 0.0 {
            return Ok(phase * psi0);
        }
        let lam = params.coupling_momentum();
        let eps = params.binding_rate();
        let beta = params.signed_binding_root();
        let tol = self.tol.scaled(0.25);

        // on-shell term over the real packet window
        let half = packet.support_half_width();
        let (lo, hi) = (packet.p0() - half, packet.p0() + half);
        let mut breaks: Vec<f64> = vec![lo];
        for x in [0.0, p.abs()] {
            if x > lo && x < hi {
                breaks.push(x);
            }
        }
        breaks.push(hi);
        breaks.sort_by(f64::total_cmp);
        let mut on_shell = c(0.0, 0.0);
        for w in breaks.windows(2) {
            let r = integrate_adaptive(
                |q| {
                    let aq = q * q / (2.0 * mass * hbar);
                    let weight = packet.amplitude(c(q, 0.0), hbar);
                    if q == 0.0 {
                        return c(0.0, 0.0);
                    }
                    weight / c(1.0, lam / q.abs()) * delta_t(ap - aq, t)
                },
                w[0],
                w[1],
                tol,
            )?;
            on_shell += r.value;
        }

        let bound = self.bound_weight * delta_t(ap + eps, t);

        // PV ∫dy sqrt(y) Δ_t[y+a_p] Q(y)/(y-ε), split into the e^{iyt} part
        // and the constant part of Δ_t
        let smooth = |y: f64| c(y.sqrt(), 0.0) * self.cut_weight_at(y) / (y + ap);
        let window = 0.5 * (eps + ap);
        let rated = integrate_pv(
            PVIntegrand::new(smooth, Domain::SemiInfinite { a: 0.0 })
                .pole(eps)
                .rate(t)
                .endpoints(Endpoint::SquareRoot, Endpoint::Regular)
                .window_limit(window),
            tol,
        )?;
        let flat = integrate_pv(
            PVIntegrand::new(smooth, Domain::SemiInfinite { a: 0.0 })
                .pole(eps)
                .endpoints(Endpoint::SquareRoot, Endpoint::Regular)
                .window_limit(window),
            tol,
        )?;
        let cut = -I * (cis(ap * t) * rated.value - flat.value);

        let scattered = on_shell + bound + I * (beta / PI) * cut;
        Ok(phase * (psi0 - I * (params.coupling() / hbar) / (2.0 * PI * hbar) * scattered))
    }
}

impl ScalarEvolution {
    fn on_shell_weight(&self, q: Complex64) -> Complex64 {
        let params = &self.sol.params;
        self.sol.packet.amplitude(q, params.hbar()) / (1.0 + I * params.coupling_momentum() / q)
    }

    /// `ψ(p,t) - ψ_asym(p,t)` for `t > 0`, computed without forming either
    /// term, so it keeps its relative accuracy long after the difference has
    /// dropped below the rounding level of `ψ`.
    ///
    /// The on-shell history is split as `Δ_t[x] = e^{ixt}/(ix) - 1/(ix)`,
    /// both parts along the real axis passing below `q = |p|`. Lifting the
    /// constant part above the pole leaves the residue, which is exactly
    /// `R(p)ψ₀(|p|)`; what remains of the constant parts cancels
    /// identically (see [`limit_defect`](Self::limit_defect)). The
    /// oscillating part moves onto the saddle path of time `t`, below the
    /// axis once the packet has passed the origin. The cut integral is
    /// rotated onto `y = iw`; the pole at `y = ε` it leaves behind cancels
    /// the bound-state term for `g > 0` and is the bound state for `g < 0`.
    /// Terms carrying `ψ₀(-|p|)` are dropped.
    pub fn departure(&self, p: f64, t: f64) -> Result<Complex64> {
        check_time(t)?;
        if !(t > 0.0) {
            return Err(Error::InvalidParameter {
                name: "t",
                reason: "the departure is defined for t > 0",
            });
        }
        let params = &self.sol.params;
        let packet = &self.sol.packet;
        if params.coupling() == 0.0 {
            return Ok(c(0.0, 0.0));
        }
        let (hbar, mass) = (params.hbar(), params.mass());
        let ap = p * p / (2.0 * mass * hbar);
        let eps = params.binding_rate();
        let beta = params.signed_binding_root();
        let tol = self.tol.scaled(0.25);

        let floor = 0.1 * packet.dp();
        let mut eta = packet.saddle_height(params, t);
        if eta.abs() < floor {
            eta = -floor;
        }
        let eta0 = packet.saddle_height(params, 0.0).max(floor);
        let half = packet.window_half_width(eta0.max(eta.abs()));
        let path = packet.window_path(eta, half);
        // the e^{-ia_p t} of ψ is folded in: e^{i(a_p-a_q)t} e^{-ia_p t}
        let moving = integrate_contour(
            |q| {
                let aq = params.kinetic_rate(q);
                self.on_shell_weight(q) * (-I * aq * t).exp() / (I * (ap - aq))
            },
            &path,
            tol,
        )?;
        let mut history = moving.value;
        let k = p.abs();
        if eta > 0.0 && k > packet.p0() - half && k < packet.p0() + half {
            history -= 2.0 * PI * mass * hbar * self.on_shell_weight(c(k, 0.0)) / k * cis(-ap * t);
        }

        let rotated = self.rotated.as_ref().expect("built for g != 0");
        let root_i = cis(PI / 4.0);
        let cut = integrate_semi_infinite(
            |u| {
                let w = u * u;
                let y = I * w;
                let f = root_i * u * rotated.at(w) / ((y + ap) * (y - eps));
                f * (2.0 * I * u) * (-w * t).exp()
            },
            0.0,
            1.0 / t.sqrt(),
            tol,
        )?;

        let bound = if beta < 0.0 {
            let f_eps = eps.sqrt() * self.cut_weight_at(eps) / (eps + ap);
            (I * beta * f_eps - I * self.bound_weight / (ap + eps)) * cis(eps * t)
        } else {
            c(0.0, 0.0)
        };
        let transient = history + bound + (beta / PI) * cut.value;
        Ok(-I * (params.coupling() / hbar) / (2.0 * PI * hbar) * transient)
    }

    /// The `t`-independent remainder that [`departure`](Self::departure)
    /// takes to vanish: the constant part of the on-shell history off the
    /// pole, the constant part of the bound-state history and the constant
    /// part of the cut history, in the units of `ψ`. Zero up to quadrature
    /// error and terms in `ψ₀(-|p|)`.
    pub fn limit_defect(&self, p: f64) -> Result<Complex64> {
        let params = &self.sol.params;
        let packet = &self.sol.packet;
        if params.coupling() == 0.0 {
            return Ok(c(0.0, 0.0));
        }
        let (hbar, mass) = (params.hbar(), params.mass());
        let ap = p * p / (2.0 * mass * hbar);
        let eps = params.binding_rate();
        let beta = params.signed_binding_root();
        let tol = self.tol.scaled(0.25);
        let eta0 = packet.saddle_height(params, 0.0).max(0.1 * packet.dp());
        let path = packet.window_path(eta0, packet.window_half_width(eta0));
        let history = integrate_contour(
            |q| I * self.on_shell_weight(q) / (ap - params.kinetic_rate(q)),
            &path,
            tol,
        )?;
        let flat = integrate_pv(
            PVIntegrand::new(
                |y: f64| c(y.sqrt(), 0.0) * self.cut_weight_at(y) / (y + ap),
                Domain::SemiInfinite { a: 0.0 },
            )
            .pole(eps)
            .endpoints(Endpoint::SquareRoot, Endpoint::Regular)
            .window_limit(0.5 * (eps + ap)),
            tol,
        )?;
        let rest = history.value + I * self.bound_weight / (ap + eps) - (beta / PI) * flat.value;
        Ok(-I * (params.coupling() / hbar) / (2.0 * PI * hbar) * rest)
    }
}

/// `‖ψ(t) - ψ_asym(t)‖` as an `L²` sum over `grid`, from
/// [`ScalarEvolution::departure`].
pub fn asymptotic_distance(
    evolution: &ScalarEvolution,
    grid: &MomentumGrid,
    t: f64,
) -> Result<f64> {
    let mut sum = 0.0;
    for (&p, &w) in grid.p_values().iter().zip(grid.weights()) {
        sum += evolution.departure(p, t)?.norm_sqr() * w;
    }
    Ok(sum.sqrt())
}

/// `ψ(p,t)` at a single point. Builds an [`ScalarEvolution`]; reuse one
/// when sampling many momenta.
pub fn psi_p_exact(
    sol: &ScalarSolution,
    p: f64,
    t: f64,
    tol: impl Into<Tolerance>,
) -> Result<Complex64> {
    ScalarEvolution::new(*sol, tol)?.at(p, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bench() -> ScalarSolution {
        ScalarSolution::new(
            PhysParams::natural(1.0, 0.0).unwrap(),
            GaussianPacket::new(5.0, 0.2, -30.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn delta_t_examples() {
        assert_eq!(delta_t(0.0, 3.5), c(3.5, 0.0));
        assert!(delta_t(PI, 2.0).norm() < 1e-15);
        let x = 1e-7;
        let direct = (cis(x * 2.0) - 1.0) / c(0.0, x);
        assert!((delta_t(x, 2.0) - direct).norm() < 1e-8);
        let x = 0.3;
        let direct = (cis(x * 2.0) - 1.0) / c(0.0, x);
        assert!((delta_t(x, 2.0) - direct).norm() < 1e-15);
    }

    #[test]
    fn unit_coupling_coefficients() {
        let p = PhysParams::natural(1.0, 0.0).unwrap();
        let cc = transmission_reflection(&p, 1.0).unwrap();
        assert!((cc.t_up - c(0.5, -0.5)).norm() < 1e-15);
        assert!((cc.r_up - c(-0.5, -0.5)).norm() < 1e-15);
        assert_eq!(transmission_reflection(&p, 0.0), Err(Error::ZeroMomentum));
        let free = transmission_reflection(&p.with_coupling(0.0).unwrap(), 2.0).unwrap();
        assert_eq!((free.t_up, free.r_up), (c(1.0, 0.0), c(0.0, 0.0)));
        let strong = transmission_reflection(&p.with_coupling(1e6).unwrap(), 1.0).unwrap();
        assert!(strong.t_up.norm() < 1e-6 && (strong.r_up + 1.0).norm() < 1e-6);
    }

    #[test]
    fn rejects_spin_splitting() {
        let p = PhysParams::natural(1.0, 1.0).unwrap();
        assert!(ScalarSolution::new(p, GaussianPacket::new(5.0, 0.2, -30.0).unwrap()).is_err());
    }

    #[test]
    fn sqrt_is_branch() {
        for s in [
            c(1.0, 2.0),
            c(-1.0, 2.0),
            c(-1.0, -2.0),
            c(1.0, -2.0),
            c(3.0, 0.0),
        ] {
            let r = sqrt_is(s);
            assert!((r * r - I * s).norm() < 1e-14);
        }
        let r = sqrt_is(c(2.0, 0.0));
        assert!(r.re > 0.0);
        // agrees with the principal root of is on the right half-plane
        for s in [c(0.5, 3.0), c(0.5, -3.0), c(4.0, 0.1)] {
            assert!((sqrt_is(s) - (I * s).sqrt()).norm() < 1e-14);
        }
    }

    #[test]
    fn free_kernel_and_origin_amplitude() {
        let sol = ScalarSolution::new(
            PhysParams::natural(0.0, 0.0).unwrap(),
            GaussianPacket::new(5.0, 0.2, -3.0).unwrap(),
        )
        .unwrap();
        let t = 0.7;
        let v = c_of_t(&sol, t, Tolerance::relative(1e-12)).unwrap();
        let exact = free_origin_amplitude(sol.params(), sol.packet(), t);
        assert!((v - exact).norm() < 1e-10 * exact.norm(), "{v} {exact}");
    }

    #[test]
    fn kernel_matches_its_laplace_transform() {
        for g in [1.0, -1.0] {
            let sol = ScalarSolution::new(
                PhysParams::natural(g, 0.0).unwrap(),
                GaussianPacket::new(5.0, 0.2, -30.0).unwrap(),
            )
            .unwrap();
            for (q, t) in [(c(5.0, 0.0), 1.0), (c(4.0, 1.5), 0.4), (c(1.0, 0.0), 3.0)] {
                let k = sol.origin_kernel(q, t, 1e-13).unwrap();
                let contour = TalbotContour::enclosing(t, &sol.laplace_singularities(q));
                let l = inverse_laplace_on_contour(|s| sol.laplace_kernel(q, s), t, 512, &contour);
                assert!((k - l).norm() < 1e-9, "g={g} q={q} t={t}: {k} vs {l}");
            }
        }
    }

    #[test]
    fn exact_at_zero_time_is_initial() {
        let sol = bench();
        let psi = sol.exact(1e-12).unwrap();
        for p in [4.9, 5.0, -5.1] {
            let v = psi.at(p, 1e-10).unwrap();
            let v0 = sol.packet().amplitude(c(p, 0.0), 1.0);
            assert!((v - v0).norm() < 1e-8, "{p}: {v} vs {v0}");
        }
    }
}
