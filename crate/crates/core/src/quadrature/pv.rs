//! Principal values and semi-infinite oscillatory integrals.
//!
//! The integrand is `smooth(y) · exp(i·rate·y) / (y - pole)` on a finite or
//! half-open interval. The pole is removed by folding a symmetric window
//! onto itself; a half-open domain is closed with a finite segment plus an
//! integration-by-parts tail.

use num_complex::Complex64;

use super::kronrod::{integrate_adaptive, integrate_semi_infinite};
use super::{QuadResult, Tolerance};
#[allow(unused_imports)]
use crate::math::Float;
use crate::math::{cis, I};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite { a: f64, b: f64 },
    SemiInfinite { a: f64 },
}

impl Domain {
    fn lower(&self) -> f64 {
        match *self {
            Domain::Finite { a, .. } | Domain::SemiInfinite { a } => a,
        }
    }
}

/// Behaviour of the integrand at a finite endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Endpoint {
    #[default]
    Regular,
    /// Square-root branch point (`sqrt(y-a)` or `1/sqrt(y-a)` times a smooth
    /// function). Removed by `y = a + u²`.
    SquareRoot,
}

pub struct PVIntegrand<F> {
    pub smooth_part: F,
    pub pole: Option<f64>,
    pub oscillation_rate: f64,
    pub domain: Domain,
    pub lower: Endpoint,
    pub upper: Endpoint,
    /// Upper bound on the folding half-window, normally half the distance
    /// from the pole to the nearest singularity of `smooth_part`.
    pub window_limit: Option<f64>,
}

impl<F: FnMut(f64) -> Complex64> PVIntegrand<F> {
    pub fn new(smooth_part: F, domain: Domain) -> Self {
        PVIntegrand {
            smooth_part,
            pole: None,
            oscillation_rate: 0.0,
            domain,
            lower: Endpoint::Regular,
            upper: Endpoint::Regular,
            window_limit: None,
        }
    }

    pub fn pole(mut self, y0: f64) -> Self {
        self.pole = Some(y0);
        self
    }

    pub fn rate(mut self, rate: f64) -> Self {
        self.oscillation_rate = rate;
        self
    }

    pub fn endpoints(mut self, lower: Endpoint, upper: Endpoint) -> Self {
        self.lower = lower;
        self.upper = upper;
        self
    }

    pub fn window_limit(mut self, w: f64) -> Self {
        self.window_limit = Some(w);
        self
    }
}

/// Ordinary integral on `[a, b]` with optional square-root endpoints.
fn segment<F>(
    f: &mut F,
    a: f64,
    b: f64,
    lower: Endpoint,
    upper: Endpoint,
    tol: Tolerance,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    if b <= a {
        return Ok(QuadResult::zero());
    }
    let len = b - a;
    match (lower, upper) {
        (Endpoint::Regular, Endpoint::Regular) => integrate_adaptive(f, a, b, tol),
        (Endpoint::SquareRoot, Endpoint::Regular) => {
            integrate_adaptive(|u| f(a + u * u) * (2.0 * u), 0.0, len.sqrt(), tol)
        }
        (Endpoint::Regular, Endpoint::SquareRoot) => {
            integrate_adaptive(|u| f(b - u * u) * (2.0 * u), 0.0, len.sqrt(), tol)
        }
        (Endpoint::SquareRoot, Endpoint::SquareRoot) => integrate_adaptive(
            |phi| {
                let s = phi.sin();
                let c = phi.cos();
                f(a + len * s * s) * (2.0 * len * s * c)
            },
            0.0,
            core::f64::consts::FRAC_PI_2,
            tol,
        ),
    }
}

/// Cauchy principal value of the integrand described by `f`.
///
/// Fails with [`Error::PoleAtBoundary`] when the pole sits within `10⁻⁹`
/// (relative) of an endpoint. A half-open domain with zero rate is closed
/// by a mapped integral, not rejected.
pub fn integrate_pv<F>(mut f: PVIntegrand<F>, tol: impl Into<Tolerance>) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    let tol = tol.into();
    let rate = f.oscillation_rate;
    let a = f.domain.lower();
    let b = match f.domain {
        Domain::Finite { b, .. } => Some(b),
        Domain::SemiInfinite { .. } => None,
    };
    let (lower, upper) = (f.lower, f.upper);
    let window_limit = f.window_limit;
    let pole = f.pole;
    let smooth = &mut f.smooth_part;
    let mut numerator = |y: f64| {
        let v = smooth(y);
        if rate != 0.0 {
            v * cis(rate * y)
        } else {
            v
        }
    };
    let piece_tol = tol.scaled(0.25);

    // region [a, finite_end] handled by quadrature, tail beyond it
    let mut total = QuadResult::zero();
    let mut tail_start = a;
    match pole {
        Some(y0) => {
            let w_min = 1e-9 * y0.abs().max(1.0);
            if y0 - a < w_min || !(y0 > a) {
                return Err(Error::PoleAtBoundary {
                    pole: y0,
                    endpoint: a,
                });
            }
            let mut w = 0.5 * (y0 - a);
            if let Some(b) = b {
                if b - y0 < w_min || !(b > y0) {
                    return Err(Error::PoleAtBoundary {
                        pole: y0,
                        endpoint: b,
                    });
                }
                w = w.min(0.5 * (b - y0));
            }
            if rate != 0.0 {
                w = w.min(1.0 / rate.abs());
            }
            if let Some(limit) = window_limit {
                w = w.min(limit);
            }
            let mut integrand = |y: f64| numerator(y) / (y - y0);
            let left = segment(
                &mut integrand,
                a,
                y0 - w,
                lower,
                Endpoint::Regular,
                piece_tol,
            )?;
            total = total.add(left);
            let fold = integrate_adaptive(
                |u| {
                    if u == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    (numerator(y0 + u) - numerator(y0 - u)) / u
                },
                0.0,
                w,
                piece_tol,
            )?;
            total = total.add(fold);
            let mut integrand = |y: f64| numerator(y) / (y - y0);
            match b {
                Some(b) => {
                    let right = segment(
                        &mut integrand,
                        y0 + w,
                        b,
                        Endpoint::Regular,
                        upper,
                        piece_tol,
                    )?;
                    return Ok(total.add(right));
                }
                None => {
                    tail_start = y0 + w;
                }
            }
        }
        None => {
            if let Some(b) = b {
                return segment(&mut numerator, a, b, lower, upper, tol);
            }
        }
    }

    // half-open domain: finite stretch up to the cutoff, then the tail
    let pole_shift = pole.unwrap_or(f64::NEG_INFINITY);
    let mut amplitude = |y: f64| {
        let v = smooth(y);
        if pole.is_some() {
            v / (y - pole_shift)
        } else {
            v
        }
    };
    let first_lower = if pole.is_some() {
        Endpoint::Regular
    } else {
        lower
    };
    if rate != 0.0 {
        let span = tail_start.abs().max(1.0);
        let cutoff = (tail_start + 10.0 / rate.abs()).max(tail_start + span);
        let mut integrand = |y: f64| amplitude(y) * cis(rate * y);
        let stretch = segment(
            &mut integrand,
            tail_start,
            cutoff,
            first_lower,
            Endpoint::Regular,
            piece_tol,
        )?;
        let tail = oscillatory_tail(&mut amplitude, cutoff, rate, piece_tol)?;
        Ok(total.add(stretch).add(tail))
    } else {
        let span = tail_start.abs().max(1.0);
        let cutoff = tail_start + span;
        let stretch = segment(
            &mut amplitude,
            tail_start,
            cutoff,
            first_lower,
            Endpoint::Regular,
            piece_tol,
        )?;
        let tail = integrate_semi_infinite(&mut amplitude, cutoff, span, piece_tol)?;
        Ok(total.add(stretch).add(tail))
    }
}

fn derivatives<F: FnMut(f64) -> Complex64>(a: &mut F, y: f64, h: f64) -> [Complex64; 4] {
    let m2 = a(y - 2.0 * h);
    let m1 = a(y - h);
    let z = a(y);
    let p1 = a(y + h);
    let p2 = a(y + 2.0 * h);
    let d1 = (m2 - m1 * 8.0 + p1 * 8.0 - p2) / (12.0 * h);
    let d2 = (-m2 + m1 * 16.0 - z * 30.0 + p1 * 16.0 - p2) / (12.0 * h * h);
    let d3 = (-m2 + m1 * 2.0 - p1 * 2.0 + p2) / (2.0 * h * h * h);
    [z, d1, d2, d3]
}

/// `∫_Y^∞ amplitude(y) · exp(i·rate·y) dy` for a smooth, algebraically
/// decaying amplitude.
///
/// Three integrations by parts at the cutoff; the magnitude of the next
/// term serves as the remainder estimate. While that estimate exceeds
/// `tol/10` the cutoff is doubled and the stretch in between is integrated
/// by quadrature. Fails with [`Error::RateTooSmall`] when `rate·Y < 1`.
pub fn oscillatory_tail<F>(
    mut amplitude: F,
    cutoff: f64,
    rate: f64,
    tol: impl Into<Tolerance>,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    let tol = tol.into();
    if !(rate.abs() * cutoff >= 1.0) {
        return Err(Error::RateTooSmall { rate, cutoff });
    }
    let iw = I * rate;
    let mut total = QuadResult::zero();
    let mut y = cutoff;
    for _ in 0..64 {
        let h = 5e-3 * y;
        let [a0, a1, a2, a3] = derivatives(&mut amplitude, y, h);
        let series = cis(rate * y) * (-a0 / iw + a1 / (iw * iw) - a2 / (iw * iw * iw));
        let remainder = 2.0 * a3.norm() / rate.abs().powi(4);
        let target = tol.target((total.value + series).norm()) / 10.0;
        if remainder <= target || !remainder.is_finite() && a0.norm() == 0.0 {
            return Ok(total.add(QuadResult {
                value: series,
                abs_error: remainder,
                evaluations: 5,
            }));
        }
        let next = 2.0 * y;
        let stretch =
            integrate_adaptive(|s| amplitude(s) * cis(rate * s), y, next, tol.scaled(0.5))?;
        total = total.add(stretch);
        y = next;
    }
    Err(Error::NoConvergence {
        abs_error: f64::INFINITY,
        tol: tol.abs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{c, PI};

    #[test]
    fn odd_integrand_about_pole() {
        let r = integrate_pv(
            PVIntegrand::new(|_| c(1.0, 0.0), Domain::Finite { a: -1.0, b: 1.0 }).pole(0.0),
            1e-13,
        )
        .unwrap();
        assert!(r.value.norm() < 1e-12);
        let r = integrate_pv(
            PVIntegrand::new(|_| c(1.0, 0.0), Domain::Finite { a: 0.0, b: 2.0 }).pole(1.0),
            1e-13,
        )
        .unwrap();
        assert!(r.value.norm() < 1e-12);
    }

    #[test]
    fn log_principal_value() {
        // PV ∫_0^3 dy/(y-1) = ln 2
        let r = integrate_pv(
            PVIntegrand::new(|_| c(1.0, 0.0), Domain::Finite { a: 0.0, b: 3.0 }).pole(1.0),
            1e-13,
        )
        .unwrap();
        assert!((r.value.re - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn pole_at_endpoint_rejected() {
        let r = integrate_pv(
            PVIntegrand::new(|_| c(1.0, 0.0), Domain::Finite { a: 0.0, b: 1.0 }).pole(0.0),
            1e-10,
        );
        assert!(matches!(r, Err(Error::PoleAtBoundary { .. })));
    }

    #[test]
    fn pole_free_matches_plain_quadrature() {
        let f = |y: f64| c((-y).exp() * y.cos(), y.sin() / (1.0 + y * y));
        let pv = integrate_pv(
            PVIntegrand::new(f, Domain::Finite { a: 0.0, b: 4.0 }),
            1e-14,
        )
        .unwrap();
        let plain = integrate_adaptive(f, 0.0, 4.0, 1e-14).unwrap();
        assert!((pv.value - plain.value).norm() < 1e-12);
    }

    #[test]
    fn square_root_endpoints() {
        // ∫_0^1 sqrt(y(1-y)) dy = π/8
        let r = integrate_pv(
            PVIntegrand::new(
                |y: f64| c((y * (1.0 - y)).sqrt(), 0.0),
                Domain::Finite { a: 0.0, b: 1.0 },
            )
            .endpoints(Endpoint::SquareRoot, Endpoint::SquareRoot),
            1e-14,
        )
        .unwrap();
        assert!((r.value.re - PI / 8.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_semi_infinite_with_pole() {
        // PV ∫_0^∞ e^{iy}/(y-1) dy e^{-y}... use the Laplace-damped closed form:
        // PV ∫_0^∞ e^{-y}/(y-1) dy = -e^{-1} Ei(1), Ei(1) = 1.8951178163559367
        let r = integrate_pv(
            PVIntegrand::new(|y: f64| c((-y).exp(), 0.0), Domain::SemiInfinite { a: 0.0 })
                .pole(1.0),
            1e-13,
        )
        .unwrap();
        let expected = -(-1.0f64).exp() * 1.895_117_816_355_936_8;
        assert!((r.value.re - expected).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn zero_amplitude_tail() {
        let r = oscillatory_tail(|_| c(0.0, 0.0), 10.0, 1.0, 1e-12).unwrap();
        assert_eq!(r.value, c(0.0, 0.0));
    }

    #[test]
    fn tail_requires_oscillation() {
        assert!(matches!(
            oscillatory_tail(|y: f64| c(1.0 / (y * y), 0.0), 0.5, 1.0, 1e-10),
            Err(Error::RateTooSmall { .. })
        ));
    }
}
