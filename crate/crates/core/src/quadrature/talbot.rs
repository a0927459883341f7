//! Numerical inversion of Laplace transforms on Talbot-type contours.
//!
//! The contour is `s(θ) = σ + λ(θ cot θ + iνθ)`, `θ ∈ (-π, π)`, sampled by
//! the trapezoidal rule. With `σ = 0`, `ν = 1` and `λ = N/5t` (N nodes over
//! the whole contour) this is the
//! classic fixed Talbot contour.

use num_complex::Complex64;

#[allow(unused_imports)]
use crate::math::Float;
use crate::math::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TalbotContour {
    pub shift: f64,
    pub scale: f64,
    pub aspect: f64,
}

impl TalbotContour {
    pub fn fixed(t: f64, n_nodes: usize) -> Self {
        TalbotContour {
            shift: 0.0,
            scale: n_nodes as f64 / (5.0 * t),
            aspect: 1.0,
        }
    }

    /// Contour that keeps every listed singularity on its left.
    ///
    /// The shift clears the rightmost singularity by `1/t`; the aspect is
    /// raised until the contour passes to the right of each singularity at
    /// that singularity's height.
    pub fn enclosing(t: f64, singularities: &[Complex64]) -> Self {
        let rightmost = singularities.iter().map(|s| s.re).fold(0.0, f64::max);
        let shift = rightmost + 1.0 / t;
        let scale = 8.0 / t;
        let mut aspect: f64 = 1.0;
        for s in singularities {
            // at θ = |Im s|/(λν) the contour must lie right of Re s
            let height = s.im.abs();
            if height == 0.0 {
                continue;
            }
            let clearance = shift - s.re;
            aspect = aspect.max(1.2 * height / scale);
            loop {
                let theta = height / (scale * aspect);
                let x = if theta < 1e-8 {
                    1.0
                } else {
                    theta / theta.tan()
                };
                if theta < PI && shift + scale * x - s.re > 0.5 * clearance {
                    break;
                }
                aspect *= 1.25;
            }
        }
        TalbotContour {
            shift,
            scale,
            aspect,
        }
    }

    /// Point on the contour and `ds/dθ`.
    pub fn point(&self, theta: f64) -> (Complex64, Complex64) {
        let (x, dx) = if theta.abs() < 1e-8 {
            (1.0 - theta * theta / 3.0, -2.0 * theta / 3.0)
        } else {
            let cot = 1.0 / theta.tan();
            let sin = theta.sin();
            (theta * cot, cot - theta / (sin * sin))
        };
        let s = Complex64::new(
            self.shift + self.scale * x,
            self.scale * self.aspect * theta,
        );
        let ds = Complex64::new(self.scale * dx, self.scale * self.aspect);
        (s, ds)
    }
}

/// `f(t)` from its transform `F(s)` on the fixed Talbot contour with
/// `n_nodes` trapezoid nodes.
pub fn inverse_laplace_talbot<F>(f: F, t: f64, n_nodes: usize) -> Complex64
where
    F: FnMut(Complex64) -> Complex64,
{
    inverse_laplace_on_contour(f, t, n_nodes, &TalbotContour::fixed(t, n_nodes))
}

pub fn inverse_laplace_on_contour<F>(
    mut f: F,
    t: f64,
    n_nodes: usize,
    contour: &TalbotContour,
) -> Complex64
where
    F: FnMut(Complex64) -> Complex64,
{
    let n = n_nodes.max(2);
    let h = 2.0 * PI / n as f64;
    let mut terms = alloc::vec::Vec::with_capacity(n);
    for k in 1..n {
        let theta = -PI + k as f64 * h;
        let (s, ds) = contour.point(theta);
        let weight = (s * t).exp();
        if weight.norm() == 0.0 {
            continue;
        }
        let value = f(s);
        terms.push(weight * value * ds);
    }
    crate::math::pairwise_sum(&terms) / Complex64::new(0.0, n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::c;

    #[test]
    fn elementary_pairs() {
        let v = inverse_laplace_talbot(|s| c(1.0, 0.0) / s, 3.0, 64);
        assert!((v - c(1.0, 0.0)).norm() < 1e-8);
        let v = inverse_laplace_talbot(|s| c(1.0, 0.0) / (s + 2.0), 1.0, 64);
        assert!((v.re - (-2.0f64).exp()).abs() < 1e-8 && v.im.abs() < 1e-8);
    }

    #[test]
    fn oscillating_pair_on_enclosing_contour() {
        // 1/(s + 30i) -> e^{-30 i t}
        let t = 2.0;
        let contour = TalbotContour::enclosing(t, &[c(0.0, -30.0)]);
        let v = inverse_laplace_on_contour(|s| c(1.0, 0.0) / (s + c(0.0, 30.0)), t, 512, &contour);
        let exact = c(0.0, -30.0 * t).exp();
        assert!((v - exact).norm() < 1e-10, "{v} vs {exact}");
    }
}
