//! Barycentric interpolation on Chebyshev points of the second kind.

use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)]
use crate::math::Float;
use crate::math::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct Chebyshev {
    lo: f64,
    hi: f64,
    nodes: Vec<f64>,
    values: Vec<Complex64>,
}

fn points(n: usize) -> Vec<f64> {
    (0..=n).map(|j| -(PI * j as f64 / n as f64).cos()).collect()
}

impl Chebyshev {
    /// Interpolant of degree `n` on `[lo, hi]`.
    pub fn build<F: FnMut(f64) -> Complex64>(mut f: F, lo: f64, hi: f64, n: usize) -> Self {
        let n = n.max(1);
        let nodes: Vec<f64> = points(n)
            .into_iter()
            .map(|x| lo + 0.5 * (x + 1.0) * (hi - lo))
            .collect();
        let values = nodes.iter().map(|&x| f(x)).collect();
        Chebyshev {
            lo,
            hi,
            nodes,
            values,
        }
    }

    /// Doubles the degree from 16 until the interpolant predicts the new
    /// samples to within `tol` (absolute), up to degree `max_degree`.
    /// Returns the last interpolant and whether it converged.
    pub fn adaptive<F: FnMut(f64) -> Complex64>(
        mut f: F,
        lo: f64,
        hi: f64,
        tol: f64,
        max_degree: usize,
    ) -> (Self, bool) {
        let mut current = Self::build(&mut f, lo, hi, 16);
        while current.degree() < max_degree {
            let next = Self::build(&mut f, lo, hi, 2 * current.degree());
            // odd-indexed nodes of the refined set are new
            let worst = next
                .nodes
                .iter()
                .zip(&next.values)
                .skip(1)
                .step_by(2)
                .map(|(&x, &v)| (current.eval(x) - v).norm())
                .fold(0.0, f64::max);
            current = next;
            if worst <= tol {
                return (current, true);
            }
        }
        (current, false)
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let n = self.nodes.len();
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for j in 0..n {
            let diff = x - self.nodes[j];
            if diff == 0.0 {
                return self.values[j];
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == n - 1 {
                w *= 0.5;
            }
            let q = w / diff;
            num += self.values[j] * q;
            den += q;
        }
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::c;

    #[test]
    fn reproduces_smooth_function() {
        let f = |x: f64| c((3.0 * x).sin(), 1.0 / (2.0 + x));
        let (cheb, ok) = Chebyshev::adaptive(f, -1.0, 1.0, 1e-13, 1024);
        assert!(ok);
        for k in 0..50 {
            let x = -1.0 + 2.0 * k as f64 / 49.0 + 1e-3 * (k as f64).sin();
            let x = x.clamp(-1.0, 1.0);
            assert!((cheb.eval(x) - f(x)).norm() < 1e-12);
        }
    }
}
