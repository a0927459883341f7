//! Small numerical helpers shared across modules.

pub(crate) use core::f64::consts::PI;
// Float methods for no_std builds. Whenever std is linked (tests, examples)
// its inherent methods shadow these, hence the allow at each import.
pub(crate) use num_traits::Float;

use num_complex::Complex64;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn cis(phase: f64) -> Complex64 {
    Complex64::new(phase.cos(), phase.sin())
}

pub(crate) const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Pairwise sum in index order; the result does not depend on how the
/// terms were produced.
pub(crate) fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        let mut acc = Complex64::new(0.0, 0.0);
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

pub(crate) fn pairwise_sum_real(values: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_real(&values[..mid]) + pairwise_sum_real(&values[mid..])
}
