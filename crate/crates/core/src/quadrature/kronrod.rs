//! Globally adaptive 21-point Gauss–Kronrod integration.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use super::{QuadResult, Tolerance};
use crate::math::pairwise_sum;
#[allow(unused_imports)]
use crate::math::Float;
use crate::{Error, Result};

const MAX_INTERVALS: usize = 20_000;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    /// error estimate is at the rounding floor; bisecting will not help
    settled: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        // settled segments sink to the bottom of the heap
        (!self.settled)
            .cmp(&!other.settled)
            .then(self.error.total_cmp(&other.error))
            .then(other.a.total_cmp(&self.a))
    }
}

fn kronrod21<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut abs_sum = fc.norm() * WGK[10];
    let mut fv1 = [Complex64::new(0.0, 0.0); 10];
    let mut fv2 = [Complex64::new(0.0, 0.0); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += (f1 + f2) * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).norm() * WGK[10];
    for j in 0..10 {
        asc += ((fv1[j] - mean).norm() + (fv2[j] - mean).norm()) * WGK[j];
    }
    let result = kronrod * half;
    let abs_int = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).norm();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * abs_int;
    let settled = error <= floor;
    if abs_int > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    if !result.re.is_finite() || !result.im.is_finite() {
        error = f64::INFINITY;
    }
    Segment {
        a,
        b,
        value: result,
        error,
        settled,
    }
}

/// `∫_a^b f(y) dy` by bisection of the segment with the largest error.
///
/// Stops when the summed error estimate meets `tol`, or when every segment
/// has reached its rounding floor. Fails with [`Error::NoConvergence`]
/// after 20000 segments.
pub fn integrate_adaptive<F>(
    mut f: F,
    a: f64,
    b: f64,
    tol: impl Into<Tolerance>,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    let tol = tol.into();
    if a == b {
        return Ok(QuadResult::zero());
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod21(&mut f, a, b);
    let mut evaluations = 21;
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);
    loop {
        let target = tol.target(value.norm());
        if error <= target {
            break;
        }
        let worst = *heap.peek().expect("heap is never empty");
        if worst.settled {
            break;
        }
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence {
                abs_error: error,
                tol: target,
            });
        }
        heap.pop();
        let mid = 0.5 * (worst.a + worst.b);
        if mid == worst.a || mid == worst.b {
            heap.push(Segment {
                settled: true,
                ..worst
            });
            continue;
        }
        let left = kronrod21(&mut f, worst.a, mid);
        let right = kronrod21(&mut f, mid, worst.b);
        evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if !error.is_finite() && heap.len() >= MAX_INTERVALS {
            return Err(Error::NoConvergence {
                abs_error: error,
                tol: target,
            });
        }
    }
    // Re-sum in a fixed order so the result is independent of the running
    // updates above.
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let values: Vec<Complex64> = segments.iter().map(|s| s.value).collect();
    let total_error = segments.iter().map(|s| s.error).sum::<f64>();
    Ok(QuadResult {
        value: pairwise_sum(&values),
        abs_error: total_error,
        evaluations,
    })
}

/// `∫ f(z) dz` along the polyline through `vertices`.
pub fn integrate_contour<F>(
    mut f: F,
    vertices: &[Complex64],
    tol: impl Into<Tolerance>,
) -> Result<QuadResult>
where
    F: FnMut(Complex64) -> Complex64,
{
    let tol = tol.into();
    let legs = vertices.len().saturating_sub(1).max(1);
    let mut total = QuadResult::zero();
    for pair in vertices.windows(2) {
        let (start, end) = (pair[0], pair[1]);
        let step = end - start;
        if step.norm() == 0.0 {
            continue;
        }
        let leg = integrate_adaptive(
            |s| f(start + step * s),
            0.0,
            1.0,
            tol.scaled(1.0 / legs as f64),
        )?;
        total = total.add(leg.scale(step));
    }
    Ok(total)
}

/// `∫_a^∞ f(y) dy` for an integrand decaying at least like `1/y²`, through
/// `y = a + scale·u/(1-u)`.
pub fn integrate_semi_infinite<F>(
    mut f: F,
    a: f64,
    scale: f64,
    tol: impl Into<Tolerance>,
) -> Result<QuadResult>
where
    F: FnMut(f64) -> Complex64,
{
    integrate_adaptive(
        |u| {
            let one_minus = 1.0 - u;
            let jac = scale / (one_minus * one_minus);
            let v = f(a + scale * u / one_minus);
            if jac.is_finite() {
                v * jac
            } else {
                Complex64::new(0.0, 0.0)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{c, PI};

    #[test]
    fn constant_and_sine() {
        let r = integrate_adaptive(|_| c(1.0, 0.0), 0.0, 1.0, 1e-14).unwrap();
        assert!((r.value - c(1.0, 0.0)).norm() < 1e-14);
        let r = integrate_adaptive(|y| c(y.sin(), 0.0), 0.0, PI, 1e-12).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn free_propagator_transform() {
        // over the whole line ∫dq/(2π) 1/(s + iq²/2) = sqrt(1/2)/sqrt(is); the
        // integrand is even, so twice the half-line value.
        let s = 1.0;
        let r = integrate_semi_infinite(
            |q| c(1.0, 0.0) / (c(s, 0.5 * q * q) * (2.0 * PI)),
            0.0,
            1.0,
            1e-13,
        )
        .unwrap();
        let full = r.value * 2.0;
        let expected = c(0.5, -0.5);
        assert!((full - expected).norm() < 1e-12, "{full}");
    }

    #[test]
    fn error_estimate_is_honest() {
        let r = integrate_adaptive(|y| c(y.sqrt(), 0.0), 0.0, 1.0, 1e-10).unwrap();
        let err = (r.value.re - 2.0 / 3.0).abs();
        assert!(err <= r.abs_error.max(1e-10));
    }

    #[test]
    fn contour_integral_of_entire_function() {
        // ∫ e^{-z²} dz over a path that detours into the upper half plane
        // equals the real-line value.
        let path = [c(-8.0, 0.0), c(-8.0, 1.5), c(8.0, 1.5), c(8.0, 0.0)];
        let r = integrate_contour(|z| (-z * z).exp(), &path, 1e-13).unwrap();
        assert!((r.value - c(PI.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn subdivision_limit_reports_no_convergence() {
        let r = integrate_adaptive(|y| c((1.0 / y).sin() / y, 0.0), 1e-9, 1.0, 1e-15);
        assert!(matches!(r, Err(Error::NoConvergence { .. })) || r.unwrap().abs_error > 0.0);
    }
}
