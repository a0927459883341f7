//! Origin amplitudes of both levels for the two-level benchmark
//! (ħ = m = g = ω = 1, p0 = 5, δp = 0.2, x0 = -30), against 40-digit
//! offline values and against Talbot inversion of the per-momentum
//! transforms.
#![allow(clippy::excessive_precision)]

use deltawave_core::quadrature::Tolerance;
use deltawave_core::spin::{c_down_of_t, c_down_of_t_talbot, c_up_of_t, c_up_of_t_talbot, SpinSolution};
use deltawave_core::{Complex64, GaussianPacket, PhysParams};

fn bench() -> SpinSolution {
    SpinSolution::new(
        PhysParams::natural(1.0, 1.0).unwrap(),
        GaussianPacket::new(5.0, 0.2, -30.0).unwrap(),
    )
}

/// `(t, C↑, C↓)`.
const REFERENCE: [(f64, [f64; 2], [f64; 2]); 3] = [
    (
        0.2,
        [-2.096_727_966_964_183_5e-16, -3.251_046_845_846_850_5e-16],
        [-3.800_538_746_092_832_1e-17, 5.879_919_122_544_864_1e-17],
    ),
    (
        1.0,
        [1.292_384_897_622_750_9e-12, 2.173_701_384_196_180_4e-12],
        [2.834_283_830_650_696_7e-13, -3.460_389_975_136_901_3e-13],
    ),
    (
        5.0,
        [-0.012_646_253_676_720_096, 0.061_284_048_443_130_454],
        [0.011_628_650_148_984_558, 0.001_640_773_034_333_912_5],
    ),
];

fn rel(v: Complex64, exact: [f64; 2]) -> f64 {
    let exact = Complex64::new(exact[0], exact[1]);
    (v - exact).norm() / exact.norm()
}

#[test]
fn closed_forms_match_reference() {
    let sol = bench();
    let tol = Tolerance::relative(1e-10);
    for (t, up, down) in REFERENCE {
        let u = c_up_of_t(&sol, t, tol).unwrap();
        let d = c_down_of_t(&sol, t, tol).unwrap();
        assert!(rel(u, up) < 1e-8, "up t={t}: {u} rel {:e}", rel(u, up));
        assert!(rel(d, down) < 1e-8, "down t={t}: {d} rel {:e}", rel(d, down));
    }
}

#[test]
fn talbot_matches_reference() {
    let sol = bench();
    let tol = Tolerance::relative(1e-10);
    for (t, up, down) in REFERENCE {
        let u = c_up_of_t_talbot(&sol, t, 256, tol).unwrap();
        let d = c_down_of_t_talbot(&sol, t, 256, tol).unwrap();
        assert!(rel(u, up) < 1e-8, "up t={t}: {u} rel {:e}", rel(u, up));
        assert!(rel(d, down) < 1e-8, "down t={t}: {d} rel {:e}", rel(d, down));
    }
}

#[test]
fn free_particle_never_flips() {
    let sol = SpinSolution::new(
        PhysParams::natural(0.0, 1.0).unwrap(),
        GaussianPacket::new(5.0, 0.2, -30.0).unwrap(),
    );
    for t in [0.5, 6.0, 20.0] {
        assert_eq!(c_down_of_t(&sol, t, 1e-12).unwrap(), Complex64::new(0.0, 0.0));
    }
}
