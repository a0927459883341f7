use deltawave_core::delay::{
    assemble_reflected, assemble_transmitted, delay_closed_form_scalar, delay_from_coefficient,
    gaussian_saddle_packet, log_derivative, saddle_log_modulus, saddle_width, scalar_coefficient, Channel,
    Side,
};
use deltawave_core::{Complex64, Error, GaussianPacket, PhysParams};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit() -> PhysParams {
    PhysParams::natural(1.0, 0.0).unwrap()
}

#[test]
fn unit_coupling_delays() {
    // Ω = 1 at p0 = 1: δ = (ħ/2)(Ω/E)|T|² = 1/2 for a narrow packet
    let narrow = delay_closed_form_scalar(&unit(), 1.0, 1e-9, Side::Transmit).unwrap();
    assert!((narrow.delay - 0.5).abs() < 1e-12);
    let finite = delay_closed_form_scalar(&unit(), 1.0, 0.05, Side::Transmit).unwrap();
    assert!((finite.delay - 0.498_753_117_206_982_5).abs() < 1e-12, "{}", finite.delay);
    let attractive = PhysParams::natural(-1.0, 0.0).unwrap();
    let flipped = delay_closed_form_scalar(&attractive, 1.0, 1e-9, Side::Transmit).unwrap();
    assert!((flipped.delay + 0.5).abs() < 1e-12);
}

#[test]
fn closed_form_agrees_with_finite_differences() {
    for g in [-3.0, -1.0, 0.4, 1.0, 7.0] {
        let params = PhysParams::natural(g, 0.0).unwrap();
        for (side, channel) in [(Side::Transmit, Channel::TRANSMIT), (Side::Reflect, Channel::REFLECT)] {
            let closed = delay_closed_form_scalar(&params, 5.0, 0.05, side).unwrap();
            let fd = delay_from_coefficient(scalar_coefficient(&params, side), channel, 5.0, 0.05, &params).unwrap();
            assert!((closed.delay - fd.delay).abs() < 1e-8 * closed.delay.abs(), "g={g} {side:?}");
            assert!((closed.v_mean - fd.v_mean).abs() < 1e-8 * closed.v_mean);
            assert_eq!(closed.delay.signum(), g.signum());
        }
    }
}

#[test]
fn delay_vanishes_in_both_coupling_limits() {
    let p0 = 5.0;
    for omega in [1e-6, 1e6] {
        let params = PhysParams::natural(omega * p0, 0.0).unwrap();
        let report = delay_closed_form_scalar(&params, p0, 0.2, Side::Transmit).unwrap();
        assert!(report.delay.abs() < 1e-5, "Ω={omega}: {}", report.delay);
    }
}

#[test]
fn constant_and_pure_phase_coefficients() {
    let params = unit();
    let flat = delay_from_coefficient(|_| c(0.3, -0.4), Channel::TRANSMIT, 5.0, 0.2, &params).unwrap();
    assert!(flat.delay.abs() < 1e-10);
    assert!((flat.v_mean - 5.0).abs() < 1e-9);
    // a phase slope α moves the packet back by ħα, a delay of mħα/p0
    let alpha = 0.7;
    let phase = delay_from_coefficient(|p| Complex64::cis(alpha * p), Channel::TRANSMIT, 5.0, 0.2, &params).unwrap();
    assert!((phase.v_mean - 5.0).abs() < 1e-8);
    assert!((phase.delay - alpha / 5.0).abs() < 1e-8);
}

#[test]
fn vanishing_coefficient_is_rejected() {
    let r = log_derivative(|_| c(1e-13, 0.0), 5.0);
    assert!(matches!(r, Err(Error::VanishingCoefficient { .. })));
}

#[test]
fn saddle_packet_of_unit_coefficient_is_the_free_packet() {
    let params = unit();
    let packet = GaussianPacket::new(5.0, 0.2, -30.0).unwrap();
    for t in [0.0, 3.0, 12.0] {
        for x in [-35.0, -10.0, 0.0, 25.0, 31.0] {
            let saddle = gaussian_saddle_packet(|_| c(1.0, 0.0), &packet, &params, t, x).unwrap();
            let exact = packet.free_position(&params, x, t);
            assert!((saddle - exact).norm() < 1e-13 * (1.0 + exact.norm()), "t={t} x={x}");
        }
    }
}

#[test]
fn assembled_unit_coefficient_is_the_free_packet() {
    let params = unit();
    let packet = GaussianPacket::new(5.0, 0.2, -30.0).unwrap();
    let t = 12.0;
    let xs: Vec<f64> = (0..40).map(|k| 15.0 + k as f64 * 0.75).collect();
    let got = assemble_transmitted(|_| c(1.0, 0.0), &packet, &params, t, &xs, 1e-12).unwrap();
    for (x, v) in xs.iter().zip(&got) {
        let exact = packet.free_position(&params, *x, t);
        assert!((v - exact).norm() < 1e-10, "x={x}: {v} vs {exact}");
    }
}

#[test]
fn assembled_packet_approaches_the_saddle_form() {
    // δp/p0 = 0.01: the first-order saddle form errs at O((δp/p0)²)
    let params = unit();
    let packet = GaussianPacket::new(5.0, 0.05, -60.0).unwrap();
    let t = 30.0;
    let coef = scalar_coefficient(&params, Side::Transmit);
    let centre = packet.x0() + 5.0 * t;
    let xs: Vec<f64> = (-60..=60).map(|k| centre + k as f64 * 0.5).collect();
    let exact = assemble_transmitted(&coef, &packet, &params, t, &xs, 1e-12).unwrap();
    let (mut diff, mut norm) = (0.0, 0.0);
    for (x, e) in xs.iter().zip(&exact) {
        let s = gaussian_saddle_packet(&coef, &packet, &params, t, *x).unwrap();
        diff += (s - e).norm_sqr();
        norm += e.norm_sqr();
    }
    let rel = (diff / norm).sqrt();
    assert!(rel < 1e-3, "{rel:e}");
}

#[test]
fn reflected_packet_of_unit_coefficient_mirrors_the_free_packet() {
    let params = unit();
    let packet = GaussianPacket::new(5.0, 0.2, -30.0).unwrap();
    let t = 12.0;
    let xs: Vec<f64> = (0..20).map(|k| -15.0 - k as f64 * 1.5).collect();
    let got = assemble_reflected(|_| c(1.0, 0.0), &packet, &params, t, &xs, 1e-12).unwrap();
    for (x, v) in xs.iter().zip(&got) {
        let exact = packet.free_position(&params, -x, t);
        assert!((v - exact).norm() < 1e-10, "x={x}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn saddle_modulus_identity(
        g in -3.0f64..3.0,
        t in 0.0f64..40.0,
        offset in -10.0f64..10.0,
    ) {
        let params = PhysParams::natural(g, 0.0).unwrap();
        let packet = GaussianPacket::new(5.0, 0.2, -30.0).unwrap();
        let coef = scalar_coefficient(&params, Side::Transmit);
        let x = packet.x0() + 5.0 * t + offset;
        let psi = gaussian_saddle_packet(&coef, &packet, &params, t, x).unwrap();
        let ratio = log_derivative(&coef, 5.0).unwrap();
        let u = saddle_width(&packet, &params, t);
        let scale = coef(5.0).norm() * (std::f64::consts::PI / u).sqrt().norm() * packet.norm()
            / (2.0 * std::f64::consts::PI).sqrt();
        let lhs = (psi.norm() / scale).ln();
        let rhs = saddle_log_modulus(ratio, &packet, &params, t, x);
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()), "{} vs {}", lhs, rhs);
    }
}
