use deltawave_core::delay::log_derivative;
use deltawave_core::scalar::{reflection, transmission, transmission_reflection};
use deltawave_core::spin::spin_channel_coefficients;
use deltawave_core::{Error, PhysParams};
use proptest::prelude::*;

fn scalar(g: f64) -> PhysParams {
    PhysParams::natural(g, 0.0).unwrap()
}

#[test]
fn zero_momentum_is_rejected() {
    assert!(matches!(transmission_reflection(&scalar(1.0), 0.0), Err(Error::ZeroMomentum)));
    let spin = PhysParams::natural(1.0, 1.0).unwrap();
    assert!(matches!(spin_channel_coefficients(&spin, 0.0), Err(Error::ZeroMomentum)));
}

#[test]
fn spin_phases_do_not_depend_on_momentum() {
    // every channel amplitude is a fixed phase times a real function of p
    for (g, omega) in [(1.0, 1.0), (-2.0, 0.5), (0.3, 4.0)] {
        let params = PhysParams::natural(g, omega).unwrap();
        let pick: [fn(&deltawave_core::ChannelCoefficients) -> deltawave_core::Complex64; 4] =
            [|k| k.t_up, |k| k.r_up, |k| k.t_down, |k| k.r_down];
        for f in pick {
            let rho = log_derivative(|p| f(&spin_channel_coefficients(&params, p).unwrap()), 5.0).unwrap();
            assert!(rho.im.abs() < 1e-10, "g={g} ω={omega}: {rho}");
        }
    }
}

#[test]
fn flipped_channels_are_symmetric() {
    let params = PhysParams::natural(1.3, 0.6).unwrap();
    for p in [0.5, 2.0, 5.0, 9.0] {
        let k = spin_channel_coefficients(&params, p).unwrap();
        assert!((k.t_down - k.r_down).norm() < 1e-15);
        assert!((k.t_up - 1.0 - k.r_up).norm() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn scalar_unitarity(g in -10.0f64..10.0, p in 0.1f64..10.0) {
        let k = transmission_reflection(&scalar(g), p).unwrap();
        prop_assert!((k.t_up.norm_sqr() + k.r_up.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_coupling_reversal_conjugates(g in -10.0f64..10.0, p in 0.1f64..10.0) {
        let (a, b) = (scalar(g), scalar(-g));
        prop_assert!((transmission(&a, p) - transmission(&b, p).conj()).norm() < 1e-15);
        prop_assert!((reflection(&a, p) - reflection(&b, p).conj()).norm() < 1e-15);
    }

    #[test]
    fn scalar_coefficients_are_even(g in -10.0f64..10.0, p in 0.1f64..10.0) {
        let params = scalar(g);
        prop_assert_eq!(transmission(&params, p), transmission(&params, -p));
        prop_assert_eq!(reflection(&params, p), reflection(&params, -p));
    }

    #[test]
    fn spin_flux_balance(g in -10.0f64..10.0, omega in 0.0f64..10.0, p in 0.1f64..10.0) {
        let params = PhysParams::natural(g, omega).unwrap();
        let k = spin_channel_coefficients(&params, p).unwrap();
        prop_assert!((k.flux_sum(&params) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn degenerate_levels_split_into_opposite_couplings(g in -10.0f64..10.0, p in 0.1f64..10.0) {
        // at ω = 0 the states ↑ ± ↓ see ±g
        let k = spin_channel_coefficients(&PhysParams::natural(g, 0.0).unwrap(), p).unwrap();
        let plus = transmission(&scalar(g), p);
        let minus = transmission(&scalar(-g), p);
        prop_assert!(((k.t_up + k.t_down).norm() - plus.norm()).abs() < 1e-14);
        prop_assert!(((k.t_up - k.t_down).norm() - minus.norm()).abs() < 1e-14);
    }
}
