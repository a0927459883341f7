//! Exact momentum-space wave functions against their asymptotic forms.

use deltawave_core::scalar::{asymptotic_distance, psi_p_asymptotic, ScalarSolution};
use deltawave_core::spin::{psi_down_asymptotic, psi_up_asymptotic, SpinSolution};
use deltawave_core::{GaussianPacket, MomentumGrid, PhysParams};

fn packet() -> GaussianPacket {
    GaussianPacket::new(5.0, 0.2, -30.0).unwrap()
}

fn scalar(g: f64) -> ScalarSolution {
    ScalarSolution::new(PhysParams::natural(g, 0.0).unwrap(), packet()).unwrap()
}

#[test]
fn departure_equals_direct_difference() {
    for g in [1.0, -1.0] {
        let sol = scalar(g);
        let ev = sol.exact(1e-12).unwrap();
        for t in [2.0, 6.0, 9.0] {
            for p in [-5.3, -4.9, 0.7, 4.6, 5.0, 5.2] {
                let direct = ev.at(p, t).unwrap() - psi_p_asymptotic(&sol, p, t);
                let departure = ev.departure(p, t).unwrap();
                assert!((direct - departure).norm() < 1e-13, "g={g} t={t} p={p}");
            }
        }
    }
}

#[test]
fn limit_defect_vanishes() {
    for g in [1.0, -1.0, 4.0] {
        let ev = scalar(g).exact(1e-12).unwrap();
        for p in [-5.0, -0.4, 3.9, 5.0, 6.1] {
            assert!(ev.limit_defect(p).unwrap().norm() < 1e-14, "g={g} p={p}");
        }
    }
}

#[test]
fn distance_to_asymptote_decreases() {
    let ev = scalar(1.0).exact(1e-12).unwrap();
    let grid = MomentumGrid::symmetric(10.0, 1024).unwrap();
    let d: Vec<f64> = [5.0, 20.0, 80.0]
        .iter()
        .map(|&t| asymptotic_distance(&ev, &grid, t).unwrap())
        .collect();
    assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
    assert!(d[2] < 1e-3);
}

#[test]
fn bound_state_keeps_a_remnant() {
    // g < 0 binds; the packet leaves a small stationary population behind
    let ev = scalar(-1.0).exact(1e-12).unwrap();
    let grid = MomentumGrid::symmetric(10.0, 512).unwrap();
    let d40 = asymptotic_distance(&ev, &grid, 40.0).unwrap();
    let d80 = asymptotic_distance(&ev, &grid, 80.0).unwrap();
    assert!(d40 > 0.0 && (d40 - d80).abs() < 0.05 * d40, "{d40:e} {d80:e}");
}

#[test]
fn exact_scalar_starts_from_the_packet() {
    let sol = scalar(1.0);
    let ev = sol.exact(1e-12).unwrap();
    for p in [4.5, 5.0, 5.5] {
        let t = 1e-9;
        let free = packet().amplitude(deltawave_core::Complex64::new(p, 0.0), 1.0)
            * deltawave_core::Complex64::cis(-p * p * t / 2.0);
        let v = ev.at(p, t).unwrap();
        assert!((v - free).norm() < 1e-8, "{v} vs {free}");
    }
}

#[test]
fn spinor_approaches_its_asymptote() {
    let sol = SpinSolution::new(PhysParams::natural(1.0, 1.0).unwrap(), packet());
    let ev = sol.exact(1e-12).unwrap();
    let grid = MomentumGrid::symmetric(10.0, 1024).unwrap();
    let flip = sol.params().flip_momentum_sq();
    let mut previous = f64::INFINITY;
    for t in [1.0, 10.0, 20.0] {
        let (mut dist, mut norm, mut gate) = (0.0, 0.0, 0.0f64);
        for (&p, &w) in grid.p_values().iter().zip(grid.weights()) {
            let up = ev.up_at(p, t).unwrap();
            let down = ev.down_at(p, t).unwrap();
            dist += ((up - psi_up_asymptotic(&sol, p, t)).norm_sqr()
                + (down - psi_down_asymptotic(&sol, p, t)).norm_sqr())
                * w;
            norm += (up.norm_sqr() + down.norm_sqr()) * w;
            if p * p < flip {
                gate = gate.max(down.norm_sqr());
            }
        }
        let dist = dist.sqrt();
        assert!(dist < previous, "t={t}: {dist:e}");
        assert!((norm - 1.0).abs() < 1e-10, "t={t}: norm {norm}");
        if t >= 20.0 {
            assert!(gate < 1e-12, "gate {gate:e}");
        }
        previous = dist;
    }
    assert!(previous < 1e-10);
}
