use std::f64::consts::TAU;

use num_complex::Complex64;
use opo_core::cavity::{
    circular_mode, element_matrices, is_stationary, round_trip_exact, round_trip_reduced,
    stationarity_residual, steady_state, threshold_branches, ComplexMatrix4, OpticalConstants,
    ReducedParams,
};
use proptest::prelude::*;

fn naive_product(factors: &[ComplexMatrix4]) -> [[Complex64; 4]; 4] {
    let mut acc = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in acc.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    for m in factors {
        let mut next = [[Complex64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    next[i][j] += acc[i][k] * m[(k, j)];
                }
            }
        }
        acc = next;
    }
    acc
}

fn sample_constants() -> OpticalConstants {
    OpticalConstants {
        wavevector_a: 7.9e6,
        wavevector_b: 6.6e6,
        wavevector_pump: 1.45e7,
        plate_index: 1.55,
        pump_index: 1.79,
        index_1: 1.84,
        index_2: 1.76,
        plate_thickness: 0.9e-3,
        crystal_length: 1.2e-2,
        cavity_length: 0.42,
        plate_angle: 0.013,
        reflectivity: 0.95,
        nonlinear_gain: 0.02,
    }
}

#[test]
fn exact_round_trip_is_ordered_product() {
    let c = sample_constants();
    let pump = Complex64::new(0.7, -0.4);
    let e = element_matrices(&c, pump).unwrap();
    // Left-to-right application order: plate_1 first.
    let oracle = naive_product(&[e.propagation, e.plate_2, e.crystal_beta, e.crystal_alpha, e.plate_1]);
    let rt = round_trip_exact(&c, pump).unwrap();
    for i in 0..4 {
        for j in 0..4 {
            assert!((rt[(i, j)] - oracle[i][j]).norm() < 1e-13);
        }
    }
}

/// Constants whose round trip has mirror loss, plate coupling, detunings and
/// single-pass gain all equal to `s` (with `δ_b = -s/2` to break symmetry).
fn constants_with_small_parameter(s: f64) -> (OpticalConstants, Complex64) {
    let mut c = sample_constants();
    let length = c.cavity_length
        + 2.0 * c.plate_index * c.plate_thickness
        + c.crystal_length * (c.index_1 + c.index_2);
    c.wavevector_a = (TAU * 1.3e6 + s) / length;
    c.wavevector_b = (TAU * 1.1e6 - 0.5 * s) / length;
    c.reflectivity = 1.0 - s;
    c.plate_angle = 0.5 * s.asin();
    let pump = Complex64::from_polar(s / c.nonlinear_gain, 0.3);
    (c, pump)
}

fn first_order_gap(s: f64) -> f64 {
    let (c, pump) = constants_with_small_parameter(s);
    let exact = round_trip_exact(&c, pump).unwrap();
    let reduced = round_trip_reduced(&c.reduced(1.0), c.effective_pump(pump));
    (exact - reduced).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn exact_reduces_to_first_order_form() {
    let mut previous: Option<f64> = None;
    for s in [1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4, 1e-4] {
        let (c, _) = constants_with_small_parameter(s);
        let (da, db) = c.detunings();
        assert!((da - s).abs() < 1e-7, "{da} vs {s}");
        assert!((db + 0.5 * s).abs() < 1e-7);

        let gap = first_order_gap(s);
        assert!(gap <= 10.0 * s * s, "s={s}: gap {gap}");
        if let Some(prev) = previous {
            let ratio = prev / gap;
            if (s - 1e-4).abs() > 1e-12 {
                // halving s quarters the gap
                assert!((3.5..4.5).contains(&ratio), "s={s}: ratio {ratio}");
            }
        }
        previous = Some(gap);
    }
}

#[test]
fn stationarity_minimum_lies_on_the_diagonal() {
    let (kappa, gain, eps) = (1e-3, 0.01, 1e-3);
    let base = ReducedParams::working_point(kappa, gain, eps, 1.0);
    let pump = base.pump_amplitude();
    let steps: Vec<f64> = (-20..=20).map(|i| 1e-4 * i as f64).collect();
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for &da in &steps {
        for &db in &steps {
            let p = ReducedParams {
                detuning_a: da,
                detuning_b: db,
                ..base
            };
            let r = stationarity_residual(&p, pump);
            if r < best.0 {
                best = (r, da, db);
            }
        }
    }
    assert_eq!(best.1, best.2);
    assert!((best.1 - eps).abs() < 1e-12 || (best.1 + eps).abs() < 1e-12);
    assert!(is_stationary(
        &ReducedParams {
            detuning_a: best.1,
            detuning_b: best.2,
            ..base
        },
        pump
    ));
}

proptest! {
    #[test]
    fn eigenvector_identity(kappa in 1e-5f64..1e-2, eps in 1e-5f64..1e-2, gain in 1e-3f64..1.0) {
        let p = ReducedParams::working_point(kappa, gain, eps, 1.0);
        let v = circular_mode();
        let out = round_trip_reduced(&p, p.pump_amplitude()) * v;
        prop_assert!((out - v).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn threshold_ordering(delta in 0.0f64..0.1, eps in 0.0f64..0.1, kappa in 1e-4f64..0.1, gain in 1e-3f64..1.0) {
        let b = threshold_branches(delta, eps, kappa, gain).unwrap();
        prop_assert!(b.lower <= b.upper);
        if delta * eps == 0.0 {
            prop_assert_eq!(b.lower, b.upper);
        } else {
            prop_assert!(b.lower < b.upper);
        }
    }

    #[test]
    fn output_power_grows_with_pump(sigma in 1.0f64..5.0, step in 1e-6f64..1.0) {
        let p = ReducedParams::working_point(0.01, 0.001, 0.003, sigma);
        let lo = steady_state(&p, 0.0).unwrap().beam_power();
        let hi = steady_state(&ReducedParams { sigma: sigma + step, ..p }, 0.0).unwrap().beam_power();
        prop_assert!(hi > lo);
        prop_assert!(lo >= 0.0);
    }
}

#[test]
fn output_power_is_continuous_at_threshold() {
    let p = ReducedParams::working_point(0.01, 0.001, 0.003, 1.0);
    assert_eq!(steady_state(&p, 0.0).unwrap().beam_power(), 0.0);
    let just_above = steady_state(&ReducedParams { sigma: 1.0 + 1e-12, ..p }, 0.0).unwrap();
    assert!(just_above.beam_power() < 1e-4);
}

#[test]
fn values_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<OpticalConstants>();
    assert_send_sync::<ReducedParams>();
    assert_send_sync::<opo_core::FieldState>();
}
