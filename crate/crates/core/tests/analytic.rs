use approx::assert_abs_diff_eq;
use plexcav::analytic::*;
use plexcav::observables::{concurrence, g2_numerator, g2_same_time, photon_qubit_reduce, population};
use plexcav::{Error, Mode};
use proptest::prelude::*;

/// `(C_ph, g²₁₂, G²₁₂)` computed from the embedded state.
fn numeric(x: f64, y: f64) -> (f64, f64, f64) {
    let rho = restricted_state_cqed::<f64>(&RestrictedFamilyParams::new(x, y).unwrap(), 2).unwrap();
    let c_ph = concurrence(&photon_qubit_reduce(&rho).unwrap()).unwrap();
    let g12 = g2_same_time(&rho, 1, 2).unwrap().unwrap();
    (c_ph, g12, g2_numerator(&rho, 1, 2).unwrap())
}

#[test]
fn family_amplitudes() {
    let p = RestrictedFamilyParams::new(1.0, 1.0).unwrap();
    assert_abs_diff_eq!(p.norm(), 1.0 / 3f64.sqrt(), epsilon = 1e-15);
    let a = p.amplitudes();
    assert_abs_diff_eq!(a.iter().map(|v| v * v).sum::<f64>(), 1.0, epsilon = 1e-15);
    assert!(RestrictedFamilyParams::new(f64::NAN, 0.0).is_err());
    assert!(RestrictedFamilyParams::new(0.0, f64::INFINITY).is_err());

    let rho = restricted_state_cqed::<f64>(&RestrictedFamilyParams::new(0.5, 0.0).unwrap(), 3).unwrap();
    // n = A²(x² + ½)
    assert_abs_diff_eq!(population(&rho, Mode::Cavity1).unwrap(), 0.75 / 1.25, epsilon = 1e-15);
    assert_eq!(population(&rho, Mode::Plasmon).unwrap(), 0.0);
}

#[test]
fn g12_from_cph_examples() {
    assert_eq!(g12_from_cph(1.0).unwrap(), 0.0);
    assert_eq!(g12_from_cph(0.0).unwrap(), 1.0);
    assert_abs_diff_eq!(g12_from_cph(0.5).unwrap(), 0.5 / 0.5625, epsilon = 1e-15);
    assert!(matches!(g12_from_cph(1.2), Err(Error::Domain(_))));
    assert!(matches!(g12_from_cph(-0.1), Err(Error::Domain(_))));
}

#[test]
fn g12_small_x_examples() {
    assert_abs_diff_eq!(g12_small_x(0.1, 0.5).unwrap(), 0.08, epsilon = 1e-15);
    assert!(matches!(g12_small_x(0.1, 0.0), Err(Error::Domain(_))));
    // x = 0.01, y = 0.5 lies well inside the regime
    let (c_ph, g12, _) = numeric(0.01, 0.5);
    let est = g12_small_x(0.01, c_ph).unwrap();
    assert!((est - g12).abs() / g12 < 0.01, "{est} vs {g12}");
}

#[test]
fn unnormalized_g12_examples() {
    assert_eq!(unnormalized_g12(0.25).unwrap(), 0.75);
    assert!(unnormalized_g12(2.0).is_err());
    for x in [0.0, 0.3, 1.0, 3.0] {
        let (c_ph, _, gn) = numeric(x, 0.0);
        assert_abs_diff_eq!(unnormalized_g12(c_ph).unwrap(), gn, epsilon = 1e-12);
    }
}

#[test]
fn g12_from_cph_degrades_with_ground_amplitude() {
    // exact without a ground-state admixture; the error grows roughly as 1.6·y
    let worst = |y: f64| {
        (0..=200)
            .map(|k| {
                let (c_ph, g12, _) = numeric(0.05 * k as f64, y);
                (g12_from_cph(c_ph).unwrap() - g12).abs()
            })
            .fold(0.0, f64::max)
    };
    assert!(worst(0.0) < 1e-12);
    assert!(worst(1e-3) < 2e-3);
    assert!(worst(0.05) > 0.05);
}

#[test]
fn decay_rate_examples() {
    let i = DecayEstimateInputs { n_bar_qd: 0.3, n_bar_cav: 0.1, gamma_qd: 5e-4, gamma_cav: 2e-6 };
    let (aq, ac) = i.alphas().unwrap();
    assert_abs_diff_eq!(aq, 0.75, epsilon = 1e-15);
    assert_abs_diff_eq!(ac, 0.25, epsilon = 1e-15);
    assert_abs_diff_eq!(concurrence_decay_rate(&i).unwrap(), 0.75 * 5e-4 + 0.25 * 2e-6, epsilon = 1e-18);

    let zero = DecayEstimateInputs { n_bar_qd: 0.0, n_bar_cav: 0.0, ..i };
    assert!(matches!(concurrence_decay_rate(&zero), Err(Error::Domain(_))));
}

#[test]
fn time_average_examples() {
    let ramp: Vec<(f64, f64)> = (0..=10).map(|k| (k as f64, k as f64)).collect();
    assert_abs_diff_eq!(time_average(&ramp, (0.0, 10.0)).unwrap(), 5.0, epsilon = 1e-15);
    assert_abs_diff_eq!(time_average(&ramp, (4.0, 6.0)).unwrap(), 5.0, epsilon = 1e-15);
    assert_eq!(time_average(&ramp, (3.0, 3.0)).unwrap(), 3.0);
    assert!(matches!(time_average(&ramp, (20.0, 30.0)), Err(Error::InvalidArgument(_))));

    let qd = vec![(0.0, 0.4), (1.0, 0.4)];
    let cav = vec![(0.0, 0.1), (1.0, 0.1)];
    let i = DecayEstimateInputs::from_series(&qd, &cav, (0.0, 1.0), 1.0, 0.0).unwrap();
    assert_abs_diff_eq!(concurrence_decay_rate(&i).unwrap(), 0.8, epsilon = 1e-15);
}

#[test]
fn alpha_window_starts_at_first_concurrence_peak() {
    let c: Vec<(f64, f64)> = (0..=400).map(|k| (k as f64, (k as f64 * std::f64::consts::PI / 100.0).sin().powi(2))).collect();
    assert_eq!(default_alpha_window(&c).unwrap(), (50.0, 400.0));
    let flat: Vec<(f64, f64)> = (0..10).map(|k| (k as f64, 0.0)).collect();
    assert!(matches!(default_alpha_window(&flat), Err(Error::InvalidArgument(_))));
}

proptest! {
    #[test]
    fn g12_from_cph_is_exact_without_ground_amplitude(x in 0.0f64..20.0) {
        let (c_ph, g12, _) = numeric(x, 0.0);
        prop_assert!((g12_from_cph(c_ph).unwrap() - g12).abs() < 1e-10);
    }

    #[test]
    fn photon_concurrence_closed_form(x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let p = RestrictedFamilyParams::new(x, y).unwrap();
        let a2 = p.norm().powi(2);
        let (c_ph, _, gn) = numeric(x, y);
        prop_assert!((c_ph - a2 * (1.0 + 2.0 * x * y).abs()).abs() < 1e-10);
        prop_assert!((gn - a2 * x * x).abs() < 1e-12);
    }

    #[test]
    fn decay_rate_lies_between_rates(nq in 0.0f64..1.0, nc in 1e-3f64..1.0, gq in 0.0f64..1e-3, gc in 0.0f64..1e-3) {
        let i = DecayEstimateInputs { n_bar_qd: nq, n_bar_cav: nc, gamma_qd: gq, gamma_cav: gc };
        let r = concurrence_decay_rate(&i).unwrap();
        prop_assert!(r >= gq.min(gc) - 1e-18 && r <= gq.max(gc) + 1e-18);
    }
}
