use ionjc::quantized_pump::{rho_vib, sigma22_quantized_series};
use ionjc::semiclassical::{propagate_time_ordered, sigma22_no_ordering_series, VibronicState};
use ionjc::{ModelParams, TruncationPolicy, C64};
use proptest::prelude::*;

fn params(k: usize, eta: f64, dphi: f64, det: f64) -> ModelParams {
    ModelParams::new(k, eta, dphi).with_detuning(det)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sigma22_ignores_trap_and_transition_frequency(
        level in 1u8..=2, k in 0usize..4, eta in 0.05f64..0.3, dphi in 0.0f64..6.3,
        det in -5.0f64..5.0, a in 0.0f64..2.5, a_arg in 0.0f64..6.3, b in 0.5f64..12.0,
        nu in 0.0f64..1e4, w21 in 0.0f64..1e6,
    ) {
        let base = params(k, eta, dphi, det);
        let shifted = base.with_frequencies(nu, w21);
        let alpha0 = C64::from_polar(a, a_arg);
        let beta0 = C64::new(b, 0.0);
        let policy = TruncationPolicy::for_amplitudes(a, b, 1e-12);
        let times = [0.0, 0.4, 3.0, 17.5];
        let x = sigma22_quantized_series(level, &times, alpha0, beta0, &base, &policy).unwrap();
        let y = sigma22_quantized_series(level, &times, alpha0, beta0, &shifted, &policy).unwrap();
        for (u, v) in x.iter().zip(&y) {
            prop_assert!((u - v).abs() <= 1e-12, "{u} vs {v}");
            prop_assert!((-1e-14..=1.0 + 1e-14).contains(u));
        }
    }

    #[test]
    fn density_matrix_properties(
        level in 1u8..=2, k in 0usize..4, eta in 0.05f64..0.3, dphi in 0.0f64..6.3,
        det in -5.0f64..5.0, a in 0.0f64..2.0, a_arg in 0.0f64..6.3, b in 0.5f64..8.0,
        nu in 0.0f64..5e3, t in 0.0f64..30.0,
    ) {
        let p = params(k, eta, dphi, det);
        let alpha0 = C64::from_polar(a, a_arg);
        let beta0 = C64::new(b, 0.0);
        let policy = TruncationPolicy::for_amplitudes(a, b, 1e-12);
        let rho = rho_vib(t, level, alpha0, beta0, &p, &policy).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() <= 2.0 * policy.tail_epsilon + 1e-13);
        prop_assert!(rho.trace_defect <= 2.0 * policy.tail_epsilon + 1e-13);
        prop_assert_eq!(rho.hermiticity_error(), 0.0);
        prop_assert!(rho.min_eigenvalue() >= -1e-13);

        let moved = rho_vib(t, level, alpha0, beta0, &p.with_frequencies(nu, 1e5), &policy).unwrap();
        for (u, v) in rho.populations().iter().zip(moved.populations()) {
            prop_assert!((u - v).abs() <= 1e-12);
        }
    }

    #[test]
    fn classical_propagation_conserves_norm(
        k in 0usize..4, eta in 0.05f64..0.3, dphi in 0.0f64..6.3, r in -1.0f64..1.0, a in 0.0f64..3.0,
    ) {
        let p = ModelParams::new(k, eta, dphi);
        let policy = TruncationPolicy::for_amplitudes(a, 0.0, 1e-12);
        let psi0 = VibronicState::ground_coherent(C64::new(a, 0.0), &policy).unwrap();
        let taus = [0.0, 2.0, 10.0, 40.0];
        let states = propagate_time_ordered(&psi0, 0.0, r, &taus, &p, 1e-10).unwrap();
        let n0 = psi0.norm_sqr();
        for s in &states {
            prop_assert!((s.norm_sqr() - n0).abs() < 1e-8);
        }
        let closed = sigma22_no_ordering_series(C64::new(a, 0.0), &p, r, 0.0, &taus, &policy).unwrap();
        for v in closed {
            prop_assert!((-1e-14..=1.0 + 1e-14).contains(&v));
        }
    }
}
