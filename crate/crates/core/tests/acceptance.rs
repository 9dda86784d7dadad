//! One test per headline criterion. Each prints a single PASS/FAIL line on
//! stderr (written directly, so it shows without `--nocapture`) and then
//! asserts.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::{rabi_cases, two_level_transfer, FourierOracle};
use ionjc::cli_io::preset;
use ionjc::fock_core::{coherent_vector, rabi_frequency};
use ionjc::quantized_pump::{convergence_metric, evolve, rho_vib, sigma22_quantized_series, BasisLabel, CompositeState};
use ionjc::quasiprob::{p_element, p_function, FilterSpec, GridSpec, PElementTable};
use ionjc::semiclassical::{compare_ordering, propagate_time_ordered, VibronicState};
use ionjc::{ModelParams, TruncationPolicy, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};

fn report(name: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "acceptance {verdict} {name}: {detail}");
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect()
}

#[test]
fn time_ordering_significance() {
    let config = preset("fig2").unwrap();
    let policy = config.truncation();
    let started = Instant::now();
    let taus = linspace(0.0, 150.0, config.time.n_points);
    let report_150 = compare_ordering(
        &config.params,
        config.alpha0(),
        config.r,
        &taus,
        &policy,
        1e-10,
        0.1,
    )
    .unwrap();
    let elapsed = started.elapsed();
    let short_gap = taus
        .iter()
        .zip(report_150.ordered.iter().zip(&report_150.no_ordering))
        .filter(|(t, _)| **t < 5.0)
        .map(|(_, (a, b))| (a - b).abs())
        .fold(0.0, f64::max);
    let pass = report_150.sup_distance > 0.1 && short_gap < 5e-3 && elapsed < Duration::from_secs(30);

    // Same comparison on a longer window, for context.
    let long = linspace(0.0, 300.0, 4000);
    let report_300 =
        compare_ordering(&config.params, config.alpha0(), config.r, &long, &policy, 1e-10, 0.1).unwrap();
    report(
        "fig2-time-ordering",
        pass,
        format!(
            "sup gap on [0,150] = {:.3e} (need > 0.1), gap for tau < 5 = {:.3e} (need < 5e-3), {:.1?}; \
             on [0,300]: sup gap {:.3} at tau {:.1}, first crossing {:?}",
            report_150.sup_distance,
            short_gap,
            elapsed,
            report_300.sup_distance,
            report_300.tau_at_sup,
            report_300.first_crossing.map(|t| (t * 10.0).round() / 10.0),
        ),
    );
    assert!(pass);
}

#[test]
fn pump_convergence_monotonicity() {
    let started = Instant::now();
    let params = ModelParams::new(2, 0.2, 0.0);
    let alpha0 = C64::new(12f64.sqrt(), 0.0);
    // common window: τ ∈ [0, 30], i.e. t̃ ∈ [0, 1.5] for |β0| = 20
    let taus = linspace(0.0, 30.0, 601);
    let policy = TruncationPolicy::for_amplitudes(alpha0.norm(), 100.0, 1e-12);
    let curves = convergence_metric(&params, alpha0, 0.2, &[5.0, 20.0, 100.0], &taus, &policy, 1e-10).unwrap();
    let elapsed = started.elapsed();
    let d: Vec<f64> = curves.iter().map(|c| c.sup_distance).collect();
    let pass = d[0] > d[1] && d[1] > d[2] && d[2] < 0.05 && elapsed < Duration::from_secs(120);
    report(
        "fig3-pump-convergence",
        pass,
        format!("d(5) = {:.4}, d(20) = {:.4}, d(100) = {:.4} (need decreasing, d(100) < 0.05), {elapsed:.1?}", d[0], d[1], d[2]),
    );
    assert!(pass);
}

#[test]
fn resonant_rabi_oracle() {
    let mut worst_evolve: f64 = 0.0;
    let mut worst_ode: f64 = 0.0;
    for case in rabi_cases(2024, 50) {
        let p = case.params();
        let omega = rabi_frequency(case.m, case.n, &p).norm();
        let times = linspace(0.0, 8.0 * std::f64::consts::PI / omega, 81);
        let init = CompositeState::basis(2, case.m, case.n);
        let target = BasisLabel::new(1, case.m + 1, case.n + case.k);
        let scale = ((case.m + 1) as f64).sqrt();
        let taus: Vec<f64> = times.iter().map(|t| scale * t).collect();
        let states =
            propagate_time_ordered(&VibronicState::basis(2, case.n, case.n + case.k), 0.0, 0.0, &taus, &p, 1e-12)
                .unwrap();
        for (t, s) in times.iter().zip(&states) {
            let expected = (0.5 * omega * t).sin().powi(2);
            let q = evolve(&init, *t, &p).unwrap().get(target).norm_sqr();
            worst_evolve = worst_evolve.max((q - expected).abs());
            worst_ode = worst_ode.max((1.0 - s.excited_population() - expected).abs());
        }
    }
    let pass = worst_evolve <= 1e-8 && worst_ode <= 1e-8;
    report(
        "resonant-rabi-oracle",
        pass,
        format!("50 cases, sup error evolve = {worst_evolve:.2e}, time-ordered ODE = {worst_ode:.2e} (need <= 1e-8)"),
    );
    assert!(pass);
}

#[test]
fn detuned_two_level_oracle() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(99);
    let mut worst: f64 = 0.0;
    for case in rabi_cases(4048, 50) {
        let det = rng.gen_range(0.05..25.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let p = case.params().with_detuning(det).with_frequencies(rng.gen_range(0.0..5e3), rng.gen_range(0.0..1e5));
        let omega = rabi_frequency(case.m, case.n, &p);
        let s = (det * det + omega.norm_sqr()).sqrt();
        let init = CompositeState::basis(2, case.m, case.n);
        let target = BasisLabel::new(1, case.m + 1, case.n + case.k);
        for t in linspace(0.0, 6.0 * std::f64::consts::PI / s, 61) {
            let got = evolve(&init, t, &p).unwrap().get(target).norm_sqr();
            worst = worst.max((got - two_level_transfer(omega, det, t)).abs());
        }
    }
    let pass = worst <= 1e-10;
    report("detuned-2x2-oracle", pass, format!("50 cases, sup error = {worst:.2e} (need <= 1e-10)"));
    assert!(pass);
}

#[test]
fn invariance_suite() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    let mut sigma_dev: f64 = 0.0;
    let mut pop_dev: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let mut trace_dev: f64 = 0.0;
    let mut min_eig = f64::INFINITY;
    for _ in 0..20 {
        let k = rng.gen_range(0..=3);
        let base = ModelParams::new(k, rng.gen_range(0.05..0.3), rng.gen_range(0.0..6.28))
            .with_detuning(rng.gen_range(-8.0..8.0));
        let level = rng.gen_range(1..=2u8);
        let alpha0 = C64::from_polar(rng.gen_range(0.0..2.5), rng.gen_range(0.0..6.28));
        let beta0 = C64::new(rng.gen_range(1.0..40.0), 0.0);
        let policy = TruncationPolicy::for_amplitudes(alpha0.norm(), beta0.norm(), 1e-12);
        let times = linspace(0.0, 20.0, 21);
        let reference = sigma22_quantized_series(level, &times, alpha0, beta0, &base, &policy).unwrap();
        let moved = base.with_frequencies(rng.gen_range(0.0..1e4), rng.gen_range(0.0..1e6));
        let other = sigma22_quantized_series(level, &times, alpha0, beta0, &moved, &policy).unwrap();
        for (a, b) in reference.iter().zip(&other) {
            sigma_dev = sigma_dev.max((a - b).abs());
        }
        let t = rng.gen_range(0.0..50.0);
        let rho = rho_vib(t, level, alpha0, beta0, &base, &policy).unwrap();
        let rho_moved = rho_vib(t, level, alpha0, beta0, &base.with_frequencies(moved.nu_tilde, 0.0), &policy).unwrap();
        for (a, b) in rho.populations().iter().zip(rho_moved.populations()) {
            pop_dev = pop_dev.max((a - b).abs());
        }
        for r in [&rho, &rho_moved] {
            herm = herm.max(r.hermiticity_error());
            trace_dev = trace_dev.max((r.trace() - 1.0).abs());
            min_eig = min_eig.min(r.min_eigenvalue());
        }
    }
    let pass = sigma_dev <= 1e-12 && pop_dev <= 1e-12 && herm <= 1e-12 && trace_dev <= 1e-10 && min_eig >= -1e-10;
    report(
        "invariance-suite",
        pass,
        format!(
            "sigma22 vs (nu, w21) {sigma_dev:.1e} (<= 1e-12), populations vs nu {pop_dev:.1e}, \
             hermiticity {herm:.1e} (<= 1e-12), |trace - 1| {trace_dev:.1e} (<= 1e-10), min eigenvalue {min_eig:.1e} (>= -1e-10)"
        ),
    );
    assert!(pass);
}

#[test]
fn quasiprobability_exactness() {
    let mut vacuum_err: f64 = 0.0;
    for w in [0.5, 1.7, 3.0] {
        let v = p_element(0, 0, C64::new(0.0, 0.0), &FilterSpec::new(w)).unwrap();
        vacuum_err = vacuum_err.max((v.re - w * w / std::f64::consts::PI).abs());
    }

    let spec = FilterSpec::new(1.7);
    let vacuum = DMatrix::from_element(1, 1, C64::new(1.0, 0.0));
    let mut displacement_err: f64 = 0.0;
    for beta in [C64::new(1.2, 0.0), C64::from_polar(1.5, 2.0), C64::new(-0.3, -0.9)] {
        let policy = TruncationPolicy { n_max_motion: 40, m_max_pump: 0, tail_epsilon: 1.0 };
        let v = coherent_vector(beta, &policy).unwrap().entries;
        let rho = DMatrix::from_fn(v.len(), v.len(), |m, n| v[m] * v[n].conj());
        let grid = GridSpec::square(3.0, 15);
        let shifted = GridSpec {
            re_min: grid.re_min - beta.re,
            re_max: grid.re_max - beta.re,
            im_min: grid.im_min - beta.im,
            im_max: grid.im_max - beta.im,
            ..grid
        };
        let a = p_function(&rho, &grid, &spec).unwrap();
        let b = p_function(&vacuum, &shifted, &spec).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            displacement_err = displacement_err.max((x - y).abs());
        }
    }

    let mut rng = rand::rngs::StdRng::seed_from_u64(31);
    let grid = GridSpec::square(2.5, 9);
    let mut fourier_err: f64 = 0.0;
    for n_max in 0..=6 {
        for _ in 0..2 {
            let dim = n_max + 1;
            let a = DMatrix::from_fn(dim, dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let rho = &a * a.adjoint();
            let rho = &rho / rho.trace();
            let w = rng.gen_range(0.5..3.0);
            let field = p_function(&rho, &grid, &FilterSpec::new(w)).unwrap();
            let oracle = FourierOracle::new(&rho, w, 80, 96);
            for (i, v) in field.values.iter().enumerate() {
                fourier_err = fourier_err.max((v - oracle.eval(grid.point(i)).re).abs());
            }
        }
    }
    let pass = vacuum_err <= 1e-8 && displacement_err <= 1e-6 && fourier_err <= 1e-6;
    report(
        "quasiprobability-exactness",
        pass,
        format!(
            "vacuum peak {vacuum_err:.1e} (<= 1e-8), displacement covariance {displacement_err:.1e} (<= 1e-6), \
             Fourier oracle N <= 6 {fourier_err:.1e} (<= 1e-6)"
        ),
    );
    assert!(pass);
}

#[test]
fn nonclassicality_emergence() {
    let config = preset("fig4").unwrap();
    let policy = config.truncation();
    let cache = tempfile::tempdir().unwrap();
    let started = Instant::now();
    let mut stats = Vec::new();
    for &t in &config.snapshots {
        let rho = rho_vib(t, config.level, config.alpha0(), config.beta0(), &config.params, &policy).unwrap();
        let (table, _) =
            PElementTable::load_or_build(cache.path(), rho.dim() - 1, &config.filter, &config.grid).unwrap();
        let field = table.apply(&rho.matrix).unwrap();
        stats.push((t, field.min(), field.max(), field.certified_error));
    }
    let elapsed = started.elapsed();
    let negative = |(_, min, _, cert): (f64, f64, f64, f64)| min < 0.0 && min.abs() > 10.0 * cert;
    let (_, min4, max4, _) = stats[0];
    let pass = negative(stats[1]) && negative(stats[2]) && min4 > -0.02 * max4 && elapsed < Duration::from_secs(600);
    let detail = stats
        .iter()
        .map(|(t, min, max, cert)| format!("t={t}: min/max = {:.4}, min = {min:.3e}, cert = {cert:.1e}", min / max))
        .collect::<Vec<_>>()
        .join("; ");
    report(
        "fig4-nonclassicality",
        pass,
        format!("{detail}; need t=13,50 negative beyond 10x cert and t=4 min/max > -0.02; {elapsed:.1?}"),
    );
    assert!(pass);
}
