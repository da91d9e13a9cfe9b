use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use qnlse::integrators::{fit_order, GridSpec};
use qnlse::qmath::{c, ComplexScalar};
use qnlse::solutions::{
    amplitude_wave, classical_limit_study, classical_plane_wave, compare_spatial,
    max_spatial_difference, product_solution, q_plane_wave, q_plane_wave_hypergeometric,
    separated_f, separated_g, FreeParticleSpec, LimitFamily, SolutionKind,
};

const QS: [f64; 5] = [0.5, 0.9, 1.1, 1.5, 2.0];

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 256,
        rng_seed: RngSeed::Fixed(42),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// `(1 + i a)^s`; the base has real part 1, so its principal logarithm never meets the cut.
fn unit_real_power(a: f64, s: f64) -> ComplexScalar {
    (c(1.0, a).ln() * s).exp()
}

fn points_21x5() -> Vec<(f64, f64)> {
    let mut v = Vec::new();
    for k in 0..5 {
        for i in 0..21 {
            v.push((-5.0 + 0.5 * i as f64, 0.25 * k as f64));
        }
    }
    v
}

fn test_grid() -> GridSpec {
    GridSpec::new(-5.0, 5.0, 101, 0.1, 10).unwrap()
}

fn q_away_from_one() -> impl Strategy<Value = f64> {
    prop_oneof![0.3..0.95f64, 1.05..2.5f64]
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn q_plane_wave_matches_direct_formula(
        q in q_away_from_one(),
        p in 0.2..2.0f64,
        m in 0.2..2.0f64,
        x in -5.0..5.0f64,
        t in 0.0..1.0f64,
    ) {
        let spec = FreeParticleSpec::new(q, p, m, 1.0).unwrap();
        let w = p * x - p * p / (2.0 * m) * t;
        let expected = unit_real_power((1.0 - q) * w, 1.0 / (1.0 - q));
        let got = q_plane_wave(&spec, x, t).unwrap();
        prop_assert!((got - expected).norm() <= 1e-12 * expected.norm().max(1.0));
    }

    #[test]
    fn separated_factors_match_direct_formulas(
        // (2 - q)(3 - q) > 0 keeps the NRT spatial factor real-parameterised
        q in prop_oneof![0.3..0.95f64, 1.05..1.95f64],
        x in -5.0..5.0f64,
        t in 0.0..1.0f64,
    ) {
        let spec = FreeParticleSpec::default().with_q(q);
        let (p, e) = (spec.p, spec.energy());
        for (kind, d, big_d) in [
            (SolutionKind::NewEquation, q, (2.0 * (q + 1.0)).sqrt()),
            (SolutionKind::Nrt, 2.0 - q, (2.0 * (2.0 - q) * (3.0 - q)).sqrt()),
        ] {
            let f = unit_real_power((1.0 - q) / d * e * t, 1.0 / (q - 1.0));
            let g = unit_real_power((1.0 - q) / big_d * p * x, 2.0 / (1.0 - q));
            prop_assert!((separated_f(kind, &spec, t).unwrap() - f).norm() <= 1e-12 * f.norm().max(1.0));
            prop_assert!((separated_g(kind, &spec, x).unwrap() - g).norm() <= 1e-12 * g.norm().max(1.0));
            let fg = product_solution(kind, &spec, x, t).unwrap();
            prop_assert!((fg - f * g).norm() <= 1e-12 * (f * g).norm().max(1.0));
        }
    }

    #[test]
    fn every_solution_is_one_at_the_origin(
        q in 0.3..2.5f64,
        p in 0.1..3.0f64,
        m in 0.1..3.0f64,
        hbar in 0.1..3.0f64,
        gamma in 0.5..4.0f64,
    ) {
        let spec = FreeParticleSpec::new(q, p, m, hbar).unwrap();
        let one = c(1.0, 0.0);
        prop_assert_eq!(classical_plane_wave(&spec, 0.0, 0.0).unwrap(), one);
        prop_assert_eq!(q_plane_wave(&spec, 0.0, 0.0).unwrap(), one);
        prop_assert_eq!(q_plane_wave_hypergeometric(&spec, gamma, 0.0, 0.0).unwrap(), one);
        prop_assert_eq!(amplitude_wave(&spec, one, 0.0, 0.0).unwrap(), one);
        for kind in SolutionKind::ALL {
            if kind.check_time_q(q).is_ok() && kind.check_space_q(q).is_ok() {
                prop_assert_eq!(separated_f(kind, &spec, 0.0).unwrap(), one);
                prop_assert_eq!(separated_g(kind, &spec, 0.0).unwrap(), one);
                prop_assert_eq!(product_solution(kind, &spec, 0.0, 0.0).unwrap(), one);
            }
        }
    }
}

#[test]
fn hypergeometric_path_is_independent_of_gamma() {
    for q in QS {
        let spec = FreeParticleSpec::default().with_q(q);
        for (x, t) in points_21x5() {
            let reference = q_plane_wave_hypergeometric(&spec, 0.5, x, t).unwrap();
            for gamma in [1.0, 2.7] {
                let v = q_plane_wave_hypergeometric(&spec, gamma, x, t).unwrap();
                assert!(
                    (v - reference).norm() <= 1e-10,
                    "q = {q}, gamma = {gamma}, ({x}, {t})"
                );
            }
            let direct = q_plane_wave(&spec, x, t).unwrap();
            assert!((direct - reference).norm() <= 1e-10, "q = {q}, ({x}, {t})");
        }
    }
}

#[test]
fn product_families_reach_the_plane_wave_linearly() {
    for kind in SolutionKind::ALL {
        let r = classical_limit_study(
            LimitFamily::Product(kind),
            &FreeParticleSpec::default(),
            &[1e-1, 1e-2, 1e-3],
            &test_grid(),
        )
        .unwrap();
        assert!(r.monotone);
        assert!(r.observed_order >= 0.9, "{kind:?}: {r:?}");
    }
}

#[test]
fn q_plane_wave_reaches_the_plane_wave_linearly_near_q_one() {
    // the three-decade fit starting at q - 1 = 0.1 is checked by the acceptance suite
    let r = classical_limit_study(
        LimitFamily::QPlaneWave,
        &FreeParticleSpec::default(),
        &[1e-2, 1e-3, 1e-4],
        &test_grid(),
    )
    .unwrap();
    assert!(r.monotone);
    assert!(r.observed_order >= 0.9, "{r:?}");
}

#[test]
fn spatial_factors_differ_away_from_q_one() {
    let spec = FreeParticleSpec::default();
    let worst = compare_spatial(&spec, test_grid().xs())
        .unwrap()
        .iter()
        .map(|p| p.difference())
        .fold(0.0, f64::max);
    assert!(worst > 1e-3);

    let deltas = [1e-2, 1e-3, 1e-4];
    let diffs: Vec<f64> = deltas
        .iter()
        .map(|d| max_spatial_difference(&spec.with_q(1.0 + d), test_grid().xs()).unwrap())
        .collect();
    assert!(diffs.windows(2).all(|w| w[1] < w[0]));
    assert!(fit_order(&deltas, &diffs).unwrap() >= 0.9);
}
