mod common;

use rand::{Rng as _, SeedableRng};
use transferability::harness::welch_t_test;
use transferability::regression::{IdwModel, KrigingModel, Regressor, Sample};
use transferability::seed::Rng;

#[test]
fn welch_reference_example() {
    let w = welch_t_test(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
    assert!((w.t + 1.0).abs() < 1e-12);
    assert!((w.df - 8.0).abs() < 1e-12);
    assert!((w.p - 0.3466).abs() < 1e-3);
    assert!((w.p - common::t_two_sided_p(-1.0, 8.0)).abs() < 1e-6);
}

#[test]
fn welch_matches_quadrature_on_random_samples() {
    let mut rng = Rng::seed_from_u64(5);
    for _ in 0..200 {
        let na = rng.random_range(2..15);
        let nb = rng.random_range(2..15);
        let shift = rng.random_range(-3.0..3.0);
        let a: Vec<f64> = (0..na).map(|_| rng.random::<f64>() * 4.0).collect();
        let b: Vec<f64> = (0..nb).map(|_| rng.random::<f64>() * 2.0 + shift).collect();
        let w = welch_t_test(&a, &b).unwrap();
        let (t, df) = common::welch_by_hand(&a, &b);
        assert!((w.t - t).abs() < 1e-9 * t.abs().max(1.0));
        assert!((w.df - df).abs() < 1e-9 * df);
        if df >= 1.0 {
            assert!(
                (w.p - common::t_two_sided_p(t, df)).abs() < 1e-4,
                "t={t} df={df}"
            );
        }
        let swapped = welch_t_test(&b, &a).unwrap();
        assert_eq!(swapped.t, -w.t);
        assert_eq!(swapped.p, w.p);
    }
}

#[test]
fn quadrature_oracle_agrees_with_printed_t_tables() {
    // Two-sided 5% critical values.
    for (df, crit) in [(1.0, 12.706), (5.0, 2.571), (10.0, 2.228), (30.0, 2.042)] {
        assert!((common::t_two_sided_p(crit, df) - 0.05).abs() < 1e-4);
    }
}

fn random_samples(rng: &mut Rng, n: usize, dim: usize) -> Vec<Sample> {
    (0..n)
        .map(|_| {
            Sample::new(
                (0..dim).map(|_| rng.random::<f64>()).collect(),
                rng.random_range(-5.0..5.0),
            )
        })
        .collect()
}

#[test]
fn idw_hand_example_and_exact_interpolation() {
    let model = IdwModel::with_default_power(vec![
        Sample::new(vec![0.0, 0.0], 0.0),
        Sample::new(vec![2.0, 0.0], 1.0),
    ])
    .unwrap();
    let q = [0.25, 0.9375f64.sqrt()];
    assert!((model.predict(&q).unwrap() - 0.2).abs() < 1e-12);

    let mut rng = Rng::seed_from_u64(8);
    for _ in 0..50 {
        let n = rng.random_range(1..20);
        let samples = random_samples(&mut rng, n, 3);
        let model = IdwModel::with_default_power(samples.clone()).unwrap();
        for s in &samples {
            assert_eq!(model.predict(&s.input).unwrap(), s.output);
        }
    }
}

#[test]
fn kriging_without_nugget_interpolates() {
    let mut rng = Rng::seed_from_u64(9);
    for _ in 0..50 {
        let n = rng.random_range(1..12);
        let samples = random_samples(&mut rng, n, 2);
        let model = KrigingModel::fit(&samples, 1.0, 0.0).unwrap();
        for s in &samples {
            let (m, v) = model.predict_with_variance(&s.input).unwrap();
            assert!((m - s.output).abs() < 1e-8);
            assert!(v < 1e-6);
        }
    }
}
