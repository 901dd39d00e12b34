use proptest::prelude::*;

use seriation::estimators::{
    averaging_fit, estimation_losses, exhaustive_ls, oracle_fit, rank_score, rank_sum,
    EstimatorConfig, FitResult,
};
use seriation::experiment::{run_experiment, ExperimentConfig, Figure, Grid, GridRule, NoiseConfig};
use seriation::matrix::{frobenius_sq_dist, permute_rows, Matrix, Permutation};
use seriation::metrics::{count_levels, lemma1_check, r_statistic, variation};
use seriation::rng::RngSeed;
use seriation::shape::{antitonic_fit, fit_vector, isotonic_fit, unimodal_fit, ShapeSpec};
use seriation::synth::{gen_truth, Family, GeneratorSpec, NoiseKind};
use seriation::Method;

const TOL: f64 = 1e-9;

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn matrix(n: usize, m: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-10.0f64..10.0, n * m).prop_map(move |d| Matrix::from_vec(n, m, d).unwrap())
}

/// Column-increasing matrix with frequent ties.
fn monotone(n: usize, m: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop_oneof![-3i32..3, Just(0)], n * m).prop_map(move |d| {
        let mut a = Matrix::from_vec(n, m, d.into_iter().map(f64::from).collect()).unwrap();
        for j in 0..m {
            let mut col = a.column_vec(j);
            col.sort_by(f64::total_cmp);
            a = Matrix::from_fn(n, m, |i, k| if k == j { col[i] } else { a.get(i, k) });
        }
        a
    })
}

fn sq_norm(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

fn vector() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 1..15)
}

fn shape() -> impl Strategy<Value = ShapeSpec> {
    prop_oneof![Just(ShapeSpec::Monotone), Just(ShapeSpec::Unimodal)]
}

proptest! {
    #[test]
    fn group_laws(n in 1usize..10, seed in any::<u64>()) {
        let mut rng = RngSeed(seed).rng();
        let [p, q, r] = [0, 1, 2].map(|_| seriation::synth::random_permutation(n, &mut rng));
        let left = p.compose(&q).unwrap().compose(&r).unwrap();
        let right = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert!(p.inverse().compose(&p).unwrap().is_identity());
    }

    #[test]
    fn composition_is_action(seed in any::<u64>(), a in matrix(7, 3)) {
        let mut rng = RngSeed(seed).rng();
        let p = seriation::synth::random_permutation(7, &mut rng);
        let q = seriation::synth::random_permutation(7, &mut rng);
        let lhs = permute_rows(&p.compose(&q).unwrap(), &a).unwrap();
        let rhs = permute_rows(&p, &permute_rows(&q, &a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(permute_rows(&Permutation::identity(7), &a).unwrap(), a);
    }

    #[test]
    fn isometry_is_exact(p in perm(6), a in matrix(6, 4), b in matrix(6, 4)) {
        let d = frobenius_sq_dist(&a, &b).unwrap();
        let pd = frobenius_sq_dist(&permute_rows(&p, &a).unwrap(), &permute_rows(&p, &b).unwrap()).unwrap();
        prop_assert_eq!(d, pd);
        prop_assert_eq!(d, frobenius_sq_dist(&b, &a).unwrap());
    }

    #[test]
    fn isotonic_is_idempotent(y in vector()) {
        let x = isotonic_fit(&y).unwrap().fitted;
        let again = isotonic_fit(&x).unwrap();
        prop_assert_eq!(&again.fitted, &x);
        prop_assert_eq!(again.sse, 0.0);
    }

    #[test]
    fn projections_are_idempotent(y in vector(), s in shape()) {
        let x = fit_vector(&y, s).unwrap().fitted;
        let again = fit_vector(&x, s).unwrap();
        prop_assert!(sq_norm(&again.fitted, &x) < TOL);
    }

    #[test]
    fn projections_are_nonexpansive(y in vector(), seed in any::<u64>()) {
        let mut rng = RngSeed(seed).rng();
        let z: Vec<f64> = y.iter().map(|v| v + rand::Rng::random_range(&mut rng, -2.0..2.0)).collect();
        for s in [ShapeSpec::Monotone, ShapeSpec::FixedMode(1.max(y.len() / 2))] {
            let (px, pz) = (fit_vector(&y, s).unwrap().fitted, fit_vector(&z, s).unwrap().fitted);
            prop_assert!(sq_norm(&px, &pz) <= sq_norm(&y, &z) + TOL);
        }
    }

    #[test]
    fn isotonic_pythagoras(y in vector(), c in vector()) {
        let n = y.len().min(c.len());
        let y = &y[..n];
        let mut c = c[..n].to_vec();
        c.sort_by(f64::total_cmp);
        let x = isotonic_fit(y).unwrap().fitted;
        prop_assert!(sq_norm(y, &c) + TOL >= sq_norm(y, &x) + sq_norm(&x, &c));
    }

    #[test]
    fn projections_commute_with_shifts_and_scaling(y in vector(), t in -5.0f64..5.0, s in 0.1f64..10.0, sh in shape()) {
        let x = fit_vector(&y, sh).unwrap().fitted;
        let shifted: Vec<f64> = y.iter().map(|v| v + t).collect();
        let xs = fit_vector(&shifted, sh).unwrap().fitted;
        prop_assert!(x.iter().zip(&xs).all(|(a, b)| (a + t - b).abs() < 1e-9));
        let scaled: Vec<f64> = y.iter().map(|v| v * s).collect();
        let xk = fit_vector(&scaled, sh).unwrap().fitted;
        prop_assert!(x.iter().zip(&xk).all(|(a, b)| (a * s - b).abs() < 1e-8));
    }

    #[test]
    fn antitonic_mirrors_isotonic(y in vector()) {
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        let a = antitonic_fit(&y).unwrap().fitted;
        let i = isotonic_fit(&neg).unwrap().fitted;
        prop_assert!(a.iter().zip(&i).all(|(x, z)| (x + z).abs() < 1e-12));
    }

    #[test]
    fn unimodal_beats_isotonic_and_antitonic(y in vector()) {
        let u = unimodal_fit(&y).unwrap();
        let bound = isotonic_fit(&y).unwrap().sse.min(antitonic_fit(&y).unwrap().sse);
        prop_assert!(u.sse <= bound + 1e-12 * (1.0 + bound));
        prop_assert!(ShapeSpec::Unimodal.contains(&u.fitted, TOL));
    }

    #[test]
    fn rearrangement_inequalities(
        (truth, est, p, q) in (1usize..9, 1usize..5).prop_flat_map(|(n, m)| (monotone(n, m), monotone(n, m), perm(n), perm(n)))
    ) {
        prop_assert!(lemma1_check(&truth, &est, &p, &q).unwrap().ok);
    }

    #[test]
    fn level_count_ignores_row_order((a, p) in (1usize..8, 1usize..5).prop_flat_map(|(n, m)| (matrix(n, m), perm(n)))) {
        prop_assert_eq!(count_levels(&a), count_levels(&permute_rows(&p, &a).unwrap()));
        prop_assert_eq!(variation(&a), variation(&permute_rows(&p, &a).unwrap()));
    }

    #[test]
    fn r_statistic_bounds(a in (2usize..8, 1usize..6).prop_flat_map(|(n, m)| monotone(n, m))) {
        let r = r_statistic(&a).unwrap().value;
        prop_assert!(r >= 1.0 - TOL && r <= (a.n_cols() as f64).sqrt() + TOL);
    }

    #[test]
    fn exhaustive_dominates_rank_score(y in matrix(4, 2)) {
        let best = exhaustive_ls(&y, ShapeSpec::Monotone, 8).unwrap();
        prop_assert!(best.sse <= rank_score(&y, &EstimatorConfig::default()).unwrap().sse);
        prop_assert!(best.sse <= rank_sum(&y).unwrap().sse);
    }

    #[test]
    fn fits_are_consistent(
        (y, p) in (1usize..8, 1usize..5).prop_flat_map(|(n, m)| (matrix(n, m), perm(n)))
    ) {
        let cfg = EstimatorConfig::default();
        let fits: Vec<FitResult> = vec![
            rank_score(&y, &cfg).unwrap(),
            rank_sum(&y).unwrap(),
            oracle_fit(&y, &p, ShapeSpec::Monotone).unwrap(),
            averaging_fit(&y).unwrap(),
        ];
        for fit in &fits {
            prop_assert!(fit.a_hat.is_column_monotone(TOL));
            prop_assert_eq!(&fit.m_hat, &permute_rows(&fit.p_hat, &fit.a_hat).unwrap());
            prop_assert_eq!(fit.sse, frobenius_sq_dist(&y, &fit.m_hat).unwrap());
        }
    }

    #[test]
    fn loss_decomposition(
        (truth, p, z) in (1usize..8, 1usize..5).prop_flat_map(|(n, m)| (monotone(n, m), perm(n), matrix(n, m)))
    ) {
        let y = permute_rows(&p, &truth).unwrap().add(&z).unwrap();
        for fit in [rank_score(&y, &EstimatorConfig::default()).unwrap(), rank_sum(&y).unwrap()] {
            let l = estimation_losses(&fit, &p, &truth).unwrap();
            prop_assert!(l.matrix_only <= l.total + TOL);
            prop_assert!(l.perm_only <= 4.0 * l.total + TOL);
        }
    }

    #[test]
    fn noiseless_oracle_is_exact((truth, p) in (1usize..8, 1usize..5).prop_flat_map(|(n, m)| (monotone(n, m), perm(n)))) {
        let y = permute_rows(&p, &truth).unwrap();
        let fit = oracle_fit(&y, &p, ShapeSpec::Monotone).unwrap();
        prop_assert_eq!(estimation_losses(&fit, &p, &truth).unwrap().total, 0.0);
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>(), n in 1usize..12, m in 1usize..6) {
        for family in [Family::RandomVBounded, Family::RandomKBlocks { blocks: 1.max(n / 2) }] {
            let spec = GeneratorSpec { family, n, m, seed: RngSeed(seed) };
            let a = gen_truth(&spec).unwrap();
            prop_assert_eq!(&a, &gen_truth(&spec).unwrap());
            prop_assert!(a.is_column_monotone(0.0));
        }
    }
}

#[test]
fn oracle_loss_decreases_with_n() {
    let cfg = ExperimentConfig {
        grid: Grid::Rule(GridRule::Linear),
        n_points: 4,
        n_min: 16,
        n_max: 256,
        generator: Family::RandomVBounded,
        noise: NoiseConfig {
            kind: NoiseKind::Gaussian,
            sigma: 1.0,
        },
        methods: vec![Method::Oracle],
        ..Figure::OneLeft.config()
    };
    let records = run_experiment(&cfg).unwrap();
    assert!(records.iter().all(|r| r.loss_total.is_finite() && r.loss_total > 0.0));
    assert!(records.windows(2).all(|w| w[1].loss_total < w[0].loss_total));
}

#[test]
fn experiment_is_deterministic() {
    let cfg = ExperimentConfig {
        grid: Grid::Pairs(vec![(3, 2), (5, 2), (6, 3)]),
        replications: 3,
        generator: Family::Triangular,
        noise: NoiseConfig {
            kind: NoiseKind::Rademacher,
            sigma: 0.5,
        },
        methods: Method::ALL.to_vec(),
        ..Figure::OneLeft.config()
    };
    let a = run_experiment(&cfg).unwrap();
    assert_eq!(a, run_experiment(&cfg).unwrap());
    let mut other = cfg.clone();
    other.seed = 1;
    assert_ne!(a, run_experiment(&other).unwrap());
}
