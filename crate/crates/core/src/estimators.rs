//! Estimators of the pair (permutation, shaped matrix) from an observation
//! `Y = Π*A* + Z`.
//!
//! Every estimator picks a permutation `p̂` and then sets `Â` to the
//! column-wise projection of `p̂⁻¹Y` onto the target cone, so that `p̂Â` is
//! the projection of `Y` onto `p̂S^m` (or `p̂U^m`). The one exception is
//! [`averaging_fit`], which replaces every column by its mean.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};
use crate::matrix::{frobenius_sq_dist, permute_rows, Matrix, Permutation};
use crate::metrics::row_gap;
use crate::shape::{project_columns, ShapeSpec};

/// Default cap on `n` for [`exhaustive_ls`].
pub const EXHAUSTIVE_MAX_ROWS: usize = 8;

/// RankScore threshold used in the reference experiments.
pub const DEFAULT_TAU: f64 = 6.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauSpec {
    Fixed(f64),
    /// `τ = 3σ √((C + 1) ln(nm))`
    Rule { c: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub shape: ShapeSpec,
    /// Noise level σ, assumed known.
    pub sigma: f64,
    pub tau: TauSpec,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            shape: ShapeSpec::Monotone,
            sigma: 1.0,
            tau: TauSpec::Fixed(DEFAULT_TAU),
        }
    }
}

impl EstimatorConfig {
    /// Resolved threshold for an `n × m` observation.
    pub fn tau(&self, n: usize, m: usize) -> Result<f64> {
        let tau = match self.tau {
            TauSpec::Fixed(t) => t,
            TauSpec::Rule { c } => {
                if c < 0.0 {
                    return Err(SeriationError::InvalidConfig(format!(
                        "tau rule constant must be non-negative, got {c}"
                    )));
                }
                3.0 * self.sigma * ((c + 1.0) * ((n * m) as f64).ln()).sqrt()
            }
        };
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(SeriationError::InvalidConfig(format!(
                "tau must be finite and non-negative, got {tau}"
            )));
        }
        Ok(tau)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub p_hat: Permutation,
    /// Estimate of `A*`, in the target cone.
    pub a_hat: Matrix,
    /// `p̂ Â`
    pub m_hat: Matrix,
    /// `‖Y − p̂Â‖²_F`
    pub sse: f64,
    /// RankScore scores, indexed by row of `Y`.
    pub scores: Option<Vec<usize>>,
}

impl FitResult {
    fn new(y: &Matrix, p_hat: Permutation, a_hat: Matrix) -> Result<Self> {
        let m_hat = permute_rows(&p_hat, &a_hat)?;
        let sse = frobenius_sq_dist(y, &m_hat)?;
        Ok(FitResult {
            p_hat,
            a_hat,
            m_hat,
            sse,
            scores: None,
        })
    }
}

/// Projection of `y` onto the cone `p S` for a fixed permutation `p`.
pub fn fit_with_permutation(y: &Matrix, p: Permutation, shape: ShapeSpec) -> Result<FitResult> {
    let unpermuted = permute_rows(&p.inverse(), y)?;
    let a_hat = project_columns(&unpermuted, shape)?;
    FitResult::new(y, p, a_hat)
}

/// Permutation that lists rows of `y` in increasing order of `key`, ties by
/// row index.
fn ordering_by<K: Copy>(n: usize, key: impl Fn(usize) -> K, cmp: impl Fn(K, K) -> std::cmp::Ordering) -> Permutation {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cmp(key(a), key(b)));
    // position k of the ordered matrix is filled by row order[k] of y
    Permutation::new(order).expect("sorted indices form a permutation")
}

/// RankScore scores `s_i = #{l : Δ_Y(l, i) ≥ 2τ}`.
pub fn rank_scores(y: &Matrix, tau: f64) -> Vec<usize> {
    let n = y.n_rows();
    let threshold = 2.0 * tau;
    (0..n)
        .map(|i| {
            let target = y.row(i);
            (0..n)
                .filter(|&l| row_gap(y.row(l), target) >= threshold)
                .count()
        })
        .collect()
}

/// RankScore: order rows by score (stable), then project onto the
/// reordered monotone cone. Only defined for increasing columns.
pub fn rank_score(y: &Matrix, cfg: &EstimatorConfig) -> Result<FitResult> {
    if cfg.shape != ShapeSpec::Monotone {
        return Err(SeriationError::Unsupported(format!(
            "RankScore is defined for increasing columns only (requested {:?})",
            cfg.shape
        )));
    }
    let tau = cfg.tau(y.n_rows(), y.n_cols())?;
    let scores = rank_scores(y, tau);
    let p = ordering_by(y.n_rows(), |i| scores[i], |a, b| a.cmp(&b));
    let mut fit = fit_with_permutation(y, p, ShapeSpec::Monotone)?;
    fit.scores = Some(scores);
    Ok(fit)
}

/// RankSum: order rows by row sum (stable), then project onto the reordered
/// monotone cone.
pub fn rank_sum(y: &Matrix) -> Result<FitResult> {
    let sums: Vec<f64> = (0..y.n_rows()).map(|i| y.row_sum(i)).collect();
    let p = ordering_by(y.n_rows(), |i| sums[i], |a: f64, b: f64| a.total_cmp(&b));
    fit_with_permutation(y, p, ShapeSpec::Monotone)
}

/// Exact least squares over all `n!` permutations.
///
/// Permutations are visited in lexicographic order and only a strictly
/// smaller SSE replaces the incumbent, so ties go to the lexicographically
/// smallest mapping. Refuses `n > cap`.
pub fn exhaustive_ls(y: &Matrix, shape: ShapeSpec, cap: usize) -> Result<FitResult> {
    let n = y.n_rows();
    if n > cap {
        return Err(SeriationError::TooManyRows { n, cap });
    }
    shape.validate(n)?;
    let mut best = fit_with_permutation(y, Permutation::identity(n), shape)?;
    let mut next = best.p_hat.next_lexicographic();
    while let Some(p) = next {
        next = p.next_lexicographic();
        let fit = fit_with_permutation(y, p, shape)?;
        if fit.sse < best.sse {
            best = fit;
        }
    }
    Ok(best)
}

/// Projection with the true permutation known.
pub fn oracle_fit(y: &Matrix, p_true: &Permutation, shape: ShapeSpec) -> Result<FitResult> {
    fit_with_permutation(y, p_true.clone(), shape)
}

/// Identity permutation and every row equal to the vector of column means.
pub fn averaging_fit(y: &Matrix) -> Result<FitResult> {
    let (n, m) = y.shape();
    let means: Vec<f64> = (0..m)
        .map(|j| y.column(j).sum::<f64>() / n as f64)
        .collect();
    let a_hat = Matrix::from_parts_unchecked(n, m, means.repeat(n));
    FitResult::new(y, Permutation::identity(n), a_hat)
}

/// Per-entry squared losses of a fit against the truth `(Π*, A*)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Losses {
    /// `‖p̂Â − Π*A*‖² / nm`
    pub total: f64,
    /// `‖p̂A* − Π*A*‖² / nm`
    pub perm_only: f64,
    /// `‖Â − A*‖² / nm`
    pub matrix_only: f64,
}

pub fn estimation_losses(fit: &FitResult, p_true: &Permutation, a_true: &Matrix) -> Result<Losses> {
    let scale = (a_true.n_rows() * a_true.n_cols()) as f64;
    let target = permute_rows(p_true, a_true)?;
    Ok(Losses {
        total: frobenius_sq_dist(&fit.m_hat, &target)? / scale,
        perm_only: frobenius_sq_dist(&permute_rows(&fit.p_hat, a_true)?, &target)? / scale,
        matrix_only: frobenius_sq_dist(&fit.a_hat, a_true)? / scale,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    RankScore,
    RankSum,
    Oracle,
    Average,
    Exhaustive,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::RankScore,
        Method::RankSum,
        Method::Oracle,
        Method::Average,
        Method::Exhaustive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::RankScore => "rankscore",
            Method::RankSum => "ranksum",
            Method::Oracle => "oracle",
            Method::Average => "average",
            Method::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = SeriationError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| SeriationError::InvalidConfig(format!("unknown method {s:?}")))
    }
}

/// Runs `method` on `y`. The oracle needs the true permutation.
pub fn run_method(
    method: Method,
    y: &Matrix,
    cfg: &EstimatorConfig,
    p_true: Option<&Permutation>,
    exhaustive_cap: usize,
) -> Result<FitResult> {
    match method {
        Method::RankScore => rank_score(y, cfg),
        Method::RankSum => rank_sum(y),
        Method::Exhaustive => exhaustive_ls(y, cfg.shape, exhaustive_cap),
        Method::Average => averaging_fit(y),
        Method::Oracle => {
            let p = p_true.ok_or_else(|| {
                SeriationError::InvalidConfig("the oracle needs the true permutation".into())
            })?;
            oracle_fit(y, p, cfg.shape)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(tau: f64) -> EstimatorConfig {
        EstimatorConfig {
            tau: TauSpec::Fixed(tau),
            ..EstimatorConfig::default()
        }
    }

    #[test]
    fn rank_score_noiseless_column() {
        let y = Matrix::from_rows(&[[0.0], [10.0], [20.0]]).unwrap();
        let fit = rank_score(&y, &cfg(1.0)).unwrap();
        assert_eq!(fit.scores, Some(vec![0, 1, 2]));
        assert!(fit.p_hat.is_identity());
        assert_eq!(fit.m_hat, y);
        assert_eq!(fit.sse, 0.0);
    }

    #[test]
    fn rank_score_recovers_shuffled_rows() {
        let y = Matrix::from_rows(&[[20.0], [0.0], [10.0]]).unwrap();
        let fit = rank_score(&y, &cfg(1.0)).unwrap();
        assert_eq!(fit.scores, Some(vec![2, 0, 1]));
        assert_eq!(fit.p_hat.mapping(), &[1, 2, 0]);
        assert_eq!(fit.a_hat, Matrix::from_rows(&[[0.0], [10.0], [20.0]]).unwrap());
        assert_eq!(fit.m_hat, y);
    }

    #[test]
    fn rank_score_identical_rows_keep_order() {
        let y = Matrix::from_rows(&[[3.0, 1.0], [3.0, 1.0], [3.0, 1.0]]).unwrap();
        let fit = rank_score(&y, &cfg(0.5)).unwrap();
        assert!(fit.p_hat.is_identity());
        assert_eq!(fit.a_hat, project_columns(&y, ShapeSpec::Monotone).unwrap());
    }

    #[test]
    fn rank_score_rejects_unimodal() {
        let y = Matrix::from_rows(&[[0.0], [1.0]]).unwrap();
        let c = EstimatorConfig {
            shape: ShapeSpec::Unimodal,
            ..cfg(1.0)
        };
        assert!(matches!(rank_score(&y, &c), Err(SeriationError::Unsupported(_))));
    }

    #[test]
    fn tau_rule() {
        let c = EstimatorConfig {
            sigma: 2.0,
            tau: TauSpec::Rule { c: 1.0 },
            ..EstimatorConfig::default()
        };
        let expected = 3.0 * 2.0 * (2.0 * (12.0f64).ln()).sqrt();
        assert!((c.tau(3, 4).unwrap() - expected).abs() < 1e-12);
        assert!(cfg(-1.0).tau(2, 2).is_err());
    }

    #[test]
    fn rank_sum_orders_and_ties() {
        let y = Matrix::from_rows(&[[1.0, 0.0], [0.0, 2.0], [3.0, 3.0]]).unwrap();
        assert!(rank_sum(&y).unwrap().p_hat.is_identity());
        let tied = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]]).unwrap();
        assert_eq!(rank_sum(&tied).unwrap().p_hat.mapping(), &[2, 0, 1]);
    }

    #[test]
    fn exhaustive_recovers_noiseless_truth() {
        let truth = Matrix::from_rows(&[[0.0, 1.0], [1.0, 1.5], [2.0, 4.0], [3.0, 4.5]]).unwrap();
        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let y = permute_rows(&p, &truth).unwrap();
        let fit = exhaustive_ls(&y, ShapeSpec::Monotone, EXHAUSTIVE_MAX_ROWS).unwrap();
        assert_eq!(fit.sse, 0.0);
        assert_eq!(fit.m_hat, y);
        assert_eq!(fit.p_hat, p);
    }

    #[test]
    fn exhaustive_single_row_and_cap() {
        let y = Matrix::from_rows(&[[1.0, -2.0]]).unwrap();
        let fit = exhaustive_ls(&y, ShapeSpec::Unimodal, 8).unwrap();
        assert_eq!(fit.m_hat, y);
        let big = Matrix::zeros(9, 1);
        assert!(matches!(
            exhaustive_ls(&big, ShapeSpec::Monotone, 8),
            Err(SeriationError::TooManyRows { n: 9, cap: 8 })
        ));
    }

    #[test]
    fn exhaustive_ties_go_lexicographic() {
        // all rows identical: every permutation has the same SSE
        let y = Matrix::from_fn(3, 2, |_, j| j as f64);
        assert!(exhaustive_ls(&y, ShapeSpec::Monotone, 8).unwrap().p_hat.is_identity());
    }

    #[test]
    fn averaging_examples() {
        let y = Matrix::from_rows(&[[0.0], [2.0]]).unwrap();
        let fit = averaging_fit(&y).unwrap();
        assert_eq!(fit.a_hat, Matrix::from_rows(&[[1.0], [1.0]]).unwrap());
        assert_eq!(fit.sse, 2.0);
        let constant = Matrix::from_fn(4, 3, |_, j| j as f64 * 0.5);
        assert_eq!(averaging_fit(&constant).unwrap().m_hat, constant);
    }

    #[test]
    fn oracle_noiseless_and_losses() {
        let truth = Matrix::from_rows(&[[0.0, 0.0], [1.0, 0.5], [2.0, 3.0]]).unwrap();
        let p = Permutation::new(vec![1, 2, 0]).unwrap();
        let y = permute_rows(&p, &truth).unwrap();
        let fit = oracle_fit(&y, &p, ShapeSpec::Monotone).unwrap();
        assert_eq!(fit.a_hat, truth);
        let l = estimation_losses(&fit, &p, &truth).unwrap();
        assert_eq!((l.total, l.perm_only, l.matrix_only), (0.0, 0.0, 0.0));
    }

    #[test]
    fn losses_with_true_permutation() {
        let truth = Matrix::from_rows(&[[0.0], [1.0], [2.0]]).unwrap();
        let p = Permutation::new(vec![2, 1, 0]).unwrap();
        let y = permute_rows(&p, &Matrix::from_rows(&[[0.5], [0.0], [2.5]]).unwrap()).unwrap();
        let fit = oracle_fit(&y, &p, ShapeSpec::Monotone).unwrap();
        let l = estimation_losses(&fit, &p, &truth).unwrap();
        assert_eq!(l.perm_only, 0.0);
        assert_eq!(l.matrix_only, l.total);
        assert!(l.total > 0.0);
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("bogus".parse::<Method>().is_err());
    }
}
