//! Complexity functionals of a ground-truth matrix and loss inequalities.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};
use crate::matrix::{frobenius_sq_dist, permute_rows, Matrix, Permutation, EPS};

/// Number of distinct values per column (`k_j`) and their total `K`.
///
/// Values are compared exactly; see [`count_levels_with_tolerance`] for
/// noisy inputs.
pub fn count_levels(a: &Matrix) -> (usize, Vec<usize>) {
    count_levels_with_tolerance(a, 0.0)
}

/// Like [`count_levels`], but sorted neighbours closer than `tol` count as the
/// same level.
pub fn count_levels_with_tolerance(a: &Matrix, tol: f64) -> (usize, Vec<usize>) {
    let per_column: Vec<usize> = (0..a.n_cols())
        .map(|j| {
            let mut col = a.column_vec(j);
            col.sort_unstable_by(f64::total_cmp);
            1 + col.windows(2).filter(|w| w[1] - w[0] > tol).count()
        })
        .collect();
    (per_column.iter().sum(), per_column)
}

/// Per-column variation `max − min` and the aggregate
/// `V = ((1/m) Σ_j v_j^{2/3})^{3/2}`.
pub fn variation(a: &Matrix) -> (f64, Vec<f64>) {
    let per_column: Vec<f64> = (0..a.n_cols())
        .map(|j| {
            let (lo, hi) = a
                .column(j)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                });
            hi - lo
        })
        .collect();
    let m = per_column.len() as f64;
    let mean = per_column.iter().map(|v| v.cbrt() * v.cbrt()).sum::<f64>() / m;
    (mean.powf(1.5), per_column)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RStatistic {
    pub value: f64,
    /// All rows identical: no pair contributes, and `value` is reported as
    /// the floor 1.
    pub degenerate: bool,
}

/// Sparsity/density score of a row difference `u ≠ 0`:
/// `min(‖u‖₂²/‖u‖∞², m‖u‖₂²/‖u‖₁²)`, which lies in `[1, √m]`.
pub fn pair_score(u: &[f64]) -> f64 {
    let m = u.len() as f64;
    let (mut l1, mut l2, mut linf) = (0.0f64, 0.0f64, 0.0f64);
    for &x in u {
        let ax = x.abs();
        l1 += ax;
        l2 += x * x;
        linf = linf.max(ax);
    }
    (l2 / (linf * linf)).min(m * l2 / (l1 * l1))
}

/// `R(A)` for a matrix with increasing columns: the average of the `n`
/// largest pair scores over ordered pairs of non-identical rows.
///
/// Scores are symmetric in the pair, so each unordered pair enters twice.
/// Fewer than `n` contributing pairs only happens when every row is
/// identical, which is flagged as degenerate.
pub fn r_statistic(a: &Matrix) -> Result<RStatistic> {
    a.ensure_column_monotone(EPS)?;
    let n = a.n_rows();
    let mut scores = Vec::with_capacity(n * (n - 1));
    let mut u = vec![0.0; a.n_cols()];
    for i in 0..n {
        for k in i + 1..n {
            let (ri, rk) = (a.row(i), a.row(k));
            if ri == rk {
                continue;
            }
            for ((d, x), y) in u.iter_mut().zip(ri).zip(rk) {
                *d = x - y;
            }
            let s = pair_score(&u);
            scores.push(s);
            scores.push(s);
        }
    }
    if scores.is_empty() {
        return Ok(RStatistic {
            value: 1.0,
            degenerate: true,
        });
    }
    let take = n.min(scores.len());
    if take < scores.len() {
        scores.select_nth_unstable_by(take - 1, |x, y| y.total_cmp(x));
    }
    let mut top = scores[..take].to_vec();
    top.sort_unstable_by(f64::total_cmp);
    Ok(RStatistic {
        value: top.iter().sum::<f64>() / n as f64,
        degenerate: false,
    })
}

/// Scaling applied to a row gap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GapScale {
    Raw,
    /// Divide by the noise level σ.
    NoiseUnits(f64),
}

/// `Δ(lo, hi) = max_j (hi_j − lo_j) ∨ (1/√m) Σ_j (hi_j − lo_j)`.
///
/// Single pass with four independent accumulators.
pub fn row_gap(lo: &[f64], hi: &[f64]) -> f64 {
    debug_assert_eq!(lo.len(), hi.len());
    let m = lo.len();
    let mut mx = [f64::NEG_INFINITY; 4];
    let mut sm = [0.0f64; 4];
    let (lo4, lo_rest) = lo.split_at(m - m % 4);
    let (hi4, hi_rest) = hi.split_at(m - m % 4);
    for (a, b) in lo4.chunks_exact(4).zip(hi4.chunks_exact(4)) {
        for k in 0..4 {
            let d = b[k] - a[k];
            mx[k] = if d > mx[k] { d } else { mx[k] };
            sm[k] += d;
        }
    }
    let mut max = mx[0].max(mx[1]).max(mx[2].max(mx[3]));
    let mut sum = (sm[0] + sm[1]) + (sm[2] + sm[3]);
    for (a, b) in lo_rest.iter().zip(hi_rest) {
        let d = b - a;
        max = max.max(d);
        sum += d;
    }
    max.max(sum / (m as f64).sqrt())
}

/// Gap `Δ_A(i, i2)` between rows `i` and `i2` of `a` (0-based).
pub fn gap(a: &Matrix, i: usize, i2: usize, scale: GapScale) -> Result<f64> {
    for idx in [i, i2] {
        if idx >= a.n_rows() {
            return Err(SeriationError::RowOutOfRange {
                index: idx,
                n_rows: a.n_rows(),
            });
        }
    }
    let raw = row_gap(a.row(i), a.row(i2));
    Ok(match scale {
        GapScale::Raw => raw,
        GapScale::NoiseUnits(sigma) => raw / sigma,
    })
}

/// Smallest gap between consecutive rows of a matrix with increasing
/// columns; for such matrices this is the smallest gap over all ordered
/// pairs `i < i2`.
pub fn min_consecutive_gap(a: &Matrix) -> f64 {
    (0..a.n_rows().saturating_sub(1))
        .map(|i| row_gap(a.row(i), a.row(i + 1)))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma1Check {
    /// `‖Ã − A*‖²`
    pub lhs_matrix: f64,
    /// `‖Π̃A* − Π*A*‖²`
    pub lhs_perm: f64,
    /// `‖Π̃Ã − Π*A*‖²`
    pub rhs: f64,
    pub ok: bool,
}

/// Checks the rearrangement inequalities for increasing-column matrices:
/// `‖Ã − A*‖² ≤ ‖Π̃Ã − Π*A*‖²` and `‖Π̃A* − Π*A*‖² ≤ 4‖Π̃Ã − Π*A*‖²`.
pub fn lemma1_check(
    truth: &Matrix,
    estimate: &Matrix,
    truth_perm: &Permutation,
    estimate_perm: &Permutation,
) -> Result<Lemma1Check> {
    truth.check_same_shape(estimate)?;
    truth.ensure_column_monotone(EPS)?;
    estimate.ensure_column_monotone(EPS)?;
    let target = permute_rows(truth_perm, truth)?;
    let lhs_matrix = frobenius_sq_dist(estimate, truth)?;
    let lhs_perm = frobenius_sq_dist(&permute_rows(estimate_perm, truth)?, &target)?;
    let rhs = frobenius_sq_dist(&permute_rows(estimate_perm, estimate)?, &target)?;
    Ok(Lemma1Check {
        lhs_matrix,
        lhs_perm,
        rhs,
        ok: lhs_matrix <= rhs + EPS && lhs_perm <= 4.0 * rhs + EPS,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "V")]
    pub v: f64,
    /// Present only for matrices with increasing columns.
    #[serde(rename = "R")]
    pub r: Option<f64>,
    pub per_column_k: Vec<usize>,
    pub per_column_v: Vec<f64>,
    /// Set when `R` is reported for a matrix whose rows are all identical.
    pub r_degenerate: bool,
}

pub fn complexity_report(a: &Matrix, level_tol: f64) -> ComplexityReport {
    let (k, per_column_k) = count_levels_with_tolerance(a, level_tol);
    let (v, per_column_v) = variation(a);
    let r = r_statistic(a).ok();
    ComplexityReport {
        k,
        v,
        r: r.map(|r| r.value),
        per_column_k,
        per_column_v,
        r_degenerate: r.is_some_and(|r| r.degenerate),
    }
}
