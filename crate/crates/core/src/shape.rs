//! Least-squares projections onto shape-constrained cones.
//!
//! * isotonic: `a_1 ≤ ⋯ ≤ a_n`
//! * antitonic: `a_1 ≥ ⋯ ≥ a_n`
//! * fixed mode `l` (1-based): increasing up to `a_l`, decreasing after it
//! * unimodal: the union of the fixed-mode cones over `l`
//!
//! All fits are exact. Pool-adjacent-violators decides the block structure;
//! block values are then recomputed as plain means of the inputs they cover
//! (summed in index order), so a block covering the whole vector reproduces
//! the sample mean bit for bit and an input already in the cone is returned
//! unchanged.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};
use crate::matrix::{sse_le, Matrix};

/// Target cone of a column-wise fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeSpec {
    Monotone,
    Unimodal,
    /// Mode position, 1-based: `1 ≤ l ≤ n`.
    FixedMode(usize),
}

impl ShapeSpec {
    pub fn validate(self, n: usize) -> Result<()> {
        match self {
            ShapeSpec::FixedMode(l) if l == 0 || l > n => {
                Err(SeriationError::ModeOutOfRange { mode: l, n })
            }
            _ => Ok(()),
        }
    }

    /// Whether `v` lies in the cone, with `slack` on every comparison.
    /// `Unimodal` accepts any `v` that is in some fixed-mode cone.
    pub fn contains(self, v: &[f64], slack: f64) -> bool {
        match self {
            ShapeSpec::Monotone => v.windows(2).all(|w| w[0] <= w[1] + slack),
            ShapeSpec::FixedMode(l) => in_fixed_mode(v, l, slack),
            ShapeSpec::Unimodal => {
                // increasing run, then decreasing run
                let mut i = 0;
                while i + 1 < v.len() && v[i] <= v[i + 1] + slack {
                    i += 1;
                }
                v[i..].windows(2).all(|w| w[0] + slack >= w[1])
            }
        }
    }
}

fn in_fixed_mode(v: &[f64], l: usize, slack: f64) -> bool {
    if l == 0 || l > v.len() {
        return false;
    }
    let peak = l - 1;
    v[..=peak].windows(2).all(|w| w[0] <= w[1] + slack)
        && v[peak..].windows(2).all(|w| w[0] + slack >= w[1])
}

/// Result of projecting a vector onto a cone.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFit {
    pub fitted: Vec<f64>,
    /// `‖fitted − y‖²`
    pub sse: f64,
    /// 1-based mode, set for fixed-mode and unimodal fits.
    pub mode: Option<usize>,
}

fn check_input(y: &[f64]) -> Result<()> {
    if y.is_empty() {
        return Err(SeriationError::EmptyInput);
    }
    if let Some(v) = y.iter().find(|v| !v.is_finite()) {
        return Err(SeriationError::InvalidMatrix(format!(
            "non-finite input value {v}"
        )));
    }
    Ok(())
}

fn sse(fitted: &[f64], y: &[f64]) -> f64 {
    fitted.iter().zip(y).map(|(f, v)| (f - v) * (f - v)).sum()
}

/// Writes the mean of `y[start..start + len]` into the same range of `out`
/// for consecutive blocks.
fn fill_blocks(y: &[f64], lens: impl IntoIterator<Item = usize>, out: &mut [f64]) {
    let mut start = 0;
    for len in lens {
        let block = &y[start..start + len];
        let mean = block.iter().sum::<f64>() / len as f64;
        out[start..start + len].fill(mean);
        start += len;
    }
    debug_assert_eq!(start, y.len());
}

#[derive(Clone, Copy, Debug)]
struct Block {
    mean: f64,
    len: usize,
}

impl Block {
    fn merge(self, other: Block) -> Block {
        let len = self.len + other.len;
        let w = other.len as f64 / len as f64;
        Block {
            mean: self.mean + (other.mean - self.mean) * w,
            len,
        }
    }
}

/// PAVA block stack for an increasing fit of `values` (in iteration order).
fn pava_stack(values: impl IntoIterator<Item = f64>) -> Vec<Block> {
    let mut stack: Vec<Block> = Vec::new();
    for v in values {
        let mut top = Block { mean: v, len: 1 };
        while let Some(prev) = stack.last() {
            if prev.mean > top.mean {
                top = stack.pop().unwrap().merge(top);
            } else {
                break;
            }
        }
        stack.push(top);
    }
    stack
}

fn isotonic_into(y: &[f64], out: &mut [f64]) {
    let stack = pava_stack(y.iter().copied());
    fill_blocks(y, stack.iter().map(|b| b.len), out);
}

/// Projection onto increasing vectors, by pool-adjacent-violators in O(n).
pub fn isotonic_fit(y: &[f64]) -> Result<VectorFit> {
    check_input(y)?;
    let mut fitted = vec![0.0; y.len()];
    isotonic_into(y, &mut fitted);
    Ok(VectorFit {
        sse: sse(&fitted, y),
        fitted,
        mode: None,
    })
}

/// Projection onto decreasing vectors; the isotonic fit of the reversed input,
/// reversed back.
pub fn antitonic_fit(y: &[f64]) -> Result<VectorFit> {
    let rev: Vec<f64> = y.iter().rev().copied().collect();
    let mut fit = isotonic_fit(&rev)?;
    fit.fitted.reverse();
    Ok(fit)
}

/// Exact projection onto the cone with mode `l` (1-based).
///
/// The cone is a tree order: two chains that meet at position `l`, which
/// must dominate both. Each chain is pooled with PAVA on its own, giving
/// increasing block values towards the peak. The peak then absorbs the
/// larger of the two chain tops while that top exceeds the peak's running
/// mean. Absorbed values come out in decreasing order, which is the
/// optimality condition for the pooled peak block.
pub fn fixed_mode_fit(y: &[f64], l: usize) -> Result<VectorFit> {
    check_input(y)?;
    let n = y.len();
    ShapeSpec::FixedMode(l).validate(n)?;
    let peak = l - 1;

    let mut left = pava_stack(y[..peak].iter().copied());
    let mut right = pava_stack(y[peak + 1..].iter().rev().copied());
    let mut root = Block {
        mean: y[peak],
        len: 1,
    };
    let (mut root_left, mut root_right) = (0, 0);
    loop {
        let lt = left.last().map(|b| b.mean).filter(|&m| m > root.mean);
        let rt = right.last().map(|b| b.mean).filter(|&m| m > root.mean);
        match (lt, rt) {
            (None, None) => break,
            (Some(a), Some(b)) if b > a => {
                let b = right.pop().unwrap();
                root_right += b.len;
                root = root.merge(b);
            }
            (Some(_), _) => {
                let b = left.pop().unwrap();
                root_left += b.len;
                root = root.merge(b);
            }
            (None, Some(_)) => {
                let b = right.pop().unwrap();
                root_right += b.len;
                root = root.merge(b);
            }
        }
    }
    debug_assert_eq!(root.len, root_left + root_right + 1);

    let lens = left
        .iter()
        .map(|b| b.len)
        .chain(std::iter::once(root.len))
        .chain(right.iter().rev().map(|b| b.len));
    let mut fitted = vec![0.0; n];
    fill_blocks(y, lens, &mut fitted);
    Ok(VectorFit {
        sse: sse(&fitted, y),
        fitted,
        mode: Some(l),
    })
}

/// Online PAVA that tracks the running SSE of the increasing fit.
///
/// Merging blocks `a` and `b` adds `w_a w_b / (w_a + w_b) · (mean_b − mean_a)²`
/// to the SSE, which avoids the cancellation of `Σy² − (Σy)²/w`.
#[derive(Default)]
struct OnlineIsotonic {
    stack: Vec<(Block, usize)>, // block and its start position
    sse: f64,
    pushed: usize,
}

impl OnlineIsotonic {
    fn push(&mut self, v: f64) {
        let mut top = (Block { mean: v, len: 1 }, self.pushed);
        self.pushed += 1;
        while let Some(&(prev, start)) = self.stack.last() {
            if prev.mean <= top.0.mean {
                break;
            }
            self.stack.pop();
            let (wa, wb) = (prev.len as f64, top.0.len as f64);
            let d = top.0.mean - prev.mean;
            self.sse += wa * wb / (wa + wb) * d * d;
            top = (prev.merge(top.0), start);
        }
        self.stack.push(top);
    }

    /// Mean and start of the last block.
    fn top(&self) -> Option<(f64, usize)> {
        self.stack.last().map(|(b, s)| (b.mean, *s))
    }
}

/// Least-squares unimodal fit in O(n).
///
/// A vector is unimodal iff it is increasing on `[0, k)` and decreasing on
/// `[k, n)` for some split `k`, so the optimum is the best split of an
/// isotonic prefix fit and an antitonic suffix fit. One forward sweep of
/// online PAVA gives every prefix SSE and one backward sweep every suffix
/// SSE. Among splits whose SSE ties the minimum (relative `1e-12`), the one
/// whose fit peaks earliest is kept, so `mode` is the smallest optimal `l`.
pub fn unimodal_fit(y: &[f64]) -> Result<VectorFit> {
    check_input(y)?;
    let n = y.len();

    let mut prefix_sse = vec![0.0; n + 1];
    let mut prefix_top = vec![(f64::NAN, 0usize); n + 1];
    let mut fwd = OnlineIsotonic::default();
    for (k, &v) in y.iter().enumerate() {
        fwd.push(v);
        prefix_sse[k + 1] = fwd.sse;
        prefix_top[k + 1] = fwd.top().unwrap();
    }

    let mut suffix_sse = vec![0.0; n + 1];
    let mut suffix_head = vec![f64::NAN; n + 1];
    let mut bwd = OnlineIsotonic::default();
    for k in (0..n).rev() {
        bwd.push(y[k]);
        suffix_sse[k] = bwd.sse;
        suffix_head[k] = bwd.top().unwrap().0;
    }

    let total: Vec<f64> = (0..=n).map(|k| prefix_sse[k] + suffix_sse[k]).collect();
    let best = total.iter().copied().fold(f64::INFINITY, f64::min);

    // 0-based position of the first maximum of the split-k fit
    let peak_of = |k: usize| -> usize {
        if k == 0 {
            0
        } else if k == n {
            prefix_top[n].1
        } else {
            let (pv, ps) = prefix_top[k];
            if pv >= suffix_head[k] {
                ps
            } else {
                k
            }
        }
    };
    let split = (0..=n)
        .filter(|&k| sse_le(total[k], best))
        .min_by_key(|&k| (peak_of(k), k))
        .expect("at least one split attains the minimum");

    let mut fitted = vec![0.0; n];
    isotonic_into(&y[..split], &mut fitted[..split]);
    if split < n {
        let rev: Vec<f64> = y[split..].iter().rev().copied().collect();
        let mut tail = vec![0.0; rev.len()];
        isotonic_into(&rev, &mut tail);
        for (dst, v) in fitted[split..].iter_mut().zip(tail.iter().rev()) {
            *dst = *v;
        }
    }
    let mode = first_argmax(&fitted) + 1;
    Ok(VectorFit {
        sse: sse(&fitted, y),
        fitted,
        mode: Some(mode),
    })
}

fn first_argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Projects a vector onto the cone named by `shape`.
pub fn fit_vector(y: &[f64], shape: ShapeSpec) -> Result<VectorFit> {
    match shape {
        ShapeSpec::Monotone => isotonic_fit(y),
        ShapeSpec::Unimodal => unimodal_fit(y),
        ShapeSpec::FixedMode(l) => fixed_mode_fit(y, l),
    }
}

/// Column-wise projection of a matrix.
#[derive(Clone, Debug)]
pub struct ColumnProjection {
    pub matrix: Matrix,
    /// Sum of the per-column SSEs.
    pub sse: f64,
    /// Per-column modes (1-based) for unimodal and fixed-mode fits.
    pub modes: Option<Vec<usize>>,
}

const COLUMN_BATCH: usize = 16;

/// Replaces every column of `y` by its projection onto `shape`.
pub fn project_columns(y: &Matrix, shape: ShapeSpec) -> Result<Matrix> {
    Ok(project_columns_detailed(y, shape)?.matrix)
}

pub fn project_columns_detailed(y: &Matrix, shape: ShapeSpec) -> Result<ColumnProjection> {
    let (n, m) = y.shape();
    shape.validate(n)?;
    let data = y.as_slice();
    let mut out = vec![0.0; n * m];
    let mut total = 0.0;
    let mut modes = match shape {
        ShapeSpec::Monotone => None,
        _ => Some(Vec::with_capacity(m)),
    };

    // Columns are gathered a batch at a time so each row is read contiguously.
    let mut bufs = vec![vec![0.0; n]; COLUMN_BATCH.min(m)];
    for j0 in (0..m).step_by(COLUMN_BATCH) {
        let width = COLUMN_BATCH.min(m - j0);
        for i in 0..n {
            let row = &data[i * m + j0..i * m + j0 + width];
            for (b, &v) in bufs.iter_mut().zip(row) {
                b[i] = v;
            }
        }
        for (dj, col) in bufs.iter().take(width).enumerate() {
            let fit = fit_vector(col, shape)?;
            total += fit.sse;
            if let (Some(modes), Some(mode)) = (modes.as_mut(), fit.mode) {
                modes.push(mode);
            }
            for (i, v) in fit.fitted.iter().enumerate() {
                out[i * m + j0 + dj] = *v;
            }
        }
    }
    Ok(ColumnProjection {
        matrix: Matrix::from_parts_unchecked(n, m, out),
        sse: total,
        modes,
    })
}

/// Isotonic regression by the max–min formula
/// `f_i = max_{s ≤ i} min_{t ≥ i} mean(y[s..=t])`, in O(n²) per entry.
/// Independent of PAVA; only used by the Dykstra oracle.
fn isotonic_max_min(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut prefix = vec![0.0; n + 1];
    for (i, v) in y.iter().enumerate() {
        prefix[i + 1] = prefix[i] + v;
    }
    let mean = |s: usize, t: usize| (prefix[t + 1] - prefix[s]) / (t + 1 - s) as f64;
    (0..n)
        .map(|i| {
            (0..=i)
                .map(|s| (i..n).map(|t| mean(s, t)).fold(f64::INFINITY, f64::min))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

/// Dykstra's alternating projections between the increasing chain
/// `{a_1 ≤ ⋯ ≤ a_l}` and the decreasing chain `{a_l ≥ ⋯ ≥ a_n}` (`l`
/// 1-based). Each chain projection uses the max–min formula, so the result
/// is an independent check on [`fixed_mode_fit`]; with `l = n` the second
/// chain is trivial and this is the isotonic projection.
///
/// Runs at most `iters` rounds and stops early once a full round leaves the
/// iterate and both correction terms bitwise unchanged.
pub fn dykstra_cone_projection(y: &[f64], l: usize, iters: usize) -> Result<Vec<f64>> {
    check_input(y)?;
    let n = y.len();
    ShapeSpec::FixedMode(l).validate(n)?;
    if iters == 0 {
        return Err(SeriationError::InvalidConfig(
            "Dykstra needs at least one iteration".into(),
        ));
    }
    let peak = l - 1;
    let project_inc = |v: &mut [f64]| {
        let fit = isotonic_max_min(&v[..=peak]);
        v[..=peak].copy_from_slice(&fit);
    };
    let project_dec = |v: &mut [f64]| {
        let neg: Vec<f64> = v[peak..].iter().map(|x| -x).collect();
        let fit = isotonic_max_min(&neg);
        for (dst, f) in v[peak..].iter_mut().zip(fit) {
            *dst = -f;
        }
    };

    let mut x = y.to_vec();
    let mut p = vec![0.0; n];
    let mut q = vec![0.0; n];
    for _ in 0..iters {
        let mut u: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a + b).collect();
        let before_u = u.clone();
        project_inc(&mut u);
        let new_p: Vec<f64> = before_u.iter().zip(&u).map(|(a, b)| a - b).collect();

        let mut v: Vec<f64> = u.iter().zip(&q).map(|(a, b)| a + b).collect();
        let before_v = v.clone();
        project_dec(&mut v);
        let new_q: Vec<f64> = before_v.iter().zip(&v).map(|(a, b)| a - b).collect();

        let settled = v == x && new_p == p && new_q == q;
        x = v;
        p = new_p;
        q = new_q;
        if settled {
            break;
        }
    }
    Ok(x)
}
