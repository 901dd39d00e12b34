//! Ground-truth matrices, noise and observations.

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};
use crate::io::read_matrix_csv;
use crate::matrix::{permute_rows, Matrix, Permutation};
use crate::rng::RngSeed;

/// Families of increasing-column truth matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// First column `(√m, 2√m, …, n√m)`, all other columns zero.
    SparseRows,
    /// Every column equal to `(1, …, n)/n`.
    IdenticalColumns,
    /// `A_{ij} = 1(i ≥ j)`.
    Triangular,
    /// Each column an independently sorted sample of `n` i.i.d. `U(0,1)`.
    RandomVBounded,
    /// Each column piecewise constant on `blocks` contiguous blocks of
    /// near-equal size (larger blocks first), with sorted i.i.d. `U(0,1)`
    /// block values.
    RandomKBlocks { blocks: usize },
    /// Read from a CSV file; must have increasing columns.
    Custom { path: PathBuf },
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::SparseRows => "sparse_rows".into(),
            Family::IdenticalColumns => "identical_columns".into(),
            Family::Triangular => "triangular".into(),
            Family::RandomVBounded => "random_v_bounded".into(),
            Family::RandomKBlocks { blocks } => format!("random_k_blocks({blocks})"),
            Family::Custom { path } => format!("custom({})", path.display()),
        }
    }

    /// Whether the family's rows are pairwise distinct (almost surely for
    /// the random families).
    pub fn has_distinct_rows(&self) -> bool {
        matches!(
            self,
            Family::SparseRows | Family::IdenticalColumns | Family::Triangular | Family::RandomVBounded
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub m: usize,
    pub seed: RngSeed,
}

/// Sizes of `blocks` contiguous blocks covering `n` rows: the first
/// `n mod blocks` have `⌈n/blocks⌉` rows, the rest `⌊n/blocks⌋`.
pub fn block_sizes(n: usize, blocks: usize) -> Vec<usize> {
    let (base, extra) = (n / blocks, n % blocks);
    (0..blocks).map(|b| base + usize::from(b < extra)).collect()
}

fn check_dims(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(SeriationError::InvalidConfig(format!(
            "generator dimensions must be positive, got {n}x{m}"
        )));
    }
    Ok(())
}

/// Draws a truth matrix from `family` using `rng`.
pub fn truth_from_rng<R: Rng + ?Sized>(family: &Family, n: usize, m: usize, rng: &mut R) -> Result<Matrix> {
    check_dims(n, m)?;
    let a = match family {
        Family::SparseRows => {
            let s = (m as f64).sqrt();
            Matrix::from_fn(n, m, |i, j| if j == 0 { (i + 1) as f64 * s } else { 0.0 })
        }
        Family::IdenticalColumns => Matrix::from_fn(n, m, |i, _| (i + 1) as f64 / n as f64),
        Family::Triangular => Matrix::from_fn(n, m, |i, j| if i >= j { 1.0 } else { 0.0 }),
        Family::RandomVBounded => {
            let mut data = vec![0.0; n * m];
            let mut col = vec![0.0; n];
            for j in 0..m {
                col.iter_mut().for_each(|v| *v = rng.random::<f64>());
                col.sort_unstable_by(f64::total_cmp);
                for (i, v) in col.iter().enumerate() {
                    data[i * m + j] = *v;
                }
            }
            Matrix::from_vec(n, m, data)?
        }
        Family::RandomKBlocks { blocks } => {
            let blocks = *blocks;
            if blocks == 0 || blocks > n {
                return Err(SeriationError::InvalidConfig(format!(
                    "block count must be in 1..={n}, got {blocks}"
                )));
            }
            let sizes = block_sizes(n, blocks);
            let mut data = vec![0.0; n * m];
            let mut values = vec![0.0; blocks];
            for j in 0..m {
                values.iter_mut().for_each(|v| *v = rng.random::<f64>());
                values.sort_unstable_by(f64::total_cmp);
                let mut i = 0;
                for (size, v) in sizes.iter().zip(&values) {
                    for _ in 0..*size {
                        data[i * m + j] = *v;
                        i += 1;
                    }
                }
            }
            Matrix::from_vec(n, m, data)?
        }
        Family::Custom { path } => {
            let a = read_matrix_csv(path)?;
            if a.shape() != (n, m) {
                return Err(SeriationError::dims(
                    format!("{n}x{m}"),
                    format!("{}x{} in {}", a.n_rows(), a.n_cols(), path.display()),
                ));
            }
            a
        }
    };
    a.ensure_column_monotone(0.0)?;
    Ok(a)
}

pub fn gen_truth(spec: &GeneratorSpec) -> Result<Matrix> {
    truth_from_rng(&spec.family, spec.n, spec.m, &mut spec.seed.rng())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    Gaussian,
    Rademacher,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub sigma: f64,
    pub seed: RngSeed,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(SeriationError::InvalidConfig(format!(
                "noise sigma must be finite and non-negative, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// `n × m` i.i.d. noise: `N(0, σ²)`, `σ·(±1)` or zeros.
pub fn noise_from_rng<R: Rng + ?Sized>(
    kind: NoiseKind,
    sigma: f64,
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<Matrix> {
    check_dims(n, m)?;
    let data: Vec<f64> = match kind {
        NoiseKind::None => vec![0.0; n * m],
        NoiseKind::Gaussian => (0..n * m)
            .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
            .collect(),
        NoiseKind::Rademacher => (0..n * m)
            .map(|_| if rng.random::<bool>() { sigma } else { -sigma })
            .collect(),
    };
    Matrix::from_vec(n, m, data)
}

pub fn gen_noise(spec: &NoiseSpec, n: usize, m: usize) -> Result<Matrix> {
    spec.validate()?;
    noise_from_rng(spec.kind, spec.sigma, n, m, &mut spec.seed.rng())
}

/// Uniformly random permutation of length `n`.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut mapping: Vec<usize> = (0..n).collect();
    mapping.shuffle(rng);
    Permutation::new(mapping).expect("shuffled indices form a permutation")
}

/// `Y = ΠA* + Z`.
pub fn gen_observation(truth: &Matrix, p: &Permutation, noise: &NoiseSpec) -> Result<Matrix> {
    let signal = permute_rows(p, truth)?;
    let z = gen_noise(noise, truth.n_rows(), truth.n_cols())?;
    signal.add(&z)
}
