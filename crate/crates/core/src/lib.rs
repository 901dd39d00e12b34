//! Seriation under shape constraints.
//!
//! An observation `Y = ΠA* + Z` hides a matrix `A*` whose columns are
//! increasing (or unimodal) behind an unknown row permutation `Π` and
//! additive noise `Z`. This crate provides the column projections, the
//! RankScore, RankSum, oracle and exhaustive estimators, the complexity
//! measures `K`, `V` and `R`, synthetic data generators and a Monte-Carlo
//! harness that measures empirical rates.

pub mod error;
pub mod estimators;
pub mod experiment;
pub mod io;
pub mod matrix;
pub mod metrics;
pub mod rng;
pub mod shape;
pub mod synth;

pub use error::{Result, SeriationError};
pub use estimators::{
    averaging_fit, estimation_losses, exhaustive_ls, oracle_fit, rank_score, rank_sum, run_method,
    EstimatorConfig, FitResult, Losses, Method, TauSpec,
};
pub use experiment::{
    emit_csv, fit_loglog_slope, read_csv, run_experiment, ExperimentConfig, ExperimentRecord,
    Figure, Grid, GridRule, LossField, SlopeFit,
};
pub use matrix::{frobenius_sq_dist, permute_rows, Matrix, Permutation};
pub use metrics::{complexity_report, gap, lemma1_check, r_statistic, ComplexityReport, GapScale};
pub use rng::RngSeed;
pub use shape::{project_columns, ShapeSpec};
pub use synth::{Family, NoiseKind};
