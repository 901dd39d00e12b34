//! Monte-Carlo experiment runner: grids of `(n, m)`, replications, CSV
//! records and log–log slope fits.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};
use crate::estimators::{
    estimation_losses, run_method, EstimatorConfig, Losses, Method, TauSpec, DEFAULT_TAU,
    EXHAUSTIVE_MAX_ROWS,
};
use crate::io::write_text;
use crate::matrix::permute_rows;
use crate::rng::RngSeed;
use crate::shape::ShapeSpec;
use crate::synth::{noise_from_rng, random_permutation, truth_from_rng, Family, NoiseKind};

/// How `m` follows `n` along a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridRule {
    #[serde(rename = "m=n^1/2")]
    SqrtN,
    #[serde(rename = "m=n")]
    Linear,
    #[serde(rename = "m=n^3/2")]
    ThreeHalves,
}

impl GridRule {
    pub fn m_for(self, n: usize) -> usize {
        let n = n as f64;
        let m = match self {
            GridRule::SqrtN => n.sqrt(),
            GridRule::Linear => n,
            GridRule::ThreeHalves => n * n.sqrt(),
        };
        (m.round() as usize).max(1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grid {
    Rule(GridRule),
    Rules(Vec<GridRule>),
    Pairs(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub kind: NoiseKind,
    pub sigma: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            kind: NoiseKind::Gaussian,
            sigma: 1.0,
        }
    }
}

fn default_n_points() -> usize {
    30
}
fn default_replications() -> usize {
    10
}
fn default_tau() -> f64 {
    DEFAULT_TAU
}
fn default_shape() -> ShapeSpec {
    ShapeSpec::Monotone
}
fn default_cap() -> usize {
    EXHAUSTIVE_MAX_ROWS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid: Grid,
    #[serde(default = "default_n_points")]
    pub n_points: usize,
    #[serde(default)]
    pub n_min: usize,
    #[serde(default)]
    pub n_max: usize,
    #[serde(default = "default_replications")]
    pub replications: usize,
    pub generator: Family,
    #[serde(default)]
    pub noise: NoiseConfig,
    pub methods: Vec<Method>,
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// Replace `tau` by the rule `3σ√((C+1) ln(nm))` with this `C`.
    #[serde(default)]
    pub tau_rule: Option<f64>,
    #[serde(default = "default_shape")]
    pub shape: ShapeSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_cap")]
    pub exhaustive_cap: usize,
    /// Fill `wall_time_ms`. Off by default so that output files are a pure
    /// function of the configuration.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default)]
    pub out_path: Option<PathBuf>,
}

/// `round(10^t)` for `n_points` values of `t` equally spaced between
/// `log10 n_min` and `log10 n_max`, deduplicated.
pub fn log_grid(n_min: usize, n_max: usize, n_points: usize) -> Vec<usize> {
    let (lo, hi) = ((n_min as f64).log10(), (n_max as f64).log10());
    let mut out: Vec<usize> = (0..n_points)
        .map(|k| {
            let t = lo + (hi - lo) * k as f64 / (n_points - 1) as f64;
            10f64.powf(t).round() as usize
        })
        .collect();
    out.dedup();
    out
}

impl ExperimentConfig {
    /// Grid cells `(n, m)` in run order.
    pub fn cells(&self) -> Result<Vec<(usize, usize)>> {
        let rules = match &self.grid {
            Grid::Pairs(pairs) => return Ok(pairs.clone()),
            Grid::Rule(r) => vec![*r],
            Grid::Rules(rs) => rs.clone(),
        };
        let ns = log_grid(self.n_min, self.n_max, self.n_points);
        Ok(rules
            .iter()
            .flat_map(|r| ns.iter().map(move |&n| (n, r.m_for(n))))
            .collect())
    }

    pub fn estimator_config(&self) -> EstimatorConfig {
        EstimatorConfig {
            shape: self.shape,
            sigma: self.noise.sigma,
            tau: match self.tau_rule {
                Some(c) => TauSpec::Rule { c },
                None => TauSpec::Fixed(self.tau),
            },
        }
    }

    /// Rejects configurations that cannot run, before any work is done.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SeriationError::InvalidConfig(msg));
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        if self.methods.is_empty() {
            return bad("no methods selected".into());
        }
        match &self.grid {
            Grid::Pairs(pairs) => {
                if pairs.is_empty() {
                    return bad("empty grid".into());
                }
                if pairs.iter().any(|&(n, m)| n == 0 || m == 0) {
                    return bad("grid dimensions must be positive".into());
                }
                if pairs.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return bad("grid n values must be strictly increasing".into());
                }
            }
            Grid::Rules(rs) if rs.is_empty() => return bad("empty list of grid rules".into()),
            _ => {
                if self.n_points < 2 {
                    return bad(format!("n_points must be at least 2, got {}", self.n_points));
                }
                if self.n_min < 1 || self.n_min >= self.n_max {
                    return bad(format!(
                        "need 1 <= n_min < n_max, got n_min = {}, n_max = {}",
                        self.n_min, self.n_max
                    ));
                }
            }
        }
        if !(self.noise.sigma >= 0.0 && self.noise.sigma.is_finite()) {
            return bad(format!("noise sigma must be non-negative, got {}", self.noise.sigma));
        }
        let cells = self.cells()?;
        let est = self.estimator_config();
        for &(n, m) in &cells {
            est.tau(n, m)?;
            est.shape.validate(n)?;
            if let Family::RandomKBlocks { blocks } = self.generator {
                if blocks == 0 || blocks > n {
                    return bad(format!("{blocks} blocks do not fit n = {n} rows"));
                }
            }
        }
        if self.methods.contains(&Method::RankScore) && self.shape != ShapeSpec::Monotone {
            return Err(SeriationError::Unsupported(
                "RankScore is defined for increasing columns only".into(),
            ));
        }
        if self.methods.contains(&Method::Exhaustive) {
            let max_n = cells.iter().map(|c| c.0).max().unwrap_or(0);
            if max_n > self.exhaustive_cap {
                return Err(SeriationError::TooManyRows {
                    n: max_n,
                    cap: self.exhaustive_cap,
                });
            }
        }
        Ok(())
    }
}

/// Mean per-entry losses of one method on one grid cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub n: usize,
    pub m: usize,
    pub method: Method,
    pub loss_total: f64,
    pub loss_perm: f64,
    pub loss_matrix: f64,
    /// `log10(loss_total)`
    pub log10_loss_total: f64,
    pub wall_time_ms: f64,
    pub seed: u64,
}

/// Per-replication outcome of every method, before averaging.
#[derive(Clone, Debug)]
pub struct Replication {
    pub losses: Vec<Losses>,
    pub sse: Vec<f64>,
    pub wall_time_ms: Vec<f64>,
}

/// Runs one replication of one cell: draws `A*`, `Π*` and `Z` from the
/// replication's stream (in that order) and fits every method.
pub fn run_replication(cfg: &ExperimentConfig, n: usize, m: usize, rep: usize) -> Result<Replication> {
    let seed = RngSeed(cfg.seed).derive(&[n as u64, m as u64, rep as u64]);
    let mut rng = seed.rng();
    let truth = truth_from_rng(&cfg.generator, n, m, &mut rng)?;
    let p_true = random_permutation(n, &mut rng);
    let z = noise_from_rng(cfg.noise.kind, cfg.noise.sigma, n, m, &mut rng)?;
    let y = permute_rows(&p_true, &truth)?.add(&z)?;
    drop(z);

    let est = cfg.estimator_config();
    let mut out = Replication {
        losses: Vec::with_capacity(cfg.methods.len()),
        sse: Vec::with_capacity(cfg.methods.len()),
        wall_time_ms: Vec::with_capacity(cfg.methods.len()),
    };
    for &method in &cfg.methods {
        let start = Instant::now();
        let fit = run_method(method, &y, &est, Some(&p_true), cfg.exhaustive_cap)?;
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        out.losses.push(estimation_losses(&fit, &p_true, &truth)?);
        out.sse.push(fit.sse);
        out.wall_time_ms.push(if cfg.record_timing { elapsed } else { 0.0 });
    }
    Ok(out)
}

/// Runs the full grid. Replications of a cell run in parallel and are
/// reduced in replication order, so the records do not depend on the
/// number of threads.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    run_experiment_with(cfg, |_, _, _| {})
}

/// Like [`run_experiment`], calling `inspect(n, m, replication)` on every
/// replication (in order) before it is averaged.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    mut inspect: impl FnMut(usize, usize, &Replication),
) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let mut records = Vec::new();
    for (n, m) in cfg.cells()? {
        let reps: Vec<Replication> = (0..cfg.replications)
            .into_par_iter()
            .map(|rep| run_replication(cfg, n, m, rep))
            .collect::<Result<_>>()?;
        let count = reps.len() as f64;
        for rep in &reps {
            inspect(n, m, rep);
        }
        for (k, &method) in cfg.methods.iter().enumerate() {
            let mean = |f: fn(&Losses) -> f64| reps.iter().map(|r| f(&r.losses[k])).sum::<f64>() / count;
            let loss_total = mean(|l| l.total);
            records.push(ExperimentRecord {
                n,
                m,
                method,
                loss_total,
                loss_perm: mean(|l| l.perm_only),
                loss_matrix: mean(|l| l.matrix_only),
                log10_loss_total: loss_total.log10(),
                wall_time_ms: reps.iter().map(|r| r.wall_time_ms[k]).sum::<f64>() / count,
                seed: cfg.seed,
            });
        }
    }
    Ok(records)
}

pub const CSV_HEADER: &str =
    "n,m,method,loss_total,loss_perm,loss_matrix,log10_loss_total,wall_time_ms,seed";

fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV text for `records`: fixed header, 17 significant digits, LF endings.
pub fn format_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let fields = [
            r.n.to_string(),
            r.m.to_string(),
            r.method.name().to_string(),
            fmt_float(r.loss_total),
            fmt_float(r.loss_perm),
            fmt_float(r.loss_matrix),
            fmt_float(r.log10_loss_total),
            fmt_float(r.wall_time_ms),
            r.seed.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn emit_csv(records: &[ExperimentRecord], path: &Path) -> Result<()> {
    write_text(path, &format_csv(records))
}

pub fn parse_csv<R: std::io::Read>(reader: R) -> Result<Vec<ExperimentRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(SeriationError::InvalidConfig(format!(
            "unexpected CSV header {:?}",
            header.join(",")
        )));
    }
    rdr.deserialize()
        .map(|r| r.map_err(SeriationError::from))
        .collect()
}

pub fn read_csv(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let file = std::fs::File::open(path).map_err(|source| SeriationError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_csv(file)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Which loss column a slope is fitted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LossField {
    Total,
    Perm,
    Matrix,
}

impl LossField {
    fn get(self, r: &ExperimentRecord) -> f64 {
        match self {
            LossField::Total => r.loss_total,
            LossField::Perm => r.loss_perm,
            LossField::Matrix => r.loss_matrix,
        }
    }
}

/// Ordinary least squares of `log10(loss)` on `log10(n)`.
pub fn fit_loglog_slope(records: &[ExperimentRecord], field: LossField) -> Result<SlopeFit> {
    if records.len() < 3 {
        return Err(SeriationError::InvalidConfig(format!(
            "a slope fit needs at least 3 records, got {}",
            records.len()
        )));
    }
    let mut pts = Vec::with_capacity(records.len());
    for r in records {
        let loss = field.get(r);
        if loss.is_nan() || loss <= 0.0 {
            return Err(SeriationError::NonPositiveLoss { n: r.n, loss });
        }
        pts.push(((r.n as f64).log10(), loss.log10()));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(SeriationError::InvalidConfig(
            "a slope fit needs at least two distinct n".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(SlopeFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Reference experiment presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    /// Sparse row differences, `m = n`: RankScore, RankSum and the oracle.
    OneLeft,
    /// Identical columns, `m = n`: RankScore, RankSum and the oracle.
    OneRight,
    /// Five-block columns (`K = 5m`) in three `(n, m)` regimes.
    TwoLeft,
    /// Sorted uniform columns (`V ≤ 1`) in three `(n, m)` regimes.
    TwoRight,
    /// Lower-triangular 0/1 matrix, `m = n`.
    Three,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::OneLeft,
        Figure::OneRight,
        Figure::TwoLeft,
        Figure::TwoRight,
        Figure::Three,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::OneLeft => "1-left",
            Figure::OneRight => "1-right",
            Figure::TwoLeft => "2-left",
            Figure::TwoRight => "2-right",
            Figure::Three => "3",
        }
    }

    /// Default largest `n`. RankScore costs `O(n²m)`, and with `m = n^{3/2}`
    /// the second figure's matrices grow fastest.
    pub fn default_n_max(self) -> usize {
        match self {
            Figure::TwoLeft | Figure::TwoRight => 512,
            _ => 1024,
        }
    }

    pub const DEFAULT_N_MIN: usize = 16;

    pub fn config(self) -> ExperimentConfig {
        let (grid, generator, methods) = match self {
            Figure::OneLeft => (
                Grid::Rule(GridRule::Linear),
                Family::SparseRows,
                vec![Method::RankScore, Method::RankSum, Method::Oracle],
            ),
            Figure::OneRight => (
                Grid::Rule(GridRule::Linear),
                Family::IdenticalColumns,
                vec![Method::RankScore, Method::RankSum, Method::Oracle],
            ),
            Figure::TwoLeft | Figure::TwoRight => (
                Grid::Rules(vec![GridRule::SqrtN, GridRule::Linear, GridRule::ThreeHalves]),
                if self == Figure::TwoLeft {
                    Family::RandomKBlocks { blocks: 5 }
                } else {
                    Family::RandomVBounded
                },
                vec![Method::RankScore, Method::Oracle],
            ),
            Figure::Three => (
                Grid::Rule(GridRule::Linear),
                Family::Triangular,
                vec![Method::RankScore, Method::Oracle],
            ),
        };
        ExperimentConfig {
            grid,
            n_points: default_n_points(),
            n_min: Self::DEFAULT_N_MIN,
            n_max: self.default_n_max(),
            replications: default_replications(),
            generator,
            noise: NoiseConfig::default(),
            methods,
            tau: DEFAULT_TAU,
            tau_rule: None,
            shape: ShapeSpec::Monotone,
            seed: 0,
            exhaustive_cap: EXHAUSTIVE_MAX_ROWS,
            record_timing: false,
            out_path: None,
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = SeriationError;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| SeriationError::InvalidConfig(format!("unknown figure {s:?}")))
    }
}

/// Slope fits of `loss_total` per method, and per grid rule when the grid
/// has several. Groups with fewer than three positive losses are skipped.
pub fn slope_summary(
    cfg: &ExperimentConfig,
    records: &[ExperimentRecord],
) -> Vec<(Method, Option<GridRule>, SlopeFit)> {
    let rules: Vec<Option<GridRule>> = match &cfg.grid {
        Grid::Pairs(_) => vec![None],
        Grid::Rule(r) => vec![Some(*r)],
        Grid::Rules(rs) => rs.iter().copied().map(Some).collect(),
    };
    let mut out = Vec::new();
    for &method in &cfg.methods {
        for &rule in &rules {
            let group: Vec<ExperimentRecord> = records
                .iter()
                .filter(|r| r.method == method && rule.is_none_or(|g| g.m_for(r.n) == r.m))
                .cloned()
                .collect();
            if let Ok(fit) = fit_loglog_slope(&group, LossField::Total) {
                out.push((method, rule, fit));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(n: usize, loss: f64) -> ExperimentRecord {
        ExperimentRecord {
            n,
            m: n,
            method: Method::Oracle,
            loss_total: loss,
            loss_perm: 0.0,
            loss_matrix: loss,
            log10_loss_total: loss.log10(),
            wall_time_ms: 0.0,
            seed: 1,
        }
    }

    #[test]
    fn grid_is_log_spaced_and_deduplicated() {
        let g = log_grid(10, 1000, 3);
        assert_eq!(g, vec![10, 100, 1000]);
        let g = log_grid(2, 8, 30);
        assert_eq!(g, vec![2, 3, 4, 5, 6, 7, 8]);
        let g = log_grid(16, 1024, 30);
        assert_eq!(g.len(), 30);
        assert_eq!((g[0], g[29]), (16, 1024));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn grid_rules() {
        assert_eq!(GridRule::SqrtN.m_for(100), 10);
        assert_eq!(GridRule::Linear.m_for(37), 37);
        assert_eq!(GridRule::ThreeHalves.m_for(16), 64);
        assert_eq!(GridRule::SqrtN.m_for(1), 1);
    }

    #[test]
    fn exact_power_law_slope() {
        let recs: Vec<_> = [64usize, 128, 256, 512, 1024]
            .iter()
            .map(|&n| record(n, 3.0 * (n as f64).powf(-2.0 / 3.0)))
            .collect();
        let fit = fit_loglog_slope(&recs, LossField::Total).unwrap();
        assert!((fit.slope + 2.0 / 3.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_losses_have_zero_slope() {
        let recs: Vec<_> = [10usize, 20, 40].iter().map(|&n| record(n, 0.25)).collect();
        let fit = fit_loglog_slope(&recs, LossField::Total).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert!((0.0..=1.0).contains(&fit.r_squared));
    }

    #[test]
    fn slope_rejects_zero_loss_and_short_input() {
        let recs = vec![record(10, 1.0), record(20, 0.0), record(40, 0.5)];
        assert!(matches!(
            fit_loglog_slope(&recs, LossField::Total),
            Err(SeriationError::NonPositiveLoss { n: 20, .. })
        ));
        assert!(fit_loglog_slope(&recs[..2], LossField::Total).is_err());
    }

    #[test]
    fn csv_header_only_for_no_records() {
        assert_eq!(format_csv(&[]), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn csv_round_trip() {
        let mut recs = vec![record(10, 0.123_456_789_012_345_68), record(20, 1e-300)];
        recs[1].loss_perm = 0.0;
        recs.push(ExperimentRecord {
            loss_total: 0.0,
            log10_loss_total: f64::NEG_INFINITY,
            ..record(30, 0.0)
        });
        let text = format_csv(&recs);
        assert!(text.lines().nth(1).unwrap().starts_with("10,10,oracle,1.2345678901234568e-1,"));
        assert!(!text.contains('\r'));
        let back = parse_csv(text.as_bytes()).unwrap();
        assert_eq!(back, recs);
    }

    #[test]
    fn validation() {
        let mut cfg = Figure::OneLeft.config();
        assert!(cfg.validate().is_ok());
        cfg.replications = 0;
        assert!(cfg.validate().is_err());

        let mut cfg = Figure::OneLeft.config();
        cfg.n_points = 1;
        assert!(cfg.validate().is_err());

        let mut cfg = Figure::OneLeft.config();
        cfg.methods.push(Method::Exhaustive);
        assert!(matches!(cfg.validate(), Err(SeriationError::TooManyRows { .. })));

        let mut cfg = Figure::OneLeft.config();
        cfg.grid = Grid::Pairs(vec![(4, 2), (4, 3)]);
        assert!(cfg.validate().is_err());

        let mut cfg = Figure::OneLeft.config();
        cfg.shape = ShapeSpec::Unimodal;
        assert!(matches!(cfg.validate(), Err(SeriationError::Unsupported(_))));
    }

    #[test]
    fn noiseless_oracle_is_exact() {
        let cfg = ExperimentConfig {
            grid: Grid::Pairs(vec![(5, 3), (9, 4), (17, 2)]),
            replications: 1,
            generator: Family::RandomVBounded,
            noise: NoiseConfig {
                kind: NoiseKind::None,
                sigma: 0.0,
            },
            methods: vec![Method::Oracle],
            ..Figure::OneLeft.config()
        };
        let recs = run_experiment(&cfg).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs.iter().all(|r| r.loss_total == 0.0));
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = Figure::TwoLeft.config();
        let json = serde_json::to_string(&cfg).unwrap();
        assert!(json.contains("\"m=n^3/2\""));
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);

        let minimal: ExperimentConfig = serde_json::from_str(
            r#"{"grid": {"pairs": [[4, 2], [8, 3]]},
                "generator": {"family": "random_k_blocks", "blocks": 2},
                "methods": ["oracle", "exhaustive"]}"#,
        )
        .unwrap();
        assert_eq!(minimal.replications, 10);
        assert_eq!(minimal.tau, 6.0);
        assert!(minimal.validate().is_ok());
    }

    #[test]
    fn presets_parse() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
            assert!(f.config().validate().is_ok());
        }
    }
}
