use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use seriation::estimators::{estimation_losses, run_method, EstimatorConfig, Method, TauSpec, EXHAUSTIVE_MAX_ROWS};
use seriation::experiment::{emit_csv, run_experiment, slope_summary, ExperimentConfig, Figure};
use seriation::io::{read_matrix_csv, read_permutation, write_matrix_csv, write_permutation};
use seriation::metrics::complexity_report;
use seriation::rng::RngSeed;
use seriation::shape::ShapeSpec;
use seriation::synth::{gen_truth, noise_from_rng, random_permutation, Family, GeneratorSpec, NoiseKind};
use seriation::matrix::permute_rows;

#[derive(Parser)]
#[command(name = "seriation", version, about = "Shape-constrained seriation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print K, V and R of a matrix as JSON.
    Metrics {
        matrix: PathBuf,
        /// Treat column values closer than this as equal when counting levels.
        #[arg(long, default_value_t = 0.0)]
        level_tol: f64,
    },
    /// Fit an estimator to an observed matrix.
    Estimate(EstimateArgs),
    /// Generate a truth matrix, and optionally a permuted noisy observation.
    Generate(GenerateArgs),
    /// Run a Monte-Carlo rate experiment and write its CSV.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Rankscore,
    Ranksum,
    Exhaustive,
    Oracle,
    Average,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Rankscore => Method::RankScore,
            MethodArg::Ranksum => Method::RankSum,
            MethodArg::Exhaustive => Method::Exhaustive,
            MethodArg::Oracle => Method::Oracle,
            MethodArg::Average => Method::Average,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Monotone,
    Unimodal,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "monotone")]
    shape: ShapeArg,
    /// Fix the unimodal peak at this 1-based row.
    #[arg(long)]
    mode: Option<usize>,
    #[arg(long, default_value_t = seriation::estimators::DEFAULT_TAU, conflicts_with = "tau_rule")]
    tau: f64,
    /// Use τ = 3σ√((C+1) ln(nm)) instead of a fixed τ.
    #[arg(long)]
    tau_rule: bool,
    #[arg(long, default_value_t = 1.0)]
    tau_c: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long = "in")]
    input: PathBuf,
    /// True matrix; enables the loss report.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// True permutation; required by the oracle.
    #[arg(long)]
    perm: Option<PathBuf>,
    #[arg(long)]
    fitted_out: Option<PathBuf>,
    /// Largest n accepted by the exhaustive search.
    #[arg(long, default_value_t = EXHAUSTIVE_MAX_ROWS)]
    max_n: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    SparseRows,
    IdenticalColumns,
    Triangular,
    RandomVBounded,
    RandomKBlocks,
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseArg {
    Gaussian,
    Rademacher,
    None,
}

impl From<NoiseArg> for NoiseKind {
    fn from(n: NoiseArg) -> Self {
        match n {
            NoiseArg::Gaussian => NoiseKind::Gaussian,
            NoiseArg::Rademacher => NoiseKind::Rademacher,
            NoiseArg::None => NoiseKind::None,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Number of blocks for random-k-blocks.
    #[arg(long, default_value_t = 5)]
    blocks: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    perm_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "gaussian")]
    noise: NoiseArg,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long)]
    obs_out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    figure: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long)]
    replications: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock time per method (makes the CSV non-reproducible).
    #[arg(long)]
    timing: bool,
}

fn metrics(path: PathBuf, level_tol: f64) -> anyhow::Result<()> {
    let a = read_matrix_csv(&path)?;
    let report = complexity_report(&a, level_tol);
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn estimate(args: EstimateArgs) -> anyhow::Result<()> {
    let y = read_matrix_csv(&args.input)?;
    let shape = match (args.shape, args.mode) {
        (ShapeArg::Monotone, None) => ShapeSpec::Monotone,
        (ShapeArg::Monotone, Some(_)) => bail!("--mode requires --shape unimodal"),
        (ShapeArg::Unimodal, None) => ShapeSpec::Unimodal,
        (ShapeArg::Unimodal, Some(l)) => ShapeSpec::FixedMode(l),
    };
    let cfg = EstimatorConfig {
        shape,
        sigma: args.sigma,
        tau: if args.tau_rule {
            TauSpec::Rule { c: args.tau_c }
        } else {
            TauSpec::Fixed(args.tau)
        },
    };
    let p_true = args.perm.as_deref().map(read_permutation).transpose()?;
    let method = Method::from(args.method);
    let fit = run_method(method, &y, &cfg, p_true.as_ref(), args.max_n)?;

    let mut summary = json!({
        "method": method.name(),
        "n": y.n_rows(),
        "m": y.n_cols(),
        "p_hat": fit.p_hat.mapping(),
        "sse": fit.sse,
    });
    if method == Method::RankScore {
        summary["tau"] = json!(cfg.tau(y.n_rows(), y.n_cols())?);
        summary["scores"] = json!(fit.scores);
    }
    if let Some(truth) = &args.truth {
        let a = read_matrix_csv(truth)?;
        let p = p_true.context("--truth needs --perm to score the permutation")?;
        let l = estimation_losses(&fit, &p, &a)?;
        summary["losses"] = json!({"total": l.total, "perm": l.perm_only, "matrix": l.matrix_only});
    }
    if let Some(out) = &args.fitted_out {
        write_matrix_csv(out, &fit.m_hat)?;
    }
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let family = match args.family {
        FamilyArg::SparseRows => Family::SparseRows,
        FamilyArg::IdenticalColumns => Family::IdenticalColumns,
        FamilyArg::Triangular => Family::Triangular,
        FamilyArg::RandomVBounded => Family::RandomVBounded,
        FamilyArg::RandomKBlocks => Family::RandomKBlocks { blocks: args.blocks },
    };
    let seed = RngSeed(args.seed);
    let truth = gen_truth(&GeneratorSpec {
        family,
        n: args.n,
        m: args.m,
        seed,
    })?;
    write_matrix_csv(&args.out, &truth)?;
    if args.perm_out.is_none() && args.obs_out.is_none() {
        return Ok(());
    }
    let mut rng = seed.derive(&[1]).rng();
    let p = random_permutation(args.n, &mut rng);
    if let Some(path) = &args.perm_out {
        write_permutation(path, &p)?;
    }
    if let Some(path) = &args.obs_out {
        if !(args.sigma >= 0.0 && args.sigma.is_finite()) {
            bail!("--sigma must be finite and non-negative, got {}", args.sigma);
        }
        let z = noise_from_rng(args.noise.into(), args.sigma, args.n, args.m, &mut rng)?;
        write_matrix_csv(path, &permute_rows(&p, &truth)?.add(&z)?)?;
    }
    Ok(())
}

fn experiment(args: ExperimentArgs) -> anyhow::Result<()> {
    let mut cfg = match (&args.figure, &args.config) {
        (Some(name), _) => name.parse::<Figure>()?.config(),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .with_context(|| format!("parsing {}", path.display()))?
        }
        (None, None) => bail!("either --figure or --config is required"),
    };
    if let Some(v) = args.n_min {
        cfg.n_min = v;
    }
    if let Some(v) = args.n_max {
        cfg.n_max = v;
    }
    if let Some(v) = args.n_points {
        cfg.n_points = v;
    }
    if let Some(v) = args.replications {
        cfg.replications = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if args.out.is_some() {
        cfg.out_path = args.out;
    }
    cfg.record_timing |= args.timing;

    let records = run_experiment(&cfg)?;
    let out = cfg
        .out_path
        .clone()
        .unwrap_or_else(|| PathBuf::from("results.csv"));
    emit_csv(&records, &out)?;
    eprintln!("wrote {} records to {}", records.len(), out.display());
    for (method, rule, fit) in slope_summary(&cfg, &records) {
        let rule = rule.map(|r| format!(" {}", serde_json::to_string(&r).unwrap_or_default().trim_matches('"')));
        println!(
            "{method}{}: slope {:.3}, r^2 {:.3}",
            rule.unwrap_or_default(),
            fit.slope,
            fit.r_squared
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Metrics { matrix, level_tol } => metrics(matrix, level_tol),
        Command::Estimate(args) => estimate(args),
        Command::Generate(args) => generate(args),
        Command::Experiment(args) => experiment(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
