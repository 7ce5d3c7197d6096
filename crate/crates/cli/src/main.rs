//! Command-line surface for the tail-index estimators: point estimates
//! from data files, simulation grids, coverage and baseline-comparison
//! experiments, and plot-ready convergence tables.
//!
//! Every command is deterministic given its configuration and seed. CSV
//! output uses fixed headers, '.' decimals and '\n' line endings.
//! Replicates may run in parallel; set RAYON_NUM_THREADS to override the
//! thread count.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tailq::montecarlo::{
    coverage_experiment, figure_defaults, figure_grid, run_plan, CellStats, EstimatorKind,
    ExperimentPlan,
};
use tailq::order_stats::{discard_count, truncate_to_design};
use tailq::{confidence_interval, design_indices, q_estimator, OrderedSample, SeedSpec, TailModel};

/// Default master seed; an arbitrary fixed constant, never time-based.
const DEFAULT_SEED: u64 = 20170823;

// Stream reserved for the estimate command's random truncation, clear of
// the replicate streams 0, 1, 2, ...
const TRUNCATE_STREAM: u64 = u64::MAX;

const EXIT_BAD_INPUT: u8 = 2;
const EXIT_INCOMPATIBLE: u8 = 3;
const EXIT_UNWRITABLE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "tailq",
    about = "Tail-index estimation from log-ratios of central order statistics",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the tail index from a file of positive observations.
    Estimate(EstimateArgs),
    /// Simulate Pareto samples and tabulate estimator statistics per k.
    Simulate(SimulateArgs),
    /// Empirical coverage of the asymptotic confidence interval.
    Coverage(CoverageArgs),
    /// Compare Q* against the baseline estimators on common replicates.
    Compare(CompareArgs),
    /// Emit the averaged 1/Q* convergence tables, one CSV per alpha.
    Figures(FiguresArgs),
}

#[derive(Args)]
struct EstimateArgs {
    /// Input file: one positive number per line (a single-column CSV
    /// header is auto-detected).
    #[arg(long)]
    input: PathBuf,
    /// Ratio designs to evaluate, e.g. --s 2,3,5.
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<u32>,
    /// Confidence level for the interval.
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Discard randomly chosen observations (seeded) when the sample size
    /// is not of the form (s+1)k - 1; without this flag such sizes fail.
    #[arg(long)]
    allow_truncate: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Pareto tail index of the simulated samples.
    #[arg(long)]
    alpha: f64,
    #[arg(long, value_delimiter = ',', required = true)]
    s: Vec<u32>,
    /// Evaluate every k = 1..=k_max; samples have size (s+1)k_max - 1.
    #[arg(long)]
    k_max: usize,
    #[arg(long)]
    reps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Pareto scale; the statistics do not depend on it.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Comma-separated subset of q,qstar,hill,thill,pickands,moment.
    #[arg(long, value_delimiter = ',', default_values_t = vec!["q".to_string(), "qstar".to_string()])]
    estimators: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CoverageArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    s: u32,
    /// Design k; the sample size is (s+1)k - 1.
    #[arg(long)]
    k: usize,
    #[arg(long)]
    reps: usize,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    alpha: f64,
    /// Common sample size; must equal (s+1)k - 1 for the chosen s.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    reps: usize,
    #[arg(long, default_value_t = 2)]
    s: u32,
    #[arg(long, value_delimiter = ',', default_values_t = vec![
        "qstar".to_string(),
        "hill".to_string(),
        "thill".to_string(),
        "pickands".to_string(),
        "moment".to_string(),
    ])]
    estimators: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FiguresArgs {
    /// Use the standard grid (alpha 0.3,0.5,1,1.5; s 2..5; k <= 500;
    /// 100 replicates); this is also what you get with no overrides.
    #[arg(long)]
    defaults: bool,
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    s_list: Option<Vec<u32>>,
    #[arg(long)]
    k_max: Option<usize>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Directory for the per-alpha CSV files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    fn general(message: impl std::fmt::Display) -> Self {
        Self::new(1, message.to_string())
    }
}

impl From<tailq::Error> for CliError {
    fn from(e: tailq::Error) -> Self {
        CliError::general(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Estimate(args) => cmd_estimate(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Coverage(args) => cmd_coverage(&args),
        Command::Compare(args) => cmd_compare(&args),
        Command::Figures(args) => cmd_figures(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn parse_estimators(names: &[String]) -> Result<Vec<EstimatorKind>, CliError> {
    let mut out = Vec::new();
    for name in names {
        let est: EstimatorKind = name
            .parse()
            .map_err(|e| CliError::new(EXIT_BAD_INPUT, format!("{e}")))?;
        if !out.contains(&est) {
            out.push(est);
        }
    }
    Ok(out)
}

fn write_output(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            CliError::new(EXIT_UNWRITABLE, format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::new(EXIT_UNWRITABLE, format!("cannot write stdout: {e}")))
        }
    }
}

// JSON has no NaN; missing aggregates become null.
fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn opt_num(v: Option<f64>) -> Value {
    v.map(num).unwrap_or(Value::Null)
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => format!("{x}"),
        _ => String::new(),
    }
}

fn fmt_nan(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

/// One positive number per line; an unparsable first line is taken as a
/// header. Errors carry the 1-based line number.
fn read_observations(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::new(EXIT_BAD_INPUT, format!("cannot read {}: {e}", path.display()))
    })?;
    let mut values = Vec::new();
    let mut saw_data = false;
    for (idx, raw_line) in text.lines().enumerate() {
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) => {
                if !v.is_finite() || v <= 0.0 {
                    return Err(CliError::new(
                        EXIT_BAD_INPUT,
                        format!("line {}: observation must be positive, got '{line}'", idx + 1),
                    ));
                }
                values.push(v);
                saw_data = true;
            }
            Err(_) if !saw_data => {
                // header line
                saw_data = true;
            }
            Err(_) => {
                return Err(CliError::new(
                    EXIT_BAD_INPUT,
                    format!("line {}: cannot parse '{line}' as a number", idx + 1),
                ));
            }
        }
    }
    if values.is_empty() {
        return Err(CliError::new(
            EXIT_BAD_INPUT,
            format!("{}: no observations found", path.display()),
        ));
    }
    Ok(values)
}

fn cmd_estimate(args: &EstimateArgs) -> Result<(), CliError> {
    let raw = read_observations(&args.input)?;
    let mut csv = String::from("s,n_used,discarded,k,q,q_star,alpha_hat,ci_lower,ci_upper\n");
    let mut rows = Vec::new();
    for &s in &args.s {
        let (kept, discarded) = if discard_count(raw.len(), s) == 0 {
            (raw.clone(), 0)
        } else if args.allow_truncate {
            truncate_to_design(&raw, s, SeedSpec::new(args.seed, TRUNCATE_STREAM))
        } else {
            return Err(CliError::new(
                EXIT_INCOMPATIBLE,
                format!(
                    "sample size {} is not of the form (s+1)k-1 for s={s}; \
                     rerun with --allow-truncate to discard {} observation(s) at random",
                    raw.len(),
                    discard_count(raw.len(), s)
                ),
            ));
        };
        let sample = OrderedSample::new(&kept)?;
        let design = design_indices(sample.len(), s)?;
        let est = q_estimator(&sample, design.k, s)?;
        let ci = confidence_interval(&sample, design.k, s, args.level)?;
        writeln!(
            csv,
            "{s},{},{discarded},{},{},{},{},{},{}",
            sample.len(),
            design.k,
            est.q,
            est.q_star,
            est.alpha_hat,
            ci.lower,
            ci.upper
        )
        .unwrap();
        rows.push(json!({
            "s": s,
            "n_used": sample.len(),
            "discarded": discarded,
            "k": design.k,
            "q": num(est.q),
            "q_star": num(est.q_star),
            "alpha_hat": num(est.alpha_hat),
            "ci_lower": num(ci.lower),
            "ci_upper": num(ci.upper),
            "level": args.level,
        }));
    }
    let text = match args.format {
        OutputFormat::Csv => csv,
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&rows).unwrap()),
    };
    write_output(&text, args.out.as_deref())
}

fn cells_to_csv(cells: &[CellStats]) -> String {
    let mut csv =
        String::from("s,k,estimator,n_design,valid,failed,mean,bias,variance,rmse,coverage\n");
    for c in cells {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{},{}",
            c.s,
            c.k,
            c.estimator,
            c.n_design,
            c.valid,
            c.failed,
            fmt_nan(c.mean),
            fmt_opt(c.bias),
            fmt_nan(c.variance),
            fmt_opt(c.rmse),
            fmt_opt(c.coverage)
        )
        .unwrap();
    }
    csv
}

fn cell_to_json(c: &CellStats) -> Value {
    json!({
        "s": c.s,
        "k": c.k,
        "estimator": c.estimator.to_string(),
        "n_design": c.n_design,
        "valid": c.valid,
        "failed": c.failed,
        "mean": num(c.mean),
        "bias": opt_num(c.bias),
        "variance": num(c.variance),
        "rmse": opt_num(c.rmse),
        "coverage": opt_num(c.coverage),
    })
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let plan = ExperimentPlan {
        model: TailModel::pareto(args.alpha, args.delta)?,
        s_list: args.s.clone(),
        k_max: args.k_max,
        replicates: args.reps,
        level: args.level,
        master_seed: args.seed,
        estimators: parse_estimators(&args.estimators)?,
        retain_estimates: false,
    };
    let result = run_plan(&plan)?;
    let text = match args.format {
        OutputFormat::Csv => cells_to_csv(&result.cells),
        OutputFormat::Json => {
            let rows: Vec<Value> = result.cells.iter().map(cell_to_json).collect();
            format!("{}\n", serde_json::to_string_pretty(&rows).unwrap())
        }
    };
    write_output(&text, args.out.as_deref())
}

fn cmd_coverage(args: &CoverageArgs) -> Result<(), CliError> {
    let plan = ExperimentPlan {
        model: TailModel::pareto(args.alpha, args.delta)?,
        s_list: vec![args.s],
        k_max: args.k,
        replicates: args.reps,
        level: args.level,
        master_seed: args.seed,
        estimators: vec![EstimatorKind::QStar],
        retain_estimates: false,
    };
    let coverage = coverage_experiment(&plan)?;
    let n = (args.s as usize + 1) * args.k - 1;
    let text = format!(
        "alpha,s,k,n,level,replicates,coverage\n{},{},{},{n},{},{},{coverage}\n",
        args.alpha, args.s, args.k, args.level, args.reps
    );
    write_output(&text, None)
}

fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    let design = design_indices(args.n, args.s).map_err(|e| {
        CliError::new(
            EXIT_INCOMPATIBLE,
            format!("{e}; pick n with (n+1) divisible by s+1"),
        )
    })?;
    let plan = ExperimentPlan {
        model: TailModel::pareto(args.alpha, args.delta)?,
        s_list: vec![args.s],
        k_max: design.k,
        replicates: args.reps,
        level: args.level,
        master_seed: args.seed,
        estimators: parse_estimators(&args.estimators)?,
        retain_estimates: false,
    };
    let result = run_plan(&plan)?;
    let best = result.best_k_cells();
    let text = match args.format {
        OutputFormat::Csv => {
            let mut csv = String::from(
                "row,s,k,estimator,n_design,valid,failed,mean,bias,variance,rmse,coverage\n",
            );
            for c in &result.cells {
                writeln!(
                    csv,
                    "at_k,{},{},{},{},{},{},{},{},{},{},{}",
                    c.s,
                    c.k,
                    c.estimator,
                    c.n_design,
                    c.valid,
                    c.failed,
                    fmt_nan(c.mean),
                    fmt_opt(c.bias),
                    fmt_nan(c.variance),
                    fmt_opt(c.rmse),
                    fmt_opt(c.coverage)
                )
                .unwrap();
            }
            for c in &best {
                writeln!(
                    csv,
                    "best_k,{},{},{},{},{},{},{},{},{},{},{}",
                    c.s,
                    c.k,
                    c.estimator,
                    c.n_design,
                    c.valid,
                    c.failed,
                    fmt_nan(c.mean),
                    fmt_opt(c.bias),
                    fmt_nan(c.variance),
                    fmt_opt(c.rmse),
                    fmt_opt(c.coverage)
                )
                .unwrap();
            }
            csv
        }
        OutputFormat::Json => {
            let value = json!({
                "at_k": result.cells.iter().map(cell_to_json).collect::<Vec<_>>(),
                "best_k": best.iter().map(cell_to_json).collect::<Vec<_>>(),
            });
            format!("{}\n", serde_json::to_string_pretty(&value).unwrap())
        }
    };
    write_output(&text, args.out.as_deref())
}

fn cmd_figures(args: &FiguresArgs) -> Result<(), CliError> {
    let (def_alphas, def_s, def_k_max, def_reps, _) = figure_defaults();
    let alphas = args.alphas.clone().unwrap_or(def_alphas);
    let s_list = args.s_list.clone().unwrap_or(def_s);
    let k_max = args.k_max.unwrap_or(def_k_max);
    let reps = args.reps.unwrap_or(def_reps);

    let rows = figure_grid(&alphas, &s_list, k_max, reps, args.level, args.seed)?;
    let per_alpha = s_list.len() * k_max;
    for (ai, &alpha) in alphas.iter().enumerate() {
        let mut csv = String::from("s,k,avg_inv_qstar,ci_lower,ci_upper\n");
        for row in &rows[ai * per_alpha..(ai + 1) * per_alpha] {
            writeln!(
                csv,
                "{},{},{},{},{}",
                row.s,
                row.k,
                fmt_nan(row.avg_inv_qstar),
                fmt_nan(row.ci_lower),
                fmt_nan(row.ci_upper)
            )
            .unwrap();
        }
        let path = args.out_dir.join(format!("figures_alpha_{alpha}.csv"));
        std::fs::write(&path, csv).map_err(|e| {
            CliError::new(EXIT_UNWRITABLE, format!("cannot write {}: {e}", path.display()))
        })?;
        println!("{}", path.display());
    }
    Ok(())
}
