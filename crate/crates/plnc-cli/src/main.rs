//! Command-line harness: parse configuration, dispatch to the library,
//! emit deterministic CSV or JSON.
//!
//! Exit codes: 0 success, 2 configuration error, 1 numerical failure
//! (quadrature non-convergence or consistency violation) and I/O errors.

mod configfile;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use plnc_core::{
    compare_with_analytic, default_lambda_grid, default_r0_grid, default_validation_grid,
    find_crossover_density, linear_to_db, optimize_r0, sweep_density, sweep_reserved_radius,
    validate_radius_sweep, CountModel, CrossoverOutcome, Error as CoreError, McConfig,
    OptimizerOpts, QuadratureSpec, RateResult, Scheme, SweepGrid, SweepRecord, SystemParams,
};

use configfile::FileConfig;
use report::{fmt_float, Cell, Report};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidParameter(_) => CliError::Config(e.to_string()),
            CoreError::QuadratureNonConvergence { .. } | CoreError::Consistency(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Numerical(_) | CliError::Io(_) => ExitCode::from(1),
        }
    }
}

/// `start:stop:step` grid argument.
#[derive(Debug, Clone, Copy)]
struct GridArg {
    start: f64,
    stop: f64,
    step: f64,
}

impl FromStr for GridArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:step, got `{s}`"));
        }
        let parse = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("cannot parse `{p}` as a number in `{s}`"))
        };
        Ok(GridArg {
            start: parse(parts[0])?,
            stop: parse(parts[1])?,
            step: parse(parts[2])?,
        })
    }
}

impl GridArg {
    fn to_grid(self) -> Result<SweepGrid, CliError> {
        SweepGrid::new(self.start, self.stop, self.step).map_err(CliError::from)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountModelArg {
    Poisson,
    #[value(name = "fixed-expected")]
    FixedExpected,
}

impl FromStr for CountModelArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "poisson" => Ok(CountModelArg::Poisson),
            "fixed-expected" => Ok(CountModelArg::FixedExpected),
            other => Err(format!("unknown count model `{other}`")),
        }
    }
}

impl FromStr for FormatArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(FormatArg::Csv),
            "json" => Ok(FormatArg::Json),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Cr,
    Plnc,
    Both,
}

impl FromStr for SchemeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cr" => Ok(SchemeArg::Cr),
            "plnc" => Ok(SchemeArg::Plnc),
            "both" => Ok(SchemeArg::Both),
            other => Err(format!("unknown scheme `{other}`")),
        }
    }
}

impl SchemeArg {
    fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeArg::Cr => vec![Scheme::Cr],
            SchemeArg::Plnc => vec![Scheme::Plnc],
            SchemeArg::Both => vec![Scheme::Cr, Scheme::Plnc],
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "plnc",
    version,
    about = "End-to-end rate per unit area of two-way relaying (PLNC vs. CR) \
             under interference and spatial reservation"
)]
struct Cli {
    #[command(flatten)]
    common: CommonOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct CommonOpts {
    /// Config file with `key = value` lines; flags override.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format (default csv).
    #[arg(long, global = true)]
    format: Option<FormatArg>,
    /// Output path (default standard output).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Present INR columns in dB instead of linear.
    #[arg(long, global = true)]
    db: bool,
    /// Cap worker parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for Monte Carlo substreams (default 42).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo placements (default 100000).
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Interferer count model (default poisson).
    #[arg(long, global = true)]
    count_model: Option<CountModelArg>,
    /// Network radius R (default 10).
    #[arg(long, global = true)]
    big_r: Option<f64>,
}

#[derive(Args, Debug, Clone)]
struct LinkOpts {
    /// Link SNR in dB (sets the node spacing; exclusive with --r-n).
    #[arg(long)]
    snr_db: Option<f64>,
    /// Node spacing (normalized distance; exclusive with --snr-db).
    #[arg(long)]
    r_n: Option<f64>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Print the full INR breakdown for one configuration.
    Inr {
        #[command(flatten)]
        link: LinkOpts,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        r0: Option<f64>,
    },
    /// End-to-end rate per unit area for one configuration.
    Rate {
        #[command(flatten)]
        link: LinkOpts,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        r0: Option<f64>,
        /// cr, plnc or both (default both).
        #[arg(long)]
        scheme: Option<SchemeArg>,
    },
    /// Finite- vs infinite-network INR against the network radius.
    ValidateRadius {
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        lambda: Option<f64>,
        /// Network-radius grid start:stop:step (default 1:10:0.25).
        #[arg(long)]
        r_grid: Option<GridArg>,
    },
    /// Rate of both schemes against the reserved radius.
    SweepR0 {
        #[command(flatten)]
        link: LinkOpts,
        #[arg(long)]
        lambda: Option<f64>,
        /// Reserved-radius grid start:stop:step
        /// (default 1.02*r_n : 1.0 : 0.005).
        #[arg(long)]
        r0_grid: Option<GridArg>,
    },
    /// Best rate (with optimized r0) against the interferer density.
    SweepDensity {
        #[command(flatten)]
        link: LinkOpts,
        /// Density grid start:stop:step (default 0.1:10:0.1).
        #[arg(long)]
        lambda_grid: Option<GridArg>,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Optimize the reserved radius for one density.
    OptimizeR0 {
        #[command(flatten)]
        link: LinkOpts,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        scheme: Option<SchemeArg>,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Density at which optimized PLNC and CR rates cross.
    Crossover {
        #[command(flatten)]
        link: LinkOpts,
        /// Density search range lower bound (default 0.1).
        #[arg(long)]
        lambda_min: Option<f64>,
        /// Density search range upper bound (default 10).
        #[arg(long)]
        lambda_max: Option<f64>,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Compare every analytic INR quantity against the Monte Carlo oracle.
    ///
    /// Without configuration flags this runs the default six-point grid;
    /// with --lambda/--r0 (and a link) it validates a single configuration.
    McValidate {
        #[command(flatten)]
        link: LinkOpts,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        r0: Option<f64>,
    },
}

#[derive(Args, Debug, Clone)]
struct SearchOpts {
    /// r0 search range lower bound (default 1.02 * r_n).
    #[arg(long)]
    r0_min: Option<f64>,
    /// r0 search range upper bound (default 1.0).
    #[arg(long)]
    r0_max: Option<f64>,
    /// Coarse scan step of the optimizer (default 0.005).
    #[arg(long)]
    r0_step: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

// Everything resolved: CLI flags merged over the config file, defaults
// applied last.
struct Resolved {
    format: FormatArg,
    output: Option<PathBuf>,
    db: bool,
    seed: u64,
    trials: u64,
    count_model: CountModel,
    big_r: f64,
    threads: Option<usize>,
    file: FileConfig,
}

impl Resolved {
    fn new(common: &CommonOpts) -> Result<Self, CliError> {
        let file = match &common.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let format = file
            .merge(common.format, "format")?
            .unwrap_or(FormatArg::Csv);
        let output = match &common.output {
            Some(path) => Some(path.clone()),
            None => file.get("output").map(PathBuf::from),
        };
        let db = file.merge_flag(common.db, "db")?;
        let seed = file.merge(common.seed, "seed")?.unwrap_or(42);
        let trials = file.merge(common.trials, "trials")?.unwrap_or(100_000);
        let count_model = match file
            .merge(common.count_model, "count-model")?
            .unwrap_or(CountModelArg::Poisson)
        {
            CountModelArg::Poisson => CountModel::Poisson,
            CountModelArg::FixedExpected => CountModel::FixedExpected,
        };
        let big_r = file.merge(common.big_r, "big-r")?.unwrap_or(10.0);
        let threads = file.merge(common.threads, "threads")?;
        Ok(Self {
            format,
            output,
            db,
            seed,
            trials,
            count_model,
            big_r,
            threads,
            file,
        })
    }

    fn mc_config(&self) -> McConfig {
        McConfig {
            trials: self.trials,
            seed: self.seed,
            count_model: self.count_model,
        }
    }

    // Base key/value pairs every report header carries. Worker parallelism
    // is absent: it must never affect the output, so it is not part of the
    // resolved configuration.
    fn config_pairs(&self, cmd: &str) -> Vec<(String, String)> {
        vec![
            ("tool".into(), format!("plnc v{}", env!("CARGO_PKG_VERSION"))),
            ("cmd".into(), cmd.into()),
            ("schema".into(), "v1".into()),
            ("format".into(), format!("{:?}", self.format).to_lowercase()),
            (
                "output".into(),
                self.output
                    .as_ref()
                    .map_or("stdout".into(), |p| p.display().to_string()),
            ),
            ("db".into(), self.db.to_string()),
            ("big-r".into(), fmt_float(self.big_r)),
            ("trials".into(), self.trials.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("count-model".into(), self.count_model.as_str().into()),
        ]
    }

    fn write(&self, report: &Report) -> Result<(), CliError> {
        let emit = |out: &mut dyn std::io::Write| match self.format {
            FormatArg::Csv => report.write_csv(out),
            FormatArg::Json => report.write_json(out),
        };
        match &self.output {
            None => emit(&mut std::io::stdout().lock()),
            Some(path) => {
                let mut file = std::fs::File::create(path)
                    .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
                emit(&mut file)
            }
        }
        .map_err(|e| CliError::Io(format!("write failed: {e}")))
    }

    /// INR columns honor the --db presentation flag.
    fn inr_cell(&self, linear: f64) -> Cell {
        if self.db {
            Cell::Float(linear_to_db(linear))
        } else {
            Cell::Float(linear)
        }
    }
}

// Resolve the mutually exclusive snr-db / r-n pair into (snr_db, r_n).
fn resolve_link(link: &LinkOpts, file: &FileConfig) -> Result<(f64, f64), CliError> {
    let snr_db = file.merge(link.snr_db, "snr-db")?;
    let r_n = file.merge(link.r_n, "r-n")?;
    match (snr_db, r_n) {
        (Some(_), Some(_)) => Err(CliError::Config(
            "exactly one of --snr-db / --r-n must be given, not both".into(),
        )),
        (None, None) => Err(CliError::Config(
            "a link is required: give --snr-db or --r-n".into(),
        )),
        (Some(db), None) => Ok((db, plnc_core::distance_from_snr_db(db))),
        (None, Some(r_n)) => {
            // NaN must fail the check too.
            #[allow(clippy::neg_cmp_op_on_partial_ord)]
            if !(r_n > 0.0) {
                return Err(CliError::Config(format!(
                    "node spacing r-n must be positive; got {r_n}"
                )));
            }
            Ok((-40.0 * r_n.log10(), r_n))
        }
    }
}

fn require(value: Option<f64>, what: &str) -> Result<f64, CliError> {
    value.ok_or_else(|| CliError::Config(format!("missing required value: {what}")))
}

fn resolve_search(
    search: &SearchOpts,
    file: &FileConfig,
    r_n: f64,
) -> Result<((f64, f64), OptimizerOpts), CliError> {
    let lo = file
        .merge(search.r0_min, "r0-min")?
        .unwrap_or(1.02 * r_n);
    let hi = file.merge(search.r0_max, "r0-max")?.unwrap_or(1.0);
    let step = file.merge(search.r0_step, "r0-step")?.unwrap_or(0.005);
    let opts = OptimizerOpts {
        grid_step: step,
        quad: QuadratureSpec::default(),
    };
    Ok(((lo, hi), opts))
}

fn rate_cells(resolved: &Resolved, r: &RateResult) -> Vec<Cell> {
    vec![
        Cell::Float(r.rate_per_area),
        resolved.inr_cell(r.inr_used.at_relay),
        resolved.inr_cell(r.inr_used.at_end),
        Cell::Float(r.reserved_area),
    ]
}

fn sweep_rows(resolved: &Resolved, records: &[SweepRecord], with_best_r0: bool) -> Vec<Vec<Cell>> {
    records
        .iter()
        .map(|rec| {
            let mut row = vec![Cell::Float(rec.x), Cell::text(rec.scheme.as_str())];
            if with_best_r0 {
                row.push(match rec.best_r0 {
                    Some(r0) => Cell::Float(r0),
                    None => Cell::Empty,
                });
            }
            row.extend(rate_cells(resolved, &rec.result));
            row
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    let resolved = Resolved::new(&cli.common)?;
    if let Some(threads) = resolved.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let quad = QuadratureSpec::default();

    let report = match &cli.command {
        Command::Inr { link, lambda, r0 } => {
            let (snr_db, r_n) = resolve_link(link, &resolved.file)?;
            let lambda = require(resolved.file.merge(*lambda, "lambda")?, "--lambda")?;
            let r0 = require(resolved.file.merge(*r0, "r0")?, "--r0")?;
            let params = SystemParams::new(r_n, r0, resolved.big_r, lambda)?;
            params.require_min_reserved_radius()?;
            let breakdown = plnc_core::interference::inr_breakdown(&params, &quad)?;
            let mut config = resolved.config_pairs("inr");
            config.push(("snr-db".into(), fmt_float(snr_db)));
            config.push(("r-n".into(), fmt_float(r_n)));
            config.push(("lambda".into(), fmt_float(lambda)));
            config.push(("r0".into(), fmt_float(r0)));
            Report {
                config,
                columns: vec!["quantity", "value"],
                rows: plnc_core::InrQuantity::ALL
                    .iter()
                    .map(|q| {
                        vec![
                            Cell::text(q.as_str()),
                            resolved.inr_cell(breakdown.get(*q)),
                        ]
                    })
                    .collect(),
            }
        }

        Command::Rate {
            link,
            lambda,
            r0,
            scheme,
        } => {
            let (snr_db, r_n) = resolve_link(link, &resolved.file)?;
            let lambda = require(resolved.file.merge(*lambda, "lambda")?, "--lambda")?;
            let r0 = require(resolved.file.merge(*r0, "r0")?, "--r0")?;
            let scheme = resolved
                .file
                .merge(*scheme, "scheme")?
                .unwrap_or(SchemeArg::Both);
            let params = SystemParams::new(r_n, r0, resolved.big_r, lambda)?;
            params.require_min_reserved_radius()?;
            let mut rows = Vec::new();
            for s in scheme.schemes() {
                let result = match s {
                    Scheme::Cr => plnc_core::rate::end_to_end_rate_cr(&params, &quad)?,
                    Scheme::Plnc => plnc_core::rate::end_to_end_rate_plnc(&params, &quad)?,
                };
                rows.push(vec![
                    Cell::text(s.as_str()),
                    Cell::Float(result.rate_per_area),
                    Cell::Float(result.rate_a_to_c),
                    Cell::Float(result.rate_c_to_a),
                    resolved.inr_cell(result.inr_used.at_relay),
                    resolved.inr_cell(result.inr_used.at_end),
                    Cell::Float(result.reserved_area),
                ]);
            }
            let mut config = resolved.config_pairs("rate");
            config.push(("snr-db".into(), fmt_float(snr_db)));
            config.push(("r-n".into(), fmt_float(r_n)));
            config.push(("lambda".into(), fmt_float(lambda)));
            config.push(("r0".into(), fmt_float(r0)));
            Report {
                config,
                columns: vec![
                    "scheme",
                    "rate_per_area",
                    "rate_a_to_c",
                    "rate_c_to_a",
                    "inr_relay",
                    "inr_end",
                    "area",
                ],
                rows,
            }
        }

        Command::ValidateRadius { r0, lambda, r_grid } => {
            let r0 = require(resolved.file.merge(*r0, "r0")?, "--r0")?;
            let lambda = require(resolved.file.merge(*lambda, "lambda")?, "--lambda")?;
            let grid = match resolved.file.merge(*r_grid, "r-grid")? {
                Some(g) => g.to_grid()?,
                None => SweepGrid::new(1.0, 10.0, 0.25)?,
            };
            let records = validate_radius_sweep(r0, lambda, &grid)?;
            let mut config = resolved.config_pairs("validate-radius");
            config.push(("r0".into(), fmt_float(r0)));
            config.push(("lambda".into(), fmt_float(lambda)));
            config.push(("r-grid".into(), format!("{}:{}:{}", grid.start, grid.stop, grid.step)));
            Report {
                config,
                columns: vec!["big_r", "inr_finite", "inr_unbounded"],
                rows: records
                    .iter()
                    .map(|r| {
                        vec![
                            Cell::Float(r.big_r),
                            resolved.inr_cell(r.inr_finite),
                            resolved.inr_cell(r.inr_unbounded),
                        ]
                    })
                    .collect(),
            }
        }

        Command::SweepR0 {
            link,
            lambda,
            r0_grid,
        } => {
            let (snr_db, r_n) = resolve_link(link, &resolved.file)?;
            let lambda = require(resolved.file.merge(*lambda, "lambda")?, "--lambda")?;
            let grid = match resolved.file.merge(*r0_grid, "r0-grid")? {
                Some(g) => g.to_grid()?,
                None => default_r0_grid(snr_db)?,
            };
            let records = sweep_reserved_radius(snr_db, lambda, resolved.big_r, &grid, &quad)?;
            let mut config = resolved.config_pairs("sweep-r0");
            config.push(("snr-db".into(), fmt_float(snr_db)));
            config.push(("r-n".into(), fmt_float(r_n)));
            config.push(("lambda".into(), fmt_float(lambda)));
            config.push(("r0-grid".into(), format!("{}:{}:{}", grid.start, grid.stop, grid.step)));
            Report {
                config,
                columns: vec!["r0", "scheme", "rate_per_area", "inr_relay", "inr_end", "area"],
                rows: sweep_rows(&resolved, &records, false),
            }
        }

        Command::SweepDensity {
            link,
            lambda_grid,
            search,
        } => {
            let (snr_db, r_n) = resolve_link(link, &resolved.file)?;
            let grid = match resolved.file.merge(*lambda_grid, "lambda-grid")? {
                Some(g) => g.to_grid()?,
                None => default_lambda_grid()?,
            };
            let (range, opts) = resolve_search(search, &resolved.file, r_n)?;
            let records = sweep_density(snr_db, resolved.big_r, &grid, range, &opts)?;
            let mut config = resolved.config_pairs("sweep-density");
            config.push(("snr-db".into(), fmt_float(snr_db)));
            config.push(("r-n".into(), fmt_float(r_n)));
            config.push((
                "lambda-grid".into(),
                format!("{}:{}:{}", grid.start, grid.stop, grid.step),
            ));
            config.push(("r0-min".into(), fmt_float(range.0)));
            config.push(("r0-max".into(), fmt_float(range.1)));
            config.push(("r0-step".into(), fmt_float(opts.grid_step)));
            Report {
                config,
                columns: vec![
                    "lambda",
                    "scheme",
                    "best_r0",
                    "rate_per_area",
                    "inr_relay",
                    "inr_end",
                    "area",
                ],
                rows: sweep_rows(&resolved, &records, true),
            }
        }

        Command::OptimizeR0 {
            link,
            lambda,
            scheme,
            search,
        } => {
            let (snr_db, r_n) = resolve_link(link, &resolved.file)?;
            let lambda = require(resolved.file.merge(*lambda, "lambda")?, "--lambda")?;
            let scheme = resolved
                .file
                .merge(*scheme, "scheme")?
                .unwrap_or(SchemeArg::Both);
            let (range, opts) = resolve_search(search, &resolved.file, r_n)?;
            let mut rows = Vec::new();
            for s in scheme.schemes() {
                let (best_r0, best) =
                    optimize_r0(snr_db, lambda, resolved.big_r, s, range, &opts)?;
                let mut row = vec![Cell::text(s.as_str()), Cell::Float(best_r0)];
                row.extend(rate_cells(&resolved, &best));
                rows.push(row);
            }
            let mut config = resolved.config_pairs("optimize-r0");
            config.push(("snr-db".into(), fmt_float(snr_db)));
            config.push(("r-n".into(), fmt_float(r_n)));
            config.push(("lambda".into(), fmt_float(lambda)));
            config.push(("r0-min".into(), fmt_float(range.0)));
            config.push(("r0-max".into(), fmt_float(range.1)));
            config.push(("r0-step".into(), fmt_float(opts.grid_step)));
            Report {
                config,
                columns: vec![
                    "scheme",
                    "best_r0",
                    "rate_per_area",
                    "inr_relay",
                    "inr_end",
                    "area",
                ],
                rows,
            }
        }

        Command::Crossover {
            link,
            lambda_min,
            lambda_max,
            search,
        } => {
            let (snr_db, r_n) = resolve_link(link, &resolved.file)?;
            let lo = resolved
                .file
                .merge(*lambda_min, "lambda-min")?
                .unwrap_or(0.1);
            let hi = resolved
                .file
                .merge(*lambda_max, "lambda-max")?
                .unwrap_or(10.0);
            let (range, opts) = resolve_search(search, &resolved.file, r_n)?;
            let outcome =
                find_crossover_density(snr_db, resolved.big_r, (lo, hi), range, &opts)?;
            let row = match outcome {
                CrossoverOutcome::Crossover { lambda_star } => vec![
                    Cell::Float(snr_db),
                    Cell::Float(lo),
                    Cell::Float(hi),
                    Cell::text("crossover"),
                    Cell::Float(lambda_star),
                    Cell::Empty,
                ],
                CrossoverOutcome::NoCrossover { dominant } => vec![
                    Cell::Float(snr_db),
                    Cell::Float(lo),
                    Cell::Float(hi),
                    Cell::text("no-crossover"),
                    Cell::Empty,
                    Cell::text(dominant.as_str()),
                ],
            };
            let mut config = resolved.config_pairs("crossover");
            config.push(("snr-db".into(), fmt_float(snr_db)));
            config.push(("r-n".into(), fmt_float(r_n)));
            config.push(("lambda-min".into(), fmt_float(lo)));
            config.push(("lambda-max".into(), fmt_float(hi)));
            config.push(("r0-min".into(), fmt_float(range.0)));
            config.push(("r0-max".into(), fmt_float(range.1)));
            Report {
                config,
                columns: vec![
                    "snr_db",
                    "lambda_min",
                    "lambda_max",
                    "result",
                    "lambda_star",
                    "dominant",
                ],
                rows: vec![row],
            }
        }

        Command::McValidate { link, lambda, r0 } => {
            let lambda = resolved.file.merge(*lambda, "lambda")?;
            let r0 = resolved.file.merge(*r0, "r0")?;
            let link_given = link.snr_db.is_some()
                || link.r_n.is_some()
                || resolved.file.get("snr-db").is_some()
                || resolved.file.get("r-n").is_some();
            let mut config = resolved.config_pairs("mc-validate");
            let grid = if link_given || lambda.is_some() || r0.is_some() {
                let (snr_db, r_n) = resolve_link(link, &resolved.file)?;
                let lambda = require(lambda, "--lambda")?;
                let r0 = require(r0, "--r0")?;
                let params = SystemParams::new(r_n, r0, resolved.big_r, lambda)?;
                params.require_min_reserved_radius()?;
                config.push(("grid".into(), "single".into()));
                config.push(("snr-db".into(), fmt_float(snr_db)));
                config.push(("r-n".into(), fmt_float(r_n)));
                config.push(("lambda".into(), fmt_float(lambda)));
                config.push(("r0".into(), fmt_float(r0)));
                vec![params]
            } else {
                config.push(("grid".into(), "default-6".into()));
                default_validation_grid()?
            };
            let rows = compare_with_analytic(&grid, &resolved.mc_config(), &quad)?;
            Report {
                config,
                columns: vec![
                    "snr_db",
                    "lambda",
                    "r0",
                    "quantity",
                    "analytic",
                    "mc_mean",
                    "mc_stderr",
                    "z",
                    "pass",
                ],
                rows: rows
                    .iter()
                    .map(|r| {
                        vec![
                            Cell::Float(r.snr_db),
                            Cell::Float(r.lambda),
                            Cell::Float(r.r0),
                            Cell::text(r.quantity.as_str()),
                            resolved.inr_cell(r.analytic),
                            resolved.inr_cell(r.mc_mean),
                            Cell::Float(r.mc_std_error),
                            Cell::Float(r.z),
                            Cell::Bool(r.pass),
                        ]
                    })
                    .collect(),
            }
        }
    };

    resolved.write(&report)
}
