use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};
use pidkit::game::{run_stake_game, StakeGameSpec};
use pidkit::io::{self, IoError};
use pidkit::registry;
use pidkit::report::{self, Format, PointwiseTable};
use pidkit::sweep;
use pidkit_core::measures::{iccs, pid};
use pidkit_core::{Error, IccsVariant, JointDistribution, McOptions, MeasureChoice, SolverOptions};
use serde_json::json;

#[derive(Parser)]
#[command(name = "pidkit", version, about = "Partial information decomposition of discrete and Gaussian systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose one system.
    Pid(PidArgs),
    /// Run a parameter sweep and emit one row per grid point.
    Sweep(SweepArgs),
    /// Play the stake game on a two-predictor binary system.
    Game(GameArgs),
    /// List the example registry.
    Examples {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Convert a distribution file between the text and JSON forms.
    Convert {
        #[arg(long)]
        input: PathBuf,
        /// Target form; defaults to the other form.
        #[arg(long, value_enum)]
        to: Option<FileForm>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FileForm {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureArg {
    Iccs,
    Imin,
    Broja,
    Mmi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Game,
    Decision,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    Predpred,
    Gaussian,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SystemArg {
    /// Registry name, e.g. `and` or `predpred(-0.4)`.
    #[arg(long)]
    example: Option<String>,
    /// Distribution file (text or JSON).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = 100_000)]
    max_iter: usize,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions { tolerance: self.tol, max_iterations: self.max_iter, verbose: log::log_enabled!(log::Level::Debug) }
    }
}

#[derive(Args)]
struct PidArgs {
    #[command(flatten)]
    system: SystemArg,
    #[arg(long, value_enum, default_value_t = MeasureArg::Iccs)]
    measure: MeasureArg,
    #[arg(long, value_enum, default_value_t = VariantArg::Game)]
    variant: VariantArg,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Also emit the pointwise terms of every I_ccs evaluation.
    #[arg(long)]
    pointwise: bool,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(value_enum)]
    kind: SweepKind,
    /// Measures for the predpred sweep; repeatable. Defaults to iccs and broja.
    #[arg(long, value_enum)]
    measure: Vec<MeasureArg>,
    #[arg(long, value_enum, default_value_t = VariantArg::Game)]
    variant: VariantArg,
    /// predpred grid start.
    #[arg(long, default_value_t = registry::PREDPRED_RANGE.0, allow_negative_numbers = true)]
    from: f64,
    /// predpred grid end (included).
    #[arg(long, default_value_t = registry::PREDPRED_RANGE.1, allow_negative_numbers = true)]
    to: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    /// Gaussian correlation of X1 and S.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    a: f64,
    /// Gaussian correlation of X2 and S.
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    c: f64,
    /// Number of evenly spaced feasible `b` values.
    #[arg(long, default_value_t = 9)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GameArgs {
    #[command(flatten)]
    system: SystemArg,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Failure classes, one per exit code.
enum Failure {
    Validation(String),
    NotConverged(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::NotConverged(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::NotConverged(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            e @ Error::NotConverged(_) => Failure::NotConverged(e.to_string()),
            e => Failure::Validation(e.to_string()),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Invalid(inner) => inner.into(),
            e @ IoError::File { .. } => Failure::Io(e.to_string()),
            e => Failure::Validation(e.to_string()),
        }
    }
}

fn measure_choice(m: MeasureArg, v: VariantArg) -> MeasureChoice {
    match m {
        MeasureArg::Iccs => MeasureChoice::Iccs(match v {
            VariantArg::Game => IccsVariant::Game,
            VariantArg::Decision => IccsVariant::Decision,
        }),
        MeasureArg::Imin => MeasureChoice::Imin,
        MeasureArg::Broja => MeasureChoice::Broja,
        MeasureArg::Mmi => MeasureChoice::Mmi,
    }
}

fn load_system(s: &SystemArg) -> Result<(String, JointDistribution), Failure> {
    match (&s.example, &s.input) {
        (Some(name), _) => Ok((name.clone(), registry::build(name)?)),
        (None, Some(path)) => Ok((path.display().to_string(), io::load_distribution(path)?)),
        (None, None) => Err(Failure::Validation("need --example or --input".into())),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

fn run_pid(args: &PidArgs) -> Result<(), Failure> {
    let (name, d) = load_system(&args.system)?;
    let measure = measure_choice(args.measure, args.variant);
    if args.pointwise && args.measure != MeasureArg::Iccs {
        return Err(Failure::Validation("--pointwise needs --measure iccs".into()));
    }
    let opts = args.solver.options();
    opts.validate()?;
    let result = pid(&d, measure, &opts)?;
    for (i, rep) in &result.reports {
        info!(
            "node {}: {} iterations, residual {:.3e}, objective {}",
            result.lattice.nodes()[*i],
            rep.iterations,
            rep.residual,
            rep.objective
        );
    }
    for w in &result.warnings {
        warn!("{w}");
    }
    let variant = match measure {
        MeasureChoice::Iccs(v) => v,
        _ => IccsVariant::Game,
    };
    let mut evaluations = Vec::new();
    if args.pointwise {
        for node in result.lattice.nodes().iter().filter(|n| n.len() > 1) {
            evaluations.push((node, iccs(&d, node, variant, &opts)?.table));
        }
    }
    let tables: Vec<PointwiseTable<'_>> =
        evaluations.iter().map(|(node, table)| PointwiseTable { node, table }).collect();
    emit(args.output.as_deref(), &report::pid_report(&name, &result, &tables, &d, args.format))
}

fn run_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let text = match args.kind {
        SweepKind::Predpred => {
            let opts = args.solver.options();
            opts.validate()?;
            let grid = sweep::step_grid(args.from, args.to, args.step)?;
            let measures: Vec<MeasureChoice> = if args.measure.is_empty() {
                vec![measure_choice(MeasureArg::Iccs, args.variant), MeasureChoice::Broja]
            } else {
                args.measure.iter().map(|&m| measure_choice(m, args.variant)).collect()
            };
            info!("predpred sweep over {} points", grid.len());
            let rows = sweep::predpred_sweep(&grid, &measures, &opts)?;
            match args.format {
                Format::Csv => report::predpred_csv(&rows),
                Format::Json => report::to_json_string(&report::predpred_json(&rows)),
                Format::Table => report::predpred_table(&rows),
            }
        }
        SweepKind::Gaussian => {
            if args.samples == 0 {
                return Err(Failure::Validation("--samples must be positive".into()));
            }
            let mc = McOptions { sample_count: args.samples, seed: args.seed, report_standard_error: true };
            let grid = sweep::gaussian_default_grid(args.a, args.c, args.points);
            info!("gaussian sweep a={} c={} over {} points", args.a, args.c, grid.len());
            let result = sweep::gaussian_sweep_parallel(args.a, args.c, &grid, &mc)?;
            for b in &result.skipped {
                warn!("skipped infeasible b = {b}");
            }
            match args.format {
                Format::Csv => report::gaussian_csv(&result),
                Format::Json => report::to_json_string(&report::gaussian_json(&result)),
                Format::Table => report::gaussian_table(&result),
            }
        }
    };
    emit(args.output.as_deref(), &text)
}

fn run_game(args: &GameArgs) -> Result<(), Failure> {
    let (name, d) = load_system(&args.system)?;
    let result = run_stake_game(&StakeGameSpec { distribution: d })?;
    emit(args.output.as_deref(), &report::game_report(&name, &result, args.format))
}

fn run_examples(format: Format) -> Result<(), Failure> {
    let text = match format {
        Format::Table => registry::NAMES.iter().map(|n| format!("{n:<14} {}\n", registry::describe(n))).collect(),
        Format::Csv => {
            let mut s = String::from("name,description\n");
            for n in registry::NAMES {
                s.push_str(&format!("{n},\"{}\"\n", registry::describe(n)));
            }
            s
        }
        Format::Json => report::to_json_string(&json!(registry::NAMES
            .iter()
            .map(|n| json!({ "name": n, "description": registry::describe(n) }))
            .collect::<Vec<_>>())),
    };
    emit(None, &text)
}

fn run_convert(input: &Path, to: Option<FileForm>, output: Option<&Path>) -> Result<(), Failure> {
    let text = io::read_text(input)?;
    let is_json = text.trim_start().starts_with('{');
    let d = io::parse_any(&text)?;
    let to = to.unwrap_or(if is_json { FileForm::Text } else { FileForm::Json });
    let out = match to {
        FileForm::Text => io::format_distribution(&d),
        FileForm::Json => {
            let mut s = serde_json::to_string_pretty(&io::to_json(&d)).expect("serialisable");
            s.push('\n');
            s
        }
    };
    emit(output, &out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PIDKIT_LOG", "warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match &cli.command {
        Command::Pid(args) => run_pid(args),
        Command::Sweep(args) => run_sweep(args),
        Command::Game(args) => run_game(args),
        Command::Examples { format } => run_examples(*format),
        Command::Convert { input, to, output } => run_convert(input, *to, output.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
