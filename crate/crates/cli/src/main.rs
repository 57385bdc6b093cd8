use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zafa_cli::{
    execute, verify_suite, write_report, AxiomTolerances, CacheMode, CliError, Format, HypergroupSampling, Input,
    Outcome, RunConfig, Su2Sweep, Task, VerifyConfig,
};
use zafa_core::numeric::Tolerances;

#[derive(Parser)]
#[command(
    name = "zafa",
    version,
    about = "Character tables, amenability constants and hypergroup checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one task over catalog groups and spec files.
    Run(RunArgs),
    /// Run the cross-module verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Output {
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct ToleranceArgs {
    /// Orthogonality residual accepted for a character table.
    #[arg(long, default_value_t = Tolerances::default().table)]
    tol: f64,
    /// Distance from an integer accepted for degrees and multiplicities.
    #[arg(long, default_value_t = Tolerances::default().integrality)]
    integrality_tol: f64,
    #[arg(long, default_value_t = AxiomTolerances::default().normalization)]
    normalization_tol: f64,
    #[arg(long, default_value_t = AxiomTolerances::default().associativity)]
    associativity_tol: f64,
}

impl ToleranceArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            table: self.tol,
            integrality: self.integrality_tol,
            ..Tolerances::default()
        }
    }

    fn axioms(&self) -> AxiomTolerances {
        AxiomTolerances {
            normalization: self.normalization_tol,
            associativity: self.associativity_tol,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    task: Task,
    /// JSON spec file (one spec or an array); repeatable.
    #[arg(long)]
    spec: Vec<PathBuf>,
    /// Comma-separated catalog names such as `S3,Q8,D4xZ2`.
    #[arg(long, value_delimiter = ',')]
    catalog: Vec<String>,
    #[command(flatten)]
    output: Output,
    #[command(flatten)]
    tol: ToleranceArgs,
    /// Table cache directory; defaults to $ZAFA_CACHE_DIR, then ./.zafa-cache.
    #[arg(long, conflicts_with = "no_cache")]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
    /// Record wall-clock times (reports are then no longer reproducible).
    #[arg(long)]
    timings: bool,
    /// Highest SU(2) level in a su2-deriv sweep.
    #[arg(long, default_value_t = Su2Sweep::default().l_max)]
    l_max: u32,
    /// Number of angles in a su2-deriv sweep.
    #[arg(long, default_value_t = Su2Sweep::default().points)]
    points: usize,
    /// Indices checked for infinite hypergroups.
    #[arg(long, default_value_t = HypergroupSampling::default().support)]
    support: usize,
    /// Sampled associativity triples per hypergroup.
    #[arg(long, default_value_t = HypergroupSampling::default().triples)]
    triples: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Comma-separated catalog names; the built-in catalog when omitted.
    /// Pass an empty string to check nothing.
    #[arg(long, value_delimiter = ',')]
    catalog: Option<Vec<String>>,
    #[command(flatten)]
    output: Output,
    #[command(flatten)]
    tol: ToleranceArgs,
}

fn emit(output: &Output, bytes: &[u8]) -> Result<(), CliError> {
    match &output.out {
        Some(path) => write_report(path, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Write(PathBuf::from("<stdout>"), e)),
    }
}

fn run_command(args: RunArgs) -> Result<u8, CliError> {
    let inputs = args
        .catalog
        .iter()
        .filter(|n| !n.trim().is_empty())
        .map(|n| Input::Catalog(n.trim().to_string()))
        .chain(args.spec.iter().cloned().map(Input::SpecFile))
        .collect();
    let mut config = RunConfig::new(args.task, inputs);
    config.format = args.output.format;
    config.tolerances = args.tol.tolerances();
    config.axioms = args.tol.axioms();
    config.su2 = Su2Sweep {
        l_max: args.l_max,
        points: args.points,
    };
    config.hypergroups.support = args.support;
    config.hypergroups.triples = args.triples;
    config.timings = args.timings;
    config.cache = match (args.no_cache, args.cache_dir) {
        (true, _) => CacheMode::Disabled,
        (false, Some(dir)) => CacheMode::Dir(dir),
        (false, None) => CacheMode::FromEnv,
    };
    config.out = args.output.out;

    let report = execute(&config)?;
    for row in &report.rows {
        if let Outcome::Error { message } = &row.outcome {
            eprintln!("{}: {message}", row.input);
        }
    }
    Ok(report.exit_code())
}

fn verify_command(args: VerifyArgs) -> Result<u8, CliError> {
    let mut config = VerifyConfig::default();
    if let Some(names) = args.catalog {
        config.catalog = names
            .into_iter()
            .map(|n| n.trim().to_string())
            .filter(|n| !n.is_empty())
            .collect();
    }
    config.tolerances = args.tol.tolerances();
    config.axioms = args.tol.axioms();
    let summary = verify_suite(&config);
    let bytes = match args.output.format {
        Format::Json => {
            let mut b = serde_json::to_vec_pretty(&summary).map_err(|e| CliError::Encode(e.to_string()))?;
            b.push(b'\n');
            b
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let encode = |e: csv::Error| CliError::Encode(e.to_string());
            w.write_record(["check", "subject", "residual", "tolerance", "passed", "note"])
                .map_err(encode)?;
            for c in &summary.checks {
                w.write_record([
                    c.check.to_string(),
                    c.subject.clone(),
                    c.residual.map(|r| r.to_string()).unwrap_or_default(),
                    c.tolerance.to_string(),
                    c.passed.to_string(),
                    c.note.clone().unwrap_or_default(),
                ])
                .map_err(encode)?;
            }
            w.into_inner().map_err(|e| CliError::Encode(e.to_string()))?
        }
    };
    emit(&args.output, &bytes)?;
    eprintln!(
        "{} checks, max residual {:e}: {}",
        summary.checks.len(),
        summary.max_residual,
        if summary.passed { "pass" } else { "FAIL" }
    );
    Ok(u8::from(!summary.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run_command(args),
        Command::Verify(args) => verify_command(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
