use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use deformed_pb::convexity::{Target, TargetKind};
use deformed_pb::deformed::Regime;
use deformed_pb::harness::{
    grid_listing, run, run_single, write_report, EntropySuite, FrechetMethod, GridPoint, Header, OutputFormat,
    RunConfig, Suite,
};
use deformed_pb::trace::Direction;
use deformed_pb::{HermitianMatrix, QuadratureSpec, Transform};

const USAGE_ERROR: u8 = 2;

/// Seeded numerical verification of deformed Peierls-Bogolyubov trace
/// inequalities, Fréchet differentials and Tsallis entropy bounds.
#[derive(Parser, Debug)]
#[command(name = "pbverify", version)]
struct Cli {
    /// Print the built-in parameter grids and exit.
    #[arg(long, global = true)]
    print_grids: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check one of the inequality families.
    #[command(subcommand)]
    Verify(Verify),
    /// Compare Fréchet differential methods.
    #[command(subcommand)]
    Frechet(FrechetCmd),
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Deformed Peierls-Bogolyubov inequality, one clause.
    Main {
        #[arg(long, value_parser = parse_case)]
        case: Regime,
        #[command(flatten)]
        shared: Shared,
    },
    /// Power-trace variant inequality.
    Variant {
        #[arg(long, value_enum)]
        direction: DirectionArg,
        #[command(flatten)]
        shared: Shared,
    },
    /// Midpoint convexity probes of trace functionals.
    Convexity {
        #[arg(long, value_parser = parse_target)]
        target: TargetKind,
        #[command(flatten)]
        shared: Shared,
    },
    /// Tsallis relative entropy checks.
    Entropy {
        #[arg(long, value_enum)]
        suite: EntropyArg,
        #[command(flatten)]
        shared: Shared,
    },
}

#[derive(Subcommand, Debug)]
enum FrechetCmd {
    /// Agreement of divided differences, quadrature and finite differences.
    Check {
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
        #[command(flatten)]
        shared: Shared,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DirectionArg {
    Convex,
    Concave,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EntropyArg {
    Lemma,
    Bound,
    Limits,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Dd,
    Quad,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Jsonl,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TransformArg {
    TanhSinh,
    Rational,
}

#[derive(Args, Debug)]
struct Shared {
    /// Matrix dimensions, cycled over trials.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,8")]
    dims: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Explicit q (or p) values; replaces the named grid.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    q: Vec<f64>,
    /// Explicit r values, combined with every --q value (default r = q).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    r: Vec<f64>,
    /// Named parameter grid (see --print-grids).
    #[arg(long, default_value = "default")]
    grid: String,
    /// Quadrature nodes at the first level.
    #[arg(long, default_value_t = 400)]
    nodes: usize,
    #[arg(long, value_enum, default_value = "tanh-sinh")]
    transform: TransformArg,
    /// Tolerance coefficient (suite default when omitted).
    #[arg(long, allow_hyphen_values = true)]
    tol: Option<f64>,
    /// Report file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: FormatArg,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Single-instance check on A from a JSON matrix literal file.
    #[arg(long, requires = "matrix_b")]
    matrix_a: Option<PathBuf>,
    #[arg(long, requires = "matrix_a")]
    matrix_b: Option<PathBuf>,
}

fn parse_case(s: &str) -> Result<Regime, String> {
    Regime::parse(s).ok_or_else(|| format!("unknown case `{s}` (expected i, ii, iii, iv or v)"))
}

fn parse_target(s: &str) -> Result<TargetKind, String> {
    TargetKind::parse(s).map_err(|e| e.to_string())
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE_ERROR)
}

fn custom_grid(suite: &Suite, qs: &[f64], rs: &[f64]) -> Result<Vec<GridPoint>, String> {
    if qs.is_empty() {
        return Err("--r needs --q".into());
    }
    let mut grid = Vec::new();
    for &q in qs {
        let rs: Vec<f64> = if rs.is_empty() { vec![q] } else { rs.to_vec() };
        for r in rs {
            let label = match suite {
                Suite::Main(case) => case.label().to_string(),
                Suite::Variant(d) => d.label().to_string(),
                Suite::Convexity(kind) => Target::new(*kind, q, r)
                    .row()
                    .map_or("unclassified", |row| row.label)
                    .to_string(),
                Suite::Entropy(e) => e.label().to_string(),
                Suite::Frechet(_) => "exp_q".to_string(),
            };
            grid.push(GridPoint::new(&label, q, r));
        }
    }
    Ok(grid)
}

fn build_config(suite: Suite, shared: &Shared) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::new(suite).with_grid(&shared.grid).map_err(|e| e.to_string())?;
    if !shared.q.is_empty() || !shared.r.is_empty() {
        cfg.grid = custom_grid(&suite, &shared.q, &shared.r)?;
        cfg.grid_name = "custom".into();
    }
    cfg.dims = shared.dims.clone();
    cfg.trials = shared.trials;
    cfg.seed = shared.seed;
    cfg.jobs = shared.jobs;
    if let Some(tol) = shared.tol {
        cfg.tol = tol;
    }
    let transform = match shared.transform {
        TransformArg::TanhSinh => Transform::TanhSinh,
        TransformArg::Rational => Transform::RationalMap,
    };
    cfg.quadrature = QuadratureSpec::new(shared.nodes, transform, QuadratureSpec::default().abs_tol)
        .map_err(|e| e.to_string())?;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn read_matrix(path: &PathBuf) -> Result<HermitianMatrix, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    HermitianMatrix::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn output(shared: &Shared) -> io::Result<Box<dyn Write>> {
    Ok(match &shared.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn execute(suite: Suite, shared: &Shared) -> ExitCode {
    let cfg = match build_config(suite, shared) {
        Ok(cfg) => cfg,
        Err(e) => return usage_error(e),
    };

    if let (Some(pa), Some(pb)) = (&shared.matrix_a, &shared.matrix_b) {
        let (a, b) = match (read_matrix(pa), read_matrix(pb)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return usage_error(e),
        };
        let reports = match run_single(&cfg, &a, &b) {
            Ok(r) => r,
            Err(e) => return usage_error(e),
        };
        let mut ok = true;
        let mut out = match output(shared) {
            Ok(o) => o,
            Err(e) => return usage_error(e),
        };
        for rep in &reports {
            ok &= rep.holds;
            if let Err(e) = serde_json::to_writer(&mut out, rep).map_err(std::io::Error::other).and_then(|()| writeln!(out)) {
                return usage_error(e);
            }
        }
        return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
    }

    let outcome = match run(&cfg) {
        Ok(o) => o,
        Err(e) => return usage_error(e),
    };
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let format = match shared.format {
        FormatArg::Jsonl => OutputFormat::JsonLines,
        FormatArg::Csv => OutputFormat::Csv,
    };
    let written = output(shared).and_then(|out| write_report(out, format, &Header::new(&cfg, timestamp), &outcome));
    if let Err(e) = written {
        return usage_error(format!("writing report: {e}"));
    }
    if shared.out.is_some() {
        println!("{}", outcome.summary);
    } else {
        eprintln!("{}", outcome.summary);
    }
    ExitCode::from(outcome.summary.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.print_grids {
        print!("{}", grid_listing());
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        return usage_error("a subcommand is required (try --help)");
    };
    match command {
        Command::Verify(v) => match v {
            Verify::Main { case, shared } => execute(Suite::Main(case), &shared),
            Verify::Variant { direction, shared } => {
                let d = match direction {
                    DirectionArg::Convex => Direction::Convex,
                    DirectionArg::Concave => Direction::Concave,
                };
                execute(Suite::Variant(d), &shared)
            }
            Verify::Convexity { target, shared } => execute(Suite::Convexity(target), &shared),
            Verify::Entropy { suite, shared } => {
                let s = match suite {
                    EntropyArg::Lemma => EntropySuite::Lemma,
                    EntropyArg::Bound => EntropySuite::Bound,
                    EntropyArg::Limits => EntropySuite::Limits,
                };
                execute(Suite::Entropy(s), &shared)
            }
        },
        Command::Frechet(FrechetCmd::Check { method, shared }) => {
            let m = match method {
                MethodArg::Dd => FrechetMethod::DividedDifference,
                MethodArg::Quad => FrechetMethod::Quadrature,
                MethodArg::Both => FrechetMethod::Both,
            };
            execute(Suite::Frechet(m), &shared)
        }
    }
}
