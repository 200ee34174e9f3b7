//! Seeded sweeps of every inequality and identity in the crate over random
//! matrix ensembles, with JSON-lines and CSV reports.
//!
//! A run is fully determined by its [`RunConfig`]. Trial `t` uses grid point
//! `t mod |grid|` at dimension `dims[(t / |grid|) mod |dims|]` and draws all
//! of its randomness from the stream keyed by `(seed, t, suite tag)`, so any
//! trial can be replayed on its own with [`replay_trial`].

mod grids;
mod output;
mod suites;

pub use grids::{default_grid, grid_listing, named_grid, GridPoint, GRID_NAMES};
pub use output::{write_report, Header, OutputFormat, CSV_COLUMNS};
pub use suites::{evaluate_trial, run_single, FRECHET_STEP, FRECHET_TOL};

use serde::{Deserialize, Serialize};

use crate::convexity::TargetKind;
use crate::deformed::{DeformParams, Regime, REGIME_TABLE};
use crate::ensemble::EnsembleKind;
use crate::error::{Error, Result};
use crate::frechet::QuadratureSpec;
use crate::trace::{Direction, InequalityReport, VARIANT_TABLE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntropySuite {
    Lemma,
    Bound,
    Limits,
}

impl EntropySuite {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lemma" => Ok(EntropySuite::Lemma),
            "bound" => Ok(EntropySuite::Bound),
            "limits" => Ok(EntropySuite::Limits),
            _ => Err(Error::Invalid(format!("unknown entropy suite `{s}` (lemma, bound, limits)"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EntropySuite::Lemma => "lemma",
            EntropySuite::Bound => "bound",
            EntropySuite::Limits => "limits",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrechetMethod {
    DividedDifference,
    Quadrature,
    Both,
}

impl FrechetMethod {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "dd" => Ok(FrechetMethod::DividedDifference),
            "quad" => Ok(FrechetMethod::Quadrature),
            "both" => Ok(FrechetMethod::Both),
            _ => Err(Error::Invalid(format!("unknown method `{s}` (dd, quad, both)"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FrechetMethod::DividedDifference => "dd",
            FrechetMethod::Quadrature => "quad",
            FrechetMethod::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Suite {
    Main(Regime),
    Variant(Direction),
    Convexity(TargetKind),
    Entropy(EntropySuite),
    Frechet(FrechetMethod),
}

impl Suite {
    pub fn label(&self) -> String {
        match self {
            Suite::Main(c) => format!("main-{}", c.label()),
            Suite::Variant(d) => format!("variant-{}", d.label()),
            Suite::Convexity(k) => format!("convexity-{}", k.label()),
            Suite::Entropy(e) => format!("entropy-{}", e.label()),
            Suite::Frechet(m) => format!("frechet-{}", m.label()),
        }
    }

    /// Tag mixed into every per-trial random stream of this suite.
    pub(crate) fn stream_tag(&self) -> String {
        self.label()
    }

    /// Tolerance coefficient used when none is given.
    pub fn default_tol(&self) -> f64 {
        match self {
            Suite::Convexity(_) => crate::convexity::PROBE_TOL,
            Suite::Entropy(EntropySuite::Lemma) => 1e-10,
            Suite::Entropy(EntropySuite::Limits) => 1e-12,
            Suite::Frechet(_) => FRECHET_TOL,
            _ => crate::trace::DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub suite: Suite,
    pub dims: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub grid: Vec<GridPoint>,
    pub grid_name: String,
    pub quadrature: QuadratureSpec,
    pub tol: f64,
    /// Worker threads; 0 uses every available core.
    pub jobs: usize,
    pub ensemble: EnsembleKind,
}

impl RunConfig {
    /// Configuration with the suite's default grid and tolerance.
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            dims: vec![2, 3, 4, 8],
            trials: 1000,
            seed: 42,
            grid: default_grid(&suite),
            grid_name: "default".into(),
            quadrature: QuadratureSpec::default(),
            tol: suite.default_tol(),
            jobs: 0,
            ensemble: EnsembleKind::GaussianHermitian,
        }
    }

    pub fn with_grid(mut self, name: &str) -> Result<Self> {
        self.grid = named_grid(&self.suite, name)?;
        self.grid_name = name.into();
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::Invalid("dims must be a nonempty list of positive integers".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::Invalid("parameter grid is empty".into()));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(Error::Invalid(format!("tolerance must be nonnegative, got {}", self.tol)));
        }
        for pt in &self.grid {
            match self.suite {
                Suite::Main(case) => {
                    DeformParams::for_regime(case, pt.q, pt.r).map_err(|_| Error::Regime {
                        q: pt.q,
                        r: pt.r,
                        regime: case.label().into(),
                        table: REGIME_TABLE.into(),
                    })?;
                }
                Suite::Variant(d) if !d.admits(pt.q, pt.r) => {
                    return Err(Error::Regime {
                        q: pt.q,
                        r: pt.r,
                        regime: d.label().into(),
                        table: VARIANT_TABLE.into(),
                    });
                }
                Suite::Entropy(EntropySuite::Bound) if !(pt.q > 0.0 && pt.q <= 1.0) => {
                    return Err(Error::domain("entropy bound q", pt.q, "a value in (0, 1]"));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Grid point and dimension of trial `t`.
    pub fn layout(&self, trial: u64) -> (&GridPoint, usize) {
        let g = self.grid.len() as u64;
        let pt = &self.grid[(trial % g) as usize];
        let dim = self.dims[((trial / g) % self.dims.len() as u64) as usize];
        (pt, dim)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialError {
    pub trial: u64,
    pub seed: u64,
    pub dim: usize,
    pub error: String,
}

pub type TrialOutcome = std::result::Result<InequalityReport, TrialError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub suite: String,
    pub seed: u64,
    pub trials: u64,
    pub evaluated: usize,
    pub violations: usize,
    pub errors: usize,
    /// Lines without pass/fail semantics (exploratory convexity regions).
    pub exploratory: usize,
    pub worst_slack: Option<f64>,
    pub worst_trial: Option<u64>,
    /// Up to ten violating trial indices, for replay.
    pub violating_trials: Vec<u64>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.errors == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {} trials, {} evaluated, {} violations, {} errors",
            self.suite, self.trials, self.evaluated, self.violations, self.errors
        )?;
        if self.exploratory > 0 {
            write!(f, ", {} exploratory", self.exploratory)?;
        }
        if let (Some(s), Some(t)) = (self.worst_slack, self.worst_trial) {
            write!(f, "; worst slack {s:.3e} at trial {t}")?;
        }
        write!(f, "; {}", if self.passed() { "PASS" } else { "FAIL" })?;
        for t in &self.violating_trials {
            write!(f, "\n  replay: --seed {} trial {}", self.seed, t)?;
        }
        Ok(())
    }
}

pub const EXPLORATORY_NOTE: &str = "exploratory";

fn is_exploratory(rep: &InequalityReport) -> bool {
    rep.note.as_deref() == Some(EXPLORATORY_NOTE)
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub outcomes: Vec<TrialOutcome>,
    pub summary: Summary,
}

impl RunOutcome {
    pub fn reports(&self) -> impl Iterator<Item = &InequalityReport> {
        self.outcomes.iter().filter_map(|o| o.as_ref().ok())
    }
}

pub fn summarize(cfg: &RunConfig, outcomes: &[TrialOutcome]) -> Summary {
    let mut s = Summary {
        suite: cfg.suite.label(),
        seed: cfg.seed,
        trials: cfg.trials,
        evaluated: 0,
        violations: 0,
        errors: 0,
        exploratory: 0,
        worst_slack: None,
        worst_trial: None,
        violating_trials: Vec::new(),
    };
    for o in outcomes {
        match o {
            Ok(rep) => {
                s.evaluated += 1;
                if s.worst_slack.is_none_or(|w| rep.slack < w) {
                    s.worst_slack = Some(rep.slack);
                    s.worst_trial = Some(rep.trial);
                }
                if is_exploratory(rep) {
                    s.exploratory += 1;
                } else if !rep.holds {
                    s.violations += 1;
                    if s.violating_trials.len() < 10 {
                        s.violating_trials.push(rep.trial);
                    }
                }
            }
            Err(_) => s.errors += 1,
        }
    }
    s
}

fn run_one(cfg: &RunConfig, trial: u64) -> TrialOutcome {
    let (_, dim) = cfg.layout(trial);
    evaluate_trial(cfg, trial).map_err(|e| TrialError {
        trial,
        seed: cfg.seed,
        dim,
        error: e.to_string(),
    })
}

#[cfg(feature = "parallel")]
fn run_all(cfg: &RunConfig) -> Result<Vec<TrialOutcome>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Invalid(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| (0..cfg.trials).into_par_iter().map(|t| run_one(cfg, t)).collect()))
}

#[cfg(not(feature = "parallel"))]
fn run_all(cfg: &RunConfig) -> Result<Vec<TrialOutcome>> {
    Ok((0..cfg.trials).map(|t| run_one(cfg, t)).collect())
}

/// Validates `cfg` and evaluates all trials, in trial order.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let outcomes = run_all(cfg)?;
    let summary = summarize(cfg, &outcomes);
    Ok(RunOutcome { outcomes, summary })
}

/// Re-evaluates a single trial of `cfg`.
pub fn replay_trial(cfg: &RunConfig, trial: u64) -> Result<InequalityReport> {
    cfg.validate()?;
    evaluate_trial(cfg, trial)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suite: Suite) -> RunConfig {
        let mut cfg = RunConfig::new(suite);
        cfg.trials = 40;
        cfg.dims = vec![2, 3];
        cfg
    }

    #[test]
    fn layout_cycles_grid_then_dims() {
        let cfg = small(Suite::Main(Regime::MainIII));
        let g = cfg.grid.len() as u64;
        assert_eq!(cfg.layout(0).1, 2);
        assert_eq!(cfg.layout(g).1, 3);
        assert_eq!(cfg.layout(2 * g).1, 2);
        assert_eq!(cfg.layout(1).0, &cfg.grid[1]);
    }

    #[test]
    fn validation_errors() {
        let mut cfg = small(Suite::Main(Regime::MainIII));
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = small(Suite::Main(Regime::MainIII));
        cfg.dims = vec![2, 0];
        assert!(cfg.validate().is_err());
        let mut cfg = small(Suite::Main(Regime::MainV));
        cfg.grid = vec![GridPoint::new("v", 2.5, 3.0)];
        match cfg.validate() {
            Err(Error::Regime { table, .. }) => assert!(table.contains("iii")),
            other => panic!("{other:?}"),
        }
        let mut cfg = small(Suite::Variant(Direction::Convex));
        cfg.grid = vec![GridPoint::new("convex", 0.5, 1.0)];
        assert!(matches!(cfg.validate(), Err(Error::Regime { .. })));
    }

    #[test]
    fn every_default_grid_is_valid() {
        for suite in grids::all_suites() {
            RunConfig::new(suite).validate().unwrap();
            for name in GRID_NAMES {
                if let Ok(cfg) = RunConfig::new(suite).with_grid(name) {
                    cfg.validate().unwrap();
                }
            }
        }
    }

    #[test]
    fn every_suite_runs_clean() {
        for suite in grids::all_suites() {
            let out = run(&small(suite)).unwrap();
            assert!(out.summary.passed(), "{}: {:?}", suite.label(), out.outcomes.iter().find(|o| o.is_err() || !o.as_ref().unwrap().holds));
            let min = out.reports().map(|r| r.slack).fold(f64::INFINITY, f64::min);
            assert_eq!(out.summary.worst_slack, Some(min));
        }
    }

    #[test]
    fn report_cases_match_their_regimes() {
        for case in Regime::MAIN {
            let out = run(&small(Suite::Main(case))).unwrap();
            for rep in out.reports() {
                assert_eq!(rep.case, case.label());
                assert!(case.admits(rep.q, rep.r));
            }
        }
    }

    #[test]
    fn replay_is_bitwise_identical() {
        let mut cfg = small(Suite::Main(Regime::MainIV));
        cfg.jobs = 3;
        let out = run(&cfg).unwrap();
        for t in [0u64, 7, 39] {
            let again = replay_trial(&cfg, t).unwrap();
            let first = out.outcomes[t as usize].as_ref().unwrap();
            assert_eq!(again.slack.to_bits(), first.slack.to_bits());
            assert_eq!(&again, first);
        }
    }

    #[test]
    fn violations_are_counted_and_listed() {
        let cfg = small(Suite::Main(Regime::MainIII));
        let mut rep = InequalityReport::new("x", "iii", 1.5, 1.5, 0.0, 1.0, false);
        rep.trial = 5;
        let s = summarize(&cfg, &[Ok(rep)]);
        assert_eq!((s.violations, s.exit_code()), (1, 1));
        assert_eq!(s.violating_trials, vec![5]);
        assert!(s.to_string().contains("replay: --seed 42 trial 5"));
    }
}
