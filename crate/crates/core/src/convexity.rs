//! Randomized midpoint probing of convexity and concavity claims for trace
//! functionals. A probe can falsify a claim but never certify it.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::deformed::DomainConstraint;
use crate::ensemble::{general, generate, random_positive, EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::matrix::{trace_product, CMatrix, HermitianMatrix};
use crate::rng::TrialRng;
use crate::trace::{f_func, g_func, InequalityReport};

/// Relative size of a midpoint violation that counts as genuine.
pub const PROBE_TOL: f64 = 1e-7;

pub const PROBE_NOTE: &str = "midpoint probing can only falsify a convexity claim, never certify it";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TargetKind {
    /// `(Tr A^p)^{1/r}`
    TracePower,
    /// `(Tr B* A^p B)^{1/r}`
    TracePowerConjugated,
    /// `log_r Tr exp_q(A)`
    G,
    /// `log_r Tr B* exp_q(A) B`
    F,
}

impl TargetKind {
    pub const ALL: [TargetKind; 4] = [
        TargetKind::TracePower,
        TargetKind::TracePowerConjugated,
        TargetKind::G,
        TargetKind::F,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "trace-power" => Ok(TargetKind::TracePower),
            "trace-power-conj" => Ok(TargetKind::TracePowerConjugated),
            "G" | "g" => Ok(TargetKind::G),
            "F" | "f" => Ok(TargetKind::F),
            other => Err(Error::Invalid(format!(
                "unknown convexity target `{other}` (expected G, F, trace-power or trace-power-conj)"
            ))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TargetKind::TracePower => "trace-power",
            TargetKind::TracePowerConjugated => "trace-power-conj",
            TargetKind::G => "G",
            TargetKind::F => "F",
        }
    }

    /// Regime rows with a proven claim, plus exploratory rows.
    pub fn rows(self) -> &'static [RegimeRow] {
        match self {
            TargetKind::TracePower => &TRACE_POWER_ROWS,
            TargetKind::TracePowerConjugated => &TRACE_POWER_CONJ_ROWS,
            TargetKind::G => &G_ROWS,
            TargetKind::F => &F_ROWS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Curvature {
    Convex,
    Concave,
}

/// One row of a convexity classification table. `curvature == None` marks a
/// region with no claim, probed only to record the outcome.
#[derive(Debug, Clone, Copy)]
pub struct RegimeRow {
    pub label: &'static str,
    pub curvature: Option<Curvature>,
    pub admits: fn(f64, f64) -> bool,
    /// Representative `(parameter, r)` points used by default sweeps.
    pub grid: &'static [(f64, f64)],
}

impl RegimeRow {
    pub fn is_exploratory(&self) -> bool {
        self.curvature.is_none()
    }
}

use Curvature::{Concave, Convex};

static TRACE_POWER_ROWS: [RegimeRow; 5] = [
    RegimeRow {
        label: "trace-power-i",
        curvature: Some(Concave),
        admits: |p, r| r <= p && p < 0.0,
        grid: &[(-0.5, -0.5), (-1.0, -2.0), (-2.0, -3.0)],
    },
    RegimeRow {
        label: "trace-power-ii",
        curvature: Some(Convex),
        admits: |p, r| p < 0.0 && r > 0.0,
        grid: &[(-1.0, 1.0), (-0.5, 2.0), (-2.0, 0.5)],
    },
    RegimeRow {
        label: "trace-power-iii",
        curvature: Some(Concave),
        admits: |p, r| 0.0 < p && p <= 1.0 && r >= p,
        grid: &[(0.5, 0.5), (0.3, 1.0), (1.0, 2.0)],
    },
    RegimeRow {
        label: "trace-power-iv",
        curvature: Some(Convex),
        admits: |p, r| p >= 1.0 && 0.0 < r && r <= p,
        grid: &[(2.0, 1.0), (1.5, 1.5), (3.0, 0.5)],
    },
    RegimeRow {
        label: "trace-power-v",
        curvature: Some(Convex),
        admits: |p, r| 0.0 < p && p <= 1.0 && r < 0.0,
        grid: &[(0.5, -1.0), (1.0, -0.5), (0.2, -2.0)],
    },
];

static TRACE_POWER_CONJ_ROWS: [RegimeRow; 5] = [
    RegimeRow {
        label: "trace-power-conj-i",
        curvature: Some(Concave),
        admits: |p, r| (-1.0..0.0).contains(&p) && r <= p,
        grid: &[(-1.0, -1.0), (-0.5, -1.0), (-0.3, -0.3)],
    },
    RegimeRow {
        label: "trace-power-conj-ii",
        curvature: Some(Convex),
        admits: |p, r| (-1.0..0.0).contains(&p) && r > 0.0,
        grid: &[(-1.0, 1.0), (-0.5, 0.5), (-0.2, 2.0)],
    },
    RegimeRow {
        label: "trace-power-conj-iii",
        curvature: Some(Concave),
        admits: |p, r| 0.0 < p && p <= 1.0 && r >= p,
        grid: &[(0.5, 0.5), (0.3, 1.0), (1.0, 2.0)],
    },
    RegimeRow {
        label: "trace-power-conj-iv",
        curvature: Some(Convex),
        admits: |p, r| (1.0..=2.0).contains(&p) && 0.0 < r && r <= p,
        grid: &[(2.0, 1.0), (1.5, 1.5), (1.2, 0.5)],
    },
    RegimeRow {
        label: "trace-power-conj-v",
        curvature: Some(Convex),
        admits: |p, r| 0.0 < p && p <= 1.0 && r < 0.0,
        grid: &[(0.5, -1.0), (1.0, -0.5), (0.2, -2.0)],
    },
];

static G_ROWS: [RegimeRow; 3] = [
    RegimeRow {
        label: "G-i",
        curvature: Some(Convex),
        admits: |q, r| q < 1.0 && r >= q,
        grid: &[(-1.0, 0.0), (0.5, 0.5), (0.5, 2.0), (-2.0, 1.0)],
    },
    RegimeRow {
        label: "G-ii",
        curvature: Some(Convex),
        admits: |q, r| 1.0 < q && q <= 2.0 && r >= q,
        grid: &[(1.5, 1.5), (1.2, 3.0), (2.0, 2.0)],
    },
    RegimeRow {
        label: "G-iii",
        curvature: Some(Concave),
        admits: |q, r| q >= 2.0 && r <= q,
        grid: &[(2.5, 2.0), (3.0, 0.5), (2.0, -1.0)],
    },
];

static F_ROWS: [RegimeRow; 4] = [
    RegimeRow {
        label: "F-i",
        curvature: Some(Convex),
        admits: |q, r| q <= 0.0 && r >= q,
        grid: &[(-1.0, 0.0), (0.0, 0.5), (-2.0, 1.0)],
    },
    RegimeRow {
        label: "F-ii",
        curvature: Some(Convex),
        admits: |q, r| (1.5..=2.0).contains(&q) && r >= q,
        grid: &[(1.5, 1.5), (1.8, 3.0), (2.0, 2.0)],
    },
    RegimeRow {
        label: "F-iii",
        curvature: Some(Concave),
        admits: |q, r| q >= 2.0 && r <= q,
        grid: &[(2.5, 2.0), (3.0, 0.5), (2.0, -1.0)],
    },
    RegimeRow {
        label: "F-gap",
        curvature: None,
        admits: |q, _| 0.0 < q && q < 1.5,
        grid: &[(0.5, 1.0), (1.2, 2.0)],
    },
];

/// A functional to probe. `b = None` draws a fresh Ginibre `B` per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Target {
    pub kind: TargetKind,
    /// `p` for the trace powers, `q` for `G` and `F`.
    pub param: f64,
    pub r: f64,
    pub b: Option<CMatrix>,
}

impl Target {
    pub fn new(kind: TargetKind, param: f64, r: f64) -> Self {
        Self { kind, param, r, b: None }
    }

    pub fn with_b(mut self, b: CMatrix) -> Self {
        self.b = Some(b);
        self
    }

    /// The row whose claim covers `(param, r)`; proven rows take precedence
    /// over exploratory ones.
    pub fn row(&self) -> Option<&'static RegimeRow> {
        let rows = self.kind.rows();
        rows.iter()
            .find(|row| !row.is_exploratory() && (row.admits)(self.param, self.r))
            .or_else(|| rows.iter().find(|row| (row.admits)(self.param, self.r)))
    }

    fn needs_b(&self) -> bool {
        matches!(self.kind, TargetKind::TracePowerConjugated | TargetKind::F)
    }

    fn domain(&self) -> EnsembleSpec {
        EnsembleSpec::new(EnsembleKind::GaussianHermitian, DomainConstraint::for_q(self.param))
    }

    fn draw_point<R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> HermitianMatrix {
        match self.kind {
            TargetKind::TracePower | TargetKind::TracePowerConjugated => random_positive(dim, 0.05, 5.0, rng),
            TargetKind::G | TargetKind::F => generate(&self.domain(), dim, rng),
        }
    }

    pub fn evaluate(&self, a: &HermitianMatrix, b: Option<&CMatrix>) -> Result<f64> {
        let (p, r) = (self.param, self.r);
        let b = || b.ok_or_else(|| Error::Invalid(format!("target {} needs a matrix B", self.kind.label())));
        match self.kind {
            TargetKind::TracePower => {
                a.require_positive_definite("A")?;
                let t: f64 = a.eigenvalues().iter().map(|l| l.powf(p)).sum();
                Ok(t.powf(1.0 / r))
            }
            TargetKind::TracePowerConjugated => {
                a.require_positive_definite("A")?;
                let b = b()?;
                let ap = a.apply_spectral(|l| l.powf(p))?;
                let t = trace_product(&(b * b.adjoint()), ap.as_matrix());
                if t <= 0.0 {
                    return Err(Error::domain("Tr B* A^p B", t, "a positive value"));
                }
                Ok(t.powf(1.0 / r))
            }
            TargetKind::G => g_func(a, p, r),
            TargetKind::F => f_func(a, b()?, p, r),
        }
    }

    /// Draws an admissible pair `(X, Y)` and compares `f((X+Y)/2)` (lhs) with
    /// `(f(X)+f(Y))/2` (rhs). The slack is oriented along the claimed
    /// curvature, or along convexity for exploratory rows.
    pub fn midpoint_sample<R: Rng + ?Sized>(&self, dim: usize, rng: &mut R) -> Result<InequalityReport> {
        let row = self.row();
        let x = self.draw_point(dim, rng);
        let y = self.draw_point(dim, rng);
        let drawn;
        let b = match (&self.b, self.needs_b()) {
            (Some(b), _) => Some(b),
            (None, true) => {
                drawn = general(dim, rng);
                Some(&drawn)
            }
            (None, false) => None,
        };
        let mid = &(&x + &y) * 0.5;
        let fx = self.evaluate(&x, b)?;
        let fy = self.evaluate(&y, b)?;
        let fm = self.evaluate(&mid, b)?;
        let curvature = row.and_then(|r| r.curvature).unwrap_or(Convex);
        let case = row.map_or("unclassified", |r| r.label);
        let rhs = 0.5 * (fx + fy);
        let mut rep = InequalityReport::new(
            &format!("convexity-{}", self.kind.label()),
            case,
            self.param,
            self.r,
            fm,
            rhs,
            curvature == Convex,
        )
        .with_tolerance(PROBE_TOL);
        rep.dim = dim;
        Ok(rep)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbeReport {
    pub target: String,
    pub row: String,
    pub param: f64,
    pub r: f64,
    pub curvature: Option<Curvature>,
    pub exploratory: bool,
    pub samples: usize,
    /// Samples whose midpoint lies above the chord beyond tolerance.
    pub convexity_violations: usize,
    /// Samples whose midpoint lies below the chord beyond tolerance.
    pub concavity_violations: usize,
    /// Most negative slack along the claimed direction.
    pub worst: Option<InequalityReport>,
    pub falsified: bool,
    pub note: String,
}

impl ProbeReport {
    pub fn from_samples(target: &Target, samples: &[InequalityReport]) -> Self {
        let row = target.row();
        let curvature = row.and_then(|r| r.curvature);
        let mut convexity_violations = 0;
        let mut concavity_violations = 0;
        for s in samples {
            let above = s.lhs - s.rhs;
            if above > s.tol {
                convexity_violations += 1;
            }
            if -above > s.tol {
                concavity_violations += 1;
            }
        }
        let worst = samples
            .iter()
            .min_by(|a, b| a.slack.total_cmp(&b.slack))
            .cloned();
        let falsified = match curvature {
            Some(Convex) => convexity_violations > 0,
            Some(Concave) => concavity_violations > 0,
            None => false,
        };
        Self {
            target: target.kind.label().into(),
            row: row.map_or("unclassified", |r| r.label).into(),
            param: target.param,
            r: target.r,
            curvature,
            exploratory: curvature.is_none(),
            samples: samples.len(),
            convexity_violations,
            concavity_violations,
            worst,
            falsified,
            note: PROBE_NOTE.into(),
        }
    }
}

/// Runs `samples` midpoint checks, sample `i` at dimension `dims[i % len]`
/// with its own random stream.
pub fn convexity_probe(target: &Target, samples: usize, seed: u64, dims: &[usize]) -> Result<ProbeReport> {
    if samples == 0 || dims.is_empty() || dims.contains(&0) {
        return Err(Error::Invalid("need at least one sample and positive dimensions".into()));
    }
    let reports = (0..samples)
        .map(|i| {
            let mut rng = TrialRng::new(seed, i as u64, "convexity");
            let dim = dims[i % dims.len()];
            target
                .midpoint_sample(dim, &mut rng)
                .map(|rep| rep.with_trial(dim, seed, i as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbeReport::from_samples(target, &reports))
}
