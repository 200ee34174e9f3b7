//! Trace functionals `G(A) = log_r Tr exp_q(A)` and
//! `F(A) = log_r Tr B* exp_q(A) B`, and the Peierls-Bogolyubov type
//! inequality slacks built on them.

use serde::{Deserialize, Serialize};

use crate::deformed::{exp_q_matrix, log_r, require_domain, DeformParams, DomainConstraint, Regime};
use crate::error::{Error, Result};
use crate::frechet::{dfrechet_exp_q, Method, QuadratureSpec};
use crate::matrix::{real_trace, trace_product, CMatrix, HermitianMatrix};

/// Default relative coefficient of the inequality tolerance
/// `tol = coeff · (1 + |lhs| + |rhs|)`.
pub const DEFAULT_TOL: f64 = 1e-8;

/// `X ↦ Tr X` or `X ↦ Tr C* X C`.
#[derive(Debug, Clone, PartialEq)]
pub enum PositiveFunctional {
    Trace,
    Conjugated(CMatrix),
}

impl PositiveFunctional {
    pub fn eval(&self, x: &CMatrix) -> f64 {
        match self {
            PositiveFunctional::Trace => real_trace(x),
            PositiveFunctional::Conjugated(c) => trace_product(&(c * c.adjoint()), x),
        }
    }

    pub fn is_trace(&self) -> bool {
        matches!(self, PositiveFunctional::Trace)
    }
}

/// One evaluated inequality instance. `slack ≥ −tol` means it holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub case: String,
    pub q: f64,
    pub r: f64,
    pub dim: usize,
    pub seed: u64,
    pub trial: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl InequalityReport {
    /// `reversed = false` means the inequality reads `lhs ≥ rhs`.
    pub fn new(name: &str, case: &str, q: f64, r: f64, lhs: f64, rhs: f64, reversed: bool) -> Self {
        let slack = if reversed { rhs - lhs } else { lhs - rhs };
        let mut rep = Self {
            name: name.into(),
            case: case.into(),
            q,
            r,
            dim: 0,
            seed: 0,
            trial: 0,
            lhs,
            rhs,
            slack,
            holds: false,
            tol: 0.0,
            note: None,
        };
        rep.set_tolerance(DEFAULT_TOL);
        rep
    }

    pub fn set_tolerance(&mut self, coeff: f64) {
        self.tol = coeff * (1.0 + self.lhs.abs() + self.rhs.abs());
        self.holds = self.slack >= -self.tol;
    }

    pub fn with_tolerance(mut self, coeff: f64) -> Self {
        self.set_tolerance(coeff);
        self
    }

    /// Replaces the relative tolerance by a fixed absolute one.
    pub fn with_absolute_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.holds = self.slack >= -tol;
        self
    }

    pub fn with_trial(mut self, dim: usize, seed: u64, trial: u64) -> Self {
        self.dim = dim;
        self.seed = seed;
        self.trial = trial;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn positive(value: f64, what: &str) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(what, value, "a positive finite value"))
    }
}

/// `G(A) = log_r Tr exp_q(A)`.
pub fn g_func(a: &HermitianMatrix, q: f64, r: f64) -> Result<f64> {
    let t = exp_q_matrix(a, q)?.trace();
    log_r(positive(t, "Tr exp_q(A)")?, r)
}

/// `F(A) = log_r Tr B* exp_q(A) B`.
pub fn f_func(a: &HermitianMatrix, b: &CMatrix, q: f64, r: f64) -> Result<f64> {
    if b.nrows() != a.dim() || b.ncols() != a.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: b.nrows(),
        });
    }
    let e = exp_q_matrix(a, q)?;
    let inner = trace_product(&(b * b.adjoint()), e.as_matrix());
    log_r(positive(inner, "Tr B* exp_q(A) B")?, r)
}

/// Slack of the deformed Peierls-Bogolyubov inequality, clause `case`:
///
/// `log_r φ(exp_q(A+B)) − log_r φ(exp_q A)  ≥  φ(exp_q A)^{r−2} φ(D exp_q(A)B)`
///
/// (reversed for clause v). Clauses i and iii use the trace and the closed
/// form `Tr (exp_q A)^{2−q} B` of `Tr D exp_q(A)B`.
pub fn main_theorem_slack(
    case: Regime,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    q: f64,
    r: f64,
    phi: &PositiveFunctional,
    spec: &QuadratureSpec,
) -> Result<InequalityReport> {
    if case == Regime::Unclassified {
        return Err(Error::Regime {
            q,
            r,
            regime: case.label().into(),
            table: crate::deformed::REGIME_TABLE.into(),
        });
    }
    DeformParams::for_regime(case, q, r)?;
    if case.trace_only() && !phi.is_trace() {
        return Err(Error::UnsupportedParameter(format!(
            "clause {case} is stated for the trace only"
        )));
    }
    if a.dim() != b.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let constraint = DomainConstraint::for_q(q);
    require_domain(a, &constraint, "A")?;
    let ab = a + b;
    require_domain(&ab, &constraint, "A+B")?;

    let ea = exp_q_matrix(a, q)?;
    let eab = exp_q_matrix(&ab, q)?;
    let fa = positive(phi.eval(ea.as_matrix()), "φ(exp_q A)")?;
    let fab = positive(phi.eval(eab.as_matrix()), "φ(exp_q(A+B))")?;
    let lhs = log_r(fab, r)? - log_r(fa, r)?;

    let mut note = None;
    let derivative_term = if case.trace_only() {
        let w = ea.apply_spectral(|t| t.powf(2.0 - q))?;
        trace_product(w.as_matrix(), b.as_matrix())
    } else {
        let d = dfrechet_exp_q(a, b, q, spec)?;
        if d.method == Method::DividedDifference {
            note = Some("D exp_q by divided differences (no integral form for this q)".to_string());
        }
        phi.eval(&d.value)
    };
    let rhs = fa.powf(r - 2.0) * derivative_term;

    let name = if phi.is_trace() {
        "main-trace"
    } else {
        "main-functional"
    };
    let mut rep = InequalityReport::new(name, case.label(), q, r, lhs, rhs, case.is_reversed());
    rep.dim = a.dim();
    rep.note = note;
    Ok(rep)
}

/// Classical Peierls-Bogolyubov slack
/// `log(Tr e^{A+B} / Tr e^A) − Tr e^A B / Tr e^A`.
pub fn classical_pb_slack(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<InequalityReport> {
    let ea = a.apply_spectral(f64::exp)?;
    let eab = (a + b).apply_spectral(f64::exp)?;
    let za = ea.trace();
    let lhs = (eab.trace() / za).ln();
    let rhs = trace_product(ea.as_matrix(), b.as_matrix()) / za;
    let mut rep = InequalityReport::new("classical-pb", "classical", 1.0, 1.0, lhs, rhs, false);
    rep.dim = a.dim();
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `p ≥ 1, 0 < r ≤ p`: the difference dominates the linear term.
    Convex,
    /// `0 < p ≤ 1, r ≥ p` or `p < 0, r ≤ p`: the reverse.
    Concave,
}

impl Direction {
    pub fn admits(self, p: f64, r: f64) -> bool {
        match self {
            Direction::Convex => p >= 1.0 && r > 0.0 && r <= p,
            Direction::Concave => (p > 0.0 && p <= 1.0 && r >= p) || (p < 0.0 && r <= p),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::Convex => "convex",
            Direction::Concave => "concave",
        }
    }
}

pub const VARIANT_TABLE: &str = "convex: p>=1, 0<r<=p; concave: 0<p<=1, r>=p or p<0, r<=p";

/// Slack of `(Tr(A+B)^p)^{1/r} − (Tr A^p)^{1/r}` against
/// `(p/r)(Tr A^p)^{(1−r)/r} Tr A^{p−1}B` for positive definite `A`, `B`.
pub fn variant_pb_slack(
    direction: Direction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    p: f64,
    r: f64,
) -> Result<InequalityReport> {
    if !direction.admits(p, r) {
        return Err(Error::Regime {
            q: p,
            r,
            regime: direction.label().into(),
            table: VARIANT_TABLE.into(),
        });
    }
    a.require_positive_definite("A")?;
    b.require_positive_definite("B")?;
    let ta = a.eigenvalues().iter().map(|l| l.powf(p)).sum::<f64>();
    let tab = (a + b).eigenvalues().iter().map(|l| l.powf(p)).sum::<f64>();
    let lhs = tab.powf(1.0 / r) - ta.powf(1.0 / r);
    let apm1 = a.apply_spectral(|t| t.powf(p - 1.0))?;
    let rhs = (p / r) * ta.powf((1.0 - r) / r) * trace_product(apm1.as_matrix(), b.as_matrix());
    let mut rep = InequalityReport::new(
        "variant-pb",
        direction.label(),
        p,
        r,
        lhs,
        rhs,
        direction == Direction::Concave,
    );
    rep.dim = a.dim();
    Ok(rep)
}
