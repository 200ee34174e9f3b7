//! Deformed logarithm and exponential, scalar and spectral, with the domain
//! bookkeeping they need.
//!
//! `log_q x = (x^{q-1} - 1)/(q - 1)` maps `(0, ∞)` onto `(-1/(q-1), ∞)` for
//! `q > 1` and onto `(-∞, -1/(q-1))` for `q < 1`; `exp_q` is its inverse,
//! `exp_q x = (1 + (q-1) x)^{1/(q-1)}`. Both collapse to `ln`/`exp` at `q = 1`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::HermitianMatrix;

/// Below this distance from 1 the classical `ln`/`exp` branch is used.
pub const CLASSICAL_EPS: f64 = 1e-8;

pub fn is_classical(q: f64) -> bool {
    (q - 1.0).abs() < CLASSICAL_EPS
}

/// The finite endpoint `-1/(q-1)` of the `exp_q` domain.
pub fn domain_bound(q: f64) -> f64 {
    -1.0 / (q - 1.0)
}

pub fn log_q(x: f64, q: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_q", x, "x > 0"));
    }
    if is_classical(q) {
        return Ok(x.ln());
    }
    let d = q - 1.0;
    Ok((d * x.ln()).exp_m1() / d)
}

pub fn exp_q(x: f64, q: f64) -> Result<f64> {
    if is_classical(q) {
        return Ok(x.exp());
    }
    let d = q - 1.0;
    let base = d * x;
    if !(base > -1.0) {
        let rel = if q > 1.0 { '>' } else { '<' };
        return Err(Error::domain(
            format!("exp_q (q = {q})"),
            x,
            format!("x {rel} -1/(q-1) = {}", domain_bound(q)),
        ));
    }
    Ok((base.ln_1p() / d).exp())
}

/// `d/dx log_q x = x^{q-2}`.
pub fn log_q_derivative(x: f64, q: f64) -> f64 {
    x.powf(q - 2.0)
}

/// `d/dx exp_q x = exp_q(x)^{2-q}`.
pub fn exp_q_derivative(x: f64, q: f64) -> Result<f64> {
    Ok(exp_q(x, q)?.powf(2.0 - q))
}

/// `log_r` of a positive number, used by the trace functionals.
pub fn log_r(t: f64, r: f64) -> Result<f64> {
    log_q(t, r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// Spectrum must lie strictly below `bound` (q < 1).
    BoundedAbove,
    /// Spectrum must lie strictly above `bound` (q > 1, or positivity).
    BoundedBelow,
    /// q = 1: every real number is admissible.
    Unconstrained,
}

/// Spectral admissibility condition for `exp_q`, or plain positivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainConstraint {
    /// Deformation parameter the constraint was derived from, if any.
    pub q: Option<f64>,
    pub side: Side,
    pub bound: f64,
    pub margin: f64,
}

pub fn default_margin(bound: f64) -> f64 {
    1e-8 * (1.0 + bound.abs())
}

impl DomainConstraint {
    pub fn for_q(q: f64) -> Self {
        if is_classical(q) {
            return Self {
                q: Some(q),
                side: Side::Unconstrained,
                bound: f64::NAN,
                margin: 0.0,
            };
        }
        let bound = domain_bound(q);
        Self {
            q: Some(q),
            side: if q < 1.0 {
                Side::BoundedAbove
            } else {
                Side::BoundedBelow
            },
            bound,
            margin: default_margin(bound),
        }
    }

    /// Positive definiteness: spectrum strictly above zero.
    pub fn positive() -> Self {
        Self {
            q: None,
            side: Side::BoundedBelow,
            bound: 0.0,
            margin: 0.0,
        }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        assert!(margin >= 0.0, "margin must be nonnegative");
        self.margin = margin;
        self
    }

    pub fn admits(&self, t: f64) -> bool {
        match self.side {
            Side::BoundedAbove => t < self.bound - self.margin,
            Side::BoundedBelow => t > self.bound + self.margin,
            Side::Unconstrained => t.is_finite(),
        }
    }
}

impl fmt::Display for DomainConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::BoundedAbove => write!(f, "spectrum < {} (margin {:e})", self.bound, self.margin),
            Side::BoundedBelow => write!(f, "spectrum > {} (margin {:e})", self.bound, self.margin),
            Side::Unconstrained => write!(f, "unconstrained"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainCheck {
    pub admissible: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    /// The eigenvalue closest to (or furthest past) the bound.
    pub worst_eigenvalue: f64,
}

pub fn check_domain(a: &HermitianMatrix, c: &DomainConstraint) -> DomainCheck {
    let min = a.min_eigenvalue();
    let max = a.max_eigenvalue();
    let worst = match c.side {
        Side::BoundedAbove => max,
        Side::BoundedBelow => min,
        Side::Unconstrained => {
            if max.abs() > min.abs() {
                max
            } else {
                min
            }
        }
    };
    DomainCheck {
        admissible: c.admits(min) && c.admits(max),
        min_eigenvalue: min,
        max_eigenvalue: max,
        worst_eigenvalue: worst,
    }
}

pub(crate) fn require_domain(a: &HermitianMatrix, c: &DomainConstraint, operand: &str) -> Result<()> {
    let check = check_domain(a, c);
    if check.admissible {
        Ok(())
    } else {
        Err(Error::domain(
            format!("{operand} (q = {})", c.q.unwrap_or(f64::NAN)),
            check.worst_eigenvalue,
            c.to_string(),
        ))
    }
}

pub fn exp_q_matrix(a: &HermitianMatrix, q: f64) -> Result<HermitianMatrix> {
    require_domain(a, &DomainConstraint::for_q(q), "exp_q argument")?;
    a.try_apply_spectral(|t| exp_q(t, q))
}

pub fn log_q_matrix(a: &HermitianMatrix, q: f64) -> Result<HermitianMatrix> {
    a.require_positive_definite("log_q argument")?;
    a.try_apply_spectral(|t| log_q(t, q))
}

/// The five clauses of the deformed Peierls-Bogolyubov theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    MainI,
    MainII,
    MainIII,
    MainIV,
    MainV,
    Unclassified,
}

pub const REGIME_TABLE: &str = "i: q<1, r>=q (trace); ii: q<=0, r>=q (any positive functional); \
iii: 1<q<=2, r>=q (trace); iv: 3/2<=q<=2, r>=q (any positive functional); \
v: q>=2, r<=q (any positive functional, reversed)";

impl Regime {
    pub const MAIN: [Regime; 5] = [
        Regime::MainI,
        Regime::MainII,
        Regime::MainIII,
        Regime::MainIV,
        Regime::MainV,
    ];

    pub fn admits(self, q: f64, r: f64) -> bool {
        match self {
            Regime::MainI => q < 1.0 && r >= q,
            Regime::MainII => q <= 0.0 && r >= q,
            Regime::MainIII => q > 1.0 && q <= 2.0 && r >= q,
            Regime::MainIV => (1.5..=2.0).contains(&q) && r >= q,
            Regime::MainV => q >= 2.0 && r <= q,
            Regime::Unclassified => true,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::MainI => "i",
            Regime::MainII => "ii",
            Regime::MainIII => "iii",
            Regime::MainIV => "iv",
            Regime::MainV => "v",
            Regime::Unclassified => "unclassified",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().as_str() {
            "i" | "1" => Regime::MainI,
            "ii" | "2" => Regime::MainII,
            "iii" | "3" => Regime::MainIII,
            "iv" | "4" => Regime::MainIV,
            "v" | "5" => Regime::MainV,
            _ => return None,
        })
    }

    /// Clauses i and iii are stated for the trace only.
    pub fn trace_only(self) -> bool {
        matches!(self, Regime::MainI | Regime::MainIII)
    }

    /// Clause v reverses the inequality.
    pub fn is_reversed(self) -> bool {
        matches!(self, Regime::MainV)
    }

    /// Every main clause whose hypotheses `(q, r)` satisfies.
    pub fn matching(q: f64, r: f64) -> Vec<Regime> {
        Self::MAIN.into_iter().filter(|g| g.admits(q, r)).collect()
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformParams {
    pub q: f64,
    pub r: f64,
    pub regime: Regime,
}

impl DeformParams {
    /// Tags `(q, r)` with the first matching clause, or `Unclassified`.
    pub fn classify(q: f64, r: f64) -> Self {
        let regime = Regime::matching(q, r)
            .into_iter()
            .next()
            .unwrap_or(Regime::Unclassified);
        Self { q, r, regime }
    }

    pub fn for_regime(regime: Regime, q: f64, r: f64) -> Result<Self> {
        if !q.is_finite() || !r.is_finite() || !regime.admits(q, r) {
            return Err(Error::Regime {
                q,
                r,
                regime: regime.label().into(),
                table: REGIME_TABLE.into(),
            });
        }
        Ok(Self { q, r, regime })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn scalar_examples() {
        assert_eq!(log_q(1.0, 0.3).unwrap(), 0.0);
        assert!(close(log_q(3.0, 2.0).unwrap(), 2.0, 1e-15));
        assert!(close(log_q(2.0, 0.0).unwrap(), 0.5, 1e-15));
        assert_eq!(exp_q(0.0, 1.7).unwrap(), 1.0);
        assert!(close(exp_q(0.5, 2.0).unwrap(), 1.5, 1e-15));
        assert!(close(exp_q(-1.0, 1.5).unwrap(), 0.25, 1e-15));
    }

    #[test]
    fn scalar_domain_errors() {
        assert!(matches!(log_q(0.0, 1.5), Err(Error::Domain { .. })));
        assert!(matches!(log_q(-1.0, 0.5), Err(Error::Domain { .. })));
        match exp_q(-3.0, 1.5) {
            Err(Error::Domain { requirement, .. }) => assert!(requirement.contains("-2")),
            other => panic!("{other:?}"),
        }
        assert!(exp_q(2.0, 0.5).is_err());
        assert!(exp_q(1.9, 0.5).is_ok());
        assert!(exp_q(-1e6, 1.0).is_ok());
    }

    #[test]
    fn round_trip_over_q_grid() {
        for i in 0..=50 {
            let q = -2.0 + 5.0 * i as f64 / 50.0;
            if is_classical(q) {
                continue;
            }
            for &x in &[1e-3, 0.1, 0.7, 1.0, 2.5, 40.0] {
                let l = log_q(x, q).unwrap();
                let y = exp_q(l, q).unwrap();
                // rounding of l alone is amplified by d(ln x)/dl = x^{1-q}
                let cond = x.powf(1.0 - q) * l.abs() * 4.0 * f64::EPSILON;
                assert!((y - x).abs() <= (1e-12 + cond) * x, "q={q} x={x} y={y}");
            }
        }
    }

    #[test]
    fn classical_limit() {
        for &x in &[-2.0, -0.5, 0.0, 0.3, 1.7] {
            for q in [1.0 - 1e-6, 1.0 + 1e-6] {
                let e = exp_q(x, q).unwrap();
                assert!((e - f64::exp(x)).abs() <= 1e-4 * (1.0 + f64::exp(x)));
            }
        }
        let a = HermitianMatrix::from_diagonal(&[-1.0, 0.5, 1.2]);
        let cl = a.apply_spectral(f64::exp).unwrap();
        let dq = exp_q_matrix(&a, 1.0 + 1e-6).unwrap();
        assert!((dq.as_matrix() - cl.as_matrix()).norm() <= 1e-4 * (1.0 + cl.frobenius_norm()));
    }

    #[test]
    fn difference_identity() {
        for &q in &[-1.5, 0.2, 0.9, 1.3, 2.0, 2.8] {
            for &(x, y) in &[(0.5, 2.0), (3.0, 1.1), (0.01, 7.0)] {
                let lhs = log_q(x, q).unwrap() - log_q(y, q).unwrap();
                let rhs = (f64::powf(x, q - 1.0) - f64::powf(y, q - 1.0)) / (q - 1.0);
                assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + rhs.abs()), "q={q}");
            }
        }
    }

    #[test]
    fn derivative_identities_by_central_differences() {
        let step = 1e-6;
        for &q in &[-1.0, 0.4, 1.3, 2.0, 2.7] {
            for &x in &[0.3, 1.0, 2.2] {
                let fd = (log_q(x + step, q).unwrap() - log_q(x - step, q).unwrap()) / (2.0 * step);
                let exact = log_q_derivative(x, q);
                assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0));
            }
            // points inside the exp_q domain for each q
            let c = DomainConstraint::for_q(q);
            for &x in &[-0.3, 0.0, 0.4] {
                if !c.admits(x - 1e-3) || !c.admits(x + 1e-3) {
                    continue;
                }
                let fd = (exp_q(x + step, q).unwrap() - exp_q(x - step, q).unwrap()) / (2.0 * step);
                let exact = exp_q_derivative(x, q).unwrap();
                assert!((fd - exact).abs() <= 1e-6 * exact.abs().max(1.0), "q={q} x={x}");
            }
        }
    }

    #[test]
    fn matrix_examples() {
        let id = exp_q_matrix(&HermitianMatrix::zeros(3), 1.3).unwrap();
        assert!((id.as_matrix() - HermitianMatrix::identity(3).as_matrix()).norm() < 1e-15);
        let e = exp_q_matrix(&HermitianMatrix::from_diagonal(&[-1.0, 0.0]), 1.5).unwrap();
        let want = HermitianMatrix::from_diagonal(&[0.25, 1.0]);
        assert!((e.as_matrix() - want.as_matrix()).norm() < 1e-15);
        assert!(exp_q_matrix(&HermitianMatrix::from_diagonal(&[-2.0]), 1.5).is_err());
        assert!(log_q_matrix(&HermitianMatrix::from_diagonal(&[1.0, 0.0]), 1.5).is_err());
    }

    #[test]
    fn check_domain_examples() {
        let c = DomainConstraint::for_q(2.0);
        assert_eq!(c.side, Side::BoundedBelow);
        assert!(check_domain(&HermitianMatrix::from_diagonal(&[1.0, 2.0]), &c).admissible);
        let c = DomainConstraint::for_q(1.5);
        let chk = check_domain(&HermitianMatrix::from_diagonal(&[-3.0]), &c);
        assert!(!chk.admissible);
        assert_eq!(chk.worst_eigenvalue, -3.0);
        assert_eq!(DomainConstraint::for_q(0.5).side, Side::BoundedAbove);
        assert_eq!(DomainConstraint::for_q(1.0).side, Side::Unconstrained);
        // the margin excludes points right at the bound
        let c = DomainConstraint::for_q(2.0);
        assert!(!c.admits(-1.0 + 1e-9));
        assert!(c.with_margin(0.0).admits(-1.0 + 1e-9));
    }

    #[test]
    fn regimes() {
        assert!(Regime::MainI.admits(0.5, 0.5));
        assert!(!Regime::MainI.admits(0.5, 0.4));
        assert!(Regime::MainII.admits(0.0, 3.0));
        assert!(!Regime::MainII.admits(0.1, 3.0));
        assert!(Regime::MainIII.admits(2.0, 2.0));
        assert!(!Regime::MainIII.admits(1.0, 2.0));
        assert!(Regime::MainIV.admits(1.5, 1.5));
        assert!(!Regime::MainIV.admits(1.4, 3.0));
        assert!(Regime::MainV.admits(2.0, -5.0));
        assert_eq!(
            Regime::matching(2.0, 2.0),
            vec![Regime::MainIII, Regime::MainIV, Regime::MainV]
        );
        assert_eq!(DeformParams::classify(1.2, 0.5).regime, Regime::Unclassified);
        assert!(DeformParams::for_regime(Regime::MainV, 2.5, 3.0).is_err());
        assert!(DeformParams::for_regime(Regime::MainV, 2.5, 2.0).is_ok());
    }
}
