use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{EntropySuite, FrechetMethod, Suite};
use crate::convexity::TargetKind;
use crate::deformed::Regime;
use crate::error::{Error, Result};
use crate::trace::Direction;

/// One parameter point of a sweep. `label` names the row or function the
/// point belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub label: String,
    pub q: f64,
    pub r: f64,
}

impl GridPoint {
    pub fn new(label: &str, q: f64, r: f64) -> Self {
        Self { label: label.into(), q, r }
    }
}

pub const GRID_NAMES: [&str; 3] = ["default", "r-equals-q", "classical"];

fn product(label: &str, qs: &[f64], rs: impl Fn(f64) -> Vec<f64>) -> Vec<GridPoint> {
    let mut out = Vec::new();
    for &q in qs {
        let mut seen: Vec<f64> = Vec::new();
        for r in rs(q) {
            if !seen.contains(&r) {
                seen.push(r);
                out.push(GridPoint::new(label, q, r));
            }
        }
    }
    out
}

fn points(label: &str, pts: &[(f64, f64)]) -> Vec<GridPoint> {
    pts.iter().map(|&(q, r)| GridPoint::new(label, q, r)).collect()
}

pub fn default_grid(suite: &Suite) -> Vec<GridPoint> {
    match *suite {
        Suite::Main(case) => {
            let l = case.label();
            match case {
                Regime::MainI => product(l, &[-2.0, -0.5, 0.0, 0.3, 0.5, 0.8], |q| vec![q, q + 0.5, 1.0, 1.5, 3.0]),
                Regime::MainII => product(l, &[-2.0, -1.0, -0.5, 0.0], |q| vec![q, q + 0.5, 1.5, 3.0]),
                Regime::MainIII => product(l, &[1.1, 1.3, 1.5, 1.8, 2.0], |q| vec![q, q + 0.5, 3.0]),
                Regime::MainIV => product(l, &[1.5, 1.6, 1.75, 2.0], |q| vec![q, q + 0.5, 3.0]),
                Regime::MainV => product(l, &[2.0, 2.5, 3.0, 4.0], |q| vec![-1.0, 0.5, 1.0, 2.0, q]),
                Regime::Unclassified => Vec::new(),
            }
        }
        Suite::Variant(Direction::Convex) => points("convex", &[(1.0, 1.0), (2.0, 1.0), (2.0, 2.0), (3.0, 1.5), (1.5, 0.5)]),
        Suite::Variant(Direction::Concave) => points(
            "concave",
            &[(0.5, 0.5), (0.3, 1.0), (1.0, 2.0), (-0.5, -0.5), (-1.0, -2.0), (-0.3, -1.0)],
        ),
        Suite::Convexity(kind) => kind
            .rows()
            .iter()
            .flat_map(|row| points(row.label, row.grid))
            .collect(),
        Suite::Entropy(EntropySuite::Lemma) => points("lemma", &[(0.0, 0.0)]),
        Suite::Entropy(EntropySuite::Bound) => points("bound", &[(0.2, 0.0), (0.5, 0.0), (0.8, 0.0), (1.0, 0.0)]),
        Suite::Entropy(EntropySuite::Limits) => points("limits", &[(1.0, 0.0)]),
        Suite::Frechet(_) => {
            let mut g = points("power", &[(-0.5, 0.0), (0.5, 0.0), (1.5, 0.0)]);
            g.extend(points("log", &[(1.0, 0.0)]));
            g.extend(points("log_q", &[(1.5, 0.0), (2.0, 0.0), (2.5, 0.0)]));
            g.extend(points("exp_q", &[(-1.0, 0.0), (1.5, 0.0), (1.75, 0.0), (2.0, 0.0), (3.0, 0.0)]));
            g
        }
    }
}

pub fn named_grid(suite: &Suite, name: &str) -> Result<Vec<GridPoint>> {
    match (name, suite) {
        ("default", _) => Ok(default_grid(suite)),
        ("r-equals-q", Suite::Main(Regime::MainIII)) => Ok(points("iii", &[(1.2, 1.2), (1.5, 1.5), (2.0, 2.0)])),
        ("classical", Suite::Main(Regime::MainIII)) => {
            let q = 1.0 + 1e-5;
            Ok(points("iii", &[(q, q)]))
        }
        (n, _) if GRID_NAMES.contains(&n) => Err(Error::Invalid(format!(
            "grid `{n}` is not defined for suite {}",
            suite.label()
        ))),
        (n, _) => Err(Error::Invalid(format!(
            "unknown grid `{n}` (available: {})",
            GRID_NAMES.join(", ")
        ))),
    }
}

pub(crate) fn all_suites() -> Vec<Suite> {
    let mut v: Vec<Suite> = Regime::MAIN.iter().map(|&c| Suite::Main(c)).collect();
    v.push(Suite::Variant(Direction::Convex));
    v.push(Suite::Variant(Direction::Concave));
    v.extend(TargetKind::ALL.iter().map(|&k| Suite::Convexity(k)));
    v.extend([EntropySuite::Lemma, EntropySuite::Bound, EntropySuite::Limits].map(Suite::Entropy));
    v.extend(
        [FrechetMethod::DividedDifference, FrechetMethod::Quadrature, FrechetMethod::Both].map(Suite::Frechet),
    );
    v
}

/// Human-readable listing of every built-in grid.
pub fn grid_listing() -> String {
    let mut s = String::new();
    for suite in all_suites() {
        for name in GRID_NAMES {
            let Ok(grid) = named_grid(&suite, name) else { continue };
            let _ = write!(s, "{} [{}]:", suite.label(), name);
            for pt in &grid {
                let _ = write!(s, " {}(q={}, r={})", pt.label, pt.q, pt.r);
            }
            s.push('\n');
        }
    }
    s
}
