//! Tsallis and Umegaki relative entropies and the trace lower bounds for the
//! Tsallis relative entropy of positive definite operators.

use crate::deformed::log_q;
use crate::error::{Error, Result};
use crate::matrix::{trace_product, HermitianMatrix};

/// Below this distance to 1 the Tsallis parameter is treated as 1.
pub const UMEGAKI_EPS: f64 = 1e-8;
pub const STATE_TRACE_TOL: f64 = 1e-10;
pub const STATE_EIGEN_FLOOR: f64 = 1e-12;
/// Agreement required between the two algebraically equal forms of `D_p`.
pub const TWO_FORMS_TOL: f64 = 1e-10;

/// Two density matrices with unit trace and spectrum bounded away from 0.
#[derive(Debug, Clone)]
pub struct DensityPair {
    rho: HermitianMatrix,
    sigma: HermitianMatrix,
}

impl DensityPair {
    pub fn new(rho: HermitianMatrix, sigma: HermitianMatrix) -> Result<Self> {
        if rho.dim() != sigma.dim() {
            return Err(Error::Dimension {
                expected: rho.dim(),
                found: sigma.dim(),
            });
        }
        for (m, name) in [(&rho, "rho"), (&sigma, "sigma")] {
            let t = m.trace();
            if (t - 1.0).abs() > STATE_TRACE_TOL {
                return Err(Error::domain(format!("Tr {name}"), t, "1 within 1e-10"));
            }
            let min = m.min_eigenvalue();
            if min < STATE_EIGEN_FLOOR {
                return Err(Error::domain(
                    format!("smallest eigenvalue of {name}"),
                    min,
                    "at least 1e-12",
                ));
            }
        }
        Ok(Self { rho, sigma })
    }

    pub fn rho(&self) -> &HermitianMatrix {
        &self.rho
    }

    pub fn sigma(&self) -> &HermitianMatrix {
        &self.sigma
    }
}

fn require_pd_pair(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::Dimension {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    x.require_positive_definite("X")?;
    y.require_positive_definite("Y")
}

fn require_unit_interval(p: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(what, p, "a value in [0, 1]"))
    }
}

/// `U(X|Y) = Tr X (log X − log Y)`.
pub fn umegaki_relative_entropy(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    require_pd_pair(x, y)?;
    let lx = x.apply_spectral(f64::ln)?;
    let ly = y.apply_spectral(f64::ln)?;
    Ok(trace_product(x.as_matrix(), &(lx.as_matrix() - ly.as_matrix())))
}

/// `D_p(X|Y) = Tr(X − X^p Y^{1−p}) / (1 − p)`, with `D_1 = U`.
///
/// For `p < 1` the value is also computed as
/// `Tr X^p (log_{2−p} X − log_{2−p} Y)` and the two results must agree to
/// within `1e-10` of the scale of the terms involved.
pub fn tsallis_relative_entropy(x: &HermitianMatrix, y: &HermitianMatrix, p: f64) -> Result<f64> {
    require_unit_interval(p, "Tsallis parameter p")?;
    if (1.0 - p).abs() < UMEGAKI_EPS {
        return umegaki_relative_entropy(x, y);
    }
    require_pd_pair(x, y)?;
    let xp = x.apply_spectral(|t| t.powf(p))?;
    let y1p = y.apply_spectral(|t| t.powf(1.0 - p))?;
    let cross = trace_product(xp.as_matrix(), y1p.as_matrix());
    let quotient = (x.trace() - cross) / (1.0 - p);

    let q = 2.0 - p;
    let lx = x.apply_spectral(|t| log_q(t, q).unwrap_or(f64::NAN))?;
    let ly = y.apply_spectral(|t| log_q(t, q).unwrap_or(f64::NAN))?;
    let deformed = trace_product(xp.as_matrix(), &(lx.as_matrix() - ly.as_matrix()));

    let scale = (x.trace() + cross.abs()) / (1.0 - p);
    if (quotient - deformed).abs() > TWO_FORMS_TOL * (1.0 + scale) {
        return Err(Error::Inconsistent(format!(
            "Tsallis relative entropy forms disagree: {quotient} vs {deformed}"
        )));
    }
    Ok(quotient)
}

/// `Tr ρ^{1−p} σ^p`, at most 1 for states.
pub fn state_overlap_bound(pair: &DensityPair, p: f64) -> Result<f64> {
    require_unit_interval(p, "overlap exponent p")?;
    let a = pair.rho.apply_spectral(|t| t.powf(1.0 - p))?;
    let b = pair.sigma.apply_spectral(|t| t.powf(p))?;
    Ok(trace_product(a.as_matrix(), b.as_matrix()))
}

/// `(Tr X − (Tr X)^p (Tr Y)^{1−p}) / (1 − p)`, a lower bound for `D_q(X|Y)`
/// whenever `p ≤ q`. At `p = 1` the limit `Tr X · ln(Tr X / Tr Y)` is used.
pub fn tsallis_lower_bound(x: &HermitianMatrix, y: &HermitianMatrix, q: f64, p: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::domain("lower-bound parameter q", q, "a value in (0, 1]"));
    }
    if p > q || !p.is_finite() {
        return Err(Error::domain("lower-bound exponent p", p, "p <= q"));
    }
    require_pd_pair(x, y)?;
    Ok(trace_bound(x.trace(), y.trace(), p))
}

fn trace_bound(a: f64, c: f64, p: f64) -> f64 {
    if (1.0 - p).abs() < UMEGAKI_EPS {
        a * (a / c).ln()
    } else {
        (a - a.powf(p) * c.powf(1.0 - p)) / (1.0 - p)
    }
}

/// Grid maximizer of [`tsallis_lower_bound`]; ties go to the smallest `p`.
pub fn best_lower_bound(x: &HermitianMatrix, y: &HermitianMatrix, q: f64, grid: &[f64]) -> Result<(f64, f64)> {
    if grid.is_empty() {
        return Err(Error::Invalid("empty p grid".into()));
    }
    let mut best: Option<(f64, f64)> = None;
    for &p in grid {
        let v = tsallis_lower_bound(x, y, q, p)?;
        best = match best {
            Some((bp, bv)) if bv > v || (bv == v && bp <= p) => Some((bp, bv)),
            _ => Some((p, v)),
        };
    }
    Ok(best.expect("grid is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{random_positive, random_state};
    use crate::rng::TrialRng;

    fn pair(seed: u64, dim: usize) -> DensityPair {
        let mut rng = TrialRng::new(seed, 0, "pair");
        DensityPair::new(random_state(dim, &mut rng), random_state(dim, &mut rng)).unwrap()
    }

    #[test]
    fn equal_arguments_give_zero() {
        let x = random_positive(3, 0.1, 3.0, &mut TrialRng::new(1, 0, "x"));
        assert!(tsallis_relative_entropy(&x, &x, 0.5).unwrap().abs() < 1e-12);
        assert!(umegaki_relative_entropy(&x, &x).unwrap().abs() < 1e-12);
    }

    #[test]
    fn umegaki_matches_scalar_kl() {
        let x = HermitianMatrix::from_diagonal(&[0.5, 0.5]);
        let y = HermitianMatrix::from_diagonal(&[0.75, 0.25]);
        let want = 0.5 * (2.0f64 / 3.0).ln() + 0.5 * 2.0f64.ln();
        assert!((umegaki_relative_entropy(&x, &y).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn states_have_nonnegative_entropies() {
        for s in 0..200 {
            let pr = pair(s, 2 + (s as usize) % 5);
            assert!(tsallis_relative_entropy(pr.rho(), pr.sigma(), 0.5).unwrap() >= -1e-10);
            assert!(umegaki_relative_entropy(pr.rho(), pr.sigma()).unwrap() >= -1e-10);
        }
    }

    #[test]
    fn near_one_approaches_umegaki() {
        let pr = pair(7, 4);
        let u = umegaki_relative_entropy(pr.rho(), pr.sigma()).unwrap();
        let d = tsallis_relative_entropy(pr.rho(), pr.sigma(), 1.0 - 1e-6).unwrap();
        assert!((d - u).abs() < 1e-4);
        assert_eq!(tsallis_relative_entropy(pr.rho(), pr.sigma(), 1.0).unwrap(), u);
    }

    #[test]
    fn rejects_bad_parameters_and_inputs() {
        let x = HermitianMatrix::identity(2);
        assert!(tsallis_relative_entropy(&x, &x, 1.5).is_err());
        let bad = HermitianMatrix::from_diagonal(&[1.0, 0.0]);
        assert!(matches!(
            umegaki_relative_entropy(&x, &bad),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(DensityPair::new(x.clone(), x.scale(0.5)).is_err());
        assert!(DensityPair::new(
            HermitianMatrix::from_diagonal(&[1.0, 0.0]),
            HermitianMatrix::from_diagonal(&[0.5, 0.5])
        )
        .is_err());
    }

    #[test]
    fn overlap_examples() {
        let pr = pair(3, 3);
        let same = DensityPair::new(pr.rho().clone(), pr.rho().clone()).unwrap();
        assert!((state_overlap_bound(&same, 0.3).unwrap() - 1.0).abs() < 1e-12);
        assert!((state_overlap_bound(&pr, 0.0).unwrap() - 1.0).abs() < 1e-12);
        let v = state_overlap_bound(&pr, 0.5).unwrap();
        assert!(v > 0.0 && v <= 1.0 + 1e-10);
    }

    #[test]
    fn lower_bound_examples() {
        let mut rng = TrialRng::new(4, 0, "lb");
        let x = random_positive(3, 0.1, 2.0, &mut rng);
        let y0 = random_positive(3, 0.1, 2.0, &mut rng);
        let y = y0.scale(x.trace() / y0.trace());
        for p in [-1.0, 0.0, 0.3, 0.8] {
            assert!(tsallis_lower_bound(&x, &y, 0.8, p).unwrap().abs() < 1e-12);
        }
        let (p, b) = best_lower_bound(&x, &y, 0.8, &[0.2, 0.5, 0.8]).unwrap();
        assert!(b.abs() < 1e-12);
        // all equal up to rounding; the tie rule picks the smallest unless
        // rounding separates them
        assert!([0.2, 0.5, 0.8].contains(&p));
        let (p, _) = best_lower_bound(&x, &y0, 0.8, &[0.8]).unwrap();
        assert_eq!(p, 0.8);
        assert!(best_lower_bound(&x, &y, 0.8, &[]).is_err());
        assert!(tsallis_lower_bound(&x, &y, 0.8, 0.9).is_err());
        assert!(tsallis_lower_bound(&x, &y, 1.2, 0.5).is_err());
    }

    #[test]
    fn exact_ties_pick_smallest_p() {
        let x = HermitianMatrix::identity(2);
        let (p, b) = best_lower_bound(&x, &x, 0.9, &[0.5, 0.1, 0.9]).unwrap();
        assert_eq!((p, b), (0.1, 0.0));
    }

    #[test]
    fn lower_bound_is_valid_and_monotone() {
        for s in 0..300u64 {
            let mut rng = TrialRng::new(5, s, "lb");
            let x = random_positive(3, 0.05, 3.0, &mut rng);
            let y = random_positive(3, 0.05, 3.0, &mut rng);
            let q = 0.1 + 0.9 * (s as f64 / 300.0);
            let d = tsallis_relative_entropy(&x, &y, q).unwrap();
            let grid: Vec<f64> = (0..=8).map(|k| q * k as f64 / 8.0 - 0.5).collect();
            for w in grid.windows(2) {
                let lo = tsallis_lower_bound(&x, &y, q, w[0]).unwrap();
                let hi = tsallis_lower_bound(&x, &y, q, w[1]).unwrap();
                assert!(hi <= d + 1e-8 * (1.0 + d.abs()));
                // the bound is a secant slope of a convex function of p
                assert!(lo <= hi + 1e-12 * (1.0 + hi.abs()));
            }
        }
    }

    #[test]
    fn largest_grid_point_wins_for_unequal_traces() {
        let x = HermitianMatrix::identity(2);
        let y = HermitianMatrix::identity(2).scale(0.25);
        let grid = [0.2, 0.4, 0.6, 0.8];
        let (p, b) = best_lower_bound(&x, &y, 0.8, &grid).unwrap();
        assert_eq!(p, 0.8);
        assert!((b - tsallis_lower_bound(&x, &y, 0.8, 0.8).unwrap()).abs() == 0.0);
    }

    #[test]
    fn bound_at_one_is_the_limit() {
        let a = 2.0f64;
        let c = 0.5f64;
        let lim = trace_bound(a, c, 1.0);
        assert!((lim - a * (a / c).ln()).abs() < 1e-15);
        assert!((trace_bound(a, c, 1.0 - 1e-6) - lim).abs() < 1e-5);
    }
}
