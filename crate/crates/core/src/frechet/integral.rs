//! Integral representations of `D(x^p)`, `D log_q` and `D exp_q`.
//!
//! Everything is evaluated in the eigenbasis of `x`, where the resolvent
//! sandwich `(x + λ)^{-1} h (x + λ)^{-1}` has entries
//! `h̃_ij / ((μ_i + λ)(μ_j + λ))`; the λ-integral of each entry is done by
//! [`resolvent_kernel`].

use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::quadrature::{resolvent_kernel, QuadratureSpec};
use super::{dfrechet_divided_difference, DeformedExp, DeformedLog, FrechetResult, Method};
use crate::deformed::{is_classical, require_domain, DomainConstraint};
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, HermitianMatrix, C64};

const EXACT: f64 = 1e-12;

fn same_dim(x: &HermitianMatrix, h: &HermitianMatrix) -> Result<()> {
    if x.dim() == h.dim() {
        Ok(())
    } else {
        Err(Error::Dimension {
            expected: x.dim(),
            found: h.dim(),
        })
    }
}

fn weights_of(m: &CMatrix) -> DMatrix<f64> {
    m.map(|z| z.norm_sqr())
}

/// `prefactor · ∫ λ^p (x+λ)^{-1} h (x+λ)^{-1} dλ` in the eigenbasis.
fn sandwich(mu: &[f64], ht: &CMatrix, p: f64, prefactor: f64, spec: &QuadratureSpec) -> Result<(CMatrix, f64)> {
    let (k, est) = resolvent_kernel(mu, p, &weights_of(ht), spec)?;
    let out = CMatrix::from_fn(mu.len(), mu.len(), |i, j| ht[(i, j)] * (prefactor * k[(i, j)]));
    Ok((out, est * prefactor.abs()))
}

/// `D(x^p)h` in the eigenbasis of `x` (eigenvalues `mu`, direction `ht`).
fn power_in_eigenbasis(mu: &[f64], ht: &CMatrix, p: f64, spec: &QuadratureSpec) -> Result<(CMatrix, f64)> {
    let n = mu.len();
    if (p > -1.0 && p < 0.0) || (p > 0.0 && p < 1.0) {
        // sin(pπ)/π: the (0,1) formula; for -1<p<0 this is -sin((p+1)π)/π
        sandwich(mu, ht, p, (p * PI).sin() / PI, spec)
    } else if p > 1.0 && p < 2.0 {
        // D(x^{p0+1})h = (h x^{p0} + x^{p0} h)/2 + D(x^{p0})((xh + hx)/2)
        let p0 = p - 1.0;
        let pw: Vec<f64> = mu.iter().map(|m| m.powf(p0)).collect();
        let sym = CMatrix::from_fn(n, n, |i, j| ht[(i, j)] * (0.5 * (mu[i] + mu[j])));
        let (inner, est) = sandwich(mu, &sym, p0, (p0 * PI).sin() / PI, spec)?;
        let outer = CMatrix::from_fn(n, n, |i, j| ht[(i, j)] * (0.5 * (pw[i] + pw[j])));
        Ok((outer + inner, est))
    } else {
        Err(Error::UnsupportedExponent(p))
    }
}

/// `D(x^p)h` for `p ∈ (−1, 0) ∪ (0, 1) ∪ (1, 2)` by quadrature.
pub fn dfrechet_power_integral(
    x: &HermitianMatrix,
    h: &HermitianMatrix,
    p: f64,
    spec: &QuadratureSpec,
) -> Result<FrechetResult> {
    same_dim(x, h)?;
    x.require_positive_definite("x")?;
    let dec = x.spectral();
    let ht = dec.to_eigenbasis(h.as_matrix());
    let (v, est) = power_in_eigenbasis(&dec.eigenvalues, &ht, p, spec)?;
    Ok(FrechetResult {
        value: dec.from_eigenbasis(&v),
        method: Method::Quadrature,
        est_error: est,
    })
}

/// Classical `D log(x)h = ∫ (x+λ)^{-1} h (x+λ)^{-1} dλ`.
pub fn dfrechet_log(x: &HermitianMatrix, h: &HermitianMatrix, spec: &QuadratureSpec) -> Result<FrechetResult> {
    same_dim(x, h)?;
    x.require_positive_definite("x")?;
    let dec = x.spectral();
    let ht = dec.to_eigenbasis(h.as_matrix());
    let (v, est) = sandwich(&dec.eigenvalues, &ht, 0.0, 1.0, spec)?;
    Ok(FrechetResult {
        value: dec.from_eigenbasis(&v),
        method: Method::Quadrature,
        est_error: est,
    })
}

/// `D log_q(x)h` for `q > 1`.
///
/// `1 < q < 2` integrates the deformed-log representation directly;
/// `q = 2` is the identity map; `2 < q < 3` goes through
/// `D(x^{q−1})h / (q − 1)`; larger `q` falls back to divided differences.
pub fn dfrechet_log_q(
    x: &HermitianMatrix,
    h: &HermitianMatrix,
    q: f64,
    spec: &QuadratureSpec,
) -> Result<FrechetResult> {
    same_dim(x, h)?;
    if !(q > 1.0) || is_classical(q) {
        return Err(Error::UnsupportedParameter(format!(
            "D log_q needs q > 1, got q = {q}"
        )));
    }
    x.require_positive_definite("x")?;
    let d = q - 1.0;
    if q < 2.0 {
        let dec = x.spectral();
        let ht = dec.to_eigenbasis(h.as_matrix());
        let (v, est) = sandwich(&dec.eigenvalues, &ht, d, (d * PI).sin() / (d * PI), spec)?;
        Ok(FrechetResult {
            value: dec.from_eigenbasis(&v),
            method: Method::Quadrature,
            est_error: est,
        })
    } else if (q - 2.0).abs() < EXACT {
        Ok(FrechetResult {
            value: h.as_matrix().clone(),
            method: Method::ClosedForm,
            est_error: 0.0,
        })
    } else if q < 3.0 {
        Ok(dfrechet_power_integral(x, h, d, spec)?.scaled(1.0 / d))
    } else {
        dfrechet_divided_difference(x, h, &DeformedLog(q))
    }
}

/// Which representation `D exp_q` is evaluated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpQCase {
    /// `q < 0`: `1/(q−1) ∈ (−1, 0)`.
    Negative,
    /// `q = 3/2`: `exp_{3/2}(y − 2) = y²/4`.
    ThreeHalves,
    /// `3/2 < q < 2`: `1/(q−1) ∈ (1, 2)`, product rule.
    BelowTwo,
    /// `q = 2`: `exp_2(y − 1) = y`.
    Two,
    /// `q > 2`: `1/(q−1) ∈ (0, 1)`.
    AboveTwo,
    /// `0 ≤ q < 3/2` (including the classical exponential): no integral
    /// form, divided differences are used.
    Uncovered,
}

impl ExpQCase {
    pub fn of(q: f64) -> Self {
        if q < 0.0 {
            ExpQCase::Negative
        } else if (q - 1.5).abs() < EXACT {
            ExpQCase::ThreeHalves
        } else if (q - 2.0).abs() < EXACT {
            ExpQCase::Two
        } else if q > 1.5 && q < 2.0 {
            ExpQCase::BelowTwo
        } else if q > 2.0 {
            ExpQCase::AboveTwo
        } else {
            ExpQCase::Uncovered
        }
    }
}

/// `D exp_q(x)h`.
///
/// For `q > 1` the argument is shifted to `y = x + 1/(q−1) > 0`, where
/// `exp_q(x) = (q−1)^{1/(q−1)} y^{1/(q−1)}`. For `q < 0` the admissible
/// spectrum lies below `1/(1−q)`, so the mirrored `z = 1/(1−q) − x > 0` is
/// used: `exp_q(x) = (1−q)^{1/(q−1)} z^{1/(q−1)}` and the direction flips
/// sign. Parameters without an integral form use divided differences and
/// say so in [`FrechetResult::method`].
pub fn dfrechet_exp_q(
    x: &HermitianMatrix,
    h: &HermitianMatrix,
    q: f64,
    spec: &QuadratureSpec,
) -> Result<FrechetResult> {
    same_dim(x, h)?;
    require_domain(x, &DomainConstraint::for_q(q), "exp_q argument")?;
    let case = ExpQCase::of(q);
    if case == ExpQCase::Uncovered {
        return dfrechet_divided_difference(x, h, &DeformedExp(q));
    }
    let dec = x.spectral();
    let ht = dec.to_eigenbasis(h.as_matrix());
    let n = x.dim();
    let d = q - 1.0;
    let p = 1.0 / d;
    let (v, est, method) = match case {
        ExpQCase::Negative => {
            let z: Vec<f64> = dec.eigenvalues.iter().map(|m| -1.0 / d - m).collect();
            let (v, est) = power_in_eigenbasis(&z, &ht, p, spec)?;
            let c = -(-d).powf(p);
            (v * C64::new(c, 0.0), est * c.abs(), Method::Quadrature)
        }
        ExpQCase::ThreeHalves => {
            let y: Vec<f64> = dec.eigenvalues.iter().map(|m| m + 2.0).collect();
            let v = CMatrix::from_fn(n, n, |i, j| ht[(i, j)] * (0.25 * (y[i] + y[j])));
            (v, 0.0, Method::ClosedForm)
        }
        ExpQCase::Two => (ht, 0.0, Method::ClosedForm),
        ExpQCase::BelowTwo | ExpQCase::AboveTwo => {
            let y: Vec<f64> = dec.eigenvalues.iter().map(|m| m + p).collect();
            let (v, est) = power_in_eigenbasis(&y, &ht, p, spec)?;
            let c = d.powf(p);
            (v * C64::new(c, 0.0), est * c, Method::Quadrature)
        }
        ExpQCase::Uncovered => unreachable!(),
    };
    Ok(FrechetResult {
        value: dec.from_eigenbasis(&v),
        method,
        est_error: est,
    })
}
