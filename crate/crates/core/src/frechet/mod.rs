//! Fréchet differentials `h ↦ Df(x)h` of spectral matrix functions.
//!
//! Two independent routes are provided. [`dfrechet_divided_difference`] is
//! exact up to rounding: in the eigenbasis of `x` the differential is the
//! Hadamard product of `h` with the matrix of first divided differences of
//! `f`. The functions in [`integral`] instead discretize integral
//! representations of `x^p`, `log_q` and `exp_q` by quadrature.

mod integral;
pub mod quadrature;

pub use integral::{
    dfrechet_exp_q, dfrechet_log, dfrechet_log_q, dfrechet_power_integral, ExpQCase,
};
pub use quadrature::{QuadratureSpec, Transform};

use serde::{Deserialize, Serialize};

use crate::deformed::{exp_q, is_classical, log_q, DomainConstraint};
use crate::error::{Error, Result};
use crate::matrix::{CMatrix, HermitianMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    DividedDifference,
    Quadrature,
    ClosedForm,
}

#[derive(Debug, Clone)]
pub struct FrechetResult {
    pub value: CMatrix,
    pub method: Method,
    /// Estimated absolute error in Frobenius norm.
    pub est_error: f64,
}

impl FrechetResult {
    pub fn asymmetry(&self) -> f64 {
        HermitianMatrix::hermitian_defect(&self.value).2
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::from_matrix(self.value.clone())
    }

    pub fn trace(&self) -> f64 {
        crate::matrix::real_trace(&self.value)
    }

    pub(crate) fn scaled(mut self, s: f64) -> Self {
        self.value *= C64::new(s, 0.0);
        self.est_error *= s.abs();
        self
    }
}

/// A real function of one variable together with its derivative, applied
/// spectrally.
pub trait SpectralFn {
    fn value(&self, t: f64) -> f64;
    fn derivative(&self, t: f64) -> f64;
    fn admits(&self, t: f64) -> bool {
        self.value(t).is_finite()
    }
    fn name(&self) -> String {
        "f".into()
    }
}

/// `t ↦ t^p` on `t > 0`.
#[derive(Debug, Clone, Copy)]
pub struct Power(pub f64);

impl SpectralFn for Power {
    fn value(&self, t: f64) -> f64 {
        t.powf(self.0)
    }
    fn derivative(&self, t: f64) -> f64 {
        self.0 * t.powf(self.0 - 1.0)
    }
    fn admits(&self, t: f64) -> bool {
        t > 0.0
    }
    fn name(&self) -> String {
        format!("t^{}", self.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DeformedLog(pub f64);

impl SpectralFn for DeformedLog {
    fn value(&self, t: f64) -> f64 {
        log_q(t, self.0).unwrap_or(f64::NAN)
    }
    fn derivative(&self, t: f64) -> f64 {
        crate::deformed::log_q_derivative(t, self.0)
    }
    fn admits(&self, t: f64) -> bool {
        t > 0.0
    }
    fn name(&self) -> String {
        format!("log_{}", self.0)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DeformedExp(pub f64);

impl SpectralFn for DeformedExp {
    fn value(&self, t: f64) -> f64 {
        exp_q(t, self.0).unwrap_or(f64::NAN)
    }
    fn derivative(&self, t: f64) -> f64 {
        exp_q(t, self.0).map_or(f64::NAN, |e| e.powf(2.0 - self.0))
    }
    fn admits(&self, t: f64) -> bool {
        DomainConstraint::for_q(self.0).admits(t)
    }
    fn name(&self) -> String {
        if is_classical(self.0) {
            "exp".into()
        } else {
            format!("exp_{}", self.0)
        }
    }
}

/// Adapter for a pair of closures.
pub struct FnPair<F, G>(pub F, pub G);

impl<F: Fn(f64) -> f64, G: Fn(f64) -> f64> SpectralFn for FnPair<F, G> {
    fn value(&self, t: f64) -> f64 {
        (self.0)(t)
    }
    fn derivative(&self, t: f64) -> f64 {
        (self.1)(t)
    }
}

/// Eigenvalues closer than this (relative) use `f'` at their midpoint.
pub const CLUSTER_TOL: f64 = 1e-7;

/// First divided difference `f[a, b]`.
pub fn divided_difference<F: SpectralFn + ?Sized>(f: &F, a: f64, b: f64) -> f64 {
    if (a - b).abs() < CLUSTER_TOL * (1.0 + a.abs()) {
        f.derivative(0.5 * (a + b))
    } else {
        (f.value(a) - f.value(b)) / (a - b)
    }
}

fn check_spectrum<F: SpectralFn + ?Sized>(x: &HermitianMatrix, f: &F) -> Result<()> {
    if let Some(&bad) = x.eigenvalues().iter().find(|&&l| !f.admits(l)) {
        return Err(Error::domain(
            format!("Fréchet differential of {}", f.name()),
            bad,
            "eigenvalue in the domain of f",
        ));
    }
    Ok(())
}

/// `Df(x)h` by the divided-difference (Daleckii–Krein) formula.
pub fn dfrechet_divided_difference<F: SpectralFn + ?Sized>(
    x: &HermitianMatrix,
    h: &HermitianMatrix,
    f: &F,
) -> Result<FrechetResult> {
    if x.dim() != h.dim() {
        return Err(Error::Dimension {
            expected: x.dim(),
            found: h.dim(),
        });
    }
    check_spectrum(x, f)?;
    let dec = x.spectral();
    let l = &dec.eigenvalues;
    let mut ht = dec.to_eigenbasis(h.as_matrix());
    let n = x.dim();
    for j in 0..n {
        for i in 0..n {
            ht[(i, j)] *= divided_difference(f, l[i], l[j]);
        }
    }
    Ok(FrechetResult {
        value: dec.from_eigenbasis(&ht),
        method: Method::DividedDifference,
        est_error: 0.0,
    })
}

/// Central difference `(f(x + εh) − f(x − εh)) / 2ε` with `ε` scaled to `‖h‖`.
pub fn dfrechet_finite_difference<F: SpectralFn + ?Sized>(
    x: &HermitianMatrix,
    h: &HermitianMatrix,
    f: &F,
    step: f64,
) -> Result<CMatrix> {
    let norm = h.frobenius_norm();
    if norm == 0.0 {
        return Ok(CMatrix::zeros(x.dim(), x.dim()));
    }
    let eps = step / norm;
    let plus = x + &h.scale(eps);
    let minus = x - &h.scale(eps);
    check_spectrum(&plus, f)?;
    check_spectrum(&minus, f)?;
    let fp = plus.apply_spectral(|t| f.value(t))?;
    let fm = minus.apply_spectral(|t| f.value(t))?;
    Ok((fp.as_matrix() - fm.as_matrix()) * C64::new(0.5 / eps, 0.0))
}
