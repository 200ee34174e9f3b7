//! Quadrature on `(0, ∞)` for the resolvent integrals behind the power,
//! `log_q` and `exp_q` representations.
//!
//! All integrands are written in the logarithmic variable `s = ln λ`, where
//! they decay exponentially at both ends. The default transform is the
//! double-exponential `s = c + (π/2) sinh t` with the trapezoid rule in `t`;
//! the rational map `λ = κ u/(1 − u)` with Gauss–Legendre in `u` is kept as
//! an alternative. Either way the node count is doubled (at most twice) until
//! the difference between consecutive levels falls under the tolerance.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Transform {
    TanhSinh,
    RationalMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub transform: Transform,
    /// Accepted level-to-level change, relative to `max(1, ‖result‖)`.
    pub abs_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes: 400,
            transform: Transform::TanhSinh,
            abs_tol: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn new(nodes: usize, transform: Transform, abs_tol: f64) -> Result<Self> {
        if nodes < 16 {
            return Err(Error::Invalid(format!("quadrature needs at least 16 nodes, got {nodes}")));
        }
        if !(abs_tol > 0.0) {
            return Err(Error::Invalid(format!("quadrature tolerance must be positive, got {abs_tol}")));
        }
        Ok(Self {
            nodes,
            transform,
            abs_tol,
        })
    }
}

/// How the integrand behaves in `s = ln λ`: it must decay like
/// `exp(lower_rate · s)` as `s → −∞` and `exp(−upper_rate · s)` as `s → ∞`.
#[derive(Debug, Clone, Copy)]
pub struct HalfLine {
    /// `s` around which the integrand has its mass.
    pub center: f64,
    /// How far from `center` features of the integrand extend.
    pub spread: f64,
    pub lower_rate: f64,
    pub upper_rate: f64,
}

#[derive(Debug, Clone)]
pub struct Integral {
    pub values: Vec<f64>,
    pub est_error: f64,
}

/// Integrates the vector-valued `g(s, λ, out)` (already multiplied by `λ`,
/// i.e. with respect to `ds`) over the real line in `s`.
///
/// `weights` defines the norm `sqrt(Σ w_k v_k²)` used for the error estimate
/// and the acceptance test.
pub fn integrate<G>(spec: &QuadratureSpec, shape: HalfLine, weights: &[f64], g: G) -> Result<Integral>
where
    G: Fn(f64, &mut [f64]),
{
    let len = weights.len();
    let norm = |v: &[f64]| -> f64 {
        v.iter()
            .zip(weights)
            .map(|(x, w)| w * x * x)
            .sum::<f64>()
            .sqrt()
    };
    let diff_norm = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .zip(weights)
            .map(|((x, y), w)| w * (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    };

    let mut levels = Levels::new(spec, shape, len);
    let mut coarse = levels.next(&g);
    let mut est = f64::INFINITY;
    for _ in 0..2 {
        let fine = levels.next(&g);
        est = diff_norm(&fine, &coarse);
        if est <= spec.abs_tol * norm(&fine).max(1.0) {
            return Ok(Integral {
                values: fine,
                est_error: est,
            });
        }
        coarse = fine;
    }
    Err(Error::Accuracy {
        est_error: est,
        tolerance: spec.abs_tol * norm(&coarse).max(1.0),
    })
}

enum Levels {
    Sinh {
        center: f64,
        half_range: f64,
        step: f64,
        level: u32,
        acc: Vec<f64>,
        len: usize,
    },
    Legendre {
        center: f64,
        nodes: usize,
        len: usize,
    },
}

impl Levels {
    fn new(spec: &QuadratureSpec, shape: HalfLine, len: usize) -> Self {
        match spec.transform {
            Transform::TanhSinh => {
                let rate = shape.lower_rate.min(shape.upper_rate);
                assert!(rate > 0.0, "integrand must decay at both ends");
                // 50 e-folds below the peak at both truncation points
                let reach = (50.0 + shape.spread) / rate;
                let half_range = (reach / FRAC_PI_2).asinh();
                let k = (spec.nodes.max(3) - 1) / 2;
                Levels::Sinh {
                    center: shape.center,
                    half_range,
                    step: half_range / k as f64,
                    level: 0,
                    acc: vec![0.0; len],
                    len,
                }
            }
            Transform::RationalMap => Levels::Legendre {
                center: shape.center,
                nodes: spec.nodes,
                len,
            },
        }
    }

    fn next<G: Fn(f64, &mut [f64])>(&mut self, g: &G) -> Vec<f64> {
        match self {
            Levels::Sinh {
                center,
                half_range,
                step,
                level,
                acc,
                len,
            } => {
                let mut buf = vec![0.0; *len];
                let mut add = |t: f64, acc: &mut Vec<f64>| {
                    let s = *center + FRAC_PI_2 * t.sinh();
                    let jac = FRAC_PI_2 * t.cosh();
                    g(s, &mut buf);
                    for (a, v) in acc.iter_mut().zip(&buf) {
                        *a += v * jac;
                    }
                };
                if *level == 0 {
                    let k = (*half_range / *step).round() as i64;
                    for i in -k..=k {
                        add(i as f64 * *step, acc);
                    }
                } else {
                    // odd multiples of the new step
                    let h = *step / 2f64.powi(*level as i32);
                    let m = (*half_range / h).round() as i64;
                    let mut i = -m + if m % 2 == 0 { 1 } else { 0 };
                    while i <= m {
                        add(i as f64 * h, acc);
                        i += 2;
                    }
                }
                let h = *step / 2f64.powi(*level as i32);
                *level += 1;
                acc.iter().map(|a| a * h).collect()
            }
            Levels::Legendre { center, nodes, len } => {
                let (xs, ws) = gauss_legendre_unit(*nodes);
                let mut out = vec![0.0; *len];
                let mut buf = vec![0.0; *len];
                for (&u, &w) in xs.iter().zip(&ws) {
                    let s = *center + u.ln() - (-u).ln_1p();
                    let jac = 1.0 / (u * (1.0 - u));
                    g(s, &mut buf);
                    for (o, v) in out.iter_mut().zip(&buf) {
                        *o += w * jac * v;
                    }
                }
                *nodes *= 2;
                out
            }
        }
    }
}

/// Gauss–Legendre nodes and weights on `(0, 1)`.
pub fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = x;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = 0.5 * (1.0 - x);
        xs[n - 1 - i] = 0.5 * (1.0 + x);
        ws[i] = 0.5 * w;
        ws[n - 1 - i] = 0.5 * w;
    }
    (xs, ws)
}

/// `λ^{p+1} / ((a + λ)(b + λ))` at `λ = e^s`, evaluated without overflow.
#[inline]
pub(crate) fn resolvent_pair(s: f64, p: f64, a: f64, b: f64) -> f64 {
    if s > 0.0 {
        let e = (-s).exp();
        ((p - 1.0) * s).exp() / ((1.0 + a * e) * (1.0 + b * e))
    } else {
        let l = s.exp();
        ((p + 1.0) * s).exp() / ((a + l) * (b + l))
    }
}

/// `K_ij = ∫_0^∞ λ^p (μ_i + λ)^{-1} (μ_j + λ)^{-1} dλ` for `p ∈ (−1, 1)` and
/// positive `μ`. `weights[i][j]` enters the error norm as
/// `sqrt(Σ weights_ij ΔK_ij²)`, so passing `|h̃_ij|²` measures the error of
/// `K ∘ h̃` in Frobenius norm.
pub fn resolvent_kernel(
    mu: &[f64],
    p: f64,
    weights: &nalgebra::DMatrix<f64>,
    spec: &QuadratureSpec,
) -> Result<(nalgebra::DMatrix<f64>, f64)> {
    let n = mu.len();
    let logs: Vec<f64> = mu.iter().map(|m| m.ln()).collect();
    let center = logs.iter().sum::<f64>() / n as f64;
    let spread = logs.iter().map(|l| (l - center).abs()).fold(0.0, f64::max);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let w: Vec<f64> = pairs
        .iter()
        .map(|&(i, j)| {
            if i == j {
                weights[(i, i)]
            } else {
                weights[(i, j)] + weights[(j, i)]
            }
        })
        .collect();
    let shape = HalfLine {
        center,
        spread,
        lower_rate: 1.0 + p,
        upper_rate: 1.0 - p,
    };
    let res = integrate(spec, shape, &w, |s, out| {
        for (o, &(i, j)) in out.iter_mut().zip(&pairs) {
            *o = resolvent_pair(s, p, mu[i], mu[j]);
        }
    })?;
    let mut k = nalgebra::DMatrix::zeros(n, n);
    for (&(i, j), &v) in pairs.iter().zip(&res.values) {
        k[(i, j)] = v;
        k[(j, i)] = v;
    }
    Ok((k, res.est_error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn scalar(spec: &QuadratureSpec, shape: HalfLine, g: impl Fn(f64) -> f64) -> f64 {
        integrate(spec, shape, &[1.0], |s, out| out[0] = g(s)).unwrap().values[0]
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(15, Transform::TanhSinh, 1e-8).is_err());
        assert!(QuadratureSpec::new(16, Transform::TanhSinh, 0.0).is_err());
        assert!(QuadratureSpec::new(16, Transform::RationalMap, 1e-6).is_ok());
    }

    #[test]
    fn beta_integral() {
        // ∫ λ^p/(t+λ)^2 dλ = t^{p-1} pπ / sin(pπ)
        let spec = QuadratureSpec::default();
        for &p in &[-0.9, -0.5, -0.1, 0.1, 0.5, 0.95] {
            for &t in &[0.05, 1.0, 30.0] {
                let shape = HalfLine {
                    center: f64::ln(t),
                    spread: 0.0,
                    lower_rate: 1.0 + p,
                    upper_rate: 1.0 - p,
                };
                let got = scalar(&spec, shape, |s| resolvent_pair(s, p, t, t));
                let want = t.powf(p - 1.0) * p * PI / (p * PI).sin();
                assert!((got - want).abs() <= 1e-11 * want.abs(), "p={p} t={t} got={got} want={want}");
            }
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre_unit(20);
        let s: f64 = w.iter().sum();
        assert!((s - 1.0).abs() < 1e-14);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(7)).sum();
        assert!((m - 1.0 / 8.0).abs() < 1e-14);
    }

    #[test]
    fn rational_map_handles_smooth_endpoint_behaviour() {
        // p = 0: integrand ~ λ^1 at 0 in ds, smooth enough for Gauss–Legendre
        let spec = QuadratureSpec::new(200, Transform::RationalMap, 1e-6).unwrap();
        let shape = HalfLine {
            center: 0.0,
            spread: 0.0,
            lower_rate: 1.0,
            upper_rate: 1.0,
        };
        let got = scalar(&spec, shape, |s| resolvent_pair(s, 0.0, 1.0, 2.0));
        assert!((got - f64::ln(2.0)).abs() < 1e-6);
    }

    #[test]
    fn non_convergence_is_an_accuracy_error() {
        let spec = QuadratureSpec::new(16, Transform::RationalMap, 1e-14).unwrap();
        let shape = HalfLine {
            center: 0.0,
            spread: 0.0,
            lower_rate: 0.1,
            upper_rate: 1.9,
        };
        let err = integrate(&spec, shape, &[1.0], |s, out| out[0] = resolvent_pair(s, -0.9, 1.0, 1.0));
        assert!(matches!(err, Err(Error::Accuracy { est_error, .. }) if est_error > 0.0));
    }
}
