//! Random matrix ensembles whose spectra are placed inside a domain constraint.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::deformed::{DomainConstraint, Side};
use crate::matrix::{CMatrix, HermitianMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnsembleKind {
    GaussianHermitian,
    RealSymmetric,
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub constraint: DomainConstraint,
    pub spectrum_width: f64,
    /// Distance kept between the spectrum and the constraint bound.
    pub offset: f64,
}

pub const DEFAULT_OFFSET: f64 = 0.05;
pub const DEFAULT_WIDTH: f64 = 2.0;
/// Spectra never start farther than this from the origin, which keeps
/// `exp_q` representable when the bound `−1/(q−1)` recedes as `q → 1`.
pub const MAX_REACH: f64 = 20.0;

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, constraint: DomainConstraint) -> Self {
        Self {
            kind,
            constraint,
            spectrum_width: DEFAULT_WIDTH,
            offset: DEFAULT_OFFSET,
        }
    }

    pub fn with_width(mut self, width: f64) -> Self {
        self.spectrum_width = width;
        self
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    /// Closed interval the generated spectra are drawn from.
    pub fn interval(&self) -> (f64, f64) {
        let c = &self.constraint;
        let gap = self.offset.max(2.0 * c.margin);
        match c.side {
            Side::BoundedBelow => {
                let lo = (c.bound + gap).max(-MAX_REACH);
                (lo, lo + self.spectrum_width)
            }
            Side::BoundedAbove => {
                let hi = (c.bound - gap).min(MAX_REACH);
                (hi - self.spectrum_width, hi)
            }
            Side::Unconstrained => (-0.5 * self.spectrum_width, 0.5 * self.spectrum_width),
        }
    }
}

pub fn gaussian_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = CMatrix::zeros(n, n);
    for r in 0..n {
        m[(r, r)] = C64::new(rng.sample(StandardNormal), 0.0);
        for c in r + 1..n {
            let z = C64::new(rng.sample::<f64, _>(StandardNormal) * s, rng.sample::<f64, _>(StandardNormal) * s);
            m[(r, c)] = z;
            m[(c, r)] = z.conj();
        }
    }
    HermitianMatrix::symmetrized(m)
}

pub fn real_symmetric<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    let mut m = CMatrix::zeros(n, n);
    for r in 0..n {
        m[(r, r)] = C64::new(rng.sample(StandardNormal), 0.0);
        for c in r + 1..n {
            let x: f64 = rng.sample(StandardNormal);
            m[(r, c)] = C64::new(x * std::f64::consts::FRAC_1_SQRT_2, 0.0);
            m[(c, r)] = m[(r, c)];
        }
    }
    HermitianMatrix::symmetrized(m)
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn general<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal) * s, rng.sample::<f64, _>(StandardNormal) * s)
    })
}

fn haar_like<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    gaussian_hermitian(n, rng).spectral().eigenvectors.clone()
}

/// Draws a matrix from `spec` whose spectrum lies inside `spec.interval()`.
///
/// The spectrum of a base ensemble draw is mapped affinely onto a random
/// sub-interval, so both the eigenvectors and the eigenvalue spacing come
/// from the base ensemble.
pub fn generate<R: Rng + ?Sized>(spec: &EnsembleSpec, dim: usize, rng: &mut R) -> HermitianMatrix {
    assert!(dim >= 1, "dimension must be at least 1");
    let (lo, hi) = spec.interval();
    let mut a = rng.random_range(lo..=hi);
    let mut b = rng.random_range(lo..=hi);
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    match spec.kind {
        EnsembleKind::Diagonal => {
            let values: Vec<f64> = (0..dim).map(|_| rng.random_range(lo..=hi)).collect();
            HermitianMatrix::from_diagonal(&values)
        }
        EnsembleKind::GaussianHermitian | EnsembleKind::RealSymmetric => {
            let base = if spec.kind == EnsembleKind::GaussianHermitian {
                gaussian_hermitian(dim, rng)
            } else {
                real_symmetric(dim, rng)
            };
            let dec = base.spectral();
            let (min, max) = (dec.eigenvalues[0], dec.eigenvalues[dim - 1]);
            let spread = max - min;
            let values: Vec<f64> = if dim == 1 || spread < 1e-12 {
                vec![a; dim]
            } else {
                dec.eigenvalues
                    .iter()
                    .map(|&l| (a + (b - a) * (l - min) / spread).clamp(lo, hi))
                    .collect()
            };
            HermitianMatrix::from_spectrum(dec.eigenvectors.clone(), &values)
        }
    }
}

/// Positive definite matrix with log-uniform spectrum in `[min_eig, max_eig]`.
pub fn random_positive<R: Rng + ?Sized>(dim: usize, min_eig: f64, max_eig: f64, rng: &mut R) -> HermitianMatrix {
    assert!(0.0 < min_eig && min_eig <= max_eig);
    let (l0, l1) = (min_eig.ln(), max_eig.ln());
    let values: Vec<f64> = (0..dim).map(|_| rng.random_range(l0..=l1).exp()).collect();
    HermitianMatrix::from_spectrum(haar_like(dim, rng), &values)
}

/// Unit-trace positive definite matrix. Eigenvalues are uniform weights
/// raised to a random power to vary the purity, floored at `1e-6`.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HermitianMatrix {
    let power = rng.random_range(0.5..4.0);
    let mut w: Vec<f64> = (0..dim)
        .map(|_| rng.random_range(0.0f64..1.0).powf(power).max(1e-6))
        .collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    let u = haar_like(dim, rng);
    let m = HermitianMatrix::from_spectrum(u, &w);
    // renormalize against rounding in the reconstruction
    m.scale(1.0 / m.trace())
}
