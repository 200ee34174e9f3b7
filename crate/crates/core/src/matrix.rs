//! Dense Hermitian matrices and their spectral decompositions.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = nalgebra::Complex<f64>;
pub type CMatrix = DMatrix<C64>;

/// Tolerance used when a literal is checked for Hermiticity, relative to the
/// largest entry.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `eigenvectors`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    fn of(m: &CMatrix) -> Self {
        let eig = SymmetricEigen::new(m.clone());
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let n = m.nrows();
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `U diag(values) U*`.
    pub fn reconstruct_with(&self, values: &[f64]) -> CMatrix {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (j, &v) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(v);
        }
        scaled * u.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(&self.eigenvalues)
    }

    /// Express `m` in the eigenbasis: `U* m U`.
    pub fn to_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        self.eigenvectors.adjoint() * m * &self.eigenvectors
    }

    /// Inverse of [`to_eigenbasis`](Self::to_eigenbasis): `U m U*`.
    pub fn from_eigenbasis(&self, m: &CMatrix) -> CMatrix {
        &self.eigenvectors * m * self.eigenvectors.adjoint()
    }
}

/// A dense self-adjoint matrix. Construction symmetrizes the input as
/// `(M + M*)/2`; the spectral decomposition is computed lazily and cached.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    inner: CMatrix,
    spectral: OnceLock<SpectralDecomposition>,
}

impl PartialEq for HermitianMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

impl HermitianMatrix {
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::Invalid("matrix dimension must be at least 1".into()));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Invalid("matrix has non-finite entries".into()));
        }
        Ok(Self::symmetrized(m))
    }

    pub(crate) fn symmetrized(m: CMatrix) -> Self {
        let inner = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        Self {
            inner,
            spectral: OnceLock::new(),
        }
    }

    pub fn from_real(m: DMatrix<f64>) -> Result<Self> {
        Self::from_matrix(m.map(|x| C64::new(x, 0.0)))
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n > 0, "diagonal must be nonempty");
        let inner = CMatrix::from_fn(n, n, |r, c| {
            if r == c {
                C64::new(values[r], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self {
            inner,
            spectral: OnceLock::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_diagonal(&vec![0.0; n])
    }

    /// Builds `U diag(values) U*` and seeds the spectral cache when `values`
    /// is already sorted.
    pub fn from_spectrum(eigenvectors: CMatrix, values: &[f64]) -> Self {
        let mut sorted: Vec<usize> = (0..values.len()).collect();
        sorted.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let n = values.len();
        let eigenvalues: Vec<f64> = sorted.iter().map(|&i| values[i]).collect();
        let eigenvectors = CMatrix::from_fn(n, n, |r, c| eigenvectors[(r, sorted[c])]);
        let dec = SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        };
        let m = Self::symmetrized(dec.reconstruct());
        let _ = m.spectral.set(dec);
        m
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> CMatrix {
        self.inner
    }

    pub fn spectral(&self) -> &SpectralDecomposition {
        self.spectral
            .get_or_init(|| SpectralDecomposition::of(&self.inner))
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectral().eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().unwrap()
    }

    pub fn trace(&self) -> f64 {
        self.inner.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.norm()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.min_eigenvalue() > 0.0
    }

    pub fn require_positive_definite(&self, operand: &str) -> Result<()> {
        let min = self.min_eigenvalue();
        if min > 0.0 {
            Ok(())
        } else {
            Err(Error::NotPositiveDefinite {
                operand: operand.into(),
                min_eigenvalue: min,
            })
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::symmetrized(&self.inner * C64::new(s, 0.0))
    }

    /// `V A V*` for an arbitrary square `v` (unitary in the covariance checks).
    pub fn conjugate_by(&self, v: &CMatrix) -> Self {
        Self::symmetrized(v * &self.inner * v.adjoint())
    }

    /// Spectral functional calculus `U diag(f(λ_i)) U*`.
    ///
    /// Fails with a domain error naming the first eigenvalue for which `f`
    /// returns a non-finite value.
    pub fn apply_spectral<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        let dec = self.spectral();
        let mut values = Vec::with_capacity(dec.dim());
        for &lambda in &dec.eigenvalues {
            let v = f(lambda);
            if !v.is_finite() {
                return Err(Error::domain(
                    "apply_spectral",
                    lambda,
                    "eigenvalue in the domain of the applied function",
                ));
            }
            values.push(v);
        }
        Ok(Self::symmetrized(dec.reconstruct_with(&values)))
    }

    /// Fallible variant of [`apply_spectral`](Self::apply_spectral).
    pub fn try_apply_spectral<F: Fn(f64) -> Result<f64>>(&self, f: F) -> Result<Self> {
        let dec = self.spectral();
        let values = dec
            .eigenvalues
            .iter()
            .map(|&l| f(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::symmetrized(dec.reconstruct_with(&values)))
    }

    /// Largest entrywise Hermiticity defect of `m`, with its position.
    pub fn hermitian_defect(m: &CMatrix) -> (usize, usize, f64) {
        let mut worst = (0, 0, 0.0);
        for r in 0..m.nrows() {
            for c in r..m.ncols() {
                let d = (m[(r, c)] - m[(c, r)].conj()).norm();
                if d > worst.2 {
                    worst = (r, c, d);
                }
            }
        }
        worst
    }

    pub fn from_literal(lit: &MatrixLiteral) -> Result<Self> {
        let n = lit.dim;
        if n == 0 {
            return Err(Error::Invalid("\"dim\" must be at least 1".into()));
        }
        let check_shape = |name: &str, rows: &Vec<Vec<f64>>| -> Result<()> {
            if rows.len() != n || rows.iter().any(|row| row.len() != n) {
                return Err(Error::Invalid(format!("\"{name}\" must be a {n}x{n} array")));
            }
            Ok(())
        };
        check_shape("re", &lit.re)?;
        if let Some(im) = &lit.im {
            check_shape("im", im)?;
        }
        let m = CMatrix::from_fn(n, n, |r, c| {
            let im = lit.im.as_ref().map_or(0.0, |im| im[r][c]);
            C64::new(lit.re[r][c], im)
        });
        let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let (row, col, deviation) = Self::hermitian_defect(&m);
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { row, col, deviation });
        }
        Self::from_matrix(m)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let lit: MatrixLiteral =
            serde_json::from_str(s).map_err(|e| Error::Invalid(format!("matrix literal: {e}")))?;
        Self::from_literal(&lit)
    }

    pub fn to_literal(&self) -> MatrixLiteral {
        let n = self.dim();
        let re = (0..n)
            .map(|r| (0..n).map(|c| self.inner[(r, c)].re).collect())
            .collect();
        let im: Vec<Vec<f64>> = (0..n)
            .map(|r| (0..n).map(|c| self.inner[(r, c)].im).collect())
            .collect();
        let has_im = im.iter().flatten().any(|&x| x != 0.0);
        MatrixLiteral {
            dim: n,
            re,
            im: has_im.then_some(im),
        }
    }
}

/// JSON matrix literal `{"dim": n, "re": [[...]], "im": [[...]]}`; `im` is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixLiteral {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix::symmetrized(&self.inner + &rhs.inner)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix::symmetrized(&self.inner - &rhs.inner)
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

/// Real part of `Tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

/// `‖a − b‖_F / max(‖b‖_F, floor)`.
pub fn relative_frobenius(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

pub fn real_trace(m: &CMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_unitary(n: usize, seed: u64) -> CMatrix {
        let h = crate::ensemble::gaussian_hermitian(n, &mut crate::rng::TrialRng::new(seed, 0, "u"));
        h.spectral().eigenvectors.clone()
    }

    #[test]
    fn construction_symmetrizes() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(2.0, 1.0),
                C64::new(2.0, -1.0 + 1e-15),
                C64::new(3.0, 0.0),
            ],
        );
        let h = HermitianMatrix::from_matrix(m).unwrap();
        let (_, _, d) = HermitianMatrix::hermitian_defect(h.as_matrix());
        assert_eq!(d, 0.0);
    }

    #[test]
    fn rejects_empty_and_nonsquare() {
        assert!(HermitianMatrix::from_matrix(CMatrix::zeros(0, 0)).is_err());
        assert!(matches!(
            HermitianMatrix::from_matrix(CMatrix::zeros(2, 3)),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn spectral_decomposition_reconstructs() {
        for n in [1, 2, 5, 8] {
            let a = crate::ensemble::gaussian_hermitian(n, &mut crate::rng::TrialRng::new(7, n as u64, "t"));
            let dec = a.spectral();
            assert!(dec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            let err = (dec.reconstruct() - a.as_matrix()).norm();
            assert!(err <= 1e-10 * n as f64, "reconstruction error {err}");
            let u = &dec.eigenvectors;
            let id = CMatrix::identity(n, n);
            assert!((u.adjoint() * u - id).norm() <= 1e-10);
        }
    }

    #[test]
    fn apply_spectral_examples() {
        let a = HermitianMatrix::from_diagonal(&[1.0, 4.0]);
        let s = a.apply_spectral(f64::sqrt).unwrap();
        assert!((s.as_matrix() - HermitianMatrix::from_diagonal(&[1.0, 2.0]).as_matrix()).norm() < 1e-14);

        let id = HermitianMatrix::identity(3);
        let e = id.apply_spectral(|t| t.exp() + 2.0).unwrap();
        let expected = HermitianMatrix::identity(3).scale(1f64.exp() + 2.0);
        assert!((e.as_matrix() - expected.as_matrix()).norm() < 1e-13);
    }

    #[test]
    fn apply_spectral_square_matches_product() {
        let g = crate::ensemble::gaussian_hermitian(3, &mut crate::rng::TrialRng::new(3, 1, "psd"));
        let psd = HermitianMatrix::from_matrix(g.as_matrix() * g.as_matrix()).unwrap();
        let sq = psd.apply_spectral(|t| t * t).unwrap();
        let direct = psd.as_matrix() * psd.as_matrix();
        assert!((sq.as_matrix() - &direct).norm() <= 1e-10 * (1.0 + direct.norm()));
    }

    #[test]
    fn apply_spectral_reports_offending_eigenvalue() {
        let a = HermitianMatrix::from_diagonal(&[-2.0, 1.0]);
        match a.apply_spectral(f64::sqrt) {
            Err(Error::Domain { value, .. }) => assert_eq!(value, -2.0),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn apply_spectral_is_unitarily_covariant() {
        for seed in 0..5 {
            let a = crate::ensemble::gaussian_hermitian(4, &mut crate::rng::TrialRng::new(seed, 0, "a"));
            let v = random_unitary(4, seed + 100);
            let f = |t: f64| (0.3 * t).exp() - t * t;
            let lhs = a.conjugate_by(&v).apply_spectral(f).unwrap();
            let rhs = a.apply_spectral(f).unwrap().conjugate_by(&v);
            assert!((lhs.as_matrix() - rhs.as_matrix()).norm() <= 1e-9);
        }
    }

    #[test]
    fn literal_round_trip_and_default_imaginary_part() {
        let h = HermitianMatrix::from_json(r#"{"dim":2,"re":[[1,0.5],[0.5,2]]}"#).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.trace(), 3.0);
        let lit = h.to_literal();
        assert!(lit.im.is_none());
        let back = HermitianMatrix::from_literal(&lit).unwrap();
        assert_eq!(back, h);

        let c = HermitianMatrix::from_json(r#"{"dim":2,"re":[[1,0],[0,1]],"im":[[0,1],[-1,0]]}"#).unwrap();
        assert_eq!(c.as_matrix()[(0, 1)], C64::new(0.0, 1.0));
    }

    #[test]
    fn literal_rejects_non_hermitian_with_worst_pair() {
        let err = HermitianMatrix::from_json(r#"{"dim":3,"re":[[1,0,0],[0,1,0.5],[0,0.25,1]]}"#)
            .unwrap_err();
        match err {
            Error::NotHermitian { row, col, deviation } => {
                assert_eq!((row, col), (1, 2));
                assert!((deviation - 0.25).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(HermitianMatrix::from_json(r#"{"dim":2,"re":[[1,0]]}"#).is_err());
    }
}
