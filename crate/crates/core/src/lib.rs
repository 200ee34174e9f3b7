//! Deformed (Tsallis) exponential matrix calculus.
//!
//! The crate provides the q-logarithm and q-exponential on Hermitian matrices,
//! Fréchet differentials of powers, `log_q` and `exp_q` (both through exact
//! divided differences and through quadrature of their integral
//! representations), the trace functionals `log_r Tr exp_q(A)` and
//! `log_r Tr B* exp_q(A) B`, Peierls-Bogolyubov type inequality slacks,
//! Tsallis relative entropy bounds, and a seeded harness that sweeps all of
//! these over random matrix ensembles.

pub mod convexity;
pub mod deformed;
pub mod ensemble;
pub mod entropy;
pub mod error;
pub mod frechet;
pub mod harness;
pub mod matrix;
pub mod rng;
pub mod trace;

pub use deformed::{
    check_domain, exp_q, exp_q_matrix, log_q, log_q_matrix, DeformParams, DomainCheck,
    DomainConstraint, Regime, Side,
};
pub use trace::{InequalityReport, PositiveFunctional};
pub use error::{Error, Result};
pub use frechet::{FrechetResult, Method, QuadratureSpec, Transform};
pub use matrix::{CMatrix, HermitianMatrix, SpectralDecomposition, C64};

