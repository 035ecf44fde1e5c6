//! Matrix means of positive definite matrices and machine-checkable
//! inequality predicates over them.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: dense complex matrices, a cyclic Jacobi Hermitian
//!   eigensolver, and functional calculus on positive definite matrices.
//! * [`means`]: weighted geometric means, power means (closed form and
//!   fixed point), quasi-arithmetic means, Heron and Heinz-type means.
//! * [`spectral`]: singular values, Schatten norms, traces, log-determinants,
//!   compound matrices and (log-/weak) majorization reports.
//! * [`sampler`]: seeded generation of positive definite test matrices.
//! * [`verifier`]: one predicate per inequality, each producing a
//!   [`verifier::CheckResult`].
//! * [`campaign`]: seeded sweeps, result records, witnesses and replay.

pub mod campaign;
pub mod error;
pub mod linalg;
pub mod means;
pub mod sampler;
pub mod spectral;
pub mod verdict;
pub mod verifier;

pub use error::{Error, Result};
pub use linalg::{congruence, hermitian_eigen, EigenDecomposition, Matrix, SpdMatrix};
pub use num_complex::Complex64;
pub use verdict::Verdict;
