//! Dense complex matrices, the Hermitian eigensolver and functional calculus.

mod eigen;
mod matrix;
mod spd;
pub mod text;

use num_complex::Complex64;

pub use eigen::{hermitian_eigen, EigenDecomposition, HERMITIAN_TOLERANCE, MAX_SWEEPS, OFF_DIAGONAL_TARGET};
pub(crate) use matrix::lu_determinant;
pub use matrix::Matrix;
pub(crate) use spd::spd_congruence;
pub use spd::{congruence, SpdMatrix, MIN_RELATIVE_EIGENVALUE};

use crate::error::Result;

pub fn matrix_function(a: &SpdMatrix, f: impl Fn(f64) -> f64) -> Result<Matrix> {
    a.apply(f)
}

pub fn real_power(a: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    a.power(t)
}

pub fn complex_power(a: &SpdMatrix, z: Complex64) -> Matrix {
    a.complex_power(z)
}

pub fn condition_number(a: &SpdMatrix) -> f64 {
    a.condition_number()
}
