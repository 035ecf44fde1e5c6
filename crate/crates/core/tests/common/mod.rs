//! Independent reference computations backed by nalgebra.
#![allow(dead_code)]

use matmeans::sampler::{random_pair, SamplerConfig, Structure};
use matmeans::{Complex64, Matrix, SpdMatrix};
use nalgebra::{DMatrix, SymmetricEigen};

pub type NaMatrix = DMatrix<Complex64>;

pub fn to_na(m: &Matrix) -> NaMatrix {
    let n = m.dim();
    DMatrix::from_fn(n, n, |i, j| m[(i, j)])
}

pub fn from_na(m: &NaMatrix) -> Matrix {
    let n = m.nrows();
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = m[(i, j)];
        }
    }
    out
}

/// Eigenvalues in descending order.
pub fn eigenvalues(m: &Matrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(to_na(m)).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `f(H)` through nalgebra's Hermitian eigendecomposition.
pub fn apply(m: &Matrix, f: impl Fn(f64) -> Complex64) -> Matrix {
    let e = SymmetricEigen::new(to_na(m));
    let u = &e.eigenvectors;
    let d = NaMatrix::from_diagonal(&e.eigenvalues.map(f));
    from_na(&(u * d * u.adjoint()))
}

pub fn power(m: &Matrix, t: f64) -> Matrix {
    apply(m, |x| Complex64::new(x.powf(t), 0.0))
}

/// `A #_t B` from its definition.
pub fn sharp(a: &Matrix, b: &Matrix, t: f64) -> Matrix {
    let ah = power(a, 0.5);
    let aih = power(a, -0.5);
    let inner = &(&aih * b) * &aih;
    let inner = inner.hermitian_part();
    &(&ah * &power(&inner, t)) * &ah
}

pub fn singular_values(m: &Matrix) -> Vec<f64> {
    let mut v: Vec<f64> = to_na(m).singular_values().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

pub fn pair(n: usize, kappa: f64, seed: u64) -> (SpdMatrix, SpdMatrix) {
    random_pair(&SamplerConfig::new(n, kappa, seed).unwrap()).unwrap()
}

pub fn commuting_pair(n: usize, kappa: f64, seed: u64) -> (SpdMatrix, SpdMatrix) {
    let c = SamplerConfig::new(n, kappa, seed).unwrap().with_structure(Structure::Commuting).unwrap();
    random_pair(&c).unwrap()
}

pub fn spd(rows: &[&[f64]]) -> SpdMatrix {
    SpdMatrix::new(Matrix::from_real_rows(rows).unwrap()).unwrap()
}

/// `[[2, 1], [1, 2]]` and `diag(3, 1)`.
pub fn reference_pair() -> (SpdMatrix, SpdMatrix) {
    (spd(&[&[2.0, 1.0], &[1.0, 2.0]]), SpdMatrix::from_diag(&[3.0, 1.0]).unwrap())
}

/// Fixed-seed proptest configuration so runs are repeatable.
pub fn cases(n: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases: n,
        rng_seed: proptest::test_runner::RngSeed::Fixed(0x6d61_746d),
        failure_persistence: None,
        ..proptest::test_runner::Config::default()
    }
}
