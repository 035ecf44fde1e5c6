//! Cyclic Jacobi eigensolver for dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real Jacobi rotation, so a single
//! 2x2 unitary `G` annihilates `a_pq` in `G* A G`. Sweeps run over all pairs
//! `p < q` in row order until a whole sweep needs no rotation.

use num_complex::Complex64;

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Relative asymmetry accepted before an input is declared non-Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Iteration cap, in full sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Off-diagonal Frobenius target relative to `||H||_F`.
pub const OFF_DIAGONAL_TARGET: f64 = 1e-14;

/// Real eigenvalues sorted descending with matching unitary eigenvectors
/// (as columns).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    values: Vec<f64>,
    vectors: Matrix,
}

impl EigenDecomposition {
    pub(crate) fn from_parts(values: Vec<f64>, vectors: Matrix) -> Self {
        debug_assert_eq!(values.len(), vectors.dim());
        EigenDecomposition { values, vectors }
    }

    /// Eigenvalues, largest first.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &Matrix {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(f(lambda_i)) V*` for a complex-valued spectral map.
    pub fn apply_complex(&self, f: impl Fn(f64) -> Complex64) -> Matrix {
        let n = self.dim();
        let diag: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, d) in diag.iter().enumerate() {
                    acc += v[(i, k)] * d * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `V diag(f(lambda_i)) V*` for a real spectral map; the result is
    /// Hermitian by construction.
    pub fn apply_real(&self, f: impl Fn(f64) -> f64) -> Matrix {
        self.apply_complex(|l| Complex64::new(f(l), 0.0)).hermitian_part()
    }

    pub fn reconstruct(&self) -> Matrix {
        self.apply_real(|l| l)
    }

    /// Largest column defect of `V* V - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = &self.vectors.adjoint() * &self.vectors;
        let n = self.dim();
        (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| {
                        let target = if i == j { 1.0 } else { 0.0 };
                        (gram[(i, j)] - target).norm_sqr()
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized to `(H + H*)/2` after checking that its largest
/// asymmetric entry is within `1e-12 * max|H|`.
pub fn hermitian_eigen(h: &Matrix) -> Result<EigenDecomposition> {
    let defect = h.hermitian_defect();
    let bound = HERMITIAN_TOLERANCE * h.max_abs();
    if defect > bound {
        return Err(Error::NonHermitian { defect, bound });
    }
    jacobi(&h.hermitian_part())
}

fn jacobi(h: &Matrix) -> Result<EigenDecomposition> {
    let n = h.dim();
    let mut a: Vec<Complex64> = h.as_slice().to_vec();
    let mut v = Matrix::identity(n);
    let norm = h.frobenius_norm();

    if norm > 0.0 {
        let floor = 1e-4 * OFF_DIAGONAL_TARGET * norm;
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    let mag = apq.norm();
                    if mag == 0.0 {
                        continue;
                    }
                    let app = a[p * n + p].re;
                    let aqq = a[q * n + q].re;
                    if mag <= f64::EPSILON * (app.abs() * aqq.abs()).sqrt() || mag <= floor {
                        continue;
                    }
                    rotated = true;
                    rotate(&mut a, &mut v, n, p, q, apq / mag, app, aqq, mag);
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].re.total_cmp(&a[i * n + i].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = Matrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, new_col)] = v[(row, old_col)];
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

#[allow(clippy::too_many_arguments)]
fn rotate(
    a: &mut [Complex64],
    v: &mut Matrix,
    n: usize,
    p: usize,
    q: usize,
    phase: Complex64,
    app: f64,
    aqq: f64,
    mag: f64,
) {
    let theta = (aqq - app) / (2.0 * mag);
    let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + theta.hypot(1.0)) };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    let dq = phase.conj();
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = dq * (-s);
    let g_qq = dq * c;

    // A <- A G
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * g_pp + akq * g_qp;
        a[k * n + q] = akp * g_pq + akq * g_qq;
    }
    // A <- G* A
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p] = Complex64::new(app - t * mag, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * mag, 0.0);

    // V <- V G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}
