use num_complex::Complex64;

use super::eigen::{hermitian_eigen, EigenDecomposition};
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Eigenvalues below this fraction of the largest are treated as singular.
pub const MIN_RELATIVE_EIGENVALUE: f64 = 1e-13;

/// Hermitian positive definite matrix together with its certified
/// eigendecomposition.
///
/// All functional calculus goes through the cached decomposition, so powers
/// and logarithms never re-run the eigensolver.
#[derive(Debug, Clone)]
pub struct SpdMatrix {
    matrix: Matrix,
    eigen: EigenDecomposition,
}

impl SpdMatrix {
    /// Certify `m` as Hermitian positive definite.
    ///
    /// Fails with `NonHermitian` when the asymmetry exceeds the eigensolver's
    /// tolerance, and with `NotPositiveDefinite` when the smallest eigenvalue
    /// is not above `1e-13` times the largest.
    pub fn new(m: Matrix) -> Result<Self> {
        let eigen = hermitian_eigen(&m)?;
        Self::certify(m.hermitian_part(), eigen)
    }

    /// Like [`SpdMatrix::new`] but for matrices that are Hermitian in exact
    /// arithmetic and only carry rounding asymmetry (products such as
    /// `X* A X`). The input is symmetrized without a tolerance check.
    pub(crate) fn from_hermitian_product(m: Matrix) -> Result<Self> {
        let h = m.hermitian_part();
        let eigen = hermitian_eigen(&h)?;
        Self::certify(h, eigen)
    }

    pub fn from_diag(diag: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_diag(diag))
    }

    pub fn identity(n: usize) -> Self {
        let m = Matrix::identity(n);
        let eigen = EigenDecomposition::from_parts(vec![1.0; n], Matrix::identity(n));
        SpdMatrix { matrix: m, eigen }
    }

    fn certify(matrix: Matrix, eigen: EigenDecomposition) -> Result<Self> {
        let values = eigen.values();
        let max_eig = values[0];
        let min_eig = values[values.len() - 1];
        if !(min_eig > 0.0 && min_eig > MIN_RELATIVE_EIGENVALUE * max_eig && max_eig.is_finite()) {
            return Err(Error::NotPositiveDefinite { min_eig, max_eig });
        }
        Ok(SpdMatrix { matrix, eigen })
    }

    /// Build `V diag(values) V*` from a spectrum that is already known.
    fn from_spectrum(values: Vec<f64>, vectors: Matrix) -> Result<Self> {
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
        let n = values.len();
        let mut sorted_vectors = Matrix::zeros(n);
        for (new_col, &old) in idx.iter().enumerate() {
            for row in 0..n {
                sorted_vectors[(row, new_col)] = vectors[(row, old)];
            }
        }
        let sorted: Vec<f64> = idx.iter().map(|&i| values[i]).collect();
        if sorted.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::NotPositiveDefinite { min_eig: sorted[n - 1], max_eig: sorted[0] });
        }
        let eigen = EigenDecomposition::from_parts(sorted, sorted_vectors);
        let matrix = eigen.reconstruct();
        Ok(SpdMatrix { matrix, eigen })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn eigen(&self) -> &EigenDecomposition {
        &self.eigen
    }

    /// Eigenvalues, largest first.
    pub fn eigenvalues(&self) -> &[f64] {
        self.eigen.values()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn min_eig(&self) -> f64 {
        *self.eigen.values().last().expect("nonempty spectrum")
    }

    pub fn max_eig(&self) -> f64 {
        self.eigen.values()[0]
    }

    /// `lambda_max / lambda_min`.
    pub fn condition_number(&self) -> f64 {
        self.max_eig() / self.min_eig()
    }

    /// `V diag(f(lambda_i)) V*`; fails if `f` is not finite at some
    /// eigenvalue.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<Matrix> {
        for &l in self.eigen.values() {
            if !f(l).is_finite() {
                return Err(Error::Domain { eigenvalue: l });
            }
        }
        Ok(self.eigen.apply_real(f))
    }

    /// Real power `A^t` for any real `t`.
    pub fn power(&self, t: f64) -> Result<SpdMatrix> {
        if t == 1.0 {
            return Ok(self.clone());
        }
        if t == 0.0 {
            return Ok(SpdMatrix::identity(self.dim()));
        }
        let values = self.eigen.values().iter().map(|&l| l.powf(t)).collect();
        Self::from_spectrum(values, self.eigen.vectors().clone())
    }

    pub fn sqrt(&self) -> Result<SpdMatrix> {
        self.power(0.5)
    }

    pub fn inv_sqrt(&self) -> Result<SpdMatrix> {
        self.power(-0.5)
    }

    /// Matrix logarithm (Hermitian, not necessarily definite).
    pub fn log(&self) -> Matrix {
        self.eigen.apply_real(f64::ln)
    }

    /// Complex power `A^z = V diag(exp(z log lambda_i)) V*`, using the real
    /// logarithm of the positive spectrum.
    pub fn complex_power(&self, z: Complex64) -> Matrix {
        if z.im == 0.0 {
            return self.eigen.apply_real(|l| l.powf(z.re));
        }
        self.eigen.apply_complex(|l| (z * l.ln()).exp())
    }

    pub fn scale(&self, c: f64) -> Result<SpdMatrix> {
        let values = self.eigen.values().iter().map(|&l| l * c).collect();
        Self::from_spectrum(values, self.eigen.vectors().clone())
    }

    pub fn log_det(&self) -> f64 {
        self.eigen.values().iter().map(|l| l.ln()).sum()
    }
}

/// `X* A X`. When `A` is Hermitian the result is returned exactly
/// Hermitian.
pub fn congruence(a: &Matrix, x: &Matrix) -> Result<Matrix> {
    if a.dim() != x.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: x.dim() });
    }
    let out = &x.adjoint() * &(a * x);
    let hermitian = a.hermitian_defect() <= super::eigen::HERMITIAN_TOLERANCE * a.max_abs();
    Ok(if hermitian { out.hermitian_part() } else { out })
}

/// `X A X` for positive definite `A` and `X`, certified positive definite.
pub(crate) fn spd_congruence(a: &SpdMatrix, x: &SpdMatrix) -> Result<SpdMatrix> {
    SpdMatrix::from_hermitian_product(congruence(a.matrix(), x.matrix())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair_2112() -> SpdMatrix {
        SpdMatrix::new(Matrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]).unwrap()).unwrap()
    }

    #[test]
    fn certifies_and_rejects() {
        let a = pair_2112();
        assert_eq!(a.dim(), 2);
        assert!((a.min_eig() - 1.0).abs() < 1e-15);
        let indefinite = Matrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 1.0]]).unwrap();
        assert!(matches!(SpdMatrix::new(indefinite), Err(Error::NotPositiveDefinite { .. })));
        let nearly_singular = Matrix::from_diag(&[1.0, 1e-14]);
        assert!(matches!(SpdMatrix::new(nearly_singular), Err(Error::NotPositiveDefinite { .. })));
        let skew = Matrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 2.0]]).unwrap();
        assert!(matches!(SpdMatrix::new(skew), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn functional_calculus_examples() {
        let a = SpdMatrix::from_diag(&[1.0, 4.0]).unwrap();
        assert!(a.apply(|x| x).unwrap().relative_distance(a.matrix()) < 1e-12);
        let sq = a.apply(|x| x * x).unwrap();
        assert!(sq.relative_distance(&Matrix::from_diag(&[1.0, 16.0])) < 1e-15);
        let e = std::f64::consts::E;
        let l = SpdMatrix::from_diag(&[e, e * e]).unwrap().apply(f64::ln).unwrap();
        assert!(l.relative_distance(&Matrix::from_diag(&[1.0, 2.0])) < 1e-15);
        assert!(matches!(a.apply(|x| 1.0 / (x - 1.0)), Err(Error::Domain { .. })));
    }

    #[test]
    fn real_power_examples() {
        let a = SpdMatrix::from_diag(&[1.0, 4.0]).unwrap();
        let h = a.power(0.5).unwrap();
        assert!(h.matrix().relative_distance(&Matrix::from_diag(&[1.0, 2.0])) < 1e-15);
        assert_eq!(a.power(0.0).unwrap().matrix(), &Matrix::identity(2));

        let r = pair_2112().sqrt().unwrap();
        let s3 = 3f64.sqrt();
        let expected =
            Matrix::from_real_rows(&[&[(s3 + 1.0) / 2.0, (s3 - 1.0) / 2.0], &[(s3 - 1.0) / 2.0, (s3 + 1.0) / 2.0]])
                .unwrap();
        assert!(r.matrix().relative_distance(&expected) < 1e-15);
    }

    #[test]
    fn complex_power_examples() {
        let a = SpdMatrix::from_diag(&[1.0, 4.0]).unwrap();
        assert!(a.complex_power(Complex64::new(0.0, 0.0)).relative_distance(&Matrix::identity(2)) < 1e-15);
        let z = Complex64::new(0.0, std::f64::consts::PI / 4f64.ln());
        let u = a.complex_power(z);
        assert!(u.relative_distance(&Matrix::from_diag(&[1.0, -1.0])) < 1e-15);

        let b = pair_2112();
        let y = 0.7;
        let prod = &b.complex_power(Complex64::new(0.0, y)) * &b.complex_power(Complex64::new(0.0, -y));
        assert!(prod.relative_distance(&Matrix::identity(2)) < 1e-14);
    }

    #[test]
    fn congruence_examples() {
        let a = Matrix::from_diag(&[1.0, 4.0]);
        let x = Matrix::from_diag(&[1.0, 2.0]);
        assert_eq!(congruence(&a, &Matrix::identity(2)).unwrap(), a);
        let g = Matrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        assert_eq!(congruence(&Matrix::identity(2), &g).unwrap(), &g.adjoint() * &g);
        assert!(congruence(&a, &x).unwrap().relative_distance(&Matrix::from_diag(&[1.0, 16.0])) < 1e-15);
        assert!(matches!(congruence(&a, &Matrix::identity(3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn condition_number_examples() {
        assert_eq!(SpdMatrix::identity(3).condition_number(), 1.0);
        assert_eq!(SpdMatrix::from_diag(&[1.0, 4.0]).unwrap().condition_number(), 4.0);
        let k = SpdMatrix::from_diag(&[1e-3, 1e3]).unwrap().condition_number();
        assert!((k / 1e6 - 1.0).abs() < 1e-12);
    }
}
