//! Matrix means of positive definite matrices.
//!
//! `A #_t B = A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}` is the point at
//! parameter `t` on the geodesic from `A` to `B`; the power mean `P_t` is the
//! positive definite solution of `X = (1/m) sum_i X #_t A_i` and
//! `Q_t = ((1/m) sum_i A_i^t)^{1/t}` is the quasi-arithmetic mean.

use crate::error::{Error, Result};
use crate::linalg::{congruence, spd_congruence, Matrix, SpdMatrix};

/// Relative Frobenius step below which the fixed-point iteration stops.
pub const FIXED_POINT_STEP_TOL: f64 = 1e-12;
pub const FIXED_POINT_MAX_ITERATIONS: usize = 500;

/// Interpolation parameter `t`, Heron weight `s` and scale `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanParams {
    pub t: f64,
    pub s: f64,
    pub r: f64,
}

impl MeanParams {
    pub fn new(t: f64, s: f64, r: f64) -> Result<Self> {
        check_unit("t", t)?;
        check_unit("s", s)?;
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::ParamOutOfRange { name: "r", value: r, range: "[0, inf)" });
        }
        Ok(MeanParams { t, s, r })
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        if name == "t" {
            return Err(Error::TOutOfRange { t: value, range: "[0, 1]" });
        }
        return Err(Error::ParamOutOfRange { name, value, range: "[0, 1]" });
    }
    Ok(())
}

fn check_power_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::TOutOfRange { t, range: "(0, 1]" });
    }
    Ok(())
}

fn same_dim(a: &SpdMatrix, b: &SpdMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(())
}

/// `A^{-1/2} B A^{-1/2}`.
pub(crate) fn relative_position(a: &SpdMatrix, b: &SpdMatrix) -> Result<SpdMatrix> {
    same_dim(a, b)?;
    spd_congruence(b, &a.inv_sqrt()?)
}

/// Iteration cap of the arithmetic-harmonic iteration; convergence is
/// quadratic, so a handful of steps suffice even for condition numbers near
/// `1e16`.
const MIDPOINT_MAX_ITERATIONS: usize = 100;

/// `A # B` as the common limit of `A_{k+1} = (A_k + B_k)/2`,
/// `B_{k+1} = 2 (A_k^{-1} + B_k^{-1})^{-1}`, which leaves `A_k # B_k`
/// unchanged. Unlike `A^{1/2} M^{1/2} A^{1/2}`, no step forms the
/// relative position `M`, whose small eigenvalues carry only absolute
/// accuracy when both inputs are ill conditioned.
fn midpoint(a: &SpdMatrix, b: &SpdMatrix) -> Result<SpdMatrix> {
    let (mut x, mut y) = (a.clone(), b.clone());
    for _ in 0..MIDPOINT_MAX_ITERATIONS {
        let gap = x.matrix().relative_distance(y.matrix());
        if gap <= 4.0 * f64::EPSILON {
            break;
        }
        let arith = SpdMatrix::from_hermitian_product((x.matrix() + y.matrix()).scale(0.5))?;
        let inv_sum = SpdMatrix::from_hermitian_product(x.power(-1.0)?.matrix() + y.power(-1.0)?.matrix())?;
        let harm = inv_sum.power(-1.0)?.scale(2.0)?;
        if gap < 1e-8 {
            // The error of the next midpoint is of order gap^2.
            return SpdMatrix::from_hermitian_product((arith.matrix() + harm.matrix()).scale(0.5));
        }
        x = arith;
        y = harm;
    }
    SpdMatrix::from_hermitian_product((x.matrix() + y.matrix()).scale(0.5))
}

/// Geodesic point `A #_t B` for any real `t` (extrapolating outside
/// `[0, 1]`).
///
/// Evaluated in the frame of `G = A # B`: with `C = G^{-1/2} A G^{-1/2}`
/// the pair becomes `(C, C^{-1})` and `A #_t B = G^{1/2} C^{1-2t} G^{1/2}`.
pub(crate) fn geodesic(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    same_dim(a, b)?;
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }
    let g = midpoint(a, b)?;
    if t == 0.5 {
        return Ok(g);
    }
    let c = spd_congruence(a, &g.inv_sqrt()?)?;
    spd_congruence(&c.power(1.0 - 2.0 * t)?, &g.sqrt()?)
}

/// Weighted geometric mean `A #_t B`, `t` in `[0, 1]`.
pub fn geometric_mean_t(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    check_unit("t", t)?;
    geodesic(a, b, t)
}

/// Two-variable power mean `A^{1/2} ((I + M^t)/2)^{1/t} A^{1/2}`,
/// `M = A^{-1/2} B A^{-1/2}`.
///
/// Evaluated in the frame of `G = A # B`: with `C = G^{-1/2} A G^{-1/2}`
/// the pair becomes `(C, C^{-1})`, so
/// `P_t = G^{1/2} f(C) G^{1/2}` with `f(x) = ((x^t + x^{-t})/2)^{1/t}`.
/// `f` has relative condition number at most 1, whereas forming `M`
/// directly loses the small eigenvalues of `M` when both inputs are ill
/// conditioned and `(.)^{1/t}` amplifies that loss.
pub fn power_mean_closed(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    check_power_t(t)?;
    same_dim(a, b)?;
    let g = midpoint(a, b)?;
    let c = spd_congruence(a, &g.inv_sqrt()?)?;
    let f = c.apply(|x| {
        let y = x.max(x.recip());
        y * ((1.0 + y.powf(-2.0 * t)) / 2.0).powf(1.0 / t)
    })?;
    SpdMatrix::from_hermitian_product(congruence(&f, g.sqrt()?.matrix())?)
}

/// Outcome of the power-mean fixed-point iteration.
#[derive(Debug, Clone)]
pub struct FixedPointSolution {
    pub mean: SpdMatrix,
    pub iterations: usize,
    /// `||X - (1/m) sum X #_t A_i||_F / ||X||_F` at the returned `X`.
    pub residual: f64,
}

/// One application of `X -> (1/m) sum_i X #_t A_i`.
fn power_mean_map(x: &SpdMatrix, family: &[SpdMatrix], t: f64) -> Result<SpdMatrix> {
    let n = x.dim();
    let x_inv_half = x.inv_sqrt()?;
    let mut acc = Matrix::zeros(n);
    for a in family {
        let m = spd_congruence(a, &x_inv_half)?;
        acc = &acc + m.power(t)?.matrix();
    }
    let avg = SpdMatrix::from_hermitian_product(acc.scale(1.0 / family.len() as f64))?;
    spd_congruence(&avg, &x.sqrt()?)
}

fn arithmetic_mean(family: &[SpdMatrix]) -> Result<SpdMatrix> {
    let n = family[0].dim();
    let sum = family.iter().fold(Matrix::zeros(n), |acc, a| &acc + a.matrix());
    SpdMatrix::from_hermitian_product(sum.scale(1.0 / family.len() as f64))
}

fn check_family(family: &[SpdMatrix]) -> Result<()> {
    if family.len() < 2 {
        return Err(Error::TooFewMatrices { needed: 2, got: family.len() });
    }
    for a in &family[1..] {
        same_dim(&family[0], a)?;
    }
    Ok(())
}

/// Power mean of `m >= 2` matrices by iterating `X_{k+1} = (1/m) sum X_k #_t A_i`
/// from the arithmetic mean.
pub fn power_mean_fixed_point_detailed(family: &[SpdMatrix], t: f64) -> Result<FixedPointSolution> {
    check_family(family)?;
    check_power_t(t)?;
    let mut x = arithmetic_mean(family)?;
    let mut last_step = f64::INFINITY;
    for iteration in 1..=FIXED_POINT_MAX_ITERATIONS {
        let next = power_mean_map(&x, family, t)?;
        last_step = next.matrix().relative_distance(x.matrix());
        x = next;
        if last_step < FIXED_POINT_STEP_TOL {
            let check = power_mean_map(&x, family, t)?;
            let residual = check.matrix().relative_distance(x.matrix());
            return Ok(FixedPointSolution { mean: x, iterations: iteration, residual });
        }
    }
    Err(Error::FixedPointNoConvergence { iterations: FIXED_POINT_MAX_ITERATIONS, step: last_step })
}

pub fn power_mean_fixed_point(family: &[SpdMatrix], t: f64) -> Result<SpdMatrix> {
    power_mean_fixed_point_detailed(family, t).map(|s| s.mean)
}

/// Quasi-arithmetic mean `((1/m) sum A_i^t)^{1/t}`.
pub fn q_mean(family: &[SpdMatrix], t: f64) -> Result<SpdMatrix> {
    check_family(family)?;
    check_power_t(t)?;
    let n = family[0].dim();
    let mut acc = Matrix::zeros(n);
    for a in family {
        acc = &acc + a.power(t)?.matrix();
    }
    let avg = SpdMatrix::from_hermitian_product(acc.scale(1.0 / family.len() as f64))?;
    avg.power(1.0 / t)
}

/// Kubo-Ando Heron mean `(1-s)(A+B)/2 + s (A # B)`.
pub fn heron_kubo_ando(a: &SpdMatrix, b: &SpdMatrix, s: f64) -> Result<SpdMatrix> {
    check_unit("s", s)?;
    let g = geometric_mean_t(a, b, 0.5)?;
    let arith = (a.matrix() + b.matrix()).scale(0.5 * (1.0 - s));
    SpdMatrix::from_hermitian_product(&arith + &g.matrix().scale(s))
}

/// Heron mean built from Heinz products:
/// `(1-s)(A+B)/2 + s (A^t B^{1-t} + A^{1-t} B^t)/2`. Not Hermitian in
/// general.
pub fn heron_naive(a: &SpdMatrix, b: &SpdMatrix, s: f64, t: f64) -> Result<Matrix> {
    check_unit("s", s)?;
    let products = heinz_products(a, b, t)?;
    let arith = (a.matrix() + b.matrix()).scale(0.5 * (1.0 - s));
    Ok(&arith + &products.symmetric_sum.scale(0.5 * s))
}

/// The two Heinz-type sums of a pair.
#[derive(Debug, Clone)]
pub struct HeinzProducts {
    /// `A^t B^{1-t} + A^{1-t} B^t`.
    pub symmetric_sum: Matrix,
    /// `A^t B^{1-t} + B^t A^{1-t}`, Hermitian.
    pub hermitian_sum: Matrix,
}

pub fn heinz_products(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<HeinzProducts> {
    check_unit("t", t)?;
    same_dim(a, b)?;
    let at = a.power(t)?;
    let a1t = a.power(1.0 - t)?;
    let bt = b.power(t)?;
    let b1t = b.power(1.0 - t)?;
    let first = at.matrix() * b1t.matrix();
    let symmetric_sum = &first + &(a1t.matrix() * bt.matrix());
    let hermitian_sum = (&first + &(bt.matrix() * a1t.matrix())).hermitian_part();
    Ok(HeinzProducts { symmetric_sum, hermitian_sum })
}

/// `X* (A #_t B) X`, used by congruence-invariance checks.
pub fn transported_mean(a: &SpdMatrix, b: &SpdMatrix, t: f64, x: &Matrix) -> Result<Matrix> {
    congruence(geometric_mean_t(a, b, t)?.matrix(), x)
}
