use num_complex::Complex64;

use super::{log_det_tolerance, relative_tolerance, side_tolerance, CheckId, CheckParams, CheckResult};
use crate::error::{Error, Result};
use crate::linalg::{congruence, hermitian_eigen, spd_congruence, Matrix, SpdMatrix};
use crate::means::{
    geometric_mean_t, heinz_products, heron_naive, power_mean_closed, power_mean_fixed_point, q_mean,
    relative_position, MeanParams,
};
use crate::spectral::{
    compare_majorization, hermitian_spectrum, schatten_norm, trace_product, MajorizationKind, SchattenIndex,
};
use crate::verdict::Verdict;

fn unit_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::TOutOfRange { t, range: "[0, 1]" });
    }
    Ok(())
}

fn positive_t(t: f64) -> Result<()> {
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

/// Real part of a trace of a product that is real in exact arithmetic.
fn real_trace(ms: &[&Matrix]) -> Result<f64> {
    Ok(trace_product(ms)?.re)
}

fn pow(a: &SpdMatrix, t: f64) -> Result<Matrix> {
    Ok(a.power(t)?.into_matrix())
}

fn side_check(id: CheckId, lhs: f64, rhs: f64, inputs: &[&SpdMatrix]) -> CheckResult {
    let tol = side_tolerance(relative_tolerance(inputs), lhs, rhs);
    CheckResult::from_sides(id, lhs, rhs, tol)
}

/// `||A + B + r(A #_t B + A #_{1-t} B)||_p <= ||A + B + r(A^t B^{1-t} + A^{1-t} B^t)||_p`.
///
/// Reported under `pnorm_heron_inf` when `p` is infinite.
pub fn check_pnorm_heron(a: &SpdMatrix, b: &SpdMatrix, t: f64, r: f64, p: SchattenIndex) -> Result<CheckResult> {
    MeanParams::new(t, 0.0, r)?;
    same_dim(a, b)?;
    let sharp = &geometric_mean_t(a, b, t)?.into_matrix() + geometric_mean_t(a, b, 1.0 - t)?.matrix();
    let heinz = heinz_products(a, b, t)?.symmetric_sum;
    let base = a.matrix() + b.matrix();
    let lhs = schatten_norm(&(&base + &sharp.scale(r)).hermitian_part(), p)?;
    let rhs = schatten_norm(&(&base + &heinz.scale(r)), p)?;
    let id = if p.is_infinity() { CheckId::PnormHeronInf } else { CheckId::PnormHeron };
    Ok(side_check(id, lhs, rhs, &[a, b]))
}

/// Weighted Heron form
/// `||(1-s)(A+B)/2 + s(A #_t B + A #_{1-t} B)/2||_p <= ||heron_naive(A, B, s, t)||_p`.
pub fn check_heron_pnorm(a: &SpdMatrix, b: &SpdMatrix, s: f64, t: f64, p: SchattenIndex) -> Result<CheckResult> {
    MeanParams::new(t, s, 0.0)?;
    same_dim(a, b)?;
    let sharp = &geometric_mean_t(a, b, t)?.into_matrix() + geometric_mean_t(a, b, 1.0 - t)?.matrix();
    let left = &(a.matrix() + b.matrix()).scale(0.5 * (1.0 - s)) + &sharp.scale(0.5 * s);
    let lhs = schatten_norm(&left.hermitian_part(), p)?;
    let rhs = schatten_norm(&heron_naive(a, b, s, t)?, p)?;
    let id = if p.is_infinity() { CheckId::HeronPnormInf } else { CheckId::HeronPnorm };
    Ok(side_check(id, lhs, rhs, &[a, b]))
}

fn proposition_left_spectrum(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<Vec<f64>> {
    let g = geometric_mean_t(a, b, t)?;
    hermitian_spectrum(&congruence(g.matrix(), a.sqrt()?.matrix())?)
}

fn log_maj_with_right_exponent(a: &SpdMatrix, b: &SpdMatrix, t: f64, outer: f64, id: CheckId) -> Result<CheckResult> {
    unit_t(t)?;
    same_dim(a, b)?;
    let left = proposition_left_spectrum(a, b, t)?;
    let right = hermitian_spectrum(&congruence(&pow(b, t)?, &pow(a, outer)?)?)?;
    let report = compare_majorization(&left, &right, MajorizationKind::Log, relative_tolerance(&[a, b]))?;
    Ok(CheckResult::from_majorization(id, report))
}

/// `lambda(A^{1/2} (A #_t B) A^{1/2})` log-majorized by
/// `lambda(A^{1-t/2} B^t A^{1-t/2})`, including equality of the full
/// products.
pub fn check_log_maj_proposition(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<CheckResult> {
    log_maj_with_right_exponent(a, b, t, 1.0 - t / 2.0, CheckId::LogMajProposition)
}

/// The same comparison against `lambda(A^{1-t} B^t A^{1-t})`. Its full
/// products differ by `det(A)^t`, so the equality leg fails whenever
/// `det A != 1` and `t > 0`.
pub fn check_log_maj_intro_form(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<CheckResult> {
    log_maj_with_right_exponent(a, b, t, 1.0 - t, CheckId::LogMajIntroForm)
}

/// `Tr(A (A #_t B)) <= Tr(A^{2-t} B^t)`.
pub fn check_trace_sharp(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<CheckResult> {
    unit_t(t)?;
    same_dim(a, b)?;
    let g = geometric_mean_t(a, b, t)?;
    let lhs = real_trace(&[a.matrix(), g.matrix()])?;
    let rhs = real_trace(&[&pow(a, 2.0 - t)?, &pow(b, t)?])?;
    Ok(side_check(CheckId::TraceSharp, lhs, rhs, &[a, b]))
}

pub fn in_strip(z: Complex64) -> bool {
    (0.25..=0.75).contains(&z.re) && z.im.is_finite()
}

/// `|Tr(X^{1/2} Y^z X^{1/2} Y^{1-z})| <= Tr(XY)` for `1/4 <= Re z <= 3/4`.
pub fn check_strip_trace(x: &SpdMatrix, y: &SpdMatrix, z: Complex64) -> Result<CheckResult> {
    if !in_strip(z) {
        return Err(Error::ZOutOfStrip { re: z.re, im: z.im });
    }
    same_dim(x, y)?;
    let xh = x.sqrt()?;
    let yz = y.complex_power(z);
    let y1z = y.complex_power(Complex64::new(1.0, 0.0) - z);
    let lhs = trace_product(&[xh.matrix(), &yz, xh.matrix(), &y1z])?.norm();
    let rhs = real_trace(&[x.matrix(), y.matrix()])?;
    Ok(side_check(CheckId::StripTrace, lhs, rhs, &[x, y]))
}

/// `Tr((A #_t B)(A #_{1-t} B)) <= Tr(AB)`.
pub fn check_heinz_sharp_trace(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<CheckResult> {
    unit_t(t)?;
    same_dim(a, b)?;
    let g = geometric_mean_t(a, b, t)?;
    let h = geometric_mean_t(a, b, 1.0 - t)?;
    let lhs = real_trace(&[g.matrix(), h.matrix()])?;
    let rhs = real_trace(&[a.matrix(), b.matrix()])?;
    Ok(side_check(CheckId::HeinzSharpTrace, lhs, rhs, &[a, b]))
}

/// `Tr((A #_t B)^2 + (A #_{1-t} B)^2) <= Tr(A^{2t} B^{2(1-t)} + B^{2t} A^{2(1-t)})`.
pub fn check_sharp_square_traces(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<CheckResult> {
    unit_t(t)?;
    same_dim(a, b)?;
    let g = geometric_mean_t(a, b, t)?;
    let h = geometric_mean_t(a, b, 1.0 - t)?;
    let lhs = real_trace(&[g.matrix(), g.matrix()])? + real_trace(&[h.matrix(), h.matrix()])?;
    let rhs = real_trace(&[&pow(a, 2.0 * t)?, &pow(b, 2.0 * (1.0 - t))?])?
        + real_trace(&[&pow(b, 2.0 * t)?, &pow(a, 2.0 * (1.0 - t))?])?;
    Ok(side_check(CheckId::SharpSquareTraces, lhs, rhs, &[a, b]))
}

/// `Tr((A+B)(A #_t B + A #_{1-t} B)) <=
/// Tr(A^{t+1} B^{1-t} + A^{2-t} B^t + A^t B^{2-t} + A^{1-t} B^{1+t})`.
pub fn check_cross_traces(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<CheckResult> {
    unit_t(t)?;
    same_dim(a, b)?;
    let sharp = &geometric_mean_t(a, b, t)?.into_matrix() + geometric_mean_t(a, b, 1.0 - t)?.matrix();
    let lhs = real_trace(&[&(a.matrix() + b.matrix()), &sharp])?;
    let terms = [(t + 1.0, 1.0 - t), (2.0 - t, t), (t, 2.0 - t), (1.0 - t, 1.0 + t)];
    let mut rhs = 0.0;
    for (ea, eb) in terms {
        rhs += real_trace(&[&pow(a, ea)?, &pow(b, eb)?])?;
    }
    Ok(side_check(CheckId::CrossTraces, lhs, rhs, &[a, b]))
}

/// Largest eigenvalue of a Hermitian difference.
fn max_eig(m: &Matrix) -> Result<f64> {
    Ok(hermitian_eigen(&m.hermitian_part())?.values()[0])
}

/// Given `B^t <= A^{t-2}`, checks `(A^{-1/2} B A^{-1/2})^t <= A^{-2}` through
/// `lambda_max((A^{-1/2} B A^{-1/2})^t - A^{-2}) <= tolerance`.
///
/// Fails with `PremiseViolated` when the input pair does not satisfy the
/// premise within tolerance.
pub fn check_furuta_implication(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<CheckResult> {
    positive_t(t)?;
    same_dim(a, b)?;
    let rel = relative_tolerance(&[a, b]);
    let bt = b.power(t)?;
    let bound = a.power(t - 2.0)?;
    let excess = max_eig(&(bt.matrix() - bound.matrix()))?;
    let premise_tol = rel * bt.max_eig().max(bound.max_eig());
    if excess > premise_tol {
        return Err(Error::PremiseViolated { excess, tolerance: premise_tol });
    }
    let mt = relative_position(a, b)?.power(t)?;
    let a_inv2 = a.power(-2.0)?;
    let lhs = max_eig(&(mt.matrix() - a_inv2.matrix()))?;
    let tol = rel * mt.max_eig().max(a_inv2.max_eig());
    Ok(CheckResult::from_sides(CheckId::FurutaImplication, lhs, 0.0, tol)
        .with_note(format!("premise excess {excess:.3e}")))
}

fn identity_plus(m: &Matrix) -> Result<SpdMatrix> {
    SpdMatrix::new((&Matrix::identity(m.dim()) + m).hermitian_part())
}

/// `log det(I + A #_t B) <= log det(I + A^{1-t} B^t)`, the right side taken
/// as `det(I + B^{t/2} A^{1-t} B^{t/2})`.
pub fn check_det_audenaert(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<CheckResult> {
    unit_t(t)?;
    same_dim(a, b)?;
    let g = geometric_mean_t(a, b, t)?;
    let lhs = identity_plus(g.matrix())?.log_det();
    let inner = congruence(&pow(a, 1.0 - t)?, &pow(b, t / 2.0)?)?;
    let rhs = identity_plus(&inner)?.log_det();
    Ok(CheckResult::from_sides(CheckId::DetAudenaert, lhs, rhs, log_det_tolerance(a.dim(), lhs, rhs)))
}

/// `log det P_t(A, B) <= log det Q_t(A, B)`.
///
/// The detail report holds the intermediate comparison
/// `lambda(I + M^t)` against `lambda(I + A^{-t/2} B^t A^{-t/2})`,
/// `M = A^{-1/2} B A^{-1/2}`; its verdict is recorded in the note and does
/// not enter the check's own verdict.
pub fn check_det_power_mean(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<CheckResult> {
    positive_t(t)?;
    same_dim(a, b)?;
    let p = power_mean_closed(a, b, t)?;
    let q = q_mean(&[a.clone(), b.clone()], t)?;
    let lhs = p.log_det();
    let rhs = q.log_det();

    let n = a.dim();
    let mt = relative_position(a, b)?.power(t)?;
    let left = hermitian_spectrum(&(&Matrix::identity(n) + mt.matrix()))?;
    let inner = spd_congruence(&b.power(t)?, &a.power(-t / 2.0)?)?;
    let right = hermitian_spectrum(&(&Matrix::identity(n) + inner.matrix()))?;
    let report = compare_majorization(&left, &right, MajorizationKind::Log, relative_tolerance(&[a, b]))?;
    let note = format!("intermediate log-majorization {}", report.verdict);
    Ok(CheckResult::from_sides(CheckId::DetPowerMean, lhs, rhs, log_det_tolerance(n, lhs, rhs))
        .with_detail(report)
        .with_note(note))
}

/// `||P_t(A_1..A_m)||_inf <= ||Q_t(A_1..A_m)||_inf`; the power mean uses
/// the closed form for two matrices and the fixed-point solver otherwise.
pub fn check_qnorm_infinity(family: &[SpdMatrix], t: f64) -> Result<CheckResult> {
    positive_t(t)?;
    let p = if family.len() == 2 {
        power_mean_closed(&family[0], &family[1], t)?
    } else {
        power_mean_fixed_point(family, t)?
    };
    let q = q_mean(family, t)?;
    let inputs: Vec<&SpdMatrix> = family.iter().collect();
    Ok(side_check(CheckId::QnormInfinity, p.max_eig(), q.max_eig(), &inputs))
}

/// Both sides of the open comparison
/// `Tr((A #_t B)(B #_t A)) <= Re Tr(A^t B^t A^{1-t} B^{1-t})`, plus the
/// established bound of each side by `Tr(AB)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpenProblemResult {
    /// Informational; never treated as a failure.
    pub open: CheckResult,
    /// `max(lhs, rhs)` of the open comparison against `Tr(AB)`.
    pub bound: CheckResult,
}

pub fn explore_open_th122(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<OpenProblemResult> {
    unit_t(t)?;
    same_dim(a, b)?;
    let ab = geometric_mean_t(a, b, t)?;
    let ba = geometric_mean_t(b, a, t)?;
    let lhs = real_trace(&[ab.matrix(), ba.matrix()])?;
    let rhs = real_trace(&[&pow(a, t)?, &pow(b, t)?, &pow(a, 1.0 - t)?, &pow(b, 1.0 - t)?])?;
    let open = side_check(CheckId::OpenTh122, lhs, rhs, &[a, b]);
    let tr_ab = real_trace(&[a.matrix(), b.matrix()])?;
    let bound = side_check(CheckId::Th122Bound, lhs.max(rhs), tr_ab, &[a, b]);
    Ok(OpenProblemResult { open, bound })
}

/// Matrices consumed by one check execution.
#[derive(Debug, Clone)]
pub enum CheckInputs {
    None,
    Pair(SpdMatrix, SpdMatrix),
    Family(Vec<SpdMatrix>),
}

impl CheckInputs {
    pub fn matrices(&self) -> Vec<&SpdMatrix> {
        match self {
            CheckInputs::None => Vec::new(),
            CheckInputs::Pair(a, b) => vec![a, b],
            CheckInputs::Family(v) => v.iter().collect(),
        }
    }

    fn pair(&self) -> Result<(&SpdMatrix, &SpdMatrix)> {
        match self {
            CheckInputs::Pair(a, b) => Ok((a, b)),
            CheckInputs::Family(v) if v.len() == 2 => Ok((&v[0], &v[1])),
            other => Err(Error::TooFewMatrices { needed: 2, got: other.matrices().len() }),
        }
    }
}

fn schatten(params: &CheckParams) -> Result<SchattenIndex> {
    params.p.ok_or_else(|| Error::ConfigInvalid("check requires a Schatten index p".into()))
}

/// Dispatch one check by id.
pub fn evaluate(id: CheckId, inputs: &CheckInputs, params: &CheckParams) -> Result<CheckResult> {
    let t = params.t;
    match id {
        CheckId::PnormHeron | CheckId::PnormHeronInf => {
            let (a, b) = inputs.pair()?;
            check_pnorm_heron(a, b, t, params.r, schatten(params)?)
        }
        CheckId::HeronPnorm | CheckId::HeronPnormInf => {
            let (a, b) = inputs.pair()?;
            check_heron_pnorm(a, b, params.s, t, schatten(params)?)
        }
        CheckId::LogMajProposition => inputs.pair().and_then(|(a, b)| check_log_maj_proposition(a, b, t)),
        CheckId::LogMajIntroForm => inputs.pair().and_then(|(a, b)| check_log_maj_intro_form(a, b, t)),
        CheckId::TraceSharp => inputs.pair().and_then(|(a, b)| check_trace_sharp(a, b, t)),
        CheckId::StripTrace => {
            let (x, y) = inputs.pair()?;
            let z = params.z.ok_or_else(|| Error::ConfigInvalid("strip_trace requires z".into()))?;
            check_strip_trace(x, y, z)
        }
        CheckId::HeinzSharpTrace => inputs.pair().and_then(|(a, b)| check_heinz_sharp_trace(a, b, t)),
        CheckId::SharpSquareTraces => inputs.pair().and_then(|(a, b)| check_sharp_square_traces(a, b, t)),
        CheckId::CrossTraces => inputs.pair().and_then(|(a, b)| check_cross_traces(a, b, t)),
        CheckId::FurutaImplication => inputs.pair().and_then(|(a, b)| check_furuta_implication(a, b, t)),
        CheckId::DetAudenaert => inputs.pair().and_then(|(a, b)| check_det_audenaert(a, b, t)),
        CheckId::DetPowerMean => inputs.pair().and_then(|(a, b)| check_det_power_mean(a, b, t)),
        CheckId::QnormInfinity => match inputs {
            CheckInputs::Family(v) => check_qnorm_infinity(v, t),
            CheckInputs::Pair(a, b) => check_qnorm_infinity(&[a.clone(), b.clone()], t),
            CheckInputs::None => Err(Error::TooFewMatrices { needed: 2, got: 0 }),
        },
        CheckId::OpenTh122 => inputs.pair().and_then(|(a, b)| explore_open_th122(a, b, t)).map(|r| r.open),
        CheckId::Th122Bound => inputs.pair().and_then(|(a, b)| explore_open_th122(a, b, t)).map(|r| r.bound),
        CheckId::Counterexample => Ok(super::counterexample_instance(CheckId::Counterexample, [1.0, 4.0])),
        CheckId::CounterexampleZ12 => Ok(super::counterexample_instance(CheckId::CounterexampleZ12, [1.0, 2.0])),
        CheckId::CounterexampleControl => {
            Ok(super::counterexample_instance(CheckId::CounterexampleControl, [1.0, 1.0]))
        }
    }
}

/// Whether a verdict counts against the campaign exit status.
pub fn is_failure(id: CheckId, verdict: Verdict) -> bool {
    id.is_gating() && verdict.is_violated()
}
