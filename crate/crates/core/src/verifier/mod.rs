//! One predicate per inequality. Each check computes both sides, compares
//! them under the tolerance policy and returns a [`CheckResult`].
//!
//! Tolerances: for plain comparisons the absolute slack is
//! `(1e-9 + 1e-9 * sum_i kappa(A_i)) * max(|lhs|, |rhs|)`; determinant checks
//! compare log-determinants with slack `1e-9 * n * (1 + |lhs| + |rhs|)`;
//! majorization checks use the same conditioning factor as relative slack on
//! every prefix.

mod checks;
mod counterexample;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use checks::*;
pub use counterexample::{
    counterexample_instance, reproduce_counterexample, CounterexampleReport, COUNTEREXAMPLE_SLACK,
};

use crate::error::{Error, Result};
use crate::linalg::SpdMatrix;
use crate::spectral::{MajorizationReport, SchattenIndex};
use crate::verdict::Verdict;

/// How a check's verdicts are interpreted by campaigns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckCategory {
    /// Established inequality: any VIOLATED verdict is a failure.
    Proved,
    /// Reported only.
    Empirical,
    /// Unresolved inequality: reported with its minimum margin.
    Open,
    /// Expected to be VIOLATED.
    Refutation,
}

macro_rules! check_ids {
    ($($variant:ident => $name:literal, $category:ident;)+) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        #[serde(try_from = "String", into = "String")]
        pub enum CheckId {
            $($variant,)+
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant,)+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name,)+
                }
            }

            pub fn category(self) -> CheckCategory {
                match self {
                    $(CheckId::$variant => CheckCategory::$category,)+
                }
            }
        }

        impl FromStr for CheckId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(CheckId::$variant),)+
                    other => Err(Error::ConfigInvalid(format!("unknown check id {other:?}"))),
                }
            }
        }
    };
}

check_ids! {
    PnormHeron => "pnorm_heron", Proved;
    PnormHeronInf => "pnorm_heron_inf", Empirical;
    HeronPnorm => "heron_pnorm", Proved;
    HeronPnormInf => "heron_pnorm_inf", Empirical;
    LogMajProposition => "log_maj_proposition", Proved;
    LogMajIntroForm => "log_maj_intro_form", Refutation;
    TraceSharp => "trace_sharp", Proved;
    StripTrace => "strip_trace", Proved;
    HeinzSharpTrace => "heinz_sharp_trace", Proved;
    SharpSquareTraces => "sharp_square_traces", Proved;
    CrossTraces => "cross_traces", Proved;
    FurutaImplication => "furuta_implication", Proved;
    DetAudenaert => "det_audenaert", Proved;
    DetPowerMean => "det_power_mean", Proved;
    QnormInfinity => "qnorm_infinity", Proved;
    OpenTh122 => "open_th122", Open;
    Th122Bound => "th122_bound", Proved;
    Counterexample => "counterexample", Refutation;
    CounterexampleZ12 => "counterexample_z12", Refutation;
    CounterexampleControl => "counterexample_control", Proved;
}

impl CheckId {
    /// The checks gated by the `verify` campaign.
    pub const PROVED_SUITE: &'static [CheckId] = &[
        CheckId::PnormHeron,
        CheckId::LogMajProposition,
        CheckId::TraceSharp,
        CheckId::StripTrace,
        CheckId::HeinzSharpTrace,
        CheckId::SharpSquareTraces,
        CheckId::CrossTraces,
        CheckId::FurutaImplication,
        CheckId::DetAudenaert,
        CheckId::DetPowerMean,
        CheckId::QnormInfinity,
    ];

    pub fn is_gating(self) -> bool {
        self.category() == CheckCategory::Proved
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl TryFrom<String> for CheckId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CheckId> for String {
    fn from(id: CheckId) -> String {
        id.as_str().to_string()
    }
}

/// Outcome of one inequality check.
///
/// For side-by-side checks `verdict` is `VIOLATED` iff
/// `lhs > rhs + tolerance` and `EQUALITY_WITHIN_TOL` iff
/// `|lhs - rhs| <= tolerance`. Majorization checks carry the verdict of
/// their report; `lhs`/`rhs` are then the prefix quantities at the critical
/// prefix, and a failed final-equality leg is VIOLATED regardless of sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: CheckId,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub detail: Option<MajorizationReport>,
    pub note: Option<String>,
}

impl CheckResult {
    pub fn from_sides(check_id: CheckId, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        CheckResult {
            check_id,
            lhs,
            rhs,
            margin: rhs - lhs,
            tolerance,
            verdict: Verdict::classify(lhs, rhs, tolerance),
            detail: None,
            note: None,
        }
    }

    pub fn from_majorization(check_id: CheckId, report: MajorizationReport) -> Self {
        let k = report.critical_prefix();
        let lhs = report.left_prefix[k];
        let rhs = report.right_prefix[k];
        CheckResult {
            check_id,
            lhs,
            rhs,
            margin: rhs - lhs,
            tolerance: report.slack[k],
            verdict: report.verdict,
            detail: Some(report),
            note: None,
        }
    }

    pub fn with_detail(mut self, report: MajorizationReport) -> Self {
        self.detail = Some(report);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Inequality parameters of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CheckParams {
    pub t: f64,
    pub s: f64,
    pub r: f64,
    pub p: Option<SchattenIndex>,
    pub z: Option<Complex64>,
}

/// Everything needed to regenerate or replay one trial. Parameters a check
/// does not take are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSpec {
    pub check_id: CheckId,
    pub n: usize,
    pub t: Option<f64>,
    pub s: Option<f64>,
    pub r: Option<f64>,
    pub p: Option<SchattenIndex>,
    pub z_re: Option<f64>,
    pub z_im: Option<f64>,
    pub m: usize,
    pub seed: u64,
    pub condition_target: f64,
    pub pairs: String,
    pub cell: usize,
    pub trial: usize,
}

impl TrialSpec {
    pub fn params(&self) -> CheckParams {
        CheckParams {
            t: self.t.unwrap_or(0.0),
            s: self.s.unwrap_or(0.0),
            r: self.r.unwrap_or(0.0),
            p: self.p,
            z: match (self.z_re, self.z_im) {
                (Some(re), Some(im)) => Some(Complex64::new(re, im)),
                _ => None,
            },
        }
    }
}

/// `1e-9 + 1e-9 * sum kappa(A_i)`.
pub fn relative_tolerance(inputs: &[&SpdMatrix]) -> f64 {
    1e-9 + 1e-9 * inputs.iter().map(|a| a.condition_number()).sum::<f64>()
}

/// Absolute slack for a plain comparison.
pub fn side_tolerance(relative: f64, lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    relative * if scale > 0.0 { scale } else { 1.0 }
}

/// Slack for log-determinant comparisons of `n x n` matrices.
pub fn log_det_tolerance(n: usize, lhs: f64, rhs: f64) -> f64 {
    1e-9 * n as f64 * (1.0 + lhs.abs() + rhs.abs())
}
