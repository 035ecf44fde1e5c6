use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Outcome of comparing two sides of an inequality under a tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Holds,
    EqualityWithinTol,
    Violated,
}

impl Verdict {
    /// Classify `lhs <= rhs` with absolute tolerance `tol`.
    pub fn classify(lhs: f64, rhs: f64, tol: f64) -> Self {
        if !(lhs.is_finite() && rhs.is_finite()) || lhs > rhs + tol {
            Verdict::Violated
        } else if (lhs - rhs).abs() <= tol {
            Verdict::EqualityWithinTol
        } else {
            Verdict::Holds
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "HOLDS",
            Verdict::EqualityWithinTol => "EQUALITY_WITHIN_TOL",
            Verdict::Violated => "VIOLATED",
        }
    }

    pub fn is_violated(self) -> bool {
        self == Verdict::Violated
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "HOLDS" => Ok(Verdict::Holds),
            "EQUALITY_WITHIN_TOL" => Ok(Verdict::EqualityWithinTol),
            "VIOLATED" => Ok(Verdict::Violated),
            other => Err(format!("unknown verdict {other:?}")),
        }
    }
}
