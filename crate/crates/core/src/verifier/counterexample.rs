use serde::{Deserialize, Serialize};

use super::{CheckId, CheckResult};
use crate::linalg::Matrix;
use crate::spectral::{compare_majorization, singular_values, MajorizationKind};
use crate::verdict::Verdict;

/// Relative slack of the weak-majorization comparison.
pub const COUNTEREXAMPLE_SLACK: f64 = 1e-12;

/// Compare `s(Z^{1/2} X Z^{1/2})` with `s(Z^{1/2} Y Z^{1/2})` under weak
/// majorization for `X = I`, `Y = [[0, 1], [1, 0]]` and `Z = diag(z)`.
///
/// `Y` is Hermitian with `-X <= Y <= X` but not positive semidefinite, so
/// the right side is read through singular values.
pub fn counterexample_instance(id: CheckId, z_diag: [f64; 2]) -> CheckResult {
    let zh = Matrix::from_diag(&[z_diag[0].sqrt(), z_diag[1].sqrt()]);
    let x = Matrix::identity(2);
    let y = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("2x2 literal");
    let left = singular_values(&(&(&zh * &x) * &zh)).expect("finite 2x2");
    let right = singular_values(&(&(&zh * &y) * &zh)).expect("finite 2x2");
    let report =
        compare_majorization(&left, &right, MajorizationKind::Weak, COUNTEREXAMPLE_SLACK).expect("equal lengths");
    CheckResult::from_majorization(id, report)
        .with_note(format!("Z = diag({}, {}); s_left = {:?}; s_right = {:?}", z_diag[0], z_diag[1], left, right))
}

/// The three evaluations of the counterexample family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    /// `Z = diag(1, 4)`: singular values (4, 1) against (2, 2).
    pub primary: CheckResult,
    /// `Z = diag(1, 2)`: singular values (2, 1) against (sqrt 2, sqrt 2).
    pub printed_variant: CheckResult,
    /// `Z = I`: both sides (1, 1).
    pub control: CheckResult,
}

impl CounterexampleReport {
    pub fn results(&self) -> [&CheckResult; 3] {
        [&self.primary, &self.printed_variant, &self.control]
    }

    /// Both refutations violated and the control not violated.
    pub fn reproduced(&self) -> bool {
        self.primary.verdict == Verdict::Violated
            && self.printed_variant.verdict == Verdict::Violated
            && !self.control.verdict.is_violated()
    }
}

pub fn reproduce_counterexample() -> CounterexampleReport {
    CounterexampleReport {
        primary: counterexample_instance(CheckId::Counterexample, [1.0, 4.0]),
        printed_variant: counterexample_instance(CheckId::CounterexampleZ12, [1.0, 2.0]),
        control: counterexample_instance(CheckId::CounterexampleControl, [1.0, 1.0]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces() {
        let r = reproduce_counterexample();
        assert!(r.reproduced());
        let d = r.primary.detail.as_ref().unwrap();
        assert!((d.left[0] - 4.0).abs() < 1e-12 && (d.left[1] - 1.0).abs() < 1e-12);
        assert!((d.right[0] - 2.0).abs() < 1e-12 && (d.right[1] - 2.0).abs() < 1e-12);
        let d = r.printed_variant.detail.as_ref().unwrap();
        assert!((d.right[0] - 2f64.sqrt()).abs() < 1e-12);
        assert!((d.left[0] - 2.0).abs() < 1e-12);
        assert_eq!(r.control.verdict, Verdict::EqualityWithinTol);
    }
}
