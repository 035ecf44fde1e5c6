//! Singular values, Schatten norms, traces, determinants, compound matrices
//! and majorization comparisons.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, lu_determinant, Matrix, SpdMatrix, HERMITIAN_TOLERANCE};
use crate::verdict::Verdict;

/// Default relative slack of majorization comparisons.
pub const MAJORIZATION_SLACK: f64 = 1e-9;

/// Singular values, largest first.
///
/// Hermitian inputs use `|lambda_i|` directly; everything else goes through
/// the eigenvalues of `M* M`, clamped at zero before the square root.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    let mut s: Vec<f64> = if m.hermitian_defect() <= HERMITIAN_TOLERANCE * m.max_abs() {
        hermitian_eigen(m)?.values().iter().map(|l| l.abs()).collect()
    } else {
        let gram = (&m.adjoint() * m).hermitian_part();
        hermitian_eigen(&gram)?.values().iter().map(|l| l.max(0.0).sqrt()).collect()
    };
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Schatten index: finite `p >= 1` or the operator norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SchattenIndex {
    Finite(f64),
    Infinity,
}

impl SchattenIndex {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(SchattenIndex::Infinity)
        } else if p >= 1.0 {
            Ok(SchattenIndex::Finite(p))
        } else {
            Err(Error::POutOfRange(p))
        }
    }

    pub fn is_infinity(self) -> bool {
        matches!(self, SchattenIndex::Infinity)
    }
}

impl fmt::Display for SchattenIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchattenIndex::Finite(p) => write!(f, "{p}"),
            SchattenIndex::Infinity => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for SchattenIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(SchattenIndex::Infinity),
            other => {
                let p: f64 = other.parse().map_err(|_| Error::parse(0, format!("bad Schatten index {s:?}")))?;
                SchattenIndex::new(p)
            }
        }
    }
}

impl TryFrom<String> for SchattenIndex {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SchattenIndex> for String {
    fn from(p: SchattenIndex) -> String {
        p.to_string()
    }
}

/// `(sum s_i^p)^{1/p}` or `s_1` for the infinity index.
pub fn schatten_norm(m: &Matrix, p: SchattenIndex) -> Result<f64> {
    let s = singular_values(m)?;
    Ok(schatten_from_singular_values(&s, p))
}

pub(crate) fn schatten_from_singular_values(s: &[f64], p: SchattenIndex) -> f64 {
    let top = s.first().copied().unwrap_or(0.0);
    match p {
        SchattenIndex::Infinity => top,
        SchattenIndex::Finite(_) if top == 0.0 => 0.0,
        SchattenIndex::Finite(1.0) => s.iter().sum(),
        SchattenIndex::Finite(p) => top * s.iter().map(|x| (x / top).powf(p)).sum::<f64>().powf(1.0 / p),
    }
}

/// Trace of the ordered product `M_1 M_2 ... M_k`.
///
/// The result is complex; callers asserting a real trace should inspect the
/// imaginary part.
pub fn trace_product(ms: &[&Matrix]) -> Result<Complex64> {
    let (first, rest) = ms.split_first().ok_or_else(|| Error::Shape("empty product".into()))?;
    let mut acc = (*first).clone();
    for m in rest {
        acc = acc.try_mul(m)?;
    }
    Ok(acc.trace())
}

pub fn log_det(a: &SpdMatrix) -> f64 {
    a.log_det()
}

/// All size-`k` subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `k`-th compound matrix: the `C(n,k) x C(n,k)` matrix of `k x k` minors,
/// rows and columns indexed by lexicographically ordered `k`-subsets.
pub fn compound(m: &Matrix, k: usize) -> Result<Matrix> {
    let n = m.dim();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    if k == 1 {
        return Ok(m.clone());
    }
    let subsets = k_subsets(n, k);
    let size = subsets.len();
    let mut data = Vec::with_capacity(size * size);
    for rows in &subsets {
        for cols in &subsets {
            data.push(lu_determinant(m.submatrix(rows, cols), k));
        }
    }
    Matrix::from_vec(size, data)
}

/// Relation compared by a [`MajorizationReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MajorizationKind {
    /// Prefix products dominated with equality of the full product.
    Log,
    /// Prefix sums dominated.
    Weak,
}

/// Prefix-by-prefix comparison of two descending vectors.
///
/// For [`MajorizationKind::Log`] the prefixes are sums of logarithms, so the
/// comparison is scale-free; for [`MajorizationKind::Weak`] they are plain
/// sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorizationReport {
    pub kind: MajorizationKind,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub left_prefix: Vec<f64>,
    pub right_prefix: Vec<f64>,
    /// `left_prefix[k] - right_prefix[k]`.
    pub differences: Vec<f64>,
    /// Slack allowed at each prefix.
    pub slack: Vec<f64>,
    /// Whether the full-length products agree (only required for `Log`).
    pub final_equality: bool,
    pub verdict: Verdict,
}

impl MajorizationReport {
    /// Index of the prefix closest to (or furthest beyond) violation.
    pub fn critical_prefix(&self) -> usize {
        let n = self.differences.len();
        if self.kind == MajorizationKind::Log && !self.final_equality {
            return n - 1;
        }
        (0..n)
            .max_by(|&i, &j| {
                let a = self.differences[i] - self.slack[i];
                let b = self.differences[j] - self.slack[j];
                a.total_cmp(&b).then(j.cmp(&i))
            })
            .unwrap_or(0)
    }

    /// Whether some prefix is strictly dominated beyond the slack.
    pub fn is_strict_somewhere(&self) -> bool {
        self.differences.iter().zip(&self.slack).any(|(d, s)| *d < -s)
    }
}

/// Compare `u` and `v` with the default slack.
pub fn log_majorization(u: &[f64], v: &[f64], kind: MajorizationKind) -> Result<MajorizationReport> {
    compare_majorization(u, v, kind, MAJORIZATION_SLACK)
}

/// Compare `u` and `v` prefix by prefix. Both are sorted descending first.
///
/// The slack at prefix `k` is `rel * (1 + |L_k| + |R_k|)` where `L_k`, `R_k`
/// are the prefix quantities; the final-equality leg of `Log` uses the same
/// slack.
pub fn compare_majorization(u: &[f64], v: &[f64], kind: MajorizationKind, rel: f64) -> Result<MajorizationReport> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch { left: u.len(), right: v.len() });
    }
    if u.is_empty() {
        return Err(Error::Shape("empty vectors".into()));
    }
    let mut left = u.to_vec();
    let mut right = v.to_vec();
    left.sort_by(|a, b| b.total_cmp(a));
    right.sort_by(|a, b| b.total_cmp(a));
    if kind == MajorizationKind::Log {
        if let Some(&bad) = left.iter().chain(&right).find(|&&x| x.is_nan() || x <= 0.0) {
            return Err(Error::NonpositiveForLog(bad));
        }
    }
    let term = |x: f64| if kind == MajorizationKind::Log { x.ln() } else { x };
    let prefix = |xs: &[f64]| -> Vec<f64> {
        xs.iter()
            .scan(0.0, |acc, &x| {
                *acc += term(x);
                Some(*acc)
            })
            .collect()
    };
    let left_prefix = prefix(&left);
    let right_prefix = prefix(&right);
    let differences: Vec<f64> = left_prefix.iter().zip(&right_prefix).map(|(l, r)| l - r).collect();
    let slack: Vec<f64> = left_prefix.iter().zip(&right_prefix).map(|(l, r)| rel * (1.0 + l.abs() + r.abs())).collect();
    let n = differences.len();
    let final_equality = differences[n - 1].abs() <= slack[n - 1];
    let prefix_exceeded = differences.iter().zip(&slack).any(|(d, s)| *d > *s);
    let all_tight = differences.iter().zip(&slack).all(|(d, s)| d.abs() <= *s);
    let verdict = if prefix_exceeded || (kind == MajorizationKind::Log && !final_equality) {
        Verdict::Violated
    } else if all_tight {
        Verdict::EqualityWithinTol
    } else {
        Verdict::Holds
    };
    Ok(MajorizationReport { kind, left, right, left_prefix, right_prefix, differences, slack, final_equality, verdict })
}

/// Eigenvalues (descending) of a matrix that is Hermitian in exact
/// arithmetic.
pub fn hermitian_spectrum(m: &Matrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(&m.hermitian_part())?.values().to_vec())
}
