//! Witness files: `key = value` header lines describing the trial, then the
//! input matrices in the plain-text matrix format.
//!
//! ```text
//! check_id = trace_sharp
//! n = 2
//! t = 3.0000000000000000e-1
//! s = none
//! ...
//! matrices = 2
//! 2
//! 2.0000000000000000e0 1.0000000000000000e0
//! ...
//! ```

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::text::{read_matrix, write_matrix};
use crate::linalg::{Matrix, SpdMatrix};
use crate::spectral::SchattenIndex;
use crate::verdict::Verdict;
use crate::verifier::{evaluate, CheckId, CheckInputs, CheckResult, TrialSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub spec: TrialSpec,
    pub lhs: f64,
    pub rhs: f64,
    pub verdict: Verdict,
    pub matrices: Vec<Matrix>,
}

const KEYS: [&str; 18] = [
    "check_id",
    "n",
    "t",
    "s",
    "r",
    "p",
    "z_re",
    "z_im",
    "m",
    "seed",
    "condition_target",
    "pairs",
    "cell",
    "trial",
    "lhs",
    "rhs",
    "verdict",
    "matrices",
];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_else(|| "none".into())
}

impl Witness {
    pub fn to_text(&self) -> String {
        let s = &self.spec;
        let values = [
            s.check_id.to_string(),
            s.n.to_string(),
            opt(s.t),
            opt(s.s),
            opt(s.r),
            s.p.map(|p| p.to_string()).unwrap_or_else(|| "none".into()),
            opt(s.z_re),
            opt(s.z_im),
            s.m.to_string(),
            s.seed.to_string(),
            num(s.condition_target),
            s.pairs.clone(),
            s.cell.to_string(),
            s.trial.to_string(),
            num(self.lhs),
            num(self.rhs),
            self.verdict.to_string(),
            self.matrices.len().to_string(),
        ];
        let mut out = String::new();
        for (k, v) in KEYS.iter().zip(values) {
            let _ = writeln!(out, "{k} = {v}");
        }
        for m in &self.matrices {
            out.push_str(&write_matrix(m));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let mut values: Vec<(usize, String)> = Vec::with_capacity(KEYS.len());
        for key in KEYS {
            let (i, line) = lines.next().ok_or_else(|| Error::parse(text.lines().count() + 1, "truncated header"))?;
            let (k, v) =
                line.split_once('=').ok_or_else(|| Error::parse(i + 1, format!("expected `{key} = value`")))?;
            if k.trim() != key {
                return Err(Error::parse(i + 1, format!("expected key {key:?}, found {:?}", k.trim())));
            }
            values.push((i + 1, v.trim().to_string()));
        }
        fn field<T: FromStr>(entry: &(usize, String)) -> Result<T> {
            entry.1.parse().map_err(|_| Error::parse(entry.0, format!("bad value {:?}", entry.1)))
        }
        fn opt_field(entry: &(usize, String)) -> Result<Option<f64>> {
            if entry.1 == "none" {
                Ok(None)
            } else {
                field(entry).map(Some)
            }
        }
        let p = if values[5].1 == "none" {
            None
        } else {
            Some(values[5].1.parse::<SchattenIndex>().map_err(|_| Error::parse(values[5].0, "bad Schatten index"))?)
        };
        let spec = TrialSpec {
            check_id: field(&values[0])?,
            n: field(&values[1])?,
            t: opt_field(&values[2])?,
            s: opt_field(&values[3])?,
            r: opt_field(&values[4])?,
            p,
            z_re: opt_field(&values[6])?,
            z_im: opt_field(&values[7])?,
            m: field(&values[8])?,
            seed: field(&values[9])?,
            condition_target: field(&values[10])?,
            pairs: values[11].1.clone(),
            cell: field(&values[12])?,
            trial: field(&values[13])?,
        };
        let lhs = field(&values[14])?;
        let rhs = field(&values[15])?;
        let verdict = field(&values[16])?;
        let count: usize = field(&values[17])?;

        let mut matrices = Vec::with_capacity(count);
        let mut rest = lines.peekable();
        for _ in 0..count {
            let first = rest.peek().map(|(i, _)| i + 1).unwrap_or(text.lines().count() + 1);
            let mut texts = rest.by_ref().map(|(_, l)| l);
            let m = read_matrix(&mut texts, first)?;
            if m.dim() != spec.n {
                return Err(Error::parse(first, format!("matrix dimension {} differs from n = {}", m.dim(), spec.n)));
            }
            matrices.push(m);
        }
        if let Some((i, _)) = rest.next() {
            return Err(Error::parse(i + 1, "trailing content after matrices"));
        }
        Ok(Witness { spec, lhs, rhs, verdict, matrices })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Re-run the recorded check on the stored matrices.
    pub fn replay(&self) -> Result<CheckResult> {
        let spd: Vec<SpdMatrix> = self.matrices.iter().cloned().map(SpdMatrix::new).collect::<Result<_>>()?;
        let inputs = match (self.spec.check_id, spd.len()) {
            (_, 0) => CheckInputs::None,
            (CheckId::QnormInfinity, _) => CheckInputs::Family(spd),
            (_, 2) => {
                let mut it = spd.into_iter();
                CheckInputs::Pair(it.next().unwrap(), it.next().unwrap())
            }
            (_, k) => return Err(Error::TooFewMatrices { needed: 2, got: k }),
        };
        evaluate(self.spec.check_id, &inputs, &self.spec.params())
    }
}

/// Parse a witness file and re-execute its check.
pub fn replay(path: &Path) -> Result<CheckResult> {
    Witness::read(path)?.replay()
}
