use serde::de::Deserializer;
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::spectral::SchattenIndex;
use crate::verdict::Verdict;
use crate::verifier::{CheckId, CheckResult, TrialSpec};

/// A double written with 17 significant digits. Non-finite values are
/// written as the strings `"NaN"`, `"inf"` and `"-inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_finite() {
            let raw = RawValue::from_string(format!("{x:.16e}")).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else if x.is_nan() {
            s.serialize_str("NaN")
        } else if x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Number(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Number(x) => Ok(Num(x)),
            Repr::Text(s) => match s.as_str() {
                "NaN" => Ok(Num(f64::NAN)),
                "inf" => Ok(Num(f64::INFINITY)),
                "-inf" => Ok(Num(f64::NEG_INFINITY)),
                other => Err(serde::de::Error::custom(format!("bad number {other:?}"))),
            },
        }
    }
}

/// One JSON Lines record per check execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub check_id: CheckId,
    pub n: usize,
    pub t: Option<Num>,
    pub s: Option<Num>,
    pub r: Option<Num>,
    pub p: Option<SchattenIndex>,
    pub z_re: Option<Num>,
    pub z_im: Option<Num>,
    pub seed: u64,
    pub lhs: Num,
    pub rhs: Num,
    pub margin: Num,
    pub tolerance: Num,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_path: Option<String>,
    pub kappa: Num,
    pub m: usize,
    pub pairs: String,
    pub cell: usize,
    pub trial: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ResultRecord {
    pub fn new(spec: &TrialSpec, result: &CheckResult, witness_path: Option<String>) -> Self {
        ResultRecord {
            check_id: result.check_id,
            n: spec.n,
            t: spec.t.map(Num),
            s: spec.s.map(Num),
            r: spec.r.map(Num),
            p: spec.p,
            z_re: spec.z_re.map(Num),
            z_im: spec.z_im.map(Num),
            seed: spec.seed,
            lhs: Num(result.lhs),
            rhs: Num(result.rhs),
            margin: Num(result.margin),
            tolerance: Num(result.tolerance),
            verdict: result.verdict,
            witness_path,
            kappa: Num(spec.condition_target),
            m: spec.m,
            pairs: spec.pairs.clone(),
            cell: spec.cell,
            trial: spec.trial,
            note: result.note.clone(),
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("record serialization cannot fail")
    }

    pub fn from_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::parse(1, e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_exactly() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 1e308, 0.0, f64::MIN_POSITIVE] {
            let text = serde_json::to_string(&Num(x)).unwrap();
            let back: Num = serde_json::from_str(&text).unwrap();
            assert_eq!(back.0.to_bits(), x.to_bits(), "{text}");
        }
        assert_eq!(serde_json::to_string(&Num(0.5)).unwrap(), "5.0000000000000000e-1");
        let nan: Num = serde_json::from_str(&serde_json::to_string(&Num(f64::NAN)).unwrap()).unwrap();
        assert!(nan.0.is_nan());
    }
}
