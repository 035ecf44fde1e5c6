use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::text::parse_entry;
use crate::sampler::MAX_DIMENSION;
use crate::spectral::SchattenIndex;
use crate::verifier::{in_strip, CheckId};

/// How the matrices of a trial relate to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// Independent random matrices.
    Generic,
    /// Every matrix equal to the first.
    Equal,
    /// Shared random eigenbasis.
    Commuting,
}

impl PairKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PairKind::Generic => "generic",
            PairKind::Equal => "equal",
            PairKind::Commuting => "commuting",
        }
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(PairKind::Generic),
            "equal" => Ok(PairKind::Equal),
            "commuting" => Ok(PairKind::Commuting),
            other => Err(Error::ConfigInvalid(format!("unknown pair kind {other:?}"))),
        }
    }
}

/// Parameters of a seeded sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub checks: Vec<CheckId>,
    pub dims: Vec<usize>,
    pub t_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
    pub s_grid: Vec<f64>,
    pub p_set: Vec<SchattenIndex>,
    pub z_grid: Vec<Complex64>,
    /// Family sizes for multi-matrix checks.
    pub m_set: Vec<usize>,
    pub pairs: Vec<PairKind>,
    pub trials_per_cell: usize,
    pub master_seed: u64,
    pub condition_targets: Vec<f64>,
    /// JSON Lines destination; `None` keeps records in memory only.
    pub output_path: Option<PathBuf>,
    /// Where witnesses go; defaults to `<output_path>.witnesses`.
    pub witness_dir: Option<PathBuf>,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
}

pub const DEFAULT_MASTER_SEED: u64 = 20_240_601;

/// `0.1, 0.2, ..., 0.9`.
pub fn default_t_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

/// Real parts `0.25, 0.30, ..., 0.75` crossed with imaginary parts
/// `0, +-0.5, +-2, +-8`.
pub fn default_z_grid() -> Vec<Complex64> {
    let ims = [0.0, 0.5, -0.5, 2.0, -2.0, 8.0, -8.0];
    let mut out = Vec::new();
    for i in 0..=10 {
        let re = (25 + 5 * i) as f64 / 100.0;
        for &im in &ims {
            out.push(Complex64::new(re, im));
        }
    }
    out
}

impl Default for CampaignConfig {
    /// The proved-suite campaign.
    fn default() -> Self {
        CampaignConfig {
            checks: CheckId::PROVED_SUITE.to_vec(),
            dims: vec![2, 3, 5, 8],
            t_grid: default_t_grid(),
            r_grid: vec![0.0, 0.5, 1.0, 3.0],
            s_grid: vec![0.0, 0.5, 1.0],
            p_set: vec![SchattenIndex::Finite(1.0), SchattenIndex::Finite(2.0)],
            z_grid: default_z_grid(),
            m_set: vec![2, 3],
            pairs: vec![PairKind::Generic],
            trials_per_cell: 5,
            master_seed: DEFAULT_MASTER_SEED,
            condition_targets: vec![10.0, 1e3, 1e6],
            output_path: None,
            witness_dir: None,
            workers: 0,
        }
    }
}

impl CampaignConfig {
    /// Counterexample reproduction plus a search over the open comparison.
    pub fn counterexample_default() -> Self {
        CampaignConfig {
            checks: vec![
                CheckId::Counterexample,
                CheckId::CounterexampleZ12,
                CheckId::CounterexampleControl,
                CheckId::OpenTh122,
                CheckId::Th122Bound,
            ],
            ..CampaignConfig::default()
        }
    }

    pub fn witness_dir(&self) -> Option<PathBuf> {
        self.witness_dir.clone().or_else(|| {
            self.output_path.as_ref().map(|p| {
                let mut s = p.clone().into_os_string();
                s.push(".witnesses");
                PathBuf::from(s)
            })
        })
    }

    pub fn validate(&self) -> Result<()> {
        fn nonempty<T>(name: &str, v: &[T]) -> Result<()> {
            if v.is_empty() {
                return Err(Error::ConfigInvalid(format!("{name} must not be empty")));
            }
            Ok(())
        }
        fn bad(msg: String) -> Result<()> {
            Err(Error::ConfigInvalid(msg))
        }
        nonempty("checks", &self.checks)?;
        nonempty("dims", &self.dims)?;
        nonempty("t_grid", &self.t_grid)?;
        nonempty("r_grid", &self.r_grid)?;
        nonempty("s_grid", &self.s_grid)?;
        nonempty("p_set", &self.p_set)?;
        nonempty("z_grid", &self.z_grid)?;
        nonempty("m_set", &self.m_set)?;
        nonempty("pairs", &self.pairs)?;
        nonempty("condition_targets", &self.condition_targets)?;
        if self.trials_per_cell < 1 {
            return bad("trials_per_cell must be at least 1".into());
        }
        for &n in &self.dims {
            if n == 0 || n > MAX_DIMENSION {
                return bad(format!("dimension {n} outside [1, {MAX_DIMENSION}]"));
            }
        }
        for &t in &self.t_grid {
            if !(0.0..=1.0).contains(&t) {
                return bad(format!("t = {t} outside [0, 1]"));
            }
        }
        for &r in &self.r_grid {
            if !(r >= 0.0 && r.is_finite()) {
                return bad(format!("r = {r} must be finite and nonnegative"));
            }
        }
        for &s in &self.s_grid {
            if !(0.0..=1.0).contains(&s) {
                return bad(format!("s = {s} outside [0, 1]"));
            }
        }
        for &z in &self.z_grid {
            if !in_strip(z) {
                return bad(format!("z = {}{:+}i outside the strip 1/4 <= Re z <= 3/4", z.re, z.im));
            }
        }
        for &m in &self.m_set {
            if m < 2 {
                return bad(format!("family size {m} must be at least 2"));
            }
        }
        for &k in &self.condition_targets {
            if !(k >= 1.0 && k.is_finite()) {
                return bad(format!("condition target {k} must be finite and >= 1"));
            }
        }
        for p in &self.p_set {
            if let SchattenIndex::Finite(p) = p {
                if !(*p >= 1.0 && p.is_finite()) {
                    return bad(format!("p = {p} must be >= 1"));
                }
            }
        }
        Ok(())
    }

    /// Read a TOML file and apply it over the defaults.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        ConfigOverrides::from_toml_str(text)?.apply(CampaignConfig::default())
    }
}

/// A Schatten index written as a number or as `"inf"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PEntry {
    Number(f64),
    Text(String),
}

impl PEntry {
    fn resolve(&self) -> Result<SchattenIndex> {
        match self {
            PEntry::Number(p) => SchattenIndex::new(*p),
            PEntry::Text(s) => s.parse(),
        }
        .map_err(|e| Error::ConfigInvalid(format!("p_set: {e}")))
    }
}

/// A strip point written `[re, im]` or as a complex literal such as
/// `"0.25+2i"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ZEntry {
    Pair([f64; 2]),
    Text(String),
}

impl ZEntry {
    fn resolve(&self) -> Result<Complex64> {
        match self {
            ZEntry::Pair([re, im]) => Ok(Complex64::new(*re, *im)),
            ZEntry::Text(s) => parse_z(s),
        }
    }
}

pub fn parse_z(s: &str) -> Result<Complex64> {
    parse_entry(s.trim()).ok_or_else(|| Error::ConfigInvalid(format!("bad strip point {s:?}")))
}

/// Partial configuration; every field present replaces the base value.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub checks: Option<Vec<String>>,
    pub dims: Option<Vec<usize>>,
    pub t_grid: Option<Vec<f64>>,
    pub r_grid: Option<Vec<f64>>,
    pub s_grid: Option<Vec<f64>>,
    pub p_set: Option<Vec<PEntry>>,
    pub z_grid: Option<Vec<ZEntry>>,
    pub m_set: Option<Vec<usize>>,
    pub pairs: Option<Vec<String>>,
    pub trials_per_cell: Option<usize>,
    pub master_seed: Option<u64>,
    pub condition_targets: Option<Vec<f64>>,
    pub output_path: Option<PathBuf>,
    pub witness_dir: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl ConfigOverrides {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigInvalid(format!("config file: {e}")))
    }

    pub fn apply(self, mut base: CampaignConfig) -> Result<CampaignConfig> {
        if let Some(v) = self.checks {
            base.checks = v.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        }
        if let Some(v) = self.dims {
            base.dims = v;
        }
        if let Some(v) = self.t_grid {
            base.t_grid = v;
        }
        if let Some(v) = self.r_grid {
            base.r_grid = v;
        }
        if let Some(v) = self.s_grid {
            base.s_grid = v;
        }
        if let Some(v) = self.p_set {
            base.p_set = v.iter().map(PEntry::resolve).collect::<Result<_>>()?;
        }
        if let Some(v) = self.z_grid {
            base.z_grid = v.iter().map(ZEntry::resolve).collect::<Result<_>>()?;
        }
        if let Some(v) = self.m_set {
            base.m_set = v;
        }
        if let Some(v) = self.pairs {
            base.pairs = v.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        }
        if let Some(v) = self.trials_per_cell {
            base.trials_per_cell = v;
        }
        if let Some(v) = self.master_seed {
            base.master_seed = v;
        }
        if let Some(v) = self.condition_targets {
            base.condition_targets = v;
        }
        if let Some(v) = self.output_path {
            base.output_path = Some(v);
        }
        if let Some(v) = self.witness_dir {
            base.witness_dir = Some(v);
        }
        if let Some(v) = self.workers {
            base.workers = v;
        }
        base.validate()?;
        Ok(base)
    }
}
