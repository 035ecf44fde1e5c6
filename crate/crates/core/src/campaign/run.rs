use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::config::{CampaignConfig, PairKind};
use super::record::ResultRecord;
use super::witness::Witness;
use crate::error::{Error, Result};
use crate::linalg::SpdMatrix;
use crate::sampler::{random_family, random_pair, random_spd, trial_seed, SamplerConfig, Structure};
use crate::spectral::SchattenIndex;
use crate::verdict::Verdict;
use crate::verifier::{evaluate, CheckCategory, CheckId, CheckInputs, CheckResult, TrialSpec};

/// One point of a check's parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub check_id: CheckId,
    pub index: usize,
    pub n: usize,
    pub condition_target: f64,
    /// `None` for checks that draw their own structured inputs.
    pub pairs: Option<PairKind>,
    pub t: Option<f64>,
    pub s: Option<f64>,
    pub r: Option<f64>,
    pub p: Option<SchattenIndex>,
    pub z: Option<(f64, f64)>,
    pub m: usize,
}

impl Cell {
    fn pairs_label(&self) -> &'static str {
        match (self.check_id, self.pairs) {
            (CheckId::FurutaImplication, _) => "furuta_premise",
            (_, Some(k)) => k.as_str(),
            (_, None) => "fixed",
        }
    }
}

fn is_counterexample(id: CheckId) -> bool {
    matches!(id, CheckId::Counterexample | CheckId::CounterexampleZ12 | CheckId::CounterexampleControl)
}

/// Admissible `t` range of each check.
fn t_admissible(id: CheckId, t: f64) -> bool {
    match id {
        CheckId::FurutaImplication | CheckId::DetPowerMean | CheckId::QnormInfinity => t > 0.0,
        _ => (0.0..=1.0).contains(&t),
    }
}

fn p_admissible(id: CheckId, p: SchattenIndex) -> bool {
    match id {
        CheckId::PnormHeron | CheckId::HeronPnorm => !p.is_infinity(),
        CheckId::PnormHeronInf | CheckId::HeronPnormInf => p.is_infinity(),
        _ => true,
    }
}

/// Parameter cells of one check in canonical order.
pub fn cells_for(config: &CampaignConfig, id: CheckId) -> Vec<Cell> {
    let mut out = Vec::new();
    if is_counterexample(id) {
        out.push(Cell {
            check_id: id,
            index: 0,
            n: 2,
            condition_target: 1.0,
            pairs: None,
            t: None,
            s: None,
            r: None,
            p: None,
            z: None,
            m: 0,
        });
        return out;
    }
    let uses_r = matches!(id, CheckId::PnormHeron | CheckId::PnormHeronInf);
    let uses_s = matches!(id, CheckId::HeronPnorm | CheckId::HeronPnormInf);
    let uses_p = uses_r || uses_s;
    let uses_z = id == CheckId::StripTrace;
    let uses_t = !uses_z;
    let uses_m = id == CheckId::QnormInfinity;
    let pair_kinds: Vec<Option<PairKind>> =
        if id == CheckId::FurutaImplication { vec![None] } else { config.pairs.iter().copied().map(Some).collect() };
    let ts: Vec<Option<f64>> = if uses_t {
        config.t_grid.iter().copied().filter(|&t| t_admissible(id, t)).map(Some).collect()
    } else {
        vec![None]
    };
    let rs: Vec<Option<f64>> = if uses_r { config.r_grid.iter().copied().map(Some).collect() } else { vec![None] };
    let ss: Vec<Option<f64>> = if uses_s { config.s_grid.iter().copied().map(Some).collect() } else { vec![None] };
    let ps: Vec<Option<SchattenIndex>> = if uses_p {
        config.p_set.iter().copied().filter(|&p| p_admissible(id, p)).map(Some).collect()
    } else {
        vec![None]
    };
    let zs: Vec<Option<(f64, f64)>> =
        if uses_z { config.z_grid.iter().map(|z| Some((z.re, z.im))).collect() } else { vec![None] };
    let ms: Vec<usize> = if uses_m { config.m_set.clone() } else { vec![2] };

    for &n in &config.dims {
        for &kappa in &config.condition_targets {
            for &pairs in &pair_kinds {
                for &t in &ts {
                    for &s in &ss {
                        for &r in &rs {
                            for &p in &ps {
                                for &z in &zs {
                                    for &m in &ms {
                                        out.push(Cell {
                                            check_id: id,
                                            index: out.len(),
                                            n,
                                            condition_target: kappa,
                                            pairs,
                                            t,
                                            s,
                                            r,
                                            p,
                                            z,
                                            m,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn trials_for(config: &CampaignConfig, id: CheckId) -> usize {
    if is_counterexample(id) {
        1
    } else {
        config.trials_per_cell
    }
}

fn spec_for(cell: &Cell, trial: usize, seed: u64) -> TrialSpec {
    TrialSpec {
        check_id: cell.check_id,
        n: cell.n,
        t: cell.t,
        s: cell.s,
        r: cell.r,
        p: cell.p,
        z_re: cell.z.map(|z| z.0),
        z_im: cell.z.map(|z| z.1),
        m: cell.m,
        seed,
        condition_target: cell.condition_target,
        pairs: cell.pairs_label().to_string(),
        cell: cell.index,
        trial,
    }
}

/// Regenerate the inputs of a trial from its cell and seed.
pub fn draw_inputs(cell: &Cell, seed: u64) -> Result<CheckInputs> {
    if is_counterexample(cell.check_id) {
        return Ok(CheckInputs::None);
    }
    let base = SamplerConfig::new(cell.n, cell.condition_target, seed)?;
    if cell.check_id == CheckId::FurutaImplication {
        let t = cell.t.unwrap_or(0.5);
        let (a, b) = random_pair(&base.with_structure(Structure::FurutaPremise(t))?)?;
        return Ok(CheckInputs::Pair(a, b));
    }
    let kind = cell.pairs.unwrap_or(PairKind::Generic);
    if cell.check_id == CheckId::QnormInfinity {
        let family = match kind {
            PairKind::Generic => random_family(&base, cell.m)?,
            PairKind::Commuting => random_family(&base.with_structure(Structure::Commuting)?, cell.m)?,
            PairKind::Equal => vec![random_spd(&base)?; cell.m],
        };
        return Ok(CheckInputs::Family(family));
    }
    let (a, b) = match kind {
        PairKind::Generic => random_pair(&base)?,
        PairKind::Commuting => random_pair(&base.with_structure(Structure::Commuting)?)?,
        PairKind::Equal => {
            let a = random_spd(&base)?;
            (a.clone(), a)
        }
    };
    Ok(CheckInputs::Pair(a, b))
}

struct Task<'a> {
    cell: &'a Cell,
    trial: usize,
    seed: u64,
}

struct Outcome {
    spec: TrialSpec,
    result: CheckResult,
    /// Kept only for VIOLATED results.
    inputs: Option<Vec<SpdMatrix>>,
}

fn run_task(task: &Task<'_>) -> Result<Outcome> {
    let spec = spec_for(task.cell, task.trial, task.seed);
    let attempt = draw_inputs(task.cell, task.seed).and_then(|inputs| {
        let result = evaluate(spec.check_id, &inputs, &spec.params())?;
        Ok((inputs, result))
    });
    let (inputs, result) = attempt.map_err(|e| Error::Trial {
        check_id: spec.check_id.to_string(),
        cell: spec.cell,
        trial: spec.trial,
        seed: spec.seed,
        source: Box::new(e),
    })?;
    let keep = result.verdict == Verdict::Violated;
    let inputs = keep.then(|| inputs.matrices().into_iter().cloned().collect());
    Ok(Outcome { spec, result, inputs })
}

/// Verdict counts and extreme margin of one check.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CheckSummary {
    pub holds: usize,
    pub equality: usize,
    pub violated: usize,
    /// Smallest `rhs - lhs` seen; `+inf` before the first trial.
    pub min_margin: f64,
}

impl CheckSummary {
    pub fn trials(&self) -> usize {
        self.holds + self.equality + self.violated
    }

    fn add(&mut self, r: &CheckResult) {
        if self.trials() == 0 {
            self.min_margin = f64::INFINITY;
        }
        match r.verdict {
            Verdict::Holds => self.holds += 1,
            Verdict::EqualityWithinTol => self.equality += 1,
            Verdict::Violated => self.violated += 1,
        }
        if r.margin.is_nan() || r.margin < self.min_margin {
            self.min_margin = r.margin;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampaignSummary {
    pub per_check: BTreeMap<CheckId, CheckSummary>,
    pub wall_time: Duration,
}

impl CampaignSummary {
    pub fn total_trials(&self) -> usize {
        self.per_check.values().map(CheckSummary::trials).sum()
    }

    /// Checks whose VIOLATED verdicts count as failures.
    pub fn failing_checks(&self) -> Vec<CheckId> {
        self.per_check.iter().filter(|(id, s)| id.is_gating() && s.violated > 0).map(|(id, _)| *id).collect()
    }

    /// 0 when every proved check holds, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.failing_checks().is_empty() {
            0
        } else {
            2
        }
    }

    /// Fixed-width table sorted by check id.
    pub fn render_table(&self) -> String {
        let mut rows: Vec<(&str, &CheckId, &CheckSummary)> =
            self.per_check.iter().map(|(id, s)| (id.as_str(), id, s)).collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<24} {:<10} {:>8} {:>8} {:>8} {:>8} {:>24}",
            "check_id", "category", "trials", "holds", "equal", "violated", "min_margin"
        );
        for (name, id, s) in rows {
            let category = match id.category() {
                CheckCategory::Proved => "proved",
                CheckCategory::Empirical => "empirical",
                CheckCategory::Open => "open",
                CheckCategory::Refutation => "refutation",
            };
            let _ = writeln!(
                out,
                "{:<24} {:<10} {:>8} {:>8} {:>8} {:>8} {:>24.16e}",
                name,
                category,
                s.trials(),
                s.holds,
                s.equality,
                s.violated,
                s.min_margin
            );
        }
        let _ = writeln!(out, "trials: {}  wall time: {:.3} s", self.total_trials(), self.wall_time.as_secs_f64());
        out
    }
}

/// Records in canonical order plus the summary.
#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub summary: CampaignSummary,
    pub records: Vec<ResultRecord>,
    pub witnesses: Vec<PathBuf>,
}

impl CampaignReport {
    /// The JSON Lines stream, one record per line.
    pub fn stream(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        out
    }
}

fn witness_name(spec: &TrialSpec) -> String {
    format!("{}-c{:05}-t{:03}.txt", spec.check_id, spec.cell, spec.trial)
}

/// Execute every (check, cell, trial) of the configuration.
///
/// Trial `i` in canonical order (check id, then cell, then trial) draws its
/// matrices from `trial_seed(master_seed, i)`, so the records do not depend
/// on the number of workers. VIOLATED trials are
/// written as witnesses when a witness directory is configured, and the
/// record stream is written to `output_path` when set.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    config.validate()?;
    let start = Instant::now();

    let mut checks = config.checks.clone();
    checks.sort_by_key(|c| c.as_str());
    checks.dedup();
    let mut per_check_cells = Vec::with_capacity(checks.len());
    for &id in &checks {
        let cells = cells_for(config, id);
        if cells.is_empty() {
            return Err(Error::ConfigInvalid(format!("check {id} has no admissible parameter cell")));
        }
        per_check_cells.push(cells);
    }
    let mut tasks = Vec::new();
    for (id, cells) in checks.iter().zip(&per_check_cells) {
        for cell in cells {
            for trial in 0..trials_for(config, *id) {
                let seed = trial_seed(config.master_seed, tasks.len() as u64);
                tasks.push(Task { cell, trial, seed });
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::ConfigInvalid(format!("worker pool: {e}")))?;
    let outcomes: Vec<Result<Outcome>> = pool.install(|| tasks.par_iter().map(run_task).collect());

    let witness_dir = config.witness_dir();
    let mut per_check: BTreeMap<CheckId, CheckSummary> = BTreeMap::new();
    let mut records = Vec::with_capacity(outcomes.len());
    let mut witnesses = Vec::new();
    for outcome in outcomes {
        let Outcome { spec, result, inputs } = outcome?;
        per_check.entry(result.check_id).or_default().add(&result);
        let mut witness_path = None;
        if let (Some(dir), Some(matrices)) = (&witness_dir, inputs) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let path = dir.join(witness_name(&spec));
            let w = Witness {
                spec: spec.clone(),
                lhs: result.lhs,
                rhs: result.rhs,
                verdict: result.verdict,
                matrices: matrices.into_iter().map(SpdMatrix::into_matrix).collect(),
            };
            w.write(&path)?;
            witness_path = Some(path.display().to_string());
            witnesses.push(path);
        }
        records.push(ResultRecord::new(&spec, &result, witness_path));
    }

    let report =
        CampaignReport { summary: CampaignSummary { per_check, wall_time: start.elapsed() }, records, witnesses };
    if let Some(path) = &config.output_path {
        write_stream(path, &report)?;
    }
    Ok(report)
}

fn write_stream(path: &Path, report: &CampaignReport) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    w.write_all(report.stream().as_bytes()).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}
