//! `matmeans`: run inequality campaigns, reproduce the counterexample and
//! replay witnesses.
//!
//! Configuration is layered: subcommand defaults, then `--config FILE`
//! (TOML, keys named like the flags with underscores), then flags, then the
//! `MATMEANS_SEED` environment variable for the master seed.
//!
//! Exit codes: 0 when every proved check holds, 2 when one is violated,
//! 1 on usage, configuration or I/O errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use matmeans::campaign::{
    run_campaign, CampaignConfig, CampaignReport, ConfigOverrides, PEntry, ResultRecord, Witness, ZEntry,
};
use matmeans::verifier::{reproduce_counterexample, CheckResult};
use matmeans::Error;

const SEED_ENV: &str = "MATMEANS_SEED";

#[derive(Parser, Debug)]
#[command(name = "matmeans", version, about = "Matrix means and inequality checkers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the proved-inequality campaign with the default grids.
    Verify(CampaignArgs),
    /// Run a campaign over user-supplied grids.
    Sweep(CampaignArgs),
    /// Reproduce the weak-majorization counterexample and search the open
    /// trace comparison.
    Counterexample(CampaignArgs),
    /// Re-execute the check stored in a witness file.
    Replay { witness_file: PathBuf },
}

#[derive(Args, Debug, Default)]
struct CampaignArgs {
    /// TOML file with campaign settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated check ids.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    t_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    r_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    s_grid: Option<Vec<f64>>,
    /// Schatten indices, e.g. `1,2,inf`.
    #[arg(long, value_delimiter = ',')]
    p_set: Option<Vec<String>>,
    /// Strip points written `re+imi`, e.g. `0.5,0.25-2i`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    z_grid: Option<Vec<String>>,
    /// Family sizes for multi-matrix checks.
    #[arg(long, value_delimiter = ',')]
    m_set: Option<Vec<usize>>,
    /// Any of generic, equal, commuting.
    #[arg(long, value_delimiter = ',')]
    pairs: Option<Vec<String>>,
    #[arg(long)]
    trials_per_cell: Option<usize>,
    #[arg(long)]
    master_seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    condition_targets: Option<Vec<f64>>,
    /// JSON Lines destination; records go to stdout when omitted.
    #[arg(long)]
    output_path: Option<PathBuf>,
    /// Directory for witness files of violated trials.
    #[arg(long)]
    witness_dir: Option<PathBuf>,
    /// Worker threads (0: one per core).
    #[arg(long)]
    workers: Option<usize>,
}

impl CampaignArgs {
    fn into_overrides(self) -> ConfigOverrides {
        ConfigOverrides {
            checks: self.checks,
            dims: self.dims,
            t_grid: self.t_grid,
            r_grid: self.r_grid,
            s_grid: self.s_grid,
            p_set: self.p_set.map(|v| v.into_iter().map(PEntry::Text).collect()),
            z_grid: self.z_grid.map(|v| v.into_iter().map(ZEntry::Text).collect()),
            m_set: self.m_set,
            pairs: self.pairs,
            trials_per_cell: self.trials_per_cell,
            master_seed: self.master_seed,
            condition_targets: self.condition_targets,
            output_path: self.output_path,
            witness_dir: self.witness_dir,
            workers: self.workers,
        }
    }
}

fn resolve(base: CampaignConfig, mut args: CampaignArgs) -> Result<CampaignConfig, Error> {
    let mut config = match args.config.take() {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::ConfigInvalid(format!("cannot read {}: {e}", path.display())))?;
            ConfigOverrides::from_toml_str(&text)
                .map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?
                .apply(base)?
        }
        None => base,
    };
    config = args.into_overrides().apply(config)?;
    if let Ok(seed) = std::env::var(SEED_ENV) {
        config.master_seed = seed
            .trim()
            .parse()
            .map_err(|_| Error::ConfigInvalid(format!("{SEED_ENV}={seed:?} is not a 64-bit unsigned integer")))?;
    }
    if config.output_path.is_none() && config.witness_dir.is_none() {
        config.witness_dir = Some(PathBuf::from("matmeans-witnesses"));
    }
    Ok(config)
}

fn emit(config: &CampaignConfig, report: &CampaignReport) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if config.output_path.is_none() {
        out.write_all(report.stream().as_bytes())?;
        out.flush()?;
        eprint!("{}", report.summary.render_table());
    } else {
        write!(out, "{}", report.summary.render_table())?;
    }
    if !report.witnesses.is_empty() {
        eprintln!("{} witness file(s) written", report.witnesses.len());
    }
    for id in report.summary.failing_checks() {
        eprintln!("proved check {id} has VIOLATED trials");
    }
    Ok(())
}

fn describe(result: &CheckResult) -> String {
    let mut line = format!(
        "{:<24} lhs={:.16e} rhs={:.16e} margin={:.16e} tol={:.3e} {}",
        result.check_id.as_str(),
        result.lhs,
        result.rhs,
        result.margin,
        result.tolerance,
        result.verdict
    );
    if let Some(d) = &result.detail {
        line.push_str(&format!("\n    left={:?}\n    right={:?}", d.left, d.right));
    }
    line
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Verify(args) => {
            let config = resolve(CampaignConfig::default(), args)?;
            let report = run_campaign(&config)?;
            emit(&config, &report).map_err(|e| Error::ConfigInvalid(format!("writing output: {e}")))?;
            Ok(report.summary.exit_code())
        }
        Command::Sweep(args) => {
            let config = resolve(CampaignConfig::default(), args)?;
            let report = run_campaign(&config)?;
            emit(&config, &report).map_err(|e| Error::ConfigInvalid(format!("writing output: {e}")))?;
            Ok(report.summary.exit_code())
        }
        Command::Counterexample(args) => {
            let reproduction = reproduce_counterexample();
            for r in reproduction.results() {
                eprintln!("{}", describe(r));
            }
            eprintln!("reproduced: {}", reproduction.reproduced());
            let config = resolve(CampaignConfig::counterexample_default(), args)?;
            let report = run_campaign(&config)?;
            emit(&config, &report).map_err(|e| Error::ConfigInvalid(format!("writing output: {e}")))?;
            Ok(report.summary.exit_code())
        }
        Command::Replay { witness_file } => {
            let witness = Witness::read(&witness_file)?;
            let result = witness.replay()?;
            let record = ResultRecord::new(&witness.spec, &result, None);
            println!("{}", record.to_line());
            eprintln!("recorded verdict {}, replayed verdict {}", witness.verdict, result.verdict);
            Ok(if result.check_id.is_gating() && result.verdict.is_violated() { 2 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
