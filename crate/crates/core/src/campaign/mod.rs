//! Seeded sweeps over the verifier checks, JSON Lines result records,
//! witness files and replay.

mod config;
mod record;
mod run;
mod witness;

pub use config::{
    default_t_grid, default_z_grid, parse_z, CampaignConfig, ConfigOverrides, PEntry, PairKind, ZEntry,
    DEFAULT_MASTER_SEED,
};
pub use record::{Num, ResultRecord};
pub use run::{cells_for, draw_inputs, run_campaign, CampaignReport, CampaignSummary, Cell, CheckSummary};
pub use witness::{replay, Witness};
