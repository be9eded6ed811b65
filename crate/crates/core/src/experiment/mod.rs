//! Seeded experiment campaigns behind the `ringpir` binary.

pub mod commands;
pub mod config;
pub mod records;

pub use commands::{
    attack_sweep, cmd_attack, cmd_bounds, cmd_free_density, cmd_paper_example, cmd_roundtrip, init_thread_pool,
    paper_example_with, render_bounds, trial_rng, write_output, BoundsRow, DensityReport, PaperReport, TABLE_ONE,
};
pub use config::{ExperimentConfig, OutputFormat, SuiteSpec};
pub use records::{human_table, AttackSummary, Outcome, RoundtripSummary, TrialRecord};
