//! Config-driven experiments: TOML configs, the runner, sweeps and named recipes.

pub mod config;
pub mod recipes;
pub mod runner;
pub mod sweep;

pub use config::{
    ExperimentConfig, GridSection, ObserverSection, ReferenceKind, ReferenceSection, SchemeSection,
    SweepAxis, SweepSection, TimeSection,
};
pub use recipes::{recipe, Recipe, RECIPES};
pub use runner::{
    execute, read_reference, run_experiment, snapshot_name, write_artifacts, ExperimentResult,
    Manifest, OutputFile, RunStatus, BUILD_DESCRIBE,
};
pub use sweep::{run_sweep, write_sweep_table, MemberOutcome, SweepReport, SWEEP_HEADER};
