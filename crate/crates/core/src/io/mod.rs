//! Configuration, experiment runners, CSV/manifest output and checkpoints.

mod checkpoint;
mod config;
mod output;
mod run;

pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint, CheckpointKind, FORMAT_VERSION, MAGIC};
pub use config::{
    load_config, load_config_str, read_config, BranchKind, CounterexampleSection, DampingSection, Experiment,
    GridSection, HighLowSection, InitialSection, IntegratorSection, OutputSection,
    ResonanceSection, RunConfig, SchemeKind, SmoothingSection, SystemKind, SystemSection,
    XsbSection,
};
pub use output::{fmt_f64, write_outputs, Cell, CsvTable, Manifest, Report};
pub use run::{attractor_setup, run_experiment};
