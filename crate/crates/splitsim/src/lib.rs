//! File formats, rendering, reports and the command line for `splitsim-core`.

pub mod cli;
pub mod config;
pub mod grid;
pub mod render;
pub mod report;
pub mod scan;
pub mod snapshot;

pub use cli::{cli_main, cli_run};
pub use config::RunConfig;
pub use snapshot::{load_snapshot, save_snapshot, Snapshot, SnapshotError};
