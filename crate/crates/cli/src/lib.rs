//! Configuration, presets, run orchestration and output writers of the
//! `glmclean` command-line program.

pub mod compare;
pub mod config;
pub mod output;
pub mod presets;
pub mod run;

pub use compare::{compare_dirs, RatioTable};
pub use config::{RunConfig, Scenario};
pub use run::{run, RunSummary, Status};

/// Exit code of a run stopped by the divergence guard.
pub const EXIT_DIVERGED: i32 = 3;
/// Exit code of invalid configurations and failed runs.
pub const EXIT_FAILURE: i32 = 1;
