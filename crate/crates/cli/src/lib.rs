//! Batch front-end for `zafa-core`: validates group and hypergroup specs,
//! runs one task over them and renders a versioned report.

mod config;
mod error;
mod render;
mod run;
mod verify;

pub use config::{plan, AxiomTolerances, CacheMode, Format, HypergroupSampling, Input, Job, RunConfig, Su2Sweep, Task};
pub use error::CliError;
pub use render::{execute, render, write_report};
pub use run::{
    run, FusionEntry, FusionResult, HypergroupResult, Outcome, Report, ReportSettings, Row, TableResult, TaskResult,
    SCHEMA, SCHEMA_VERSION,
};
pub use verify::{verify_suite, CheckResult, VerifyConfig, VerifySummary};
