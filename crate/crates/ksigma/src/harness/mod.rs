//! Experiment harness: JSON-configurable runners that drive the scans and
//! theorem checks, assemble deterministic reports, and serialize them as
//! CSV rows and JSON summaries.

pub mod config;
pub mod report;
pub mod runners;

pub use config::{MultiplierSpec, ScanConfig, TGrid, TheoremCheckConfig, TheoremKind};
pub use report::{beta_range, slope_fit, BetaRange, ExperimentReport, ReportRow};
pub use runners::run_experiment;
