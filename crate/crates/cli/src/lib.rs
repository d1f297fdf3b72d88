//! Reproducible experiment campaigns over `P_n(l, d)` and the tables they
//! produce.

pub mod campaign;
pub mod config;
pub mod error;
pub mod report;

pub use campaign::{run_campaign, run_campaign_with, PoissonDetail, ResultRecord, VERSION};
pub use config::{CampaignConfig, ExperimentKind, OutputPaths};
pub use error::{CliError, CliResult};
pub use report::{convergence_report, format_report, records_csv, ReportRow};
