//! Grid scans, invariant suites and table output.

mod config;
mod run;
mod table;
mod verify;

pub use config::{
    Axis, FdConfig, LoopSpec, OutputConfig, OutputFormat, PairSpec, Quantity, ResolvedScan, ScanConfig, Spacing,
    TemperatureGrid,
};
pub use run::{row_seed, run_scan};
pub use table::{format_number, ResultTable};
pub use verify::{run_verify, Check, Suite, VerifyOptions, VerifyReport};
