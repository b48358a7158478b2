//! Configuration files, manifests, report files, sweeps and the invariant
//! suite behind the command line.

mod config;
mod report;
mod sweep;
mod verify;

pub use config::{parse_config, parse_config_str, Settings, KEYS};
pub use report::{emit_reports, field_csv, prepare_out_dir, summary_text, RunManifest};
pub use sweep::{sweep, sweep_table, SweepAxis, SweepRow};
pub use verify::{verify, Check, VerifyReport};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical { .. } | Error::StepUnderflow { .. } => EXIT_NUMERICAL,
        Error::Positivity { .. } => EXIT_INVARIANT,
        Error::Domain(_) | Error::InvalidParameter { .. } | Error::Config { .. } | Error::Io(_) => EXIT_USAGE,
    }
}
