//! Library surface of the command-line front end: presentation-file
//! parsing, the named check batteries, and report assembly.  The binary in
//! `main.rs` is a thin argument-parsing layer over these modules, and the
//! integration tests drive them directly.

pub mod checks;
pub mod commands;
pub mod presentation;
pub mod report;

pub use checks::{verify_battery, CheckSet};
pub use commands::{
    cmd_curvature, cmd_derham, cmd_flat, cmd_lr, cmd_presets, cmd_verify, DerhamCheck,
    Flags, LrCheck,
};
pub use presentation::{
    inputs_digest, load_input, parse_presentation, resolve_input, CliError, Presentation,
    PresentationSpec,
};
pub use report::{CheckResult, Report, Status};
