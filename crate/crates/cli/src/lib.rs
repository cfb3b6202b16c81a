//! File formats and subcommands behind the `casimir` binary.

pub mod commands;
pub mod expr;
pub mod format;

pub use commands::{CliError, Outcome, SamplingArgs};
pub use format::{emit_algebra, parse_algebra, parse_family, AlgebraFile, FamilyFile, FormatError};
