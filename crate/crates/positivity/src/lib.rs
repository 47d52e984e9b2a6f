//! File formats and commands of the `positivity` tool, on top of
//! `positivity-core`.

pub mod commands;
pub mod formats;

pub use positivity_core as core;
