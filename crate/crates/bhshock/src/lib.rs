//! File formats, subcommands and the verification suite for `bhshock-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod run;
pub mod sweep;
pub mod verify;

pub use config::{Format, RunConfig};
