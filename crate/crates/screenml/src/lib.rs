//! File formats, reporting and parallel execution for `screenml`.
//!
//! The algorithms live in [`screenml_core`]; this crate adds everything
//! that touches the outside world:
//!
//! * [`io`]: JSONL/CSV corpora and stop-list files
//! * [`bundle`]: versioned JSON model bundles
//! * [`render`]: `mean(std)` tables, t-test matrix and plot data
//! * [`manifest`]: run manifests written next to every output
//! * [`runner`]: repeat-parallel experiment execution
//! * [`cli`]: the `screenml` command line

pub mod bundle;
pub mod cli;
pub mod config_file;
pub mod error;
pub mod io;
pub mod manifest;
pub mod output;
pub mod render;
pub mod runner;

pub use error::{Error, Result};
pub use screenml_core as core;
