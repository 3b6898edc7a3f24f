//! Command-line front end and Monte Carlo harness for `funbreg`.
//!
//! The [`sim`] module reproduces the estimator-comparison experiment:
//! repeated draws from a scaled uniform, every estimator scored by squared
//! `L²` error against the generating density, averaged over runs, written
//! as CSV. Draws come from a counter-based generator keyed by
//! `(seed, n, run)`, and accumulation order is fixed, so a config reproduces
//! its CSV byte for byte on any platform.

pub mod cli;
pub mod config;
pub mod files;
pub mod sim;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] funbreg::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
