//! Dataset ingestion, experiment configuration and the batch runner around
//! [`driftreg_core`].

pub mod config;
pub mod dataset;
mod error;
pub mod fetch;
pub mod metrics;
pub mod report;
pub mod runner;
pub mod stream;
pub mod synthetic;

pub use error::{Error, Result};
