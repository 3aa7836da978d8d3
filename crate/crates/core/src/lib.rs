//! Label-free adaptive linear regression over data streams.
//!
//! A least-squares model is primed on a short labeled prefix of the stream.
//! After that the engine only ever sees features: it predicts, feeds its own
//! predictions back as pseudo-labels into a sliding fitting window, and every
//! time the evaluation buffer fills it fits a candidate model and compares
//! intermediary RMSE values to decide whether the data has drifted. An ADWIN
//! change detector can optionally gate those evaluation cycles.
//!
//! The crate is `no_std` and only needs `alloc`. Dataset loading, timing and
//! the command-line harness live in the companion `driftreg` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod adwin;
pub mod drift;
pub mod engine;
mod error;
mod linalg;
pub mod metrics;
pub mod regression;
pub mod window;

pub use adwin::{AdwinBound, AdwinConfig, AdwinDetector};
pub use drift::{DetectorMode, RmseDeltaDetector, Z1Policy};
pub use engine::{AdwinInput, Engine, EngineConfig, Phase, Snapshot, StepOutcome};
pub use error::{Error, Result};
pub use metrics::rmse;
pub use regression::{fit_ols, FeatureVector, LabeledRow, LinearModel, OlsFit, Standardizer};
pub use window::{EvalBuffer, SlidingWindow};
