//! End-of-stream evaluation: RMSE against the held-back ground truth, update
//! counts, and timing.

use std::time::Duration;

use driftreg_core::{rmse, Snapshot};
use serde::{Deserialize, Serialize};

use crate::stream::HeldOutTruths;
use crate::{Error, Result};

/// What the engine reported for one streamed sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub prediction: f64,
    pub drift_event: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub index: usize,
    pub predicted: f64,
    pub truth: f64,
    pub drift: bool,
}

/// Identifies the run a result belongs to.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunInfo {
    pub label: String,
    pub dataset: String,
    pub target: String,
    pub detector: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    #[serde(flatten)]
    pub info: RunInfo,
    pub rmse: f64,
    pub model_updates: u64,
    pub evaluation_cycles: u64,
    pub candidate_fits: u64,
    pub regularized_fits: u64,
    pub adwin_detections: u64,
    pub total_execution_seconds: f64,
    pub processing_rate: f64,
    pub prediction_count: usize,
    #[serde(skip)]
    pub trace: Option<Vec<TracePoint>>,
}

impl RunResult {
    /// The fields that must not change between repeated runs.
    pub fn deterministic_fields(&self) -> (u64, u64, u64, usize, u64) {
        (
            self.rmse.to_bits(),
            self.model_updates,
            self.evaluation_cycles,
            self.prediction_count,
            self.candidate_fits,
        )
    }
}

/// Pairs the engine's per-step outputs with the held-back truths. This is the
/// only place ground truth of the unlabeled stream is read.
pub fn finalize_run(
    info: RunInfo,
    snapshot: &Snapshot,
    steps: &[StepRecord],
    first_index: usize,
    truths: HeldOutTruths,
    elapsed: Duration,
    keep_trace: bool,
) -> Result<RunResult> {
    if steps.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let truths = truths.0;
    let predictions: Vec<f64> = steps.iter().map(|s| s.prediction).collect();
    let rmse = rmse(&truths, &predictions)?;
    let seconds = elapsed.as_secs_f64();
    let trace = keep_trace.then(|| {
        steps
            .iter()
            .zip(&truths)
            .enumerate()
            .map(|(i, (s, t))| TracePoint {
                index: first_index + i,
                predicted: s.prediction,
                truth: *t,
                drift: s.drift_event,
            })
            .collect()
    });
    Ok(RunResult {
        info,
        rmse,
        model_updates: snapshot.model_updates,
        evaluation_cycles: snapshot.evaluation_cycles,
        candidate_fits: snapshot.candidate_fits,
        regularized_fits: snapshot.regularized_fits,
        adwin_detections: snapshot.adwin_detections,
        total_execution_seconds: seconds,
        processing_rate: steps.len() as f64 / seconds.max(f64::MIN_POSITIVE),
        prediction_count: steps.len(),
        trace,
    })
}
