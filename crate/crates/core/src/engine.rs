//! The streaming engine.
//!
//! Priming: labeled rows fill the fitting window, then the evaluation buffer.
//! Once both are full the standardizer is fitted on all of them and frozen,
//! the first model is fitted on the window, and its RMSE on the buffer becomes
//! the initial reference value Z1.
//!
//! Streaming: each unlabeled sample is predicted, and the prediction is used
//! as a pseudo-label for both the window and the buffer. When the buffer
//! fills, a candidate model is fitted on the window, its RMSE against the
//! buffer's pseudo-targets (Z2) is compared with Z1, and the candidate
//! replaces the current model if they differ by more than the threshold.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::adwin::{AdwinConfig, AdwinDetector};
use crate::drift::{DetectorMode, RmseDeltaDetector, Z1Policy};
use crate::metrics::rmse;
use crate::regression::{fit_ols, FeatureVector, LabeledRow, LinearModel, Standardizer};
use crate::window::{EvalBuffer, SlidingWindow};
use crate::{Error, Result};

/// Scalar fed to ADWIN for every streamed sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdwinInput {
    /// The model's prediction for the sample.
    #[default]
    Prediction,
    /// One standardized input feature, by index.
    Feature(usize),
}

impl fmt::Display for AdwinInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Prediction => f.write_str("prediction"),
            Self::Feature(i) => write!(f, "feature:{i}"),
        }
    }
}

impl FromStr for AdwinInput {
    type Err = Error;

    /// `prediction` or `feature:<index>`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "prediction" {
            return Ok(Self::Prediction);
        }
        s.strip_prefix("feature:")
            .and_then(|i| i.parse().ok())
            .map(Self::Feature)
            .ok_or(Error::InvalidConfig(
                "ADWIN input must be prediction or feature:<index>",
            ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    /// Capacity of the model-fitting window (W).
    pub fit_window: usize,
    /// Capacity of the evaluation buffer (n).
    pub buffer: usize,
    pub mode: DetectorMode,
    /// RMSE-delta threshold. Ignored when `mode` is [`DetectorMode::None`].
    pub threshold: f64,
    pub z1_policy: Z1Policy,
    pub adwin: AdwinConfig,
    pub adwin_input: AdwinInput,
    /// Clear ADWIN after each model replacement.
    pub adwin_reset_on_replace: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            fit_window: 90,
            buffer: 30,
            mode: DetectorMode::RmseOnly,
            threshold: 1e-5,
            z1_policy: Z1Policy::Advance,
            adwin: AdwinConfig::default(),
            adwin_input: AdwinInput::Prediction,
            adwin_reset_on_replace: true,
        }
    }
}

impl EngineConfig {
    /// Number of labeled rows consumed by priming.
    pub fn working_points(&self) -> usize {
        self.fit_window + self.buffer
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Priming,
    Streaming,
}

impl Phase {
    fn name(self) -> &'static str {
        match self {
            Phase::Priming => "priming",
            Phase::Streaming => "streaming",
        }
    }
}

/// What happened on one streamed sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub prediction: f64,
    /// The RMSE-delta check declared drift on this sample's cycle.
    pub drift_event: bool,
    pub model_replaced: bool,
    /// Reference RMSE before this sample's evaluation cycle, if one ran.
    pub cycle_z1: Option<f64>,
    /// Candidate-model RMSE computed in this sample's evaluation cycle.
    pub cycle_z2: Option<f64>,
}

/// Counters and current parameters, read without touching engine state.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub predictions_made: u64,
    pub model_updates: u64,
    pub evaluation_cycles: u64,
    /// Cycles that fitted a candidate model.
    pub candidate_fits: u64,
    /// Fits (initial or candidate) that needed the ridge fallback.
    pub regularized_fits: u64,
    pub adwin_detections: u64,
    pub z1: Option<f64>,
    pub model: Option<LinearModel>,
}

#[derive(Debug, Clone)]
pub struct Engine {
    config: EngineConfig,
    phase: Phase,
    standardizer: Option<Standardizer>,
    model: Option<LinearModel>,
    fit_window: SlidingWindow,
    buffer: EvalBuffer,
    rmse_detector: RmseDeltaDetector,
    adwin: Option<AdwinDetector>,
    adwin_armed: bool,
    predictions_made: u64,
    model_updates: u64,
    evaluation_cycles: u64,
    candidate_fits: u64,
    regularized_fits: u64,
    scratch_truths: Vec<f64>,
    scratch_preds: Vec<f64>,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        let fit_window = SlidingWindow::new(config.fit_window)?;
        let buffer = EvalBuffer::new(config.buffer)?;
        let threshold = if config.mode.adapts() {
            config.threshold
        } else {
            f64::INFINITY
        };
        let rmse_detector = RmseDeltaDetector::new(threshold, config.z1_policy)?;
        let adwin = match config.mode {
            DetectorMode::AdwinGatedRmse => Some(AdwinDetector::new(config.adwin)?),
            _ => None,
        };
        Ok(Self {
            phase: Phase::Priming,
            standardizer: None,
            model: None,
            fit_window,
            buffer,
            rmse_detector,
            adwin,
            adwin_armed: false,
            predictions_made: 0,
            model_updates: 0,
            evaluation_cycles: 0,
            candidate_fits: 0,
            regularized_fits: 0,
            scratch_truths: Vec::with_capacity(config.buffer),
            scratch_preds: Vec::with_capacity(config.buffer),
            config,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn standardizer(&self) -> Option<&Standardizer> {
        self.standardizer.as_ref()
    }

    pub fn model(&self) -> Option<&LinearModel> {
        self.model.as_ref()
    }

    pub fn fit_window(&self) -> &SlidingWindow {
        &self.fit_window
    }

    pub fn buffer(&self) -> &EvalBuffer {
        &self.buffer
    }

    pub fn adwin_armed(&self) -> bool {
        self.adwin_armed
    }

    /// Feeds one labeled working point. Returns `true` on the call that
    /// completes priming.
    pub fn prime(&mut self, row: LabeledRow) -> Result<bool> {
        if self.phase != Phase::Priming {
            return Err(Error::WrongPhase(self.phase.name()));
        }
        if row.is_pseudo {
            return Err(Error::PseudoLabelInPriming);
        }
        if !self.fit_window.is_full() {
            self.fit_window.push(row)?;
            return Ok(false);
        }
        if let Some(expected) = self.fit_window.iter().next().map(LabeledRow::arity) {
            if expected != row.arity() {
                return Err(Error::ArityMismatch {
                    expected,
                    found: row.arity(),
                });
            }
        }
        if !self.buffer.push(row)? {
            return Ok(false);
        }

        let standardizer = Standardizer::fit(self.fit_window.iter().chain(self.buffer.rows()))?;
        for row in self.fit_window.iter_mut() {
            standardizer.standardize_row(row)?;
        }
        for row in self.buffer.rows_mut() {
            standardizer.standardize_row(row)?;
        }
        let fit = fit_ols(self.fit_window.iter())?;
        if fit.regularized {
            self.regularized_fits += 1;
        }
        let z1 = buffer_rmse(
            &fit.model,
            self.buffer.rows(),
            &mut self.scratch_truths,
            &mut self.scratch_preds,
        )?;
        self.rmse_detector.check(z1)?;
        self.buffer.clear();
        self.standardizer = Some(standardizer);
        self.model = Some(fit.model);
        self.phase = Phase::Streaming;
        Ok(true)
    }

    /// Predicts one unlabeled sample and runs an evaluation cycle if the
    /// buffer fills. Only features are accepted: ground truth never reaches
    /// the engine once streaming starts.
    pub fn step(&mut self, features: &FeatureVector) -> Result<StepOutcome> {
        if self.phase != Phase::Streaming {
            return Err(Error::WrongPhase(self.phase.name()));
        }
        let (standardizer, model) = match (&self.standardizer, &self.model) {
            (Some(s), Some(m)) => (s, m),
            _ => return Err(Error::WrongPhase(self.phase.name())),
        };
        let standardized = standardizer.standardize(features)?;
        let prediction = model.predict(&standardized)?;
        if !prediction.is_finite() {
            return Err(Error::NumericalFailure("non-finite prediction"));
        }
        self.predictions_made += 1;

        let adwin_value = match self.config.adwin_input {
            AdwinInput::Prediction => prediction,
            AdwinInput::Feature(i) => *standardized.get(i).ok_or(Error::ArityMismatch {
                expected: i + 1,
                found: standardized.len(),
            })?,
        };
        let row = LabeledRow::pseudo(standardized, prediction)?;
        self.fit_window.push(row.clone())?;
        let buffer_full = self.buffer.push(row)?;

        if let Some(adwin) = self.adwin.as_mut() {
            if adwin.update(adwin_value)? {
                self.adwin_armed = true;
            }
        }

        let mut outcome = StepOutcome {
            prediction,
            drift_event: false,
            model_replaced: false,
            cycle_z1: None,
            cycle_z2: None,
        };
        if buffer_full {
            self.evaluation_cycle(&mut outcome)?;
        }
        Ok(outcome)
    }

    fn evaluation_cycle(&mut self, outcome: &mut StepOutcome) -> Result<()> {
        self.evaluation_cycles += 1;
        let skip = match self.config.mode {
            DetectorMode::None => true,
            DetectorMode::AdwinGatedRmse => !self.adwin_armed,
            DetectorMode::RmseOnly => false,
        };
        if !skip {
            let candidate = fit_ols(self.fit_window.iter())?;
            self.candidate_fits += 1;
            if candidate.regularized {
                self.regularized_fits += 1;
            }
            let z2 = buffer_rmse(
                &candidate.model,
                self.buffer.rows(),
                &mut self.scratch_truths,
                &mut self.scratch_preds,
            )?;
            outcome.cycle_z1 = self.rmse_detector.z_prev();
            outcome.cycle_z2 = Some(z2);
            if self.rmse_detector.check(z2)? {
                outcome.drift_event = true;
                outcome.model_replaced = true;
                self.model = Some(candidate.model);
                self.model_updates += 1;
                if self.config.adwin_reset_on_replace {
                    if let Some(adwin) = self.adwin.as_mut() {
                        adwin.reset();
                    }
                }
            }
        }
        self.buffer.clear();
        self.adwin_armed = false;
        Ok(())
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            predictions_made: self.predictions_made,
            model_updates: self.model_updates,
            evaluation_cycles: self.evaluation_cycles,
            candidate_fits: self.candidate_fits,
            regularized_fits: self.regularized_fits,
            adwin_detections: self.adwin.as_ref().map_or(0, AdwinDetector::detections),
            z1: self.rmse_detector.z_prev(),
            model: self.model.clone(),
        }
    }
}

fn buffer_rmse(
    model: &LinearModel,
    rows: &[LabeledRow],
    truths: &mut Vec<f64>,
    preds: &mut Vec<f64>,
) -> Result<f64> {
    truths.clear();
    preds.clear();
    for row in rows {
        truths.push(row.target);
        preds.push(model.predict(&row.features)?);
    }
    rmse(truths, preds)
}
