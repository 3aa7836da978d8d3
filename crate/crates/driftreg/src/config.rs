//! Experiment configuration files and the default 24-experiment matrix.

use std::collections::HashSet;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use driftreg_core::{AdwinBound, AdwinConfig, AdwinInput, DetectorMode, EngineConfig, Z1Policy};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dataset::SentinelPolicy;
use crate::{Error, Result};

const REFERENCE_MATRIX: &str = include_str!("../config/reference_matrix.toml");

/// Serde through `Display` / `FromStr`, for core enums that carry no serde
/// derives.
mod text {
    use super::*;

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One experiment: a dataset/target pair plus every engine parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub label: String,
    pub dataset: String,
    pub target: String,
    #[serde(with = "text")]
    pub detector: DetectorMode,
    #[serde(default = "default_working_points")]
    pub working_points: usize,
    #[serde(default = "default_fit_window")]
    pub fit_window: usize,
    #[serde(default = "default_buffer")]
    pub buffer: usize,
    /// RMSE-delta threshold; required unless `detector` is `none`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// ADWIN confidence; required when `detector` is `adwin+rmse`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adwin_delta: Option<f64>,
    #[serde(default, with = "text")]
    pub z1_policy: Z1Policy,
    #[serde(default, with = "text")]
    pub adwin_bound: AdwinBound,
    #[serde(default, with = "text")]
    pub adwin_input: AdwinInput,
    #[serde(default = "yes")]
    pub adwin_reset: bool,
    /// Overrides the manifest's sentinel policy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentinel_policy: Option<SentinelPolicy>,
    /// Generator seed, used by the synthetic dataset only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_working_points() -> usize {
    120
}

fn default_fit_window() -> usize {
    90
}

fn default_buffer() -> usize {
    30
}

fn yes() -> bool {
    true
}

impl ExperimentConfig {
    pub fn new(label: &str, dataset: &str, target: &str, detector: DetectorMode) -> Self {
        Self {
            label: label.to_owned(),
            dataset: dataset.to_owned(),
            target: target.to_owned(),
            detector,
            working_points: default_working_points(),
            fit_window: default_fit_window(),
            buffer: default_buffer(),
            threshold: None,
            adwin_delta: None,
            z1_policy: Z1Policy::default(),
            adwin_bound: AdwinBound::default(),
            adwin_input: AdwinInput::default(),
            adwin_reset: true,
            sentinel_policy: None,
            seed: None,
            trace: None,
            out: None,
        }
    }

    /// Checks parameter consistency and builds the engine configuration.
    /// Thresholds are ignored in mode `none`.
    pub fn engine_config(&self) -> Result<EngineConfig> {
        let bad = |m: String| Err(Error::Config(format!("{}: {m}", self.label)));
        if self.fit_window + self.buffer != self.working_points {
            return bad(format!(
                "fit_window ({}) + buffer ({}) must equal working_points ({})",
                self.fit_window, self.buffer, self.working_points
            ));
        }
        let threshold = match (self.detector, self.threshold) {
            (DetectorMode::None, _) => f64::INFINITY,
            (_, Some(t)) => t,
            (_, None) => return bad("an adaptive detector needs a threshold".into()),
        };
        let mut adwin = AdwinConfig {
            bound: self.adwin_bound,
            ..AdwinConfig::default()
        };
        if self.detector == DetectorMode::AdwinGatedRmse {
            match self.adwin_delta {
                Some(d) => adwin.delta = d,
                None => return bad("adwin+rmse needs adwin_delta".into()),
            }
        }
        Ok(EngineConfig {
            fit_window: self.fit_window,
            buffer: self.buffer,
            mode: self.detector,
            threshold,
            z1_policy: self.z1_policy,
            adwin,
            adwin_input: self.adwin_input,
            adwin_reset_on_replace: self.adwin_reset,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

/// An ordered list of uniquely labeled experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentMatrix {
    /// Directory holding one sub-directory per dataset. Relative paths are
    /// resolved against the config file's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_dir: Option<PathBuf>,
    #[serde(rename = "experiment")]
    pub experiments: Vec<ExperimentConfig>,
}

impl ExperimentMatrix {
    pub fn new(experiments: Vec<ExperimentConfig>) -> Result<Self> {
        let m = Self {
            data_dir: None,
            experiments,
        };
        m.validate()?;
        Ok(m)
    }

    /// The shipped matrix of the 24 reference experiments, "Exp. 1 - (a)"
    /// through "Exp. 8 - (c)".
    pub fn reference() -> Self {
        Self::parse(REFERENCE_MATRIX).expect("built-in matrix is valid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let m: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut m = Self::parse(&text)?;
        if let Some(dir) = &m.data_dir {
            if dir.is_relative() {
                let base = path.parent().unwrap_or(Path::new("."));
                m.data_dir = Some(base.join(dir));
            }
        }
        Ok(m)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("matrix serializes")
    }

    pub fn get(&self, label: &str) -> Option<&ExperimentConfig> {
        self.experiments.iter().find(|e| e.label == label)
    }

    fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for e in &self.experiments {
            if !seen.insert(e.label.as_str()) {
                return Err(Error::Config(format!("duplicate label {:?}", e.label)));
            }
            e.engine_config()?;
        }
        Ok(())
    }
}
