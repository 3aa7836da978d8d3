//! RMSE-delta drift detector and the detector-mode switch.

use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// Which drift machinery a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetectorMode {
    /// Every evaluation cycle runs the RMSE-delta check.
    #[default]
    RmseOnly,
    /// Evaluation cycles run only after ADWIN has flagged a change since the
    /// previous cycle.
    AdwinGatedRmse,
    /// Never adapt: the primed model is used for the whole stream.
    None,
}

impl DetectorMode {
    pub const ALL: [DetectorMode; 3] = [Self::RmseOnly, Self::AdwinGatedRmse, Self::None];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::RmseOnly => "rmse",
            Self::AdwinGatedRmse => "adwin+rmse",
            Self::None => "none",
        }
    }

    pub fn adapts(self) -> bool {
        !matches!(self, Self::None)
    }
}

impl fmt::Display for DetectorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DetectorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rmse" => Ok(Self::RmseOnly),
            "adwin+rmse" | "adwin" => Ok(Self::AdwinGatedRmse),
            "none" => Ok(Self::None),
            _ => Err(Error::InvalidConfig(
                "detector must be one of rmse, adwin+rmse, none",
            )),
        }
    }
}

/// When the stored reference RMSE moves forward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Z1Policy {
    /// After every check, drift or not.
    #[default]
    Advance,
    /// Only when a check declares drift.
    OnDriftOnly,
}

impl Z1Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Advance => "advance",
            Self::OnDriftOnly => "on-drift-only",
        }
    }
}

impl fmt::Display for Z1Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Z1Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "advance" => Ok(Self::Advance),
            "on-drift-only" => Ok(Self::OnDriftOnly),
            _ => Err(Error::InvalidConfig(
                "z1 policy must be advance or on-drift-only",
            )),
        }
    }
}

/// Compares each new intermediary RMSE (Z2) against the stored one (Z1) and
/// signals drift when they differ by more than `threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct RmseDeltaDetector {
    threshold: f64,
    policy: Z1Policy,
    z_prev: Option<f64>,
}

impl RmseDeltaDetector {
    /// `threshold` may be `+∞` (never fires) but not negative or NaN.
    pub fn new(threshold: f64, policy: Z1Policy) -> Result<Self> {
        if threshold.is_nan() || threshold < 0.0 {
            return Err(Error::InvalidConfig("threshold must be non-negative"));
        }
        Ok(Self {
            threshold,
            policy,
            z_prev: None,
        })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn policy(&self) -> Z1Policy {
        self.policy
    }

    /// The stored reference RMSE, unset until the first check.
    pub fn z_prev(&self) -> Option<f64> {
        self.z_prev
    }

    /// The first call only stores `z_new` and returns `false`.
    pub fn check(&mut self, z_new: f64) -> Result<bool> {
        if !z_new.is_finite() || z_new < 0.0 {
            return Err(Error::NonFiniteInput(z_new));
        }
        let Some(z_prev) = self.z_prev else {
            self.z_prev = Some(z_new);
            return Ok(false);
        };
        let drift = (z_new - z_prev).abs() > self.threshold;
        if drift || self.policy == Z1Policy::Advance {
            self.z_prev = Some(z_new);
        }
        Ok(drift)
    }
}
