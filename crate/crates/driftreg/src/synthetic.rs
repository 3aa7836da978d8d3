//! Seeded piecewise-linear stream for end-to-end drift tests.
//!
//! `x ~ U(x_low, x_high)`, `y = slope·x + intercept + U(-noise, noise)`. After
//! the first `working_points + shift_after` records every `x` is offset by
//! `x_shift`; the relation between `x` and `y` is unchanged unless
//! `post_intercept` is set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::StreamRecord;

/// Name accepted as `--dataset` to run on this generator.
pub const DATASET_NAME: &str = "synthetic";
pub const TARGET_NAME: &str = "y";

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    pub seed: u64,
    pub working_points: usize,
    /// Streamed samples before the shift.
    pub shift_after: usize,
    /// Total streamed samples.
    pub steps: usize,
    pub slope: f64,
    pub intercept: f64,
    /// Intercept after the shift; `None` keeps `intercept`.
    pub post_intercept: Option<f64>,
    pub x_low: f64,
    pub x_high: f64,
    pub x_shift: f64,
    pub noise: f64,
}

impl Default for PiecewiseLinear {
    fn default() -> Self {
        Self {
            seed: 0,
            working_points: 120,
            shift_after: 500,
            steps: 1500,
            slope: 2.0,
            intercept: 0.0,
            post_intercept: None,
            x_low: 0.0,
            x_high: 10.0,
            x_shift: 10.0,
            noise: 0.5,
        }
    }
}

impl PiecewiseLinear {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    /// Record index of the first shifted sample.
    pub fn shift_index(&self) -> usize {
        self.working_points + self.shift_after
    }

    pub fn generate(&self) -> Vec<StreamRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let total = self.working_points + self.steps;
        (0..total)
            .map(|index| {
                let shifted = index >= self.shift_index();
                let mut x = rng.random_range(self.x_low..self.x_high);
                let e = if self.noise > 0.0 {
                    rng.random_range(-self.noise..self.noise)
                } else {
                    0.0
                };
                let intercept = match (shifted, self.post_intercept) {
                    (true, Some(b)) => b,
                    _ => self.intercept,
                };
                if shifted {
                    x += self.x_shift;
                }
                StreamRecord {
                    index,
                    features: vec![x],
                    target: self.slope * x + intercept + e,
                }
            })
            .collect()
    }
}
