//! ADWIN adaptive-windowing change detector.
//!
//! The window is stored as an exponential histogram: level `i` holds buckets
//! summarizing `2^i` consecutive items, at most `max_buckets` per level. When a
//! level overflows its two oldest buckets merge into one bucket of the next
//! level, so memory grows with the logarithm of the window length.
//!
//! After each insertion every split of the window into an older part `W0` and
//! a newer part `W1` (at bucket boundaries, both parts holding at least
//! `min_sub_window` items) is tested. If the sub-window means differ by at
//! least `ε_cut` the oldest bucket is dropped and the test repeats, until no
//! split violates the bound.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::{Error, Result};

/// The deviation bound used for the cut test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdwinBound {
    /// `ε = sqrt( ln(4·n/δ) / (2m) )` with `m = 1 / (1/|W0| + 1/|W1|)`.
    /// Assumes values in a unit range.
    #[default]
    Hoeffding,
    /// Variance-aware form: with `δ' = δ/n`,
    /// `ε = sqrt( (2/m)·σ²·ln(2/δ') ) + (2/(3m))·ln(2/δ')`, where `σ²` is the
    /// variance of the whole window. Scale-aware, so usable on raw values.
    Bernstein,
}

impl AdwinBound {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Hoeffding => "hoeffding",
            Self::Bernstein => "bernstein",
        }
    }
}

impl core::fmt::Display for AdwinBound {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for AdwinBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hoeffding" => Ok(Self::Hoeffding),
            "bernstein" => Ok(Self::Bernstein),
            _ => Err(Error::InvalidConfig("bound must be hoeffding or bernstein")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdwinConfig {
    /// Confidence parameter in (0, 1).
    pub delta: f64,
    /// Bucket summaries kept per histogram level (M).
    pub max_buckets: usize,
    /// Smallest sub-window length considered in a split.
    pub min_sub_window: u64,
    pub bound: AdwinBound,
}

impl Default for AdwinConfig {
    fn default() -> Self {
        Self {
            delta: 0.002,
            max_buckets: 5,
            min_sub_window: 5,
            bound: AdwinBound::Hoeffding,
        }
    }
}

impl AdwinConfig {
    pub fn with_delta(delta: f64) -> Self {
        Self {
            delta,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Bucket {
    count: u64,
    sum: f64,
    sum_sq: f64,
}

impl Bucket {
    fn single(v: f64) -> Self {
        Self {
            count: 1,
            sum: v,
            sum_sq: v * v,
        }
    }

    fn merge(self, other: Self) -> Self {
        Self {
            count: self.count + other.count,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdwinDetector {
    config: AdwinConfig,
    /// `levels[i]` holds buckets of `2^i` items, newest at the front.
    levels: Vec<VecDeque<Bucket>>,
    total_count: u64,
    total_sum: f64,
    total_sum_sq: f64,
    detections: u64,
}

impl AdwinDetector {
    pub fn new(config: AdwinConfig) -> Result<Self> {
        if !(config.delta > 0.0 && config.delta < 1.0) {
            return Err(Error::InvalidConfig("ADWIN delta must lie in (0, 1)"));
        }
        if config.max_buckets < 2 {
            return Err(Error::InvalidConfig("ADWIN needs at least 2 buckets per level"));
        }
        if config.min_sub_window == 0 {
            return Err(Error::InvalidConfig("ADWIN minimum sub-window must be positive"));
        }
        Ok(Self {
            config,
            levels: Vec::new(),
            total_count: 0,
            total_sum: 0.0,
            total_sum_sq: 0.0,
            detections: 0,
        })
    }

    pub fn config(&self) -> &AdwinConfig {
        &self.config
    }

    /// Inserts `value` and shrinks the window while any split shows a
    /// significant change. Returns whether the window was cut.
    pub fn update(&mut self, value: f64) -> Result<bool> {
        if !value.is_finite() {
            return Err(Error::NonFiniteInput(value));
        }
        self.insert(value);
        self.compress();
        let mut cut = false;
        while self.find_cut() {
            self.drop_oldest();
            cut = true;
        }
        if cut {
            self.detections += 1;
        }
        Ok(cut)
    }

    /// Clears every bucket and aggregate. The configuration is kept.
    pub fn reset(&mut self) {
        self.levels.clear();
        self.total_count = 0;
        self.total_sum = 0.0;
        self.total_sum_sq = 0.0;
    }

    /// Number of items currently in the window.
    pub fn width(&self) -> u64 {
        self.total_count
    }

    pub fn total_sum(&self) -> f64 {
        self.total_sum
    }

    /// Mean of the retained window, `0` when empty.
    pub fn mean(&self) -> f64 {
        if self.total_count == 0 {
            0.0
        } else {
            self.total_sum / self.total_count as f64
        }
    }

    /// Population variance of the retained window.
    pub fn variance(&self) -> f64 {
        if self.total_count == 0 {
            return 0.0;
        }
        let n = self.total_count as f64;
        let mean = self.total_sum / n;
        (self.total_sum_sq / n - mean * mean).max(0.0)
    }

    /// Number of bucket summaries currently stored.
    pub fn bucket_count(&self) -> usize {
        self.levels.iter().map(VecDeque::len).sum()
    }

    /// Number of updates that cut the window since construction. Not cleared
    /// by [`reset`](Self::reset).
    pub fn detections(&self) -> u64 {
        self.detections
    }

    fn insert(&mut self, value: f64) {
        if self.levels.is_empty() {
            self.levels.push(VecDeque::with_capacity(self.config.max_buckets + 1));
        }
        self.levels[0].push_front(Bucket::single(value));
        self.total_count += 1;
        self.total_sum += value;
        self.total_sum_sq += value * value;
    }

    fn compress(&mut self) {
        let max = self.config.max_buckets;
        let mut level = 0;
        while level < self.levels.len() && self.levels[level].len() > max {
            let older = self.levels[level].pop_back().expect("overflowing level");
            let newer = self.levels[level].pop_back().expect("overflowing level");
            if level + 1 == self.levels.len() {
                self.levels.push(VecDeque::with_capacity(max + 1));
            }
            // the merged bucket is newer than everything already one level up
            self.levels[level + 1].push_front(older.merge(newer));
            level += 1;
        }
    }

    fn find_cut(&self) -> bool {
        let n = self.total_count;
        let min = self.config.min_sub_window;
        if n < 2 * min {
            return false;
        }
        let n_f = n as f64;
        let log_term = match self.config.bound {
            AdwinBound::Hoeffding => libm::log(4.0 * n_f / self.config.delta),
            AdwinBound::Bernstein => libm::log(2.0 * n_f / self.config.delta),
        };
        let variance = self.variance();

        let mut n0 = 0u64;
        let mut s0 = 0.0;
        // oldest to newest
        for level in self.levels.iter().rev() {
            for b in level.iter().rev() {
                n0 += b.count;
                s0 += b.sum;
                if n0 < min {
                    continue;
                }
                let n1 = n - n0;
                if n1 < min {
                    return false;
                }
                let (c0, c1) = (n0 as f64, n1 as f64);
                let mean_diff = (s0 / c0 - (self.total_sum - s0) / c1).abs();
                let m = 1.0 / (1.0 / c0 + 1.0 / c1);
                let eps = match self.config.bound {
                    AdwinBound::Hoeffding => libm::sqrt(log_term / (2.0 * m)),
                    AdwinBound::Bernstein => {
                        libm::sqrt(2.0 / m * variance * log_term) + 2.0 / (3.0 * m) * log_term
                    }
                };
                if mean_diff >= eps {
                    return true;
                }
            }
        }
        false
    }

    fn drop_oldest(&mut self) {
        while let Some(top) = self.levels.last_mut() {
            if top.pop_back().is_some() {
                if top.is_empty() {
                    self.levels.pop();
                }
                break;
            }
            self.levels.pop();
        }
        // recompute instead of subtracting so the aggregates never drift
        let (mut count, mut sum, mut sum_sq) = (0u64, 0.0, 0.0);
        for level in &self.levels {
            for b in level {
                count += b.count;
                sum += b.sum;
                sum_sq += b.sum_sq;
            }
        }
        self.total_count = count;
        self.total_sum = sum;
        self.total_sum_sq = sum_sq;
    }
}
