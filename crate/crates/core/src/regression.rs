//! Ordinary least squares with an explicit intercept, plus the z-score
//! standardizer applied to features before fitting.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use crate::linalg::Cholesky;
use crate::{Error, Result};

/// Standard deviations below this are treated as zero-variance features.
pub const DEGENERATE_STD: f64 = 1e-12;

/// Above this condition estimate of `XᵀX` the ridge-stabilized solve is used.
pub const MAX_CONDITION: f64 = 1e12;

/// Ridge scale: `λ = RIDGE_SCALE · trace(XᵀX) / (n + 1)`.
pub const RIDGE_SCALE: f64 = 1e-8;

/// Input features of one sample. Every entry is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput(bad));
        }
        Ok(Self(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for FeatureVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for FeatureVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

/// A feature vector with its target. `is_pseudo` marks targets that are model
/// predictions rather than ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRow {
    pub features: FeatureVector,
    pub target: f64,
    pub is_pseudo: bool,
}

impl LabeledRow {
    /// A row carrying a ground-truth label.
    pub fn labeled(features: FeatureVector, target: f64) -> Result<Self> {
        Self::build(features, target, false)
    }

    /// A row whose target is a model prediction.
    pub fn pseudo(features: FeatureVector, target: f64) -> Result<Self> {
        Self::build(features, target, true)
    }

    fn build(features: FeatureVector, target: f64, is_pseudo: bool) -> Result<Self> {
        if !target.is_finite() {
            return Err(Error::NonFiniteInput(target));
        }
        Ok(Self {
            features,
            target,
            is_pseudo,
        })
    }

    pub fn arity(&self) -> usize {
        self.features.len()
    }
}

/// Per-feature z-score transform, fitted once and then frozen.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    means: Vec<f64>,
    std_devs: Vec<f64>,
}

impl Standardizer {
    /// Fits sample means and population (1/N) standard deviations. A feature
    /// whose deviation is below [`DEGENERATE_STD`] gets a deviation of 1 so it
    /// maps to a constant zero column instead of blowing up.
    pub fn fit<'a, I>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a LabeledRow>,
        I::IntoIter: Clone,
    {
        let rows = rows.into_iter();
        let mut count = 0usize;
        let mut sums: Vec<f64> = Vec::new();
        for (i, row) in rows.clone().enumerate() {
            if i == 0 {
                sums = vec![0.0; row.arity()];
            } else if row.arity() != sums.len() {
                return Err(Error::RaggedRows {
                    row: i,
                    expected: sums.len(),
                    found: row.arity(),
                });
            }
            for (s, x) in sums.iter_mut().zip(row.features.iter()) {
                *s += x;
            }
            count += 1;
        }
        if count == 0 {
            return Err(Error::EmptyBatch);
        }
        let n = count as f64;
        let means: Vec<f64> = sums.iter().map(|s| s / n).collect();
        let mut sq = vec![0.0; means.len()];
        for row in rows {
            for ((acc, x), m) in sq.iter_mut().zip(row.features.iter()).zip(&means) {
                let d = x - m;
                *acc += d * d;
            }
        }
        let std_devs = sq
            .into_iter()
            .map(|s| {
                let sd = libm::sqrt(s / n);
                if sd < DEGENERATE_STD {
                    1.0
                } else {
                    sd
                }
            })
            .collect();
        Ok(Self { means, std_devs })
    }

    /// Builds a standardizer from explicit parameters. Deviations must be
    /// strictly positive.
    pub fn from_parts(means: Vec<f64>, std_devs: Vec<f64>) -> Result<Self> {
        if means.len() != std_devs.len() {
            return Err(Error::ArityMismatch {
                expected: means.len(),
                found: std_devs.len(),
            });
        }
        if std_devs.iter().any(|s| s.is_nan() || *s <= 0.0 || !s.is_finite()) {
            return Err(Error::InvalidConfig("standard deviations must be positive"));
        }
        Ok(Self { means, std_devs })
    }

    pub fn arity(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn std_devs(&self) -> &[f64] {
        &self.std_devs
    }

    pub fn standardize(&self, f: &FeatureVector) -> Result<FeatureVector> {
        let mut out = f.as_slice().to_vec();
        self.standardize_in_place(&mut out)?;
        Ok(FeatureVector(out))
    }

    pub fn standardize_in_place(&self, values: &mut [f64]) -> Result<()> {
        self.check_arity(values.len())?;
        for ((x, m), s) in values.iter_mut().zip(&self.means).zip(&self.std_devs) {
            *x = (*x - m) / s;
        }
        Ok(())
    }

    /// Standardizes the features of a row, leaving the target untouched.
    pub fn standardize_row(&self, row: &mut LabeledRow) -> Result<()> {
        self.standardize_in_place(&mut row.features.0)
    }

    fn check_arity(&self, found: usize) -> Result<()> {
        if found != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found,
            });
        }
        Ok(())
    }
}

/// Fitted linear model `ŷ = intercept + Σ coefficients[i]·x[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    intercept: f64,
    coefficients: Vec<f64>,
}

impl LinearModel {
    pub fn new(intercept: f64, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidConfig("a model needs at least one feature"));
        }
        if let Some(&bad) = core::iter::once(&intercept)
            .chain(&coefficients)
            .find(|v| !v.is_finite())
        {
            return Err(Error::NonFiniteInput(bad));
        }
        Ok(Self {
            intercept,
            coefficients,
        })
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn feature_count(&self) -> usize {
        self.coefficients.len()
    }

    pub fn predict(&self, features: &[f64]) -> Result<f64> {
        if features.len() != self.coefficients.len() {
            return Err(Error::ArityMismatch {
                expected: self.coefficients.len(),
                found: features.len(),
            });
        }
        Ok(self.intercept
            + self
                .coefficients
                .iter()
                .zip(features)
                .map(|(b, x)| b * x)
                .sum::<f64>())
    }
}

/// Result of [`fit_ols`]. `regularized` is set when the ridge fallback was
/// needed because `XᵀX` was singular or badly conditioned.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub model: LinearModel,
    pub regularized: bool,
}

/// Least-squares fit with intercept, solved through the normal equations
/// `XᵀX β = XᵀY` where `X` carries a leading column of ones.
///
/// Needs at least `n + 1` rows for `n` features. Singular or near-singular
/// systems (condition estimate above [`MAX_CONDITION`]) fall back to
/// `(XᵀX + λI) β = XᵀY` with `λ = 1e-8 · trace(XᵀX) / (n + 1)`.
pub fn fit_ols<'a, I>(rows: I) -> Result<OlsFit>
where
    I: IntoIterator<Item = &'a LabeledRow>,
{
    let mut rows = rows.into_iter().peekable();
    let arity = match rows.peek() {
        Some(r) => r.arity(),
        None => {
            return Err(Error::InsufficientRows {
                needed: 2,
                found: 0,
            })
        }
    };
    if arity == 0 {
        return Err(Error::InvalidConfig("rows have no features"));
    }
    let dim = arity + 1;
    let mut xtx = vec![0.0; dim * dim];
    let mut xty = vec![0.0; dim];
    let mut design = vec![1.0; dim];
    let mut count = 0usize;
    for (i, row) in rows.enumerate() {
        if row.arity() != arity {
            return Err(Error::RaggedRows {
                row: i,
                expected: arity,
                found: row.arity(),
            });
        }
        design[1..].copy_from_slice(&row.features);
        // upper triangle only, mirrored below
        for r in 0..dim {
            let xr = design[r];
            xty[r] += xr * row.target;
            for c in r..dim {
                xtx[r * dim + c] += xr * design[c];
            }
        }
        count += 1;
    }
    if count < dim {
        return Err(Error::InsufficientRows {
            needed: dim,
            found: count,
        });
    }
    for r in 0..dim {
        for c in 0..r {
            xtx[r * dim + c] = xtx[c * dim + r];
        }
    }

    let (beta, regularized) = match Cholesky::factor(&xtx, dim) {
        Some(ch) if ch.condition_estimate() <= MAX_CONDITION => (ch.solve(&xty), false),
        _ => {
            let trace: f64 = (0..dim).map(|i| xtx[i * dim + i]).sum();
            let lambda = RIDGE_SCALE * trace / dim as f64;
            let mut ridge = xtx;
            for i in 0..dim {
                ridge[i * dim + i] += lambda;
            }
            let ch = Cholesky::factor(&ridge, dim)
                .ok_or(Error::NumericalFailure("ridge-stabilized system is not positive definite"))?;
            (ch.solve(&xty), true)
        }
    };
    if beta.iter().any(|b| !b.is_finite()) {
        return Err(Error::NumericalFailure("non-finite coefficients"));
    }
    let model = LinearModel {
        intercept: beta[0],
        coefficients: beta[1..].to_vec(),
    };
    Ok(OlsFit { model, regularized })
}
