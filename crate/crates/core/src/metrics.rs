//! Root-mean-square error.

use crate::{Error, Result};

/// `sqrt( (1/N) · Σ (truth_i − prediction_i)² )`.
pub fn rmse(truths: &[f64], predictions: &[f64]) -> Result<f64> {
    if truths.len() != predictions.len() {
        return Err(Error::LengthMismatch {
            left: truths.len(),
            right: predictions.len(),
        });
    }
    if truths.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sse = 0.0;
    for (t, p) in truths.iter().zip(predictions) {
        if !t.is_finite() {
            return Err(Error::NonFiniteInput(*t));
        }
        if !p.is_finite() {
            return Err(Error::NonFiniteInput(*p));
        }
        let d = t - p;
        sse += d * d;
    }
    Ok(libm::sqrt(sse / truths.len() as f64))
}
