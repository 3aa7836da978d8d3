//! Splits loaded records into the labeled working points and the unlabeled
//! remainder. The remainder's ground truth is moved into [`HeldOutTruths`],
//! which has no public accessor: only the metrics module can read it, after
//! the stream has been fully processed.

use driftreg_core::{FeatureVector, LabeledRow};

use crate::dataset::StreamRecord;
use crate::{Error, Result};

/// Feature vectors of the unlabeled part of a stream, in arrival order.
#[derive(Debug, Clone)]
pub struct UnlabeledStream {
    first_index: usize,
    features: Vec<FeatureVector>,
}

impl UnlabeledStream {
    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Record index of the first unlabeled sample.
    pub fn first_index(&self) -> usize {
        self.first_index
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FeatureVector> {
        self.features.iter()
    }
}

impl<'a> IntoIterator for &'a UnlabeledStream {
    type Item = &'a FeatureVector;
    type IntoIter = std::slice::Iter<'a, FeatureVector>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// Ground truth for the unlabeled samples, readable only by
/// [`finalize_run`](crate::metrics::finalize_run).
#[derive(Debug, Clone)]
pub struct HeldOutTruths(pub(crate) Vec<f64>);

impl HeldOutTruths {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct PreparedStream {
    pub labeled: Vec<LabeledRow>,
    pub unlabeled: UnlabeledStream,
    pub truths: HeldOutTruths,
}

/// The first `working_points` records keep their labels; the rest expose
/// features only.
pub fn make_stream(records: &[StreamRecord], working_points: usize) -> Result<PreparedStream> {
    if working_points >= records.len() {
        return Err(Error::InsufficientData {
            records: records.len(),
            working_points,
        });
    }
    let (prefix, rest) = records.split_at(working_points);
    let labeled = prefix
        .iter()
        .map(|r| Ok(LabeledRow::labeled(FeatureVector::new(r.features.clone())?, r.target)?))
        .collect::<Result<Vec<_>>>()?;
    let features = rest
        .iter()
        .map(|r| FeatureVector::new(r.features.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let truths = rest.iter().map(|r| r.target).collect();
    Ok(PreparedStream {
        labeled,
        unlabeled: UnlabeledStream {
            first_index: rest.first().map_or(records.len(), |r| r.index),
            features,
        },
        truths: HeldOutTruths(truths),
    })
}
