//! Count-based row stores: the sliding window the candidate models are fitted
//! on, and the evaluation buffer whose filling triggers a drift check.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::regression::LabeledRow;
use crate::{Error, Result};

/// FIFO of the most recent `capacity` rows. Once full, every push evicts the
/// oldest row.
#[derive(Debug, Clone)]
pub struct SlidingWindow {
    capacity: usize,
    arity: Option<usize>,
    rows: VecDeque<LabeledRow>,
}

impl SlidingWindow {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidConfig("window capacity must be positive"));
        }
        Ok(Self {
            capacity,
            arity: None,
            rows: VecDeque::with_capacity(capacity),
        })
    }

    /// Appends `row`, returning the evicted oldest row if the window was full.
    /// The first row pushed fixes the window's arity.
    pub fn push(&mut self, row: LabeledRow) -> Result<Option<LabeledRow>> {
        match self.arity {
            Some(expected) if expected != row.arity() => {
                return Err(Error::ArityMismatch {
                    expected,
                    found: row.arity(),
                })
            }
            Some(_) => {}
            None => self.arity = Some(row.arity()),
        }
        let evicted = if self.rows.len() == self.capacity {
            self.rows.pop_front()
        } else {
            None
        };
        self.rows.push_back(row);
        Ok(evicted)
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.capacity
    }

    /// Rows from oldest to newest.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = &LabeledRow> + Clone {
        self.rows.iter()
    }

    pub(crate) fn iter_mut(&mut self) -> impl Iterator<Item = &mut LabeledRow> {
        self.rows.iter_mut()
    }
}

/// Fixed-capacity buffer that is filled to capacity and then drained as a
/// whole. Pushing into a full buffer is an orchestration bug.
#[derive(Debug, Clone)]
pub struct EvalBuffer {
    capacity: usize,
    rows: Vec<LabeledRow>,
}

impl EvalBuffer {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidConfig("buffer capacity must be positive"));
        }
        Ok(Self {
            capacity,
            rows: Vec::with_capacity(capacity),
        })
    }

    /// Appends `row` and reports whether the buffer just became full.
    pub fn push(&mut self, row: LabeledRow) -> Result<bool> {
        if self.is_full() {
            return Err(Error::PushWhenFull {
                capacity: self.capacity,
            });
        }
        self.rows.push(row);
        Ok(self.is_full())
    }

    /// Removes and returns all rows in arrival order.
    pub fn drain(&mut self) -> Vec<LabeledRow> {
        core::mem::replace(&mut self.rows, Vec::with_capacity(self.capacity))
    }

    /// Empties the buffer without handing the rows out.
    pub fn clear(&mut self) {
        self.rows.clear();
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.capacity
    }

    pub fn rows(&self) -> &[LabeledRow] {
        &self.rows
    }

    pub(crate) fn rows_mut(&mut self) -> &mut [LabeledRow] {
        &mut self.rows
    }
}
