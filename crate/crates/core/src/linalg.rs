//! Dense symmetric positive-definite solves for the small normal-equation
//! systems used by the regression module. Matrices are row-major `dim × dim`.

use alloc::vec;
use alloc::vec::Vec;

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
pub(crate) struct Cholesky {
    dim: usize,
    lower: Vec<f64>,
}

impl Cholesky {
    /// Returns `None` when a pivot is not strictly positive (or not finite).
    pub(crate) fn factor(a: &[f64], dim: usize) -> Option<Self> {
        debug_assert_eq!(a.len(), dim * dim);
        let mut lower = vec![0.0; dim * dim];
        for j in 0..dim {
            let mut diag = a[j * dim + j];
            for k in 0..j {
                diag -= lower[j * dim + k] * lower[j * dim + k];
            }
            if diag.is_nan() || diag <= 0.0 || !diag.is_finite() {
                return None;
            }
            let d = libm::sqrt(diag);
            lower[j * dim + j] = d;
            for i in (j + 1)..dim {
                let mut s = a[i * dim + j];
                for k in 0..j {
                    s -= lower[i * dim + k] * lower[j * dim + k];
                }
                lower[i * dim + j] = s / d;
            }
        }
        Some(Self { dim, lower })
    }

    /// Cheap condition-number estimate of the factored matrix:
    /// `(max L_ii / min L_ii)^2`.
    pub(crate) fn condition_estimate(&self) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0_f64;
        for i in 0..self.dim {
            let d = self.lower[i * self.dim + i];
            lo = lo.min(d);
            hi = hi.max(d);
        }
        let r = hi / lo;
        r * r
    }

    pub(crate) fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let l = &self.lower;
        // forward: L y = b
        let mut y = rhs.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= l[i * n + k] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        // backward: L^T x = y
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l[k * n + i] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        y
    }
}
