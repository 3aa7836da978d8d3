//! Pseudo-inverse least squares through a one-sided Jacobi SVD.
//!
//! Independent of the normal-equation solver under test: it never forms
//! `XᵀX`, and orthogonalizes the columns of `X` directly.

/// Returns `pinv(X) · y` for a row-major design matrix with `cols` columns.
pub fn pinv_solve(design: &[Vec<f64>], targets: &[f64], rcond: f64) -> Vec<f64> {
    let cols = design[0].len();
    // column-major working copy
    let mut a: Vec<Vec<f64>> = (0..cols)
        .map(|c| design.iter().map(|row| row[c]).collect())
        .collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|c| (0..cols).map(|r| if r == c { 1.0 } else { 0.0 }).collect())
        .collect();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();

    for _sweep in 0..100 {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let alpha = dot(&a[i], &a[i]);
                let beta = dot(&a[j], &a[j]);
                let gamma = dot(&a[i], &a[j]);
                if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for m in [&mut a, &mut v] {
                    let (lo, hi) = m.split_at_mut(j);
                    for (p, q) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
                        let (x, y) = (*p, *q);
                        *p = c * x - s * y;
                        *q = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let sigmas: Vec<f64> = a.iter().map(|col| dot(col, col).sqrt()).collect();
    let sigma_max = sigmas.iter().cloned().fold(0.0, f64::max);
    let mut beta = vec![0.0; cols];
    for k in 0..cols {
        let sk = sigmas[k];
        if sk <= rcond * sigma_max {
            continue;
        }
        // u_k = a_k / s_k ; contribution v_k (u_k · y) / s_k
        let coef = dot(&a[k], targets) / (sk * sk);
        for (b, vk) in beta.iter_mut().zip(&v[k]) {
            *b += coef * vk;
        }
    }
    beta
}
