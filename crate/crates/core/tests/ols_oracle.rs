//! Least-squares fits checked against an SVD pseudo-inverse oracle.

use driftreg_core::{fit_ols, FeatureVector, LabeledRow, LinearModel};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[path = "support/pinv.rs"]
mod pinv;

struct Instance {
    rows: Vec<LabeledRow>,
    design: DMatrix<f64>,
    targets: DVector<f64>,
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let features = rng.random_range(1..=8usize);
    let count = rng.random_range((features + 1) * 2..=200usize);
    let true_beta: Vec<f64> = (0..=features).map(|_| rng.random_range(-5.0..5.0)).collect();
    let mut rows = Vec::with_capacity(count);
    let mut design = DMatrix::zeros(count, features + 1);
    let mut targets = DVector::zeros(count);
    for r in 0..count {
        let x: Vec<f64> = (0..features).map(|_| rng.random_range(-3.0..3.0)).collect();
        let noise = rng.random_range(-1.0..1.0);
        let y = true_beta[0]
            + x.iter().zip(&true_beta[1..]).map(|(a, b)| a * b).sum::<f64>()
            + noise;
        design[(r, 0)] = 1.0;
        for (c, v) in x.iter().enumerate() {
            design[(r, c + 1)] = *v;
        }
        targets[r] = y;
        rows.push(LabeledRow::labeled(FeatureVector::new(x).unwrap(), y).unwrap());
    }
    Instance {
        rows,
        design,
        targets,
    }
}

fn pinv_oracle(inst: &Instance) -> DVector<f64> {
    let rows: Vec<Vec<f64>> = inst
        .design
        .row_iter()
        .map(|r| r.iter().copied().collect())
        .collect();
    let targets: Vec<f64> = inst.targets.iter().copied().collect();
    DVector::from_vec(pinv::pinv_solve(&rows, &targets, 1e-12))
}

fn params(model: &LinearModel) -> DVector<f64> {
    let mut v = vec![model.intercept()];
    v.extend_from_slice(model.coefficients());
    DVector::from_vec(v)
}

fn sse(inst: &Instance, beta: &DVector<f64>) -> f64 {
    let r = &inst.targets - &inst.design * beta;
    r.dot(&r)
}

#[test]
fn matches_pseudo_inverse_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0015);
    for _ in 0..500 {
        let inst = random_instance(&mut rng);
        let fit = fit_ols(&inst.rows).unwrap();
        assert!(!fit.regularized);
        let got = params(&fit.model);
        let want = pinv_oracle(&inst);
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).abs() <= 1e-8, "{g} vs {w}");
        }
    }
}

#[test]
fn residuals_orthogonal_to_design() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let inst = random_instance(&mut rng);
        let beta = params(&fit_ols(&inst.rows).unwrap().model);
        let residual = &inst.targets - &inst.design * &beta;
        let xtr = inst.design.transpose() * residual;
        let xty = inst.design.transpose() * &inst.targets;
        assert!(xtr.amax() <= 1e-6 * xty.amax());
    }
}

#[test]
fn no_perturbation_lowers_sse() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let inst = random_instance(&mut rng);
        let beta = params(&fit_ols(&inst.rows).unwrap().model);
        let best = sse(&inst, &beta);
        for _ in 0..100 {
            let mut delta = DVector::from_fn(beta.len(), |_, _| rng.random_range(-1.0..1.0));
            let norm = delta.norm();
            if norm > 1.0 {
                delta /= norm;
            }
            delta *= rng.random_range(0.0..1.0);
            assert!(best <= sse(&inst, &(&beta + delta)) + 1e-9);
        }
    }
}

#[test]
fn refitting_is_bit_identical() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let inst = random_instance(&mut rng);
    let a = fit_ols(&inst.rows).unwrap();
    let b = fit_ols(&inst.rows).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.model.intercept().to_bits(), b.model.intercept().to_bits());
}

#[test]
fn collinear_columns_fall_back_to_ridge() {
    // second feature is an exact copy of the first
    let rows: Vec<LabeledRow> = (0..20)
        .map(|i| {
            let x = f64::from(i);
            LabeledRow::labeled(FeatureVector::new(vec![x, x]).unwrap(), 3.0 * x + 1.0).unwrap()
        })
        .collect();
    let fit = fit_ols(&rows).unwrap();
    assert!(fit.regularized);
    let c = fit.model.coefficients();
    // ridge splits the weight evenly between the copies
    assert!((c[0] + c[1] - 3.0).abs() < 1e-4);
    assert!((c[0] - c[1]).abs() < 1e-6);
    for i in 0..20 {
        let x = f64::from(i);
        assert!((fit.model.predict(&[x, x]).unwrap() - (3.0 * x + 1.0)).abs() < 1e-3);
    }
}
