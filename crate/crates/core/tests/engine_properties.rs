//! Engine invariants on seeded synthetic streams.

use driftreg_core::{
    DetectorMode, Engine, EngineConfig, FeatureVector, LabeledRow, Result, StepOutcome,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FEATURES: usize = 3;

/// Three features, a linear target with noise, and an input shift plus a
/// change of slope half way through the unlabeled part.
fn stream(seed: u64, labeled: usize, unlabeled: usize) -> (Vec<LabeledRow>, Vec<FeatureVector>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = |t: usize| {
        let late = t >= labeled + unlabeled / 2;
        let x: Vec<f64> = (0..FEATURES)
            .map(|j| rng.random_range(0.0..1.0) + if late && j == 0 { 0.5 } else { 0.0 })
            .collect();
        let slope = if late { 0.2 } else { 0.6 };
        let y = 0.1 + slope * x[0] + 0.3 * x[1] - 0.2 * x[2] + rng.random_range(-0.05..0.05);
        (FeatureVector::new(x).unwrap(), y)
    };
    let prefix = (0..labeled)
        .map(|t| {
            let (x, y) = sample(t);
            LabeledRow::labeled(x, y).unwrap()
        })
        .collect();
    let rest = (labeled..labeled + unlabeled).map(|t| sample(t).0).collect();
    (prefix, rest)
}

fn config(mode: DetectorMode, threshold: f64) -> EngineConfig {
    EngineConfig {
        mode,
        threshold,
        ..EngineConfig::default()
    }
}

fn run(cfg: EngineConfig, seed: u64, steps: usize) -> (Engine, Vec<StepOutcome>) {
    let mut engine = Engine::new(cfg).unwrap();
    let (prefix, rest) = stream(seed, engine.config().working_points(), steps);
    for row in prefix {
        engine.prime(row).unwrap();
    }
    let outcomes = rest.iter().map(|f| engine.step(f).unwrap()).collect();
    (engine, outcomes)
}

#[test]
fn step_only_accepts_features() {
    // the streaming entry point has no way to receive a target
    let _: fn(&mut Engine, &FeatureVector) -> Result<StepOutcome> = Engine::step;
}

#[test]
fn identical_inputs_give_bit_identical_outcomes() {
    for mode in DetectorMode::ALL {
        let (_, a) = run(config(mode, 1e-6), 17, 3000);
        let (_, b) = run(config(mode, 1e-6), 17, 3000);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.prediction.to_bits(), y.prediction.to_bits());
            assert_eq!(x.model_replaced, y.model_replaced);
            assert_eq!(x.cycle_z2.map(f64::to_bits), y.cycle_z2.map(f64::to_bits));
        }
    }
}

#[test]
fn window_and_buffer_invariants_hold_every_step() {
    for mode in DetectorMode::ALL {
        let cfg = config(mode, 1e-9);
        let (window, buffer) = (cfg.fit_window, cfg.buffer);
        let mut engine = Engine::new(cfg).unwrap();
        let (prefix, rest) = stream(3, window + buffer, 2000);
        for row in prefix {
            engine.prime(row).unwrap();
        }
        for (i, f) in rest.iter().enumerate() {
            let out = engine.step(f).unwrap();
            assert_eq!(engine.fit_window().len(), window);
            assert_eq!(engine.buffer().len(), (i + 1) % buffer);
            assert!(!out.model_replaced || out.drift_event);
            let snap = engine.snapshot();
            assert!(snap.model_updates <= snap.evaluation_cycles);
        }
    }
}

#[test]
fn baseline_never_updates_and_keeps_primed_model() {
    let (engine, outcomes) = run(config(DetectorMode::None, 0.0), 8, 5000);
    let snap = engine.snapshot();
    assert_eq!(snap.model_updates, 0);
    assert!(outcomes.iter().all(|o| !o.model_replaced && o.cycle_z2.is_none()));

    // predictions equal the primed model applied to standardized inputs
    let mut fresh = Engine::new(config(DetectorMode::None, 0.0)).unwrap();
    let (prefix, rest) = stream(8, fresh.config().working_points(), 5000);
    for row in prefix {
        fresh.prime(row).unwrap();
    }
    let model = fresh.model().unwrap().clone();
    let standardizer = fresh.standardizer().unwrap().clone();
    for (f, o) in rest.iter().zip(&outcomes) {
        let z = standardizer.standardize(f).unwrap();
        assert_eq!(model.predict(&z).unwrap().to_bits(), o.prediction.to_bits());
    }
}

#[test]
fn infinite_threshold_never_drifts() {
    let (engine, outcomes) = run(config(DetectorMode::RmseOnly, f64::INFINITY), 21, 10_000);
    assert!(outcomes.iter().all(|o| !o.drift_event));
    assert_eq!(engine.snapshot().model_updates, 0);
    assert_eq!(engine.snapshot().evaluation_cycles, 10_000 / 30);
}

#[test]
fn gating_never_adds_updates() {
    for seed in 0..20 {
        for threshold in [1e-12, 1e-6, 1e-3] {
            let (plain, _) = run(config(DetectorMode::RmseOnly, threshold), seed, 4000);
            let (gated, _) = run(config(DetectorMode::AdwinGatedRmse, threshold), seed, 4000);
            let (p, g) = (plain.snapshot(), gated.snapshot());
            assert!(
                g.model_updates <= p.model_updates,
                "seed {seed} threshold {threshold}: gated {} > plain {}",
                g.model_updates,
                p.model_updates
            );
            assert!(g.candidate_fits <= p.candidate_fits);
        }
    }
}

#[test]
fn snapshot_after_replacement() {
    let mut engine = Engine::new(config(DetectorMode::RmseOnly, 0.0)).unwrap();
    let (prefix, rest) = stream(4, 120, 300);
    for row in prefix {
        engine.prime(row).unwrap();
    }
    let primed = engine.snapshot();
    assert_eq!(primed.model_updates, 0);
    let mut replaced = false;
    for f in &rest {
        if engine.step(f).unwrap().model_replaced {
            replaced = true;
            break;
        }
    }
    assert!(replaced);
    let after = engine.snapshot();
    assert_eq!(after.model_updates, 1);
    assert_ne!(after.model, primed.model);
    assert_eq!(engine.snapshot(), after);
}
