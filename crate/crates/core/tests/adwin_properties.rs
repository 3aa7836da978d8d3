//! Statistical and structural checks on the ADWIN detector.

use driftreg_core::{AdwinConfig, AdwinDetector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn adwin(delta: f64) -> AdwinDetector {
    AdwinDetector::new(AdwinConfig::with_delta(delta)).unwrap()
}

fn bucket_bound(updates: u64, m: u64) -> usize {
    let levels = ((updates as f64) / (m as f64)).log2().floor() as usize;
    (m as usize) * (levels + 2)
}

#[test]
fn bucket_count_stays_logarithmic() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut a = adwin(0.002);
    let m = a.config().max_buckets as u64;
    for n in 1..=1_000_000u64 {
        a.update(rng.random::<f64>()).unwrap();
        if n >= m {
            assert!(
                a.bucket_count() <= bucket_bound(n, m),
                "{} buckets after {n} updates",
                a.bucket_count()
            );
        }
    }
}

#[test]
fn stationary_stream_rarely_alarms() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut a = adwin(1e-7);
    let mut detections = 0;
    for _ in 0..100_000 {
        if a.update(rng.random::<f64>()).unwrap() {
            detections += 1;
        }
    }
    assert!(detections <= 5, "{detections} false alarms");
}

fn detection_delay(rng: &mut ChaCha8Rng, low: (f64, f64), high: (f64, f64)) -> Option<usize> {
    let mut a = adwin(0.002);
    let pre = rng.random_range(300..3000);
    for _ in 0..pre {
        a.update(rng.random_range(low.0..=low.1)).unwrap();
    }
    (0..200).find(|_| a.update(rng.random_range(high.0..=high.1)).unwrap())
}

#[test]
fn half_unit_shift_detected_within_200_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let hits = (0..100)
        .filter(|_| detection_delay(&mut rng, (0.0, 0.5), (0.5, 1.0)).is_some())
        .count();
    assert!(hits >= 95, "{hits}/100 trials detected");
}

#[test]
fn step_from_zero_to_one_detected() {
    let mut a = adwin(0.002);
    for _ in 0..500 {
        assert!(!a.update(0.0).unwrap());
    }
    let first = (0..500).find(|_| a.update(1.0).unwrap()).unwrap();
    assert!(first < 120);
    for _ in first + 1..500 {
        a.update(1.0).unwrap();
    }
    assert!(a.mean() > 0.9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bucket_mean_matches_retained_items(
        seed in any::<u64>(),
        len in 1usize..10_000,
        shift_at in 0usize..10_000,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = adwin(0.01);
        let mut items: Vec<f64> = Vec::with_capacity(len);
        let mut cut_seen = false;
        for i in 0..len {
            let base = if i < shift_at { 0.2 } else { 0.8 };
            let v = base + rng.random_range(-0.2..0.2);
            cut_seen |= a.update(v).unwrap();
            items.push(v);
            let width = a.width() as usize;
            prop_assert!(width <= items.len());
            if !cut_seen {
                prop_assert_eq!(width, items.len());
            }
            let retained = &items[items.len() - width..];
            let exact = retained.iter().sum::<f64>() / width as f64;
            prop_assert!((a.mean() - exact).abs() <= 1e-9);
        }
    }
}
