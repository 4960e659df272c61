//! Generated populations against closed-form frequencies.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ddguide::datagen::{generate_population, sample_raw, GenConfig};
use ddguide::population::Population;

/// Composite Simpson rule with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|k| f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + inner + f(b)) * h / 3.0
}

/// P(X ≥ cut) for a normal(mean, sd) truncated to [lo, hi].
fn truncated_tail(lo: f64, hi: f64, mean: f64, sd: f64, cut: f64) -> f64 {
    let pdf = |x: f64| (-0.5 * ((x - mean) / sd).powi(2)).exp();
    simpson(pdf, cut, hi, 20_000) / simpson(pdf, lo, hi, 20_000)
}

fn item_share(pop: &Population, item: usize) -> f64 {
    let hit: u64 = pop.types().iter().filter(|t| t.items[item]).map(|t| t.weight).sum();
    hit as f64 / pop.total_weight() as f64
}

#[test]
fn item_frequencies_match_closed_forms() {
    let pop = generate_population(&GenConfig::health_checkup(100_000, 21)).unwrap();
    assert_eq!(pop.total_weight(), 100_000);
    // HbA1c ≥ 6.5 on the truncated normal.
    let p8 = truncated_tail(3.0, 20.0, 5.19, 0.73, 6.5);
    assert!((p8 - 0.0366).abs() < 0.002, "oracle drifted: {p8}");
    assert!((item_share(&pop, 8) - p8).abs() < 0.005);
    // Categorical and Bernoulli driven items.
    assert!((item_share(&pop, 0) - 0.551).abs() < 0.01);
    assert!((item_share(&pop, 18) - 0.853).abs() < 0.01);
    assert!((item_share(&pop, 4) - 0.020).abs() < 0.01);
}

#[test]
fn categorical_draws_follow_their_tables() {
    let cfg = GenConfig::health_checkup(0, 0);
    let col = cfg.attributes.iter().position(|a| a.name == "urine_protein").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut counts = [0u32; 5];
    let n = 100_000;
    for _ in 0..n {
        let raw = sample_raw(&cfg.attributes, &mut rng).unwrap();
        counts[raw.values[col] as usize - 1] += 1;
    }
    for (c, p) in counts.iter().zip([0.853, 0.100, 0.034, 0.010, 0.003]) {
        assert!((*c as f64 / n as f64 - p).abs() < 0.01);
    }
}

#[test]
fn same_seed_same_population() {
    let a = generate_population(&GenConfig::health_checkup(2_000, 5)).unwrap();
    let b = generate_population(&GenConfig::health_checkup(2_000, 5)).unwrap();
    let c = generate_population(&GenConfig::health_checkup(2_000, 6)).unwrap();
    assert_eq!(a.types(), b.types());
    assert_ne!(a.types(), c.types());
}
