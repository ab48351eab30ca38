//! Deterministic sample sets: log-uniform grids and seeded random points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` log-uniform points on `[lo, hi]`, endpoints included.
pub fn log_uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `n` uniform points on `(lo, hi)` from a ChaCha8 stream seeded with `seed`.
pub fn uniform(lo: f64, hi: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

/// `n` pairs with both coordinates log-uniform random in `[lo, hi]`.
pub fn random_pairs(lo: f64, hi: f64, n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|_| {
            let a = rng.gen_range(l0..l1).exp();
            let b = rng.gen_range(l0..l1).exp();
            (a, b)
        })
        .collect()
}

/// A fixed off-diagonal set of 64 pairs in `[0.05, 20]²`, used for degree
/// estimates and Euler checks.
pub fn default_pairs() -> Vec<(f64, f64)> {
    random_pairs(0.05, 20.0, 64, 0x5eed)
        .into_iter()
        .filter(|(a, b)| (a - b).abs() > 1e-3 * a.max(*b))
        .collect()
}
