#![allow(dead_code)]

use alc_core::synthetic::{gen_correlated, GeneratorSpec, Innovations};
use alc_core::{estimate_correlation, CorrelationMatrix, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Valid correlation matrix with some planted structure: random cluster
/// sizes and couplings, short series so off-block entries are noisy.
pub fn random_corr(n: usize, seed: u64) -> CorrelationMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.random_range(1..=left.min(6));
        sizes.push(s);
        left -= s;
    }
    let couplings = sizes.iter().map(|_| rng.random_range(0.0..3.0)).collect();
    let spec = GeneratorSpec {
        cluster_sizes: sizes,
        couplings,
        length: rng.random_range(n + 2..n + 40),
        innovations: Innovations::Gaussian,
        seed,
    };
    let (data, _) = gen_correlated(&spec).unwrap();
    estimate_correlation(&data).unwrap()
}

pub fn random_partition(n: usize, seed: u64) -> Partition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(1..=n);
    let raw: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
    Partition::from_labels(&raw)
}

/// Two-block matrix: `rho` inside each block, 0 across.
pub fn two_block(sizes: (usize, usize), rho: f64) -> CorrelationMatrix {
    let n = sizes.0 + sizes.1;
    let block = |i: usize| usize::from(i >= sizes.0);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match () {
                    _ if i == j => 1.0,
                    _ if block(i) == block(j) => rho,
                    _ => 0.0,
                })
                .collect()
        })
        .collect();
    CorrelationMatrix::from_rows(&rows).unwrap()
}
