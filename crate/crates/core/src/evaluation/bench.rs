//! Runtime scaling of the engine on planted-cluster data.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::estimate_correlation;
use crate::engine::{run, EngineConfig};
use crate::error::{AlcError, Result};
use crate::synthetic::{derive_seed, gen_correlated, GeneratorSpec, Innovations};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub sizes: Vec<usize>,
    pub clusters: usize,
    pub length: usize,
    pub g: f64,
    pub reps: usize,
    pub seed: u64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig {
            sizes: vec![100, 200, 400, 800, 1600, 3200],
            clusters: 10,
            length: 250,
            g: 0.3,
            reps: 3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub sizes: Vec<usize>,
    /// Median engine wall time per size, seconds.
    pub runtimes: Vec<f64>,
    pub fitted_exponent: f64,
    pub clusters_found: Vec<usize>,
    /// Whether every repetition returned the same partition.
    pub reproducible: bool,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_exponent(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(AlcError::InvalidInput(
            "need at least two points to fit".into(),
        ));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(AlcError::InvalidInput(
            "log-log fit needs positive values".into(),
        ));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(AlcError::InvalidInput("sizes must not all be equal".into()));
    }
    Ok(sxy / sxx)
}

/// Splits `n` objects into `clusters` near-equal sizes.
pub fn split_sizes(n: usize, clusters: usize) -> Vec<usize> {
    (0..clusters)
        .map(|c| n / clusters + usize::from(c < n % clusters))
        .filter(|&s| s > 0)
        .collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Times the engine only; data generation and correlation estimation run
/// outside the measured region.
pub fn benchmark_scaling(cfg: &ScalingConfig) -> Result<ScalingReport> {
    if cfg.reps == 0 || cfg.clusters == 0 || cfg.sizes.is_empty() {
        return Err(AlcError::InvalidParameter(
            "benchmark needs sizes, clusters and at least one repetition".into(),
        ));
    }
    let mut runtimes = Vec::with_capacity(cfg.sizes.len());
    let mut clusters_found = Vec::with_capacity(cfg.sizes.len());
    let mut reproducible = true;
    for &n in &cfg.sizes {
        let seed = derive_seed(cfg.seed, &[n as u64]);
        let sizes = split_sizes(n, cfg.clusters);
        let spec = GeneratorSpec {
            couplings: vec![cfg.g; sizes.len()],
            cluster_sizes: sizes,
            length: cfg.length,
            innovations: Innovations::Gaussian,
            seed,
        };
        let (data, _) = gen_correlated(&spec)?;
        let corr = estimate_correlation(&data)?;
        let engine = EngineConfig::with_seed(seed);

        let mut times = Vec::with_capacity(cfg.reps);
        let mut first = None;
        for _ in 0..cfg.reps {
            let start = Instant::now();
            let result = run(&corr, &engine)?;
            times.push(start.elapsed().as_secs_f64());
            match &first {
                None => first = Some(result.partition),
                Some(p) => reproducible &= *p == result.partition,
            }
        }
        clusters_found.push(first.map_or(0, |p| p.num_clusters()));
        runtimes.push(median(times));
    }
    let xs: Vec<f64> = cfg.sizes.iter().map(|&n| n as f64).collect();
    let fitted_exponent = fit_exponent(&xs, &runtimes)?;
    Ok(ScalingReport {
        sizes: cfg.sizes.clone(),
        runtimes,
        fitted_exponent,
        clusters_found,
        reproducible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let x = [1.0, 2.0, 4.0, 8.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(1.97)).collect();
        assert!((fit_exponent(&x, &y).unwrap() - 1.97).abs() < 1e-12);
        assert!(fit_exponent(&[1.0], &[1.0]).is_err());
        assert!(fit_exponent(&[1.0, 2.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn splits() {
        assert_eq!(split_sizes(23, 5), vec![5, 5, 5, 4, 4]);
        assert_eq!(split_sizes(3, 5), vec![1, 1, 1]);
    }

    #[test]
    fn small_benchmark_is_reproducible() {
        let cfg = ScalingConfig {
            sizes: vec![40, 80],
            clusters: 4,
            length: 100,
            g: 1.0,
            reps: 2,
            seed: 3,
        };
        let r = benchmark_scaling(&cfg).unwrap();
        assert!(r.reproducible);
        assert_eq!(r.runtimes.len(), 2);
        assert!(r.runtimes.iter().all(|&t| t > 0.0));
    }
}
