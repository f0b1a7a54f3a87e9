//! Synthetic data: white noise and one-factor correlated clusters.
//!
//! Correlated series follow
//!
//! ```text
//! xi_i(d) = (sqrt(g_s) * eta_s(d) + eps_i(d)) / sqrt(1 + g_s)
//! ```
//!
//! with unit-variance cluster factors `eta` and object noise `eps`, so every
//! series has unit variance and two members of cluster `s` correlate at
//! `g_s / (1 + g_s)`.
//!
//! Randomness is split into independent ChaCha streams: stream 0 drives the
//! cluster factors and stream `i + 1` the noise of row `i`, so output does
//! not depend on generation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::data::DataMatrix;
use crate::error::{AlcError, Result};
use crate::partition::Partition;

/// Distribution of the factor and noise innovations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Innovations {
    Gaussian,
    /// Student-t with `df` degrees of freedom, rescaled to unit variance.
    StudentT {
        df: f64,
    },
}

impl Innovations {
    fn validate(self) -> Result<()> {
        match self {
            Innovations::Gaussian => Ok(()),
            Innovations::StudentT { df } if df > 2.0 => Ok(()),
            Innovations::StudentT { df } => Err(AlcError::InvalidParameter(format!(
                "student-t degrees of freedom must exceed 2 for finite variance, got {df}"
            ))),
        }
    }

    fn sampler(self) -> Sampler {
        match self {
            Innovations::Gaussian => Sampler::Normal,
            Innovations::StudentT { df } => Sampler::T {
                dist: StudentT::new(df).expect("df validated"),
                scale: ((df - 2.0) / df).sqrt(),
            },
        }
    }
}

enum Sampler {
    Normal,
    T { dist: StudentT<f64>, scale: f64 },
}

impl Sampler {
    #[inline]
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            Sampler::Normal => StandardNormal.sample(rng),
            Sampler::T { dist, scale } => dist.sample(rng) * scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub cluster_sizes: Vec<usize>,
    /// Coupling `g_s >= 0` per cluster.
    pub couplings: Vec<f64>,
    pub length: usize,
    pub innovations: Innovations,
    pub seed: u64,
}

impl GeneratorSpec {
    /// `clusters` equal clusters of `size` sharing coupling `g`.
    pub fn uniform(clusters: usize, size: usize, g: f64, length: usize, seed: u64) -> Self {
        GeneratorSpec {
            cluster_sizes: vec![size; clusters],
            couplings: vec![g; clusters],
            length,
            innovations: Innovations::Gaussian,
            seed,
        }
    }

    pub fn with_innovations(mut self, innovations: Innovations) -> Self {
        self.innovations = innovations;
        self
    }

    pub fn n(&self) -> usize {
        self.cluster_sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.cluster_sizes.is_empty() {
            return Err(AlcError::InvalidParameter("no clusters requested".into()));
        }
        if self.cluster_sizes.contains(&0) {
            return Err(AlcError::InvalidParameter(
                "cluster sizes must be positive".into(),
            ));
        }
        if self.couplings.len() != self.cluster_sizes.len() {
            return Err(AlcError::InvalidParameter(format!(
                "{} couplings for {} clusters",
                self.couplings.len(),
                self.cluster_sizes.len()
            )));
        }
        if let Some(g) = self
            .couplings
            .iter()
            .find(|g| !(**g >= 0.0 && g.is_finite()))
        {
            return Err(AlcError::InvalidParameter(format!(
                "coupling must be finite and non-negative, got {g}"
            )));
        }
        if self.length == 0 {
            return Err(AlcError::InvalidParameter(
                "series length must be positive".into(),
            ));
        }
        self.innovations.validate()
    }
}

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `n x d` i.i.d. student-t(df) draws, one independent stream per row.
pub fn gen_white_noise(n: usize, d: usize, df: f64, seed: u64) -> Result<DataMatrix> {
    if n == 0 || d == 0 {
        return Err(AlcError::InvalidParameter(format!(
            "white noise needs positive dimensions, got {n}x{d}"
        )));
    }
    if !(df > 2.0) {
        return Err(AlcError::InvalidParameter(format!(
            "student-t degrees of freedom must exceed 2, got {df}"
        )));
    }
    let dist = StudentT::new(df).map_err(|e| AlcError::InvalidParameter(e.to_string()))?;
    let mut values = Vec::with_capacity(n * d);
    for i in 0..n {
        let mut rng = stream_rng(seed, i as u64);
        values.extend((0..d).map(|_| dist.sample(&mut rng)));
    }
    Ok(DataMatrix::from_trusted(n, d, values))
}

/// Planted-cluster series and their ground-truth partition. Objects are
/// laid out cluster by cluster.
pub fn gen_correlated(spec: &GeneratorSpec) -> Result<(DataMatrix, Partition)> {
    spec.validate()?;
    let d = spec.length;
    let sampler = spec.innovations.sampler();

    let mut factor_rng = stream_rng(spec.seed, 0);
    let factors: Vec<Vec<f64>> = spec
        .cluster_sizes
        .iter()
        .map(|_| (0..d).map(|_| sampler.draw(&mut factor_rng)).collect())
        .collect();

    let n = spec.n();
    let mut values = Vec::with_capacity(n * d);
    let mut truth = Vec::with_capacity(n);
    let mut row = 0u64;
    for (s, (&size, &g)) in spec.cluster_sizes.iter().zip(&spec.couplings).enumerate() {
        let loading = g.sqrt();
        let norm = 1.0 / (1.0 + g).sqrt();
        for _ in 0..size {
            let mut rng = stream_rng(spec.seed, row + 1);
            values.extend(
                factors[s]
                    .iter()
                    .map(|&eta| (loading * eta + sampler.draw(&mut rng)) * norm),
            );
            truth.push(s);
            row += 1;
        }
    }
    Ok((
        DataMatrix::from_trusted(n, d, values),
        Partition::from_labels(&truth),
    ))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with experiment coordinates into an independent seed.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(base), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

/// Intra-cluster correlation implied by coupling `g`.
pub fn implied_correlation(g: f64) -> f64 {
    g / (1.0 + g)
}
