use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

/// Environment variable supplying the default `--seed`.
pub const SEED_ENV: &str = "ALC_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "alc",
    version,
    about = "Agglomerative likelihood clustering of correlated series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Generate planted-cluster or white-noise series.
    Generate(GenerateArgs),
    /// Cluster series or a correlation matrix.
    Cluster(ClusterArgs),
    /// Bootstrap consensus filtering over random subsamples.
    Bootstrap(BootstrapArgs),
    /// Adjusted Rand index between two label files.
    Evaluate(EvaluateArgs),
    /// Runtime scaling benchmark on planted data.
    Bench(BenchArgs),
    /// Cluster-count statistics on white noise.
    Noise(NoiseArgs),
    /// Minimum spanning tree edge list on distance 1 - rho.
    Mst(MstArgs),
    /// Re-run a command from its manifest.json.
    #[serde(skip)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Generate(_) => "generate",
            Command::Cluster(_) => "cluster",
            Command::Bootstrap(_) => "bootstrap",
            Command::Evaluate(_) => "evaluate",
            Command::Bench(_) => "bench",
            Command::Noise(_) => "noise",
            Command::Mst(_) => "mst",
            Command::Replay(_) => "replay",
        }
    }

    pub fn out_dir_mut(&mut self) -> Option<&mut PathBuf> {
        match self {
            Command::Generate(a) => Some(&mut a.out_dir),
            Command::Cluster(a) => Some(&mut a.out_dir),
            Command::Bootstrap(a) => Some(&mut a.out_dir),
            Command::Evaluate(a) => Some(&mut a.out_dir),
            Command::Bench(a) => Some(&mut a.out_dir),
            Command::Noise(a) => Some(&mut a.out_dir),
            Command::Mst(a) => Some(&mut a.out_dir),
            Command::Replay(_) => None,
        }
    }
}

/// Either a series file or a correlation matrix.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Series CSV, one object per row; correlations are estimated.
    #[arg(long)]
    pub series: Option<PathBuf>,
    /// Correlation matrix CSV.
    #[arg(long)]
    pub corr: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GenerateArgs {
    /// Cluster sizes: `SIZExCOUNT` (e.g. 300x10) or a comma list.
    #[arg(long, required_unless_present = "white_noise")]
    pub sizes: Option<String>,
    /// Coupling per cluster: one value or a comma list.
    #[arg(long, required_unless_present = "white_noise")]
    pub g: Option<String>,
    #[arg(long, default_value_t = 250)]
    pub length: usize,
    /// Student-t degrees of freedom; Gaussian innovations when absent
    /// (white noise defaults to 3).
    #[arg(long)]
    pub df: Option<f64>,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, conflicts_with_all = ["sizes", "g"], requires = "n")]
    pub white_noise: bool,
    /// Number of white-noise series.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Treat series as prices and cluster their log returns.
    #[arg(long, requires = "series")]
    pub log_returns: bool,
    /// Pick initiators in label order instead of at random.
    #[arg(long)]
    pub deterministic: bool,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Smallest likelihood gain accepted as a merge.
    #[arg(long, default_value_t = alc_core::likelihood::EPSILON_MERGE)]
    pub epsilon: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BootstrapArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, requires = "series")]
    pub log_returns: bool,
    /// Target ratio q = D / n; needs series input.
    #[arg(long, conflicts_with = "n", required_unless_present = "n")]
    pub q: Option<f64>,
    /// Sample size per iteration.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.75)]
    pub omega: f64,
    #[arg(long, default_value_t = alc_core::bootstrap::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Ground-truth labels; enables ARI tracking and early stopping.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long, default_value_t = alc_core::bootstrap::DEFAULT_ARI_STOP)]
    pub ari_stop: f64,
    /// Track ARI without stopping early.
    #[arg(long)]
    pub no_ari_stop: bool,
    #[arg(long, default_value_t = 10)]
    pub record_every: usize,
    /// Stop once the thresholded edge count plateaus.
    #[arg(long)]
    pub plateau: bool,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct EvaluateArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [100, 200, 400, 800, 1600, 3200])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub clusters: usize,
    #[arg(long, default_value_t = 250)]
    pub length: usize,
    #[arg(long, default_value_t = 0.3)]
    pub g: f64,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct NoiseArgs {
    #[arg(long, value_delimiter = ',',
          default_values_t = [100, 200, 300, 400, 500, 600, 700, 800, 900, 1000])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    pub length: usize,
    #[arg(long, default_value_t = 3.0)]
    pub df: f64,
    /// Datasets per size.
    #[arg(long, default_value_t = 10)]
    pub seeds: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct MstArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, requires = "series")]
    pub log_returns: bool,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write outputs here instead of the recorded directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}
