use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use alc_core::bootstrap::{self, BootstrapConfig, SampleSize};
use alc_core::evaluation::{self, ScalingConfig};
use alc_core::io::{read_labels, read_matrix, write_labels, write_matrix};
use alc_core::synthetic::{self, GeneratorSpec, Innovations};
use alc_core::{AlcError, CorrelationMatrix, DataMatrix, EngineConfig, Partition, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::*;

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub command: String,
    /// Every flag of the command, defaults included.
    pub config: Value,
    pub seed: Option<u64>,
    pub inputs: Vec<PathBuf>,
    /// Paths relative to the output directory.
    pub outputs: Vec<PathBuf>,
    pub tool_version: String,
    pub wall_seconds: f64,
}

struct Outputs {
    dir: PathBuf,
    files: Vec<PathBuf>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Outputs {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(name);
        let file = File::create(&path)
            .map_err(|e| AlcError::Io(format!("cannot create {}: {e}", path.display())))?;
        self.files.push(PathBuf::from(name));
        Ok(BufWriter::new(file))
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, value).map_err(json_error)?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }
}

fn json_error(e: serde_json::Error) -> AlcError {
    AlcError::InvalidInput(format!("json: {e}"))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| AlcError::Io(format!("cannot open {}: {e}", path.display())))
}

fn canonical(path: &mut PathBuf) -> Result<()> {
    *path = fs::canonicalize(&*path)
        .map_err(|e| AlcError::Io(format!("cannot open {}: {e}", path.display())))?;
    Ok(())
}

fn canonical_input(input: &mut InputArgs) -> Result<()> {
    for p in [&mut input.series, &mut input.corr].into_iter().flatten() {
        canonical(p)?;
    }
    Ok(())
}

/// Pins inputs to absolute paths and fills mode-dependent defaults so the
/// recorded config replays from any working directory.
fn resolve(cmd: &mut Command) -> Result<()> {
    match cmd {
        Command::Generate(a) if a.white_noise && a.df.is_none() => a.df = Some(3.0),
        Command::Cluster(a) => canonical_input(&mut a.input)?,
        Command::Bootstrap(a) => {
            canonical_input(&mut a.input)?;
            if let Some(t) = &mut a.truth {
                canonical(t)?;
            }
        }
        Command::Mst(a) => canonical_input(&mut a.input)?,
        Command::Evaluate(a) => {
            canonical(&mut a.a)?;
            canonical(&mut a.b)?;
        }
        _ => {}
    }
    Ok(())
}

fn inputs_of(cmd: &Command) -> Vec<PathBuf> {
    let from = |i: &InputArgs| i.series.iter().chain(&i.corr).cloned().collect::<Vec<_>>();
    match cmd {
        Command::Cluster(a) => from(&a.input),
        Command::Bootstrap(a) => from(&a.input).into_iter().chain(a.truth.clone()).collect(),
        Command::Mst(a) => from(&a.input),
        Command::Evaluate(a) => vec![a.a.clone(), a.b.clone()],
        _ => Vec::new(),
    }
}

fn seed_of(cmd: &Command) -> Option<u64> {
    match cmd {
        Command::Generate(a) => Some(a.seed),
        Command::Cluster(a) => Some(a.seed),
        Command::Bootstrap(a) => Some(a.seed),
        Command::Bench(a) => Some(a.seed),
        Command::Noise(a) => Some(a.seed),
        _ => None,
    }
}

pub fn execute(mut cmd: Command) -> Result<()> {
    if let Command::Replay(r) = cmd {
        return replay(&r);
    }
    resolve(&mut cmd)?;
    let start = Instant::now();
    let out_dir = cmd.out_dir_mut().expect("not replay").clone();
    let mut out = Outputs::new(&out_dir)?;
    match &cmd {
        Command::Generate(a) => generate(a, &mut out)?,
        Command::Cluster(a) => cluster(a, &mut out)?,
        Command::Bootstrap(a) => run_bootstrap(a, &mut out)?,
        Command::Evaluate(a) => evaluate(a, &mut out)?,
        Command::Bench(a) => bench(a, &mut out)?,
        Command::Noise(a) => noise(a, &mut out)?,
        Command::Mst(a) => mst(a, &mut out)?,
        Command::Replay(_) => unreachable!(),
    }
    let tagged = serde_json::to_value(&cmd).map_err(json_error)?;
    let config = tagged
        .get(cmd.name())
        .cloned()
        .ok_or_else(|| AlcError::Internal("command did not serialize".into()))?;
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        command: cmd.name().to_string(),
        config,
        seed: seed_of(&cmd),
        inputs: inputs_of(&cmd),
        outputs: out.files.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    let path = out_dir.join(MANIFEST);
    let mut w = BufWriter::new(File::create(&path)?);
    serde_json::to_writer_pretty(&mut w, &manifest).map_err(json_error)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn replay(r: &ReplayArgs) -> Result<()> {
    let manifest: Manifest = serde_json::from_reader(open(&r.manifest)?).map_err(json_error)?;
    if manifest.schema_version != SCHEMA_VERSION {
        return Err(AlcError::InvalidInput(format!(
            "manifest schema version {} is not supported",
            manifest.schema_version
        )));
    }
    let mut cmd: Command =
        serde_json::from_value(json!({ manifest.command.clone(): manifest.config }))
            .map_err(json_error)?;
    if let Some(dir) = &r.out_dir {
        *cmd.out_dir_mut().expect("replay is never recorded") = dir.clone();
    }
    execute(cmd)
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| AlcError::InvalidParameter(format!("bad {what} value {t:?}")))
        })
        .collect()
}

fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    match s.split_once(['x', 'X']) {
        Some((size, count)) => {
            let size = parse_list::<usize>(size, "cluster size")?;
            let count = parse_list::<usize>(count, "cluster count")?;
            match (size.as_slice(), count.as_slice()) {
                ([size], [count]) => Ok(vec![*size; *count]),
                _ => Err(AlcError::InvalidParameter(format!("bad sizes {s:?}"))),
            }
        }
        None => parse_list(s, "cluster size"),
    }
}

fn generate(a: &GenerateArgs, out: &mut Outputs) -> Result<()> {
    if a.white_noise {
        let n = a.n.expect("clap requires --n");
        let data = synthetic::gen_white_noise(n, a.length, a.df.unwrap_or(3.0), a.seed)?;
        write_matrix(out.create("data.csv")?, data.d(), data.as_slice())?;
        println!("wrote {n}x{} white noise", a.length);
        return Ok(());
    }
    let sizes = parse_sizes(a.sizes.as_deref().expect("clap requires --sizes"))?;
    let mut couplings = parse_list::<f64>(a.g.as_deref().expect("clap requires --g"), "g")?;
    if couplings.len() == 1 {
        couplings = vec![couplings[0]; sizes.len()];
    }
    let spec = GeneratorSpec {
        cluster_sizes: sizes,
        couplings,
        length: a.length,
        innovations: match a.df {
            Some(df) => Innovations::StudentT { df },
            None => Innovations::Gaussian,
        },
        seed: a.seed,
    };
    let (data, truth) = synthetic::gen_correlated(&spec)?;
    write_matrix(out.create("data.csv")?, data.d(), data.as_slice())?;
    write_labels(out.create("labels.csv")?, &truth)?;
    println!(
        "wrote {}x{} series in {} clusters",
        data.n(),
        data.d(),
        truth.num_clusters()
    );
    Ok(())
}

fn load_data(path: &Path, log_returns: bool) -> Result<DataMatrix> {
    let (rows, cols, values) = read_matrix(open(path)?)?;
    let data = DataMatrix::new(rows, cols, values)?;
    if log_returns {
        data.log_returns()
    } else {
        Ok(data)
    }
}

fn load_corr(
    input: &InputArgs,
    log_returns: bool,
) -> Result<(CorrelationMatrix, Option<DataMatrix>)> {
    match (&input.series, &input.corr) {
        (Some(p), None) => {
            let data = load_data(p, log_returns)?;
            Ok((alc_core::estimate_correlation(&data)?, Some(data)))
        }
        (None, Some(p)) => {
            let (rows, cols, values) = read_matrix(open(p)?)?;
            if rows != cols {
                return Err(AlcError::InvalidInput(format!(
                    "correlation matrix must be square, got {rows}x{cols}"
                )));
            }
            Ok((CorrelationMatrix::new(rows, values)?, None))
        }
        _ => Err(AlcError::InvalidInput(
            "exactly one of --series and --corr is required".into(),
        )),
    }
}

fn cluster_map(p: &Partition) -> BTreeMap<usize, Vec<usize>> {
    p.clusters().into_iter().enumerate().collect()
}

fn cluster(a: &ClusterArgs, out: &mut Outputs) -> Result<()> {
    let (corr, _) = load_corr(&a.input, a.log_returns)?;
    let cfg = EngineConfig {
        seed: a.seed,
        deterministic_order: a.deterministic,
        epsilon_merge: a.epsilon,
    };
    let result = alc_core::run(&corr, &cfg)?;
    out.json(
        "result.json",
        &json!({
            "schema_version": SCHEMA_VERSION,
            "labels": result.partition.labels(),
            "clusters": cluster_map(&result.partition),
            "likelihood": result.likelihood,
            "merges": result.merges,
            "warnings": result.warnings,
            "elapsed_seconds": result.elapsed_seconds,
        }),
    )?;
    write_labels(out.create("labels.csv")?, &result.partition)?;
    println!(
        "{} objects -> {} clusters, likelihood {:.6}, {} merges",
        corr.n(),
        result.partition.num_clusters(),
        result.likelihood,
        result.merges
    );
    for w in &result.warnings {
        eprintln!("warning: {w:?}");
    }
    Ok(())
}

fn run_bootstrap(a: &BootstrapArgs, out: &mut Outputs) -> Result<()> {
    let (corr, data) = load_corr(&a.input, a.log_returns)?;
    let sample_size = match (a.n, a.q) {
        (Some(n), _) => SampleSize::Fixed(n),
        (None, Some(q)) => SampleSize::TargetRatio(q),
        (None, None) => unreachable!("clap requires --q or --n"),
    };
    let mut cfg = BootstrapConfig::new(sample_size, a.omega);
    cfg.max_iter = a.max_iter;
    cfg.seed = a.seed;
    cfg.ari_stop = (!a.no_ari_stop).then_some(a.ari_stop);
    cfg.record_every = a.record_every;
    cfg.plateau_stop = a.plateau;
    if let Some(t) = &a.truth {
        cfg.ground_truth = Some(read_labels(open(t)?, Some(corr.n()))?);
    }
    let n = match (&data, sample_size) {
        (Some(d), _) => cfg.resolve_sample_size(d.n(), d.d())?,
        (None, SampleSize::Fixed(n)) => n,
        (None, SampleSize::TargetRatio(_)) => {
            return Err(AlcError::InvalidParameter(
                "--q needs --series to know the series length".into(),
            ))
        }
    };
    let outcome = bootstrap::run_bootstrap_on(&corr, n, &cfg)?;
    let last = outcome.trajectory.last();
    out.json(
        "partition.json",
        &json!({
            "schema_version": SCHEMA_VERSION,
            "labels": outcome.partition.labels(),
            "clusters": cluster_map(&outcome.partition),
            "sample_size": outcome.sample_size,
            "iterations": outcome.state.iterations(),
            "stop": outcome.stop,
            "ari": last.and_then(|p| p.ari),
            "summary": outcome.summary,
        }),
    )?;
    write_labels(out.create("labels.csv")?, &outcome.partition)?;
    let mut w = csv::Writer::from_writer(out.create("trajectory.csv")?);
    for p in &outcome.trajectory {
        w.serialize(p).map_err(|e| AlcError::Io(e.to_string()))?;
    }
    w.flush()?;
    println!(
        "{} iterations of n = {}, {} clusters, stop: {:?}{}",
        outcome.state.iterations(),
        outcome.sample_size,
        outcome.partition.num_clusters(),
        outcome.stop,
        last.and_then(|p| p.ari)
            .map_or(String::new(), |ari| format!(", ARI {ari:.4}"))
    );
    Ok(())
}

fn evaluate(a: &EvaluateArgs, out: &mut Outputs) -> Result<()> {
    let pa = read_labels(open(&a.a)?, None)?;
    let pb = read_labels(open(&a.b)?, Some(pa.len()))?;
    let report = evaluation::adjusted_rand_index(&pa, &pb)?;
    out.json("ari.json", &report)?;
    println!("ARI {:.6} over {} objects", report.ari, report.objects);
    Ok(())
}

fn bench(a: &BenchArgs, out: &mut Outputs) -> Result<()> {
    let cfg = ScalingConfig {
        sizes: a.sizes.clone(),
        clusters: a.clusters,
        length: a.length,
        g: a.g,
        reps: a.reps,
        seed: a.seed,
    };
    let report = evaluation::benchmark_scaling(&cfg)?;
    let mut w = out.create("scaling.csv")?;
    writeln!(w, "n,runtime_seconds,clusters_found")?;
    for ((n, t), k) in report
        .sizes
        .iter()
        .zip(&report.runtimes)
        .zip(&report.clusters_found)
    {
        writeln!(w, "{n},{t},{k}")?;
    }
    w.flush()?;
    out.json("scaling.json", &report)?;
    println!("fitted exponent {:.3}", report.fitted_exponent);
    Ok(())
}

fn noise(a: &NoiseArgs, out: &mut Outputs) -> Result<()> {
    let stats = evaluation::run_noise_suite(&a.sizes, a.length, a.df, a.seeds, a.seed)?;
    let mut w = out.create("noise.csv")?;
    writeln!(w, "n,runs,mean_clusters,mean_normalized")?;
    for r in &stats.rows {
        writeln!(
            w,
            "{},{},{},{}",
            r.n, r.runs, r.mean_clusters, r.mean_normalized
        )?;
    }
    w.flush()?;
    let mut w = out.create("histogram.csv")?;
    writeln!(w, "size,count")?;
    for (size, count) in &stats.histogram {
        writeln!(w, "{size},{count}")?;
    }
    w.flush()?;
    out.json(
        "noise.json",
        &json!({
            "schema_version": SCHEMA_VERSION,
            "mode": stats.mode,
            "spearman": stats.spearman,
            "decreasing_trend": stats.decreasing_trend,
        }),
    )?;
    println!(
        "mode {:?}, spearman {:?}, decreasing trend: {}",
        stats.mode, stats.spearman, stats.decreasing_trend
    );
    Ok(())
}

fn mst(a: &MstArgs, out: &mut Outputs) -> Result<()> {
    let (corr, _) = load_corr(&a.input, a.log_returns)?;
    let edges = evaluation::mst_edges(&corr);
    let mut w = out.create("mst.csv")?;
    writeln!(w, "i,j,distance")?;
    for e in &edges {
        writeln!(w, "{},{},{}", e.i, e.j, e.distance)?;
    }
    w.flush()?;
    println!(
        "{} edges, total weight {:.6}",
        edges.len(),
        evaluation::mst::total_weight(&edges)
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_specs() {
        assert_eq!(parse_sizes("3x2").unwrap(), vec![3, 3]);
        assert_eq!(parse_sizes("4,1,2").unwrap(), vec![4, 1, 2]);
        assert!(parse_sizes("3x").is_err());
        assert!(parse_sizes("a,1").is_err());
    }
}
