//! Acceptance criteria, run serially so timings are not disturbed by other
//! tests. Prints one PASS/FAIL line per criterion and exits non-zero if any
//! criterion fails.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use alc_core::bootstrap::{run_bootstrap_on, BootstrapConfig, SampleSize};
use alc_core::evaluation::{
    adjusted_rand_index, benchmark_scaling, exhaustive_oracle, run_noise_suite, ScalingConfig,
};
use alc_core::likelihood::{cluster_likelihood, delta_merge_case2, total_likelihood, ClusterStats};
use alc_core::synthetic::{derive_seed, gen_correlated, GeneratorSpec, Innovations};
use alc_core::{estimate_correlation, run, CorrelationMatrix, EngineConfig, Partition};
use common::{random_corr, random_partition, two_block};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STUDENT_T: Innovations = Innovations::StudentT { df: 3.0 };
const GRID_G: [f64; 4] = [0.05, 0.1, 0.3, 1.0];
const GRID_D: [usize; 3] = [20, 60, 250];
const GRID_SEEDS: u64 = 10;
const GRID_BASE_SEED: u64 = 2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn c1_likelihood_values() -> Outcome {
    let l = cluster_likelihood(ClusterStats::new(2, 3.0)).unwrap().value;
    let expected = 0.5 * (4.0f64 / 3.0).ln();
    let corr = random_corr(12, 1);
    let zero = total_likelihood(&Partition::singletons(12), &corr)
        .unwrap()
        .value;
    outcome(
        (l - expected).abs() <= 1e-6 && zero == 0.0,
        format!("L(2,3) = {l:.12} (expect {expected:.12}); singletons total = {zero}"),
    )
}

fn c2_delta_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut cases, mut worst, mut attempts) = (0, 0.0f64, 0);
    while cases < 1000 {
        attempts += 1;
        let corr = random_corr(20, rng.random());
        let p = random_partition(20, rng.random());
        let k = p.num_clusters();
        if k < 2 {
            continue;
        }
        let a = rng.random_range(0..k);
        let b = (a + rng.random_range(1..k)) % k;
        let clusters = p.clusters();
        let merged: Vec<usize> = p
            .labels()
            .iter()
            .map(|&l| if l == b { a } else { l })
            .collect();
        let stats = |m: &[usize]| ClusterStats::new(m.len(), corr.block_sum(m));
        let (Ok(before), Ok(after), Ok(delta)) = (
            total_likelihood(&p, &corr),
            total_likelihood(&Partition::from_labels(&merged), &corr),
            delta_merge_case2(
                stats(&clusters[a]),
                stats(&clusters[b]),
                corr.cross_sum(&clusters[a], &clusters[b]),
            ),
        ) else {
            continue;
        };
        worst = worst.max((after.value - before.value - delta.value).abs());
        cases += 1;
    }
    outcome(
        worst <= 1e-9,
        format!("{cases} admissible cases ({attempts} drawn), max |error| = {worst:.2e}"),
    )
}

fn c3_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut same, mut exceeded) = (0, 0);
    let total = 200;
    for _ in 0..total {
        let n = rng.random_range(6..=8);
        let first = rng.random_range(1..n);
        let base = two_block((first, n - first), 0.9);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let corr = base.submatrix(&perm);
        let (best, best_l) = exhaustive_oracle(&corr, 8).unwrap();
        let ours = run(&corr, &EngineConfig::with_seed(rng.random())).unwrap();
        same += usize::from(ours.partition == best);
        exceeded += usize::from(ours.likelihood > best_l + 1e-9);
    }
    outcome(
        same * 100 >= 95 * total && exceeded == 0,
        format!("{same}/{total} equal to oracle, {exceeded} above oracle likelihood"),
    )
}

/// Mean ARI over the seed set for each (g, D) cell at N = 500.
fn table_grid() -> Vec<Vec<f64>> {
    GRID_G
        .iter()
        .enumerate()
        .map(|(gi, &g)| {
            GRID_D
                .iter()
                .map(|&d| {
                    let mut sum = 0.0;
                    for r in 0..GRID_SEEDS {
                        let seed = derive_seed(GRID_BASE_SEED, &[gi as u64, d as u64, r]);
                        let spec =
                            GeneratorSpec::uniform(10, 50, g, d, seed).with_innovations(STUDENT_T);
                        let (data, truth) = gen_correlated(&spec).unwrap();
                        let corr = estimate_correlation(&data).unwrap();
                        let p = run(&corr, &EngineConfig::with_seed(seed))
                            .unwrap()
                            .partition;
                        sum += adjusted_rand_index(&truth, &p).unwrap().ari;
                    }
                    sum / GRID_SEEDS as f64
                })
                .collect()
        })
        .collect()
}

fn cell(grid: &[Vec<f64>], g: f64, d: usize) -> f64 {
    let gi = GRID_G.iter().position(|&x| x == g).unwrap();
    let di = GRID_D.iter().position(|&x| x == d).unwrap();
    grid[gi][di]
}

fn c4_table_corners(grid: &[Vec<f64>]) -> Outcome {
    let a = cell(grid, 1.0, 250);
    let b = cell(grid, 1.0, 20);
    let c = cell(grid, 0.05, 20);
    let d = cell(grid, 0.3, 250);
    let checks = [
        ("a", a >= 0.95),
        ("b", (b - 0.61).abs() <= 0.15),
        ("c", c <= 0.15),
        ("d", (d - 0.90).abs() <= 0.10),
    ];
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(
        failed.is_empty(),
        format!(
            "(a) {a:.3} >= 0.95; (b) {b:.3} in 0.61+-0.15; (c) {c:.3} <= 0.15; (d) {d:.3} in 0.90+-0.10{}",
            if failed.is_empty() { String::new() } else { format!("; failing: {}", failed.join(",")) }
        ),
    )
}

/// Counts adjacent decreases along each chain; fails on more than one or on
/// any drop larger than 0.03.
fn monotone(chains: &[Vec<f64>]) -> (bool, usize, f64) {
    let mut inversions = 0;
    let mut worst = 0.0f64;
    for chain in chains {
        for w in chain.windows(2) {
            if w[1] < w[0] {
                inversions += 1;
                worst = worst.max(w[0] - w[1]);
            }
        }
    }
    (inversions <= 1 && worst <= 0.03, inversions, worst)
}

fn c5_monotone(grid: &[Vec<f64>]) -> Outcome {
    let by_g: Vec<Vec<f64>> = (0..GRID_D.len())
        .map(|di| grid.iter().map(|row| row[di]).collect())
        .collect();
    let (ok_g, inv_g, drop_g) = monotone(&by_g);
    let (ok_d, inv_d, drop_d) = monotone(grid);
    let rows: Vec<String> = grid
        .iter()
        .zip(GRID_G)
        .map(|(r, g)| format!("g={g}: {:.3}/{:.3}/{:.3}", r[0], r[1], r[2]))
        .collect();
    outcome(
        ok_g && ok_d,
        format!(
            "in g: {inv_g} inversions (max drop {drop_g:.3}); in D: {inv_d} (max drop {drop_d:.3}); D=20/60/250 {}",
            rows.join(", ")
        ),
    )
}

fn c6_white_noise() -> Outcome {
    let sizes: Vec<usize> = (1..=10).map(|k| 100 * k).collect();
    let stats = run_noise_suite(&sizes, 100, 3.0, 10, 6).unwrap();
    let rho = stats.spearman.unwrap_or(f64::NAN);
    let mode = stats.mode.unwrap_or(0);
    let kn: Vec<String> = stats
        .rows
        .iter()
        .map(|r| format!("{:.3}", r.mean_normalized))
        .collect();
    outcome(
        rho <= -0.9 && (3..=7).contains(&mode),
        format!(
            "spearman(K/N, N) = {rho:.3}, size mode = {mode}, K/N = [{}]",
            kn.join(" ")
        ),
    )
}

fn c7_bootstrap() -> Outcome {
    let spec = GeneratorSpec::uniform(10, 200, 1.0, 20, 7).with_innovations(STUDENT_T);
    let (data, truth) = gen_correlated(&spec).unwrap();
    let corr: CorrelationMatrix = estimate_correlation(&data).unwrap();
    let trajectory = |omega: f64| {
        let mut cfg = BootstrapConfig::new(SampleSize::TargetRatio(0.1), omega);
        cfg.max_iter = 1000;
        cfg.seed = 7;
        cfg.ground_truth = Some(truth.clone());
        cfg.ari_stop = None;
        cfg.record_every = 50;
        let n = cfg.resolve_sample_size(data.n(), data.d()).unwrap();
        assert_eq!(n, 200);
        run_bootstrap_on(&corr, n, &cfg).unwrap().trajectory
    };
    let hi = trajectory(0.75);
    let lo = trajectory(0.5);
    let ari = |p: &alc_core::bootstrap::TrajectoryPoint| p.ari.unwrap();
    let reached = hi.iter().find(|p| ari(p) >= 0.8).map(|p| p.iteration);
    let dominated = hi
        .iter()
        .zip(&lo)
        .filter(|(h, _)| h.iteration >= 500)
        .all(|(h, l)| ari(h) > ari(l));
    let last = (hi.last().unwrap(), lo.last().unwrap());
    outcome(
        reached.is_some() && dominated,
        format!(
            "omega=0.75 reaches 0.8 at {:?}; final ARI 0.75: {:.3} ({} clusters), 0.5: {:.3} ({} clusters); 0.75 above 0.5 at all checkpoints >= 500: {dominated}",
            reached,
            ari(last.0),
            last.0.clusters,
            ari(last.1),
            last.1.clusters
        ),
    )
}

fn c8_scaling() -> Outcome {
    let report = benchmark_scaling(&ScalingConfig::default()).unwrap();
    let spec = GeneratorSpec::uniform(10, 500, 0.3, 250, 8);
    let (data, _) = gen_correlated(&spec).unwrap();
    let corr = estimate_correlation(&data).unwrap();
    let start = Instant::now();
    run(&corr, &EngineConfig::with_seed(8)).unwrap();
    let big = start.elapsed().as_secs_f64();
    let e = report.fitted_exponent;
    outcome(
        (1.7..=2.5).contains(&e) && big < 600.0,
        format!("exponent {e:.3} in [1.7, 2.5]; N=5000 in {big:.1}s (< 600s)"),
    )
}

fn alc(args: &[&str], cwd: &Path) -> bool {
    Command::new(env!("CARGO_BIN_EXE_alc"))
        .args(args)
        .current_dir(cwd)
        .env_remove("ALC_SEED")
        .output()
        .map(|o| o.status.success())
        .unwrap_or(false)
}

fn c9_replay() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let runs: [(&str, &[&str], &[&str]); 4] = [
        (
            "gen",
            &[
                "generate", "--sizes", "40x5", "--g", "0.5", "--length", "60", "--df", "3",
                "--seed", "9",
            ],
            &["data.csv", "labels.csv"],
        ),
        (
            "cl",
            &["cluster", "--series", "gen/data.csv", "--seed", "3"],
            &["labels.csv"],
        ),
        (
            "bs",
            &[
                "bootstrap",
                "--series",
                "gen/data.csv",
                "--n",
                "50",
                "--omega",
                "0.5",
                "--max-iter",
                "60",
                "--seed",
                "4",
            ],
            &["labels.csv", "trajectory.csv"],
        ),
        ("mst", &["mst", "--series", "gen/data.csv"], &["mst.csv"]),
    ];
    let mut mismatches = Vec::new();
    for (name, args, files) in runs {
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--out-dir", name]);
        let again = format!("{name}-replay");
        let manifest = format!("{name}/manifest.json");
        if !alc(&full, d) || !alc(&["replay", &manifest, "--out-dir", &again], d) {
            mismatches.push(format!("{name}: command failed"));
            continue;
        }
        for f in files {
            let a = fs::read(d.join(name).join(f)).unwrap_or_default();
            let b = fs::read(d.join(&again).join(f)).unwrap_or_default();
            if a.is_empty() || a != b {
                mismatches.push(format!("{name}/{f}"));
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "generate, cluster, bootstrap, mst replay byte-identical".into()
        } else {
            format!("differences: {}", mismatches.join(", "))
        },
    )
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        println!(
            "[{}] {id}. {name}: {} ({:.1}s)",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
        failed += usize::from(!o.pass);
    };
    report(1, "cluster likelihood values", &mut c1_likelihood_values);
    report(2, "merge delta consistency", &mut c2_delta_consistency);
    report(
        3,
        "oracle equivalence at small N",
        &mut c3_oracle_equivalence,
    );
    let mut grid = Vec::new();
    report(4, "planted-cluster ARI corners", &mut || {
        grid = table_grid();
        c4_table_corners(&grid)
    });
    report(5, "monotone ARI across the grid", &mut || {
        c5_monotone(&grid)
    });
    report(6, "white-noise cluster statistics", &mut c6_white_noise);
    report(7, "bootstrap threshold study", &mut c7_bootstrap);
    report(8, "runtime scaling", &mut c8_scaling);
    report(9, "manifest replay determinism", &mut c9_replay);
    println!("acceptance: {} of 9 criteria failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
