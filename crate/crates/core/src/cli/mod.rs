//! Command-line front end.
//!
//! ```text
//! radius-cluster cluster    --input points.csv --radius R [--out labels.json] [--svg plot.svg]
//! radius-cluster generate   (--spec spec.json | --preset NAME) [--seed S] [--radius R] [--out points.csv] [--svg plot.svg]
//! radius-cluster trajectory --input traj.csv --radius R --out frames.json [--events events.json]
//!                           [--svg DIR] [--project equirect]
//! radius-cluster bench      --bench-n 2,7,10,100,1000 [--seed S] [--out bench.json] [--svg plot.svg] [--timing]
//! ```
//!
//! Exit codes: 0 on success, 1 on input errors, 2 on internal invariant
//! violations. Errors are reported on stderr as a single `error: ...` line.

pub mod formats;
pub mod svg;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clustering::{cluster_labels, cluster_pointset};
use crate::error::{Error, Result};
use crate::geometry::{build_adjacency, ClusteringConfig, PointSet};
use crate::matpower::{make_power_plan, power_fast, power_naive_counted};
use crate::scenarios::{generate, ScenarioSpec};
use crate::trajectory::{cluster_frames, detect_events};
use formats::{BenchEntry, BenchReport, ClusterReport, TrajectoryReport};

/// Largest `n` for which `bench` also runs the naive power.
pub const NAIVE_BENCH_LIMIT: usize = 64;

#[derive(Debug, Parser)]
#[command(
    name = "radius-cluster",
    version,
    about = "Radius-graph clustering via boolean matrix powers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cluster a point CSV and write labels and ranked cluster sizes as JSON.
    Cluster(ClusterArgs),
    /// Generate a synthetic scenario as a point CSV.
    Generate(GenerateArgs),
    /// Cluster every frame of a trajectory CSV and report split/merge events.
    Trajectory(TrajectoryArgs),
    /// Compare multiplication counts of the naive and repeated-squaring powers.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub radius: f64,
    /// JSON output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Scenario spec as JSON.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub spec: Option<PathBuf>,
    /// Built-in scenario: shapes, forked, ring, dense-core, low-density,
    /// medium-density or high-density.
    #[arg(long)]
    pub preset: Option<String>,
    /// Overrides the spec's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the spec's radius; the whole scenario scales with it.
    #[arg(long)]
    pub radius: Option<f64>,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Plot of the scenario clustered at its radius.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Projection {
    /// Treat x,y as lon,lat degrees; project to meters about the first
    /// frame's centroid.
    Equirect,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub radius: f64,
    /// Per-frame clustering JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Event list JSON; defaults to `events.json` beside `--out`.
    #[arg(long)]
    pub events: Option<PathBuf>,
    /// Directory receiving one `frame_<index>.svg` per frame.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub project: Option<Projection>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated node counts.
    #[arg(long = "bench-n", value_delimiter = ',', required = true)]
    pub bench_n: Vec<usize>,
    /// Seed for the random point sets behind each adjacency matrix.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Include wall-clock seconds of the fast power (output is then no
    /// longer byte-reproducible).
    #[arg(long)]
    pub timing: bool,
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

pub fn cmd_cluster(args: &ClusterArgs) -> Result<()> {
    let cfg = ClusteringConfig::new(args.radius)?;
    let source = args.input.display().to_string();
    let ps = formats::parse_points_csv(read_file(&args.input)?.as_slice(), &source)?;
    let (labels, table) = cluster_pointset(&ps, &cfg)?;
    let report = ClusterReport::new(cfg.radius(), &labels, &table);
    emit(args.out.as_deref(), &formats::to_json(&report))?;
    if let Some(svg_path) = &args.svg {
        let name = args
            .input
            .file_name()
            .map_or(source.clone(), |n| n.to_string_lossy().into_owned());
        let title = format!(
            "{name}: {} clusters at r = {}",
            table.num_clusters(),
            cfg.radius()
        );
        write_file(svg_path, &svg::scatter(&ps, &labels, &table, &title))?;
    }
    Ok(())
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let mut spec = match (&args.spec, &args.preset) {
        (Some(path), _) => {
            let text = String::from_utf8(read_file(path)?)
                .map_err(|_| Error::InvalidScenario(format!("{}: not UTF-8", path.display())))?;
            ScenarioSpec::from_json(&text)?
        }
        (None, Some(name)) => ScenarioSpec::preset(name, 0)?,
        (None, None) => return Err(Error::invalid("one of --spec or --preset is required")),
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(radius) = args.radius {
        spec.radius = radius;
    }
    let ps = generate(&spec)?;
    emit(args.out.as_deref(), &formats::points_to_csv(&ps))?;
    if let Some(svg_path) = &args.svg {
        let cfg = ClusteringConfig::new(spec.radius)?;
        let (labels, table) = cluster_pointset(&ps, &cfg)?;
        let title = format!(
            "scenario seed {}: {} clusters",
            spec.seed,
            table.num_clusters()
        );
        write_file(svg_path, &svg::scatter(&ps, &labels, &table, &title))?;
    }
    Ok(())
}

pub fn cmd_trajectory(args: &TrajectoryArgs) -> Result<()> {
    let cfg = ClusteringConfig::new(args.radius)?;
    let source = args.input.display().to_string();
    let mut frames = formats::parse_trajectory_csv(read_file(&args.input)?.as_slice(), &source)?;
    if args.project == Some(Projection::Equirect) {
        frames = formats::project_equirect(frames)?;
    }
    let results = cluster_frames(&frames, &cfg)?;
    let events = detect_events(&results);

    let events_path = match &args.events {
        Some(p) => p.clone(),
        None => args
            .out
            .parent()
            .unwrap_or_else(|| Path::new(""))
            .join("events.json"),
    };
    if events_path == args.out {
        return Err(Error::invalid("--events and --out name the same file"));
    }
    write_file(
        &args.out,
        &formats::to_json(&TrajectoryReport::new(cfg.radius(), &results)),
    )?;
    write_file(&events_path, &formats::to_json(&events))?;

    if let Some(dir) = &args.svg {
        fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?;
        for (idx, (frame, res)) in frames.iter().zip(&results).enumerate() {
            let title = format!("t = {}: {} clusters", res.t, res.table.num_clusters());
            let plot = svg::scatter(frame.points(), &res.labels, &res.table, &title);
            write_file(&dir.join(format!("frame_{idx:05}.svg")), &plot)?;
        }
    }
    Ok(())
}

/// Uniform points in the unit square at about two expected neighbors each.
fn bench_points(n: usize, rng: &mut ChaCha8Rng) -> (PointSet, ClusteringConfig) {
    let ps = PointSet::from_coords((0..n).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]))
        .expect("finite coordinates");
    let radius = (2.0 / (std::f64::consts::PI * n as f64)).sqrt();
    (ps, ClusteringConfig::new(radius).expect("positive radius"))
}

pub fn run_bench(ns: &[usize], seed: u64, timing: bool) -> Result<Vec<BenchEntry>> {
    if ns.is_empty() {
        return Err(Error::invalid("--bench-n needs at least one value"));
    }
    if let Some(bad) = ns.iter().find(|&&n| n < 1) {
        return Err(Error::invalid(format!(
            "bench sizes must be >= 1, got {bad}"
        )));
    }
    let mut entries = Vec::with_capacity(ns.len());
    for &n in ns {
        let plan = make_power_plan(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
        let (ps, cfg) = bench_points(n, &mut rng);
        let a = build_adjacency(&ps, &cfg);

        let start = Instant::now();
        let (g_fast, fast_mults) = power_fast(&a)?;
        let elapsed = start.elapsed().as_secs_f64();
        if fast_mults != plan.fast_mults {
            return Err(Error::Internal(format!(
                "n={n}: performed {fast_mults} squarings, plan says {}",
                plan.fast_mults
            )));
        }

        let (naive_executed, naive_mults, partitions_equal) = if n <= NAIVE_BENCH_LIMIT {
            let (g_naive, measured) = power_naive_counted(&a)?;
            if measured != plan.naive_mults {
                return Err(Error::Internal(format!(
                    "n={n}: naive power did {measured} products, plan says {}",
                    plan.naive_mults
                )));
            }
            let fast_labels = cluster_labels(&g_fast)?;
            let naive_labels = cluster_labels(&g_naive)?;
            (true, measured, Some(fast_labels == naive_labels))
        } else {
            (false, plan.naive_mults, None)
        };

        entries.push(BenchEntry {
            n,
            k: plan.k,
            m: plan.m,
            naive_mults,
            fast_mults,
            naive_executed,
            partitions_equal,
            wall_seconds: timing.then_some(elapsed),
        });
    }
    Ok(entries)
}

pub fn cmd_bench(args: &BenchArgs) -> Result<()> {
    let entries = run_bench(&args.bench_n, args.seed, args.timing)?;
    if let Some(svg_path) = &args.svg {
        write_file(svg_path, &svg::bench_plot(&entries))?;
    }
    let report = BenchReport {
        seed: args.seed,
        entries,
    };
    emit(args.out.as_deref(), &formats::to_json(&report))
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Cluster(a) => cmd_cluster(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Trajectory(a) => cmd_trajectory(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

/// Parses `args`, runs the command, reports any error, and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let rendered = e.to_string();
            let first = rendered
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments");
            eprintln!("error: {}", first.trim_start_matches("error: ").trim());
            return 1;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error: {msg}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bench_counts() {
        let entries = run_bench(&[2, 7, 10, 64, 100, 1000], 0, false).unwrap();
        let got: Vec<_> = entries
            .iter()
            .map(|e| (e.n, e.k, e.m, e.naive_mults, e.fast_mults))
            .collect();
        assert_eq!(
            got,
            vec![
                (2, 1, 0, 0, 0),
                (7, 3, 2, 2, 2),
                (10, 5, 3, 4, 3),
                (64, 32, 5, 31, 5),
                (100, 50, 6, 49, 6),
                (1000, 500, 9, 499, 9),
            ]
        );
        assert!(entries
            .iter()
            .filter(|e| e.n <= 64)
            .all(|e| e.partitions_equal == Some(true)));
        assert!(entries
            .iter()
            .filter(|e| e.n > 64)
            .all(|e| e.partitions_equal.is_none()));
        assert!(entries.iter().all(|e| e.wall_seconds.is_none()));
    }

    #[test]
    fn bench_rejects_zero() {
        assert!(run_bench(&[3, 0], 0, false).is_err());
        assert!(run_bench(&[], 0, false).is_err());
    }

    #[test]
    fn parse_failures_exit_one() {
        assert_eq!(run(["radius-cluster", "cluster", "--radius", "1"]), 1);
        assert_eq!(run(["radius-cluster", "frobnicate"]), 1);
        assert_eq!(run(["radius-cluster", "bench", "--bench-n", "x"]), 1);
    }

    #[test]
    fn missing_input_exits_one() {
        assert_eq!(
            run([
                "radius-cluster",
                "cluster",
                "--input",
                "/nonexistent/p.csv",
                "--radius",
                "1"
            ]),
            1
        );
    }
}
