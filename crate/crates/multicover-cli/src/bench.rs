//! Benchmark runner: expands a sweep config into (algorithm, instance,
//! repetition) cells, executes them on a bounded worker pool, and renders the
//! fixed-column CSV. Rows always come out in config order.

use std::fs;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, ValueEnum};
use multicover::generate::{generate_adversarial, generate_random, rss};
use multicover::instance::Instance;
use multicover::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::{emit, load_instance, run_algo, spec_label, Algo, Failure, SpecArg};

#[derive(Args)]
pub(crate) struct BenchArgs {
    /// Sweep config JSON: algorithms, instance sources, repetitions.
    #[arg(long)]
    input: PathBuf,
    /// Destination CSV; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// One mean-runtime row per cell instead of one row per repetition.
    #[arg(long)]
    aggregate: bool,
    /// Worker threads for independent cells.
    #[arg(long, default_value_t = 4)]
    jobs: usize,
    /// Approximation budget when the config does not set one.
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
}

#[derive(Deserialize)]
struct BenchConfig {
    algorithms: Vec<String>,
    instances: Vec<SourceSpec>,
    #[serde(default = "one")]
    repetitions: usize,
    #[serde(default)]
    eps: Option<f64>,
}

fn one() -> usize {
    1
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SourceSpec {
    Random {
        n: usize,
        ell: usize,
        #[serde(default)]
        spec: Option<String>,
        seeds: Vec<u64>,
    },
    Adversarial {
        ell: usize,
    },
    File {
        path: PathBuf,
    },
}

/// One solvable input with its CSV identity columns.
struct Source {
    inst: Instance,
    demand_spec: String,
    seed: Option<u64>,
}

/// (source index, algorithm, repetition), in emission order.
type Cell = (usize, Algo, usize);

#[derive(Clone)]
pub(crate) struct Row {
    pub algorithm: String,
    pub n: usize,
    pub ell: usize,
    pub demand_spec: String,
    pub seed: Option<u64>,
    pub total_weight: Option<f64>,
    pub rss: Option<f64>,
    pub runtime_ms: Option<f64>,
    pub status: String,
}

pub(crate) fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.input).map_err(|e| {
        Failure::usage(format!("cannot read {}: {e}", args.input.display()))
    })?;
    let config: BenchConfig = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("bench config: {e}")))?;
    let algos: Vec<Algo> = config
        .algorithms
        .iter()
        .map(|s| {
            Algo::from_str(s, true)
                .map_err(|_| Failure::usage(format!("unknown algorithm '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    let eps = config.eps.unwrap_or(args.eps);
    let reps = config.repetitions.max(1);

    // Sources are built up front so instance generation and file loads never
    // count toward solve timings.
    let sources = expand(config.instances)?;
    let mut cells: Vec<Cell> = Vec::with_capacity(sources.len() * algos.len() * reps);
    for s in 0..sources.len() {
        for &algo in &algos {
            for rep in 0..reps {
                cells.push((s, algo, rep));
            }
        }
    }

    let rows = execute(&cells, &sources, eps, args.jobs);
    spot_check(&rows, &cells, &sources, eps)?;
    let rows = if args.aggregate { aggregate_rows(rows, reps) } else { rows };
    emit(args.output.as_deref(), &render_csv(&rows)?)
}

fn expand(specs: Vec<SourceSpec>) -> Result<Vec<Source>, Failure> {
    let mut out = Vec::new();
    for spec in specs {
        match spec {
            SourceSpec::Random { n, ell, spec, seeds } => {
                let arg = match spec.as_deref() {
                    None => SpecArg::Random,
                    Some(s) => SpecArg::from_str(s, true)
                        .map_err(|_| Failure::usage(format!("unknown demand spec '{s}'")))?,
                };
                let dist = arg.to_spec();
                for seed in seeds {
                    out.push(Source {
                        inst: generate_random(n, ell, dist, seed)?,
                        demand_spec: spec_label(dist).into(),
                        seed: Some(seed),
                    });
                }
            }
            SourceSpec::Adversarial { ell } => out.push(Source {
                inst: generate_adversarial(ell)?,
                demand_spec: "unit".into(),
                seed: None,
            }),
            SourceSpec::File { path } => out.push(Source {
                inst: load_instance(&path, &[], None, &[])?,
                demand_spec: "file".into(),
                seed: None,
            }),
        }
    }
    Ok(out)
}

fn algo_tag(algo: Algo) -> String {
    algo.to_possible_value().expect("no hidden variants").get_name().to_string()
}

/// Solves one cell. Failures become rows, not process errors, so a sweep
/// survives bad cells.
fn run_one(source: &Source, algo: Algo, eps: f64) -> Row {
    let blank = |status: &str| Row {
        algorithm: algo_tag(algo),
        n: source.inst.n(),
        ell: source.inst.ell(),
        demand_spec: source.demand_spec.clone(),
        seed: source.seed,
        total_weight: None,
        rss: None,
        runtime_ms: None,
        status: status.into(),
    };
    let started = Instant::now();
    match run_algo(algo, &source.inst, eps, source.seed) {
        Ok(sol) => {
            let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
            match rss(&source.inst, &sol) {
                Ok(score) => Row {
                    total_weight: Some(sol.total_weight),
                    rss: Some(score),
                    runtime_ms: Some(runtime_ms),
                    status: "ok".into(),
                    ..blank("ok")
                },
                Err(_) => blank("solver-error"),
            }
        }
        Err(Error::Infeasible(_)) => blank("infeasible"),
        Err(_) => blank("solver-error"),
    }
}

/// Bounded worker pool over the cell list. Results land in per-cell slots,
/// so output order never depends on completion order.
fn execute(cells: &[Cell], sources: &[Source], eps: f64, jobs: usize) -> Vec<Row> {
    let results: Vec<Mutex<Option<Row>>> = cells.iter().map(|_| Mutex::new(None)).collect();
    let cursor = AtomicUsize::new(0);
    let workers = jobs.clamp(1, cells.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= cells.len() {
                    break;
                }
                let (src, algo, _) = cells[i];
                let row = run_one(&sources[src], algo, eps);
                *results[i].lock().expect("no poisoned slots") = Some(row);
            });
        }
    });
    results
        .into_iter()
        .map(|slot| slot.into_inner().expect("no poisoned slots").expect("every cell ran"))
        .collect()
}

/// Re-solves up to ten random ok rows and demands identical weights, as a
/// guard against cell bookkeeping drift.
fn spot_check(
    rows: &[Row],
    cells: &[Cell],
    sources: &[Source],
    eps: f64,
) -> Result<(), Failure> {
    let ok_rows: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.status == "ok")
        .map(|(i, _)| i)
        .collect();
    if ok_rows.is_empty() {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ff1ce);
    for _ in 0..10 {
        let pick = ok_rows[rng.random_range(0..ok_rows.len())];
        let (src, algo, _) = cells[pick];
        let sol = run_algo(algo, &sources[src].inst, eps, sources[src].seed)?;
        if Some(sol.total_weight) != rows[pick].total_weight {
            return Err(Failure::usage(format!(
                "spot check failed: row {pick} reports {:?} but re-solving gives {}",
                rows[pick].total_weight, sol.total_weight
            )));
        }
    }
    Ok(())
}

/// Collapses each cell's repetition rows into one row with the mean runtime.
/// Weights and scores are already identical across repetitions.
fn aggregate_rows(rows: Vec<Row>, reps: usize) -> Vec<Row> {
    rows.chunks(reps)
        .map(|chunk| {
            let mut head = chunk[0].clone();
            let times: Vec<f64> = chunk.iter().filter_map(|r| r.runtime_ms).collect();
            head.runtime_ms = (!times.is_empty())
                .then(|| times.iter().sum::<f64>() / times.len() as f64);
            head
        })
        .collect()
}

pub(crate) fn render_csv(rows: &[Row]) -> Result<String, Failure> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "algorithm",
            "n",
            "ell",
            "demand_spec",
            "seed",
            "total_weight",
            "rss",
            "runtime_ms",
            "status",
        ])
        .map_err(|e| Failure::usage(format!("cannot render CSV: {e}")))?;
    for r in rows {
        writer
            .write_record([
                r.algorithm.clone(),
                r.n.to_string(),
                r.ell.to_string(),
                r.demand_spec.clone(),
                r.seed.map(|s| s.to_string()).unwrap_or_default(),
                r.total_weight.map(|v| v.to_string()).unwrap_or_default(),
                r.rss.map(|v| v.to_string()).unwrap_or_default(),
                r.runtime_ms.map(|v| format!("{v:.3}")).unwrap_or_default(),
                r.status.clone(),
            ])
            .map_err(|e| Failure::usage(format!("cannot render CSV: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Failure::usage(format!("cannot render CSV: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Failure::usage(format!("cannot render CSV: {e}")))
}
