use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use cliquefactor::io::{parse_edge_list, parse_mgraph, write_edge_list, write_mgraph};
use cliquefactor::lattice::{size_bound, SizeBoundReport};
use cliquefactor::random::gnp;
use cliquefactor::series::{run, series_stats, Retention, SeriesError, SeriesReport, DEFAULT_CAP};
use cliquefactor::verify::{verify_graph, VerificationReport};
use cliquefactor::{collapse_bipartite, project, Graph, Mode, Status};

const EXIT_INPUT: u8 = 1;
const EXIT_CAP: u8 = 2;
const EXIT_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "cliquefactor", version, about = "Multipartite factorisation series of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a series on an edge list and write the last graph as mgraph.
    Decompose {
        input: PathBuf,
        #[arg(long, default_value = "clean")]
        mode: Mode,
        /// Iteration cap for weak and factor runs.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
        /// Keep only the last graph during the run.
        #[arg(long)]
        low_memory: bool,
    },
    /// Run the clean series and check its structural properties.
    Verify {
        /// Edge list to verify; omit with --random.
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        input: Option<PathBuf>,
        /// Verify random G(n, p) graphs with this many vertices instead.
        #[arg(long, value_name = "N")]
        random: Option<usize>,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// First seed of the random sweep.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Drop the top level of an mgraph.
    Project {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Project down to two levels and write the encoded edge list.
        #[arg(long)]
        to_graph: bool,
    },
    /// Per-step statistics of a series, with the size bound, as JSON.
    Stats {
        input: PathBuf,
        #[arg(long, default_value = "clean")]
        mode: Mode,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        low_memory: bool,
        /// Report elapsed times as zero, for reproducible output.
        #[arg(long)]
        no_timings: bool,
    },
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: EXIT_INPUT,
            error: e.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose {
            input,
            mode,
            cap,
            output,
            low_memory,
        } => decompose(&input, mode, cap, &output, low_memory),
        Command::Verify {
            input,
            random,
            seeds,
            p,
            seed,
        } => match (input, random) {
            (Some(path), _) => verify_file(&path),
            (None, Some(n)) => verify_random(n, p, seed, seeds),
            (None, None) => unreachable!("clap requires one of them"),
        },
        Command::Project {
            input,
            output,
            to_graph,
        } => project_file(&input, &output, to_graph),
        Command::Stats {
            input,
            mode,
            cap,
            low_memory,
            no_timings,
        } => stats(&input, mode, cap, low_memory, no_timings),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cap_for(mode: Mode, cap: Option<usize>) -> usize {
    if mode == Mode::Clean && cap.is_some() {
        eprintln!("warning: --cap is ignored for the clean series");
    }
    cap.unwrap_or(DEFAULT_CAP)
}

fn retention(low_memory: bool) -> Retention {
    if low_memory {
        Retention::FinalOnly
    } else {
        Retention::Full
    }
}

fn series_failure(e: SeriesError) -> Failure {
    let code = match e {
        SeriesError::RankExceeded { .. } => EXIT_FAILED,
        _ => EXIT_INPUT,
    };
    Failure {
        code,
        error: e.into(),
    }
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Terminated { .. } => 0,
        Status::CapReached { .. } => EXIT_CAP,
    }
}

fn emit(text: &str) -> Result<()> {
    writeln!(std::io::stdout().lock(), "{text}").context("writing to stdout")
}

fn print_json(value: &impl Serialize) -> Result<()> {
    emit(&serde_json::to_string_pretty(value)?)
}

fn decompose(
    input: &Path,
    mode: Mode,
    cap: Option<usize>,
    output: &Path,
    low_memory: bool,
) -> Result<u8, Failure> {
    let g = read_graph(input)?;
    let cap = cap_for(mode, cap);
    let result = run(&g, mode, cap, retention(low_memory)).map_err(series_failure)?;
    write(output, &write_mgraph(result.final_graph()))?;
    emit(&result.status.to_string())?;
    Ok(status_code(result.status))
}

fn verify_file(input: &Path) -> Result<u8, Failure> {
    let g = read_graph(input)?;
    let report = verify_graph(&g).map_err(series_failure)?;
    print_json(&report)?;
    Ok(if report.pass { 0 } else { EXIT_FAILED })
}

#[derive(Serialize)]
struct Instance {
    seed: u64,
    pass: bool,
    #[serde(flatten)]
    status: Status,
    final_level_sizes: Vec<usize>,
}

#[derive(Serialize)]
struct SweepReport {
    pass: bool,
    n: usize,
    p: f64,
    first_seed: u64,
    instances: Vec<Instance>,
    failed: usize,
    /// Full reports of the first few failing instances.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failures: Vec<(u64, VerificationReport)>,
}

const REPORTED_FAILURES: usize = 5;

fn verify_random(n: usize, p: f64, first_seed: u64, seeds: u64) -> Result<u8, Failure> {
    if !(0.0..=1.0).contains(&p) {
        return Err(anyhow::anyhow!("--p must lie in [0, 1], got {p}").into());
    }
    let mut sweep = SweepReport {
        pass: true,
        n,
        p,
        first_seed,
        instances: Vec::new(),
        failed: 0,
        failures: Vec::new(),
    };
    for seed in first_seed..first_seed + seeds {
        let g = gnp(n, p, seed);
        let report = verify_graph(&g).map_err(series_failure)?;
        sweep.instances.push(Instance {
            seed,
            pass: report.pass,
            status: report.status,
            final_level_sizes: report.final_level_sizes.clone(),
        });
        if !report.pass {
            sweep.pass = false;
            sweep.failed += 1;
            if sweep.failures.len() < REPORTED_FAILURES {
                sweep.failures.push((seed, report));
            }
        }
    }
    print_json(&sweep)?;
    Ok(if sweep.pass { 0 } else { EXIT_FAILED })
}

fn project_file(input: &Path, output: &Path, to_graph: bool) -> Result<u8, Failure> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let mut m = parse_mgraph(&text).with_context(|| format!("parsing {}", input.display()))?;
    if to_graph {
        while m.level_count() > 2 {
            m = project(&m)?;
        }
        write(output, &write_edge_list(&collapse_bipartite(&m)?))?;
    } else {
        write(output, &write_mgraph(&project(&m)?))?;
    }
    Ok(0)
}

#[derive(Serialize)]
struct StatsReport {
    #[serde(flatten)]
    series: SeriesReport,
    size_bound: SizeBoundReport,
}

fn stats(
    input: &Path,
    mode: Mode,
    cap: Option<usize>,
    low_memory: bool,
    no_timings: bool,
) -> Result<u8, Failure> {
    let g = read_graph(input)?;
    let cap = cap_for(mode, cap);
    let result = run(&g, mode, cap, retention(low_memory)).map_err(series_failure)?;
    let mut series = series_stats(&result);
    if no_timings {
        series.steps.iter_mut().for_each(|s| s.elapsed_ms = 0.0);
    }
    let report = StatsReport {
        series,
        size_bound: size_bound(&g, result.final_graph()),
    };
    print_json(&report)?;
    Ok(status_code(result.status))
}
