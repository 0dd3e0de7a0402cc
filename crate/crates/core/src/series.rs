//! The weak, factor and clean factor series of a graph.
//!
//! A series starts at `G_1 = B(G)` and factorises until a step is not
//! effective. The weak series can run forever, so weak and factor runs take
//! an iteration cap; the clean series always stops by rank `n`.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::candidates::{candidates, CandidateError, Mode};
use crate::cliques::{clique_incidence_with, maximal_cliques};
use crate::graph::{Graph, MultipartiteGraph};
use crate::transform::{factorise, FactorStep, TransformError};

pub const DEFAULT_CAP: usize = 100;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("iteration cap must be at least 1")]
    ZeroCap,
    #[error("clean series reached rank {rank} on a graph with {n} vertices")]
    RankExceeded { rank: usize, n: usize },
    #[error(transparent)]
    Candidates(#[from] CandidateError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Status {
    /// The factorisation of `G_rank` was not effective.
    Terminated { rank: usize },
    /// `G_cap` was reached and its factorisation was still effective.
    CapReached { cap: usize },
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Terminated { rank } => write!(f, "terminated rank={rank}"),
            Status::CapReached { cap } => write!(f, "cap-reached cap={cap}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Retention {
    /// Keep every `G_i` and every step.
    #[default]
    Full,
    /// Keep only the last graph; snapshots still carry every `V_j(x)`.
    FinalOnly,
}

/// One row per graph `G_i` of the series, describing the step producing it.
/// For `G_1` that step is the construction of `B(G)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepStats {
    pub index: usize,
    pub level_sizes: Vec<usize>,
    pub edges: usize,
    pub removed: usize,
    pub added: usize,
    pub candidates: usize,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug)]
pub struct SeriesRun {
    pub mode: Mode,
    /// `G_1, G_2, …`; only the last one under [`Retention::FinalOnly`].
    pub graphs: Vec<Arc<MultipartiteGraph>>,
    /// Effective steps, `steps[i]` maps `G_{i+1}` to `G_{i+2}`; empty under
    /// [`Retention::FinalOnly`].
    pub steps: Vec<FactorStep>,
    pub status: Status,
    pub stats: Vec<StepStats>,
    pub input_vertices: usize,
    pub retention: Retention,
}

impl SeriesRun {
    pub fn final_graph(&self) -> &MultipartiteGraph {
        self.graphs.last().expect("a run holds at least G_1")
    }

    /// Index of the last graph in the series.
    pub fn last_index(&self) -> usize {
        self.stats.len()
    }
}

fn step_mode(mode: Mode, k: usize) -> Mode {
    match mode {
        Mode::Clean if k < 4 => Mode::Factor,
        m => m,
    }
}

/// Runs the series of `mode` from `B(g)`, stopping at the first non-effective
/// step or once `G_cap` is reached. Clean runs ignore `cap` and fail if the
/// rank ever exceeds `max(n, 1)`.
pub fn run(
    g: &Graph,
    mode: Mode,
    cap: usize,
    retention: Retention,
) -> Result<SeriesRun, SeriesError> {
    run_observed(g, mode, cap, retention, |_| {})
}

/// [`run`], calling `observe` on every effective step as it is made, before
/// retention drops anything.
pub fn run_observed(
    g: &Graph,
    mode: Mode,
    cap: usize,
    retention: Retention,
    mut observe: impl FnMut(&FactorStep),
) -> Result<SeriesRun, SeriesError> {
    if cap == 0 {
        return Err(SeriesError::ZeroCap);
    }
    let n = g.vertex_count();
    let rank_limit = n.max(1);

    let start = Instant::now();
    let cliques = maximal_cliques(g);
    let first = Arc::new(clique_incidence_with(g, &cliques));
    let mut stats = vec![StepStats {
        index: 1,
        level_sizes: first.level_sizes(),
        edges: first.edge_count(),
        removed: 0,
        added: first.edge_count(),
        candidates: cliques.len(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }];
    let mut graphs = vec![first];
    let mut steps = Vec::new();
    let mut i = 1;

    let status = loop {
        let start = Instant::now();
        let current = Arc::clone(graphs.last().expect("non-empty"));
        let k = current.level_count();
        let family = candidates(&current, step_mode(mode, k))?;
        if family.is_empty() {
            break Status::Terminated { rank: i };
        }
        if mode != Mode::Clean && i == cap {
            break Status::CapReached { cap };
        }
        if mode == Mode::Clean && i + 1 > rank_limit {
            return Err(SeriesError::RankExceeded { rank: i + 1, n });
        }
        let step = factorise(current, family)?;
        i += 1;
        stats.push(StepStats {
            index: i,
            level_sizes: step.after.level_sizes(),
            edges: step.after.edge_count(),
            removed: step.removed_edges.len(),
            added: step.added_edges.len(),
            candidates: step.family.len(),
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        observe(&step);
        match retention {
            Retention::Full => {
                graphs.push(Arc::clone(&step.after));
                steps.push(step);
            }
            Retention::FinalOnly => graphs = vec![Arc::clone(&step.after)],
        }
    };

    Ok(SeriesRun {
        mode,
        graphs,
        steps,
        status,
        stats,
        input_vertices: n,
        retention,
    })
}

pub fn run_weak(g: &Graph, cap: usize) -> Result<SeriesRun, SeriesError> {
    run(g, Mode::Weak, cap, Retention::Full)
}

pub fn run_factor(g: &Graph, cap: usize) -> Result<SeriesRun, SeriesError> {
    run(g, Mode::Factor, cap, Retention::Full)
}

pub fn run_clean(g: &Graph) -> Result<SeriesRun, SeriesError> {
    run(g, Mode::Clean, usize::MAX, Retention::Full)
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub mode: Mode,
    #[serde(flatten)]
    pub status: Status,
    pub steps: Vec<StepStats>,
    pub final_level_sizes: Vec<usize>,
    pub final_vertices: usize,
    pub final_edges: usize,
}

pub fn series_stats(run: &SeriesRun) -> SeriesReport {
    let last = run.final_graph();
    SeriesReport {
        mode: run.mode,
        status: run.status,
        steps: run.stats.clone(),
        final_level_sizes: last.level_sizes(),
        final_vertices: last.vertex_count(),
        final_edges: last.edge_count(),
    }
}
