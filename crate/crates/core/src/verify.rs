//! Whole-pipeline verification of one graph: clean series, characterising
//! sequences, the level-2 bijection, the size bound and projection
//! roundtrips.

use serde::Serialize;

use crate::cliques::collapse_bipartite;
use crate::candidates::Mode;
use crate::graph::{Graph, MultipartiteGraph};
use crate::lattice::{
    intersection_family, size_bound, verify_charseq_theorem, verify_level_two_bijection,
    CharSeqReport, Check, SizeBoundReport,
};
use crate::series::{run_observed, Retention, SeriesError, SeriesRun, Status};
use crate::transform::{project, projects_onto, unfold, FactorStep};

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub vertices: usize,
    pub edges: usize,
    #[serde(flatten)]
    pub status: Status,
    pub rank_within_n: bool,
    pub final_level_sizes: Vec<usize>,
    pub charseq: CharSeqReport,
    pub level_two_bijection: Check,
    pub size_bound: SizeBoundReport,
    pub roundtrip: Check,
}

fn record(check: &mut Check, ok: bool, what: impl FnOnce() -> String) {
    check.checked += 1;
    if !ok {
        check.pass = false;
        check.witnesses.push(what());
    }
}

/// Checks `project(G_{i+1}) = G_i` step by step, so that a run need not keep
/// its graphs, and that `G_1` collapses to the input graph.
#[derive(Debug)]
pub struct RoundtripChecker<'a> {
    g: &'a Graph,
    check: Check,
    steps: usize,
}

impl<'a> RoundtripChecker<'a> {
    pub fn new(g: &'a Graph) -> Self {
        RoundtripChecker {
            g,
            check: Check {
                pass: true,
                ..Check::default()
            },
            steps: 0,
        }
    }

    fn check_first(&mut self, first: &MultipartiteGraph) {
        if first.level_count() == 2 {
            let ok = collapse_bipartite(first).is_ok_and(|c| c == *self.g);
            record(&mut self.check, ok, || "collapse(G_1) != G".into());
        }
    }

    pub fn observe(&mut self, step: &FactorStep) {
        if self.steps == 0 {
            self.check_first(&step.before);
        }
        self.steps += 1;
        let i = self.steps;
        let ok = projects_onto(&step.after, &step.before).unwrap_or(false);
        record(&mut self.check, ok, || format!("project(G_{}) != G_{}", i + 1, i));
    }

    /// With every step observed and passing, `unfold(M) = G` follows; it is
    /// only recomputed otherwise.
    pub fn finish(mut self, run: &SeriesRun) -> Check {
        if self.steps == 0 {
            self.check_first(run.final_graph());
        }
        if !(self.steps + 1 == run.last_index() && self.check.pass) {
            let ok = unfold(run.final_graph()).is_ok_and(|c| c == *self.g);
            record(&mut self.check, ok, || "unfold(M) != G".into());
        }
        self.check
    }
}

/// Roundtrip checks over a run that kept every graph.
pub fn check_roundtrips(g: &Graph, run: &SeriesRun) -> Check {
    let mut check = Check {
        pass: true,
        ..Check::default()
    };
    for (i, pair) in run.graphs.windows(2).enumerate() {
        let ok = project(&pair[1]).is_ok_and(|p| p == *pair[0]);
        record(&mut check, ok, || format!("project(G_{}) != G_{}", i + 2, i + 1));
    }
    if let Some(first) = run.graphs.first().filter(|f| f.level_count() == 2) {
        let ok = collapse_bipartite(first).is_ok_and(|c| c == *g);
        record(&mut check, ok, || "collapse(G_1) != G".into());
    }
    // With every G_i retained and each pair checked, unfold(M) == G follows.
    let full_chain = run.graphs.len() == run.last_index();
    if !(full_chain && check.pass) {
        let ok = unfold(run.final_graph()).is_ok_and(|c| c == *g);
        record(&mut check, ok, || "unfold(M) != G".into());
    }
    check
}

/// Runs the clean series, keeping only its final graph, and checks every
/// property on it.
pub fn verify_graph(g: &Graph) -> Result<VerificationReport, SeriesError> {
    let mut roundtrips = RoundtripChecker::new(g);
    let run = run_observed(g, Mode::Clean, usize::MAX, Retention::FinalOnly, |s| {
        roundtrips.observe(s)
    })?;
    let roundtrip = roundtrips.finish(&run);
    let fam = intersection_family(g);
    let m = run.final_graph();
    let charseq = verify_charseq_theorem(&run, &fam);
    let bijection = verify_level_two_bijection(m, &fam);
    let bound = size_bound(g, m);
    let rank_within_n = match run.status {
        Status::Terminated { rank } => rank <= g.vertex_count().max(1),
        Status::CapReached { .. } => false,
    };
    Ok(VerificationReport {
        pass: rank_within_n && charseq.pass && bijection.pass && bound.pass && roundtrip.pass,
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        status: run.status,
        rank_within_n,
        final_level_sizes: m.level_sizes(),
        charseq,
        level_two_bijection: bijection,
        size_bound: bound,
        roundtrip,
    })
}
