//! Multipartite factorisation series of simple graphs.
//!
//! A graph `G` is first encoded as its clique incidence graph `B(G)`. Each
//! factorising step then replaces the maximal bicliques between the upper
//! level and the levels below by new vertices on a fresh level, and
//! projection undoes a step exactly. Three candidate families drive the
//! steps (weak, factor and clean); only the clean series is guaranteed to
//! stop, and its vertices correspond to the strict chains of the
//! intersections of maximal cliques of `G`.

pub mod candidates;
pub mod cliques;
pub mod graph;
pub mod io;
pub mod lattice;
pub mod random;
pub mod search;
pub mod series;
pub mod transform;
pub mod verify;

pub use candidates::{
    brute_force_candidates, clean_candidates, factor_candidates, weak_candidates, Candidate,
    CandidateFamily, Mode,
};
pub use cliques::{clique_incidence, collapse_bipartite, maximal_cliques, CliqueSet};
pub use graph::{Graph, MultipartiteGraph, VertexId, VertexSet};
pub use lattice::{
    characterising_sequence, chains, intersection_family, size_bound, verify_charseq_theorem,
    CharSeq, IntersectionFamily,
};
pub use series::{run, run_clean, run_factor, run_weak, series_stats, Retention, SeriesRun, Status};
pub use transform::{factorise, project, unfold, FactorStep};
