//! Search for graphs on which the weak series does not stop.
//!
//! Graphs with an apex vertex keep that vertex in the common neighbourhood of
//! every upper vertex, which is what lets weak factorisation repeat itself
//! level after level. The harness scans them by increasing order.

use crate::candidates::Mode;
use crate::graph::{Graph, VertexId};
use crate::random::from_pair_mask;
use crate::series::{run, Retention, SeriesError, Status};

#[derive(Clone, Debug)]
pub struct Witness {
    pub graph: Graph,
    pub weak: Status,
    pub clean: Status,
}

/// `h` plus one vertex `apex` adjacent to every vertex of `h`.
pub fn with_apex(h: &Graph) -> Graph {
    let mut g = h.clone();
    let apex = g.add_vertex("apex");
    for v in h.vertices() {
        g.add_edge(v, apex).expect("apex is new");
    }
    g
}

/// Scans `H + apex` for every graph `H` on `1..max_n` vertices (so at most
/// `max_n` vertices in total), returning the first graph whose weak series
/// reaches `cap` while its clean series terminates within rank `n`.
pub fn find_weak_nontermination(max_n: usize, cap: usize) -> Result<Option<Witness>, SeriesError> {
    assert!(max_n <= 12, "pair masks are limited to 11 base vertices");
    for base in 1..max_n {
        let pairs = base * (base - 1) / 2;
        for mask in 0u64..(1u64 << pairs) {
            let g = with_apex(&from_pair_mask(base, mask));
            if let Some(w) = check_witness(&g, cap)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Runs both series on `g` and returns it as a witness if the weak one hits
/// the cap and the clean one terminates.
pub fn check_witness(g: &Graph, cap: usize) -> Result<Option<Witness>, SeriesError> {
    let weak = run(g, Mode::Weak, cap, Retention::FinalOnly)?.status;
    if weak != (Status::CapReached { cap }) {
        return Ok(None);
    }
    let clean = run(g, Mode::Clean, cap, Retention::FinalOnly)?.status;
    match clean {
        Status::Terminated { rank } if rank <= g.vertex_count() => Ok(Some(Witness {
            graph: g.clone(),
            weak,
            clean,
        })),
        _ => Ok(None),
    }
}

/// True when `v` is adjacent to every other vertex.
pub fn is_apex(g: &Graph, v: VertexId) -> bool {
    g.degree(v).is_ok_and(|d| d + 1 == g.vertex_count())
}
