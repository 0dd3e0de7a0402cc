//! Seeded random graphs for sweeps and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};

/// Erdős–Rényi `G(n, p)` with vertices labelled `v0..v{n-1}`.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(&format!("v{i}"));
    }
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            if rng.gen_bool(p) {
                g.add_edge(VertexId(i), VertexId(j)).expect("distinct vertices");
            }
        }
    }
    g
}

/// Graph on `n` vertices whose edges are the pairs selected by `mask`, in
/// the order (0,1), (0,2), …, (1,2), …
pub fn from_pair_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::new();
    for i in 0..n {
        g.add_vertex(&format!("v{i}"));
    }
    let mut bit = 0;
    for i in 0..n as u32 {
        for j in i + 1..n as u32 {
            if mask >> bit & 1 == 1 {
                g.add_edge(VertexId(i), VertexId(j)).expect("distinct vertices");
            }
            bit += 1;
        }
    }
    g
}
