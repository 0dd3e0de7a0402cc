//! Maximal cliques and the clique incidence graph `B(G)`.

use crate::graph::{
    synthetic_label, Graph, GraphError, MultipartiteGraph, VertexId, VertexSet,
};

/// The maximal cliques of a graph, in lexicographic order of their sorted
/// vertex lists, with a per-vertex index of the cliques containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueSet {
    cliques: Vec<VertexSet>,
    index: Vec<Vec<usize>>,
}

impl CliqueSet {
    pub fn cliques(&self) -> &[VertexSet] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Positions of the cliques containing `v`.
    pub fn containing(&self, v: VertexId) -> &[usize] {
        self.index.get(v.0 as usize).map_or(&[], Vec::as_slice)
    }

    /// Largest number of cliques sharing one vertex.
    pub fn max_per_vertex(&self) -> usize {
        self.index.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Size of the largest clique.
    pub fn max_size(&self) -> usize {
        self.cliques.iter().map(VertexSet::len).max().unwrap_or(0)
    }
}

/// Enumerates the inclusion-maximal cliques of `g` with pivoted
/// Bron–Kerbosch. Isolated vertices come out as singletons.
pub fn maximal_cliques(g: &Graph) -> CliqueSet {
    let mut found = Vec::new();
    if g.vertex_count() > 0 {
        expand(g, VertexSet::new(), g.vertex_set(), VertexSet::new(), &mut found);
    }
    found.sort();

    let mut index = vec![Vec::new(); g.vertex_count()];
    for (i, c) in found.iter().enumerate() {
        for v in c {
            index[v.0 as usize].push(i);
        }
    }
    CliqueSet {
        cliques: found,
        index,
    }
}

fn expand(
    g: &Graph,
    current: VertexSet,
    mut candidates: VertexSet,
    mut excluded: VertexSet,
    out: &mut Vec<VertexSet>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() {
            out.push(current);
        }
        return;
    }
    let nbrs = |v: &VertexId| g.neighbourhood(*v).expect("vertex of g");
    // pivot maximising |candidates ∩ N(u)|
    let pivot = candidates
        .iter()
        .chain(excluded.iter())
        .max_by_key(|u| nbrs(u).intersection(&candidates).count())
        .copied()
        .expect("non-empty");
    let pivot_nbrs = nbrs(&pivot);
    let branch: Vec<VertexId> = candidates
        .iter()
        .filter(|v| !pivot_nbrs.contains(v))
        .copied()
        .collect();
    for v in branch {
        let nv = nbrs(&v);
        let mut next = current.clone();
        next.insert(v);
        expand(
            g,
            next,
            candidates.intersection(nv).copied().collect(),
            excluded.intersection(nv).copied().collect(),
            out,
        );
        candidates.remove(&v);
        excluded.insert(v);
    }
}

/// Builds `B(G)`: level 0 is `V(G)` (same ids and labels), level 1 holds one
/// vertex per maximal clique, adjacent to the clique's members.
pub fn clique_incidence(g: &Graph) -> MultipartiteGraph {
    clique_incidence_with(g, &maximal_cliques(g))
}

pub fn clique_incidence_with(g: &Graph, cliques: &CliqueSet) -> MultipartiteGraph {
    let mut b = MultipartiteGraph::with_levels(2);
    for v in g.vertices() {
        b.add_vertex(v, 0, g.label(v).expect("own vertex").to_owned())
            .expect("fresh id");
    }
    let base = g.vertex_count() as u32;
    for (i, c) in cliques.cliques().iter().enumerate() {
        let id = VertexId(base + i as u32);
        b.add_vertex(id, 1, synthetic_label(1, i)).expect("fresh id");
        for &v in c {
            b.add_edge(v, id).expect("levels differ");
        }
    }
    b.record_snapshots()
}

/// Collapses a bipartite graph onto its bottom level: `uv` is an edge iff
/// `u` and `v` share a top neighbour. Bottom vertices are renumbered densely
/// in id order.
pub fn collapse_bipartite(b: &MultipartiteGraph) -> Result<Graph, GraphError> {
    if b.level_count() != 2 {
        return Err(GraphError::LevelCount {
            required: "exactly 2".into(),
            actual: b.level_count(),
        });
    }
    let mut g = Graph::new();
    let mut renumber = std::collections::BTreeMap::new();
    for &v in b.level(0)? {
        let id = g.add_vertex(b.label(v).unwrap_or_default());
        renumber.insert(v, id);
    }
    for &t in b.level(1)? {
        let members: Vec<VertexId> = b.neighbourhood(t)?.iter().map(|v| renumber[v]).collect();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}
