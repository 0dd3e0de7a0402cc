//! Factorisation with respect to a candidate family, and its converse,
//! projection.

use std::sync::Arc;

use thiserror::Error;

use crate::candidates::{Candidate, CandidateFamily};
use crate::cliques::collapse_bipartite;
use crate::graph::{
    sort_edges, sorted_subset, synthetic_label, Edge, Graph, GraphError, MultipartiteGraph, VertexId,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("family creates level {family_k}, graph top is {top}")]
    LevelMismatch { family_k: usize, top: usize },
    #[error("candidate {index} does not induce a biclique with upper vertices on the top level")]
    NotABiclique { index: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One factorising step: the graph before and after, and the edge delta.
#[derive(Clone, Debug)]
pub struct FactorStep {
    pub before: Arc<MultipartiteGraph>,
    pub family: CandidateFamily,
    pub after: Arc<MultipartiteGraph>,
    /// `E_-`: edges between a candidate's upper vertices and its lower set,
    /// sorted and without repeats.
    pub removed_edges: Vec<Edge>,
    /// `E_+`: edges from each new vertex to every member of its candidate,
    /// sorted.
    pub added_edges: Vec<Edge>,
    /// New vertex for each member of `family`, in the same order.
    pub new_vertices: Vec<VertexId>,
}

impl FactorStep {
    pub fn is_effective(&self) -> bool {
        !self.family.is_empty()
    }

    pub fn vertex_of(&self, c: &Candidate) -> Option<VertexId> {
        self.family
            .members
            .iter()
            .position(|m| m == c)
            .map(|i| self.new_vertices[i])
    }
}

/// Factorises `before` with respect to `family`, whose members must be the
/// maximal candidates for level `before.level_count()`.
///
/// Each candidate becomes one vertex of the new level, labelled
/// `L<k>#<ordinal>` in family order. An empty family leaves the graph as is.
pub fn factorise(
    before: Arc<MultipartiteGraph>,
    family: CandidateFamily,
) -> Result<FactorStep, TransformError> {
    let k = before.level_count();
    if family.k != k {
        return Err(TransformError::LevelMismatch {
            family_k: family.k,
            top: before.top(),
        });
    }
    for (index, c) in family.members.iter().enumerate() {
        let lower: Vec<VertexId> = c.lower.iter().copied().collect();
        let ok = c.upper.len() >= 2
            && c.upper.iter().all(|&x| {
                before.level_of(x).is_ok_and(|l| l == k - 1)
                    && before.neighbourhood(x).is_ok_and(|n| sorted_subset(&lower, n))
            })
            && lower.iter().all(|&y| before.level_of(y).is_ok_and(|l| l < k - 1));
        if !ok {
            return Err(TransformError::NotABiclique { index });
        }
    }

    if family.is_empty() {
        return Ok(FactorStep {
            after: Arc::clone(&before),
            before,
            family,
            removed_edges: Vec::new(),
            added_edges: Vec::new(),
            new_vertices: Vec::new(),
        });
    }

    let mut after = (*before).clone();
    after.push_level();
    let mut removed = Vec::new();
    let mut added = Vec::new();
    let mut new_vertices = Vec::with_capacity(family.len());
    let mut next = after.next_id().0;

    for c in &family.members {
        for &x in &c.upper {
            removed.extend(c.lower.iter().map(|&y| Edge::new(x, y)));
        }
    }
    sort_edges(&mut removed);
    after.remove_edges(&removed);

    for (ordinal, c) in family.members.iter().enumerate() {
        let id = VertexId(next);
        next += 1;
        after.add_vertex(id, k, synthetic_label(k, ordinal))?;
        added.extend(c.upper.iter().chain(&c.lower).map(|&y| Edge::new(id, y)));
        new_vertices.push(id);
    }
    sort_edges(&mut added);
    after.add_edges(&added)?;

    Ok(FactorStep {
        before,
        family,
        after: Arc::new(after.record_snapshots()),
        removed_edges: removed,
        added_edges: added,
        new_vertices,
    })
}

/// Drops the top level of a graph with at least three levels. Every pair
/// `(y, z)` with `y` on the new top level, `z` below it, and a common
/// neighbour on the dropped level, becomes an edge.
///
/// Only pairs touching the new top level are reconnected: a factorising step
/// removes exactly the edges between its upper vertices and their common
/// lower neighbourhood, so this is what makes projection undo it exactly.
pub fn project(g: &MultipartiteGraph) -> Result<MultipartiteGraph, GraphError> {
    if g.level_count() < 3 {
        return Err(GraphError::LevelCount {
            required: "at least 3".into(),
            actual: g.level_count(),
        });
    }
    let top = g.top();
    let mut out = g.clone();
    out.pop_level();
    let mut pairs = Vec::new();
    for &t in g.level(top)? {
        let n = g.neighbourhood(t)?;
        let (ys, zs): (Vec<VertexId>, Vec<VertexId>) = n
            .iter()
            .partition(|&&v| g.level_of(v).is_ok_and(|l| l == top - 1));
        for &y in &ys {
            pairs.extend(zs.iter().map(|&z| Edge::new(y, z)));
        }
    }
    sort_edges(&mut pairs);
    out.add_edges(&pairs)?;
    Ok(out)
}

/// Whether `project(g) == lower`, checked vertex by vertex without building
/// the projection.
pub fn projects_onto(g: &MultipartiteGraph, lower: &MultipartiteGraph) -> Result<bool, GraphError> {
    if g.level_count() < 3 {
        return Err(GraphError::LevelCount {
            required: "at least 3".into(),
            actual: g.level_count(),
        });
    }
    let top = g.top();
    if lower.level_count() != top
        || lower.levels() != &g.levels()[..top]
        || lower.vertex_count() + g.level(top)?.len() != g.vertex_count()
    {
        return Ok(false);
    }
    let level = |v: VertexId| g.level_of(v).unwrap_or(usize::MAX);
    let mut expected: Vec<VertexId> = Vec::new();
    for x in lower.vertices() {
        let lx = lower.level_of(x)?;
        let same = g.label(x) == lower.label(x)
            && (0..=lx).all(|j| g.snapshot(x, j) == lower.snapshot(x, j));
        if !same {
            return Ok(false);
        }
        // Kept edges, then the pairs reconnected through a dropped vertex.
        expected.clear();
        let n = g.neighbourhood(x)?;
        expected.extend(n.iter().filter(|&&v| level(v) < top));
        for &t in n.iter().filter(|&&v| level(v) == top) {
            let through = g.neighbourhood(t)?.iter().filter(|&&v| {
                let lv = level(v);
                if lx == top - 1 {
                    lv < top - 1
                } else {
                    lv == top - 1
                }
            });
            expected.extend(through);
        }
        expected.sort_unstable();
        expected.dedup();
        if expected != lower.neighbourhood(x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Projects down to two levels and collapses to the encoded simple graph.
pub fn unfold(g: &MultipartiteGraph) -> Result<Graph, GraphError> {
    let mut cur = g.clone();
    while cur.level_count() > 2 {
        cur = project(&cur)?;
    }
    collapse_bipartite(&cur)
}
