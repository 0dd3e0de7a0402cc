//! Simple graphs and levelled (multipartite) graphs.
//!
//! Vertices are `u32` identifiers with a side table of labels. All sets are
//! ordered so that iteration, and therefore every derived output, is
//! deterministic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Opaque vertex identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type VertexSet = BTreeSet<VertexId>;

/// Unordered pair stored with the smaller id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.0, self.1)
    }
}

pub type EdgeSet = BTreeSet<Edge>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("level {level} out of range (top level is {top})")]
    LevelOutOfRange { level: usize, top: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {0}-{1} joins two vertices of level {2}")]
    IntraLevelEdge(VertexId, VertexId, usize),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("vertex {0} declared twice")]
    DuplicateVertex(VertexId),
    #[error("snapshot of vertex {vertex} at level {level} is invalid: {reason}")]
    BadSnapshot {
        vertex: VertexId,
        level: usize,
        reason: String,
    },
    #[error("operation requires {required}, graph has {actual} levels")]
    LevelCount { required: String, actual: usize },
}

/// Finite, undirected, simple graph over labelled vertices `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    adjacency: Vec<VertexSet>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from labelled vertices and edges given by label.
    /// Vertices are numbered in order of first appearance in `vertices` then
    /// `edges`.
    pub fn from_labelled<'a, V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = &'a str>,
        E: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut g = Graph::new();
        let mut index: BTreeMap<String, VertexId> = BTreeMap::new();
        let mut intern = |g: &mut Graph, label: &str| -> VertexId {
            if let Some(&v) = index.get(label) {
                return v;
            }
            let v = g.add_vertex(label);
            index.insert(label.to_owned(), v);
            v
        };
        for v in vertices {
            intern(&mut g, v);
        }
        for (a, b) in edges {
            let u = intern(&mut g, a);
            let v = intern(&mut g, b);
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Shorthand for tests and fixtures: every vertex named by its edges.
    pub fn from_edges<'a>(edges: &[(&'a str, &'a str)]) -> Self {
        Self::from_labelled([], edges.iter().copied()).expect("fixture edges must be simple")
    }

    pub fn add_vertex(&mut self, label: &str) -> VertexId {
        let id = VertexId(self.labels.len() as u32);
        self.labels.push(label.to_owned());
        self.adjacency.push(VertexSet::new());
        id
    }

    /// Inserts `uv`; returns `false` if it was already present.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let fresh = self.adjacency[u.0 as usize].insert(v);
        self.adjacency[v.0 as usize].insert(u);
        Ok(fresh)
    }

    fn check(&self, v: VertexId) -> Result<(), GraphError> {
        if (v.0 as usize) < self.labels.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels.len() as u32).map(VertexId)
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn label(&self, v: VertexId) -> Option<&str> {
        self.labels.get(v.0 as usize).map(String::as_str)
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| VertexId(i as u32))
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency
            .get(u.0 as usize)
            .is_some_and(|n| n.contains(&v))
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, n)| {
            let u = VertexId(u as u32);
            n.range(u..).map(move |&v| Edge::new(u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.neighbourhood(v).map(BTreeSet::len)
    }

    pub fn neighbourhood(&self, x: VertexId) -> Result<&VertexSet, GraphError> {
        self.adjacency
            .get(x.0 as usize)
            .ok_or(GraphError::UnknownVertex(x))
    }
}


/// Synthetic label for a vertex created at `level >= 1`.
pub fn synthetic_label(level: usize, ordinal: usize) -> String {
    format!("L{level}#{ordinal}")
}

/// Intersection of two sorted, duplicate-free slices.
pub fn sorted_intersection(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// `a ⊆ b` for sorted, duplicate-free slices.
pub fn sorted_subset(a: &[VertexId], b: &[VertexId]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Labels by id, packed into one buffer. Removed labels leave dead bytes
/// behind, which equality ignores.
#[derive(Clone, Debug, Default)]
struct Labels {
    text: String,
    spans: Vec<(u32, u32)>,
}

impl Labels {
    fn get(&self, slot: usize) -> &str {
        let (lo, hi) = self.spans[slot];
        &self.text[lo as usize..hi as usize]
    }

    fn set(&mut self, slot: usize, label: &str) {
        if slot >= self.spans.len() {
            self.spans.resize(slot + 1, (0, 0));
        }
        let lo = self.text.len() as u32;
        self.text.push_str(label);
        self.spans[slot] = (lo, self.text.len() as u32);
    }

    fn clear(&mut self, slot: usize) {
        self.spans[slot] = (0, 0);
    }

    fn truncate(&mut self, len: usize) {
        self.spans.truncate(len);
        let end = self.spans.iter().map(|s| s.1).max().unwrap_or(0);
        self.text.truncate(end as usize);
    }
}

impl PartialEq for Labels {
    fn eq(&self, other: &Self) -> bool {
        self.spans.len() == other.spans.len()
            && (0..self.spans.len()).all(|i| self.get(i) == other.get(i))
    }
}

impl Eq for Labels {}

/// Creation neighbourhoods of one vertex, level by level:
/// `members[bounds[j]..bounds[j + 1]]` is `V_j(x)`, sorted.
#[derive(Clone, Copy, Debug)]
struct Snapshot<'a> {
    bounds: &'a [u32],
    members: &'a [VertexId],
}

impl<'a> Snapshot<'a> {
    fn level(&self, j: usize) -> Option<&'a [VertexId]> {
        let lo = *self.bounds.get(j)? as usize;
        let hi = *self.bounds.get(j + 1)? as usize;
        Some(&self.members[lo..hi])
    }

    fn slots(&self) -> usize {
        self.bounds.len() - 1
    }
}

impl PartialEq for Snapshot<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.slots() == other.slots() && (0..self.slots()).all(|j| self.level(j) == other.level(j))
    }
}

/// Snapshots written together, usually by one factorising step.
#[derive(Clone, Debug, Default)]
struct SnapshotBlock {
    /// Entry `e` owns `bounds[heads[e]..heads[e + 1]]`.
    heads: Vec<u32>,
    bounds: Vec<u32>,
    members: Vec<VertexId>,
}

const NO_SNAPSHOT: (u32, u32) = (u32::MAX, 0);

/// Snapshots by id. Blocks are shared between clones and only appended to;
/// replaced or removed entries leave dead data behind, which equality
/// ignores.
#[derive(Clone, Debug, Default)]
struct Snapshots {
    blocks: Vec<Arc<SnapshotBlock>>,
    index: Vec<(u32, u32)>,
}

impl Snapshots {
    fn get(&self, slot: usize) -> Option<Snapshot<'_>> {
        let &(b, e) = self.index.get(slot)?;
        let block = self.blocks.get(b as usize)?;
        let (lo, hi) = (block.heads[e as usize] as usize, block.heads[e as usize + 1] as usize);
        Some(Snapshot {
            bounds: &block.bounds[lo..hi],
            members: &block.members,
        })
    }

    fn set(&mut self, slot: usize, slots: &[Vec<VertexId>]) {
        if slot >= self.index.len() {
            self.index.resize(slot + 1, NO_SNAPSHOT);
        }
        if self.blocks.last_mut().and_then(Arc::get_mut).is_none() {
            self.blocks.push(Arc::new(SnapshotBlock {
                heads: vec![0],
                ..SnapshotBlock::default()
            }));
        }
        let b = self.blocks.len() - 1;
        let block = Arc::get_mut(&mut self.blocks[b]).expect("unshared block");
        let e = block.heads.len() - 1;
        for set in slots {
            block.bounds.push(block.members.len() as u32);
            block.members.extend_from_slice(set);
        }
        block.bounds.push(block.members.len() as u32);
        block.heads.push(block.bounds.len() as u32);
        self.index[slot] = (b as u32, e as u32);
    }

    fn clear(&mut self, slot: usize) {
        self.index[slot] = NO_SNAPSHOT;
    }

    fn truncate(&mut self, len: usize) {
        self.index.truncate(len);
    }
}

impl PartialEq for Snapshots {
    fn eq(&self, other: &Self) -> bool {
        let len = self.index.len().max(other.index.len());
        (0..len).all(|i| self.get(i) == other.get(i))
    }
}

impl Eq for Snapshots {}

const ABSENT: u32 = u32::MAX;

/// A graph whose vertices are partitioned into levels `V_0..V_top`, with
/// edges only between distinct levels.
///
/// Every vertex `x` at level `i >= 1` carries its creation snapshot: the sets
/// `N_j(x)` for `j < i`, as they were in the graph where level `i` was the top
/// level. Later factorisations may remove live edges of `x`; the snapshot is
/// never touched again, and clones share it.
///
/// Storage is indexed by id. Neighbourhoods and levels are sorted slices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultipartiteGraph {
    levels: Vec<Vec<VertexId>>,
    level_of: Vec<u32>,
    labels: Labels,
    adjacency: Vec<Vec<VertexId>>,
    snapshots: Snapshots,
    vertex_count: usize,
}

impl MultipartiteGraph {
    /// Graph with `level_count` empty levels.
    pub fn with_levels(level_count: usize) -> Self {
        MultipartiteGraph {
            levels: vec![Vec::new(); level_count],
            ..Default::default()
        }
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    /// Index of the highest level. Panics on a graph with no levels.
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> Result<&[VertexId], GraphError> {
        self.levels
            .get(i)
            .map(Vec::as_slice)
            .ok_or(GraphError::LevelOutOfRange {
                level: i,
                top: self.levels.len().saturating_sub(1),
            })
    }

    pub fn levels(&self) -> &[Vec<VertexId>] {
        &self.levels
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn level_of(&self, x: VertexId) -> Result<usize, GraphError> {
        match self.level_of.get(x.0 as usize) {
            Some(&l) if l != ABSENT => Ok(l as usize),
            _ => Err(GraphError::UnknownVertex(x)),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Vertices in increasing id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.level_of
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != ABSENT)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn contains(&self, x: VertexId) -> bool {
        self.level_of(x).is_ok()
    }

    pub fn label(&self, x: VertexId) -> Option<&str> {
        self.level_of(x).ok().map(|_| self.labels.get(x.0 as usize))
    }

    /// First id above every vertex.
    pub fn next_id(&self) -> VertexId {
        VertexId(self.level_of.len() as u32)
    }

    pub fn neighbourhood(&self, x: VertexId) -> Result<&[VertexId], GraphError> {
        self.level_of(x)?;
        Ok(&self.adjacency[x.0 as usize])
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbourhood(u)
            .is_ok_and(|n| n.binary_search(&v).is_ok())
    }

    /// Edges with the smaller id first, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, n)| {
            let u = VertexId(u as u32);
            let from = n.partition_point(|&v| v < u);
            n[from..].iter().map(move |&v| Edge(u, v))
        })
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges().collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// `N_i(x) = N(x) ∩ V_i`.
    pub fn level_neighbourhood(&self, x: VertexId, i: usize) -> Result<Vec<VertexId>, GraphError> {
        self.level(i)?;
        let n = self.neighbourhood(x)?;
        Ok(n.iter()
            .copied()
            .filter(|&y| self.level_of[y.0 as usize] as usize == i)
            .collect())
    }

    /// Creation snapshot `V_j(x)`; `None` for level-0 vertices, vertices
    /// without a recorded snapshot, or `j` not below the vertex's level.
    pub fn snapshot(&self, x: VertexId, j: usize) -> Option<&[VertexId]> {
        self.snapshots.get(x.0 as usize)?.level(j)
    }

    /// Union of the creation snapshots, `V(x)`, sorted.
    pub fn snapshot_union(&self, x: VertexId) -> Vec<VertexId> {
        let mut all = self
            .snapshots
            .get(x.0 as usize)
            .map(|s| s.members[s.bounds[0] as usize..s.bounds[s.slots()] as usize].to_vec())
            .unwrap_or_default();
        all.sort_unstable();
        all
    }

    pub fn add_vertex(&mut self, id: VertexId, level: usize, label: String) -> Result<(), GraphError> {
        if level >= self.levels.len() {
            return Err(GraphError::LevelOutOfRange {
                level,
                top: self.levels.len().saturating_sub(1),
            });
        }
        if self.contains(id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        let slot = id.0 as usize;
        if slot >= self.level_of.len() {
            self.level_of.resize(slot + 1, ABSENT);
            self.adjacency.resize(slot + 1, Vec::new());
        }
        self.level_of[slot] = level as u32;
        self.labels.set(slot, &label);
        insert_sorted(&mut self.levels[level], id);
        self.vertex_count += 1;
        Ok(())
    }

    fn check_pair(&self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let lu = self.level_of(u)?;
        let lv = self.level_of(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if lu == lv {
            return Err(GraphError::IntraLevelEdge(u, v, lu));
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check_pair(u, v)?;
        let fresh = insert_sorted(&mut self.adjacency[u.0 as usize], v);
        insert_sorted(&mut self.adjacency[v.0 as usize], u);
        Ok(fresh)
    }

    /// Inserts every edge of `edges`, ignoring those already present.
    pub fn add_edges(&mut self, edges: &[Edge]) -> Result<(), GraphError> {
        for e in edges {
            self.check_pair(e.0, e.1)?;
        }
        let arcs = sorted_arcs(edges);
        for batch in arcs.chunk_by(|a, b| a.0 == b.0) {
            let n = &mut self.adjacency[batch[0].0 .0 as usize];
            if n.last().is_none_or(|&last| last < batch[0].1) {
                n.extend(batch.iter().map(|a| a.1));
            } else {
                *n = merge_sorted(n, batch.iter().map(|a| a.1));
            }
        }
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        if !self.contains(u) || !self.contains(v) {
            return false;
        }
        let removed = remove_sorted(&mut self.adjacency[u.0 as usize], v);
        if removed {
            remove_sorted(&mut self.adjacency[v.0 as usize], u);
        }
        removed
    }

    /// Removes every edge of `edges` that is present.
    pub fn remove_edges(&mut self, edges: &[Edge]) {
        let arcs = sorted_arcs(edges);
        for batch in arcs.chunk_by(|a, b| a.0 == b.0) {
            let Some(n) = self.adjacency.get_mut(batch[0].0 .0 as usize) else {
                continue;
            };
            let mut j = 0;
            n.retain(|y| {
                while j < batch.len() && batch[j].1 < *y {
                    j += 1;
                }
                !(j < batch.len() && batch[j].1 == *y)
            });
        }
    }

    /// Sets a snapshot explicitly; used when reading files.
    pub fn set_snapshot(&mut self, x: VertexId, j: usize, set: VertexSet) -> Result<(), GraphError> {
        let level = self.level_of(x)?;
        if j >= level {
            return Err(GraphError::BadSnapshot {
                vertex: x,
                level: j,
                reason: format!("vertex is at level {level}"),
            });
        }
        if let Some(bad) = set.iter().find(|&&y| self.level_of(y).ok() != Some(j)) {
            return Err(GraphError::BadSnapshot {
                vertex: x,
                level: j,
                reason: format!("member {bad} is not a level-{j} vertex"),
            });
        }
        let mut slots: Vec<Vec<VertexId>> = match self.snapshots.get(x.0 as usize) {
            Some(s) => (0..s.slots()).map(|i| s.level(i).unwrap_or_default().to_vec()).collect(),
            None => vec![Vec::new(); level],
        };
        slots[j] = set.into_iter().collect();
        self.snapshots.set(x.0 as usize, &slots);
        Ok(())
    }

    /// Records `N_j(x)` for every vertex `x` of the top level and every
    /// `j < top`. Lower-level snapshots are left as they are.
    pub fn record_snapshots(mut self) -> Self {
        if self.levels.len() < 2 {
            return self;
        }
        let top = self.top();
        let mut slots = vec![Vec::new(); top];
        for &x in &self.levels[top] {
            slots.iter_mut().for_each(Vec::clear);
            for &y in &self.adjacency[x.0 as usize] {
                slots[self.level_of[y.0 as usize] as usize].push(y);
            }
            self.snapshots.set(x.0 as usize, &slots);
        }
        self
    }

    /// Appends an empty level on top.
    pub fn push_level(&mut self) {
        self.levels.push(Vec::new());
    }

    /// Removes the top level with every vertex, edge and snapshot on it.
    pub fn pop_level(&mut self) -> Option<Vec<VertexId>> {
        let top = self.levels.pop()?;
        let mut touched: Vec<Edge> = Vec::new();
        for &x in &top {
            let slot = x.0 as usize;
            for &y in &self.adjacency[slot] {
                touched.push(Edge::new(x, y));
            }
        }
        self.remove_edges(&touched);
        for &x in &top {
            let slot = x.0 as usize;
            self.level_of[slot] = ABSENT;
            self.labels.clear(slot);
            self.adjacency[slot] = Vec::new();
            self.snapshots.clear(slot);
        }
        self.vertex_count -= top.len();
        while self.level_of.last() == Some(&ABSENT) {
            self.level_of.pop();
            self.adjacency.pop();
        }
        self.labels.truncate(self.level_of.len());
        self.snapshots.truncate(self.level_of.len());
        Some(top)
    }

    /// Checks the structural invariants: levels partition the vertex set, no
    /// intra-level edge, symmetric sorted adjacency, snapshots well-formed.
    pub fn validate(&self) -> Result<(), GraphError> {
        let total: usize = self.levels.iter().map(Vec::len).sum();
        if total != self.vertex_count || self.vertices().count() != total {
            return Err(GraphError::LevelCount {
                required: format!("{} vertices across levels", self.vertex_count),
                actual: total,
            });
        }
        for (i, level) in self.levels.iter().enumerate() {
            for &x in level {
                if self.level_of(x).ok() != Some(i) {
                    return Err(GraphError::UnknownVertex(x));
                }
            }
        }
        for u in self.vertices() {
            let lu = self.level_of(u)?;
            let n = &self.adjacency[u.0 as usize];
            if n.windows(2).any(|w| w[0] >= w[1]) {
                return Err(GraphError::UnknownVertex(u));
            }
            for &v in n {
                if u == v {
                    return Err(GraphError::SelfLoop(u));
                }
                if self.level_of(v)? == lu {
                    return Err(GraphError::IntraLevelEdge(u, v, lu));
                }
                if !self.has_edge(v, u) {
                    return Err(GraphError::UnknownVertex(v));
                }
            }
            if let Some(s) = self.snapshots.get(u.0 as usize) {
                if s.slots() != lu {
                    return Err(GraphError::BadSnapshot {
                        vertex: u,
                        level: lu,
                        reason: format!("{} snapshot slots", s.slots()),
                    });
                }
                for j in 0..s.slots() {
                    let members = s.level(j).unwrap_or_default();
                    if members.iter().any(|&y| self.level_of(y).ok() != Some(j)) {
                        return Err(GraphError::BadSnapshot {
                            vertex: u,
                            level: j,
                            reason: "member on the wrong level".into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

fn insert_sorted(v: &mut Vec<VertexId>, x: VertexId) -> bool {
    if v.last().is_none_or(|&last| last < x) {
        v.push(x);
        return true;
    }
    match v.binary_search(&x) {
        Ok(_) => false,
        Err(i) => {
            v.insert(i, x);
            true
        }
    }
}

fn remove_sorted(v: &mut Vec<VertexId>, x: VertexId) -> bool {
    match v.binary_search(&x) {
        Ok(i) => {
            v.remove(i);
            true
        }
        Err(_) => false,
    }
}

/// Both orientations of `edges`, grouped by source with sorted targets.
/// Both orientations of every edge, sorted and without repeats.
fn sorted_arcs(edges: &[Edge]) -> Vec<(VertexId, VertexId)> {
    let mut arcs: Vec<(VertexId, VertexId)> = Vec::with_capacity(edges.len() * 2);
    for e in edges {
        arcs.push((e.0, e.1));
        arcs.push((e.1, e.0));
    }
    sort_pairs(&mut arcs);
    arcs.dedup();
    arcs
}

/// Sorts and deduplicates an edge list.
pub fn sort_edges(edges: &mut Vec<Edge>) {
    let mut pairs: Vec<(VertexId, VertexId)> = edges.iter().map(|e| (e.0, e.1)).collect();
    sort_pairs(&mut pairs);
    pairs.dedup();
    *edges = pairs.into_iter().map(|(u, v)| Edge(u, v)).collect();
}

/// Lexicographic sort of id pairs; two counting passes for long inputs.
fn sort_pairs(pairs: &mut Vec<(VertexId, VertexId)>) {
    if pairs.len() < 4096 {
        pairs.sort_unstable();
        return;
    }
    let bound = pairs.iter().map(|p| p.0.max(p.1).0 as usize).max().unwrap_or(0) + 1;
    let by_second = counting_sort(pairs, bound, |p| p.1 .0 as usize);
    *pairs = counting_sort(&by_second, bound, |p| p.0 .0 as usize);
}

fn counting_sort<T: Copy>(items: &[T], bound: usize, key: impl Fn(&T) -> usize) -> Vec<T> {
    let mut starts = vec![0usize; bound + 1];
    for it in items {
        starts[key(it) + 1] += 1;
    }
    for i in 1..=bound {
        starts[i] += starts[i - 1];
    }
    let mut out = items.to_vec();
    for it in items {
        let slot = &mut starts[key(it)];
        out[*slot] = *it;
        *slot += 1;
    }
    out
}

fn merge_sorted(a: &[VertexId], b: impl Iterator<Item = VertexId>) -> Vec<VertexId> {
    let mut out = Vec::with_capacity(a.len() + b.size_hint().0);
    let mut i = 0;
    for y in b {
        while i < a.len() && a[i] < y {
            out.push(a[i]);
            i += 1;
        }
        if i < a.len() && a[i] == y {
            i += 1;
        }
        out.push(y);
    }
    out.extend_from_slice(&a[i..]);
    out
}
