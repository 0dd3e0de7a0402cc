//! Intersections of maximal cliques and the characterising sequences of
//! clean-series vertices.
//!
//! `O'` is the family of sets that are the intersection of at least two
//! distinct maximal cliques; `O` keeps those with at least two vertices.
//! `K(O)` is the set of maximal cliques containing `O`. A vertex `x` at level
//! `k >= 2` of a clean series is characterised by a strictly increasing
//! sequence `(O_1(x), …, O_{k-1}(x))`, and each level is in bijection with
//! the strict chains of `O` of length `k - 1`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::candidates::Mode;
use crate::cliques::{maximal_cliques, CliqueSet};
use crate::graph::{Graph, GraphError, MultipartiteGraph, VertexId, VertexSet};
use crate::series::SeriesRun;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("vertex {vertex} is at level {level}; characterising sequences start at level 2")]
    LevelTooLow { vertex: VertexId, level: usize },
    #[error("characterising sequences are defined on clean runs, got a {0} run")]
    NotClean(Mode),
    #[error("level-1 vertex {0} does not correspond to a maximal clique")]
    UnknownClique(VertexId),
    #[error("vertex {vertex} has an empty creation neighbourhood at level {level}")]
    EmptySnapshot { vertex: VertexId, level: usize },
    #[error("no element of O' has K(O) equal to the cliques shared at level {level} by vertex {vertex}")]
    Unresolved { vertex: VertexId, level: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Clique indices, positions in [`IntersectionFamily::cliques`].
pub type CliqueIds = BTreeSet<usize>;

#[derive(Clone, Debug)]
pub struct IntersectionFamily {
    vertices: VertexSet,
    cliques: Vec<VertexSet>,
    clique_index: BTreeMap<VertexSet, usize>,
    /// `O'`, sorted.
    elements: BTreeSet<VertexSet>,
    /// `K(O)` for every `O ∈ O'`.
    supports: BTreeMap<VertexSet, CliqueIds>,
    /// `O`, sorted.
    nontrivial: Vec<VertexSet>,
    /// For each position in `nontrivial`, the positions of its strict
    /// supersets in `O`.
    above: Vec<Vec<usize>>,
    /// Covering pairs of `O` under inclusion, by position.
    hasse: Vec<(usize, usize)>,
    height: usize,
}

/// `O'`, `O`, `K(·)` and the inclusion order over `O` for the maximal cliques
/// of `g`. `O'` is built by closing the pairwise intersections under
/// intersection with further cliques.
pub fn intersection_family(g: &Graph) -> IntersectionFamily {
    IntersectionFamily::from_cliques(g.vertex_set(), &maximal_cliques(g))
}

impl IntersectionFamily {
    pub fn from_cliques(vertices: VertexSet, cs: &CliqueSet) -> Self {
        let cliques = cs.cliques().to_vec();
        let mut elements: BTreeSet<VertexSet> = BTreeSet::new();
        let mut work = Vec::new();
        for (i, a) in cliques.iter().enumerate() {
            for b in &cliques[i + 1..] {
                let o: VertexSet = a.intersection(b).copied().collect();
                if elements.insert(o.clone()) {
                    work.push(o);
                }
            }
        }
        while let Some(o) = work.pop() {
            for c in &cliques {
                if o.is_subset(c) {
                    continue;
                }
                let next: VertexSet = o.intersection(c).copied().collect();
                if elements.insert(next.clone()) {
                    work.push(next);
                }
            }
        }

        let supports: BTreeMap<VertexSet, CliqueIds> = elements
            .iter()
            .map(|o| {
                let k = cliques
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| o.is_subset(c))
                    .map(|(i, _)| i)
                    .collect();
                (o.clone(), k)
            })
            .collect();

        let nontrivial: Vec<VertexSet> = elements.iter().filter(|o| o.len() >= 2).cloned().collect();
        let above: Vec<Vec<usize>> = nontrivial
            .iter()
            .map(|a| {
                nontrivial
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| b.len() > a.len() && a.is_subset(b))
                    .map(|(j, _)| j)
                    .collect()
            })
            .collect();
        let hasse = above
            .iter()
            .enumerate()
            .flat_map(|(i, ups)| {
                ups.iter()
                    .filter(|&&j| !ups.iter().any(|&m| above[m].contains(&j)))
                    .map(move |&j| (i, j))
            })
            .collect();

        // longest chain, processing by increasing size
        let mut order: Vec<usize> = (0..nontrivial.len()).collect();
        order.sort_by_key(|&i| nontrivial[i].len());
        let mut longest = vec![1usize; nontrivial.len()];
        for &i in &order {
            for &j in &above[i] {
                longest[j] = longest[j].max(longest[i] + 1);
            }
        }
        let height = longest.into_iter().max().unwrap_or(0);

        let clique_index = cliques.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        IntersectionFamily {
            vertices,
            cliques,
            clique_index,
            elements,
            supports,
            nontrivial,
            above,
            hasse,
            height,
        }
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn cliques(&self) -> &[VertexSet] {
        &self.cliques
    }

    pub fn clique_position(&self, c: &VertexSet) -> Option<usize> {
        self.clique_index.get(c).copied()
    }

    /// `O'`.
    pub fn elements(&self) -> &BTreeSet<VertexSet> {
        &self.elements
    }

    /// `O`.
    pub fn nontrivial(&self) -> &[VertexSet] {
        &self.nontrivial
    }

    pub fn is_nontrivial(&self, o: &VertexSet) -> bool {
        o.len() >= 2 && self.elements.contains(o)
    }

    /// `K(O)` for `O ∈ O'`.
    pub fn support(&self, o: &VertexSet) -> Option<&CliqueIds> {
        self.supports.get(o)
    }

    /// `K(S)` for an arbitrary vertex set.
    pub fn cliques_containing(&self, s: &VertexSet) -> CliqueIds {
        self.cliques
            .iter()
            .enumerate()
            .filter(|(_, c)| s.is_subset(c))
            .map(|(i, _)| i)
            .collect()
    }

    /// The family `C = {K(O) : O ∈ O'}`.
    pub fn clique_families(&self) -> BTreeSet<CliqueIds> {
        self.supports.values().cloned().collect()
    }

    /// Covering pairs `(lower, upper)` of `O`.
    pub fn hasse(&self) -> impl Iterator<Item = (&VertexSet, &VertexSet)> {
        self.hasse
            .iter()
            .map(|&(i, j)| (&self.nontrivial[i], &self.nontrivial[j]))
    }

    /// Number of elements in a longest strict chain of `O`.
    pub fn height(&self) -> usize {
        self.height
    }
}

/// All strictly increasing tuples of `O` with `length` elements, in
/// lexicographic order of positions.
pub fn chains(fam: &IntersectionFamily, length: usize) -> Vec<Vec<VertexSet>> {
    let mut out = Vec::new();
    for_each_chain(fam, length, |path| {
        out.push(path.iter().map(|&i| fam.nontrivial[i].clone()).collect());
    });
    out
}

/// Calls `f` with the positions of every strict chain of `O` of `length`.
fn for_each_chain(fam: &IntersectionFamily, length: usize, mut f: impl FnMut(&[usize])) {
    if length == 0 {
        return;
    }
    let mut path = Vec::with_capacity(length);
    for start in 0..fam.nontrivial.len() {
        path.push(start);
        extend_chain(fam, length, &mut path, &mut f);
        path.pop();
    }
}

fn extend_chain(
    fam: &IntersectionFamily,
    length: usize,
    path: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if path.len() == length {
        f(path);
        return;
    }
    let last = *path.last().expect("non-empty");
    for &next in &fam.above[last] {
        path.push(next);
        extend_chain(fam, length, path, f);
        path.pop();
    }
}

/// `S(x) = (O_1(x), …, O_{k-1}(x))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSeq {
    pub vertex: VertexId,
    pub level: usize,
    pub sequence: Vec<VertexSet>,
    /// `sentinel[j]` is set when entry `j` stands for `V(G)` because the
    /// shared clique family was empty.
    pub sentinel: Vec<bool>,
}

/// Characterising sequence of `x` in the terminal graph of a clean run.
pub fn characterising_sequence(
    run: &SeriesRun,
    fam: &IntersectionFamily,
    x: VertexId,
) -> Result<CharSeq, LatticeError> {
    if run.mode != Mode::Clean {
        return Err(LatticeError::NotClean(run.mode));
    }
    let m = run.final_graph();
    let mut resolver = Resolver::new(m, fam)?;
    resolver.sequence(x)
}

fn to_set(s: Option<&[VertexId]>) -> VertexSet {
    s.unwrap_or_default().iter().copied().collect()
}

/// Clique families as bitsets over clique positions.
type Bits = Vec<u64>;

/// Resolves `O_j` from creation snapshots. Vertex sets are interned so that
/// sequences compare as id tuples; `K(·)` and `F` are memoised per vertex
/// and per family.
struct Resolver<'a> {
    graph: &'a MultipartiteGraph,
    fam: &'a IntersectionFamily,
    words: usize,
    /// Clique position of each level-1 vertex, by vertex id.
    clique_of: Vec<Option<usize>>,
    resolved: HashMap<Bits, Option<(u32, bool)>>,
    sets: Vec<VertexSet>,
    set_ids: HashMap<VertexSet, u32>,
    nontrivial: Vec<bool>,
}

impl<'a> Resolver<'a> {
    fn new(graph: &'a MultipartiteGraph, fam: &'a IntersectionFamily) -> Result<Self, LatticeError> {
        let mut clique_of = vec![None; graph.next_id().0 as usize];
        if graph.level_count() > 1 {
            for &y in graph.level(1)? {
                let members = to_set(Some(
                    graph.snapshot(y, 0).ok_or(LatticeError::UnknownClique(y))?,
                ));
                let pos = fam
                    .clique_position(&members)
                    .ok_or(LatticeError::UnknownClique(y))?;
                clique_of[y.0 as usize] = Some(pos);
            }
        }
        Ok(Resolver {
            graph,
            fam,
            words: fam.cliques().len().div_ceil(64),
            clique_of,
            resolved: HashMap::new(),
            sets: Vec::new(),
            set_ids: HashMap::new(),
            nontrivial: Vec::new(),
        })
    }

    fn intern(&mut self, s: VertexSet) -> u32 {
        if let Some(&id) = self.set_ids.get(&s) {
            return id;
        }
        let id = self.sets.len() as u32;
        self.nontrivial.push(self.fam.is_nontrivial(&s));
        self.sets.push(s.clone());
        self.set_ids.insert(s, id);
        id
    }

    fn to_bits(&self, ids: impl IntoIterator<Item = usize>) -> Bits {
        let mut bits = vec![0u64; self.words];
        for i in ids {
            bits[i / 64] |= 1 << (i % 64);
        }
        bits
    }

    fn from_bits(bits: &[u64]) -> CliqueIds {
        let mut out = CliqueIds::new();
        for (w, &word) in bits.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                out.insert(w * 64 + rest.trailing_zeros() as usize);
                rest &= rest - 1;
            }
        }
        out
    }

    /// The cliques named by the level-1 creation neighbourhood of `y`.
    fn cliques_bits(&mut self, y: VertexId) -> Result<Bits, LatticeError> {
        let snap = self
            .graph
            .snapshot(y, 1)
            .ok_or(LatticeError::EmptySnapshot { vertex: y, level: 1 })?;
        let mut bits = vec![0u64; self.words];
        for c in snap {
            let i = self
                .clique_of
                .get(c.0 as usize)
                .copied()
                .flatten()
                .ok_or(LatticeError::UnknownClique(*c))?;
            bits[i / 64] |= 1 << (i % 64);
        }
        Ok(bits)
    }

    fn cliques_of(&mut self, y: VertexId) -> Result<CliqueIds, LatticeError> {
        Ok(Self::from_bits(&self.cliques_bits(y)?))
    }

    /// `O` with `K(O) = shared`, or `V(G)` when `shared` is empty; `None` if
    /// no such `O` exists. Returns the interned id and the sentinel flag.
    fn resolve(&mut self, shared: Bits) -> Option<(u32, bool)> {
        if let Some(&r) = self.resolved.get(&shared) {
            return r;
        }
        let r = if shared.iter().all(|&w| w == 0) {
            Some((self.intern(self.fam.vertices().clone()), true))
        } else {
            let ids = Self::from_bits(&shared);
            let mut it = ids.iter().map(|&i| &self.fam.cliques()[i]);
            let first = it.next().expect("non-empty").clone();
            let o: VertexSet = it.fold(first, |acc, c| acc.intersection(c).copied().collect());
            let support = self.to_bits(self.fam.cliques_containing(&o));
            (support == shared).then(|| (self.intern(o), false))
        };
        self.resolved.insert(shared, r);
        r
    }

    fn sequence_ids(&mut self, x: VertexId) -> Result<(Vec<u32>, Vec<bool>), LatticeError> {
        let level = self.graph.level_of(x)?;
        if level < 2 {
            return Err(LatticeError::LevelTooLow { vertex: x, level });
        }
        let graph = self.graph;
        let mut sequence = vec![self.intern(to_set(graph.snapshot(x, 0)))];
        let mut sentinel = vec![false];
        for j in 2..level {
            let below = graph.snapshot(x, j).unwrap_or_default();
            if below.is_empty() {
                return Err(LatticeError::EmptySnapshot { vertex: x, level: j });
            }
            let mut shared = self.cliques_bits(below[0])?;
            for &y in &below[1..] {
                let k = self.cliques_bits(y)?;
                shared.iter_mut().zip(&k).for_each(|(a, b)| *a &= b);
            }
            let (id, s) = self
                .resolve(shared)
                .ok_or(LatticeError::Unresolved { vertex: x, level: j })?;
            sequence.push(id);
            sentinel.push(s);
        }
        Ok((sequence, sentinel))
    }

    fn sequence(&mut self, x: VertexId) -> Result<CharSeq, LatticeError> {
        let (ids, sentinel) = self.sequence_ids(x)?;
        Ok(CharSeq {
            vertex: x,
            level: self.graph.level_of(x)?,
            sequence: ids.iter().map(|&i| self.sets[i as usize].clone()).collect(),
            sentinel,
        })
    }
}

/// A property outcome with witnesses for failures.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Check {
    pub pass: bool,
    pub checked: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check {
            pass: true,
            checked: 0,
            witnesses: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.pass = false;
            if self.witnesses.len() < 20 {
                self.witnesses.push(witness());
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub k: usize,
    pub vertices: usize,
    /// Strict inclusions, with the inner entries in `O`.
    pub strict_chain: Check,
    /// Distinct vertices have distinct sequences.
    pub injective: Check,
    /// Every strict chain of `O` of length `k - 1` is some `S(x)`.
    pub surjective: Check,
    /// Informational: sequences whose first or last entry is outside `O`.
    pub endpoints_outside_o: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CharSeqReport {
    pub pass: bool,
    pub height: usize,
    pub levels: Vec<LevelReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

fn show(m: &MultipartiteGraph, s: &VertexSet) -> String {
    let names: Vec<&str> = s.iter().map(|&v| m.label(v).unwrap_or("?")).collect();
    format!("{{{}}}", names.join(","))
}

fn show_seq(m: &MultipartiteGraph, seq: &[VertexSet]) -> String {
    let parts: Vec<String> = seq.iter().map(|s| show(m, s)).collect();
    format!("({})", parts.join(","))
}

fn strictly_includes(a: &VertexSet, b: &VertexSet) -> bool {
    a.len() < b.len() && a.is_subset(b)
}

/// Checks, for every level `k >= 2` of the terminal graph of a clean run and
/// one past it: strict increase of every `S(x)` with inner entries in `O`,
/// injectivity of `S` on `V_k`, and that every strict chain of `O` of length
/// `k - 1` is realised on `V_k`.
pub fn verify_charseq_theorem(run: &SeriesRun, fam: &IntersectionFamily) -> CharSeqReport {
    let mut report = CharSeqReport {
        pass: true,
        height: fam.height(),
        levels: Vec::new(),
        errors: Vec::new(),
    };
    if run.mode != Mode::Clean {
        report.pass = false;
        report.errors.push(LatticeError::NotClean(run.mode).to_string());
        return report;
    }
    let m = run.final_graph();
    let mut resolver = match Resolver::new(m, fam) {
        Ok(r) => r,
        Err(e) => {
            report.pass = false;
            report.errors.push(e.to_string());
            return report;
        }
    };
    let chain_ids: Vec<u32> = fam.nontrivial().iter().map(|o| resolver.intern(o.clone())).collect();
    let mut includes: HashMap<(u32, u32), bool> = HashMap::new();

    let max_k = m.level_count().saturating_sub(1).max(fam.height() + 1).max(2);
    for k in 2..=max_k {
        let level: Vec<VertexId> = m.level(k).map(<[_]>::to_vec).unwrap_or_default();
        let mut strict = Check::new();
        let mut injective = Check::new();
        let mut surjective = Check::new();
        let mut outside = 0;
        let mut seen: HashMap<Vec<u32>, VertexId> = HashMap::with_capacity(level.len());

        for &x in &level {
            let seq = match resolver.sequence_ids(x) {
                Ok((seq, _)) => seq,
                Err(e) => {
                    report.errors.push(e.to_string());
                    strict.record(false, || format!("{}: {e}", m.label(x).unwrap_or("?")));
                    continue;
                }
            };
            let sets = &resolver.sets;
            let show_ids = |seq: &[u32]| {
                let parts: Vec<String> = seq.iter().map(|&i| show(m, &sets[i as usize])).collect();
                format!("({})", parts.join(","))
            };
            let increasing = seq.windows(2).all(|w| {
                *includes
                    .entry((w[0], w[1]))
                    .or_insert_with(|| strictly_includes(&sets[w[0] as usize], &sets[w[1] as usize]))
            });
            let nontrivial = &resolver.nontrivial;
            let inner_ok = match k {
                2 => true,
                3 => nontrivial[seq[1] as usize],
                _ => seq[1..k - 2].iter().all(|&o| nontrivial[o as usize]),
            };
            strict.record(increasing && inner_ok, || {
                format!("{} -> {}", m.label(x).unwrap_or("?"), show_ids(&seq))
            });
            if !nontrivial[seq[0] as usize] || !nontrivial[seq[seq.len() - 1] as usize] {
                outside += 1;
            }
            let prior = seen.insert(seq.clone(), x);
            injective.record(prior.is_none(), || {
                format!(
                    "{} and {} share {}",
                    prior.and_then(|p| m.label(p)).unwrap_or("?"),
                    m.label(x).unwrap_or("?"),
                    show_ids(&seq)
                )
            });
        }
        let mut key = Vec::with_capacity(k - 1);
        for_each_chain(fam, k - 1, |path| {
            key.clear();
            key.extend(path.iter().map(|&i| chain_ids[i]));
            surjective.record(seen.contains_key(&key), || {
                let sets: Vec<VertexSet> = path.iter().map(|&i| fam.nontrivial[i].clone()).collect();
                format!("unrealised {}", show_seq(m, &sets))
            });
        });

        report.pass &= strict.pass && injective.pass && surjective.pass;
        report.levels.push(LevelReport {
            k,
            vertices: level.len(),
            strict_chain: strict,
            injective,
            surjective,
            endpoints_outside_o: outside,
        });
    }
    report.pass &= report.errors.is_empty();
    report
}

/// Checks that `x ↦ V_0(x)` is a bijection from `V_2` onto `O` and that
/// `V_1(x) = K(V_0(x))`.
pub fn verify_level_two_bijection(m: &MultipartiteGraph, fam: &IntersectionFamily) -> Check {
    let mut check = Check::new();
    let mut resolver = match Resolver::new(m, fam) {
        Ok(r) => r,
        Err(e) => {
            check.record(false, || e.to_string());
            return check;
        }
    };
    let level: Vec<VertexId> = m
        .level(2)
        .map(|l| l.to_vec())
        .unwrap_or_default();
    let mut image: BTreeSet<VertexSet> = BTreeSet::new();
    for &x in &level {
        let v0 = to_set(m.snapshot(x, 0));
        let fresh = image.insert(v0.clone());
        check.record(fresh, || format!("{} repeats V_0 {}", m.label(x).unwrap_or("?"), show(m, &v0)));
        check.record(fam.is_nontrivial(&v0), || {
            format!("{} has V_0 {} outside O", m.label(x).unwrap_or("?"), show(m, &v0))
        });
        let v1 = resolver.cliques_of(x);
        let expected = fam.cliques_containing(&v0);
        check.record(v1.as_ref().is_ok_and(|v| *v == expected), || {
            format!("{} has V_1 != K(V_0)", m.label(x).unwrap_or("?"))
        });
    }
    for o in fam.nontrivial() {
        check.record(image.contains(o), || format!("{} has no level-2 vertex", show(m, o)));
    }
    check
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SizeBoundReport {
    /// Largest number of maximal cliques containing one vertex.
    pub max_cliques_per_vertex: usize,
    /// Largest maximal clique.
    pub max_clique_size: usize,
    pub n: usize,
    /// `4 · min(k·2^c·c!, 2^k·k!) · n`, in decimal.
    pub bound: String,
    pub vertices: usize,
    pub pass: bool,
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i))
}

fn pow2(n: usize) -> BigUint {
    BigUint::from(1u32) << n
}

/// Bound on the terminal graph size from the clique statistics of `g`.
pub fn size_bound_value(k: usize, c: usize, n: usize) -> BigUint {
    let by_clique = BigUint::from(k) * pow2(c) * factorial(c);
    let by_support = pow2(k) * factorial(k);
    BigUint::from(4u32) * by_clique.min(by_support) * BigUint::from(n)
}

pub fn size_bound(g: &Graph, m: &MultipartiteGraph) -> SizeBoundReport {
    let cs = maximal_cliques(g);
    let k = cs.max_per_vertex();
    let c = cs.max_size();
    let n = g.vertex_count();
    let bound = size_bound_value(k, c, n);
    let vertices = m.vertex_count();
    SizeBoundReport {
        max_cliques_per_vertex: k,
        max_clique_size: c,
        n,
        pass: BigUint::from(vertices) <= bound,
        bound: bound.to_string(),
        vertices,
    }
}
