//! Reference implementations used as oracles by the integration tests. They
//! follow the set definitions directly and share no code with the library
//! beyond the graph containers.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cliquefactor::{Graph, Mode, MultipartiteGraph, VertexId, VertexSet};

pub fn labelled(g: &Graph, labels: &str) -> VertexSet {
    labels
        .chars()
        .map(|c| g.vertex_by_label(&c.to_string()).expect("known label"))
        .collect()
}

/// Graph whose edges are those of the given cliques, each written as a
/// string of one-character labels.
pub fn from_cliques(cliques: &[&str]) -> Graph {
    let mut edges = Vec::new();
    for clique in cliques {
        let cs: Vec<String> = clique.chars().map(String::from).collect();
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                edges.push((cs[i].clone(), cs[j].clone()));
            }
        }
    }
    let refs: Vec<(&str, &str)> = edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Graph::from_labelled([], refs).expect("valid edges")
}

pub fn diamond() -> Graph {
    Graph::from_edges(&[("a", "b"), ("a", "c"), ("b", "c"), ("b", "d"), ("c", "d")])
}

pub fn bowtie() -> Graph {
    from_cliques(&["abc", "cde"])
}

pub fn fix_chain() -> Graph {
    from_cliques(&["abcd", "abce", "abf"])
}

fn is_clique(g: &Graph, s: &[VertexId]) -> bool {
    s.iter()
        .enumerate()
        .all(|(i, &u)| s[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// Maximal cliques by testing every vertex subset; `n <= 16`.
pub fn subset_cliques(g: &Graph) -> BTreeSet<VertexSet> {
    let vs: Vec<VertexId> = g.vertices().collect();
    assert!(vs.len() <= 16, "subset oracle is exponential");
    let mut cliques: Vec<VertexSet> = Vec::new();
    for mask in 1u32..(1u32 << vs.len()) {
        let s: Vec<VertexId> = (0..vs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vs[i]).collect();
        if is_clique(g, &s) {
            cliques.push(s.into_iter().collect());
        }
    }
    cliques
        .iter()
        .filter(|c| !cliques.iter().any(|d| d.len() > c.len() && c.is_subset(d)))
        .cloned()
        .collect()
}

/// Maximal cliques by Bron–Kerbosch without pivoting.
pub fn bk_cliques(g: &Graph) -> BTreeSet<VertexSet> {
    fn extend(g: &Graph, r: &mut Vec<VertexId>, mut p: Vec<VertexId>, mut x: Vec<VertexId>, out: &mut BTreeSet<VertexSet>) {
        if p.is_empty() && x.is_empty() {
            out.insert(r.iter().copied().collect());
            return;
        }
        while let Some(v) = p.pop() {
            r.push(v);
            let np = p.iter().copied().filter(|&u| g.has_edge(u, v)).collect();
            let nx = x.iter().copied().filter(|&u| g.has_edge(u, v)).collect();
            extend(g, r, np, nx, out);
            r.pop();
            x.push(v);
        }
    }
    let mut out = BTreeSet::new();
    extend(g, &mut Vec::new(), g.vertices().collect(), Vec::new(), &mut out);
    out
}

/// All intersections of at least two distinct cliques, by subset
/// enumeration; at most 20 cliques.
pub fn subset_lattice(cliques: &[VertexSet]) -> BTreeSet<VertexSet> {
    assert!(cliques.len() <= 20, "subset oracle is exponential");
    let mut out = BTreeSet::new();
    for mask in 1u32..(1u32 << cliques.len()) {
        if mask.count_ones() < 2 {
            continue;
        }
        let mut it = (0..cliques.len()).filter(|i| mask >> i & 1 == 1);
        let first = cliques[it.next().unwrap()].clone();
        out.insert(it.fold(first, |acc, i| acc.intersection(&cliques[i]).copied().collect()));
    }
    out
}

/// Same family as [`subset_lattice`], as the fixpoint of meeting elements
/// with each other; for larger clique counts.
pub fn meet_closure(cliques: &[VertexSet]) -> BTreeSet<VertexSet> {
    let mut family: BTreeSet<VertexSet> = BTreeSet::new();
    for (i, a) in cliques.iter().enumerate() {
        for b in &cliques[i + 1..] {
            family.insert(a.intersection(b).copied().collect());
        }
    }
    loop {
        let items: Vec<VertexSet> = family.iter().cloned().collect();
        let before = family.len();
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                family.insert(a.intersection(b).copied().collect());
            }
        }
        if family.len() == before {
            return family;
        }
    }
}

/// `K(s)`, as clique positions.
pub fn support(cliques: &[VertexSet], s: &VertexSet) -> BTreeSet<usize> {
    (0..cliques.len()).filter(|&i| s.is_subset(&cliques[i])).collect()
}

/// Characterising sequences of every vertex at level >= 2 of `m`, resolved
/// by looking `F` up among the supports of the lattice elements and of the
/// cliques. `None` marks an entry with no matching element.
pub struct SeqOracle {
    pub cliques: Vec<VertexSet>,
    pub elements: BTreeSet<VertexSet>,
    pub nontrivial: Vec<VertexSet>,
    pub sequences: BTreeMap<VertexId, Vec<Option<VertexSet>>>,
}

impl SeqOracle {
    pub fn new(g: &Graph, m: &MultipartiteGraph) -> Self {
        let cliques: Vec<VertexSet> = bk_cliques(g).into_iter().collect();
        let elements = if cliques.len() <= 12 {
            subset_lattice(&cliques)
        } else {
            meet_closure(&cliques)
        };
        // A single shared clique resolves to the clique itself.
        let by_support: BTreeMap<BTreeSet<usize>, VertexSet> = elements
            .iter()
            .chain(&cliques)
            .map(|o| (support(&cliques, o), o.clone()))
            .collect();
        let set = |s: Option<&[VertexId]>| -> VertexSet { s.unwrap_or_default().iter().copied().collect() };
        let clique_of = |y: VertexId| -> usize {
            let members = set(m.snapshot(y, 0));
            cliques.iter().position(|c| *c == members).expect("level-1 vertex is a clique")
        };
        let everything = g.vertex_set();
        let mut sequences = BTreeMap::new();
        for k in 2..m.level_count() {
            for &x in m.level(k).unwrap() {
                let mut seq = vec![Some(set(m.snapshot(x, 0)))];
                for j in 2..k {
                    let mut shared: Option<BTreeSet<usize>> = None;
                    for &y in m.snapshot(x, j).unwrap_or_default() {
                        let ky: BTreeSet<usize> = m.snapshot(y, 1).unwrap_or_default().iter().map(|&c| clique_of(c)).collect();
                        shared = Some(match shared {
                            None => ky,
                            Some(s) => s.intersection(&ky).copied().collect(),
                        });
                    }
                    let shared = shared.unwrap_or_default();
                    seq.push(if shared.is_empty() {
                        Some(everything.clone())
                    } else {
                        by_support.get(&shared).cloned()
                    });
                }
                sequences.insert(x, seq);
            }
        }
        let nontrivial = elements.iter().filter(|o| o.len() >= 2).cloned().collect();
        SeqOracle {
            cliques,
            elements,
            nontrivial,
            sequences,
        }
    }

    pub fn in_o(&self, s: &VertexSet) -> bool {
        s.len() >= 2 && self.elements.contains(s)
    }

    /// Strict chains of `O` with `length` elements.
    pub fn chains(&self, length: usize) -> BTreeSet<Vec<VertexSet>> {
        fn grow(o: &[VertexSet], length: usize, path: &mut Vec<VertexSet>, out: &mut BTreeSet<Vec<VertexSet>>) {
            if path.len() == length {
                out.insert(path.clone());
                return;
            }
            for s in o {
                if path.last().is_none_or(|last| last.len() < s.len() && last.is_subset(s)) {
                    path.push(s.clone());
                    grow(o, length, path, out);
                    path.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        grow(&self.nontrivial, length, &mut Vec::new(), &mut out);
        out
    }

    /// Whether properties 1 to 3 hold at every level up to one past the
    /// top, and the vertices violating property 1.
    pub fn check(&self, m: &MultipartiteGraph) -> (bool, Vec<VertexId>) {
        let mut ok = true;
        let mut bad = Vec::new();
        let height = self.height();
        let max_k = (m.level_count().saturating_sub(1)).max(height + 1).max(2);
        for k in 2..=max_k {
            let mut seen: BTreeMap<Vec<VertexSet>, VertexId> = BTreeMap::new();
            for &x in m.level(k).unwrap_or_default() {
                let seq = &self.sequences[&x];
                let Some(seq) = seq.iter().cloned().collect::<Option<Vec<VertexSet>>>() else {
                    ok = false;
                    bad.push(x);
                    continue;
                };
                let strict = seq.windows(2).all(|w| w[0].len() < w[1].len() && w[0].is_subset(&w[1]));
                let inner = k < 3 || seq[1..(k - 2).max(2)].iter().all(|o| self.in_o(o));
                if !(strict && inner) {
                    ok = false;
                    bad.push(x);
                }
                if seen.insert(seq, x).is_some() {
                    ok = false;
                }
            }
            for chain in self.chains(k - 1) {
                if !seen.contains_key(&chain) {
                    ok = false;
                }
            }
        }
        (ok, bad)
    }

    /// Number of elements in a longest strict chain of `O`.
    pub fn height(&self) -> usize {
        let mut o = self.nontrivial.clone();
        o.sort_by_key(VertexSet::len);
        let mut longest = vec![1usize; o.len()];
        for i in 0..o.len() {
            for j in 0..i {
                if o[j].len() < o[i].len() && o[j].is_subset(&o[i]) {
                    longest[i] = longest[i].max(longest[j] + 1);
                }
            }
        }
        longest.into_iter().max().unwrap_or(0)
    }
}

/// `4 · min(k·2^c·c!, 2^k·k!) · n`, saturating.
pub fn size_bound(k: u32, c: u32, n: u32) -> u128 {
    let fact = |m: u32| (1..=m as u128).try_fold(1u128, |acc, i| acc.checked_mul(i));
    let pow2 = |m: u32| 1u128.checked_shl(m).filter(|_| m < 127);
    let by_clique = pow2(c)
        .zip(fact(c))
        .and_then(|(p, f)| p.checked_mul(f))
        .and_then(|v| v.checked_mul(k as u128));
    let by_support = pow2(k).zip(fact(k)).and_then(|(p, f)| p.checked_mul(f));
    let inner = match (by_clique, by_support) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    inner
        .and_then(|v| v.checked_mul(4 * n as u128))
        .unwrap_or(u128::MAX)
}

/// Largest number of cliques through one vertex, and largest clique size.
pub fn clique_stats(g: &Graph, cliques: &BTreeSet<VertexSet>) -> (usize, usize) {
    let k = g
        .vertices()
        .map(|v| cliques.iter().filter(|c| c.contains(&v)).count())
        .max()
        .unwrap_or(0);
    let c = cliques.iter().map(VertexSet::len).max().unwrap_or(0);
    (k, c)
}

/// Maximal candidate full sets for creating level `m.level_count()`, from
/// the definitions: every subset `A` of the top level with `|A| >= 2`,
/// `B` its common neighbourhood, filtered by the mode, then the maximal
/// sets `A ∪ B`.
pub fn candidate_sets(m: &MultipartiteGraph, mode: Mode) -> BTreeSet<VertexSet> {
    let k = m.level_count();
    let upper: Vec<VertexId> = m.level(k - 1).unwrap().to_vec();
    assert!(upper.len() <= 16, "subset oracle is exponential");
    let at = |x: VertexId, p: usize| -> VertexSet {
        m.neighbourhood(x)
            .unwrap()
            .iter()
            .copied()
            .filter(|&y| m.level_of(y).unwrap() == p)
            .collect()
    };
    let mut family: Vec<VertexSet> = Vec::new();
    for mask in 0u32..(1u32 << upper.len()) {
        if mask.count_ones() < 2 {
            continue;
        }
        let a: Vec<VertexId> = (0..upper.len()).filter(|i| mask >> i & 1 == 1).map(|i| upper[i]).collect();
        let b: VertexSet = m
            .vertices()
            .filter(|&y| a.iter().all(|&x| m.has_edge(x, y)))
            .collect();
        if b.len() < 2 {
            continue;
        }
        if mode != Mode::Weak && b.iter().filter(|&&y| m.level_of(y).unwrap() == k - 2).count() < 2 {
            continue;
        }
        if mode == Mode::Clean {
            let levels: Vec<usize> = std::iter::once(0).chain(2..k.saturating_sub(2)).collect();
            if !a.iter().all(|&x| levels.iter().all(|&p| at(x, p) == at(a[0], p))) {
                continue;
            }
        }
        family.push(a.into_iter().chain(b).collect());
    }
    family
        .iter()
        .filter(|s| !family.iter().any(|t| t.len() > s.len() && s.is_subset(t)))
        .cloned()
        .collect()
}
