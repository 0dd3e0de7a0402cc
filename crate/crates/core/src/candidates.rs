//! Maximal candidate bicliques for one factorising step.
//!
//! Let `k` be the level about to be created, so the upper vertices are
//! `V_{k-1}`. A candidate is a set `X = A ∪ B` with `A ⊆ V_{k-1}`, `|A| >= 2`
//! and `B = ⋂_{x∈A} N(x)`. The three modes filter candidates further:
//!
//! * weak: `|B| >= 2`;
//! * factor: `|B ∩ V_{k-2}| >= 2`;
//! * clean (`k >= 4`): factor, and all of `A` agree on `N_p` for
//!   `p ∈ {0} ∪ [2, k-3]`.
//!
//! Inclusion-comparable candidates have the same `B`, so the maximal ones are
//! exactly the formal concepts `(A, B)` of the upper-vs-lower incidence
//! relation with `A` closed. Both filters are monotone in `B`, which lets the
//! enumeration close pairwise neighbourhood intersections and prune as it
//! goes. Clean mode runs the same enumeration inside each class of upper
//! vertices with equal constrained neighbourhoods.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, MultipartiteGraph, VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Weak,
    Factor,
    Clean,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Weak, Mode::Factor, Mode::Clean];

    /// Smallest level index `k` this mode may create.
    pub fn min_new_level(self) -> usize {
        match self {
            Mode::Weak | Mode::Factor => 2,
            Mode::Clean => 4,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Weak => "weak",
            Mode::Factor => "factor",
            Mode::Clean => "clean",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weak" => Ok(Mode::Weak),
            "factor" => Ok(Mode::Factor),
            "clean" => Ok(Mode::Clean),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CandidateError {
    #[error("{mode} candidates create level k >= {min}, graph would create level {k}")]
    TooFewLevels { mode: Mode, min: usize, k: usize },
    #[error("brute force over {upper} upper vertices exceeds the limit of {limit}")]
    OracleGuard { upper: usize, limit: usize },
    #[error("live N_{level}({vertex}) differs from its creation snapshot")]
    SnapshotMismatch { vertex: VertexId, level: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A biclique `upper ∪ lower` with `lower` the common neighbourhood of
/// `upper`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Candidate {
    pub upper: VertexSet,
    pub lower: VertexSet,
}

impl Candidate {
    pub fn full_set(&self) -> VertexSet {
        self.upper.union(&self.lower).copied().collect()
    }

    fn sort_key(&self) -> (std::cmp::Reverse<usize>, Vec<VertexId>) {
        let full = self.full_set();
        (std::cmp::Reverse(full.len()), full.into_iter().collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateFamily {
    pub mode: Mode,
    /// Index of the level these candidates would create.
    pub k: usize,
    pub members: Vec<Candidate>,
}

impl CandidateFamily {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Full sets of the members, for set comparisons.
    pub fn full_sets(&self) -> BTreeSet<VertexSet> {
        self.members.iter().map(Candidate::full_set).collect()
    }
}

/// Upper bound on `|V_{k-1}|` accepted by [`brute_force_candidates`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

fn new_level(g: &MultipartiteGraph, mode: Mode) -> Result<usize, CandidateError> {
    let k = g.level_count();
    let min = mode.min_new_level();
    if k < min {
        return Err(CandidateError::TooFewLevels { mode, min, k });
    }
    Ok(k)
}

/// Levels whose neighbourhoods must agree in clean mode: `{0} ∪ [2, k-3]`.
fn clean_levels(k: usize) -> impl Iterator<Item = usize> {
    std::iter::once(0).chain(2..k.saturating_sub(2))
}

fn sort_members(members: &mut [Candidate]) {
    members.sort_by_cached_key(Candidate::sort_key);
}

/// Maximal elements of the weak family `V•_k`.
pub fn weak_candidates(g: &MultipartiteGraph) -> Result<CandidateFamily, CandidateError> {
    candidates(g, Mode::Weak)
}

/// Maximal elements of the factor family `V°_k`.
pub fn factor_candidates(g: &MultipartiteGraph) -> Result<CandidateFamily, CandidateError> {
    candidates(g, Mode::Factor)
}

/// Maximal elements of the clean family `V*_k`; needs `k >= 4`.
pub fn clean_candidates(g: &MultipartiteGraph) -> Result<CandidateFamily, CandidateError> {
    candidates(g, Mode::Clean)
}

pub fn candidates(g: &MultipartiteGraph, mode: Mode) -> Result<CandidateFamily, CandidateError> {
    let k = new_level(g, mode)?;
    let upper = g.level(k - 1)?;
    let below = k - 2;
    let mut members = Vec::new();
    match mode {
        Mode::Weak => {
            members = concepts(g, upper, None)?;
        }
        Mode::Factor => {
            members = concepts(g, upper, Some(below))?;
        }
        Mode::Clean => {
            for class in clean_classes(g, k)?.into_values() {
                if class.len() < 2 {
                    continue;
                }
                members.extend(concepts(g, &class, Some(below))?);
            }
        }
    }
    sort_members(&mut members);
    Ok(CandidateFamily { mode, k, members })
}

/// Partitions `V_{k-1}` by the tuple `(N_0, N_2, …, N_{k-3})`, checking each
/// live neighbourhood against the recorded creation snapshot.
fn clean_classes(
    g: &MultipartiteGraph,
    k: usize,
) -> Result<BTreeMap<Vec<Vec<VertexId>>, Vec<VertexId>>, CandidateError> {
    let mut classes: BTreeMap<Vec<Vec<VertexId>>, Vec<VertexId>> = BTreeMap::new();
    for &x in g.level(k - 1)? {
        let mut key = Vec::new();
        for p in clean_levels(k) {
            let live = g.level_neighbourhood(x, p)?;
            if let Some(snap) = g.snapshot(x, p) {
                if snap != live.as_slice() {
                    return Err(CandidateError::SnapshotMismatch { vertex: x, level: p });
                }
            }
            key.push(live);
        }
        classes.entry(key).or_default().push(x);
    }
    Ok(classes)
}

fn is_subset_bits(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn count_bits(a: &[u64], mask: &[u64]) -> u32 {
    a.iter().zip(mask).map(|(x, m)| (x & m).count_ones()).sum()
}

/// Concepts `(A, B)` over `uppers` with `|A| >= 2` and at least two members
/// of `B` on level `counted`, or anywhere when `counted` is `None`.
///
/// Neighbourhoods are encoded as bitsets over their union. The admissibility
/// test is monotone, so closing admissible pairwise intersections under
/// further intersection reaches every admissible concept.
fn concepts(
    g: &MultipartiteGraph,
    uppers: &[VertexId],
    counted: Option<usize>,
) -> Result<Vec<Candidate>, CandidateError> {
    let nbrs: Vec<&[VertexId]> = uppers
        .iter()
        .map(|&x| g.neighbourhood(x))
        .collect::<Result<_, _>>()?;
    let mut universe: Vec<VertexId> = nbrs.iter().flat_map(|n| n.iter().copied()).collect();
    universe.sort_unstable();
    universe.dedup();
    let words = universe.len().div_ceil(64).max(1);
    let to_bits = |members: &mut dyn Iterator<Item = VertexId>| {
        let mut bits = vec![0u64; words];
        for y in members {
            let i = universe.binary_search(&y).expect("member of the union");
            bits[i / 64] |= 1 << (i % 64);
        }
        bits
    };
    let rows: Vec<Vec<u64>> = nbrs.iter().map(|n| to_bits(&mut n.iter().copied())).collect();
    let mask = match counted {
        Some(level) => to_bits(
            &mut universe
                .iter()
                .copied()
                .filter(|&y| g.level_of(y).is_ok_and(|l| l == level)),
        ),
        None => vec![u64::MAX; words],
    };
    let admissible = |b: &[u64]| count_bits(b, &mask) >= 2;

    let mut seen: HashSet<Box<[u64]>> = HashSet::new();
    let mut work: Vec<Box<[u64]>> = Vec::new();
    let mut next = vec![0u64; words];
    let visit = |next: &[u64], seen: &mut HashSet<Box<[u64]>>, work: &mut Vec<Box<[u64]>>| {
        if admissible(next) && !seen.contains(next) {
            let b: Box<[u64]> = next.into();
            seen.insert(b.clone());
            work.push(b);
        }
    };
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            for (w, (a, b)) in next.iter_mut().zip(rows[i].iter().zip(&rows[j])) {
                *w = a & b;
            }
            visit(&next, &mut seen, &mut work);
        }
    }
    while let Some(b) = work.pop() {
        for row in &rows {
            if is_subset_bits(&b, row) {
                continue;
            }
            for (w, (a, r)) in next.iter_mut().zip(b.iter().zip(row)) {
                *w = a & r;
            }
            visit(&next, &mut seen, &mut work);
        }
    }

    Ok(seen
        .into_iter()
        .map(|b| {
            let upper = uppers
                .iter()
                .zip(&rows)
                .filter(|(_, row)| is_subset_bits(&b, row))
                .map(|(&x, _)| x)
                .collect();
            let lower = (0..universe.len())
                .filter(|&i| b[i / 64] & (1 << (i % 64)) != 0)
                .map(|i| universe[i])
                .collect();
            Candidate { upper, lower }
        })
        .collect())
}

/// Reference enumeration straight from the set definitions: every subset of
/// `V_{k-1}` with at least two members, filtered by the mode's conditions,
/// then reduced to its inclusion-maximal elements.
pub fn brute_force_candidates(
    g: &MultipartiteGraph,
    mode: Mode,
) -> Result<CandidateFamily, CandidateError> {
    let k = new_level(g, mode)?;
    let upper: Vec<VertexId> = g.level(k - 1)?.to_vec();
    if upper.len() > BRUTE_FORCE_LIMIT {
        return Err(CandidateError::OracleGuard {
            upper: upper.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let m = upper.len();
    let neighbours = |x: VertexId| -> Result<VertexSet, CandidateError> {
        Ok(g.neighbourhood(x)?.iter().copied().collect())
    };
    let on_level = |x: VertexId, p: usize| -> Result<VertexSet, CandidateError> {
        Ok(g.level_neighbourhood(x, p)?.into_iter().collect())
    };

    let mut elements: BTreeSet<VertexSet> = BTreeSet::new();
    for mask in 0u32..(1u32 << m) {
        if mask.count_ones() < 2 {
            continue;
        }
        let chosen: Vec<VertexId> = (0..m)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| upper[i])
            .collect();
        let mut common: Option<VertexSet> = None;
        for &x in &chosen {
            let n = neighbours(x)?;
            common = Some(match common {
                None => n,
                Some(c) => c.intersection(&n).copied().collect(),
            });
        }
        let common = common.expect("at least two chosen");
        if common.len() < 2 {
            continue;
        }
        if mode != Mode::Weak {
            let mut at_below: Option<VertexSet> = None;
            for &x in &chosen {
                let n = on_level(x, k - 2)?;
                at_below = Some(match at_below {
                    None => n,
                    Some(c) => c.intersection(&n).copied().collect(),
                });
            }
            if at_below.map_or(0, |s| s.len()) < 2 {
                continue;
            }
        }
        if mode == Mode::Clean {
            let mut agree = true;
            'pairs: for (i, &x) in chosen.iter().enumerate() {
                for &y in &chosen[i + 1..] {
                    for p in clean_levels(k) {
                        if on_level(x, p)? != on_level(y, p)? {
                            agree = false;
                            break 'pairs;
                        }
                    }
                }
            }
            if !agree {
                continue;
            }
        }
        elements.insert(chosen.into_iter().chain(common).collect());
    }

    let upper_set: VertexSet = upper.iter().copied().collect();
    let mut members: Vec<Candidate> = elements
        .iter()
        .filter(|x| !elements.iter().any(|y| y != *x && x.is_subset(y)))
        .map(|x| Candidate {
            upper: x.intersection(&upper_set).copied().collect(),
            lower: x.difference(&upper_set).copied().collect(),
        })
        .collect();
    sort_members(&mut members);
    Ok(CandidateFamily { mode, k, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cliques::clique_incidence;
    use crate::graph::fixtures::*;
    use crate::graph::Graph;

    fn ids(g: &Graph, labels: &str) -> VertexSet {
        labels
            .chars()
            .map(|c| g.vertex_by_label(&c.to_string()).unwrap())
            .collect()
    }

    #[test]
    fn diamond_has_one_weak_candidate() {
        let g = diamond();
        let b = clique_incidence(&g);
        let fam = weak_candidates(&b).unwrap();
        assert_eq!(fam.k, 2);
        assert_eq!(fam.len(), 1);
        let c = &fam.members[0];
        assert_eq!(c.upper, b.level(1).unwrap().iter().copied().collect::<VertexSet>());
        assert_eq!(c.lower, ids(&g, "bc"));
        assert_eq!(fam, brute_force_candidates(&b, Mode::Weak).unwrap());
        let factor = factor_candidates(&b).unwrap();
        assert_eq!(factor.members, fam.members);
    }

    #[test]
    fn bowtie_and_k3_have_none() {
        for g in [bowtie(), k3()] {
            let b = clique_incidence(&g);
            assert!(weak_candidates(&b).unwrap().is_empty());
            assert!(brute_force_candidates(&b, Mode::Weak).unwrap().is_empty());
            assert!(factor_candidates(&b).unwrap().is_empty());
        }
    }

    #[test]
    fn mode_level_requirements() {
        let b = clique_incidence(&diamond());
        assert_eq!(
            clean_candidates(&b),
            Err(CandidateError::TooFewLevels {
                mode: Mode::Clean,
                min: 4,
                k: 2
            })
        );
        let one = MultipartiteGraph::with_levels(1);
        assert!(matches!(
            weak_candidates(&one),
            Err(CandidateError::TooFewLevels { .. })
        ));
    }

    /// Tripartite graph: two level-2 vertices sharing two level-0 vertices
    /// but only one level-1 vertex.
    fn factor_excludes() -> MultipartiteGraph {
        let mut m = MultipartiteGraph::with_levels(3);
        for (id, level) in [(0, 0), (1, 0), (2, 1), (3, 1), (4, 1), (5, 2), (6, 2)] {
            m.add_vertex(VertexId(id), level, format!("v{id}")).unwrap();
        }
        for (u, v) in [(5, 0), (5, 1), (5, 2), (5, 3), (6, 0), (6, 1), (6, 2), (6, 4)] {
            m.add_edge(VertexId(u), VertexId(v)).unwrap();
        }
        m.record_snapshots()
    }

    #[test]
    fn factor_filter_drops_single_level_below_overlap() {
        let m = factor_excludes();
        let weak = weak_candidates(&m).unwrap();
        assert_eq!(weak.len(), 1);
        assert_eq!(
            weak.members[0].lower,
            VertexSet::from([VertexId(0), VertexId(1), VertexId(2)])
        );
        assert!(factor_candidates(&m).unwrap().is_empty());
        assert_eq!(weak, brute_force_candidates(&m, Mode::Weak).unwrap());
        assert!(brute_force_candidates(&m, Mode::Factor).unwrap().is_empty());
    }

    #[test]
    fn clean_needs_two_upper_vertices() {
        let mut m = MultipartiteGraph::with_levels(4);
        for (id, level) in [(0, 0), (1, 1), (2, 2), (3, 3)] {
            m.add_vertex(VertexId(id), level, format!("v{id}")).unwrap();
        }
        m.add_edge(VertexId(3), VertexId(2)).unwrap();
        let m = m.record_snapshots();
        assert!(clean_candidates(&m).unwrap().is_empty());
        assert!(brute_force_candidates(&m, Mode::Clean).unwrap().is_empty());
    }

    #[test]
    fn clean_at_k4_constrains_level_zero_only() {
        assert_eq!(clean_levels(4).collect::<Vec<_>>(), [0]);
        assert_eq!(clean_levels(5).collect::<Vec<_>>(), [0, 2]);
        assert_eq!(clean_levels(7).collect::<Vec<_>>(), [0, 2, 3, 4]);
    }

    #[test]
    fn brute_force_guard() {
        let mut m = MultipartiteGraph::with_levels(2);
        m.add_vertex(VertexId(0), 0, "a".into()).unwrap();
        for i in 1..=21 {
            m.add_vertex(VertexId(i), 1, format!("t{i}")).unwrap();
        }
        assert_eq!(
            brute_force_candidates(&m, Mode::Weak),
            Err(CandidateError::OracleGuard {
                upper: 21,
                limit: 20
            })
        );
    }

    #[test]
    fn mode_parsing() {
        for m in Mode::ALL {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!("strong".parse::<Mode>().is_err());
    }
}
