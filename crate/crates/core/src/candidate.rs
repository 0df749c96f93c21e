//! Candidate sets, the candidate structure, and the dynamic equivalences
//! defined on top of them.
//!
//! The candidate structure is the directed graph whose vertices are the
//! pairs `(u, c)` with `c` a candidate of template vertex `u`, and whose arcs
//! `(u1, c1) -> (u2, c2)` exist exactly when `u1 -> u2` is a template edge
//! that `c1 -> c2` dominates in the world. [`CandidateStructure`] builds it
//! explicitly for small instances; the search uses the `*_implicit`
//! functions, which read the same relation straight off the two graphs and
//! the candidate bitsets.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::equivalence::equivalent_unchecked;
use crate::error::{Error, Result};
use crate::graph::{dominates, Graph, GraphBuilder, Problem};

/// For each template vertex `u`, the world vertices `u` may still map to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSets {
    sets: Vec<FixedBitSet>,
    world_n: usize,
}

impl CandidateSets {
    /// Every world vertex is a candidate of every template vertex.
    pub fn full(template_n: usize, world_n: usize) -> Self {
        let mut all = FixedBitSet::with_capacity(world_n);
        all.insert_range(..);
        CandidateSets { sets: vec![all; template_n], world_n }
    }

    pub fn empty(template_n: usize, world_n: usize) -> Self {
        CandidateSets { sets: vec![FixedBitSet::with_capacity(world_n); template_n], world_n }
    }

    pub fn from_lists(world_n: usize, lists: &[Vec<usize>]) -> Self {
        let mut cs = Self::empty(lists.len(), world_n);
        for (u, l) in lists.iter().enumerate() {
            for &c in l {
                cs.insert(u, c);
            }
        }
        cs
    }

    pub fn template_count(&self) -> usize {
        self.sets.len()
    }

    pub fn world_count(&self) -> usize {
        self.world_n
    }

    pub fn get(&self, u: usize) -> &FixedBitSet {
        &self.sets[u]
    }

    pub(crate) fn get_mut(&mut self, u: usize) -> &mut FixedBitSet {
        &mut self.sets[u]
    }

    pub fn contains(&self, u: usize, c: usize) -> bool {
        self.sets[u].contains(c)
    }

    pub fn insert(&mut self, u: usize, c: usize) {
        self.sets[u].insert(c);
    }

    /// Removes `c` from `C[u]`, returning whether it was present.
    pub fn remove(&mut self, u: usize, c: usize) -> bool {
        let was = self.sets[u].contains(c);
        self.sets[u].set(c, false);
        was
    }

    pub fn len(&self, u: usize) -> usize {
        self.sets[u].count_ones(..)
    }

    pub fn is_empty(&self, u: usize) -> bool {
        self.sets[u].is_clear()
    }

    pub fn iter(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.sets[u].ones()
    }

    pub fn to_vec(&self, u: usize) -> Vec<usize> {
        self.iter(u).collect()
    }

    pub fn set_singleton(&mut self, u: usize, c: usize) {
        self.sets[u].clear();
        self.sets[u].insert(c);
    }

    /// Total number of `(u, c)` pairs.
    pub fn pair_count(&self) -> usize {
        (0..self.sets.len()).map(|u| self.len(u)).sum()
    }

    /// `true` when `self` is pointwise a subset of `other`.
    pub fn is_subset(&self, other: &CandidateSets) -> bool {
        self.sets.iter().zip(&other.sets).all(|(a, b)| a.is_subset(b))
    }
}

/// Template-to-world assignments in the order they were made.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialMatch {
    pairs: Vec<(usize, usize)>,
}

impl PartialMatch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        PartialMatch { pairs: pairs.into_iter().collect() }
    }

    pub fn push(&mut self, u: usize, w: usize) {
        debug_assert!(!self.contains_template(u) && !self.contains_world(w));
        self.pairs.push((u, w));
    }

    pub fn pop(&mut self) -> Option<(usize, usize)> {
        self.pairs.pop()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn image(&self, u: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == u).map(|p| p.1)
    }

    pub fn contains_template(&self, u: usize) -> bool {
        self.pairs.iter().any(|p| p.0 == u)
    }

    pub fn contains_world(&self, w: usize) -> bool {
        self.pairs.iter().any(|p| p.1 == w)
    }
}

/// A set of template vertices touching every template edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCover {
    vertices: Vec<usize>,
}

impl NodeCover {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        NodeCover { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Removing the cover (and incident edges, self-loops included) leaves
    /// `g` edgeless.
    pub fn covers(&self, g: &Graph) -> bool {
        (0..g.vertex_count()).all(|u| g.out_neighbors(u).iter().all(|&v| self.contains(u) || self.contains(v)))
    }
}

/// Degree-dominance prefilter: `w` is a candidate of `u` when, in every
/// channel, its in- and out-degree (with multiplicity) are at least those of
/// `u`, and labels agree when both graphs carry them.
pub fn init_candidates(p: &Problem) -> CandidateSets {
    let (t, w) = (&p.template, &p.world);
    let wdeg: Vec<_> = (0..w.vertex_count()).map(|v| w.degree_vector_unchecked(v)).collect();
    let mut cs = CandidateSets::empty(t.vertex_count(), w.vertex_count());
    for u in 0..t.vertex_count() {
        let du = t.degree_vector_unchecked(u);
        for (c, dc) in wdeg.iter().enumerate() {
            let fits = du.iter().zip(dc).all(|(a, b)| b.0 >= a.0 && b.1 >= a.1);
            if fits && !p.labels_clash(u, c) {
                cs.insert(u, c);
            }
        }
    }
    cs
}

/// `(u, c)` is consistent with every edge between `u` and an already
/// matched template vertex.
pub fn joinable(p: &Problem, m: &PartialMatch, u: usize, c: usize) -> bool {
    m.pairs().iter().all(|&(v, w)| {
        let into = p.template.multiplicity(v, u).is_none_or(|mt| dominates(p.world.multiplicity(w, c), mt));
        let from = p.template.multiplicity(u, v).is_none_or(|mt| dominates(p.world.multiplicity(c, w), mt));
        into && from
    })
}

/// The candidate structure, materialized as a single-channel graph over
/// pair-nodes.
#[derive(Debug, Clone)]
pub struct CandidateStructure {
    template_n: usize,
    pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    graph: Graph,
}

impl CandidateStructure {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn node(&self, u: usize, c: usize) -> Option<usize> {
        self.index.get(&(u, c)).copied()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn template_count(&self) -> usize {
        self.template_n
    }

    /// Arcs as pairs of `(template vertex, candidate)` nodes.
    pub fn arcs(&self) -> Vec<((usize, usize), (usize, usize))> {
        (0..self.pairs.len())
            .flat_map(|i| self.graph.out_neighbors(i).iter().map(move |&j| (i, j)))
            .map(|(i, j)| (self.pairs[i], self.pairs[j]))
            .collect()
    }

    /// DOT digraph with one node per pair, labelled `u:c`.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph G {\n");
        for (i, (u, c)) in self.pairs.iter().enumerate() {
            writeln!(s, "  n{i} [label=\"{u}:{c}\"];").unwrap();
        }
        for i in 0..self.pairs.len() {
            for j in self.graph.out_neighbors(i) {
                writeln!(s, "  n{i} -> n{j};").unwrap();
            }
        }
        s.push('}');
        s.push('\n');
        s
    }
}

pub fn build_candidate_structure(p: &Problem, cs: &CandidateSets) -> CandidateStructure {
    let pairs: Vec<(usize, usize)> = (0..cs.template_count()).flat_map(|u| cs.iter(u).map(move |c| (u, c))).collect();
    let index: HashMap<_, _> = pairs.iter().enumerate().map(|(i, &pc)| (pc, i)).collect();
    let mut b = GraphBuilder::new(pairs.len(), 1);
    for (i, &(u1, c1)) in pairs.iter().enumerate() {
        for (u2, mt) in p.template.out_edges(u1) {
            for (c2, mw) in p.world.out_edges(c1) {
                if dominates(Some(mw), mt) {
                    if let Some(&j) = index.get(&(u2, c2)) {
                        b.add_edge(i, j);
                    }
                }
            }
        }
    }
    CandidateStructure { template_n: cs.template_count(), pairs, index, graph: b.build() }
}

/// `c1 ~ c2` as candidates of `u`: both outside `C[u]`, or both inside with
/// structurally equivalent pair-nodes.
pub fn candidate_equivalent(s: &CandidateStructure, u: usize, c1: usize, c2: usize) -> bool {
    if c1 == c2 {
        return true;
    }
    match (s.node(u, c1), s.node(u, c2)) {
        (None, None) => true,
        (Some(a), Some(b)) => equivalent_unchecked(&s.graph, a, b),
        _ => false,
    }
}

/// Candidate equivalence with respect to every template vertex.
pub fn fully_candidate_equivalent(s: &CandidateStructure, c1: usize, c2: usize) -> bool {
    (0..s.template_n).all(|u| candidate_equivalent(s, u, c1, c2))
}

/// Pair-node neighbours of `(t, c)` restricted to template neighbour `t2`,
/// as candidate ids, in either direction. `(t, c1)` and `(t, c2)` are
/// excluded.
#[allow(clippy::too_many_arguments)]
fn pair_side<'a>(
    p: &'a Problem,
    cs: &'a CandidateSets,
    outgoing: bool,
    t: usize,
    t2: usize,
    mt: &'a [u32],
    c: usize,
    excl: (usize, usize),
) -> impl Iterator<Item = usize> + 'a {
    let edges: Box<dyn Iterator<Item = (usize, &[u32])>> =
        if outgoing { Box::new(p.world.out_edges(c)) } else { Box::new(p.world.in_edges(c)) };
    edges
        .filter(move |&(c3, mw)| {
            cs.contains(t2, c3) && dominates(Some(mw), mt) && !(t2 == t && (c3 == excl.0 || c3 == excl.1))
        })
        .map(|(c3, _)| c3)
}

fn pair_nodes_equivalent(p: &Problem, cs: &CandidateSets, t: usize, c1: usize, c2: usize) -> bool {
    let excl = (c1, c2);
    for (t2, mt) in p.template.out_edges(t) {
        if !pair_side(p, cs, true, t, t2, mt, c1, excl).eq(pair_side(p, cs, true, t, t2, mt, c2, excl)) {
            return false;
        }
    }
    for (t2, mt) in p.template.in_edges(t) {
        if !pair_side(p, cs, false, t, t2, mt, c1, excl).eq(pair_side(p, cs, false, t, t2, mt, c2, excl)) {
            return false;
        }
    }
    if let Some(ml) = p.template.multiplicity(t, t) {
        let w = &p.world;
        let d = |a, b| dominates(w.multiplicity(a, b), ml);
        if d(c1, c2) != d(c2, c1) || d(c1, c1) != d(c2, c2) {
            return false;
        }
    }
    true
}

/// [`candidate_equivalent`] computed without materializing the structure.
pub fn candidate_equivalent_implicit(p: &Problem, cs: &CandidateSets, u: usize, c1: usize, c2: usize) -> bool {
    if c1 == c2 {
        return true;
    }
    match (cs.contains(u, c1), cs.contains(u, c2)) {
        (false, false) => true,
        (true, true) => pair_nodes_equivalent(p, cs, u, c1, c2),
        _ => false,
    }
}

/// [`fully_candidate_equivalent`] computed without materializing the
/// structure.
pub fn fully_candidate_equivalent_implicit(p: &Problem, cs: &CandidateSets, c1: usize, c2: usize) -> bool {
    (0..cs.template_count()).all(|u| candidate_equivalent_implicit(p, cs, u, c1, c2))
}

/// Greedy cover: repeatedly take the vertex touching the most uncovered
/// edges (lowest index on ties) until no edge is left. Direction is ignored
/// and a self-loop can only be covered by its own vertex.
pub fn greedy_node_cover(g: &Graph) -> NodeCover {
    let mut uncovered: BTreeSet<(usize, usize)> = BTreeSet::new();
    for u in 0..g.vertex_count() {
        for &v in g.out_neighbors(u) {
            uncovered.insert((u.min(v), u.max(v)));
        }
    }
    let mut load = vec![0usize; g.vertex_count()];
    for &(a, b) in &uncovered {
        load[a] += 1;
        if a != b {
            load[b] += 1;
        }
    }
    let mut cover = Vec::new();
    while !uncovered.is_empty() {
        let best = (0..load.len()).max_by_key(|&v| (load[v], std::cmp::Reverse(v))).unwrap();
        cover.push(best);
        let gone: Vec<_> = uncovered.iter().copied().filter(|&(a, b)| a == best || b == best).collect();
        for (a, b) in gone {
            uncovered.remove(&(a, b));
            load[a] -= 1;
            if a != b {
                load[b] -= 1;
            }
        }
    }
    NodeCover::new(cover)
}

fn check_cover_matched(cover: &NodeCover, m: &PartialMatch) -> Result<()> {
    match cover.vertices().iter().find(|&&u| !m.contains_template(u)) {
        Some(u) => Err(Error::Contract(format!("node cover vertex {u} is not matched"))),
        None => Ok(()),
    }
}

/// Candidate sets reduced to joinability: matched vertices keep their
/// image, every other template vertex gets all unused, label-compatible
/// world vertices joinable to `m`. `m` must match the whole cover.
pub fn joinable_candidates(p: &Problem, cover: &NodeCover, m: &PartialMatch) -> Result<CandidateSets> {
    check_cover_matched(cover, m)?;
    let mut cs = CandidateSets::empty(p.template.vertex_count(), p.world.vertex_count());
    for u in 0..p.template.vertex_count() {
        if let Some(w) = m.image(u) {
            cs.insert(u, w);
            continue;
        }
        for c in 0..p.world.vertex_count() {
            if !m.contains_world(c) && !p.labels_clash(u, c) && joinable(p, m, u, c) {
                cs.insert(u, c);
            }
        }
    }
    Ok(cs)
}

/// `w1 ~ w2` with respect to a matched node cover: identical membership in
/// the candidate sets of every template vertex outside the cover.
pub fn node_cover_equivalent(
    cs: &CandidateSets,
    cover: &NodeCover,
    m: &PartialMatch,
    w1: usize,
    w2: usize,
) -> Result<bool> {
    check_cover_matched(cover, m)?;
    if w1 == w2 {
        return Ok(true);
    }
    Ok((0..cs.template_count()).filter(|&u| !cover.contains(u)).all(|u| cs.contains(u, w1) == cs.contains(u, w2)))
}
