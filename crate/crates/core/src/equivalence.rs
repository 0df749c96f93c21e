//! Static structural equivalence.
//!
//! Two vertices `v != w` are structurally equivalent when every third vertex
//! sees them identically (same in- and out-multiplicities in every channel),
//! the edges between them are the same in both directions, their self-loops
//! agree, and their labels (if any) match. Equivalent vertices can be
//! swapped in any subgraph isomorphism, which is what the counting
//! functions below exploit.

use std::collections::VecDeque;

use num_traits::One;
use serde::{Serialize, Serializer};

use crate::count::{binomial, factorial, BigCount};
use crate::error::{Error, Result};
use crate::graph::{Graph, Problem};

/// Disjoint, nonempty classes covering `0..n`.
///
/// Classes are kept with sorted members and ordered by their smallest
/// member, so two partitions of the same set compare equal exactly when
/// they have the same classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl Partition {
    /// Normalizes `classes`. Panics if they do not partition `0..n`.
    pub fn from_classes(n: usize, mut classes: Vec<Vec<usize>>) -> Self {
        classes.retain(|c| !c.is_empty());
        for c in &mut classes {
            c.sort_unstable();
        }
        classes.sort_unstable_by_key(|c| c[0]);
        let mut class_of = vec![usize::MAX; n];
        for (i, c) in classes.iter().enumerate() {
            for &v in c {
                assert!(v < n && class_of[v] == usize::MAX, "not a partition of 0..{n}");
                class_of[v] = i;
            }
        }
        assert!(class_of.iter().all(|&c| c != usize::MAX), "classes do not cover 0..{n}");
        Partition { classes, class_of }
    }

    pub fn singletons(n: usize) -> Self {
        Partition { classes: (0..n).map(|v| vec![v]).collect(), class_of: (0..n).collect() }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_index(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn class_of(&self, v: usize) -> &[usize] {
        &self.classes[self.class_of[v]]
    }

    pub fn same_class(&self, v: usize, w: usize) -> bool {
        self.class_of[v] == self.class_of[w]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.class_of.len()
    }

    /// Classes with more than one member.
    pub fn nontrivial(&self) -> impl Iterator<Item = &[usize]> {
        self.classes.iter().filter(|c| c.len() > 1).map(Vec::as_slice)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.classes.serialize(s)
    }
}

/// Out- or in-edges of `v` with both `v` and `w` removed.
fn trimmed<'g>(
    edges: impl Iterator<Item = (usize, &'g [u32])>,
    v: usize,
    w: usize,
) -> impl Iterator<Item = (usize, &'g [u32])> {
    edges.filter(move |&(x, _)| x != v && x != w)
}

pub(crate) fn equivalent_unchecked(g: &Graph, v: usize, w: usize) -> bool {
    if v == w {
        return true;
    }
    if g.label(v) != g.label(w) {
        return false;
    }
    if g.multiplicity(v, w) != g.multiplicity(w, v) || g.multiplicity(v, v) != g.multiplicity(w, w) {
        return false;
    }
    trimmed(g.out_edges(v), v, w).eq(trimmed(g.out_edges(w), v, w))
        && trimmed(g.in_edges(v), v, w).eq(trimmed(g.in_edges(w), v, w))
}

/// Structural equivalence of `v` and `w` in `g`. Reflexive: `v == w` is
/// `true`.
pub fn structurally_equivalent(g: &Graph, v: usize, w: usize) -> Result<bool> {
    g.check_vertex(v)?;
    g.check_vertex(w)?;
    Ok(equivalent_unchecked(g, v, w))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

/// Groups `vertices` into equivalence classes by comparing each one with a
/// representative of every group seen so far.
fn group_into(g: &Graph, vertices: &[usize], uf: &mut UnionFind) {
    let mut reps: Vec<usize> = Vec::new();
    for &x in vertices {
        let root = uf.find(x);
        if reps.iter().any(|&r| uf.find(r) == root) {
            continue;
        }
        match reps.iter().copied().find(|&r| equivalent_unchecked(g, r, x)) {
            Some(r) => uf.union(r, x),
            None => reps.push(x),
        }
    }
}

/// Maximal structural-equivalence partition of `g`.
///
/// Breadth-first over every component: when a vertex is dequeued its
/// neighbourhood is split into classes. Equivalent vertices with a common
/// third neighbour always meet in some neighbourhood; the remaining cases
/// (no neighbours besides each other) are checked directly.
/// Cost is `O(sum_v deg(v)^2)` comparisons.
pub fn find_equivalence_classes(g: &Graph) -> Partition {
    let n = g.vertex_count();
    let mut uf = UnionFind::new(n);
    let mut visited = vec![false; n];
    let mut queue = VecDeque::new();
    let mut lonely = Vec::new();

    for start in 0..n {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let nbrs = g.neighbors(v);
            match nbrs.as_slice() {
                [] => lonely.push(v),
                [w] if equivalent_unchecked(g, v, *w) => {
                    uf.union(v, *w);
                }
                _ => {}
            }
            group_into(g, &nbrs, &mut uf);
            for w in nbrs {
                if !visited[w] {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    group_into(g, &lonely, &mut uf);

    let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        let r = uf.find(v);
        by_root[r].push(v);
    }
    Partition::from_classes(n, by_root)
}

/// `prod_i |C_i|!`: the number of isomorphisms reachable from any one
/// isomorphism by permuting structurally equivalent template vertices.
pub fn count_factorial_lower_bound(p: &Partition) -> BigCount {
    p.classes().iter().fold(BigCount::one(), |acc, c| acc * factorial(c.len()))
}

/// Size of the orbit of the isomorphism `f` under interchanges of
/// equivalent template vertices (`tp`) and equivalent world vertices (`wp`).
///
/// With `C_ij` the members of template class `i` that `f` sends into world
/// class `j`, the count is
/// `prod_i |C_i|! * prod_j prod_i binom(|D_j| - sum_{k<i} |C_kj|, |C_ij|)`.
pub fn count_tewe(problem: &Problem, f: &[usize], tp: &Partition, wp: &Partition) -> Result<BigCount> {
    problem.verify(f)?;
    if tp.vertex_count() != problem.template.vertex_count() || wp.vertex_count() != problem.world.vertex_count() {
        return Err(Error::Contract("partition size does not match graph".into()));
    }
    Ok(tewe_formula(f, tp, wp))
}

pub(crate) fn tewe_formula(f: &[usize], tp: &Partition, wp: &Partition) -> BigCount {
    let mut total = count_factorial_lower_bound(tp);
    // used[j] = sum over earlier template classes of |C_kj|
    let mut used = vec![0usize; wp.len()];
    for class in tp.classes() {
        let mut hits: Vec<(usize, usize)> = Vec::new();
        for &t in class {
            let j = wp.class_index(f[t]);
            match hits.iter_mut().find(|(jj, _)| *jj == j) {
                Some(h) => h.1 += 1,
                None => hits.push((j, 1)),
            }
        }
        for (j, c) in hits {
            total *= binomial(wp.classes()[j].len() - used[j], c);
            used[j] += c;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn toy_template_classes() {
        let (t, _) = fixtures::toy();
        assert!(structurally_equivalent(&t, 1, 2).unwrap());
        assert!(!structurally_equivalent(&t, 0, 1).unwrap());
        assert_eq!(find_equivalence_classes(&t).classes(), &[vec![0], vec![1, 2]]);
    }

    #[test]
    fn toy_world_classes() {
        let (_, w) = fixtures::toy();
        // vertex k in one-based numbering is index k - 1
        assert!(structurally_equivalent(&w, 1, 2).unwrap());
        assert!(!structurally_equivalent(&w, 1, 3).unwrap());
        assert_eq!(find_equivalence_classes(&w).classes(), &[vec![0], vec![1, 2], vec![3], vec![4], vec![5, 6]]);
    }

    #[test]
    fn edgeless_graph_is_one_class() {
        let g = Graph::empty(5, 2);
        assert!(structurally_equivalent(&g, 0, 4).unwrap());
        assert_eq!(find_equivalence_classes(&g).len(), 1);
    }

    #[test]
    fn isolated_edge_endpoints_are_equivalent() {
        let g = Graph::from_undirected_edges(3, &[(0, 1)]);
        assert_eq!(find_equivalence_classes(&g).classes(), &[vec![0, 1], vec![2]]);
        // one-way edge is not symmetric between the two endpoints
        let g = Graph::from_edges(2, &[(0, 1)]);
        assert_eq!(find_equivalence_classes(&g).len(), 2);
    }

    #[test]
    fn self_loops_must_agree() {
        let g = Graph::from_edges(3, &[(0, 2), (1, 2), (0, 0)]);
        assert!(!structurally_equivalent(&g, 0, 1).unwrap());
        let g = Graph::from_edges(3, &[(0, 2), (1, 2), (0, 0), (1, 1)]);
        assert!(structurally_equivalent(&g, 0, 1).unwrap());
    }

    #[test]
    fn labels_must_agree() {
        let g = Graph::from_edges(3, &[(0, 2), (1, 2)]).with_labels(["a", "b", "c"]).unwrap();
        assert!(!structurally_equivalent(&g, 0, 1).unwrap());
        assert_eq!(find_equivalence_classes(&g).len(), 3);
    }

    #[test]
    fn out_of_range_is_an_error() {
        let g = Graph::empty(2, 1);
        assert!(structurally_equivalent(&g, 0, 2).is_err());
    }

    #[test]
    fn biochemical_style_pairs() {
        let g = fixtures::planted_pairs(11);
        let p = find_equivalence_classes(&g);
        let nontrivial: Vec<_> = p.nontrivial().collect();
        assert_eq!(nontrivial.len(), 11);
        assert!(nontrivial.iter().all(|c| c.len() == 2));
        assert_eq!(count_factorial_lower_bound(&p), BigCount::from(2048u32));
    }

    #[test]
    fn factorial_bound_examples() {
        assert_eq!(count_factorial_lower_bound(&Partition::singletons(7)), BigCount::one());
        let mut classes = vec![(0..9).collect::<Vec<_>>(), (9..13).collect(), (13..16).collect(), (16..19).collect()];
        classes.extend((19..25).map(|v| vec![v]));
        let p = Partition::from_classes(25, classes);
        assert_eq!(count_factorial_lower_bound(&p), BigCount::from(313_528_320u64));
    }

    #[test]
    fn tewe_on_toy() {
        let (t, w) = fixtures::toy();
        let tp = find_equivalence_classes(&t);
        let wp = find_equivalence_classes(&w);
        let p = Problem::new(t, w, true).unwrap();
        // A->1, B->2, C->3 in one-based numbering
        assert_eq!(count_tewe(&p, &[0, 1, 2], &tp, &wp).unwrap(), BigCount::from(2u32));
        // A->1, B->2, C->4
        assert_eq!(count_tewe(&p, &[0, 1, 3], &tp, &wp).unwrap(), BigCount::from(4u32));
        assert!(count_tewe(&p, &[0, 1, 1], &tp, &wp).is_err());
        assert!(count_tewe(&p, &[1, 0, 2], &tp, &wp).is_err());
    }

    #[test]
    fn tewe_two_into_four() {
        // two equivalent leaves into four interchangeable world leaves
        let t = Graph::from_edges(3, &[(0, 1), (0, 2)]);
        let w = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let tp = find_equivalence_classes(&t);
        let wp = find_equivalence_classes(&w);
        let p = Problem::new(t, w, true).unwrap();
        assert_eq!(count_tewe(&p, &[0, 1, 2], &tp, &wp).unwrap(), BigCount::from(12u32));
        let all = Partition::singletons(3);
        let allw = Partition::singletons(5);
        assert_eq!(count_tewe(&p, &[0, 3, 1], &all, &allw).unwrap(), BigCount::one());
    }
}
