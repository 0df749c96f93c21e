//! Small hand-built instances used throughout the docs and tests.

use crate::graph::{Graph, GraphBuilder};

/// Three-vertex template and seven-vertex world with visible symmetry on
/// both sides.
///
/// Template `A=0, B=1, C=2` with arcs `A->B`, `A->C`. World vertices
/// `1..=7` are stored at indices `0..=6`, with arcs from `1` to `2, 3, 4, 5`
/// and from `4` to `5, 6, 7`. There are 18 isomorphisms.
pub fn toy() -> (Graph, Graph) {
    let template = Graph::from_edges(3, &[(0, 1), (0, 2)]);
    let world = Graph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (0, 4), (3, 4), (3, 5), (3, 6)]);
    (template, world)
}

/// LAD serializations of [`toy`] (directed).
pub const TOY_TEMPLATE_LAD: &str = "3\n2 1 2\n0\n0\n";
pub const TOY_WORLD_LAD: &str = "7\n4 1 2 3 4\n0\n0\n3 4 5 6\n0\n0\n0\n";

/// Path of `k` hubs, each hub carrying two twin leaves. Undirected.
///
/// Hubs are `0..k`; the leaves of hub `i` are `k + 2i` and `k + 2i + 1`.
/// Exactly `k` nontrivial structural classes, all of size two.
pub fn planted_pairs(k: usize) -> Graph {
    let mut b = GraphBuilder::new(3 * k, 1);
    for i in 0..k {
        if i + 1 < k {
            b.add_undirected(i, i + 1);
        }
        b.add_undirected(i, k + 2 * i);
        b.add_undirected(i, k + 2 * i + 1);
    }
    b.build()
}

/// Undirected path template `A-B-C-D-E` (`0..=4`) whose greedy node cover
/// is `{B, D}`, and an eight-vertex world (`1..=8` at `0..=7`).
///
/// Once `B -> 2` and `D -> 5`, the remaining candidates split into three
/// node-cover classes `{1, 3}`, `{4, 6}`, `{7, 8}`, while the extra edges
/// `3-7` and `4-8` stop any of them from being structurally equivalent.
pub fn node_cover_example() -> (Graph, Graph) {
    let template = Graph::from_undirected_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
    let e = |a: usize, b: usize| (a - 1, b - 1);
    let world = Graph::from_undirected_edges(
        8,
        &[e(2, 1), e(2, 3), e(2, 4), e(2, 6), e(5, 4), e(5, 6), e(5, 7), e(5, 8), e(3, 7), e(4, 8)],
    );
    (template, world)
}

/// Star with `leaves` leaves around vertex 0. Directed out from the centre.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|l| (0, l)).collect();
    Graph::from_edges(leaves + 1, &edges)
}
