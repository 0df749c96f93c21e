//! Random instances and brute-force oracles shared by the integration tests.
//! The oracles only read adjacency through `Graph::multiplicity` and never
//! call into the search or equivalence code.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use symmatch::{Graph, GraphBuilder, Problem};

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub template: usize,
    pub world: usize,
    pub channels: usize,
    pub density: f64,
    pub directed: bool,
}

impl Shape {
    pub fn random(rng: &mut impl Rng) -> Self {
        Shape {
            template: rng.gen_range(3..=6),
            world: rng.gen_range(6..=12),
            channels: rng.gen_range(1..=3),
            density: rng.gen_range(0.1..0.7),
            directed: rng.gen_bool(0.5),
        }
    }
}

fn random_mult(rng: &mut impl Rng, k: usize) -> Vec<u32> {
    loop {
        let m: Vec<u32> = (0..k).map(|_| if rng.gen_bool(0.6) { rng.gen_range(1..=2) } else { 0 }).collect();
        if m.iter().any(|&x| x > 0) {
            return m;
        }
    }
}

fn put(b: &mut GraphBuilder, u: usize, v: usize, m: &[u32], directed: bool) {
    for (i, &c) in m.iter().enumerate() {
        if c > 0 {
            b.add_edges(u, v, i + 1, c);
            if !directed && u != v {
                b.add_edges(v, u, i + 1, c);
            }
        }
    }
}

/// Random graph; multiplicities above one only when `k > 1`.
pub fn random_graph(rng: &mut impl Rng, n: usize, k: usize, density: f64, directed: bool, loops: bool) -> Graph {
    let mut b = GraphBuilder::new(n, k);
    for u in 0..n {
        let start = if directed { 0 } else { u };
        for v in start..n {
            if (u == v && !loops) || !rng.gen_bool(density) {
                continue;
            }
            let m = if k == 1 { vec![1] } else { random_mult(rng, k) };
            put(&mut b, u, v, &m, directed);
        }
    }
    b.build()
}

/// Copies of the arcs of `g` into a builder over `n >= g.vertex_count()` vertices.
fn builder_from(g: &Graph, n: usize) -> GraphBuilder {
    let mut b = GraphBuilder::new(n, g.channel_count());
    for u in 0..g.vertex_count() {
        for (v, m) in g.out_edges(u) {
            for (i, &c) in m.iter().enumerate() {
                if c > 0 {
                    b.add_edges(u, v, i + 1, c);
                }
            }
        }
    }
    b
}

/// Appends `extra` vertices, each a structural twin of a random earlier
/// vertex (same in- and out-arcs, optionally linked to it both ways).
pub fn plant_twins(rng: &mut impl Rng, g: &Graph, extra: usize) -> Graph {
    let n0 = g.vertex_count();
    let n = n0 + extra;
    let mut b = builder_from(g, n);
    let mut arcs: Vec<(usize, usize, Vec<u32>)> = Vec::new();
    for u in 0..n0 {
        for (v, m) in g.out_edges(u) {
            arcs.push((u, v, m.to_vec()));
        }
    }
    for t in n0..n {
        let s = rng.gen_range(0..t);
        let snapshot = arcs.clone();
        for (u, v, m) in snapshot {
            let (nu, nv) = match (u == s, v == s) {
                (true, true) => (t, t),
                (true, false) => (t, v),
                (false, true) => (u, t),
                (false, false) => continue,
            };
            put(&mut b, nu, nv, &m, true);
            arcs.push((nu, nv, m));
        }
        if rng.gen_bool(0.3) {
            // mutual link keeps the twins equivalent
            let m: Vec<u32> = (0..g.channel_count()).map(|i| u32::from(i == 0)).collect();
            put(&mut b, s, t, &m, true);
            put(&mut b, t, s, &m, true);
            arcs.push((s, t, m.clone()));
            arcs.push((t, s, m));
        }
    }
    b.build()
}

/// A template and a world that (three times in four) contains a shuffled
/// copy of it, plus noise edges and planted twins.
pub fn random_instance(rng: &mut impl Rng, s: Shape) -> Problem {
    let loops = rng.gen_bool(0.2);
    let planted = rng.gen_bool(0.75);
    let template = random_graph(rng, s.template, s.channels, s.density, s.directed, loops);
    let twins = rng.gen_range(0..=s.world.saturating_sub(s.template).min(4));
    let base_n = s.world - twins;
    let mut perm: Vec<usize> = (0..base_n).collect();
    perm.shuffle(rng);
    let noise = random_graph(rng, base_n, s.channels, s.density * 0.5, s.directed, false);
    let mut b = builder_from(&noise, base_n);
    for u in 0..s.template.min(base_n) {
        if !planted {
            break;
        }
        for (v, m) in template.out_edges(u) {
            put(&mut b, perm[u], perm[v], m, true);
        }
    }
    let base = b.build();
    let world = plant_twins(rng, &base, twins);
    let world = if s.directed { world } else { symmetrize(&world) };
    Problem::new(template, world, s.directed).unwrap()
}

/// Gives both graphs of `p` labels drawn from `alphabet` symbols, keeping
/// the planted copy satisfiable only by chance.
pub fn with_random_labels(rng: &mut impl Rng, p: Problem, alphabet: u8) -> Problem {
    let mut pick = |n: usize| -> Vec<String> {
        (0..n).map(|_| ((b'a' + rng.gen_range(0..alphabet)) as char).to_string()).collect()
    };
    let tl = pick(p.template.vertex_count());
    let wl = pick(p.world.vertex_count());
    Problem::new(p.template.with_labels(tl).unwrap(), p.world.with_labels(wl).unwrap(), p.directed).unwrap()
}

/// Makes every arc two-way, taking the channel-wise max of both directions.
pub fn symmetrize(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let k = g.channel_count();
    let mut b = GraphBuilder::new(n, k);
    for u in 0..n {
        for v in 0..n {
            let a = g.multiplicity(u, v);
            let r = g.multiplicity(v, u);
            let m: Vec<u32> = (0..k).map(|i| a.map_or(0, |x| x[i]).max(r.map_or(0, |x| x[i]))).collect();
            for (i, &c) in m.iter().enumerate() {
                if c > 0 {
                    b.add_edges(u, v, i + 1, c);
                }
            }
        }
    }
    b.build()
}

fn mult(g: &Graph, u: usize, v: usize) -> Vec<u32> {
    g.multiplicity(u, v).map_or_else(|| vec![0; g.channel_count()], <[u32]>::to_vec)
}

fn covers(world: &[u32], template: &[u32]) -> bool {
    world.iter().zip(template).all(|(w, t)| w >= t)
}

fn labels_ok(p: &Problem, u: usize, w: usize) -> bool {
    match (p.template.label(u), p.world.label(w)) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    }
}

/// Independent check that `f` is an injective, edge-preserving map.
pub fn check_map(p: &Problem, f: &[usize]) -> bool {
    let n = p.template.vertex_count();
    if f.len() != n || f.iter().any(|&w| w >= p.world.vertex_count()) {
        return false;
    }
    if f.iter().collect::<HashSet<_>>().len() != n {
        return false;
    }
    (0..n).all(|u| labels_ok(p, u, f[u]))
        && (0..n).all(|a| (0..n).all(|b| covers(&mult(&p.world, f[a], f[b]), &mult(&p.template, a, b))))
}

/// Every isomorphism, by trying all injective maps in index order and
/// rejecting a partial map as soon as one of its edges fails.
pub fn brute_force_maps(p: &Problem) -> Vec<Vec<usize>> {
    let n = p.template.vertex_count();
    let wn = p.world.vertex_count();
    let tm: Vec<Vec<Vec<u32>>> = (0..n).map(|a| (0..n).map(|b| mult(&p.template, a, b)).collect()).collect();
    let wm: Vec<Vec<Vec<u32>>> = (0..wn).map(|a| (0..wn).map(|b| mult(&p.world, a, b)).collect()).collect();
    let mut out = Vec::new();
    let mut f = Vec::with_capacity(n);
    let mut used = vec![false; wn];
    fn rec(
        p: &Problem,
        tm: &[Vec<Vec<u32>>],
        wm: &[Vec<Vec<u32>>],
        f: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = f.len();
        if i == tm.len() {
            out.push(f.clone());
            return;
        }
        for w in 0..used.len() {
            if used[w] || !labels_ok(p, i, w) {
                continue;
            }
            let fits = covers(&wm[w][w], &tm[i][i])
                && (0..i).all(|j| covers(&wm[f[j]][w], &tm[j][i]) && covers(&wm[w][f[j]], &tm[i][j]));
            if fits {
                used[w] = true;
                f.push(w);
                rec(p, tm, wm, f, used, out);
                f.pop();
                used[w] = false;
            }
        }
    }
    rec(p, &tm, &wm, &mut f, &mut used, &mut out);
    out
}

pub fn brute_force_count(p: &Problem) -> u64 {
    brute_force_maps(p).len() as u64
}

/// Pairwise structural equivalence straight from the definition.
pub fn naive_equivalent(g: &Graph, v: usize, w: usize) -> bool {
    if v == w {
        return true;
    }
    if g.label(v) != g.label(w) {
        return false;
    }
    if mult(g, v, v) != mult(g, w, w) || mult(g, v, w) != mult(g, w, v) {
        return false;
    }
    (0..g.vertex_count())
        .filter(|&x| x != v && x != w)
        .all(|x| mult(g, v, x) == mult(g, w, x) && mult(g, x, v) == mult(g, x, w))
}

/// Classes of the naive relation, checked to be transitive along the way.
pub fn naive_partition(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for v in 0..n {
        if seen[v] {
            continue;
        }
        let class: Vec<usize> = (v..n).filter(|&w| !seen[w] && naive_equivalent(g, v, w)).collect();
        for &a in &class {
            for &b in &class {
                assert!(naive_equivalent(g, a, b), "relation not transitive on {a}, {b}");
            }
            seen[a] = true;
        }
        classes.push(class);
    }
    classes
}

/// All maps reachable from `f` by swapping the images of two equivalent
/// template vertices or by exchanging an image with an equivalent world
/// vertex. Every reached map is checked with [`check_map`].
pub fn interchange_closure(
    p: &Problem,
    f: &[usize],
    template_classes: &[Vec<usize>],
    world_classes: &[Vec<usize>],
) -> BTreeSet<Vec<usize>> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([f.to_vec()]);
    seen.insert(f.to_vec());
    while let Some(g) = queue.pop_front() {
        assert!(check_map(p, &g), "interchange left the solution space: {g:?}");
        let mut next = Vec::new();
        for c in template_classes {
            for (i, &a) in c.iter().enumerate() {
                for &b in &c[i + 1..] {
                    let mut h = g.clone();
                    h.swap(a, b);
                    next.push(h);
                }
            }
        }
        for c in world_classes {
            for (i, &x) in c.iter().enumerate() {
                for &y in &c[i + 1..] {
                    let h: Vec<usize> = g
                        .iter()
                        .map(|&w| {
                            if w == x {
                                y
                            } else if w == y {
                                x
                            } else {
                                w
                            }
                        })
                        .collect();
                    next.push(h);
                }
            }
        }
        for h in next {
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen
}
