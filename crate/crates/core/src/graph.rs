//! Directed multiplex multigraphs and the two text formats they are read from.
//!
//! A [`Graph`] has `K >= 1` channels; every ordered pair `(u, v)` carries one
//! edge multiplicity per channel. A plain directed graph is the special case
//! `K = 1` with multiplicities in `{0, 1}`, so the search core only ever sees
//! one representation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, ParseError, Result};

/// Per-channel edge multiplicities of one ordered vertex pair.
pub type Multiplicity = [u32];

/// `true` when `world` carries at least as many edges as `template` in
/// every channel. A missing world edge dominates only an all-zero template.
pub fn dominates(world: Option<&Multiplicity>, template: &Multiplicity) -> bool {
    match world {
        Some(w) => w.iter().zip(template).all(|(w, t)| w >= t),
        None => template.iter().all(|&t| t == 0),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Adjacency {
    // sorted neighbour ids, with `channels` multiplicities per neighbour in `mult`
    nbrs: Vec<usize>,
    mult: Vec<u32>,
}

impl Adjacency {
    fn empty() -> Self {
        Adjacency { nbrs: Vec::new(), mult: Vec::new() }
    }
}

/// A directed multiplex multigraph on vertices `0..n`.
///
/// Immutable once built. Use [`GraphBuilder`] or one of the parsers to
/// construct one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    channels: usize,
    out: Vec<Adjacency>,
    inc: Vec<Adjacency>,
    labels: Option<Vec<String>>,
}

/// Accumulates edges before freezing them into a [`Graph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    n: usize,
    channels: usize,
    edges: BTreeMap<(usize, usize), Vec<u32>>,
}

impl GraphBuilder {
    pub fn new(n: usize, channels: usize) -> Self {
        assert!(channels >= 1, "a graph needs at least one channel");
        GraphBuilder { n, channels, edges: BTreeMap::new() }
    }

    /// Adds `count` parallel edges `u -> v` in `channel` (1-based).
    pub fn add_edges(&mut self, u: usize, v: usize, channel: usize, count: u32) -> &mut Self {
        assert!(u < self.n && v < self.n, "edge ({u}, {v}) out of range");
        assert!((1..=self.channels).contains(&channel), "channel {channel} out of range");
        let k = self.channels;
        let m = self.edges.entry((u, v)).or_insert_with(|| vec![0; k]);
        m[channel - 1] += count;
        self
    }

    /// Sets a simple edge `u -> v` in channel 1 (idempotent).
    pub fn add_edge(&mut self, u: usize, v: usize) -> &mut Self {
        assert!(u < self.n && v < self.n, "edge ({u}, {v}) out of range");
        let k = self.channels;
        let m = self.edges.entry((u, v)).or_insert_with(|| vec![0; k]);
        m[0] = 1;
        self
    }

    /// Adds both `u -> v` and `v -> u` as simple edges.
    pub fn add_undirected(&mut self, u: usize, v: usize) -> &mut Self {
        self.add_edge(u, v);
        self.add_edge(v, u)
    }

    pub fn build(&self) -> Graph {
        let k = self.channels;
        let mut out: Vec<Adjacency> = (0..self.n).map(|_| Adjacency::empty()).collect();
        let mut inc: Vec<Adjacency> = (0..self.n).map(|_| Adjacency::empty()).collect();
        // BTreeMap order gives sorted out lists; in lists are filled by source
        // order, which is also sorted.
        for (&(u, v), m) in &self.edges {
            if m.iter().all(|&x| x == 0) {
                continue;
            }
            out[u].nbrs.push(v);
            out[u].mult.extend_from_slice(m);
            inc[v].nbrs.push(u);
            inc[v].mult.extend_from_slice(m);
        }
        debug_assert!(out.iter().all(|a| a.mult.len() == a.nbrs.len() * k));
        Graph { n: self.n, channels: k, out, inc, labels: None }
    }
}

impl Graph {
    /// A graph with `n` isolated vertices.
    pub fn empty(n: usize, channels: usize) -> Self {
        GraphBuilder::new(n, channels).build()
    }

    /// Single-channel graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut b = GraphBuilder::new(n, 1);
        for &(u, v) in edges {
            b.add_edge(u, v);
        }
        b.build()
    }

    /// Single-channel graph with every listed edge inserted in both directions.
    pub fn from_undirected_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut b = GraphBuilder::new(n, 1);
        for &(u, v) in edges {
            b.add_undirected(u, v);
        }
        b.build()
    }

    /// Attaches one opaque label per vertex.
    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.n {
            return Err(Error::LabelCount { expected: self.n, got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn channel_count(&self) -> usize {
        self.channels
    }

    /// Number of ordered pairs carrying at least one edge.
    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|a| a.nbrs.len()).sum()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out[v].nbrs
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.inc[v].nbrs
    }

    /// Out-edges of `v` as `(target, multiplicities)`, sorted by target.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = (usize, &Multiplicity)> + '_ {
        let a = &self.out[v];
        a.nbrs.iter().copied().zip(a.mult.chunks_exact(self.channels))
    }

    /// In-edges of `v` as `(source, multiplicities)`, sorted by source.
    pub fn in_edges(&self, v: usize) -> impl Iterator<Item = (usize, &Multiplicity)> + '_ {
        let a = &self.inc[v];
        a.nbrs.iter().copied().zip(a.mult.chunks_exact(self.channels))
    }

    /// Multiplicities of `u -> v`, or `None` when no channel has an edge.
    pub fn multiplicity(&self, u: usize, v: usize) -> Option<&Multiplicity> {
        let a = &self.out[u];
        a.nbrs.binary_search(&v).ok().map(|i| &a.mult[i * self.channels..(i + 1) * self.channels])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].nbrs.binary_search(&v).is_ok()
    }

    /// Distinct vertices adjacent to `v` in either direction, `v` excluded.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let (a, b) = (&self.out[v].nbrs, &self.inc[v].nbrs);
        let mut merged = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let next = match (a.get(i), b.get(j)) {
                (Some(&x), Some(&y)) if x == y => {
                    i += 1;
                    j += 1;
                    x
                }
                (Some(&x), Some(&y)) if x < y => {
                    i += 1;
                    x
                }
                (Some(_), Some(&y)) => {
                    j += 1;
                    y
                }
                (Some(&x), None) => {
                    i += 1;
                    x
                }
                (None, Some(&y)) => {
                    j += 1;
                    y
                }
                (None, None) => unreachable!(),
            };
            if next != v {
                merged.push(next);
            }
        }
        merged
    }

    /// Number of distinct neighbours in either direction (self excluded).
    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).len()
    }

    /// Per-channel `(in_degree, out_degree)` of `v`, counting multiplicity.
    /// Self-loops contribute to both.
    pub fn degree_vector(&self, v: usize) -> Result<Vec<(u64, u64)>> {
        self.check_vertex(v)?;
        Ok(self.degree_vector_unchecked(v))
    }

    pub(crate) fn degree_vector_unchecked(&self, v: usize) -> Vec<(u64, u64)> {
        let mut d = vec![(0u64, 0u64); self.channels];
        for (_, m) in self.in_edges(v) {
            for (slot, &x) in d.iter_mut().zip(m) {
                slot.0 += u64::from(x);
            }
        }
        for (_, m) in self.out_edges(v) {
            for (slot, &x) in d.iter_mut().zip(m) {
                slot.1 += u64::from(x);
            }
        }
        d
    }

    /// `true` when the single-channel adjacency relation is symmetric.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|u| self.out_edges(u).all(|(v, m)| self.multiplicity(v, u) == Some(m)))
    }

    /// Canonical LAD text. For `directed == false` the graph must be
    /// symmetric and every edge is listed from both endpoints, which parses
    /// back to the same graph.
    pub fn to_lad(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for v in 0..self.n {
            let nb = self.out_neighbors(v);
            write!(s, "{}", nb.len()).unwrap();
            for w in nb {
                write!(s, " {w}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    /// Canonical multiplex edge list: header `n K`, then one
    /// `src dst channel multiplicity` line per nonzero entry, sorted.
    pub fn to_multiplex_edgelist(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.channels);
        for u in 0..self.n {
            for (v, m) in self.out_edges(u) {
                for (c, &x) in m.iter().enumerate() {
                    if x > 0 {
                        writeln!(s, "{u} {v} {} {x}", c + 1).unwrap();
                    }
                }
            }
        }
        s
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate(), last: 0 }
    }

    /// Next non-blank line as (1-based line number, tokens).
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !toks.is_empty() {
                return Some((i + 1, toks));
            }
        }
        None
    }
}

fn number(line: usize, tok: &str) -> Result<usize, ParseError> {
    tok.parse::<usize>().map_err(|_| ParseError::Malformed { line, token: tok.to_string() })
}

fn vertex(line: usize, tok: &str, n: usize) -> Result<usize, ParseError> {
    let v = number(line, tok)?;
    if v >= n {
        return Err(ParseError::VertexOutOfRange { line, vertex: v, n });
    }
    Ok(v)
}

/// Parses LAD text: the vertex count `n`, then one line per vertex holding
/// its out-degree followed by that many neighbour indices.
///
/// With `directed == false` each listed edge also inserts its reverse.
/// Repeated neighbours collapse to one edge.
///
/// ```
/// use symmatch::graph::parse_lad;
/// let g = parse_lad("2\n1 1\n0\n", true).unwrap();
/// assert!(g.has_edge(0, 1) && !g.has_edge(1, 0));
/// ```
pub fn parse_lad(text: &str, directed: bool) -> Result<Graph, ParseError> {
    let mut lines = Lines::new(text);
    let (hline, htoks) = lines.next_tokens().ok_or(ParseError::Truncated { line: 1, expected: "vertex count" })?;
    let n = number(hline, htoks[0])?;
    if let Some(t) = htoks.get(1) {
        return Err(ParseError::Trailing { line: hline, token: t.to_string() });
    }
    let mut b = GraphBuilder::new(n, 1);
    for u in 0..n {
        let (line, toks) = lines
            .next_tokens()
            .ok_or(ParseError::Truncated { line: lines.last.max(hline) + 1, expected: "adjacency line" })?;
        let deg = number(line, toks[0])?;
        if toks.len() < deg + 1 {
            return Err(ParseError::Truncated { line, expected: "neighbour index" });
        }
        if let Some(t) = toks.get(deg + 1) {
            return Err(ParseError::Trailing { line, token: t.to_string() });
        }
        for tok in &toks[1..] {
            let v = vertex(line, tok, n)?;
            if directed {
                b.add_edge(u, v);
            } else {
                b.add_undirected(u, v);
            }
        }
    }
    if let Some((line, toks)) = lines.next_tokens() {
        return Err(ParseError::Trailing { line, token: toks[0].to_string() });
    }
    Ok(b.build())
}

/// Parses the multiplex edge list: header `n K`, then lines
/// `src dst channel multiplicity` with channels in `1..=K`. Repeated
/// `(src, dst, channel)` lines add up.
///
/// ```
/// use symmatch::graph::parse_multiplex_edgelist;
/// let g = parse_multiplex_edgelist("2 1\n0 1 1 1\n0 1 1 1\n").unwrap();
/// assert_eq!(g.multiplicity(0, 1), Some(&[2][..]));
/// ```
pub fn parse_multiplex_edgelist(text: &str) -> Result<Graph, ParseError> {
    let mut lines = Lines::new(text);
    let (hline, htoks) = lines.next_tokens().ok_or(ParseError::Truncated { line: 1, expected: "header `n K`" })?;
    let n = number(hline, htoks[0])?;
    let k_tok = htoks.get(1).ok_or(ParseError::Truncated { line: hline, expected: "channel count" })?;
    let k = number(hline, k_tok)?;
    if k == 0 {
        return Err(ParseError::NoChannels { line: hline });
    }
    if let Some(t) = htoks.get(2) {
        return Err(ParseError::Trailing { line: hline, token: t.to_string() });
    }
    let mut b = GraphBuilder::new(n, k);
    while let Some((line, toks)) = lines.next_tokens() {
        if toks.len() < 4 {
            return Err(ParseError::Truncated { line, expected: "`src dst channel multiplicity`" });
        }
        if let Some(t) = toks.get(4) {
            return Err(ParseError::Trailing { line, token: t.to_string() });
        }
        let u = vertex(line, toks[0], n)?;
        let v = vertex(line, toks[1], n)?;
        let c = number(line, toks[2])?;
        if !(1..=k).contains(&c) {
            return Err(ParseError::ChannelOutOfRange { line, channel: c, channels: k });
        }
        let m = toks[3].parse::<u32>().map_err(|_| ParseError::Malformed { line, token: toks[3].to_string() })?;
        if m == 0 {
            return Err(ParseError::ZeroMultiplicity { line });
        }
        b.add_edges(u, v, c, m);
    }
    Ok(b.build())
}

/// A template/world pair.
#[derive(Debug, Clone)]
pub struct Problem {
    pub template: Graph,
    pub world: Graph,
    pub directed: bool,
}

impl Problem {
    pub fn new(template: Graph, world: Graph, directed: bool) -> Result<Self> {
        if template.channel_count() != world.channel_count() {
            return Err(Error::ChannelMismatch { template: template.channel_count(), world: world.channel_count() });
        }
        Ok(Problem { template, world, directed })
    }

    /// `true` when labels constrain `u -> w`: both graphs carry labels and
    /// they differ.
    pub fn labels_clash(&self, u: usize, w: usize) -> bool {
        match (self.template.label(u), self.world.label(w)) {
            (Some(a), Some(b)) => a != b,
            _ => false,
        }
    }

    /// Checks that `f` (indexed by template vertex) is injective, respects
    /// labels, and dominates every template edge multiplicity per channel.
    pub fn verify(&self, f: &[usize]) -> Result<()> {
        let t = &self.template;
        if f.len() != t.vertex_count() {
            return Err(Error::NotAnIsomorphism(format!(
                "map has {} entries, template has {} vertices",
                f.len(),
                t.vertex_count()
            )));
        }
        let mut seen = vec![false; self.world.vertex_count()];
        for (u, &w) in f.iter().enumerate() {
            self.world.check_vertex(w)?;
            if std::mem::replace(&mut seen[w], true) {
                return Err(Error::NotAnIsomorphism(format!("world vertex {w} used twice")));
            }
            if self.labels_clash(u, w) {
                return Err(Error::NotAnIsomorphism(format!("label mismatch at {u} -> {w}")));
            }
        }
        for u in 0..t.vertex_count() {
            for (v, m) in t.out_edges(u) {
                if !dominates(self.world.multiplicity(f[u], f[v]), m) {
                    return Err(Error::NotAnIsomorphism(format!("template edge ({u}, {v}) not preserved")));
                }
            }
        }
        Ok(())
    }

    pub fn is_isomorphism(&self, f: &[usize]) -> bool {
        self.verify(f).is_ok()
    }
}
