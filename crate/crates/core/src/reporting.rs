//! Compact views of a solution class: the world subgraph it touches, that
//! subgraph with like-coloured vertices merged, and candidate-set overlaps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::One;
use serde::Serialize;

use crate::candidate::{CandidateSets, NodeCover, PartialMatch};
use crate::count::BigCount;
use crate::equivalence::{find_equivalence_classes, Partition};
use crate::error::{Error, Result};
use crate::graph::{dominates, Problem};
use crate::search::{expansion_count_of, EquivalenceMode, Slot, SolutionClass};

/// Sorted template vertices a world vertex can serve.
pub type Color = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoredVertex {
    pub world: usize,
    pub color: Color,
}

/// How one slot's world class came about.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergeEntry {
    pub template: usize,
    pub class: Vec<usize>,
    /// Static world classes (restricted to `class`) merged into it.
    pub merged_from: Vec<Vec<usize>>,
}

/// The world vertices and edges a solution class can use.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColoredSubgraph {
    pub directed: bool,
    pub vertices: Vec<ColoredVertex>,
    /// World arcs between participants, by world vertex.
    pub edges: Vec<(usize, usize)>,
    pub merge_log: Vec<MergeEntry>,
    #[serde(skip)]
    mode: EquivalenceMode,
    #[serde(skip)]
    slots: Vec<Slot>,
}

impl ColoredSubgraph {
    pub fn color_of(&self, w: usize) -> Option<&Color> {
        self.vertices.iter().find(|v| v.world == w).map(|v| &v.color)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Supernode {
    pub color: Color,
    pub members: Vec<usize>,
}

impl Supernode {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// One node per colour, labelled with how many world vertices it stands for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompressedSubgraph {
    pub directed: bool,
    pub supernodes: Vec<Supernode>,
    /// Arcs between supernode indices, deduplicated.
    pub edges: Vec<(usize, usize)>,
    #[serde(skip)]
    mode: EquivalenceMode,
    #[serde(skip)]
    slots: Vec<Slot>,
}

impl CompressedSubgraph {
    pub fn participant_count(&self) -> usize {
        self.supernodes.iter().map(Supernode::size).sum()
    }
}

/// Builds the colored subgraph of `sc`.
///
/// A world vertex takes the colours of every slot whose class contains it.
/// A world arc `a -> b` is kept when a template arc `t1 -> t2` with
/// `t1 != t2`, `t1` in `a`'s colour and `t2` in `b`'s, is dominated by it.
pub fn induce_subgraph(p: &Problem, sc: &SolutionClass) -> ColoredSubgraph {
    let mut colors: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for s in &sc.slots {
        for &w in &s.world_class {
            colors.entry(w).or_default().extend(s.template_class.iter().copied());
        }
    }
    let mut edges = Vec::new();
    for (&a, ca) in &colors {
        for (b, mw) in p.world.out_edges(a) {
            let Some(cb) = colors.get(&b) else { continue };
            let used = ca.iter().any(|&t1| {
                p.template.out_edges(t1).any(|(t2, mt)| t2 != t1 && cb.contains(&t2) && dominates(Some(mw), mt))
            });
            if used {
                edges.push((a, b));
            }
        }
    }
    let static_classes = find_equivalence_classes(&p.world);
    let merge_log = sc.slots.iter().map(|s| merge_entry(s.template, &s.world_class, &static_classes)).collect();
    ColoredSubgraph {
        directed: p.directed,
        vertices: colors
            .into_iter()
            .map(|(world, c)| ColoredVertex { world, color: c.into_iter().collect() })
            .collect(),
        edges,
        merge_log,
        mode: sc.mode,
        slots: sc.slots.clone(),
    }
}

fn merge_entry(template: usize, class: &[usize], static_classes: &Partition) -> MergeEntry {
    let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &w in class {
        parts.entry(static_classes.class_index(w)).or_default().push(w);
    }
    let mut merged_from: Vec<Vec<usize>> = parts.into_values().collect();
    merged_from.sort();
    MergeEntry { template, class: class.to_vec(), merged_from }
}

/// Merges vertices of equal colour into supernodes.
pub fn compress(g: &ColoredSubgraph) -> CompressedSubgraph {
    let mut by_color: BTreeMap<&Color, Vec<usize>> = BTreeMap::new();
    for v in &g.vertices {
        by_color.entry(&v.color).or_default().push(v.world);
    }
    let mut supernodes: Vec<Supernode> =
        by_color.into_iter().map(|(c, members)| Supernode { color: c.clone(), members }).collect();
    supernodes.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
    let mut index = BTreeMap::new();
    for (i, s) in supernodes.iter().enumerate() {
        for &w in &s.members {
            index.insert(w, i);
        }
    }
    let edges: BTreeSet<(usize, usize)> = g.edges.iter().map(|(a, b)| (index[a], index[b])).collect();
    CompressedSubgraph {
        directed: g.directed,
        supernodes,
        edges: edges.into_iter().collect(),
        mode: g.mode,
        slots: g.slots.clone(),
    }
}

/// The class size recomputed from supernode sizes and the slot order.
///
/// Each slot can pick from the supernodes carrying its template vertex,
/// less the picks of earlier slots whose supernodes are among them. Under
/// template equivalence colours no longer separate the world classes, so
/// the recorded slots are counted directly.
pub fn expansion_count_from_compressed(g: &CompressedSubgraph) -> BigCount {
    if g.mode.uses_template_equivalence() {
        let n = g.slots.len();
        let mut tclasses: Vec<Vec<usize>> = g.slots.iter().map(|s| s.template_class.clone()).collect();
        tclasses.sort();
        tclasses.dedup();
        let sc = SolutionClass { mode: g.mode, slots: g.slots.clone(), count: BigCount::one() };
        return expansion_count_of(&sc, &Partition::from_classes(n, tclasses));
    }
    let mut earlier: Vec<BTreeSet<usize>> = Vec::new();
    let mut total = BigCount::one();
    for s in &g.slots {
        let mine: BTreeSet<usize> =
            g.supernodes.iter().enumerate().filter(|(_, n)| n.color.contains(&s.template)).map(|(i, _)| i).collect();
        let size: usize = mine.iter().map(|&i| g.supernodes[i].size()).sum();
        let taken = earlier.iter().filter(|e| e.is_subset(&mine)).count();
        total *= BigCount::from(size.saturating_sub(taken));
        earlier.push(mine);
    }
    total
}

/// Overlap pattern of candidate sets over non-cover template vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VennRegion {
    pub members: Vec<usize>,
    pub size: usize,
    #[serde(skip)]
    pub world: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct VennSummary {
    pub regions: Vec<VennRegion>,
}

impl VennSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }
}

/// Groups the candidates of unmatched non-cover template vertices by which
/// of those vertices they serve. Requires the cover to be matched.
pub fn venn_summary(cs: &CandidateSets, cover: &NodeCover, m: &PartialMatch) -> Result<VennSummary> {
    if let Some(&u) = cover.vertices().iter().find(|&&u| !m.contains_template(u)) {
        return Err(Error::Contract(format!("node cover vertex {u} is not matched")));
    }
    let outside: Vec<usize> =
        (0..cs.template_count()).filter(|&u| !cover.contains(u) && !m.contains_template(u)).collect();
    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for w in 0..cs.world_count() {
        let members: Vec<usize> = outside.iter().copied().filter(|&u| cs.contains(u, w)).collect();
        if !members.is_empty() {
            groups.entry(members).or_default().push(w);
        }
    }
    let mut regions: Vec<VennRegion> =
        groups.into_iter().map(|(members, world)| VennRegion { size: world.len(), members, world }).collect();
    regions.sort_by(|a, b| a.world[0].cmp(&b.world[0]));
    Ok(VennSummary { regions })
}

/// Something [`export_dot`] can draw.
pub trait DotExport {
    fn write_dot(&self) -> String;
}

impl DotExport for ColoredSubgraph {
    fn write_dot(&self) -> String {
        let nodes: Vec<(String, String)> = self
            .vertices
            .iter()
            .map(|v| (format!("w{}", v.world), format!("label=\"{}\", color_class=\"{}\"", v.world, join(&v.color))))
            .collect();
        let edges: Vec<(String, String)> = self.edges.iter().map(|(a, b)| (format!("w{a}"), format!("w{b}"))).collect();
        dot_text(self.directed, &nodes, &edges)
    }
}

impl DotExport for CompressedSubgraph {
    fn write_dot(&self) -> String {
        let nodes: Vec<(String, String)> = self
            .supernodes
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("s{i}"), format!("label=\"{}\", color_class=\"{}\"", s.size(), join(&s.color))))
            .collect();
        let edges: Vec<(String, String)> = self.edges.iter().map(|(a, b)| (format!("s{a}"), format!("s{b}"))).collect();
        dot_text(self.directed, &nodes, &edges)
    }
}

pub fn export_dot(g: &impl DotExport) -> String {
    g.write_dot()
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn dot_text(directed: bool, nodes: &[(String, String)], edges: &[(String, String)]) -> String {
    let (kind, arrow) = if directed { ("digraph", "->") } else { ("graph", "--") };
    if nodes.is_empty() {
        return format!("{kind} G {{ }}\n");
    }
    let mut out = format!("{kind} G {{\n");
    for (id, attrs) in nodes {
        let _ = writeln!(out, "  {id} [{attrs}];");
    }
    let mut seen = BTreeSet::new();
    for (a, b) in edges {
        if !directed {
            let key = if a <= b { (a, b) } else { (b, a) };
            if !seen.insert(key) {
                continue;
            }
        }
        let _ = writeln!(out, "  {a} {arrow} {b};");
    }
    out.push_str("}\n");
    out
}
