//! Equivalence-aware backtracking search.
//!
//! Every node of the search tree filters the candidate sets, picks the next
//! template vertex, (in dynamic modes) merges world classes among that
//! vertex's candidates, and branches once per world class instead of once
//! per world vertex. Each leaf is a *representative* solution; together
//! with the class recorded at every assignment it stands for a
//! [`SolutionClass`] whose exact size is tracked with arbitrary precision.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::candidate::{
    candidate_equivalent_implicit, fully_candidate_equivalent_implicit, greedy_node_cover, init_candidates,
    CandidateSets, NodeCover, PartialMatch,
};
use crate::classes::DynamicClasses;
use crate::count::{ratio, BigCount};
use crate::equivalence::{count_factorial_lower_bound, find_equivalence_classes, tewe_formula, Partition};
use crate::graph::{dominates, Problem};

/// Which symmetries the search exploits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquivalenceMode {
    /// No equivalence; every isomorphism is its own representative.
    NE,
    /// Template structural equivalence.
    TE,
    /// World structural equivalence.
    WE,
    /// Template and world structural equivalence.
    TEWE,
    /// Candidate equivalence with respect to the current template vertex,
    /// restricted to candidates no other unmatched vertex can use.
    CE,
    /// Full candidate equivalence.
    FE,
    /// Node-cover equivalence once a node cover is matched, candidate
    /// equivalence before that.
    NC,
}

impl EquivalenceMode {
    pub const ALL: [EquivalenceMode; 7] = [
        EquivalenceMode::NE,
        EquivalenceMode::TE,
        EquivalenceMode::WE,
        EquivalenceMode::TEWE,
        EquivalenceMode::CE,
        EquivalenceMode::FE,
        EquivalenceMode::NC,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EquivalenceMode::NE => "NE",
            EquivalenceMode::TE => "TE",
            EquivalenceMode::WE => "WE",
            EquivalenceMode::TEWE => "TEWE",
            EquivalenceMode::CE => "CE",
            EquivalenceMode::FE => "FE",
            EquivalenceMode::NC => "NC",
        }
    }

    pub fn uses_template_equivalence(self) -> bool {
        matches!(self, EquivalenceMode::TE | EquivalenceMode::TEWE)
    }

    pub fn uses_world_equivalence(self) -> bool {
        !matches!(self, EquivalenceMode::NE | EquivalenceMode::TE)
    }

    pub fn is_dynamic(self) -> bool {
        matches!(self, EquivalenceMode::CE | EquivalenceMode::FE | EquivalenceMode::NC)
    }
}

impl fmt::Display for EquivalenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown equivalence mode `{0}` (expected one of ne, te, we, tewe, ce, fe, nc)")]
pub struct UnknownMode(pub String);

impl FromStr for EquivalenceMode {
    type Err = UnknownMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EquivalenceMode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownMode(s.to_string()))
    }
}

/// One assignment of a representative solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub template: usize,
    /// Template vertices interchangeable with `template` (just `template`
    /// unless template equivalence is in use).
    pub template_class: Vec<usize>,
    /// The representative world vertex.
    pub world: usize,
    /// The world class at assignment time, sorted; contains `world`.
    pub world_class: Vec<usize>,
    /// Choices left for this slot once earlier slots took theirs.
    pub multiplier: BigCount,
}

/// A representative solution plus everything needed to expand it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionClass {
    pub mode: EquivalenceMode,
    pub slots: Vec<Slot>,
    pub count: BigCount,
}

impl SolutionClass {
    /// The representative as a map indexed by template vertex.
    pub fn representative(&self) -> Vec<usize> {
        let mut f = vec![0; self.slots.len()];
        for s in &self.slots {
            f[s.template] = s.world;
        }
        f
    }

    /// Every isomorphism in the class, as maps indexed by template vertex.
    /// Exponential in general; meant for small instances.
    pub fn expand(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if self.mode.uses_template_equivalence() {
            self.expand_orbit(&mut out);
        } else {
            let mut f = vec![usize::MAX; self.slots.len()];
            self.expand_slots(0, &mut f, &mut out);
        }
        out
    }

    fn expand_slots(&self, i: usize, f: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some(slot) = self.slots.get(i) else {
            out.push(f.clone());
            return;
        };
        for &w in &slot.world_class {
            if self.slots[..i].iter().any(|s| f[s.template] == w) {
                continue;
            }
            f[slot.template] = w;
            self.expand_slots(i + 1, f, out);
        }
        f[slot.template] = usize::MAX;
    }

    /// All maps with the same number of template-class members landing in
    /// each world class as the representative.
    fn expand_orbit(&self, out: &mut Vec<Vec<usize>>) {
        let n = self.slots.len();
        let mut tclass = vec![0; n];
        let mut wmembers: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut target: HashMap<(usize, usize), usize> = HashMap::new();
        for s in &self.slots {
            tclass[s.template] = s.template_class[0];
            let wid = s.world_class[0];
            wmembers.entry(wid).or_insert_with(|| s.world_class.clone());
            *target.entry((s.template_class[0], wid)).or_default() += 1;
        }
        let mut wids: Vec<usize> = wmembers.keys().copied().collect();
        wids.sort_unstable();
        let mut f = vec![usize::MAX; n];
        let mut used = std::collections::HashSet::new();
        #[allow(clippy::too_many_arguments)]
        fn rec(
            t: usize,
            tclass: &[usize],
            wids: &[usize],
            wmembers: &HashMap<usize, Vec<usize>>,
            target: &mut HashMap<(usize, usize), usize>,
            used: &mut std::collections::HashSet<usize>,
            f: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if t == f.len() {
                out.push(f.clone());
                return;
            }
            for &wid in wids {
                let key = (tclass[t], wid);
                if target.get(&key).copied().unwrap_or(0) == 0 {
                    continue;
                }
                for &w in &wmembers[&wid] {
                    if used.contains(&w) {
                        continue;
                    }
                    *target.get_mut(&key).unwrap() -= 1;
                    used.insert(w);
                    f[t] = w;
                    rec(t + 1, tclass, wids, wmembers, target, used, f, out);
                    used.remove(&w);
                    *target.get_mut(&key).unwrap() += 1;
                }
            }
        }
        rec(0, &tclass, &wids, &wmembers, &mut target, &mut used, &mut f, out);
    }

    /// One JSON object: `{"assignments":[[t,[w,...]],...],"count":"<decimal>"}`.
    pub fn to_json_line(&self) -> String {
        let assignments: Vec<(usize, &[usize])> =
            self.slots.iter().map(|s| (s.template, s.world_class.as_slice())).collect();
        serde_json::json!({ "assignments": assignments, "count": self.count.to_string() }).to_string()
    }
}

/// Number of isomorphisms a solution class stands for: the product of the
/// slot multipliers, times `prod |C_i|!` under template equivalence. With
/// both template and world equivalence the orbit formula over the static
/// classes recorded in the slots is used instead.
pub fn expansion_count_of(sc: &SolutionClass, tp: &Partition) -> BigCount {
    match sc.mode {
        EquivalenceMode::TEWE => {
            let n = sc.slots.len();
            let tclasses: Vec<Vec<usize>> = dedup_classes(sc.slots.iter().map(|s| s.template_class.clone()));
            let mut wclasses = dedup_classes(sc.slots.iter().map(|s| s.world_class.clone()));
            // world vertices outside every slot class are irrelevant to the count;
            // relabel the slot classes onto a compact vertex range.
            let mut relabel = HashMap::new();
            for c in &wclasses {
                for &w in c {
                    let k = relabel.len();
                    relabel.entry(w).or_insert(k);
                }
            }
            for c in &mut wclasses {
                for w in c.iter_mut() {
                    *w = relabel[w];
                }
            }
            let f: Vec<usize> = sc.representative().iter().map(|w| relabel[w]).collect();
            let tp_local = Partition::from_classes(n, tclasses);
            let wp_local = Partition::from_classes(relabel.len(), wclasses);
            tewe_formula(&f, &tp_local, &wp_local)
        }
        mode => {
            let product = sc.slots.iter().fold(BigCount::one(), |acc, s| acc * &s.multiplier);
            if mode == EquivalenceMode::TE {
                product * count_factorial_lower_bound(tp)
            } else {
                product
            }
        }
    }
}

fn dedup_classes(it: impl Iterator<Item = Vec<usize>>) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = it.collect();
    v.sort();
    v.dedup();
    v
}

/// Removes candidates that cannot extend `m`: used world vertices, world
/// vertices lacking a required self-loop, and (to a fixpoint) any candidate
/// `c` of `u` for which some template neighbour of `u` has no compatible
/// candidate adjacent to `c`. Matched vertices keep exactly their image.
///
/// Returns `false` when some candidate set became empty (dead branch).
pub fn apply_filters(p: &Problem, m: &PartialMatch, cs: &mut CandidateSets) -> bool {
    let tn = p.template.vertex_count();
    let mut used = FixedBitSet::with_capacity(p.world.vertex_count());
    let mut matched = vec![false; tn];
    for &(u, w) in m.pairs() {
        used.insert(w);
        matched[u] = true;
    }
    for &(u, w) in m.pairs() {
        let keep = cs.contains(u, w);
        cs.get_mut(u).clear();
        if keep {
            cs.insert(u, w);
        }
    }
    for (u, &is_matched) in matched.iter().enumerate() {
        if !is_matched {
            cs.get_mut(u).difference_with(&used);
        }
        if let Some(ml) = p.template.multiplicity(u, u) {
            let bad: Vec<usize> = cs.iter(u).filter(|&c| !dominates(p.world.multiplicity(c, c), ml)).collect();
            for c in bad {
                cs.remove(u, c);
            }
        }
        if cs.is_empty(u) {
            return false;
        }
    }
    arc_consistency(p, cs)
}

fn arc_consistency(p: &Problem, cs: &mut CandidateSets) -> bool {
    let t = &p.template;
    let tn = t.vertex_count();
    let nbrs: Vec<Vec<usize>> = (0..tn).map(|u| t.neighbors(u)).collect();
    let mut queued = vec![true; tn];
    let mut queue: std::collections::VecDeque<usize> = (0..tn).collect();
    while let Some(u) = queue.pop_front() {
        queued[u] = false;
        let mut changed = false;
        for &u2 in &nbrs[u] {
            if revise(p, cs, u, u2) {
                changed = true;
            }
        }
        if changed {
            if cs.is_empty(u) {
                return false;
            }
            for &x in &nbrs[u] {
                if !queued[x] {
                    queued[x] = true;
                    queue.push_back(x);
                }
            }
        }
    }
    true
}

/// Drops candidates of `u` without support among candidates of `u2`.
fn revise(p: &Problem, cs: &mut CandidateSets, u: usize, u2: usize) -> bool {
    let out_m = p.template.multiplicity(u, u2);
    let in_m = p.template.multiplicity(u2, u);
    let w = &p.world;
    let unsupported: Vec<usize> = cs
        .iter(u)
        .filter(|&c| {
            let supported = match out_m {
                Some(om) => w.out_edges(c).any(|(c2, mw)| {
                    c2 != c
                        && cs.contains(u2, c2)
                        && dominates(Some(mw), om)
                        && in_m.is_none_or(|im| dominates(w.multiplicity(c2, c), im))
                }),
                None => w
                    .in_edges(c)
                    .any(|(c2, mw)| c2 != c && cs.contains(u2, c2) && in_m.is_none_or(|im| dominates(Some(mw), im))),
            };
            !supported
        })
        .collect();
    for &c in &unsupported {
        cs.remove(u, c);
    }
    !unsupported.is_empty()
}

/// Unmatched template vertex with the fewest candidates, ties broken by
/// larger template degree and then lower index. Node-cover vertices come
/// first when a cover is given.
pub fn next_template_vertex(
    p: &Problem,
    cs: &CandidateSets,
    m: &PartialMatch,
    cover: Option<&NodeCover>,
) -> Option<usize> {
    (0..p.template.vertex_count()).filter(|&u| !m.contains_template(u)).min_by_key(|&u| {
        let tier = cover.map_or(0, |c| usize::from(!c.contains(u)));
        (tier, cs.len(u), std::cmp::Reverse(p.template.degree(u)), u)
    })
}

/// A branch offered for the current template vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldChoice {
    pub representative: usize,
    /// The whole class, including members already matched elsewhere.
    pub members: Vec<usize>,
    /// `|members|` minus the members already matched.
    pub multiplier: BigCount,
}

/// Search state over one problem: candidate sets, the partial match and
/// the current world classes. [`solve`] drives it; the individual steps are
/// public so a search can also be stepped by hand.
pub struct SearchState<'p> {
    problem: &'p Problem,
    mode: EquivalenceMode,
    template_classes: Partition,
    world_classes: Partition,
    cover: Option<NodeCover>,
    cands: CandidateSets,
    matching: PartialMatch,
    used: FixedBitSet,
    classes: DynamicClasses,
    slots: Vec<Slot>,
    saved: Vec<CandidateSets>,
}

impl<'p> SearchState<'p> {
    pub fn new(problem: &'p Problem, mode: EquivalenceMode) -> Self {
        let tn = problem.template.vertex_count();
        let wn = problem.world.vertex_count();
        let template_classes = if mode.uses_template_equivalence() {
            find_equivalence_classes(&problem.template)
        } else {
            Partition::singletons(tn)
        };
        let world_classes = if mode.uses_world_equivalence() {
            find_equivalence_classes(&problem.world)
        } else {
            Partition::singletons(wn)
        };
        let mut classes = DynamicClasses::singletons(wn);
        for c in world_classes.classes() {
            for &w in &c[1..] {
                classes.union(c[0], w);
            }
        }
        let cover = (mode == EquivalenceMode::NC).then(|| greedy_node_cover(&problem.template));
        SearchState {
            problem,
            mode,
            template_classes,
            world_classes,
            cover,
            cands: init_candidates(problem),
            matching: PartialMatch::new(),
            used: FixedBitSet::with_capacity(wn),
            classes,
            slots: Vec::new(),
            saved: Vec::new(),
        }
    }

    pub fn mode(&self) -> EquivalenceMode {
        self.mode
    }

    pub fn candidates(&self) -> &CandidateSets {
        &self.cands
    }

    pub fn partial_match(&self) -> &PartialMatch {
        &self.matching
    }

    pub fn template_classes(&self) -> &Partition {
        &self.template_classes
    }

    pub fn world_classes(&self) -> &Partition {
        &self.world_classes
    }

    pub fn node_cover(&self) -> Option<&NodeCover> {
        self.cover.as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.matching.len() == self.problem.template.vertex_count()
    }

    /// Current class of world vertex `w`, sorted.
    pub fn world_class_of(&self, w: usize) -> Vec<usize> {
        self.classes.members(w)
    }

    pub fn apply_filters(&mut self) -> bool {
        apply_filters(self.problem, &self.matching, &mut self.cands)
    }

    pub fn next_template_vertex(&self) -> Option<usize> {
        next_template_vertex(self.problem, &self.cands, &self.matching, self.cover.as_ref())
    }

    fn cover_matched(&self) -> bool {
        self.cover.as_ref().is_some_and(|c| c.vertices().iter().all(|&u| self.matching.contains_template(u)))
    }

    fn unmatched(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.problem.template.vertex_count()).filter(|&u| !self.matching.contains_template(u))
    }

    /// Merges world classes among the candidates of `u` according to the
    /// mode. Returns a checkpoint for [`Self::restore_equivalence`]. A no-op
    /// for static modes.
    pub fn recompute_equivalence(&mut self, u: usize) -> usize {
        let checkpoint = self.classes.checkpoint();
        if !self.mode.is_dynamic() {
            return checkpoint;
        }
        let cands = self.cands.to_vec(u);
        let p = self.problem;
        match self.mode {
            EquivalenceMode::FE => {
                let cs = &self.cands;
                group_and_merge(&mut self.classes, &cands, |a, b| fully_candidate_equivalent_implicit(p, cs, a, b));
            }
            EquivalenceMode::NC if self.cover_matched() => {
                let cover = self.cover.as_ref().unwrap();
                let outside: Vec<usize> = self.unmatched().filter(|&x| !cover.contains(x)).collect();
                let cs = &self.cands;
                let mut by_signature: HashMap<Vec<bool>, usize> = HashMap::new();
                for &c in &cands {
                    let sig: Vec<bool> = outside.iter().map(|&x| cs.contains(x, c)).collect();
                    match by_signature.get(&sig) {
                        Some(&r) => {
                            self.classes.union(r, c);
                        }
                        None => {
                            by_signature.insert(sig, c);
                        }
                    }
                }
            }
            _ => {
                let others: Vec<usize> = self.unmatched().filter(|&x| x != u).collect();
                let cs = &self.cands;
                let exclusive: Vec<usize> =
                    cands.iter().copied().filter(|&c| others.iter().all(|&x| !cs.contains(x, c))).collect();
                group_and_merge(&mut self.classes, &exclusive, |a, b| candidate_equivalent_implicit(p, cs, u, a, b));
            }
        }
        checkpoint
    }

    pub fn restore_equivalence(&mut self, checkpoint: usize) {
        self.classes.rollback(checkpoint);
    }

    /// One branch per current world class meeting `C[u]`.
    pub fn generate_world_vertices(&self, u: usize) -> Vec<WorldChoice> {
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for c in self.cands.iter(u) {
            let root = self.classes.find(c);
            if seen.contains(&root) {
                continue;
            }
            seen.push(root);
            let members = self.classes.members(c);
            let taken = members.iter().filter(|&&w| self.used.contains(w)).count();
            out.push(WorldChoice { representative: c, multiplier: BigCount::from(members.len() - taken), members });
        }
        out
    }

    /// Matches `u` to the choice's representative, saving the candidate
    /// sets for [`Self::unassign`].
    pub fn assign(&mut self, u: usize, choice: &WorldChoice) {
        let w = choice.representative;
        self.saved.push(self.cands.clone());
        self.cands.set_singleton(u, w);
        self.used.insert(w);
        self.matching.push(u, w);
        self.slots.push(Slot {
            template: u,
            template_class: self.template_classes.class_of(u).to_vec(),
            world: w,
            world_class: choice.members.clone(),
            multiplier: choice.multiplier.clone(),
        });
    }

    pub fn unassign(&mut self) {
        if let Some((_, w)) = self.matching.pop() {
            self.used.set(w, false);
            self.slots.pop();
            self.cands = self.saved.pop().expect("unbalanced unassign");
        }
    }

    /// After the branch `u -> choice` is exhausted, forbid it for the
    /// unmatched template vertices equivalent to `u` (the whole world class
    /// under TEWE). Lasts until this node's candidate sets are restored.
    pub fn te_prune(&mut self, u: usize, choice: &WorldChoice) {
        if !self.mode.uses_template_equivalence() {
            return;
        }
        let blocked: &[usize] = if self.mode == EquivalenceMode::TEWE {
            &choice.members
        } else {
            std::slice::from_ref(&choice.representative)
        };
        for &u2 in self.template_classes.class_of(u) {
            if u2 != u && !self.matching.contains_template(u2) {
                for &w in blocked {
                    self.cands.remove(u2, w);
                }
            }
        }
    }

    /// The solution class of the current (complete) match.
    pub fn current_class(&self) -> SolutionClass {
        let mut sc = SolutionClass { mode: self.mode, slots: self.slots.clone(), count: BigCount::zero() };
        sc.count = match self.mode {
            EquivalenceMode::TEWE => tewe_formula(&sc.representative(), &self.template_classes, &self.world_classes),
            _ => expansion_count_of(&sc, &self.template_classes),
        };
        sc
    }
}

/// Greedy grouping by comparison with one representative per group.
fn group_and_merge(classes: &mut DynamicClasses, items: &[usize], mut eq: impl FnMut(usize, usize) -> bool) {
    let mut reps: Vec<usize> = Vec::new();
    for &c in items {
        let root = classes.find(c);
        if reps.iter().any(|&r| classes.find(r) == root) {
            continue;
        }
        match reps.iter().copied().find(|&r| eq(r, c)) {
            Some(r) => {
                classes.union(r, c);
            }
            None => reps.push(c),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchLimits {
    pub timeout: Option<Duration>,
    /// Stop after this many representative solutions.
    pub max_solutions: Option<u64>,
}

impl SearchLimits {
    pub fn timeout(t: Duration) -> Self {
        SearchLimits { timeout: Some(t), max_solutions: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Completed,
    TimedOut,
    /// `max_solutions` representatives were found before the tree was exhausted.
    SolutionLimit,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Completed => "completed",
            SearchStatus::TimedOut => "timed_out",
            SearchStatus::SolutionLimit => "solution_limit",
        }
    }
}

/// Statistics of one run. Counts are exact when `status` is
/// [`SearchStatus::Completed`] and lower bounds otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub mode: EquivalenceMode,
    pub representative_count: u64,
    pub total_count: BigCount,
    pub wall_time: Duration,
    pub status: SearchStatus,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

impl SearchReport {
    /// Representatives per isomorphism; `None` when nothing was found.
    pub fn compression_rate(&self) -> Option<f64> {
        ratio(&BigCount::from(self.representative_count), &self.total_count)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "representatives": self.representative_count,
            "total": self.total_count.to_string(),
            "compression_rate": self.compression_rate(),
            "wall_time_s": self.wall_time.as_secs_f64(),
            "status": self.status.as_str(),
        })
    }
}

struct Run<'s, 'p, F> {
    state: SearchState<'p>,
    deadline: Option<Instant>,
    limits: SearchLimits,
    reps: u64,
    total: BigCount,
    nodes: u64,
    status: SearchStatus,
    sink: &'s mut F,
}

impl<F: FnMut(&SolutionClass)> Run<'_, '_, F> {
    /// Returns `false` once the run must stop.
    fn descend(&mut self) -> bool {
        self.nodes += 1;
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.status = SearchStatus::TimedOut;
            return false;
        }
        if self.state.is_complete() {
            let sc = self.state.current_class();
            self.reps += 1;
            self.total += &sc.count;
            (self.sink)(&sc);
            if self.limits.max_solutions.is_some_and(|m| self.reps >= m) {
                self.status = SearchStatus::SolutionLimit;
                return false;
            }
            return true;
        }
        if !self.state.apply_filters() {
            return true;
        }
        let u = self.state.next_template_vertex().expect("incomplete match has an unmatched vertex");
        let checkpoint = self.state.recompute_equivalence(u);
        let choices = self.state.generate_world_vertices(u);
        let mut keep_going = true;
        for choice in &choices {
            self.state.assign(u, choice);
            keep_going = self.descend();
            self.state.unassign();
            if !keep_going {
                break;
            }
            self.state.te_prune(u, choice);
        }
        self.state.restore_equivalence(checkpoint);
        keep_going
    }
}

/// Enumerates all subgraph isomorphisms of `p` as solution classes under
/// `mode`, handing each class to `sink` as it is found.
pub fn solve<F: FnMut(&SolutionClass)>(
    p: &Problem,
    mode: EquivalenceMode,
    limits: SearchLimits,
    mut sink: F,
) -> SearchReport {
    let start = Instant::now();
    let deadline = limits.timeout.map(|t| start + t);
    let mut run = Run {
        state: SearchState::new(p, mode),
        deadline,
        limits,
        reps: 0,
        total: BigCount::zero(),
        nodes: 0,
        status: SearchStatus::Completed,
        sink: &mut sink,
    };
    if p.template.vertex_count() <= p.world.vertex_count() {
        run.descend();
    }
    SearchReport {
        mode,
        representative_count: run.reps,
        total_count: run.total,
        wall_time: start.elapsed(),
        status: run.status,
        nodes: run.nodes,
    }
}

/// [`solve`] without collecting the classes.
pub fn count(p: &Problem, mode: EquivalenceMode, limits: SearchLimits) -> SearchReport {
    solve(p, mode, limits, |_| {})
}
