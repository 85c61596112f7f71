//! Folded subgroup automata (Stallings graphs).
//!
//! Every edge also carries a label in the free group on the defining
//! generators, kept consistent through the folds by gauge changes at the
//! vertex being absorbed. Reading a loop at the base multiplies those labels
//! into an expression of the element in the defining generators.

use std::collections::HashMap;

use serde::Serialize;

use crate::word::{for_each_reduced_word, Letter, Word};

#[derive(Clone, Debug)]
pub struct SubgroupAutomaton {
    ambient_rank: usize,
    generators: Vec<Word>,
    states: usize,
    /// `targets[s * width + key]`: state reached from `s` by the letter with `key`.
    targets: Vec<Option<u32>>,
    labels: Vec<Word>,
}

/// First failure of a bounded root-closedness scan: `root^exponent` lies in
/// the subgroup but `root` does not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootViolation {
    pub root: Word,
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSummary {
    /// Candidate words actually examined after pruning.
    pub examined: u64,
}

#[derive(Clone, Copy)]
struct Edge {
    from: usize,
    to: usize,
    generator: u32,
    alive: bool,
}

struct Folder {
    edges: Vec<Edge>,
    labels: Vec<Word>,
    alive: Vec<bool>,
}

impl Folder {
    fn add_vertex(&mut self) -> usize {
        self.alive.push(true);
        self.alive.len() - 1
    }

    fn add_edge(&mut self, from: usize, to: usize, l: Letter, label: Word) {
        let (from, to, label) = if l.is_inverse() { (to, from, label.inverse()) } else { (from, to, label) };
        self.edges.push(Edge { from, to, generator: l.index(), alive: true });
        self.labels.push(label);
    }

    /// Half-edges at `v`: (key, edge, other end, label read from `v`).
    fn half_edges(&self, v: usize) -> Vec<(usize, usize, usize, Word)> {
        let mut out = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if !e.alive {
                continue;
            }
            if e.from == v {
                out.push((Letter::pos(e.generator).key(), id, e.to, self.labels[id].clone()));
            }
            if e.to == v {
                out.push((Letter::neg(e.generator).key(), id, e.from, self.labels[id].inverse()));
            }
        }
        out
    }

    fn gauge(&mut self, v: usize, h: &Word) {
        if h.is_identity() {
            return;
        }
        let hi = h.inverse();
        for (id, e) in self.edges.iter().enumerate() {
            if !e.alive {
                continue;
            }
            if e.to == v {
                self.labels[id] = self.labels[id].multiply(h);
            }
            if e.from == v {
                self.labels[id] = hi.multiply(&self.labels[id]);
            }
        }
    }

    /// Performs one fold somewhere; false once the graph is folded.
    fn fold_once(&mut self) -> bool {
        for v in 0..self.alive.len() {
            if !self.alive[v] {
                continue;
            }
            let mut seen: HashMap<usize, (usize, usize, Word)> = HashMap::new();
            for (key, id, end, label) in self.half_edges(v) {
                let Some((id1, end1, label1)) = seen.get(&key).cloned() else {
                    seen.insert(key, (id, end, label));
                    continue;
                };
                if id1 == id {
                    continue;
                }
                if end1 == end {
                    self.edges[id].alive = false;
                    return true;
                }
                // absorb a non-base endpoint into the other one
                let (dying, dying_edge, h, survivor) = if end != 0 {
                    (end, id, label.inverse().multiply(&label1), end1)
                } else {
                    (end1, id1, label1.inverse().multiply(&label), end)
                };
                self.gauge(dying, &h);
                for e in self.edges.iter_mut() {
                    if e.from == dying {
                        e.from = survivor;
                    }
                    if e.to == dying {
                        e.to = survivor;
                    }
                }
                self.edges[dying_edge].alive = false;
                self.alive[dying] = false;
                return true;
            }
        }
        false
    }

    fn prune(&mut self) {
        loop {
            let mut degree = vec![0usize; self.alive.len()];
            for e in self.edges.iter().filter(|e| e.alive) {
                degree[e.from] += 1;
                degree[e.to] += 1;
            }
            let mut changed = false;
            for v in 1..self.alive.len() {
                if self.alive[v] && degree[v] <= 1 {
                    self.alive[v] = false;
                    for e in self.edges.iter_mut() {
                        if e.alive && (e.from == v || e.to == v) {
                            e.alive = false;
                        }
                    }
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }
}

impl SubgroupAutomaton {
    /// Folded core automaton of the subgroup generated by `generators` in the
    /// free group whose rank is the largest generator index used.
    pub fn build(generators: &[Word]) -> SubgroupAutomaton {
        let rank = generators.iter().map(|g| g.max_generator()).max().unwrap_or(0) as usize;
        Self::build_in(generators, rank.max(1))
    }

    /// As [`build`](Self::build) but inside a free group of the given rank.
    pub fn build_in(generators: &[Word], ambient_rank: usize) -> SubgroupAutomaton {
        let needed = generators.iter().map(|g| g.max_generator()).max().unwrap_or(0) as usize;
        let ambient_rank = ambient_rank.max(needed);
        let mut f = Folder { edges: Vec::new(), labels: Vec::new(), alive: vec![true] };
        for (i, g) in generators.iter().enumerate() {
            if g.is_identity() {
                continue;
            }
            let n = g.len();
            let mut cur = 0usize;
            for (k, &l) in g.letters().iter().enumerate() {
                let next = if k + 1 == n { 0 } else { f.add_vertex() };
                let label = if k == 0 { Word::generator(i as u32 + 1) } else { Word::identity() };
                f.add_edge(cur, next, l, label);
                cur = next;
            }
        }
        while f.fold_once() {}
        f.prune();
        Self::from_folded(f, ambient_rank, generators.to_vec())
    }

    /// Renumbers states in breadth-first order from the base, scanning letters
    /// by key, so equal subgroups give identical tables.
    fn from_folded(f: Folder, ambient_rank: usize, generators: Vec<Word>) -> SubgroupAutomaton {
        let width = 2 * ambient_rank;
        let mut adjacency: HashMap<usize, Vec<(usize, usize, Word)>> = HashMap::new();
        for (id, e) in f.edges.iter().enumerate() {
            if !e.alive {
                continue;
            }
            let l = Letter::pos(e.generator);
            adjacency.entry(e.from).or_default().push((l.key(), e.to, f.labels[id].clone()));
            adjacency.entry(e.to).or_default().push((l.inverse().key(), e.from, f.labels[id].inverse()));
        }
        let mut order: HashMap<usize, usize> = HashMap::new();
        let mut queue = vec![0usize];
        order.insert(0, 0);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            let mut out = adjacency.get(&v).cloned().unwrap_or_default();
            out.sort_by_key(|(k, _, _)| *k);
            for (_, to, _) in out {
                if !order.contains_key(&to) {
                    order.insert(to, queue.len());
                    queue.push(to);
                }
            }
        }
        let states = queue.len();
        let mut targets = vec![None; states * width];
        let mut labels = vec![Word::identity(); states * width];
        for (&v, out) in &adjacency {
            let s = order[&v];
            for (key, to, label) in out {
                targets[s * width + key] = Some(order[to] as u32);
                labels[s * width + key] = label.clone();
            }
        }
        SubgroupAutomaton { ambient_rank, generators, states, targets, labels }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn edge_count(&self) -> usize {
        self.targets.iter().filter(|t| t.is_some()).count() / 2
    }

    /// Rank of the subgroup, `E - V + 1` on the core graph.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.states
    }

    /// Transition from `state` by `l`; letters outside the ambient alphabet are dead.
    pub fn step(&self, state: usize, l: Letter) -> Option<usize> {
        let key = l.key();
        if key >= 2 * self.ambient_rank {
            return None;
        }
        self.targets[state * 2 * self.ambient_rank + key].map(|t| t as usize)
    }

    pub fn read_from(&self, mut state: usize, letters: &[Letter]) -> Option<usize> {
        for &l in letters {
            state = self.step(state, l)?;
        }
        Some(state)
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.read_from(0, w.letters()) == Some(0)
    }

    /// `w` written in the defining generators (`e_i` stands for the `i`-th
    /// one), or `None` if `w` is not in the subgroup.
    pub fn express(&self, w: &Word) -> Option<Word> {
        let width = 2 * self.ambient_rank;
        let mut state = 0usize;
        let mut acc = Word::identity();
        for &l in w.letters() {
            let key = l.key();
            if key >= width {
                return None;
            }
            acc.mul_assign(&self.labels[state * width + key]);
            state = self.targets[state * width + key]? as usize;
        }
        (state == 0).then_some(acc)
    }

    /// Whether the automaton is the rose on all `ambient_rank` letters.
    pub fn is_full(&self) -> bool {
        self.states == 1 && self.targets.iter().all(|t| t.is_some())
    }

    /// Same subgroup: equal canonical graphs.
    pub fn same_subgroup(&self, other: &SubgroupAutomaton) -> bool {
        self.canonical_edges() == other.canonical_edges()
    }

    /// Edge list `(from, generator, to)` of the canonical numbering.
    pub fn canonical_edges(&self) -> Vec<(usize, u32, usize)> {
        let width = 2 * self.ambient_rank;
        let mut out = Vec::new();
        for s in 0..self.states {
            for key in (0..width).step_by(2) {
                if let Some(t) = self.targets[s * width + key] {
                    out.push((s, Letter::from_key(key).index(), t as usize));
                }
            }
        }
        out
    }

    /// Bounded root-closedness: for every reduced `w` with `|w| <= max_len` and
    /// `2 <= m <= max_exp`, `w^m` in the subgroup forces `w` in the subgroup.
    /// Returns the shortlex-least violating root (with its least exponent).
    ///
    /// Writes `w = c ŵ c^-1` with `ŵ` cyclically reduced; `w^m` lies in the
    /// subgroup iff `c` reads from the base to some state `s` and `ŵ^m` is a
    /// loop at `s`, so only readable `c` and `ŵ` are enumerated.
    pub fn is_root_closed_bounded(
        &self,
        max_len: usize,
        max_exp: u32,
    ) -> (Result<(), RootViolation>, ScanSummary) {
        let mut best: Option<RootViolation> = None;
        let mut examined = 0u64;
        let mut conj: Vec<Letter> = Vec::new();
        self.root_scan_conj(&mut conj, 0, max_len, max_exp, &mut best, &mut examined);
        (best.map_or(Ok(()), Err), ScanSummary { examined })
    }

    fn root_scan_conj(
        &self,
        conj: &mut Vec<Letter>,
        state: usize,
        max_len: usize,
        max_exp: u32,
        best: &mut Option<RootViolation>,
        examined: &mut u64,
    ) {
        let core_budget = max_len - 2 * conj.len();
        if core_budget >= 1 {
            let mut core: Vec<Letter> = Vec::new();
            self.root_scan_core(conj, state, &mut core, state, core_budget, max_exp, best, examined);
        }
        if 2 * (conj.len() + 1) < max_len {
            for key in 0..2 * self.ambient_rank {
                let l = Letter::from_key(key);
                if conj.last() == Some(&l.inverse()) {
                    continue;
                }
                if let Some(next) = self.step(state, l) {
                    conj.push(l);
                    self.root_scan_conj(conj, next, max_len, max_exp, best, examined);
                    conj.pop();
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn root_scan_core(
        &self,
        conj: &[Letter],
        start: usize,
        core: &mut Vec<Letter>,
        state: usize,
        budget: usize,
        max_exp: u32,
        best: &mut Option<RootViolation>,
        examined: &mut u64,
    ) {
        if core.len() == budget {
            return;
        }
        for key in 0..2 * self.ambient_rank {
            let l = Letter::from_key(key);
            match core.last() {
                Some(&p) if p == l.inverse() => continue,
                None if conj.last() == Some(&l.inverse()) => continue,
                _ => {}
            }
            let Some(next) = self.step(state, l) else { continue };
            core.push(l);
            *examined += 1;
            let first = core[0];
            let closes = core.len() == 1 || first != l.inverse();
            if closes && conj.last() != Some(&l) && next != start {
                let mut end = next;
                for m in 2..=max_exp {
                    match self.read_from(end, core) {
                        Some(e) => end = e,
                        None => break,
                    }
                    if end == start {
                        let mut letters = conj.to_vec();
                        letters.extend_from_slice(core);
                        letters.extend(conj.iter().rev().map(|x| x.inverse()));
                        let root = Word::from_letters(letters);
                        let better = best.as_ref().map_or(true, |b| root < b.root);
                        if better {
                            *best = Some(RootViolation { root, exponent: m });
                        }
                        break;
                    }
                }
            }
            self.root_scan_core(conj, start, core, next, budget, max_exp, best, examined);
            core.pop();
        }
    }
}

/// Bounded check that membership in every automaton of `lhs` holds exactly
/// when membership in `target` does, over all reduced words of length at most
/// `max_len` in `rank` generators. Returns the shortlex-least disagreement.
///
/// Subtrees where `target` and some member of `lhs` are both dead are skipped:
/// both sides are false on every extension.
pub fn intersection_agrees_bounded(
    lhs: &[&SubgroupAutomaton],
    target: &SubgroupAutomaton,
    rank: usize,
    max_len: usize,
) -> (Result<(), Word>, ScanSummary) {
    let mut best: Option<Word> = None;
    let mut examined = 0u64;
    let mut states: Vec<Vec<Option<usize>>> = vec![vec![Some(0); lhs.len() + 1]];
    for_each_reduced_word(rank, max_len, |prefix| {
        states.truncate(prefix.len());
        let l = *prefix.last().unwrap();
        let prev = &states[prefix.len() - 1];
        let mut cur: Vec<Option<usize>> = Vec::with_capacity(prev.len());
        for (k, s) in prev.iter().enumerate() {
            let a = if k < lhs.len() { lhs[k] } else { target };
            cur.push(s.and_then(|s| a.step(s, l)));
        }
        examined += 1;
        let in_all = cur[..lhs.len()].iter().all(|s| *s == Some(0));
        let in_target = cur[lhs.len()] == Some(0);
        if in_all != in_target {
            let w = Word::from_letters(prefix.iter().copied());
            if best.as_ref().map_or(true, |b| w < *b) {
                best = Some(w);
            }
        }
        let prune = cur[lhs.len()].is_none() && cur[..lhs.len()].iter().any(|s| s.is_none());
        states.push(cur);
        !prune
    });
    (best.map_or(Ok(()), Err), ScanSummary { examined })
}

/// Whether `generators` is a basis of the free group of rank `ambient_rank`:
/// exactly `ambient_rank` elements generating everything.
pub fn is_basis(generators: &[Word], ambient_rank: usize) -> bool {
    if generators.len() != ambient_rank || generators.iter().any(|g| g.max_generator() as usize > ambient_rank) {
        return false;
    }
    SubgroupAutomaton::build_in(generators, ambient_rank).is_full()
}
