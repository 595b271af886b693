//! DFAs, Mealy machines and transition-based DPAs with min-even acceptance.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::congruence::Ts;
use crate::error::{Error, Result};
use crate::graph;
use crate::words::{Alphabet, Sym, UpWord, Word};

/// Coarsest partition of the states of a complete system that respects
/// `initial` and the edge labels. Class ids follow the first occurrence.
pub(crate) fn refine_partition(
    ts: &Ts,
    initial: &[usize],
    label: impl Fn(usize, Sym) -> usize,
) -> Vec<usize> {
    let n = ts.size();
    let syms = ts.num_syms();
    let mut class = initial.to_vec();
    let mut count = class.iter().copied().collect::<BTreeSet<_>>().len();
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next = vec![0; n];
        for q in 0..n {
            let mut sig = Vec::with_capacity(1 + 2 * syms);
            sig.push(class[q]);
            for a in 0..syms {
                sig.push(class[ts.succ(q, a)]);
                sig.push(label(q, a));
            }
            let len = ids.len();
            next[q] = *ids.entry(sig).or_insert(len);
        }
        let new_count = ids.len();
        class = next;
        if new_count == count {
            return class;
        }
        count = new_count;
    }
}

/// Quotient of a complete system by a partition.
fn quotient(ts: &Ts, class: &[usize]) -> Ts {
    let k = class.iter().max().map_or(0, |m| m + 1);
    let mut q = Ts::with_states(ts.num_syms(), k);
    for p in 0..ts.size() {
        for a in 0..ts.num_syms() {
            q.set(class[p], a, Some(class[ts.succ(p, a)]));
        }
    }
    q
}

/// Reachable part renumbered from `start`, with per-transition data carried along.
fn reroot<T: Clone>(ts: &Ts, data: &[T], start: usize) -> (Ts, Vec<T>, Vec<Option<usize>>) {
    let (new_ts, map) = ts.canonical_from(start);
    let syms = ts.num_syms();
    let mut out = Vec::with_capacity(new_ts.size() * syms);
    let mut inv = vec![0; new_ts.size()];
    for (old, m) in map.iter().enumerate() {
        if let Some(m) = m {
            inv[*m] = old;
        }
    }
    for &old in &inv {
        for a in 0..syms {
            out.push(data[old * syms + a].clone());
        }
    }
    (new_ts, out, map)
}

/// Deterministic finite automaton over a complete transition system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: Alphabet,
    pub ts: Ts,
    pub finals: Vec<bool>,
}

impl Dfa {
    pub fn new(alphabet: Alphabet, ts: Ts, finals: Vec<bool>) -> Result<Self> {
        if !ts.is_complete() {
            return Err(Error::Incomplete);
        }
        if ts.num_syms() != alphabet.len() || finals.len() != ts.size() {
            return Err(Error::AlphabetMismatch);
        }
        Ok(Dfa {
            alphabet,
            ts,
            finals,
        })
    }

    pub fn size(&self) -> usize {
        self.ts.size()
    }

    pub fn accepts(&self, x: &[Sym]) -> bool {
        self.finals[self.ts.run(0, x).expect("complete")]
    }

    pub fn accepts_from(&self, q: usize, x: &[Sym]) -> bool {
        self.finals[self.ts.run(q, x).expect("complete")]
    }

    /// Minimal DFA with canonical state numbering.
    pub fn minimize(&self) -> Dfa {
        let finals: Vec<bool> = (0..self.ts.size() * self.ts.num_syms())
            .map(|i| self.finals[i / self.ts.num_syms()])
            .collect();
        let (ts, flags, _) = reroot(&self.ts, &finals, 0);
        let syms = ts.num_syms();
        let init: Vec<usize> = (0..ts.size()).map(|q| flags[q * syms] as usize).collect();
        let class = refine_partition(&ts, &init, |_, _| 0);
        let q = quotient(&ts, &class);
        let mut qflags = vec![false; q.size() * syms];
        for (p, &c) in class.iter().enumerate() {
            for a in 0..syms {
                qflags[c * syms + a] = flags[p * syms];
            }
        }
        let (cts, cflags, _) = reroot(&q, &qflags, class[0]);
        let finals = (0..cts.size()).map(|p| cflags[p * syms]).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            ts: cts,
            finals,
        }
    }

    /// The llex-minimal word accepted by exactly one of the two DFAs.
    pub fn separating_word(&self, other: &Dfa) -> Option<Word> {
        let syms = self.ts.num_syms();
        let mut seen: HashMap<(usize, usize), Word> = HashMap::new();
        let mut queue = VecDeque::new();
        seen.insert((0, 0), Vec::new());
        queue.push_back((0, 0));
        while let Some((p, q)) = queue.pop_front() {
            let w = seen[&(p, q)].clone();
            if self.finals[p] != other.finals[q] {
                return Some(w);
            }
            for a in 0..syms {
                let t = (self.ts.succ(p, a), other.ts.succ(q, a));
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(t) {
                    let mut x = w.clone();
                    x.push(a);
                    e.insert(x);
                    queue.push_back(t);
                }
            }
        }
        None
    }

    pub fn equivalent(&self, other: &Dfa) -> bool {
        self.separating_word(other).is_none()
    }

    /// Shortest non-empty prefix of `v^ω` accepted from `q`, if any.
    pub fn accepts_prefix_of_period(&self, q: usize, v: &[Sym]) -> Option<Word> {
        if v.is_empty() {
            return None;
        }
        let mut p = q;
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        // Keyed on (state, offset into v) so the scan stops after one full cycle.
        while seen.insert((p, out.len() % v.len())) {
            let a = v[out.len() % v.len()];
            p = self.ts.succ(p, a);
            out.push(a);
            if self.finals[p] {
                return Some(out);
            }
        }
        None
    }

    /// Length of the shortest non-empty prefix of the suffix of `w` starting at
    /// position `pos` that is accepted from `q`.
    pub fn shortest_accepted_prefix(&self, q: usize, w: &UpWord, pos: usize) -> Option<usize> {
        let mut p = q;
        let mut i = pos;
        let mut seen = BTreeSet::new();
        while seen.insert((p, w.align(i))) {
            p = self.ts.succ(p, w.symbol_at(i));
            i += 1;
            if self.finals[p] {
                return Some(i - pos);
            }
        }
        None
    }
}

/// Mealy machine with an output priority on every transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mealy {
    pub alphabet: Alphabet,
    pub ts: Ts,
    /// Output per transition, indexed by `state * |Σ| + symbol`.
    pub out: Vec<usize>,
}

impl Mealy {
    pub fn new(alphabet: Alphabet, ts: Ts, out: Vec<usize>) -> Result<Self> {
        if !ts.is_complete() {
            return Err(Error::Incomplete);
        }
        if ts.num_syms() != alphabet.len() || out.len() != ts.size() * ts.num_syms() {
            return Err(Error::AlphabetMismatch);
        }
        Ok(Mealy { alphabet, ts, out })
    }

    /// Machine with one state and constant output.
    pub fn constant(alphabet: Alphabet, value: usize) -> Self {
        let syms = alphabet.len();
        let mut ts = Ts::new(syms);
        for a in 0..syms {
            ts.set(0, a, Some(0));
        }
        Mealy {
            alphabet,
            ts,
            out: vec![value; syms],
        }
    }

    pub fn size(&self) -> usize {
        self.ts.size()
    }

    pub fn syms(&self) -> usize {
        self.ts.num_syms()
    }

    pub fn output_at(&self, q: usize, a: Sym) -> usize {
        self.out[q * self.syms() + a]
    }

    pub fn succ(&self, q: usize, a: Sym) -> usize {
        self.ts.succ(q, a)
    }

    /// Output on the last symbol of `x` from `q`; `None` for the empty word.
    pub fn output_from(&self, q: usize, x: &[Sym]) -> Option<usize> {
        let (&last, init) = x.split_last()?;
        let p = self.ts.run(q, init).expect("complete");
        Some(self.output_at(p, last))
    }

    pub fn output(&self, x: &[Sym]) -> Option<usize> {
        self.output_from(0, x)
    }

    /// Outputs on every non-empty prefix of `x`.
    pub fn outputs(&self, x: &[Sym]) -> Vec<usize> {
        let mut q = 0;
        x.iter()
            .map(|&a| {
                let o = self.output_at(q, a);
                q = self.succ(q, a);
                o
            })
            .collect()
    }

    pub fn max_output(&self) -> usize {
        self.out.iter().copied().max().unwrap_or(0)
    }

    /// Minimal machine computing the same function on non-empty words.
    pub fn minimize(&self) -> Mealy {
        let (ts, out, _) = reroot(&self.ts, &self.out, 0);
        let syms = ts.num_syms();
        let class = refine_partition(&ts, &vec![0; ts.size()], |q, a| out[q * syms + a]);
        let q = quotient(&ts, &class);
        let mut qout = vec![0; q.size() * syms];
        for (p, &c) in class.iter().enumerate() {
            for a in 0..syms {
                qout[c * syms + a] = out[p * syms + a];
            }
        }
        let (cts, cout, _) = reroot(&q, &qout, class[0]);
        Mealy {
            alphabet: self.alphabet.clone(),
            ts: cts,
            out: cout,
        }
    }

    /// The llex-minimal non-empty word on which the two machines differ.
    pub fn separating_word(&self, other: &Mealy) -> Option<Word> {
        let syms = self.syms();
        let mut seen: HashMap<(usize, usize), Word> = HashMap::new();
        let mut order = vec![(0, 0)];
        seen.insert((0, 0), Vec::new());
        let mut i = 0;
        while i < order.len() {
            let (p, q) = order[i];
            i += 1;
            for a in 0..syms {
                if self.output_at(p, a) != other.output_at(q, a) {
                    let mut w = seen[&(p, q)].clone();
                    w.push(a);
                    return Some(w);
                }
            }
            for a in 0..syms {
                let t = (self.succ(p, a), other.succ(q, a));
                if !seen.contains_key(&t) {
                    let mut w = seen[&(p, q)].clone();
                    w.push(a);
                    seen.insert(t, w);
                    order.push(t);
                }
            }
        }
        None
    }

    /// Whether outputs never increase along reachable paths.
    pub fn is_weak(&self) -> bool {
        let reach = self.ts.reachable_from(0);
        let syms = self.syms();
        (0..self.size()).filter(|&q| reach[q]).all(|q| {
            (0..syms).all(|a| {
                let p = self.succ(q, a);
                let o = self.output_at(q, a);
                (0..syms).all(|b| self.output_at(p, b) <= o)
            })
        })
    }

    /// Minimal DFA for `{u ∈ Σ⁺ | output(u) ≤ i}`.
    pub fn threshold_dfa(&self, i: usize) -> Result<Dfa> {
        if !self.is_weak() {
            return Err(Error::NotWeak);
        }
        let syms = self.syms();
        let n = self.size();
        let mut ts = Ts::with_states(syms, n + 1);
        for q in 0..n {
            for a in 0..syms {
                let t = if self.output_at(q, a) <= i {
                    n
                } else {
                    self.succ(q, a)
                };
                ts.set(q, a, Some(t));
            }
        }
        for a in 0..syms {
            ts.set(n, a, Some(n));
        }
        let mut finals = vec![false; n + 1];
        finals[n] = true;
        Ok(Dfa {
            alphabet: self.alphabet.clone(),
            ts,
            finals,
        }
        .minimize())
    }
}

/// Transition-based deterministic parity automaton; a run is accepting iff the
/// least priority seen infinitely often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dpa {
    pub alphabet: Alphabet,
    pub ts: Ts,
    /// Priority per transition, indexed by `state * |Σ| + symbol`.
    pub prio: Vec<usize>,
}

impl From<Mealy> for Dpa {
    fn from(m: Mealy) -> Self {
        Dpa {
            alphabet: m.alphabet,
            ts: m.ts,
            prio: m.out,
        }
    }
}

impl From<Dpa> for Mealy {
    fn from(d: Dpa) -> Self {
        Mealy {
            alphabet: d.alphabet,
            ts: d.ts,
            out: d.prio,
        }
    }
}

/// Edge of a graph labelled with two priorities.
#[derive(Clone, Copy, Debug)]
struct Edge {
    to: usize,
    pa: usize,
    pb: usize,
}

/// Finds a lasso from `initial` whose cycle has minimal priorities `(i, j)`
/// with `accept(i, j)`; the smallest canonical witness found is returned.
fn lasso_search(
    syms: usize,
    edges: &[Edge],
    initial: usize,
    ka: usize,
    kb: usize,
    accept: impl Fn(usize, usize) -> bool,
) -> Option<UpWord> {
    let n = edges.len() / syms;
    let full_adj: Vec<Vec<usize>> = (0..n)
        .map(|q| (0..syms).map(|a| edges[q * syms + a].to).collect())
        .collect();
    let reach = graph::reachable(&full_adj, [initial]);
    let access = shortest_paths_from(syms, edges, initial, |_| true);
    let mut best: Option<UpWord> = None;
    for i in 0..ka {
        for j in 0..kb {
            if !accept(i, j) {
                continue;
            }
            let allowed = |q: usize, a: Sym| {
                let e = edges[q * syms + a];
                reach[q] && e.pa >= i && e.pb >= j
            };
            let adj: Vec<Vec<usize>> = (0..n)
                .map(|q| {
                    (0..syms)
                        .filter(|&a| allowed(q, a))
                        .map(|a| edges[q * syms + a].to)
                        .collect()
                })
                .collect();
            let (comp, _) = graph::scc(&adj);
            let inside =
                |q: usize, a: Sym| allowed(q, a) && comp[edges[q * syms + a].to] == comp[q];
            let mut has_j: HashMap<usize, bool> = HashMap::new();
            for q in 0..n {
                for a in 0..syms {
                    if inside(q, a) && edges[q * syms + a].pb == j {
                        has_j.insert(comp[q], true);
                    }
                }
            }
            for q in 0..n {
                for a in 0..syms {
                    if !inside(q, a) || edges[q * syms + a].pa != i || !has_j.contains_key(&comp[q])
                    {
                        continue;
                    }
                    let e1 = edges[q * syms + a];
                    let c = comp[q];
                    let step = |p: usize, b: Sym| inside(p, b) && comp[p] == c;
                    let mut cycle = vec![a];
                    let mut at = e1.to;
                    if e1.pb != j {
                        let paths = shortest_paths_from(syms, edges, at, |(p, b)| step(p, b));
                        let target = (0..n)
                            .flat_map(|p| (0..syms).map(move |b| (p, b)))
                            .filter(|&(p, b)| step(p, b) && edges[p * syms + b].pb == j)
                            .filter_map(|(p, b)| {
                                paths[p].as_ref().map(|w| (w.len(), w.clone(), p, b))
                            })
                            .min();
                        let (_, w, p, b) = target?;
                        cycle.extend(w);
                        cycle.push(b);
                        at = edges[p * syms + b].to;
                    }
                    let back = shortest_paths_from(syms, edges, at, |(p, b)| step(p, b));
                    cycle.extend(back[q].clone()?);
                    let spine = access[q].clone()?;
                    let w = UpWord::new(spine, cycle).expect("non-empty cycle");
                    if best.as_ref().is_none_or(|b| w < *b) {
                        best = Some(w);
                    }
                }
            }
        }
    }
    best
}

/// Llex-minimal words reaching each state from `from` using allowed edges.
fn shortest_paths_from(
    syms: usize,
    edges: &[Edge],
    from: usize,
    allowed: impl Fn((usize, Sym)) -> bool,
) -> Vec<Option<Word>> {
    let n = edges.len() / syms;
    let mut paths: Vec<Option<Word>> = vec![None; n];
    paths[from] = Some(Vec::new());
    let mut queue = VecDeque::from([from]);
    while let Some(q) = queue.pop_front() {
        for a in 0..syms {
            if !allowed((q, a)) {
                continue;
            }
            let t = edges[q * syms + a].to;
            if paths[t].is_none() {
                let mut w = paths[q].clone().expect("visited");
                w.push(a);
                paths[t] = Some(w);
                queue.push_back(t);
            }
        }
    }
    paths
}

/// Maps used priorities onto a gap-free range that keeps every parity.
pub fn compact_priorities(prio: &[usize]) -> Vec<usize> {
    let used: BTreeSet<usize> = prio.iter().copied().collect();
    let mut map = HashMap::new();
    let mut last: Option<(usize, usize)> = None;
    for &p in &used {
        let v = match last {
            None => p % 2,
            Some((lp, lv)) if lp % 2 == p % 2 => lv,
            Some((_, lv)) => lv + 1,
        };
        map.insert(p, v);
        last = Some((p, v));
    }
    prio.iter().map(|p| map[p]).collect()
}

impl Dpa {
    pub fn new(alphabet: Alphabet, ts: Ts, prio: Vec<usize>) -> Result<Self> {
        Mealy::new(alphabet, ts, prio).map(Dpa::from)
    }

    /// One state looping on every symbol with the given priority.
    pub fn constant(alphabet: Alphabet, value: usize) -> Self {
        Mealy::constant(alphabet, value).into()
    }

    pub fn size(&self) -> usize {
        self.ts.size()
    }

    pub fn syms(&self) -> usize {
        self.ts.num_syms()
    }

    pub fn priority(&self, q: usize, a: Sym) -> usize {
        self.prio[q * self.syms() + a]
    }

    pub fn succ(&self, q: usize, a: Sym) -> usize {
        self.ts.succ(q, a)
    }

    /// Number of priorities `k`, so that all priorities lie in `0..k`.
    pub fn num_priorities(&self) -> usize {
        self.prio.iter().copied().max().map_or(1, |m| m + 1)
    }

    pub fn as_mealy(&self) -> Mealy {
        self.clone().into()
    }

    /// Least priority on the cycle of the run on `w` from `q`.
    pub fn eventual_priority_from(&self, q: usize, w: &UpWord) -> usize {
        let mut q = self.ts.run(q, w.spine()).expect("complete");
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut mins = Vec::new();
        while !seen.contains_key(&q) {
            seen.insert(q, mins.len());
            let mut m = usize::MAX;
            for &a in w.period() {
                m = m.min(self.priority(q, a));
                q = self.succ(q, a);
            }
            mins.push(m);
        }
        mins[seen[&q]..]
            .iter()
            .copied()
            .min()
            .expect("non-empty cycle")
    }

    pub fn accepts_from(&self, q: usize, w: &UpWord) -> bool {
        self.eventual_priority_from(q, w).is_multiple_of(2)
    }

    pub fn accepts(&self, w: &UpWord) -> bool {
        self.accepts_from(0, w)
    }

    /// Minimal priority along the run on the non-empty word `u` from `q`.
    pub fn min_priority_on_path(&self, q: usize, u: &[Sym]) -> Option<usize> {
        let mut q = q;
        let mut m: Option<usize> = None;
        for &a in u {
            let p = self.priority(q, a);
            m = Some(m.map_or(p, |x| x.min(p)));
            q = self.succ(q, a);
        }
        m
    }

    pub fn complement(&self) -> Dpa {
        Dpa {
            alphabet: self.alphabet.clone(),
            ts: self.ts.clone(),
            prio: self.prio.iter().map(|p| p + 1).collect(),
        }
    }

    /// Reachable part with breadth-first numbering from `q`.
    pub fn rooted_at(&self, q: usize) -> Dpa {
        let (ts, prio, _) = reroot(&self.ts, &self.prio, q);
        Dpa {
            alphabet: self.alphabet.clone(),
            ts,
            prio,
        }
    }

    pub fn trim(&self) -> Dpa {
        self.rooted_at(0)
    }

    fn edges_with(&self, other: Option<&Dpa>) -> (Vec<Edge>, Vec<(usize, usize)>) {
        let syms = self.syms();
        match other {
            None => {
                let edges = (0..self.size())
                    .flat_map(|q| (0..syms).map(move |a| (q, a)))
                    .map(|(q, a)| Edge {
                        to: self.succ(q, a),
                        pa: self.priority(q, a),
                        pb: 0,
                    })
                    .collect();
                (edges, (0..self.size()).map(|q| (q, 0)).collect())
            }
            Some(b) => {
                let (ts, pairs) = self.ts.product(&b.ts, 0, 0);
                let edges = (0..ts.size())
                    .flat_map(|q| (0..syms).map(move |a| (q, a)))
                    .map(|(q, a)| {
                        let (p, r) = pairs[q];
                        Edge {
                            to: ts.succ(q, a),
                            pa: self.priority(p, a),
                            pb: b.priority(r, a),
                        }
                    })
                    .collect();
                (edges, pairs)
            }
        }
    }

    /// Some accepted word, or `None` if the language is empty.
    pub fn nonempty_witness(&self) -> Option<UpWord> {
        let (edges, _) = self.edges_with(None);
        lasso_search(self.syms(), &edges, 0, self.num_priorities(), 1, |i, _| {
            i % 2 == 0
        })
    }

    /// A word in the symmetric difference of the two languages, or `None` if
    /// they are equal.
    pub fn equivalent(&self, other: &Dpa) -> Result<Option<UpWord>> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let (edges, _) = self.edges_with(Some(other));
        Ok(lasso_search(
            self.syms(),
            &edges,
            0,
            self.num_priorities(),
            other.num_priorities(),
            |i, j| i % 2 != j % 2,
        ))
    }

    /// Whether the languages from states `p` and `q` coincide.
    pub fn states_equivalent(&self, p: usize, q: usize) -> bool {
        self.rooted_at(p)
            .equivalent(&self.rooted_at(q))
            .expect("same alphabet")
            .is_none()
    }

    /// Pointwise minimal language-preserving priorities on the same transition
    /// structure, computed by recursive SCC decomposition.
    pub fn normalize(&self) -> Dpa {
        let syms = self.syms();
        let n = self.size();
        let mut out = vec![0; n * syms];
        let all: Vec<usize> = (0..n * syms).collect();
        self.normalize_rec(&all, 0, &mut out);
        Dpa {
            alphabet: self.alphabet.clone(),
            ts: self.ts.clone(),
            prio: compact_priorities(&out),
        }
    }

    fn normalize_rec(&self, edges: &[usize], lo: usize, out: &mut [usize]) {
        let syms = self.syms();
        let n = self.size();
        let mut adj = vec![Vec::new(); n];
        for &e in edges {
            adj[e / syms].push(self.succ(e / syms, e % syms));
        }
        let (comp, count) = graph::scc(&adj);
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); count];
        for &e in edges {
            let (q, a) = (e / syms, e % syms);
            if comp[q] == comp[self.succ(q, a)] {
                groups[comp[q]].push(e);
            }
        }
        for group in groups.into_iter().filter(|g| !g.is_empty()) {
            let p = group
                .iter()
                .map(|&e| self.prio[e])
                .min()
                .expect("non-empty");
            let v = if lo % 2 == p % 2 { lo } else { lo + 1 };
            for &e in &group {
                out[e] = v;
            }
            let rest: Vec<usize> = group.into_iter().filter(|&e| self.prio[e] != p).collect();
            if !rest.is_empty() {
                self.normalize_rec(&rest, v, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn up(s: &str) -> UpWord {
        ab().parse_upword(s).unwrap()
    }

    #[test]
    fn membership_on_aba_language() {
        let a = corpus::finitely_many_b_or_aba();
        assert!(a.accepts(&up(",ab")));
        assert!(!a.accepts(&up(",b")));
        assert!(a.accepts(&up(",a")));
        assert!(a.accepts(&up("bbb,a")));
        assert!(!a.accepts(&up(",abb")));
    }

    #[test]
    fn constant_automata() {
        let zero = Dpa::constant(ab(), 0);
        let one = Dpa::constant(ab(), 1);
        assert!(zero.accepts(&up("ab,b")));
        assert!(!one.accepts(&up("ab,b")));
        assert_eq!(one.nonempty_witness(), None);
        assert_eq!(zero.nonempty_witness(), Some(up(",a")));
        assert_eq!(zero.equivalent(&one).unwrap(), Some(up(",a")));
        assert_eq!(zero.equivalent(&zero).unwrap(), None);
        assert_eq!(zero.complement(), one);
    }

    #[test]
    fn path_minimum() {
        let a = corpus::finitely_many_b_or_aba();
        assert_eq!(a.min_priority_on_path(0, &[0]), Some(2));
        assert_eq!(a.min_priority_on_path(0, &[0, 1, 0]), Some(0));
        assert_eq!(a.min_priority_on_path(0, &[]), None);
    }

    #[test]
    fn normalize_lowers_shifted_priorities() {
        let mut ts = Ts::new(2);
        ts.set(0, 0, Some(0));
        ts.set(0, 1, Some(0));
        let a = Dpa::new(ab(), ts, vec![2, 3]).unwrap();
        assert_eq!(a.normalize().prio, vec![0, 1]);
        let zero = Dpa::constant(ab(), 0);
        assert_eq!(zero.normalize(), zero);
    }

    #[test]
    fn compaction_keeps_parity() {
        assert_eq!(compact_priorities(&[1, 3, 4, 7]), vec![1, 1, 2, 3]);
        assert_eq!(compact_priorities(&[0, 2, 5]), vec![0, 0, 1]);
    }

    #[test]
    fn mealy_minimize_merges_duplicates() {
        let mut ts = Ts::with_states(2, 3);
        for (q, t) in [(0, [1, 2]), (1, [1, 2]), (2, [0, 2])] {
            ts.set(q, 0, Some(t[0]));
            ts.set(q, 1, Some(t[1]));
        }
        let m = Mealy::new(ab(), ts, vec![1, 0, 1, 0, 0, 0]).unwrap();
        let min = m.minimize();
        assert_eq!(min.size(), 2);
        assert_eq!(m.separating_word(&min), None);
    }

    #[test]
    fn mealy_constants_separate_on_first_symbol() {
        let z = Mealy::constant(ab(), 0);
        let o = Mealy::constant(ab(), 1);
        assert_eq!(z.separating_word(&o), Some(vec![0]));
        assert_eq!(z.separating_word(&z), None);
    }

    #[test]
    fn threshold_dfas_of_aba_machine() {
        // The weak mapping: 0 once aba was read, 1 once b was read, 2 otherwise.
        let mut ts = Ts::with_states(2, 4);
        // 0: only a's; 1: seen b, pending a; 2: seen b, pending ab; 3: seen aba.
        let rows = [
            [(0, 2), (1, 1)],
            [(2, 1), (1, 1)],
            [(2, 1), (1, 1)],
            [(3, 0), (3, 0)],
        ];
        let mut out = Vec::new();
        for (q, row) in rows.iter().enumerate() {
            for (a, &(t, o)) in row.iter().enumerate() {
                ts.set(q, a, Some(t));
                out.push(o);
            }
        }
        let m = Mealy::new(ab(), ts, out).unwrap();
        assert!(m.is_weak());
        let d2 = m.threshold_dfa(2).unwrap();
        assert!(d2.accepts(&[0]) && !d2.accepts(&[]));
        let d1 = m.threshold_dfa(1).unwrap();
        assert!(d1.accepts(&[0, 1]) && !d1.accepts(&[0, 0]));
        assert_eq!(d1.accepts_prefix_of_period(0, &[0, 1]), Some(vec![0, 1]));
        assert_eq!(d1.accepts_prefix_of_period(0, &[0]), None);
    }

    #[test]
    fn non_weak_threshold_is_rejected() {
        let mut ts = Ts::new(2);
        ts.set(0, 0, Some(0));
        ts.set(0, 1, Some(0));
        let m = Mealy::new(ab(), ts, vec![0, 1]).unwrap();
        assert_eq!(m.threshold_dfa(0), Err(Error::NotWeak));
    }
}
