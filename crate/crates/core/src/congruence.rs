//! Deterministic transition systems, right congruences and sample-derived
//! default structures.

use std::collections::{BTreeSet, HashMap};

use crate::graph;
use crate::words::{llex_cmp, OmegaSample, Sym, UpWord, Word};

/// A deterministic, possibly partial transition system with initial state 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ts {
    syms: usize,
    delta: Vec<Option<usize>>,
}

/// Strongly connected components of a transition system.
#[derive(Clone, Debug)]
pub struct Sccs {
    /// Component id per state.
    pub comp: Vec<usize>,
    /// Whether each component contains a cycle.
    pub nontrivial: Vec<bool>,
}

impl Sccs {
    pub fn count(&self) -> usize {
        self.nontrivial.len()
    }

    pub fn same(&self, p: usize, q: usize) -> bool {
        self.comp[p] == self.comp[q]
    }
}

impl Ts {
    /// A single state without transitions.
    pub fn new(syms: usize) -> Self {
        Ts::with_states(syms, 1)
    }

    pub fn with_states(syms: usize, n: usize) -> Self {
        Ts {
            syms,
            delta: vec![None; syms * n],
        }
    }

    pub fn num_syms(&self) -> usize {
        self.syms
    }

    pub fn size(&self) -> usize {
        self.delta.len() / self.syms
    }

    pub fn add_state(&mut self) -> usize {
        self.delta.extend(std::iter::repeat_n(None, self.syms));
        self.size() - 1
    }

    pub fn get(&self, q: usize, a: Sym) -> Option<usize> {
        self.delta[q * self.syms + a]
    }

    /// Successor in a complete system.
    pub fn succ(&self, q: usize, a: Sym) -> usize {
        self.delta[q * self.syms + a].expect("transition defined")
    }

    pub fn set(&mut self, q: usize, a: Sym, t: Option<usize>) {
        self.delta[q * self.syms + a] = t;
    }

    pub fn run(&self, q: usize, x: &[Sym]) -> Option<usize> {
        x.iter().try_fold(q, |p, &a| self.get(p, a))
    }

    pub fn run_from_initial(&self, x: &[Sym]) -> Option<usize> {
        self.run(0, x)
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().all(Option::is_some)
    }

    /// Defined transitions as adjacency lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.size())
            .map(|q| (0..self.syms).filter_map(|a| self.get(q, a)).collect())
            .collect()
    }

    pub fn reachable_from(&self, q: usize) -> Vec<bool> {
        graph::reachable(&self.adjacency(), [q])
    }

    pub fn sccs(&self) -> Sccs {
        let adj = self.adjacency();
        let (comp, count) = graph::scc(&adj);
        let mut nontrivial = vec![false; count];
        for (q, succs) in adj.iter().enumerate() {
            for &p in succs {
                if comp[p] == comp[q] {
                    nontrivial[comp[q]] = true;
                }
            }
        }
        Sccs { comp, nontrivial }
    }

    /// States visited infinitely often on `w` from `from`, or `None` if the run
    /// leaves the defined part.
    pub fn infinity_set_from(&self, from: usize, w: &UpWord) -> Option<BTreeSet<usize>> {
        Some(self.infinity_states_from(from, w)?.into_iter().collect())
    }

    /// A state visited infinitely often by the run on `w`; all such states
    /// share one strongly connected component.
    pub fn loop_state_from(&self, from: usize, w: &UpWord) -> Option<usize> {
        let mut q = self.run(from, w.spine())?;
        let mut seen = vec![false; self.size()];
        while !seen[q] {
            seen[q] = true;
            q = self.run(q, w.period())?;
        }
        Some(q)
    }

    /// As [`Ts::infinity_set_from`], unsorted and possibly with repetitions.
    pub fn infinity_states_from(&self, from: usize, w: &UpWord) -> Option<Vec<usize>> {
        let mut q = self.run(from, w.spine())?;
        let mut seen = vec![usize::MAX; self.size()];
        let mut starts = Vec::new();
        while seen[q] == usize::MAX {
            seen[q] = starts.len();
            starts.push(q);
            q = self.run(q, w.period())?;
        }
        let mut out = Vec::new();
        for &s in &starts[seen[q]..] {
            let mut p = s;
            for &a in w.period() {
                p = self.get(p, a)?;
                out.push(p);
            }
        }
        Some(out)
    }

    pub fn infinity_set(&self, w: &UpWord) -> Option<BTreeSet<usize>> {
        self.infinity_set_from(0, w)
    }

    /// Breadth-first order over reachable states in symbol order together with
    /// the llex-minimal access word of every reached state.
    pub fn bfs(&self) -> (Vec<usize>, Vec<Option<Word>>) {
        self.bfs_from(0)
    }

    pub fn bfs_from(&self, start: usize) -> (Vec<usize>, Vec<Option<Word>>) {
        let mut reps: Vec<Option<Word>> = vec![None; self.size()];
        let mut order = vec![start];
        reps[start] = Some(Vec::new());
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            i += 1;
            for a in 0..self.syms {
                if let Some(p) = self.get(q, a) {
                    if reps[p].is_none() {
                        let mut w = reps[q].clone().expect("visited");
                        w.push(a);
                        reps[p] = Some(w);
                        order.push(p);
                    }
                }
            }
        }
        (order, reps)
    }

    /// Restriction to reachable states renumbered in breadth-first order.
    /// Returns the new system and the old-to-new state map.
    pub fn canonical(&self) -> (Ts, Vec<Option<usize>>) {
        self.canonical_from(0)
    }

    /// As [`Ts::canonical`], with `start` becoming the initial state.
    pub fn canonical_from(&self, start: usize) -> (Ts, Vec<Option<usize>>) {
        let (order, _) = self.bfs_from(start);
        let mut map = vec![None; self.size()];
        for (i, &q) in order.iter().enumerate() {
            map[q] = Some(i);
        }
        let mut ts = Ts::with_states(self.syms, order.len());
        for (i, &q) in order.iter().enumerate() {
            for a in 0..self.syms {
                ts.set(i, a, self.get(q, a).and_then(|p| map[p]));
            }
        }
        (ts, map)
    }

    /// Synchronous product of two complete systems, restricted to reachable
    /// pairs starting in `(p0, q0)`. Returns the product and its state pairs.
    pub fn product(&self, other: &Ts, p0: usize, q0: usize) -> (Ts, Vec<(usize, usize)>) {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs = vec![(p0, q0)];
        index.insert((p0, q0), 0);
        let mut ts = Ts::new(self.syms);
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..self.syms {
                let t = (self.succ(p, a), other.succ(q, a));
                let id = *index.entry(t).or_insert_with(|| {
                    pairs.push(t);
                    pairs.len() - 1
                });
                while ts.size() <= id {
                    ts.add_state();
                }
                ts.set(i, a, Some(id));
            }
            i += 1;
        }
        (ts, pairs)
    }
}

/// A right congruence given by a complete, reachable transition system whose
/// states are numbered in breadth-first order from the class of ε.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RightCongruence {
    ts: Ts,
    reps: Vec<Word>,
}

impl RightCongruence {
    /// Canonical congruence of a complete system (unreachable states dropped).
    pub fn from_ts(ts: &Ts) -> Self {
        assert!(ts.is_complete(), "right congruence needs a complete system");
        let (ts, _) = ts.canonical();
        let (_, reps) = ts.bfs();
        let reps = reps.into_iter().map(|r| r.expect("reachable")).collect();
        RightCongruence { ts, reps }
    }

    /// The congruence with a single class.
    pub fn trivial(syms: usize) -> Self {
        let mut ts = Ts::new(syms);
        for a in 0..syms {
            ts.set(0, a, Some(0));
        }
        RightCongruence::from_ts(&ts)
    }

    pub fn ts(&self) -> &Ts {
        &self.ts
    }

    pub fn size(&self) -> usize {
        self.ts.size()
    }

    pub fn num_syms(&self) -> usize {
        self.ts.num_syms()
    }

    pub fn rep(&self, c: usize) -> &[Sym] {
        &self.reps[c]
    }

    pub fn reps(&self) -> &[Word] {
        &self.reps
    }

    pub fn succ(&self, c: usize, a: Sym) -> usize {
        self.ts.succ(c, a)
    }

    pub fn run(&self, c: usize, x: &[Sym]) -> usize {
        self.ts.run(c, x).expect("complete")
    }

    pub fn class_of(&self, x: &[Sym]) -> usize {
        self.run(0, x)
    }

    /// Whether the non-empty word `x` leads from `c` back to `c`.
    pub fn loops_on(&self, c: usize, x: &[Sym]) -> bool {
        !x.is_empty() && self.run(c, x) == c
    }

    /// Whether two congruences are identical up to the canonical numbering.
    pub fn same_as(&self, other: &RightCongruence) -> bool {
        self.ts == other.ts
    }
}

/// Keys identifying the nodes of a sample prefix tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum NodeKey {
    Root,
    Sink,
    Shared(Word),
    Residual(UpWord, usize),
    Position(usize, usize),
}

/// Prefix tree over a set of ultimately periodic words that loops once a
/// prefix identifies a single word, with one sink for everything else.
#[derive(Clone, Debug)]
pub struct PrefixTree {
    pub ts: Ts,
    /// The sink state, if it was created.
    pub sink: Option<usize>,
    /// Per state: `(word index, aligned position)` of the words still matching.
    pub matching: Vec<Vec<(usize, usize)>>,
    /// Per state: whether it is only reached by ε.
    pub is_root: Vec<bool>,
}

/// How nodes that identify a single word are merged.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeKeying {
    /// Nodes with equal residual ω-words coincide.
    Residual,
    /// Nodes coincide only for the same word at the same aligned position.
    PerWord,
    /// As `PerWord`, and the root is never merged with another node.
    PerWordDistinctRoot,
}

impl PrefixTree {
    pub fn build(words: &[UpWord], syms: usize, keying: TreeKeying) -> Self {
        Self::build_labeled(words, &vec![0; words.len()], syms, keying)
    }

    /// As [`PrefixTree::build`]; under residual keying, residuals of words
    /// with different labels stay apart.
    pub fn build_labeled(
        words: &[UpWord],
        labels: &[usize],
        syms: usize,
        keying: TreeKeying,
    ) -> Self {
        let key_of = |set: &[(usize, usize)], prefix: &Word| -> NodeKey {
            match set {
                [] => NodeKey::Sink,
                _ if prefix.is_empty() && keying == TreeKeying::PerWordDistinctRoot => {
                    NodeKey::Root
                }
                [(i, p)] => match keying {
                    TreeKeying::Residual => NodeKey::Residual(words[*i].suffix(*p), labels[*i]),
                    _ => NodeKey::Position(*i, *p),
                },
                _ => NodeKey::Shared(prefix.clone()),
            }
        };
        let root_set: Vec<(usize, usize)> = (0..words.len()).map(|i| (i, 0)).collect();
        let mut index: HashMap<NodeKey, usize> = HashMap::new();
        let mut matching = vec![root_set.clone()];
        let mut prefixes: Vec<Word> = vec![Vec::new()];
        index.insert(key_of(&root_set, &Vec::new()), 0);
        let mut ts = Ts::new(syms);
        let mut sink = if root_set.is_empty() { Some(0) } else { None };
        let mut i = 0;
        while i < matching.len() {
            for a in 0..syms {
                let next: Vec<(usize, usize)> = matching[i]
                    .iter()
                    .filter(|&&(w, p)| words[w].symbol_at(p) == a)
                    .map(|&(w, p)| (w, words[w].align(p + 1)))
                    .collect();
                let mut prefix = prefixes[i].clone();
                prefix.push(a);
                let key = key_of(&next, &prefix);
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = ts.add_state();
                        if next.is_empty() {
                            sink = Some(id);
                        }
                        matching.push(next);
                        prefixes.push(prefix);
                        index.insert(key, id);
                        id
                    }
                };
                ts.set(i, a, Some(id));
            }
            i += 1;
        }
        let is_root = (0..ts.size())
            .map(|q| q == 0 && keying == TreeKeying::PerWordDistinctRoot)
            .collect();
        PrefixTree {
            ts,
            sink,
            matching,
            is_root,
        }
    }
}

/// The default right congruence of a sample: a prefix tree that loops once a
/// prefix identifies a single sample word, plus a sink for non-prefixes.
pub fn default_ts(sample: &OmegaSample) -> RightCongruence {
    let words: Vec<UpWord> = sample.words().map(|(w, _)| w.clone()).collect();
    let labels: Vec<usize> = sample.words().map(|(_, s)| s as usize).collect();
    let tree =
        PrefixTree::build_labeled(&words, &labels, sample.alphabet.len(), TreeKeying::Residual);
    RightCongruence::from_ts(&tree.ts)
}

/// Variant of the default structure in which different sample words never
/// share states after they have been identified.
pub fn split_default_ts(sample: &OmegaSample) -> RightCongruence {
    let words: Vec<UpWord> = sample.words().map(|(w, _)| w.clone()).collect();
    let tree = PrefixTree::build(&words, sample.alphabet.len(), TreeKeying::PerWord);
    RightCongruence::from_ts(&tree.ts)
}

/// Smallest word among `words` in llex order.
pub fn llex_min<'a>(words: impl IntoIterator<Item = &'a Word>) -> Option<&'a Word> {
    words.into_iter().min_by(|x, y| llex_cmp(x, y))
}
