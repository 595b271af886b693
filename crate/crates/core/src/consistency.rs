//! Deciding whether a partial transition system separates everything a
//! sample forces it to separate.

use std::collections::BTreeSet;

use crate::automata::Dfa;
use crate::congruence::{PrefixTree, RightCongruence, TreeKeying, Ts};
use crate::error::{Error, Result};
use crate::glerc::Cons;
use crate::words::{OmegaSample, Sym, UpWord, Word};

/// Two acceptors over the sample alphabet and the pairs of their states that
/// must never be reached by one state of a consistent transition system.
#[derive(Clone, Debug)]
pub struct ConflictSetup {
    pub first: Dfa,
    pub second: Dfa,
    conflicts: Vec<bool>,
    live_first: Vec<bool>,
    live_second: Vec<bool>,
}

impl ConflictSetup {
    fn from_parts(first: Dfa, second: Dfa, conflicts: Vec<bool>) -> Self {
        let (live_first, live_second) = (live(&first), live(&second));
        ConflictSetup {
            first,
            second,
            conflicts,
            live_first,
            live_second,
        }
    }

    pub fn conflict(&self, p: usize, q: usize) -> bool {
        self.conflicts[p * self.second.size() + q]
    }

    pub fn conflict_pairs(&self) -> BTreeSet<(usize, usize)> {
        let n2 = self.second.size();
        (0..self.conflicts.len())
            .filter(|&i| self.conflicts[i])
            .map(|i| (i / n2, i % n2))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.conflicts.iter().any(|&c| c)
    }

    /// Whether `ts` reaches, with one of its states, both components of some
    /// conflicting pair. Runs that leave the defined part stop there.
    pub fn violated_by(&self, ts: &Ts) -> bool {
        if self.is_empty() {
            return false;
        }
        let r1 = joint_reach(ts, &self.first.ts, &self.live_first);
        let r2 = joint_reach(ts, &self.second.ts, &self.live_second);
        let (n1, n2) = (self.first.size(), self.second.size());
        (0..ts.size()).any(|q| {
            let (row1, row2) = (&r1[q * n1..(q + 1) * n1], &r2[q * n2..(q + 1) * n2]);
            (0..n1).any(|p1| row1[p1] && (0..n2).any(|p2| row2[p2] && self.conflicts[p1 * n2 + p2]))
        })
    }
}

/// [`ConflictSetup::violated_by`] for a transition system that grows one
/// transition at a time from the single state ε. Pairs reached by the
/// committed system are kept, so each check only explores what the new
/// transition adds.
#[derive(Clone, Debug)]
pub struct ReachTracker<'a> {
    setup: &'a ConflictSetup,
    r1: Vec<bool>,
    r2: Vec<bool>,
    pending1: Vec<usize>,
    pending2: Vec<usize>,
}

impl<'a> ReachTracker<'a> {
    pub fn new(setup: &'a ConflictSetup) -> Self {
        let mut r1 = vec![false; setup.first.size()];
        let mut r2 = vec![false; setup.second.size()];
        r1[0] = setup.live_first[0];
        r2[0] = setup.live_second[0];
        ReachTracker {
            setup,
            r1,
            r2,
            pending1: Vec::new(),
            pending2: Vec::new(),
        }
    }

    pub fn setup(&self) -> &ConflictSetup {
        self.setup
    }

    /// Forgets the pairs added by the last uncommitted extension.
    pub fn rollback(&mut self) {
        for &i in &self.pending1 {
            self.r1[i] = false;
        }
        for &i in &self.pending2 {
            self.r2[i] = false;
        }
        self.pending1.clear();
        self.pending2.clear();
    }

    /// Whether `ts`, the committed system plus the transition from `p` on
    /// `a`, is violated. The new pairs stay pending until [`Self::commit`] or
    /// [`Self::rollback`].
    pub fn violated_by_extension(&mut self, ts: &Ts, p: usize, a: Sym) -> bool {
        self.rollback();
        if self.setup.is_empty() {
            return false;
        }
        let s = self.setup;
        extend_reach(
            ts,
            &s.first.ts,
            &s.live_first,
            &mut self.r1,
            &mut self.pending1,
            p,
            a,
        );
        extend_reach(
            ts,
            &s.second.ts,
            &s.live_second,
            &mut self.r2,
            &mut self.pending2,
            p,
            a,
        );
        let (n1, n2) = (s.first.size(), s.second.size());
        self.pending1.iter().any(|&i| {
            let (q, p1) = (i / n1, i % n1);
            (0..n2).any(|p2| self.r2[q * n2 + p2] && s.conflicts[p1 * n2 + p2])
        }) || self.pending2.iter().any(|&i| {
            let (q, p2) = (i / n2, i % n2);
            (0..n1).any(|p1| self.r1[q * n1 + p1] && s.conflicts[p1 * n2 + p2])
        })
    }

    /// Makes the transition from `p` on `a` part of the committed system.
    pub fn commit(&mut self, ts: &Ts, p: usize, a: Sym) {
        self.violated_by_extension(ts, p, a);
        self.pending1.clear();
        self.pending2.clear();
    }
}

impl Cons for ReachTracker<'_> {
    fn holds(&mut self, ts: &Ts) -> bool {
        !self.setup.violated_by(ts)
    }

    fn holds_extended(&mut self, ts: &Ts, p: usize, a: Sym) -> bool {
        !self.violated_by_extension(ts, p, a)
    }

    fn commit(&mut self, ts: &Ts, p: usize, a: Sym) {
        ReachTracker::commit(self, ts, p, a);
    }
}

/// Adds to `reach` the pairs that become reachable through the transition
/// of `ts` from `p` on `a`, recording them in `added`.
fn extend_reach(
    ts: &Ts,
    acceptor: &Ts,
    live: &[bool],
    reach: &mut Vec<bool>,
    added: &mut Vec<usize>,
    p: usize,
    a: Sym,
) {
    let n = acceptor.size();
    reach.resize(ts.size() * n, false);
    let t = ts.get(p, a).expect("extension sets the transition");
    let mut stack = Vec::new();
    for s in 0..n {
        if !reach[p * n + s] {
            continue;
        }
        let s2 = acceptor.succ(s, a);
        if live[s2] && !reach[t * n + s2] {
            reach[t * n + s2] = true;
            added.push(t * n + s2);
            stack.push((t, s2));
        }
    }
    while let Some((q, s)) = stack.pop() {
        for b in 0..ts.num_syms() {
            let Some(t) = ts.get(q, b) else { continue };
            let s2 = acceptor.succ(s, b);
            if live[s2] && !reach[t * n + s2] {
                reach[t * n + s2] = true;
                added.push(t * n + s2);
                stack.push((t, s2));
            }
        }
    }
}

/// States of an acceptor from which a final state is still reachable.
fn live(d: &Dfa) -> Vec<bool> {
    let n = d.size();
    let mut rev = vec![Vec::new(); n];
    for q in 0..n {
        for a in 0..d.ts.num_syms() {
            rev[d.ts.succ(q, a)].push(q);
        }
    }
    let finals = (0..n).filter(|&q| d.finals[q]);
    crate::graph::reachable(&rev, finals)
}

/// Whether state `q` of `ts` and live state `p` of the acceptor are reached
/// together, indexed by `q * |acceptor| + p`.
fn joint_reach(ts: &Ts, acceptor: &Ts, live: &[bool]) -> Vec<bool> {
    let n = acceptor.size();
    let mut seen = vec![false; ts.size() * n];
    let mut stack = Vec::with_capacity(seen.len());
    if live[0] {
        seen[0] = true;
        stack.push((0, 0));
    }
    while let Some((q, p)) = stack.pop() {
        for a in 0..ts.num_syms() {
            let Some(t) = ts.get(q, a) else { continue };
            let s = acceptor.succ(p, a);
            if live[s] && !seen[t * n + s] {
                seen[t * n + s] = true;
                stack.push((t, s));
            }
        }
    }
    seen
}

fn tree_acceptor(sample: &OmegaSample, positive: bool) -> Dfa {
    let words: Vec<UpWord> = sample
        .words()
        .filter(|&(_, s)| s == positive)
        .map(|(w, _)| w.clone())
        .collect();
    let tree = PrefixTree::build(&words, sample.alphabet.len(), TreeKeying::Residual);
    let finals = (0..tree.ts.size()).map(|q| Some(q) != tree.sink).collect();
    Dfa::new(sample.alphabet.clone(), tree.ts, finals).expect("prefix trees are complete")
}

/// Prefix acceptors of the positive and negative words; a pair conflicts iff
/// both residuals share an ω-word.
pub fn mn_setup(sample: &OmegaSample) -> ConflictSetup {
    let first = tree_acceptor(sample, true);
    let second = tree_acceptor(sample, false);
    let n2 = second.size();
    let syms = sample.alphabet.len();
    let mut c: Vec<bool> = (0..first.size() * n2)
        .map(|i| first.finals[i / n2] && second.finals[i % n2])
        .collect();
    // Greatest fixpoint: keep pairs with some successor pair still kept.
    loop {
        let mut changed = false;
        for i in 0..c.len() {
            if !c[i] {
                continue;
            }
            let (p, q) = (i / n2, i % n2);
            let keep = (0..syms).any(|a| c[first.ts.succ(p, a) * n2 + second.ts.succ(q, a)]);
            if !keep {
                c[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    ConflictSetup::from_parts(first, second, c)
}

pub fn check_mn_consistent(ts: &Ts, sample: &OmegaSample) -> bool {
    !mn_setup(sample).violated_by(ts)
}

/// Primitive periods of the purely periodic words of one sign.
pub fn periodic_roots(sample: &OmegaSample, positive: bool) -> BTreeSet<Word> {
    sample
        .words()
        .filter(|&(w, s)| s == positive && w.spine().is_empty())
        .map(|(w, _)| w.period().to_vec())
        .collect()
}

/// Acceptor for the powers `y^n` (n ≥ 1) of periodic roots that loop on `c`.
fn power_acceptor(sample: &OmegaSample, positive: bool, rc: &RightCongruence, c: usize) -> Dfa {
    let words: Vec<UpWord> = periodic_roots(sample, positive)
        .into_iter()
        .map(|y| UpWord::periodic(y).expect("non-empty period"))
        .collect();
    let tree = PrefixTree::build(
        &words,
        sample.alphabet.len(),
        TreeKeying::PerWordDistinctRoot,
    );
    let (ts, pairs) = tree.ts.product(rc.ts(), 0, c);
    let finals = pairs
        .iter()
        .map(|&(t, r)| {
            r == c && !tree.is_root[t] && tree.matching[t].iter().any(|&(_, pos)| pos == 0)
        })
        .collect();
    Dfa::new(sample.alphabet.clone(), ts, finals).expect("complete product")
}

/// Acceptors for the looping powers of positive and negative periods, and the
/// pairs from which a common extension reaches final states in both.
pub fn iteration_setup(
    sample: &OmegaSample,
    rc: &RightCongruence,
    c: usize,
) -> Result<ConflictSetup> {
    if !check_mn_consistent(rc.ts(), sample) {
        return Err(Error::MnPrecondition);
    }
    Ok(iteration_setup_unchecked(sample, rc, c))
}

/// As [`iteration_setup`] without re-checking the precondition.
pub fn iteration_setup_unchecked(
    sample: &OmegaSample,
    rc: &RightCongruence,
    c: usize,
) -> ConflictSetup {
    let first = power_acceptor(sample, true, rc, c);
    let second = power_acceptor(sample, false, rc, c);
    let (n1, n2) = (first.size(), second.size());
    let syms = sample.alphabet.len();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n1 * n2];
    for p in 0..n1 {
        for q in 0..n2 {
            for a in 0..syms {
                rev[first.ts.succ(p, a) * n2 + second.ts.succ(q, a)].push(p * n2 + q);
            }
        }
    }
    let finals = (0..n1 * n2).filter(|&i| first.finals[i / n2] && second.finals[i % n2]);
    let c = crate::graph::reachable(&rev, finals);
    ConflictSetup::from_parts(first, second, c)
}

pub fn check_iteration_consistent(
    ts: &Ts,
    sample: &OmegaSample,
    rc: &RightCongruence,
    c: usize,
) -> Result<bool> {
    Ok(!iteration_setup(sample, rc, c)?.violated_by(ts))
}

/// Whether no strongly connected component of `ts` is visited infinitely
/// often both by a positive and by a negative loop word. Words whose run is
/// undefined impose nothing.
pub fn check_scc_purity(ts: &Ts, positive: &BTreeSet<UpWord>, negative: &BTreeSet<UpWord>) -> bool {
    let anchors = |words: &BTreeSet<UpWord>| {
        words
            .iter()
            .filter_map(|w| ts.loop_state_from(0, w))
            .collect::<Vec<_>>()
    };
    pure_anchors(ts, &anchors(positive), &anchors(negative))
}

/// Whether no component holds a state from both lists.
pub fn pure_anchors(ts: &Ts, positive: &[usize], negative: &[usize]) -> bool {
    let comp = ts.sccs().comp;
    let mut hit = vec![false; ts.size()];
    for &q in positive {
        hit[comp[q]] = true;
    }
    !negative.iter().any(|&q| hit[comp[q]])
}
