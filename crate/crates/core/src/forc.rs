//! Families of right congruences: learning them from samples, coloring their
//! progress congruences, and computing the canonical ones of a reference DPA.

use std::collections::{BTreeSet, HashMap};

use crate::automata::{Dpa, Mealy};
use crate::congruence::{default_ts, split_default_ts, RightCongruence, Ts};
use crate::consistency::{
    check_scc_purity, iteration_setup_unchecked, mn_setup, pure_anchors, ReachTracker,
};
use crate::error::{Error, Result};
use crate::glerc::{glerc, Cons, TraceEvent};
use crate::words::{Alphabet, OmegaSample, Sym, UpWord};

/// A leading right congruence with one progress congruence per leading class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forc {
    pub leading: RightCongruence,
    pub progress: Vec<RightCongruence>,
}

impl Forc {
    /// Leading size plus the sizes of all progress congruences.
    pub fn size(&self) -> usize {
        self.leading.size() + self.progress.iter().map(|p| p.size()).sum::<usize>()
    }

    /// Whether progress-equivalent representatives lead to the same leading
    /// class from every class.
    pub fn respects_leading(&self) -> bool {
        self.progress.iter().enumerate().all(|(c, prc)| {
            let (_, pairs) = prc.ts().product(self.leading.ts(), 0, c);
            let mut seen: HashMap<usize, usize> = HashMap::new();
            pairs.iter().all(|&(p, l)| *seen.entry(p).or_insert(l) == l)
        })
    }
}

/// A FORC with a priority per progress class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredForc {
    pub forc: Forc,
    pub colors: Vec<Vec<usize>>,
    /// Number of coloring rounds used per leading class.
    pub rounds: Vec<usize>,
}

/// One weak priority mapping per leading class, given as Mealy machines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FwpmFamily {
    pub leading: RightCongruence,
    pub machines: Vec<Mealy>,
}

impl FwpmFamily {
    pub fn alphabet(&self) -> &Alphabet {
        &self.machines[0].alphabet
    }

    /// Number of priorities `k`, so that all outputs lie in `0..k`.
    pub fn num_priorities(&self) -> usize {
        self.machines
            .iter()
            .map(|m| m.max_output())
            .max()
            .unwrap_or(0)
            + 1
    }

    /// Output of the machine for class `c` on a non-empty word.
    pub fn value(&self, c: usize, x: &[usize]) -> usize {
        self.machines[c].output(x).expect("non-empty word")
    }
}

/// Positions `i` of `w` paired with the class reached by its length-`i`
/// prefix, until the pair (aligned position, class) repeats.
fn positions_with_classes(w: &UpWord, rc: &RightCongruence) -> Vec<(usize, usize)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut class = 0;
    let mut i = 0;
    while seen.insert((w.align(i), class)) {
        out.push((i, class));
        class = rc.succ(class, w.symbol_at(i));
        i += 1;
    }
    out
}

/// The words `v` such that `xv` is a sample word for some `x` in class `c`,
/// with the sign of that sample word.
pub fn residual_sample(
    sample: &OmegaSample,
    rc: &RightCongruence,
    c: usize,
) -> Result<OmegaSample> {
    let mut out = OmegaSample::empty(sample.alphabet.clone());
    for (w, sign) in sample.words() {
        for (i, class) in positions_with_classes(w, rc) {
            if class == c {
                out.insert(w.suffix(i), sign)?;
            }
        }
    }
    Ok(out)
}

/// Periodic words `v^ω` such that `xv^ω` is a sample word of the given sign for
/// some `x` in class `c` with `xv` in class `c` as well.
pub fn looping_periodics(
    sample: &OmegaSample,
    rc: &RightCongruence,
    c: usize,
    positive: bool,
) -> BTreeSet<UpWord> {
    let mut out = BTreeSet::new();
    for (w, sign) in sample.words() {
        if sign != positive {
            continue;
        }
        for (i, class) in positions_with_classes(w, rc) {
            let rest = w.suffix(i);
            if class != c || !rest.spine().is_empty() {
                continue;
            }
            // Some power of the period must lead from c back to c.
            let mut seen = BTreeSet::new();
            let mut d = rc.run(c, rest.period());
            while d != c && seen.insert(d) {
                d = rc.run(d, rest.period());
            }
            if d == c {
                out.insert(rest);
            }
        }
    }
    out
}

/// Whether every state of the partial `ts` reached together with class `c`
/// of `leading` is reached with only that one class.
fn refines_from(ts: &Ts, leading: &RightCongruence, c: usize) -> bool {
    let mut class_of: Vec<Option<usize>> = vec![None; ts.size()];
    class_of[0] = Some(c);
    let mut stack = vec![0];
    while let Some(q) = stack.pop() {
        let l = class_of[q].expect("visited");
        for a in 0..ts.num_syms() {
            let Some(t) = ts.get(q, a) else { continue };
            let m = leading.succ(l, a);
            match class_of[t] {
                None => {
                    class_of[t] = Some(m);
                    stack.push(t);
                }
                Some(x) if x != m => return false,
                _ => {}
            }
        }
    }
    true
}

/// Consistency for a progress congruence of class `c`: both conflict setups,
/// SCC purity of the looping words and agreement with the leading congruence.
struct ProgressCons<'a> {
    mn: ReachTracker<'a>,
    iteration: ReachTracker<'a>,
    pos: &'a BTreeSet<UpWord>,
    neg: &'a BTreeSet<UpWord>,
    leading: &'a RightCongruence,
    c: usize,
    /// Leading class of every committed state.
    lead_of: Vec<usize>,
    /// Loop states of the looping words under the committed system, once defined.
    pos_anchors: Vec<Option<usize>>,
    neg_anchors: Vec<Option<usize>>,
}

fn anchors_under(t: &Ts, words: &BTreeSet<UpWord>, known: &[Option<usize>]) -> Vec<Option<usize>> {
    words
        .iter()
        .zip(known)
        .map(|(w, &k)| k.or_else(|| t.loop_state_from(0, w)))
        .collect()
}

impl ProgressCons<'_> {
    fn pure(&self, t: &Ts) -> bool {
        let pos: Vec<usize> = anchors_under(t, self.pos, &self.pos_anchors)
            .into_iter()
            .flatten()
            .collect();
        let neg: Vec<usize> = anchors_under(t, self.neg, &self.neg_anchors)
            .into_iter()
            .flatten()
            .collect();
        pure_anchors(t, &pos, &neg)
    }
}

impl Cons for ProgressCons<'_> {
    fn holds(&mut self, t: &Ts) -> bool {
        !self.mn.setup().violated_by(t)
            && !self.iteration.setup().violated_by(t)
            && check_scc_purity(t, self.pos, self.neg)
            && refines_from(t, self.leading, self.c)
    }

    fn holds_extended(&mut self, t: &Ts, p: usize, a: Sym) -> bool {
        let target = t.get(p, a).expect("extension sets the transition");
        if self.lead_of[target] != self.leading.succ(self.lead_of[p], a) {
            return false;
        }
        let ok = !self.mn.violated_by_extension(t, p, a)
            && !self.iteration.violated_by_extension(t, p, a)
            && self.pure(t);
        if !ok {
            self.mn.rollback();
            self.iteration.rollback();
        }
        ok
    }

    fn commit(&mut self, t: &Ts, p: usize, a: Sym) {
        self.mn.commit(t, p, a);
        self.iteration.commit(t, p, a);
        if t.size() > self.lead_of.len() {
            self.lead_of.push(self.leading.succ(self.lead_of[p], a));
        }
        self.pos_anchors = anchors_under(t, self.pos, &self.pos_anchors);
        self.neg_anchors = anchors_under(t, self.neg, &self.neg_anchors);
    }
}

/// Statistics and traces of a FORC learning run.
#[derive(Clone, Debug, Default)]
pub struct ForcLearning {
    pub cons_calls: usize,
    /// Leading classes whose progress default violated loop purity.
    pub purity_fallbacks: Vec<usize>,
    pub leading_trace: Vec<TraceEvent>,
    pub progress_traces: Vec<Vec<TraceEvent>>,
}

fn product_rc(default: &RightCongruence, leading: &RightCongruence, c: usize) -> RightCongruence {
    let (ts, _) = default.ts().product(leading.ts(), 0, c);
    RightCongruence::from_ts(&ts)
}

/// Learns a FORC consistent with the sample: the leading congruence keeps
/// sample prefixes with conflicting futures apart, and each progress
/// congruence additionally separates looping words of opposite signs.
pub fn learn_forc(sample: &OmegaSample) -> Result<(Forc, ForcLearning)> {
    let mut stats = ForcLearning::default();
    let mn = mn_setup(sample);
    let leading_run = glerc(ReachTracker::new(&mn), &default_ts(sample))?;
    stats.cons_calls += leading_run.cons_calls;
    stats.leading_trace = leading_run.trace;
    let leading = leading_run.result;
    let mut progress = Vec::with_capacity(leading.size());
    for c in 0..leading.size() {
        let sc = residual_sample(sample, &leading, c)?;
        let pos = looping_periodics(sample, &leading, c, true);
        let neg = looping_periodics(sample, &leading, c, false);
        let mn_c = mn_setup(&sc);
        let it_c = iteration_setup_unchecked(&sc, &leading, c);
        let mut cons = ProgressCons {
            mn: ReachTracker::new(&mn_c),
            iteration: ReachTracker::new(&it_c),
            pos: &pos,
            neg: &neg,
            leading: &leading,
            c,
            lead_of: vec![c],
            pos_anchors: vec![None; pos.len()],
            neg_anchors: vec![None; neg.len()],
        };
        let mut default = product_rc(&default_ts(&sc), &leading, c);
        if !cons.holds(default.ts()) {
            stats.purity_fallbacks.push(c);
            default = product_rc(&split_default_ts(&sc), &leading, c);
        }
        let run = glerc(cons, &default)?;
        stats.cons_calls += run.cons_calls;
        stats.progress_traces.push(run.trace);
        progress.push(run.result);
    }
    Ok((Forc { leading, progress }, stats))
}

/// Assigns priorities in rounds: in round `i` every uncolored state whose
/// reachable labelled states are all colored already or carry the label
/// matching the parity of `i` (positive iff even) gets `i`. Returns the
/// colors and the number of rounds used.
pub fn color_by_rounds(ts: &Ts, labels: &[Option<bool>]) -> Result<(Vec<usize>, usize)> {
    let n = ts.size();
    let adj = ts.adjacency();
    let reach_sets: Vec<Vec<usize>> = (0..n)
        .map(|q| {
            let r = crate::graph::reachable(&adj, [q]);
            (0..n).filter(|&p| r[p] && labels[p].is_some()).collect()
        })
        .collect();
    let mut color: Vec<Option<usize>> = vec![None; n];
    let mut round = 0;
    let mut idle = 0;
    while color.iter().any(|c| c.is_none()) {
        let even = round % 2 == 0;
        let fresh: Vec<usize> = (0..n)
            .filter(|&q| color[q].is_none())
            .filter(|&q| {
                reach_sets[q]
                    .iter()
                    .all(|&p| color[p].is_some() || labels[p] == Some(even))
            })
            .collect();
        if fresh.is_empty() {
            idle += 1;
            if idle >= 2 {
                return Err(Error::PurityViolation);
            }
        } else {
            idle = 0;
        }
        for q in fresh {
            color[q] = Some(round);
        }
        round += 1;
    }
    let used = color
        .iter()
        .map(|c| c.expect("colored") + 1)
        .max()
        .unwrap_or(0);
    Ok((
        color.into_iter().map(|c| c.expect("colored")).collect(),
        used,
    ))
}

/// Colors each progress congruence from the looping words of the sample.
pub fn color_forc(forc: &Forc, sample: &OmegaSample) -> Result<ColoredForc> {
    let mut colors = Vec::with_capacity(forc.progress.len());
    let mut rounds = Vec::with_capacity(forc.progress.len());
    for (c, prc) in forc.progress.iter().enumerate() {
        let mut labels: Vec<Option<bool>> = vec![None; prc.size()];
        for positive in [true, false] {
            for w in looping_periodics(sample, &forc.leading, c, positive) {
                for q in prc.ts().infinity_set(&w).expect("complete") {
                    if labels[q] == Some(!positive) {
                        return Err(Error::PurityViolation);
                    }
                    labels[q] = Some(positive);
                }
            }
        }
        if !check_labels_pure(prc.ts(), &labels) {
            return Err(Error::PurityViolation);
        }
        let (col, r) = color_by_rounds(prc.ts(), &labels)?;
        colors.push(col);
        rounds.push(r);
    }
    Ok(ColoredForc {
        forc: forc.clone(),
        colors,
        rounds,
    })
}

fn check_labels_pure(ts: &Ts, labels: &[Option<bool>]) -> bool {
    let sccs = ts.sccs();
    let mut sign: HashMap<usize, bool> = HashMap::new();
    labels.iter().enumerate().all(|(q, l)| match l {
        None => true,
        Some(s) => *sign.entry(sccs.comp[q]).or_insert(*s) == *s,
    })
}

/// One Mealy machine per leading class on the progress transition system,
/// emitting the color of the target class.
pub fn mealy_family(cf: &ColoredForc, alphabet: &Alphabet) -> FwpmFamily {
    let machines = cf
        .forc
        .progress
        .iter()
        .zip(&cf.colors)
        .map(|(prc, col)| {
            let ts = prc.ts().clone();
            let syms = ts.num_syms();
            let out = (0..ts.size() * syms)
                .map(|i| col[ts.succ(i / syms, i % syms)])
                .collect();
            Mealy::new(alphabet.clone(), ts, out).expect("complete progress congruence")
        })
        .collect();
    FwpmFamily {
        leading: cf.forc.leading.clone(),
        machines,
    }
}

/// The right congruence of language equivalence between the states of `a`.
pub fn myhill_nerode_from_dpa(a: &Dpa) -> RightCongruence {
    let a = a.trim();
    let mut class_rep: Vec<usize> = Vec::new();
    let mut class = vec![0; a.size()];
    for (q, cls) in class.iter_mut().enumerate() {
        match class_rep.iter().position(|&r| a.states_equivalent(r, q)) {
            Some(i) => *cls = i,
            None => {
                *cls = class_rep.len();
                class_rep.push(q);
            }
        }
    }
    let syms = a.syms();
    let mut ts = Ts::with_states(syms, class_rep.len());
    for (i, &r) in class_rep.iter().enumerate() {
        for s in 0..syms {
            ts.set(i, s, Some(class[a.succ(r, s)]));
        }
    }
    RightCongruence::from_ts(&ts)
}

/// Leading class of every state of a trimmed DPA, or an error if some state
/// is reached by words of different classes.
pub fn leading_classes(a: &Dpa, leading: &RightCongruence) -> Result<Vec<usize>> {
    let mut out: Vec<Option<usize>> = vec![None; a.size()];
    out[0] = Some(0);
    let mut stack = vec![0];
    while let Some(q) = stack.pop() {
        let l = out[q].expect("visited");
        for s in 0..a.syms() {
            let (t, m) = (a.succ(q, s), leading.succ(l, s));
            match out[t] {
                None => {
                    out[t] = Some(m);
                    stack.push(t);
                }
                Some(x) if x != m => return Err(Error::RefinementViolation),
                _ => {}
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|x| x.expect("trimmed automaton"))
        .collect())
}

/// Upper bound on the number of nodes explored when building a progress profile.
pub const PROFILE_BUDGET: usize = 1_000_000;

/// The behaviour of all finite words read from the states of one leading
/// class: each node maps every state of the class to the state reached and
/// the least priority seen on the way. Node 0 stands for ε.
#[derive(Clone, Debug)]
pub struct ProgressProfile {
    pub class: usize,
    pub ts: Ts,
    /// Leading class reached by the words of each node.
    pub lead: Vec<usize>,
    /// For nodes looping on the class: whether `u x^ω` is accepted, where `u`
    /// is the class representative and `x` any word of the node.
    pub accepts: Vec<Option<bool>>,
}

impl ProgressProfile {
    pub fn build(a: &Dpa, leading: &RightCongruence, c: usize) -> Result<Self> {
        let a = a.trim();
        let lead_of = leading_classes(&a, leading)?;
        let members: Vec<usize> = (0..a.size()).filter(|&q| lead_of[q] == c).collect();
        let index: HashMap<usize, usize> =
            members.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let home = a.ts.run(0, leading.rep(c)).expect("complete");
        let syms = a.syms();
        type Node = Vec<(usize, usize)>;
        let mut nodes: Vec<Option<Node>> = vec![None];
        let mut ids: HashMap<Node, usize> = HashMap::new();
        let mut ts = Ts::new(syms);
        let mut lead = vec![c];
        let mut accepts = vec![None];
        let mut i = 0;
        while i < nodes.len() {
            for s in 0..syms {
                let next: Node = match &nodes[i] {
                    None => members
                        .iter()
                        .map(|&q| (a.succ(q, s), a.priority(q, s)))
                        .collect(),
                    Some(f) => f
                        .iter()
                        .map(|&(q, m)| (a.succ(q, s), m.min(a.priority(q, s))))
                        .collect(),
                };
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = ts.add_state();
                        if id >= PROFILE_BUDGET {
                            return Err(Error::StateBudgetExceeded(PROFILE_BUDGET));
                        }
                        let l = leading.succ(lead[i], s);
                        lead.push(l);
                        accepts.push((l == c).then(|| {
                            // Iterate the node's state map from the home state.
                            let mut seen: HashMap<usize, usize> = HashMap::new();
                            let mut mins = Vec::new();
                            let mut q = home;
                            while !seen.contains_key(&q) {
                                seen.insert(q, mins.len());
                                let (t, m) = next[index[&q]];
                                mins.push(m);
                                q = t;
                            }
                            mins[seen[&q]..].iter().min().expect("cycle") % 2 == 0
                        }));
                        ids.insert(next.clone(), id);
                        nodes.push(Some(next));
                        id
                    }
                };
                ts.set(i, s, Some(id));
            }
            i += 1;
        }
        Ok(ProgressProfile {
            class: c,
            ts,
            lead,
            accepts,
        })
    }

    pub fn size(&self) -> usize {
        self.ts.size()
    }

    /// Partition of the nodes into classes of the canonical progress congruence.
    pub fn partition(&self) -> Vec<usize> {
        let mut labels: HashMap<(usize, Option<bool>, bool), usize> = HashMap::new();
        let init: Vec<usize> = (0..self.size())
            .map(|q| {
                let len = labels.len();
                *labels
                    .entry((self.lead[q], self.accepts[q], q == 0))
                    .or_insert(len)
            })
            .collect();
        crate::automata::refine_partition(&self.ts, &init, |_, _| 0)
    }

    pub fn canonical_prc(&self) -> RightCongruence {
        let class = self.partition();
        let k = class.iter().max().map_or(0, |m| m + 1);
        let mut ts = Ts::with_states(self.ts.num_syms(), k);
        for p in 0..self.size() {
            for a in 0..self.ts.num_syms() {
                ts.set(class[p], a, Some(class[self.ts.succ(p, a)]));
            }
        }
        let (ts, _) = ts.canonical_from(class[0]);
        RightCongruence::from_ts(&ts)
    }
}

/// The canonical progress congruence of `L(a)` for class `c` of `leading`,
/// with a class of its own for ε.
pub fn canonical_prc_from_dpa(
    a: &Dpa,
    leading: &RightCongruence,
    c: usize,
) -> Result<RightCongruence> {
    Ok(ProgressProfile::build(a, leading, c)?.canonical_prc())
}

/// Whether the class `p` of a progress congruence for leading class `c` is
/// idempotent, judged by its representative.
pub fn is_idempotent(prc: &RightCongruence, leading: &RightCongruence, c: usize, p: usize) -> bool {
    let x = prc.rep(p);
    !x.is_empty() && leading.loops_on(c, x) && prc.run(p, x) == p
}

/// Colors the classes of a progress congruence from the signs of its
/// idempotent classes, where the class of `x` is positive iff `u x^ω` is in
/// the language for the representative `u` of `c`.
pub fn kappa_from_idempotents(
    prc: &RightCongruence,
    c: usize,
    membership: impl Fn(&UpWord) -> bool,
    leading: &RightCongruence,
) -> Result<Vec<usize>> {
    let labels: Vec<Option<bool>> = (0..prc.size())
        .map(|p| {
            is_idempotent(prc, leading, c, p).then(|| {
                let w =
                    UpWord::new(leading.rep(c).to_vec(), prc.rep(p).to_vec()).expect("non-empty");
                membership(&w)
            })
        })
        .collect();
    if !check_labels_pure(prc.ts(), &labels) {
        return Err(Error::ImpureScc);
    }
    color_by_rounds(prc.ts(), &labels)
        .map(|(c, _)| c)
        .map_err(|_| Error::ImpureScc)
}
