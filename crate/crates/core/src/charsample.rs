//! Samples from which the learner recovers a given DPA, and remains stable
//! under consistent extensions.

use std::collections::{HashMap, VecDeque};

use crate::automata::{Dpa, Mealy};
use crate::congruence::RightCongruence;
use crate::dpainf::dpainf;
use crate::error::{Error, Result};
use crate::forc::{
    canonical_prc_from_dpa, is_idempotent, learn_forc, myhill_nerode_from_dpa, ProgressProfile,
};
use crate::glerc::TraceEvent;
use crate::mealy_learner::{learn_mealy, Teacher};
use crate::precise::precise_dpa;
use crate::words::{OmegaSample, Sym, UpWord, Word};

/// Upper bound on the number of refinement rounds.
pub const MAX_ROUNDS: usize = 400;

/// The least ω-word `t` (in the order of [`Dpa::equivalent`]) such that
/// exactly one of `x t` and `y t` is accepted; returns both words.
pub fn leading_separator(a: &Dpa, x: &[Sym], y: &[Sym]) -> Result<(UpWord, UpWord)> {
    let p = a.ts.run(0, x).ok_or(Error::Incomplete)?;
    let q = a.ts.run(0, y).ok_or(Error::Incomplete)?;
    let t = a
        .rooted_at(p)
        .equivalent(&a.rooted_at(q))?
        .ok_or(Error::NotSeparable)?;
    Ok((t.prepend(x), t.prepend(y)))
}

/// Separates `x` and `y` in the canonical progress congruence of class `c`:
/// by a leading separator if `ux` and `uy` are in different classes
/// (`u` the class representative), and otherwise by `u(xz)^ω` and `u(yz)^ω`
/// for the llex-least `z` with `uxz ∼ u` on which membership differs.
pub fn progress_separator(
    a: &Dpa,
    leading: &RightCongruence,
    c: usize,
    x: &[Sym],
    y: &[Sym],
) -> Result<(UpWord, UpWord)> {
    let profile = ProgressProfile::build(a, leading, c)?;
    progress_separator_with(a, leading, &profile, x, y)
}

fn progress_separator_with(
    a: &Dpa,
    leading: &RightCongruence,
    profile: &ProgressProfile,
    x: &[Sym],
    y: &[Sym],
) -> Result<(UpWord, UpWord)> {
    let c = profile.class;
    let u = leading.rep(c);
    if leading.run(c, x) != leading.run(c, y) {
        let mut ux = u.to_vec();
        ux.extend_from_slice(x);
        let mut uy = u.to_vec();
        uy.extend_from_slice(y);
        return leading_separator(a, &ux, &uy);
    }
    let start = (
        profile.ts.run(0, x).expect("complete"),
        profile.ts.run(0, y).expect("complete"),
    );
    type Pair = (usize, usize);
    let mut parent: HashMap<Pair, Option<(Pair, Sym)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    while let Some(pair @ (p, q)) = queue.pop_front() {
        if p != 0
            && q != 0
            && profile.accepts[p].is_some()
            && profile.accepts[p] != profile.accepts[q]
        {
            let mut z = Vec::new();
            let mut cur = pair;
            while let Some(&Some((prev, s))) = parent.get(&cur) {
                z.push(s);
                cur = prev;
            }
            z.reverse();
            let lasso = |w: &[Sym]| {
                let mut period = w.to_vec();
                period.extend_from_slice(&z);
                UpWord::new(u.to_vec(), period).expect("non-empty period")
            };
            return Ok((lasso(x), lasso(y)));
        }
        for s in 0..profile.ts.num_syms() {
            let next = (profile.ts.succ(p, s), profile.ts.succ(q, s));
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                e.insert(Some((pair, s)));
                queue.push_back(next);
            }
        }
    }
    Err(Error::NotSeparable)
}

/// Statistics of a sample construction.
#[derive(Clone, Debug, Default)]
pub struct CharSampleStats {
    pub rounds: usize,
    pub separators: usize,
    pub query_words: usize,
    pub counterexamples: usize,
}

struct Builder<'a> {
    target: &'a Dpa,
    sample: OmegaSample,
}

impl Builder<'_> {
    /// Adds `w` signed by membership; reports whether it was new.
    fn add(&mut self, w: UpWord) -> bool {
        let sign = self.target.accepts(&w);
        self.sample
            .insert(w, sign)
            .expect("membership is a function")
    }

    fn add_pair(&mut self, (v, w): (UpWord, UpWord)) -> bool {
        let a = self.add(v);
        let b = self.add(w);
        a || b
    }
}

/// The first accepted merge in a trace that joins words of different
/// classes according to `wrong`.
fn wrong_merges<'t>(
    trace: &'t [TraceEvent],
    mut wrong: impl FnMut(&[Sym], &[Sym]) -> bool + 't,
) -> impl Iterator<Item = (Word, Word)> + 't {
    trace.iter().filter_map(move |e| {
        let y = e.target.as_ref()?;
        let mut x = e.source.clone();
        x.push(e.symbol);
        (e.accepted && wrong(&x, y)).then(|| (x, y.clone()))
    })
}

/// Answers from the precise DPA of the target and accepts exactly the
/// hypotheses recognizing the target language; records what it was asked.
struct PerfectTeacher<'a> {
    precise: &'a Mealy,
    target: &'a Dpa,
    queries: Vec<Word>,
    /// Per rejected hypothesis: an ω-word it misclassifies and the least
    /// word on which it disagrees with the precise DPA.
    rejections: Vec<(UpWord, Word)>,
    failure: Option<Error>,
}

impl Teacher for PerfectTeacher<'_> {
    fn output_query(&mut self, w: &[Sym]) -> usize {
        self.queries.push(w.to_vec());
        self.precise.output(w).expect("non-empty query")
    }

    fn equivalence_query(&mut self, h: &Mealy) -> Option<Word> {
        match Dpa::from(h.clone()).equivalent(self.target) {
            Ok(None) => None,
            Ok(Some(w)) => {
                let g = self
                    .precise
                    .separating_word(h)
                    .expect("different languages");
                self.rejections.push((w, g.clone()));
                Some(g)
            }
            Err(e) => {
                self.failure = Some(e);
                None
            }
        }
    }
}

pub fn characteristic_sample(a: &Dpa) -> Result<OmegaSample> {
    characteristic_sample_with_stats(a).map(|(s, _)| s)
}

/// Grows a sample until learning on it reproduces the target: wrong merges
/// of the congruence learners get separating words, idempotent progress
/// classes get their loops, and the final learning phase gets the words its
/// queries and counterexamples need.
pub fn characteristic_sample_with_stats(a: &Dpa) -> Result<(OmegaSample, CharSampleStats)> {
    let target = a.trim();
    let leading = myhill_nerode_from_dpa(&target);
    let profiles: Vec<ProgressProfile> = (0..leading.size())
        .map(|c| ProgressProfile::build(&target, &leading, c))
        .collect::<Result<_>>()?;
    let prcs: Vec<RightCongruence> = (0..leading.size())
        .map(|c| canonical_prc_from_dpa(&target, &leading, c))
        .collect::<Result<_>>()?;
    let precise = precise_dpa(&target, Some(&leading))?.as_mealy();
    let mut b = Builder {
        target: &target,
        sample: OmegaSample::empty(target.alphabet.clone()),
    };
    let mut stats = CharSampleStats::default();
    for (c, prc) in prcs.iter().enumerate() {
        for p in 0..prc.size() {
            if is_idempotent(prc, &leading, c, p) {
                b.add(
                    UpWord::new(leading.rep(c).to_vec(), prc.rep(p).to_vec()).expect("non-empty"),
                );
            }
        }
    }
    // Replay of the final learning phase against a perfect teacher: its
    // queries become sample prefixes and its rejected hypotheses inconsistent.
    let mut teacher = PerfectTeacher {
        precise: &precise,
        target: &target,
        queries: Vec::new(),
        rejections: Vec::new(),
        failure: None,
    };
    learn_mealy(&mut teacher, &target.alphabet)?;
    if let Some(e) = teacher.failure {
        return Err(e);
    }
    for u in teacher.queries {
        if !b.sample.is_prefix(&u) {
            stats.query_words += 1;
            b.add(UpWord::periodic(u).expect("non-empty query"));
        }
    }
    for (w, g) in teacher.rejections {
        stats.counterexamples += 1;
        b.add(w);
        b.add(UpWord::periodic(g).expect("non-empty"));
    }
    while stats.rounds < MAX_ROUNDS {
        stats.rounds += 1;
        let (forc, learning) = learn_forc(&b.sample)?;
        let lead_wrong = |x: &[Sym], y: &[Sym]| leading.class_of(x) != leading.class_of(y);
        let mut added = false;
        for (x, y) in wrong_merges(&learning.leading_trace, lead_wrong) {
            if b.add_pair(leading_separator(&target, &x, &y)?) {
                stats.separators += 1;
                added = true;
                break;
            }
        }
        if added {
            continue;
        }
        if !forc.leading.same_as(&leading) {
            // The learner fell back to its default: give it more prefixes.
            let mut grown = false;
            for c in 0..leading.size() {
                for s in 0..target.syms() {
                    let mut x = leading.rep(c).to_vec();
                    x.push(s);
                    grown |= b.add(UpWord::new(x, vec![s]).expect("non-empty"));
                }
            }
            if grown {
                continue;
            }
        } else {
            for (c, profile) in profiles.iter().enumerate() {
                let class = profile.partition();
                let prc_wrong = |x: &[Sym], y: &[Sym]| {
                    class[profile.ts.run(0, x).expect("complete")]
                        != class[profile.ts.run(0, y).expect("complete")]
                };
                for (x, y) in wrong_merges(&learning.progress_traces[c], prc_wrong) {
                    match progress_separator_with(&target, &leading, profile, &x, &y) {
                        Ok(pair) => {
                            if b.add_pair(pair) {
                                stats.separators += 1;
                                added = true;
                                break;
                            }
                        }
                        Err(Error::NotSeparable) => {}
                        Err(e) => return Err(e),
                    }
                }
                if added {
                    break;
                }
            }
            if added {
                continue;
            }
        }
        // The congruences are settled; check the whole pipeline.
        let (h, _) = dpainf(&b.sample)?;
        let Some(w) = h.equivalent(&target)? else {
            return Ok((b.sample, stats));
        };
        stats.counterexamples += 1;
        b.add(w);
        if let Some(g) = precise.separating_word(&h.as_mealy()) {
            b.add(UpWord::periodic(g).expect("non-empty"));
        }
    }
    Err(Error::NoConvergence)
}
