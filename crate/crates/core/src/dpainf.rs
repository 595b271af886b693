//! Passive learning of a DPA from a sample: learn a FORC, color it, join the
//! resulting priority mappings on the sample, and hand that to an active
//! Mealy learner.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::automata::{Dpa, Mealy};
use crate::congruence::{PrefixTree, RightCongruence, TreeKeying, Ts};
use crate::error::{Error, Result};
use crate::forc::{
    color_forc, learn_forc, looping_periodics, mealy_family, ColoredForc, FwpmFamily,
};
use crate::mealy_learner::{learn_mealy, Teacher};
use crate::precise::{join_priority_word_with, threshold_dfas, PriorityWord, STATE_BUDGET};
use crate::words::{OmegaSample, Sym, UpWord, Word};

/// Sample words paired with the priorities the join emits on them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredSample {
    pub entries: Vec<(UpWord, PriorityWord)>,
}

impl ColoredSample {
    pub fn num_priorities(&self) -> usize {
        self.entries
            .iter()
            .flat_map(|(_, p)| p.spine().iter().chain(p.period()))
            .max()
            .map_or(1, |m| m + 1)
    }
}

pub fn colored_sample(f: &FwpmFamily, sample: &OmegaSample) -> Result<ColoredSample> {
    let dfas = threshold_dfas(f)?;
    let entries = sample
        .words()
        .map(|(w, _)| Ok((w.clone(), join_priority_word_with(f, &dfas, w)?)))
        .collect::<Result<_>>()?;
    Ok(ColoredSample { entries })
}

/// DPA with a single sink state appended that loops with priority 0.
fn with_sink(
    syms: usize,
    n: usize,
    mut edge: impl FnMut(usize, Sym) -> Option<(usize, usize)>,
) -> (Ts, Vec<usize>) {
    let mut ts = Ts::with_states(syms, n + 1);
    let mut prio = vec![0; (n + 1) * syms];
    for q in 0..=n {
        for a in 0..syms {
            let (t, p) = if q == n { None } else { edge(q, a) }.unwrap_or((n, 0));
            ts.set(q, a, Some(t));
            prio[q * syms + a] = p;
        }
    }
    (ts, prio)
}

/// The DPA that emits the recorded priorities on prefixes of sample words
/// and 0 everywhere else.
pub fn prefix_dpa_b(cs: &ColoredSample, sample: &OmegaSample) -> Dpa {
    let syms = sample.alphabet.len();
    let k = cs.num_priorities();
    let zipped: Vec<UpWord> = cs.entries.iter().map(|(w, p)| w.zip(p, k)).collect();
    let tree = PrefixTree::build(&zipped, syms * k, TreeKeying::Residual);
    let live: Vec<usize> = (0..tree.ts.size())
        .filter(|&q| Some(q) != tree.sink)
        .collect();
    let id: HashMap<usize, usize> = live.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    let (ts, prio) = with_sink(syms, live.len(), |q, a| {
        (0..k).find_map(|p| id.get(&tree.ts.succ(live[q], a * k + p)).map(|&t| (t, p)))
    });
    Dpa::new(sample.alphabet.clone(), ts, prio)
        .expect("complete")
        .trim()
}

/// Emits 1 while the input keeps following the period of a negative looping
/// word and 0 whenever it has to restart the match; negative words thus
/// end in 1s, and words with a different periodic part restart infinitely often.
pub fn fallback_dpa(sample: &OmegaSample, rc: &RightCongruence) -> Result<Dpa> {
    let syms = sample.alphabet.len();
    let periods: Vec<Word> = (0..rc.size())
        .flat_map(|c| looping_periodics(sample, rc, c, false))
        .map(|w| w.period().to_vec())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    type Node = BTreeSet<(usize, usize)>;
    let step = |set: &Node, a: Sym| -> Node {
        set.iter()
            .filter(|&&(n, i)| periods[n][i] == a)
            .map(|&(n, i)| (n, (i + 1) % periods[n].len()))
            .collect()
    };
    let every: Node = periods
        .iter()
        .enumerate()
        .flat_map(|(n, v)| (0..v.len()).map(move |i| (n, i)))
        .collect();
    let start: Node = (0..periods.len()).map(|n| (n, 0)).collect();
    let mut nodes = vec![start.clone()];
    let mut ids: HashMap<Node, usize> = HashMap::from([(start, 0)]);
    let mut ts = Ts::new(syms);
    let mut prio = Vec::new();
    let mut i = 0;
    while i < nodes.len() {
        for a in 0..syms {
            let kept = step(&nodes[i], a);
            let (next, p) = if kept.is_empty() {
                (step(&every, a), 0)
            } else {
                (kept, 1)
            };
            prio.push(p);
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    let id = ts.add_state();
                    if id >= STATE_BUDGET {
                        return Err(Error::StateBudgetExceeded(STATE_BUDGET));
                    }
                    ids.insert(next.clone(), id);
                    nodes.push(next);
                    id
                }
            };
            ts.set(i, a, Some(id));
        }
        i += 1;
    }
    Ok(Dpa::new(sample.alphabet.clone(), ts, prio)?.trim())
}

/// Prefix tree of the sample that emits 0 on positive and 1 on negative
/// words once they are identified. Consistent with every sample.
pub fn signed_tree_dpa(sample: &OmegaSample) -> Dpa {
    let syms = sample.alphabet.len();
    let words: Vec<UpWord> = sample.words().map(|(w, _)| w.clone()).collect();
    let signs: Vec<usize> = sample.words().map(|(_, s)| usize::from(!s)).collect();
    let tree = PrefixTree::build_labeled(&words, &signs, syms, TreeKeying::Residual);
    let prio = (0..tree.ts.size() * syms)
        .map(
            |i| match tree.matching[tree.ts.succ(i / syms, i % syms)].as_slice() {
                [(w, _)] => signs[*w],
                _ => 0,
            },
        )
        .collect();
    Dpa::new(sample.alphabet.clone(), tree.ts, prio)
        .expect("complete")
        .trim()
}

pub fn dpa_consistent_with_sample(a: &Dpa, sample: &OmegaSample) -> bool {
    sample.words().all(|(w, sign)| a.accepts(w) == sign)
}

/// The llex-least prefix of a sample word on which `b` and `h` emit
/// different priorities.
pub fn step4_counterexample(b: &Dpa, h: &Mealy, sample: &OmegaSample) -> Option<Word> {
    let syms = sample.alphabet.len();
    let words: Vec<UpWord> = sample.words().map(|(w, _)| w.clone()).collect();
    let tree = PrefixTree::build(&words, syms, TreeKeying::Residual);
    if tree.sink == Some(0) {
        return None;
    }
    let start = (0, 0, 0);
    type Triple = (usize, usize, usize);
    let mut parent: HashMap<Triple, Option<(Triple, Sym)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    let path = |parent: &HashMap<_, Option<(_, Sym)>>, mut s| {
        let mut w = Vec::new();
        while let Some(&Some((p, a))) = parent.get(&s) {
            w.push(a);
            s = p;
        }
        w.reverse();
        w
    };
    while let Some(s @ (p, q, t)) = queue.pop_front() {
        for a in 0..syms {
            let t2 = tree.ts.succ(t, a);
            if Some(t2) == tree.sink {
                continue;
            }
            if b.priority(p, a) != h.output_at(q, a) {
                let mut w = path(&parent, s);
                w.push(a);
                return Some(w);
            }
            let next = (b.succ(p, a), h.succ(q, a), t2);
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                e.insert(Some((s, a)));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Answers output queries with `b` and accepts any hypothesis consistent
/// with the sample.
pub struct SampleTeacher<'a> {
    pub b: &'a Dpa,
    pub sample: &'a OmegaSample,
    pub missing_disagreement: bool,
}

impl Teacher for SampleTeacher<'_> {
    fn output_query(&mut self, w: &[Sym]) -> usize {
        let q = self.b.ts.run(0, &w[..w.len() - 1]).expect("complete");
        self.b.priority(q, w[w.len() - 1])
    }

    fn equivalence_query(&mut self, h: &Mealy) -> Option<Word> {
        if dpa_consistent_with_sample(&Dpa::from(h.clone()), self.sample) {
            return None;
        }
        let cex = step4_counterexample(self.b, h, self.sample);
        self.missing_disagreement |= cex.is_none();
        cex
    }
}

/// Which DPA was handed to the Mealy learner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// The join of the learned family restricted to sample prefixes.
    Join,
    /// The negative-loop tracker.
    NegativeLoops,
    /// The signed prefix tree.
    SignedTree,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Join => "join",
            Branch::NegativeLoops => "negative-loops",
            Branch::SignedTree => "signed-tree",
        })
    }
}

#[derive(Clone, Debug)]
pub struct LearnReport {
    pub leading_size: usize,
    pub progress_sizes: Vec<usize>,
    pub coloring_rounds: Vec<usize>,
    /// Leading classes whose progress default had to be split.
    pub purity_fallbacks: Vec<usize>,
    pub cons_calls: usize,
    pub branch: Branch,
    pub b_size: usize,
    pub output_queries: usize,
    pub equivalence_queries: usize,
    pub hypothesis_sizes: Vec<usize>,
    pub dpa_size: usize,
    /// Steps that failed and were replaced by a fallback.
    pub anomalies: Vec<String>,
}

impl LearnReport {
    pub fn forc_size(&self) -> usize {
        self.leading_size + self.progress_sizes.iter().sum::<usize>()
    }
}

impl fmt::Display for LearnReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &[usize]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "leading_size: {}", self.leading_size)?;
        writeln!(f, "progress_sizes: {}", list(&self.progress_sizes))?;
        writeln!(f, "forc_size: {}", self.forc_size())?;
        writeln!(f, "coloring_rounds: {}", list(&self.coloring_rounds))?;
        writeln!(f, "purity_fallbacks: {}", list(&self.purity_fallbacks))?;
        writeln!(f, "cons_calls: {}", self.cons_calls)?;
        writeln!(f, "fallback_b: {}", self.branch != Branch::Join)?;
        writeln!(f, "b_branch: {}", self.branch)?;
        writeln!(f, "b_size: {}", self.b_size)?;
        writeln!(f, "output_queries: {}", self.output_queries)?;
        writeln!(f, "equivalence_queries: {}", self.equivalence_queries)?;
        writeln!(f, "hypothesis_sizes: {}", list(&self.hypothesis_sizes))?;
        writeln!(f, "dpa_size: {}", self.dpa_size)?;
        writeln!(f, "anomalies: {}", self.anomalies.join("; "))
    }
}

/// Everything produced by one learning run.
#[derive(Clone, Debug)]
pub struct Learned {
    pub dpa: Dpa,
    pub report: LearnReport,
    pub forc: Option<ColoredForc>,
}

pub fn dpainf(sample: &OmegaSample) -> Result<(Dpa, LearnReport)> {
    learn(sample).map(|l| (l.dpa, l.report))
}

/// Steps 1 to 3: the colored FORC and the DPA B for the teacher.
fn build_b(
    sample: &OmegaSample,
    report: &mut LearnReport,
) -> (Option<ColoredForc>, Option<RightCongruence>, Option<Dpa>) {
    let (forc, stats) = match learn_forc(sample) {
        Ok(x) => x,
        Err(e) => {
            report.anomalies.push(format!("forc: {e}"));
            return (None, None, None);
        }
    };
    report.leading_size = forc.leading.size();
    report.progress_sizes = forc.progress.iter().map(|p| p.size()).collect();
    report.purity_fallbacks = stats.purity_fallbacks;
    report.cons_calls = stats.cons_calls;
    let leading = forc.leading.clone();
    let cf = match color_forc(&forc, sample) {
        Ok(cf) => cf,
        Err(e) => {
            report.anomalies.push(format!("coloring: {e}"));
            return (None, Some(leading), None);
        }
    };
    report.coloring_rounds = cf.rounds.clone();
    let family = mealy_family(&cf, &sample.alphabet);
    match colored_sample(&family, sample) {
        Ok(cs) => (Some(cf), Some(leading), Some(prefix_dpa_b(&cs, sample))),
        Err(e) => {
            report.anomalies.push(format!("join: {e}"));
            (Some(cf), Some(leading), None)
        }
    }
}

fn empty_report() -> LearnReport {
    LearnReport {
        leading_size: 0,
        progress_sizes: Vec::new(),
        coloring_rounds: Vec::new(),
        purity_fallbacks: Vec::new(),
        cons_calls: 0,
        branch: Branch::Join,
        b_size: 0,
        output_queries: 0,
        equivalence_queries: 0,
        hypothesis_sizes: Vec::new(),
        dpa_size: 0,
        anomalies: Vec::new(),
    }
}

/// Steps 1 to 3 with fallbacks: a DPA consistent with the sample that the
/// teacher answers from, the partial report and the colored FORC.
pub fn teacher_dpa(sample: &OmegaSample) -> (Dpa, LearnReport, Option<ColoredForc>) {
    let mut report = empty_report();
    let (forc, leading, b) = build_b(sample, &mut report);
    let b = match b.filter(|b| dpa_consistent_with_sample(b, sample)) {
        Some(b) => b,
        None => {
            report.branch = Branch::NegativeLoops;
            let rc = leading.unwrap_or_else(|| RightCongruence::trivial(sample.alphabet.len()));
            match fallback_dpa(sample, &rc) {
                Ok(b) if dpa_consistent_with_sample(&b, sample) => b,
                _ => {
                    report.branch = Branch::SignedTree;
                    signed_tree_dpa(sample)
                }
            }
        }
    };
    report.b_size = b.size();
    (b, report, forc)
}

pub fn learn(sample: &OmegaSample) -> Result<Learned> {
    let (b, mut report, forc) = teacher_dpa(sample);
    let mut teacher = SampleTeacher {
        b: &b,
        sample,
        missing_disagreement: false,
    };
    let run = learn_mealy(&mut teacher, &sample.alphabet)?;
    if teacher.missing_disagreement {
        return Err(Error::NoDisagreement);
    }
    report.output_queries = run.output_queries;
    report.equivalence_queries = run.equivalence_queries;
    report.hypothesis_sizes = run.hypothesis_sizes;
    let dpa = Dpa::from(run.machine);
    report.dpa_size = dpa.size();
    Ok(Learned { dpa, report, forc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::forc::myhill_nerode_from_dpa;
    use crate::precise::precise_fwpm_from_dpa;
    use crate::words::Alphabet;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn sample(pos: &[&str], neg: &[&str]) -> OmegaSample {
        let p = pos
            .iter()
            .map(|s| ab().parse_upword(s).unwrap())
            .collect::<Vec<_>>();
        let n = neg
            .iter()
            .map(|s| ab().parse_upword(s).unwrap())
            .collect::<Vec<_>>();
        OmegaSample::new(ab(), p, n).unwrap()
    }

    #[test]
    fn b_follows_the_join_on_sample_prefixes() {
        let a = corpus::finitely_many_b_or_aba();
        let f = precise_fwpm_from_dpa(&a, &myhill_nerode_from_dpa(&a)).unwrap();
        let s = sample(&[",abaaba"], &[]);
        let cs = colored_sample(&f, &s).unwrap();
        assert_eq!(
            crate::precise::format_priority_word(&cs.entries[0].1),
            "|210"
        );
        let b = prefix_dpa_b(&cs, &s);
        assert_eq!(
            b.as_mealy().outputs(&[0, 1, 0, 0, 1, 0]),
            vec![2, 1, 0, 2, 1, 0]
        );
        assert_eq!(b.as_mealy().outputs(&[1, 1]), vec![0, 0]);
    }

    #[test]
    fn single_entry_b_has_loop_and_sink() {
        let s = sample(&[",a"], &[]);
        let cs = ColoredSample {
            entries: vec![(
                ab().parse_upword(",a").unwrap(),
                UpWord::periodic(vec![0]).unwrap(),
            )],
        };
        let b = prefix_dpa_b(&cs, &s);
        assert_eq!(b.size(), 2);
        assert!((0..2).all(|q| (0..2).all(|a| b.priority(q, a) == 0)));
    }

    #[test]
    fn negative_loop_fallback() {
        let s = sample(&[], &[",b"]);
        let b = fallback_dpa(&s, &RightCongruence::trivial(2)).unwrap();
        assert_eq!(b.as_mealy().outputs(&[1, 1, 1]), vec![1, 1, 1]);
        assert_eq!(b.as_mealy().outputs(&[0, 1]), vec![0, 0]);
        assert!(!b.accepts(&ab().parse_upword(",b").unwrap()));
        assert!(b.accepts(&ab().parse_upword(",a").unwrap()));
        let empty = fallback_dpa(&sample(&[], &[]), &RightCongruence::trivial(2)).unwrap();
        assert_eq!(empty.size(), 1);
        assert!(empty.accepts(&ab().parse_upword(",b").unwrap()));
    }

    #[test]
    fn consistency_of_constant_dpa() {
        let zero = Dpa::constant(ab(), 0);
        assert!(!dpa_consistent_with_sample(&zero, &sample(&[], &[",b"])));
        assert!(dpa_consistent_with_sample(&zero, &sample(&[",a"], &[])));
    }

    #[test]
    fn counterexample_is_first_disagreement() {
        let a = corpus::finitely_many_b_or_aba();
        let f = precise_fwpm_from_dpa(&a, &myhill_nerode_from_dpa(&a)).unwrap();
        let s = sample(&[",abaaba"], &[]);
        let b = prefix_dpa_b(&colored_sample(&f, &s).unwrap(), &s);
        assert_eq!(
            step4_counterexample(&b, &Mealy::constant(ab(), 0), &s),
            Some(vec![0])
        );
        assert_eq!(step4_counterexample(&b, &b.as_mealy(), &s), None);
    }

    #[test]
    fn learns_a_versus_b() {
        let s = sample(&[",a"], &[",b"]);
        let (a, report) = dpainf(&s).unwrap();
        assert!(a.accepts(&ab().parse_upword(",a").unwrap()));
        assert!(!a.accepts(&ab().parse_upword(",b").unwrap()));
        assert_eq!(report.branch, Branch::Join);
    }

    #[test]
    fn empty_sample_gives_total_dpa() {
        let (a, _) = dpainf(&sample(&[], &[])).unwrap();
        assert_eq!(a.size(), 1);
    }

    #[test]
    fn random_samples_are_learned_consistently() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let s = corpus::random_sample(&mut rng, &ab(), 6, 6);
            let (a, _) = dpainf(&s).unwrap();
            assert!(dpa_consistent_with_sample(&a, &s));
        }
    }

    #[test]
    fn signed_tree_is_always_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let s = corpus::random_sample(&mut rng, &ab(), 6, 6);
            assert!(dpa_consistent_with_sample(&signed_tree_dpa(&s), &s));
        }
    }
}
