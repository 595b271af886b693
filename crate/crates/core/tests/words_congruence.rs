#![allow(clippy::needless_range_loop)]

use parity_learn::congruence::default_ts;
use parity_learn::consistency::{check_iteration_consistent, check_mn_consistent};
use parity_learn::corpus;
use parity_learn::{Alphabet, OmegaSample, RightCongruence, Ts, UpWord};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word(syms: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..syms, 0..=max)
}

fn nonempty(syms: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..syms, 1..=max)
}

/// The first `n` symbols of `u v v v ...`.
fn unroll(u: &[usize], v: &[usize], n: usize) -> Vec<usize> {
    u.iter().chain(v.iter().cycle()).take(n).copied().collect()
}

proptest! {
    #[test]
    fn canonical_form_matches_omega_equality(u in word(2, 4), v in nonempty(2, 4), u2 in word(2, 4), v2 in nonempty(2, 4)) {
        let w = UpWord::new(u.clone(), v.clone()).unwrap();
        let w2 = UpWord::new(u2.clone(), v2.clone()).unwrap();
        let n = 2 * (u.len() + v.len() + u2.len() + v2.len());
        prop_assert_eq!(w == w2, unroll(&u, &v, n) == unroll(&u2, &v2, n));
        // Idempotent.
        prop_assert_eq!(UpWord::new(w.spine().to_vec(), w.period().to_vec()).unwrap(), w.clone());
        prop_assert!(w.spine().len() <= u.len() && w.period().len() <= v.len());
    }

    #[test]
    fn prefixes_are_nested(u in word(3, 4), v in nonempty(3, 4), n in 0usize..12, m in 0usize..12) {
        let w = UpWord::new(u.clone(), v.clone()).unwrap();
        let (n, m) = (n.min(m), n.max(m));
        prop_assert!(w.prefix(m).starts_with(&w.prefix(n)));
        prop_assert_eq!(w.prefix(m), unroll(&u, &v, m));
        prop_assert!(w.has_prefix(&w.prefix(m)));
    }

    #[test]
    fn runs_compose(seed in any::<u64>(), x in word(2, 6), y in word(2, 6)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ts = corpus::random_ts(&mut rng, 2, 4);
        let mut xy = x.clone();
        xy.extend_from_slice(&y);
        prop_assert_eq!(ts.run(0, &xy), ts.run(0, &x).and_then(|q| ts.run(q, &y)));
    }
}

/// Reachability by transitive closure.
fn closure(ts: &Ts) -> Vec<Vec<bool>> {
    let n = ts.size();
    let mut r = vec![vec![false; n]; n];
    for (q, row) in r.iter_mut().enumerate() {
        row[q] = true;
    }
    for q in 0..n {
        for a in 0..ts.num_syms() {
            if let Some(p) = ts.get(q, a) {
                r[q][p] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

#[test]
fn scc_partition_matches_transitive_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..300 {
        let states = 1 + i % 6;
        let mut ts = corpus::random_ts(&mut rng, 2, states);
        // Drop some transitions to get partial systems as well.
        for q in 0..states {
            if (q + i) % 3 == 0 {
                ts.set(q, i % 2, None);
            }
        }
        let r = closure(&ts);
        let sccs = ts.sccs();
        let mut reps: Vec<usize> = Vec::new();
        for q in 0..states {
            for p in 0..states {
                assert_eq!(sccs.same(p, q), r[p][q] && r[q][p]);
            }
            if !reps.iter().any(|&p| r[p][q] && r[q][p]) {
                reps.push(q);
            }
            let cyclic = (0..states).any(|p| p != q && r[p][q] && r[q][p])
                || (0..ts.num_syms()).any(|a| ts.get(q, a) == Some(q));
            assert_eq!(sccs.nontrivial[sccs.comp[q]], cyclic);
        }
        assert_eq!(sccs.count(), reps.len());
    }
}

#[test]
fn infinity_set_matches_long_run() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..300 {
        let states = 1 + i % 6;
        let ts = corpus::random_ts(&mut rng, 2, states);
        let w = corpus::random_upword(&mut rng, 2, 4, 4);
        // After |spine| + states·|period| symbols the run is periodic with
        // period states·|period|.
        let p = w.period().len();
        let start = w.spine().len() + states * p;
        let run: Vec<usize> = (0..start + states * p)
            .scan(0, |q, j| {
                *q = ts.succ(*q, w.symbol_at(j));
                Some(*q)
            })
            .collect();
        let expected: std::collections::BTreeSet<usize> = run[start..].iter().copied().collect();
        assert_eq!(ts.infinity_set(&w).unwrap(), expected);
        assert!(expected.contains(&ts.loop_state_from(0, &w).unwrap()));
    }
}

/// Length of the longest common prefix of two distinct words.
fn lcp(v: &UpWord, w: &UpWord) -> usize {
    (0..).find(|&i| v.symbol_at(i) != w.symbol_at(i)).unwrap() + 1
}

#[test]
fn default_can_exceed_total_size_plus_two() {
    let ab = Alphabet::from_chars("ab").unwrap();
    let s = OmegaSample::new(
        ab.clone(),
        vec![
            ab.parse_upword(",ab").unwrap(),
            ab.parse_upword("aba,b").unwrap(),
        ],
        vec![],
    )
    .unwrap();
    // Shared prefixes ε, a, ab, aba, abab; residuals (ba)^ω, (ab)^ω, b^ω; sink.
    assert_eq!(default_ts(&s).size(), 9);
    assert_eq!(s.total_size(), 6);
}

#[test]
fn default_for_single_positive_periodic_word() {
    let ab = Alphabet::from_chars("ab").unwrap();
    let s = OmegaSample::new(ab.clone(), vec![ab.parse_upword(",a").unwrap()], vec![]).unwrap();
    let d = default_ts(&s);
    // ε identifies a^ω, so it loops on a; every b leads to the sink.
    assert_eq!(d.size(), 2);
    assert_eq!(d.succ(0, 0), 0);
    let sink = d.succ(0, 1);
    assert_ne!(sink, 0);
    assert_eq!((d.succ(sink, 0), d.succ(sink, 1)), (sink, sink));
}

#[test]
fn default_is_consistent_and_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ab = Alphabet::from_chars("ab").unwrap();
    for _ in 0..200 {
        let s = corpus::random_sample(&mut rng, &ab, 5, 4);
        let d = default_ts(&s);
        // One sink, at most |u|+|v| residual states per word, and the
        // prefixes a word shares with some other word.
        let words: Vec<&UpWord> = s.words().map(|(w, _)| w).collect();
        let shared: usize = words
            .iter()
            .map(|v| {
                words
                    .iter()
                    .filter(|w| *w != v)
                    .map(|w| lcp(v, w))
                    .max()
                    .unwrap_or(0)
            })
            .sum();
        assert!(d.size() <= 1 + s.total_size() + shared);
        assert!(d.size() <= 1 + 3 * s.total_size());
        assert!(check_mn_consistent(d.ts(), &s));
        for c in 0..d.size() {
            assert!(check_iteration_consistent(d.ts(), &s, &d, c).unwrap());
        }
    }
}

/// Residuals of the sample after `x`, with signs.
fn residuals(s: &OmegaSample, x: &[usize]) -> Vec<(UpWord, bool)> {
    s.words()
        .filter(|(w, _)| w.has_prefix(x))
        .map(|(w, sign)| (w.suffix(x.len()), sign))
        .collect()
}

#[test]
fn default_matches_its_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ab = Alphabet::from_chars("ab").unwrap();
    let xs = corpus::words_up_to(2, 6);
    for _ in 0..100 {
        let s = corpus::random_sample(&mut rng, &ab, 4, 4);
        let d = default_ts(&s);
        let res: Vec<Vec<(UpWord, bool)>> = xs.iter().map(|x| residuals(&s, x)).collect();
        for (i, x) in xs.iter().enumerate() {
            for (j, y) in xs.iter().enumerate().skip(i) {
                let same = match (res[i].len(), res[j].len()) {
                    (0, 0) => true,
                    (1, 1) => res[i] == res[j],
                    (m, n) if m >= 2 && n >= 2 => x == y,
                    _ => false,
                };
                assert_eq!(d.class_of(x) == d.class_of(y), same, "{x:?} {y:?}");
            }
        }
    }
}

#[test]
fn loops_on_agrees_with_run() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let rc = RightCongruence::from_ts(&corpus::random_ts(&mut rng, 2, 4));
        for x in corpus::words_up_to(2, 4)
            .into_iter()
            .filter(|x| !x.is_empty())
        {
            for c in 0..rc.size() {
                assert_eq!(rc.loops_on(c, &x), rc.run(c, &x) == c);
            }
        }
    }
}
