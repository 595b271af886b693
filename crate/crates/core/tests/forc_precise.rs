use std::collections::BTreeSet;

use parity_learn::corpus;
use parity_learn::forc::{
    canonical_prc_from_dpa, color_forc, is_idempotent, learn_forc, looping_periodics, mealy_family,
    myhill_nerode_from_dpa, residual_sample, FwpmFamily,
};
use parity_learn::precise::{
    dpa_priority_word, join_automaton, join_priority_word, join_reference, join_reference_all,
    precise_dpa, precise_fwpm_from_dpa,
};
use parity_learn::{Dpa, OmegaSample, RightCongruence, Ts, UpWord, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::*;

fn random_rc<R: Rng>(rng: &mut R, states: usize) -> RightCongruence {
    RightCongruence::from_ts(&corpus::random_ts(rng, 2, states))
}

#[test]
fn residual_sample_matches_prefix_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for i in 0..200 {
        let s = corpus::random_sample(&mut rng, &ab(), 4, 4);
        let rc = random_rc(&mut rng, 1 + i % 3);
        for c in 0..rc.size() {
            let mut expected = Ok(OmegaSample::empty(ab()));
            for (w, sign) in s.words() {
                for n in 0..=w.spine().len() + w.period().len() * (rc.size() + 1) {
                    if rc.class_of(&w.prefix(n)) == c {
                        expected =
                            expected.and_then(|mut e| e.insert(w.suffix(n), sign).map(|_| e));
                    }
                }
            }
            // A residual with both signs makes the class inconsistent.
            assert_eq!(residual_sample(&s, &rc, c).ok(), expected.ok());
        }
    }
}

#[test]
fn looping_periodics_match_prefix_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for i in 0..200 {
        let s = corpus::random_sample(&mut rng, &ab(), 4, 4);
        let rc = random_rc(&mut rng, 1 + i % 3);
        for c in 0..rc.size() {
            for sign in [true, false] {
                let mut expected = BTreeSet::new();
                for (w, sg) in s.words().filter(|&(_, sg)| sg == sign) {
                    for n in 0..=w.spine().len() + w.period().len() * (rc.size() + 1) {
                        let rest = w.suffix(n);
                        let loops =
                            (1..=rc.size()).any(|m| rc.loops_on(c, &power(rest.period(), m)));
                        if sg == sign
                            && rc.class_of(&w.prefix(n)) == c
                            && rest.spine().is_empty()
                            && loops
                        {
                            expected.insert(rest);
                        }
                    }
                }
                assert_eq!(looping_periodics(&s, &rc, c, sign), expected);
            }
        }
    }
}

#[test]
fn learned_forcs_respect_the_leading_congruence() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let words = corpus::words_up_to(2, 5);
    for _ in 0..60 {
        let s = corpus::random_sample(&mut rng, &ab(), 5, 4);
        let (forc, _) = learn_forc(&s).unwrap();
        assert!(forc.respects_leading());
        for (c, prc) in forc.progress.iter().enumerate() {
            for x in &words {
                let y = prc.rep(prc.class_of(x));
                assert_eq!(forc.leading.run(c, x), forc.leading.run(c, y));
            }
        }
    }
}

#[test]
fn colored_forcs_are_weak_and_uniform_on_sccs() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..40 {
        let s = corpus::random_sample(&mut rng, &ab(), 5, 4);
        let (forc, _) = learn_forc(&s).unwrap();
        let cf = color_forc(&forc, &s).unwrap();
        let family = mealy_family(&cf, &ab());
        for (c, prc) in forc.progress.iter().enumerate() {
            let sccs = prc.ts().sccs();
            for p in 0..prc.size() {
                for q in 0..prc.size() {
                    if sccs.same(p, q) {
                        assert_eq!(cf.colors[c][p], cf.colors[c][q]);
                    }
                }
            }
            assert!(cf.rounds[c] <= sccs.count() + 1);
        }
        for _ in 0..1000 {
            let c = rng.gen_range(0..forc.leading.size());
            let (n, m) = (rng.gen_range(1..6), rng.gen_range(0..6));
            let x = corpus::random_word(&mut rng, 2, n);
            let y = corpus::random_word(&mut rng, 2, m);
            assert!(family.value(c, &cat(&x, &y)) <= family.value(c, &x));
        }
    }
}

#[test]
fn canonical_prc_matches_its_definition() {
    for a in dpa_corpus(34, 30)
        .into_iter()
        .filter(|a| a.size() <= 3 && a.num_priorities() <= 2)
    {
        let xs = corpus::words_up_to(a.syms(), 4);
        let leading = myhill_nerode_from_dpa(&a);
        let bound = a.trim().size() * a.num_priorities() + 2;
        let zs = corpus::words_up_to(a.syms(), bound);
        for c in 0..leading.size() {
            let u = leading.rep(c);
            let prc = canonical_prc_from_dpa(&a, &leading, c).unwrap();
            // What every extension z observes: the leading class reached and,
            // for loops, the membership of the lasso.
            let signature = |x: &Word| -> (bool, Vec<(usize, Option<bool>)>) {
                let obs = zs
                    .iter()
                    .map(|z| {
                        let xz = cat(x, z);
                        let l = leading.run(c, &xz);
                        let lasso = (l == c && !xz.is_empty())
                            .then(|| a.accepts(&UpWord::new(u.to_vec(), xz).unwrap()));
                        (l, lasso)
                    })
                    .collect();
                (x.is_empty(), obs)
            };
            let sigs: Vec<_> = xs.iter().map(signature).collect();
            for i in 0..xs.len() {
                for j in i..xs.len() {
                    assert_eq!(
                        prc.class_of(&xs[i]) == prc.class_of(&xs[j]),
                        sigs[i] == sigs[j],
                        "{:?} {:?}",
                        xs[i],
                        xs[j]
                    );
                }
            }
        }
    }
}

#[test]
fn looping_words_have_idempotent_powers() {
    for a in dpa_corpus(35, 20) {
        let leading = myhill_nerode_from_dpa(&a);
        for c in 0..leading.size() {
            let prc = canonical_prc_from_dpa(&a, &leading, c).unwrap();
            let n = prc.size();
            for x in prc
                .reps()
                .iter()
                .filter(|x| !x.is_empty() && leading.loops_on(c, x))
            {
                let found = (1..=n * n).any(|i| {
                    let xi = power(x, i);
                    let q = prc.class_of(&xi);
                    prc.run(q, &xi) == q && is_idempotent(&prc, &leading, c, q)
                });
                assert!(found, "{x:?}");
            }
        }
    }
}

#[test]
fn kappa_matches_the_precise_mapping() {
    let words: Vec<Word> = corpus::words_up_to(2, 6)
        .into_iter()
        .filter(|x| !x.is_empty())
        .collect();
    for a in dpa_corpus(36, 30) {
        let cf = canonical_colored(&a);
        let leading = &cf.forc.leading;
        let precise = precise_fwpm_from_dpa(&a, leading).unwrap();
        for c in 0..leading.size() {
            let prc = &cf.forc.progress[c];
            for x in &words {
                assert_eq!(
                    cf.colors[c][prc.class_of(x)],
                    precise.value(c, x),
                    "class {c} word {x:?}"
                );
            }
        }
    }
}

#[test]
fn kappa_matches_coloring_from_idempotent_sample() {
    for a in dpa_corpus(37, 20) {
        let cf = canonical_colored(&a);
        let leading = &cf.forc.leading;
        let mut s = OmegaSample::empty(a.alphabet.clone());
        for (c, prc) in cf.forc.progress.iter().enumerate() {
            for p in (0..prc.size()).filter(|&p| is_idempotent(prc, leading, c, p)) {
                let w = UpWord::new(leading.rep(c).to_vec(), prc.rep(p).to_vec()).unwrap();
                let sign = a.accepts(&w);
                s.insert(w, sign).unwrap();
            }
        }
        assert_eq!(color_forc(&cf.forc, &s).unwrap().colors, cf.colors);
    }
}

#[test]
fn canonical_sizes_respect_bounds() {
    for a in dpa_corpus(38, 30) {
        let cf = canonical_colored(&a);
        let leading = &cf.forc.leading;
        let (m, d, k) = params(&a, leading);
        let bound = m * (d * k).pow(d as u32);
        let precise = precise_fwpm_from_dpa(&a, leading).unwrap();
        for c in 0..leading.size() {
            // The class of ε is not counted: the bound is on non-empty words.
            assert!(cf.forc.progress[c].size() - 1 <= bound);
            assert!(precise.machines[c].size() <= bound);
        }
        let p = precise_dpa(&a, None).unwrap();
        assert!(p.equivalent(&a).unwrap().is_none());
        assert!(p.size() <= m * (2usize.pow(d as u32) - 1).pow(k.max(1) as u32 - 1));
        let via_forc: Dpa = join_automaton(&mealy_family(&cf, &a.alphabet))
            .unwrap()
            .as_mealy()
            .minimize()
            .into();
        assert!(via_forc.equivalent(&a).unwrap().is_none());
        assert!(via_forc.size() <= cf.forc.size().pow(via_forc.num_priorities() as u32));
    }
}

fn families(seed: u64, n: usize) -> Vec<FwpmFamily> {
    dpa_corpus(seed, n)
        .iter()
        .map(|a| precise_fwpm_from_dpa(a, &myhill_nerode_from_dpa(a)).unwrap())
        .collect()
}

#[test]
fn join_automaton_matches_join_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(39);
    for f in families(39, 20) {
        let j = join_automaton(&f).unwrap();
        for _ in 0..500 {
            let len = rng.gen_range(1..=12);
            let u = corpus::random_word(&mut rng, f.alphabet().len(), len);
            assert_eq!(j.as_mealy().outputs(&u), join_reference_all(&f, &u));
        }
    }
}

#[test]
fn join_priority_word_matches_explicit_lasso() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let fams = families(40, 20);
    for i in 0..200 {
        let f = &fams[i % fams.len()];
        let j = join_automaton(f).unwrap();
        let w = corpus::random_upword(&mut rng, f.alphabet().len(), 4, 5);
        assert_eq!(
            join_priority_word(f, &w).unwrap(),
            dpa_priority_word(&j, &w)
        );
    }
}

/// Output of machine `c` on long enough prefixes of `v^ω`.
fn eventual_value(f: &FwpmFamily, c: usize, v: &[usize]) -> usize {
    f.value(c, &power(v, f.machines[c].size() + 1))
}

#[test]
fn precise_mapping_captures_loops() {
    let loops: Vec<Word> = corpus::words_up_to(2, 5)
        .into_iter()
        .filter(|v| !v.is_empty())
        .collect();
    for a in dpa_corpus(41, 20) {
        let leading = myhill_nerode_from_dpa(&a);
        let f = precise_fwpm_from_dpa(&a, &leading).unwrap();
        for c in 0..leading.size() {
            for v in loops.iter().filter(|v| leading.loops_on(c, v)) {
                let w = UpWord::new(leading.rep(c).to_vec(), v.clone()).unwrap();
                assert_eq!(eventual_value(&f, c, v).is_multiple_of(2), a.accepts(&w));
            }
        }
    }
}

#[test]
fn precise_mapping_is_monotonic() {
    let words = corpus::words_up_to(2, 4);
    for f in families(42, 15) {
        for u in &words {
            let cu = f.leading.class_of(u);
            for v in &words {
                let cuv = f.leading.run(cu, v);
                for x in words.iter().filter(|x| !x.is_empty()) {
                    assert!(f.value(cu, &cat(v, x)) <= f.value(cuv, x));
                }
            }
        }
    }
}

#[test]
fn join_on_lassos_ends_in_the_loop_value() {
    let words = corpus::words_up_to(2, 4);
    for f in families(43, 15) {
        for u in &words {
            let c = f.leading.class_of(u);
            for v in words
                .iter()
                .filter(|v| !v.is_empty() && f.leading.loops_on(c, v))
            {
                let w = UpWord::new(u.clone(), v.clone()).unwrap();
                let p = join_priority_word(&f, &w).unwrap();
                assert_eq!(*p.period().iter().min().unwrap(), eventual_value(&f, c, v));
            }
        }
    }
}

#[test]
fn join_of_a_single_symbol_is_the_first_value() {
    for f in families(44, 10) {
        for a in 0..f.alphabet().len() {
            assert_eq!(join_reference(&f, &[a]), f.value(0, &[a]));
        }
    }
}

#[test]
fn precise_dpa_of_a_trivial_input_has_one_state() {
    let mut ts = Ts::with_states(2, 1);
    ts.set(0, 0, Some(0));
    ts.set(0, 1, Some(0));
    let a = Dpa::new(ab(), ts, vec![1, 0]).unwrap();
    assert_eq!(precise_dpa(&a, None).unwrap().size(), 1);
}
