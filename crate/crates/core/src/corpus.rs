//! Hand-built reference automata and seeded random generators used by tests,
//! benches and the CLI.

use rand::Rng;

use crate::automata::{Dpa, Mealy};
use crate::congruence::Ts;
use crate::words::{Alphabet, OmegaSample, UpWord};

fn dpa_from_table(alphabet: Alphabet, table: &[&[(usize, usize)]]) -> Dpa {
    let syms = alphabet.len();
    let mut ts = Ts::with_states(syms, table.len());
    let mut prio = Vec::with_capacity(table.len() * syms);
    for (q, row) in table.iter().enumerate() {
        for (a, &(t, p)) in row.iter().enumerate() {
            ts.set(q, a, Some(t));
            prio.push(p);
        }
    }
    Dpa::new(alphabet, ts, prio).expect("well-formed table")
}

/// Words over `{a, b}` with finitely many `b` or infinitely many infixes `aba`.
pub fn finitely_many_b_or_aba() -> Dpa {
    let ab = Alphabet::from_chars("ab").expect("valid");
    // States track progress towards the infix aba: nothing, a, ab.
    dpa_from_table(
        ab,
        &[&[(1, 2), (0, 1)], &[(1, 2), (2, 1)], &[(1, 0), (0, 1)]],
    )
}

/// Words over `{a, b, d}` with infinitely many infixes `aa`, or finitely many
/// `a` where the count of `a` is even iff both `b` and `d` occur infinitely often.
pub fn aa_or_parity_of_a() -> Dpa {
    let abd = Alphabet::from_chars("abd").expect("valid");
    // State = (odd number of a, last symbol was a, seen b, seen d).
    let id = |odd: bool, last_a: bool, b: bool, d: bool| {
        (odd as usize) << 3 | (last_a as usize) << 2 | (b as usize) << 1 | d as usize
    };
    let mut rows: Vec<Vec<(usize, usize)>> = Vec::new();
    for q in 0..16 {
        let (odd, last_a, b, d) = (q & 8 != 0, q & 4 != 0, q & 2 != 0, q & 1 != 0);
        let on_a = (id(!odd, true, false, false), if last_a { 0 } else { 1 });
        let on = |nb: bool, nd: bool| {
            if nb && nd {
                (id(odd, false, false, false), if odd { 3 } else { 2 })
            } else {
                (id(odd, false, nb, nd), if odd { 4 } else { 3 })
            }
        };
        rows.push(vec![on_a, on(true, d), on(b, true)]);
    }
    let table: Vec<&[(usize, usize)]> = rows.iter().map(|r| r.as_slice()).collect();
    dpa_from_table(abd, &table).trim()
}

fn indexed_alphabet(d: usize) -> Alphabet {
    let chars: Vec<char> = (0..d).map(|i| (b'a' + i as u8) as char).collect();
    Alphabet::new(chars).expect("valid")
}

/// Words over `d` symbols containing every symbol infinitely often, tracking
/// the set of symbols seen since the last reset.
pub fn all_symbols_tracking(d: usize) -> Dpa {
    let alphabet = indexed_alphabet(d);
    let full = (1usize << d) - 1;
    let mut ts = Ts::with_states(d, full);
    let mut prio = Vec::with_capacity(full * d);
    for set in 0..full {
        for a in 0..d {
            let next = set | 1 << a;
            if next == full {
                ts.set(set, a, Some(0));
                prio.push(0);
            } else {
                ts.set(set, a, Some(next));
                prio.push(1);
            }
        }
    }
    Dpa::new(alphabet, ts, prio).expect("complete")
}

/// Same language as [`all_symbols_tracking`] with `d` states waiting for the
/// symbols in a fixed cyclic order.
pub fn all_symbols_round_robin(d: usize) -> Dpa {
    let alphabet = indexed_alphabet(d);
    let mut ts = Ts::with_states(d, d);
    let mut prio = Vec::with_capacity(d * d);
    for q in 0..d {
        for a in 0..d {
            if a == q {
                ts.set(q, a, Some((q + 1) % d));
                prio.push(if q + 1 == d { 0 } else { 1 });
            } else {
                ts.set(q, a, Some(q));
                prio.push(1);
            }
        }
    }
    Dpa::new(alphabet, ts, prio).expect("complete")
}

pub fn random_ts<R: Rng>(rng: &mut R, syms: usize, states: usize) -> Ts {
    let mut ts = Ts::with_states(syms, states);
    for q in 0..states {
        for a in 0..syms {
            ts.set(q, a, Some(rng.gen_range(0..states)));
        }
    }
    ts
}

/// Random complete DPA with up to `states` states and priorities below `k`.
pub fn random_dpa<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize, k: usize) -> Dpa {
    let ts = random_ts(rng, alphabet.len(), states);
    let prio = (0..states * alphabet.len())
        .map(|_| rng.gen_range(0..k))
        .collect();
    Dpa::new(alphabet.clone(), ts, prio)
        .expect("complete")
        .trim()
}

pub fn random_mealy<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize, k: usize) -> Mealy {
    random_dpa(rng, alphabet, states, k).into()
}

pub fn random_word<R: Rng>(rng: &mut R, syms: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..syms)).collect()
}

/// Random ultimately periodic word with spine and period lengths bounded.
pub fn random_upword<R: Rng>(
    rng: &mut R,
    syms: usize,
    max_spine: usize,
    max_period: usize,
) -> UpWord {
    let spine_len = rng.gen_range(0..=max_spine);
    let period_len = rng.gen_range(1..=max_period.max(1));
    let spine = random_word(rng, syms, spine_len);
    let period = random_word(rng, syms, period_len);
    UpWord::new(spine, period).expect("non-empty period")
}

/// Random sample with words signed by a coin flip; conflicting words are skipped.
pub fn random_sample<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    words: usize,
    max_size: usize,
) -> OmegaSample {
    let mut s = OmegaSample::empty(alphabet.clone());
    for _ in 0..words {
        let period_len = rng.gen_range(1..=max_size.max(1));
        let spine_len = rng.gen_range(0..=max_size - period_len.min(max_size));
        let w = UpWord::new(
            random_word(rng, alphabet.len(), spine_len),
            random_word(rng, alphabet.len(), period_len),
        )
        .expect("non-empty period");
        let _ = s.insert(w, rng.gen_bool(0.5));
    }
    s
}

/// Every ultimately periodic word with `|spine| + |period| <= max_size`, in
/// canonical form and without duplicates.
pub fn all_upwords(syms: usize, max_size: usize) -> Vec<UpWord> {
    let mut out = std::collections::BTreeSet::new();
    for total in 1..=max_size {
        for period_len in 1..=total {
            let spine_len = total - period_len;
            for spine in all_words(syms, spine_len) {
                for period in all_words(syms, period_len) {
                    out.insert(UpWord::new(spine.clone(), period).expect("non-empty"));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// All words of exactly length `len`, in lexicographic order.
pub fn all_words(syms: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..syms).map(move |a| {
                    let mut x = w.clone();
                    x.push(a);
                    x
                })
            })
            .collect();
    }
    out
}

/// All words of length at most `len`, in llex order.
pub fn words_up_to(syms: usize, len: usize) -> Vec<Vec<usize>> {
    (0..=len).flat_map(|l| all_words(syms, l)).collect()
}
