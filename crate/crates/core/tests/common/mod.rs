//! Brute-force oracles shared by the integration suites.
#![allow(dead_code)]

use parity_learn::corpus;
use parity_learn::forc::{
    canonical_prc_from_dpa, kappa_from_idempotents, leading_classes, myhill_nerode_from_dpa,
    ColoredForc, Forc,
};
use parity_learn::{Alphabet, Dpa, OmegaSample, RightCongruence, Ts, UpWord, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn ab() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

pub fn separated(t: &Ts, x: &[usize], y: &[usize]) -> bool {
    match (t.run(0, x), t.run(0, y)) {
        (Some(p), Some(q)) => p != q,
        _ => true,
    }
}

pub fn random_partial_ts<R: Rng>(rng: &mut R, states: usize) -> Ts {
    let mut t = corpus::random_ts(rng, 2, states);
    for q in 0..states {
        for a in 0..2 {
            if rng.gen_bool(0.25) {
                t.set(q, a, None);
            }
        }
    }
    t
}

/// Some positive `x w` and negative `y w` share the tail `w`, for prefixes up
/// to length `bound`.
pub fn mn_brute(t: &Ts, s: &OmegaSample, bound: usize) -> bool {
    let xs = corpus::words_up_to(2, bound);
    let tails = |sign: bool| -> Vec<(Word, UpWord)> {
        xs.iter()
            .flat_map(|x| {
                s.words()
                    .filter(move |&(w, sg)| sg == sign && w.has_prefix(x))
                    .map(move |(w, _)| (x.clone(), w.suffix(x.len())))
            })
            .collect()
    };
    let (pos, neg) = (tails(true), tails(false));
    pos.iter().all(|(x, w)| {
        neg.iter()
            .filter(|(_, v)| v == w)
            .all(|(y, _)| separated(t, x, y))
    })
}

/// Pairs `(x, z)` with `xz = r^n` for a periodic root `r` of the given sign,
/// `|xz| <= bound` and `xz` looping on `c`.
pub fn loop_splits(
    s: &OmegaSample,
    rc: &RightCongruence,
    c: usize,
    sign: bool,
    bound: usize,
) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for (w, sg) in s.words() {
        if sg != sign || !w.spine().is_empty() {
            continue;
        }
        let r = w.period();
        let mut power = r.to_vec();
        while power.len() <= bound {
            if rc.loops_on(c, &power) {
                for i in 0..=power.len() {
                    out.push((power[..i].to_vec(), power[i..].to_vec()));
                }
            }
            power.extend_from_slice(r);
        }
    }
    out
}

pub fn iteration_brute(
    t: &Ts,
    s: &OmegaSample,
    rc: &RightCongruence,
    c: usize,
    bound: usize,
) -> bool {
    let pos = loop_splits(s, rc, c, true, bound);
    let neg = loop_splits(s, rc, c, false, bound);
    pos.iter().all(|(x, z)| {
        neg.iter()
            .filter(|(_, z2)| z2 == z)
            .all(|(y, _)| separated(t, x, y))
    })
}

pub fn cat(x: &[usize], y: &[usize]) -> Word {
    x.iter().chain(y).copied().collect()
}

pub fn power(x: &[usize], n: usize) -> Word {
    x.iter().copied().cycle().take(n * x.len()).collect()
}

/// Named languages plus small random automata.
pub fn dpa_corpus(seed: u64, random: usize) -> Vec<Dpa> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        corpus::finitely_many_b_or_aba(),
        corpus::aa_or_parity_of_a(),
        Dpa::constant(ab(), 0),
    ];
    for d in 2..=3 {
        out.push(corpus::all_symbols_tracking(d));
        out.push(corpus::all_symbols_round_robin(d));
    }
    out.extend((0..random).map(|i| corpus::random_dpa(&mut rng, &ab(), 1 + i % 3, 2 + i % 2)));
    out
}

/// `(m, d, k)`: leading classes, most states of a trimmed normalized `a` in one
/// class, and number of priorities.
pub fn params(a: &Dpa, leading: &RightCongruence) -> (usize, usize, usize) {
    let n = a.trim().normalize();
    let lead = leading_classes(&n, leading).unwrap();
    let d = (0..leading.size())
        .map(|c| lead.iter().filter(|&&l| l == c).count())
        .max()
        .unwrap();
    (leading.size(), d, n.num_priorities())
}

/// The FORC of canonical progress congruences colored from idempotents.
pub fn canonical_colored(a: &Dpa) -> ColoredForc {
    let leading = myhill_nerode_from_dpa(a);
    let progress: Vec<RightCongruence> = (0..leading.size())
        .map(|c| canonical_prc_from_dpa(a, &leading, c).unwrap())
        .collect();
    let colors = progress
        .iter()
        .enumerate()
        .map(|(c, prc)| kappa_from_idempotents(prc, c, |w| a.accepts(w), &leading).unwrap())
        .collect();
    ColoredForc {
        rounds: vec![0; leading.size()],
        forc: Forc { leading, progress },
        colors,
    }
}

/// All priority assignments on the structure of `a` with values `< k`.
pub fn relabelings(a: &Dpa, k: usize) -> impl Iterator<Item = Dpa> + '_ {
    let m = a.prio.len();
    (0..k.pow(m as u32)).map(move |mut code| {
        let prio = (0..m)
            .map(|_| {
                let p = code % k;
                code /= k;
                p
            })
            .collect();
        Dpa::new(a.alphabet.clone(), a.ts.clone(), prio).unwrap()
    })
}
