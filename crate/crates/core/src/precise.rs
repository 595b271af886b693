//! Precise priority mappings of a DPA and their join into a single DPA.

use std::collections::HashMap;

use crate::automata::{Dfa, Dpa, Mealy};
use crate::congruence::{RightCongruence, Ts};
use crate::error::{Error, Result};
use crate::forc::{leading_classes, myhill_nerode_from_dpa, FwpmFamily};
use crate::words::{Sym, UpWord};

/// Default bound on the number of states of explicit product constructions.
pub const STATE_BUDGET: usize = 1_000_000;

/// For every leading class `c`, the machine that maps a non-empty word `x` to
/// the least `i` such that `x` sees a priority of at most `i` from every state
/// of `c` in the normalized automaton.
pub fn precise_fwpm_from_dpa(a: &Dpa, leading: &RightCongruence) -> Result<FwpmFamily> {
    let a = a.trim().normalize();
    let lead_of = leading_classes(&a, leading)?;
    let syms = a.syms();
    let sentinel = a.num_priorities();
    let mut machines = Vec::with_capacity(leading.size());
    for c in 0..leading.size() {
        let members: Vec<usize> = (0..a.size()).filter(|&q| lead_of[q] == c).collect();
        type Node = Vec<(usize, usize)>;
        let start: Node = members.iter().map(|&q| (q, sentinel)).collect();
        let mut nodes = vec![start.clone()];
        let mut ids: HashMap<Node, usize> = HashMap::from([(start, 0)]);
        let mut ts = Ts::new(syms);
        let mut out = Vec::new();
        let mut i = 0;
        while i < nodes.len() {
            for s in 0..syms {
                let next: Node = nodes[i]
                    .iter()
                    .map(|&(q, m)| (a.succ(q, s), m.min(a.priority(q, s))))
                    .collect();
                out.push(next.iter().map(|&(_, m)| m).max().unwrap_or(0));
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
                ts.set(i, s, Some(id));
            }
            i += 1;
        }
        machines.push(Mealy::new(a.alphabet.clone(), ts, out)?.minimize());
    }
    Ok(FwpmFamily {
        leading: leading.clone(),
        machines,
    })
}

/// Minimal DFAs for `{x ∈ Σ⁺ | γ_c(x) ≤ i}`, indexed by class, then priority.
pub fn threshold_dfas(f: &FwpmFamily) -> Result<Vec<Vec<Dfa>>> {
    let k = f.num_priorities();
    f.machines
        .iter()
        .map(|m| (0..k).map(|i| m.threshold_dfa(i)).collect())
        .collect()
}

/// Join values of all non-empty prefixes of `u`, computed directly from the
/// inductive definition.
pub fn join_reference_all(f: &FwpmFamily, u: &[Sym]) -> Vec<usize> {
    let mut values: Vec<usize> = Vec::with_capacity(u.len());
    let classes: Vec<usize> = (0..=u.len()).map(|i| f.leading.class_of(&u[..i])).collect();
    for m in 1..=u.len() {
        let mut best = usize::MAX;
        // Least join value on positions strictly inside the current suffix.
        let mut inner_min = usize::MAX;
        for s in (0..m).rev() {
            let gamma = f.value(classes[s], &u[s..m]);
            if inner_min > gamma {
                best = best.min(gamma);
            }
            if s >= 1 {
                inner_min = inner_min.min(values[s - 1]);
            }
        }
        values.push(best);
    }
    values
}

/// Join value of a non-empty word.
pub fn join_reference(f: &FwpmFamily, u: &[Sym]) -> usize {
    *join_reference_all(f, u).last().expect("non-empty word")
}

/// The explicit join automaton: one threshold DFA component per priority
/// plus the leading class; the least accepting component is emitted and all
/// components from it upwards restart in the new class.
pub fn join_automaton(f: &FwpmFamily) -> Result<Dpa> {
    join_automaton_with_budget(f, STATE_BUDGET)
}

pub fn join_automaton_with_budget(f: &FwpmFamily, budget: usize) -> Result<Dpa> {
    let dfas = threshold_dfas(f)?;
    let k = f.num_priorities();
    let syms = f.alphabet().len();
    type State = (Vec<(usize, usize)>, usize);
    let start: State = ((0..k).map(|_| (0, 0)).collect(), 0);
    let mut states = vec![start.clone()];
    let mut ids: HashMap<State, usize> = HashMap::from([(start, 0)]);
    let mut ts = Ts::new(syms);
    let mut prio = Vec::new();
    let mut i = 0;
    while i < states.len() {
        for a in 0..syms {
            let (comps, class) = &states[i];
            let advanced: Vec<(usize, usize)> = comps
                .iter()
                .enumerate()
                .map(|(j, &(c, q))| (c, dfas[c][j].ts.succ(q, a)))
                .collect();
            let r = (0..k)
                .find(|&j| dfas[advanced[j].0][j].finals[advanced[j].1])
                .expect("top threshold accepts Σ⁺");
            let next_class = f.leading.succ(*class, a);
            let next: State = (
                (0..k)
                    .map(|j| if j < r { advanced[j] } else { (next_class, 0) })
                    .collect(),
                next_class,
            );
            prio.push(r);
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    let id = ts.add_state();
                    if id >= budget {
                        return Err(Error::StateBudgetExceeded(budget));
                    }
                    ids.insert(next.clone(), id);
                    states.push(next);
                    id
                }
            };
            ts.set(i, a, Some(id));
        }
        i += 1;
    }
    Dpa::new(f.alphabet().clone(), ts, prio)
}

/// Ultimately periodic sequence of priorities, with priorities as symbols.
pub type PriorityWord = UpWord;

/// Renders a priority word as `r|s`.
pub fn format_priority_word(p: &PriorityWord) -> String {
    let render = |xs: &[usize]| {
        if xs.iter().all(|&x| x < 10) {
            xs.iter().map(|x| x.to_string()).collect::<String>()
        } else {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    };
    format!("{}|{}", render(p.spine()), render(p.period()))
}

/// Priorities emitted by the join automaton on `w`, computed factor by factor
/// without building the product: each factor ends where the least priority
/// still to come is emitted for the first time.
pub fn join_priority_word(f: &FwpmFamily, w: &UpWord) -> Result<PriorityWord> {
    let dfas = threshold_dfas(f)?;
    join_priority_word_with(f, &dfas, w)
}

/// As [`join_priority_word`] with precomputed threshold DFAs.
pub fn join_priority_word_with(
    f: &FwpmFamily,
    dfas: &[Vec<Dfa>],
    w: &UpWord,
) -> Result<PriorityWord> {
    let k = f.num_priorities();
    let mut emitted: Vec<usize> = Vec::new();
    let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let (mut pos, mut class, mut floor) = (0, 0, 0);
    loop {
        let key = (w.align(pos), class, floor);
        if let Some(&start) = seen.get(&key) {
            return Ok(
                UpWord::new(emitted[..start].to_vec(), emitted[start..].to_vec())
                    .expect("non-empty period"),
            );
        }
        seen.insert(key, emitted.len());
        // Least priority whose threshold DFA accepts a prefix of the rest.
        let (least, len) = (floor..k)
            .find_map(|j| {
                dfas[class][j]
                    .shortest_accepted_prefix(0, w, pos)
                    .map(|n| (j, n))
            })
            .expect("top threshold accepts Σ⁺");
        // Components above the least one run from the start of the factor.
        let mut comps: Vec<(usize, usize)> = vec![(class, 0); k];
        for step in 0..len {
            let a = w.symbol_at(pos + step);
            let next_class = f.leading.succ(class, a);
            let r = if step + 1 == len {
                least
            } else {
                ((least + 1)..k)
                    .find(|&j| {
                        let (c, q) = comps[j];
                        dfas[c][j].finals[dfas[c][j].ts.succ(q, a)]
                    })
                    .expect("top threshold accepts Σ⁺")
            };
            for j in (least + 1)..k {
                let (c, q) = comps[j];
                comps[j] = if j < r {
                    (c, dfas[c][j].ts.succ(q, a))
                } else {
                    (next_class, 0)
                };
            }
            emitted.push(r);
            class = next_class;
        }
        pos += len;
        floor = least;
    }
}

/// Priority sequence of a DPA on `w` as a lasso.
pub fn dpa_priority_word(a: &Dpa, w: &UpWord) -> PriorityWord {
    let mut q = 0;
    let mut i = 0;
    let mut out = Vec::new();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    loop {
        let key = (w.align(i), q);
        if let Some(&start) = seen.get(&key) {
            return UpWord::new(out[..start].to_vec(), out[start..].to_vec())
                .expect("non-empty period");
        }
        seen.insert(key, out.len());
        let s = w.symbol_at(i);
        out.push(a.priority(q, s));
        q = a.succ(q, s);
        i += 1;
    }
}

/// The minimal DPA, as a Mealy machine, whose priority mapping is the join of
/// the precise mappings of `a` for `leading` (the Myhill/Nerode congruence by default).
pub fn precise_dpa(a: &Dpa, leading: Option<&RightCongruence>) -> Result<Dpa> {
    let owned;
    let leading = match leading {
        Some(l) => l,
        None => {
            owned = myhill_nerode_from_dpa(a);
            &owned
        }
    };
    let family = precise_fwpm_from_dpa(a, leading)?;
    Ok(join_automaton(&family)?.as_mealy().minimize().into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::words::Alphabet;

    fn aba_family() -> FwpmFamily {
        let a = corpus::finitely_many_b_or_aba();
        precise_fwpm_from_dpa(&a, &myhill_nerode_from_dpa(&a)).unwrap()
    }

    #[test]
    fn precise_mapping_of_aba_language() {
        let f = aba_family();
        let ab = Alphabet::from_chars("ab").unwrap();
        let v = |w: &str| f.value(0, &ab.parse_word(w).unwrap());
        assert_eq!(v("aba"), 0);
        assert_eq!(v("bbabaa"), 0);
        assert_eq!(v("b"), 1);
        assert_eq!(v("abba"), 1);
        assert_eq!(v("aaa"), 2);
    }

    #[test]
    fn join_table_values() {
        let f = aba_family();
        let p = Alphabet::from_chars("ab")
            .unwrap()
            .parse_word("abaaba")
            .unwrap();
        assert_eq!(join_reference_all(&f, &p), vec![2, 1, 0, 2, 1, 0]);
        let bow = join_automaton(&f).unwrap();
        let m = bow.as_mealy().minimize();
        assert_eq!(m.outputs(&p), vec![2, 1, 0, 2, 1, 0]);
    }

    #[test]
    fn join_priority_word_of_periodic_input() {
        let f = aba_family();
        let w = Alphabet::from_chars("ab")
            .unwrap()
            .parse_upword(",abaaba")
            .unwrap();
        let pw = join_priority_word(&f, &w).unwrap();
        assert_eq!(format_priority_word(&pw), "|210");
    }

    #[test]
    fn constant_family_joins_to_zero() {
        let ab = Alphabet::from_chars("ab").unwrap();
        let z = Dpa::constant(ab.clone(), 0);
        let f = precise_fwpm_from_dpa(&z, &RightCongruence::trivial(2)).unwrap();
        assert_eq!(f.machines[0].size(), 1);
        assert_eq!(join_automaton(&f).unwrap().size(), 1);
        let w = ab.parse_upword("ab,b").unwrap();
        assert_eq!(
            format_priority_word(&join_priority_word(&f, &w).unwrap()),
            "|0"
        );
        assert_eq!(precise_dpa(&z, None).unwrap().size(), 1);
    }

    #[test]
    fn all_symbols_blowup() {
        for (d, n) in [(2, 3), (3, 7)] {
            let p = precise_dpa(&corpus::all_symbols_tracking(d), None).unwrap();
            assert_eq!(p.size(), n);
            assert!(p
                .equivalent(&corpus::all_symbols_round_robin(d))
                .unwrap()
                .is_none());
        }
    }
}
