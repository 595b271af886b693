//! Greedy right-congruence learning by state merging.

use crate::congruence::{RightCongruence, Ts};
use crate::error::{Error, Result};
use crate::words::{Sym, Word};

/// One attempted transition during a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    /// Representative of the source state.
    pub source: Word,
    pub symbol: Sym,
    /// Representative of the tried target, or `None` when a new state was created.
    pub target: Option<Word>,
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct GlercRun {
    pub result: RightCongruence,
    /// Number of consistency checks performed, including the one on the default.
    pub cons_calls: usize,
    /// Whether the size limit was hit and the default returned.
    pub used_default: bool,
    pub trace: Vec<TraceEvent>,
}

/// A consistency predicate. Every system [`glerc`] checks after the default
/// is the last committed one plus a single transition, which implementations
/// may exploit; plain closures over `&Ts` re-check from scratch.
pub trait Cons {
    fn holds(&mut self, ts: &Ts) -> bool;

    /// `ts` is the committed system plus the transition from `p` on `a`.
    fn holds_extended(&mut self, ts: &Ts, p: usize, a: Sym) -> bool {
        let _ = (p, a);
        self.holds(ts)
    }

    /// The transition from `p` on `a` of `ts` is kept.
    fn commit(&mut self, ts: &Ts, p: usize, a: Sym) {
        let _ = (ts, p, a);
    }
}

impl<F: FnMut(&Ts) -> bool> Cons for F {
    fn holds(&mut self, ts: &Ts) -> bool {
        self(ts)
    }
}

/// Builds a complete transition system from the single state ε by filling the
/// llex-least missing transition, preferring existing targets in llex order
/// of their representatives and creating a new state only if no target keeps
/// `cons` true. Falls back to `default` once it would be outgrown.
pub fn glerc(mut cons: impl Cons, default: &RightCongruence) -> Result<GlercRun> {
    let mut calls = 1;
    if !cons.holds(default.ts()) {
        return Err(Error::DefaultInconsistent);
    }
    let syms = default.num_syms();
    let mut ts = Ts::new(syms);
    let mut reps: Vec<Word> = vec![Vec::new()];
    let mut trace = Vec::new();
    let mut p = 0;
    while p < ts.size() {
        for a in 0..syms {
            let mut chosen = None;
            for q in 0..ts.size() {
                ts.set(p, a, Some(q));
                calls += 1;
                let ok = cons.holds_extended(&ts, p, a);
                trace.push(TraceEvent {
                    source: reps[p].clone(),
                    symbol: a,
                    target: Some(reps[q].clone()),
                    accepted: ok,
                });
                if ok {
                    cons.commit(&ts, p, a);
                    chosen = Some(q);
                    break;
                }
            }
            if chosen.is_none() {
                let q = ts.add_state();
                let mut rep = reps[p].clone();
                rep.push(a);
                reps.push(rep);
                ts.set(p, a, Some(q));
                cons.commit(&ts, p, a);
                trace.push(TraceEvent {
                    source: reps[p].clone(),
                    symbol: a,
                    target: None,
                    accepted: true,
                });
                if ts.size() > default.size() {
                    return Ok(GlercRun {
                        result: default.clone(),
                        cons_calls: calls,
                        used_default: true,
                        trace,
                    });
                }
            }
        }
        p += 1;
    }
    Ok(GlercRun {
        result: RightCongruence::from_ts(&ts),
        cons_calls: calls,
        used_default: false,
        trace,
    })
}
