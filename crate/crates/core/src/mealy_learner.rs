//! Active learning of Mealy machines from output and equivalence queries.

use std::collections::{HashMap, HashSet};

use crate::automata::Mealy;
use crate::congruence::Ts;
use crate::error::{Error, Result};
use crate::words::{Alphabet, Sym, Word};

/// Answers queries about one fixed target output function.
pub trait Teacher {
    /// Output on the last symbol of a non-empty word.
    fn output_query(&mut self, w: &[Sym]) -> usize;
    /// `None` accepts the hypothesis; otherwise a word on some prefix of
    /// which hypothesis and target disagree.
    fn equivalence_query(&mut self, h: &Mealy) -> Option<Word>;
}

#[derive(Clone, Debug)]
pub struct MealyLearning {
    pub machine: Mealy,
    /// Size of every hypothesis submitted, in order.
    pub hypothesis_sizes: Vec<usize>,
    /// Distinct output queries asked.
    pub output_queries: usize,
    pub equivalence_queries: usize,
}

struct Table<'t, T: Teacher> {
    teacher: &'t mut T,
    syms: usize,
    cache: HashMap<Word, usize>,
    rows: Vec<Word>,
    columns: Vec<Word>,
    column_set: HashSet<Word>,
}

impl<T: Teacher> Table<'_, T> {
    fn query(&mut self, w: Word) -> usize {
        if let Some(&v) = self.cache.get(&w) {
            return v;
        }
        let v = self.teacher.output_query(&w);
        self.cache.insert(w, v);
        v
    }

    fn signature(&mut self, s: &[Sym]) -> Vec<usize> {
        let columns = self.columns.clone();
        columns
            .iter()
            .map(|e| {
                let mut w = s.to_vec();
                w.extend_from_slice(e);
                self.query(w)
            })
            .collect()
    }

    /// Adds one-symbol extensions of rows as new rows until every extension
    /// matches an existing row. Rows stay pairwise distinct.
    fn close(&mut self) -> (Vec<Vec<usize>>, HashMap<Vec<usize>, usize>) {
        let mut sigs: Vec<Vec<usize>> = Vec::new();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        for i in 0..self.rows.len() {
            let s = self.rows[i].clone();
            let sig = self.signature(&s);
            index.insert(sig.clone(), i);
            sigs.push(sig);
        }
        let mut i = 0;
        while i < self.rows.len() {
            for a in 0..self.syms {
                let mut sa = self.rows[i].clone();
                sa.push(a);
                let sig = self.signature(&sa);
                if !index.contains_key(&sig) {
                    index.insert(sig.clone(), self.rows.len());
                    sigs.push(sig);
                    self.rows.push(sa);
                }
            }
            i += 1;
        }
        (sigs, index)
    }

    fn hypothesis(&mut self, alphabet: &Alphabet) -> Result<Mealy> {
        let (_, index) = self.close();
        let n = self.rows.len();
        let mut ts = Ts::with_states(self.syms, n);
        let mut out = Vec::with_capacity(n * self.syms);
        for i in 0..n {
            for a in 0..self.syms {
                let mut sa = self.rows[i].clone();
                sa.push(a);
                let sig = self.signature(&sa);
                ts.set(i, a, Some(index[&sig]));
                out.push(self.query(sa));
            }
        }
        Mealy::new(alphabet.clone(), ts, out)
    }

    fn add_suffixes(&mut self, x: &[Sym]) {
        for i in 0..x.len() {
            let e = x[i..].to_vec();
            if self.column_set.insert(e.clone()) {
                self.columns.push(e);
            }
        }
    }
}

/// Observation-table learner: rows are access words, columns non-empty
/// suffixes, and every suffix of a counterexample becomes a column.
pub fn learn_mealy<T: Teacher>(teacher: &mut T, alphabet: &Alphabet) -> Result<MealyLearning> {
    let syms = alphabet.len();
    let columns: Vec<Word> = (0..syms).map(|a| vec![a]).collect();
    let mut table = Table {
        teacher,
        syms,
        cache: HashMap::new(),
        rows: vec![Vec::new()],
        column_set: columns.iter().cloned().collect(),
        columns,
    };
    let mut sizes = Vec::new();
    let mut eq = 0;
    loop {
        let h = table.hypothesis(alphabet)?;
        if let Some(&last) = sizes.last() {
            if h.size() <= last {
                return Err(Error::TeacherInconsistent);
            }
        }
        sizes.push(h.size());
        eq += 1;
        let Some(x) = table.teacher.equivalence_query(&h) else {
            return Ok(MealyLearning {
                machine: h.minimize(),
                hypothesis_sizes: sizes,
                output_queries: table.cache.len(),
                equivalence_queries: eq,
            });
        };
        let outputs = h.outputs(&x);
        let disagrees = (1..=x.len()).any(|n| table.query(x[..n].to_vec()) != outputs[n - 1]);
        if !disagrees {
            return Err(Error::TeacherInconsistent);
        }
        table.add_suffixes(&x);
    }
}

/// Teacher backed by a known machine; counterexamples are llex-minimal.
pub struct MachineTeacher<'a> {
    pub target: &'a Mealy,
}

impl Teacher for MachineTeacher<'_> {
    fn output_query(&mut self, w: &[Sym]) -> usize {
        self.target.output(w).expect("non-empty query")
    }

    fn equivalence_query(&mut self, h: &Mealy) -> Option<Word> {
        self.target.separating_word(h)
    }
}
