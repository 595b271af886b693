//! Passive learning of deterministic parity automata (DPAs) from finite samples
//! of ultimately periodic ω-words.
//!
//! The pipeline infers a family of right congruences from the sample, colors
//! its progress congruences, combines the resulting weak priority mappings with
//! a join, and finally runs an active Mealy-machine learner against a teacher
//! backed by the colored sample. Supporting automata algorithms (membership,
//! equivalence, priority normalization, precise DPAs) and a characteristic
//! sample generator are part of the crate.

pub mod automata;
pub mod charsample;
pub mod congruence;
pub mod consistency;
pub mod corpus;
pub mod dpainf;
pub mod error;
pub mod forc;
pub mod glerc;
pub mod graph;
pub mod io;
pub mod mealy_learner;
pub mod precise;
pub mod words;

pub use automata::{Dfa, Dpa, Mealy};
pub use congruence::{default_ts, RightCongruence, Ts};
pub use error::{Error, Result};
pub use words::{llex_cmp, Alphabet, OmegaSample, Sym, UpWord, Word};
