//! Alphabets, finite words, ultimately periodic words and ω-samples.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Index of a symbol within its alphabet.
pub type Sym = usize;

/// A finite word as a sequence of symbol indices.
pub type Word = Vec<Sym>;

/// An ordered set of single-character symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: Vec<char>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        for &c in &symbols {
            if !seen.insert(c) {
                return Err(Error::DuplicateSymbol(c));
            }
            if c.is_whitespace() || c == ',' || c == '#' {
                return Err(Error::ReservedSymbol(c));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Alphabet built from the characters of `s`, in order.
    pub fn from_chars(s: &str) -> Result<Self> {
        Alphabet::new(s.chars().collect())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn char_of(&self, s: Sym) -> char {
        self.symbols[s]
    }

    pub fn index_of(&self, c: char) -> Option<Sym> {
        self.symbols.iter().position(|&d| d == c)
    }

    /// Parses a string of symbol characters into a word.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        s.chars()
            .map(|c| self.index_of(c).ok_or(Error::UnknownSymbol(c)))
            .collect()
    }

    pub fn format_word(&self, w: &[Sym]) -> String {
        w.iter().map(|&s| self.symbols[s]).collect()
    }

    pub fn format_upword(&self, w: &UpWord) -> String {
        format!(
            "{},{}",
            self.format_word(&w.spine),
            self.format_word(&w.period)
        )
    }

    /// Parses `spine,period` into a canonical ultimately periodic word.
    pub fn parse_upword(&self, s: &str) -> Result<UpWord> {
        let (u, v) = s.split_once(',').ok_or(Error::MissingComma)?;
        UpWord::new(self.parse_word(u)?, self.parse_word(v)?)
    }
}

/// Length-lexicographic comparison: shorter words first, then lexicographic.
pub fn llex_cmp(x: &[Sym], y: &[Sym]) -> Ordering {
    x.len().cmp(&y.len()).then_with(|| x.cmp(y))
}

/// Length of the primitive root of a non-empty word.
fn primitive_root_len(v: &[Sym]) -> usize {
    let n = v.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| v[i] == v[i - p]))
        .unwrap_or(n)
}

/// An ultimately periodic ω-word `spine · period^ω` in canonical form: the
/// period is primitive and the spine does not end with the period's last symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpWord {
    spine: Word,
    period: Word,
}

impl UpWord {
    pub fn new(mut spine: Word, period: Word) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidPeriod);
        }
        let p = primitive_root_len(&period);
        let mut period: Word = period[..p].to_vec();
        while let (Some(&a), Some(&b)) = (spine.last(), period.last()) {
            if a != b {
                break;
            }
            spine.pop();
            period.rotate_right(1);
        }
        Ok(UpWord { spine, period })
    }

    /// The purely periodic word `period^ω`.
    pub fn periodic(period: Word) -> Result<Self> {
        UpWord::new(Vec::new(), period)
    }

    pub fn spine(&self) -> &[Sym] {
        &self.spine
    }

    pub fn period(&self) -> &[Sym] {
        &self.period
    }

    /// Total representation length `|spine| + |period|`.
    pub fn size(&self) -> usize {
        self.spine.len() + self.period.len()
    }

    pub fn is_periodic(&self) -> bool {
        self.spine.is_empty()
    }

    pub fn symbol_at(&self, i: usize) -> Sym {
        if i < self.spine.len() {
            self.spine[i]
        } else {
            self.period[(i - self.spine.len()) % self.period.len()]
        }
    }

    /// Maps a position to the smallest position with the same suffix.
    pub fn align(&self, i: usize) -> usize {
        if i < self.spine.len() {
            i
        } else {
            self.spine.len() + (i - self.spine.len()) % self.period.len()
        }
    }

    /// The suffix starting at position `i`, itself canonical.
    pub fn suffix(&self, i: usize) -> UpWord {
        let i = self.align(i);
        if i < self.spine.len() {
            UpWord {
                spine: self.spine[i..].to_vec(),
                period: self.period.clone(),
            }
        } else {
            let mut period = self.period.clone();
            period.rotate_left(i - self.spine.len());
            UpWord {
                spine: Vec::new(),
                period,
            }
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        (0..n).map(|i| self.symbol_at(i)).collect()
    }

    pub fn has_prefix(&self, x: &[Sym]) -> bool {
        x.iter().enumerate().all(|(i, &a)| self.symbol_at(i) == a)
    }

    /// `x · self`.
    pub fn prepend(&self, x: &[Sym]) -> UpWord {
        let mut spine = x.to_vec();
        spine.extend_from_slice(&self.spine);
        UpWord::new(spine, self.period.clone()).expect("period is non-empty")
    }

    /// Pointwise pairing with another ultimately periodic sequence, encoding
    /// the pair `(a, b)` as `a * width + b`.
    pub fn zip(&self, other: &UpWord, width: usize) -> UpWord {
        let spine_len = self.spine.len().max(other.spine.len());
        let period_len = lcm(self.period.len(), other.period.len());
        let enc = |i: usize| self.symbol_at(i) * width + other.symbol_at(i);
        let spine = (0..spine_len).map(enc).collect();
        let period = (spine_len..spine_len + period_len).map(enc).collect();
        UpWord::new(spine, period).expect("period is non-empty")
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl Ord for UpWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| llex_cmp(&self.spine, &other.spine))
            .then_with(|| llex_cmp(&self.period, &other.period))
    }
}

impl PartialOrd for UpWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for UpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |w: &[Sym]| {
            w.iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(".")
        };
        write!(f, "{}({})^w", show(&self.spine), show(&self.period))
    }
}

/// A finite set of positive and negative ultimately periodic words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaSample {
    pub alphabet: Alphabet,
    pub positive: BTreeSet<UpWord>,
    pub negative: BTreeSet<UpWord>,
}

impl OmegaSample {
    pub fn empty(alphabet: Alphabet) -> Self {
        OmegaSample {
            alphabet,
            positive: BTreeSet::new(),
            negative: BTreeSet::new(),
        }
    }

    pub fn new(
        alphabet: Alphabet,
        positive: impl IntoIterator<Item = UpWord>,
        negative: impl IntoIterator<Item = UpWord>,
    ) -> Result<Self> {
        let mut s = OmegaSample::empty(alphabet);
        for w in positive {
            s.insert(w, true)?;
        }
        for w in negative {
            s.insert(w, false)?;
        }
        Ok(s)
    }

    /// Adds a word with the given sign; a word present with the other sign is an error.
    pub fn insert(&mut self, w: UpWord, positive: bool) -> Result<bool> {
        let n = self.alphabet.len();
        if w.spine.iter().chain(w.period.iter()).any(|&s| s >= n) {
            return Err(Error::SymbolOutOfRange);
        }
        let (mine, other) = if positive {
            (&mut self.positive, &self.negative)
        } else {
            (&mut self.negative, &self.positive)
        };
        if other.contains(&w) {
            return Err(Error::ConflictingSample(self.alphabet.format_upword(&w)));
        }
        Ok(mine.insert(w))
    }

    pub fn is_empty(&self) -> bool {
        self.positive.is_empty() && self.negative.is_empty()
    }

    pub fn len(&self) -> usize {
        self.positive.len() + self.negative.len()
    }

    /// All words with their signs, positives first.
    pub fn words(&self) -> impl Iterator<Item = (&UpWord, bool)> {
        self.positive
            .iter()
            .map(|w| (w, true))
            .chain(self.negative.iter().map(|w| (w, false)))
    }

    pub fn sign_of(&self, w: &UpWord) -> Option<bool> {
        if self.positive.contains(w) {
            Some(true)
        } else if self.negative.contains(w) {
            Some(false)
        } else {
            None
        }
    }

    /// Total number of symbols over all representations.
    pub fn total_size(&self) -> usize {
        self.words().map(|(w, _)| w.size()).sum()
    }

    /// All prefixes of sample words up to length `bound`.
    pub fn prefixes(&self, bound: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        out.insert(Vec::new());
        for (w, _) in self.words() {
            for n in 1..=bound {
                out.insert(w.prefix(n));
            }
        }
        out
    }

    pub fn is_prefix(&self, x: &[Sym]) -> bool {
        x.is_empty() || self.words().any(|(w, _)| w.has_prefix(x))
    }
}
