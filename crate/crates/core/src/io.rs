//! Plain-text formats for samples, machines and families.
//!
//! Sample files start with `alphabet: a b ...` followed by one `+ spine,period`
//! or `- spine,period` line per word. Machine files start with the kind
//! (`dpa`, `mealy` or `dfa`), then `alphabet:`, `states:`, `initial:`, for DFAs
//! `final:`, and one `from symbol to [priority]` line per transition.
//! `#` starts a comment.

use std::fmt::Write as _;

use crate::automata::{Dfa, Dpa, Mealy};
use crate::congruence::{RightCongruence, Ts};
use crate::error::{Error, Result};
use crate::forc::{ColoredForc, FwpmFamily};
use crate::words::{Alphabet, OmegaSample, Sym};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty lines with comments removed, numbered from 1.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn parse_alphabet(line: usize, text: &str) -> Result<Alphabet> {
    let rest = text
        .strip_prefix("alphabet:")
        .ok_or_else(|| parse_err(line, "expected `alphabet:`"))?;
    let mut symbols = Vec::new();
    for tok in rest.split_whitespace() {
        let mut cs = tok.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => symbols.push(c),
            _ => {
                return Err(parse_err(
                    line,
                    format!("symbol `{tok}` is not a single character"),
                ))
            }
        }
    }
    Alphabet::new(symbols).map_err(|e| parse_err(line, e.to_string()))
}

fn format_alphabet(a: &Alphabet) -> String {
    let syms: Vec<String> = a.symbols().iter().map(|c| c.to_string()).collect();
    format!("alphabet: {}", syms.join(" "))
}

pub fn parse_sample(text: &str) -> Result<OmegaSample> {
    let lines = content_lines(text);
    let Some(&(n, first)) = lines.first() else {
        return Err(parse_err(1, "missing alphabet line"));
    };
    let alphabet = parse_alphabet(n, first)?;
    let mut sample = OmegaSample::empty(alphabet.clone());
    for &(n, l) in &lines[1..] {
        let (sign, word) = match l.split_at(1) {
            ("+", w) => (true, w.trim()),
            ("-", w) => (false, w.trim()),
            _ => return Err(parse_err(n, "expected `+` or `-`")),
        };
        let w = alphabet
            .parse_upword(word)
            .map_err(|e| parse_err(n, e.to_string()))?;
        sample
            .insert(w, sign)
            .map_err(|e| parse_err(n, e.to_string()))?;
    }
    Ok(sample)
}

pub fn format_sample(s: &OmegaSample) -> String {
    let mut out = format_alphabet(&s.alphabet);
    out.push('\n');
    for (w, sign) in s.words() {
        let _ = writeln!(
            out,
            "{} {}",
            if sign { '+' } else { '-' },
            s.alphabet.format_upword(w)
        );
    }
    out
}

/// Any of the three machine kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Machine {
    Dpa(Dpa),
    Mealy(Mealy),
    Dfa(Dfa),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Dpa,
    Mealy,
    Dfa,
}

/// A machine block; color lines are validated but not kept.
struct Block {
    machine: Machine,
}

fn parse_number(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

fn header_value<'a>(lines: &[(usize, &'a str)], i: usize, key: &str) -> Result<(usize, &'a str)> {
    let &(n, l) = lines
        .get(i)
        .ok_or_else(|| parse_err(lines.last().map_or(1, |x| x.0), format!("missing `{key}`")))?;
    let v = l
        .strip_prefix(key)
        .ok_or_else(|| parse_err(n, format!("expected `{key}`")))?;
    Ok((n, v.trim()))
}

/// Parses one block starting at `lines[0]` and stopping before the first line
/// that is neither a transition nor a color line. Returns the block and the
/// number of lines consumed.
fn parse_block(lines: &[(usize, &str)]) -> Result<(Block, usize)> {
    let &(n0, kind_line) = lines
        .first()
        .ok_or_else(|| parse_err(1, "missing machine kind"))?;
    let kind = match kind_line {
        "dpa" => Kind::Dpa,
        "mealy" => Kind::Mealy,
        "dfa" => Kind::Dfa,
        other => return Err(parse_err(n0, format!("unknown machine kind `{other}`"))),
    };
    let (na, _) = header_value(lines, 1, "alphabet:")?;
    let alphabet = parse_alphabet(na, lines[1].1)?;
    let (ns, states) = header_value(lines, 2, "states:")?;
    let size = parse_number(ns, states, "state count")?;
    if size == 0 {
        return Err(parse_err(ns, "a machine needs at least one state"));
    }
    let (ni, initial) = header_value(lines, 3, "initial:")?;
    let initial = parse_number(ni, initial, "state")?;
    if initial >= size {
        return Err(parse_err(ni, "initial state out of range"));
    }
    let mut i = 4;
    let mut finals = vec![false; size];
    if kind == Kind::Dfa {
        let (nf, list) = header_value(lines, 4, "final:")?;
        for tok in list.split_whitespace() {
            let q = parse_number(nf, tok, "state")?;
            if q >= size {
                return Err(parse_err(nf, "final state out of range"));
            }
            finals[q] = true;
        }
        i = 5;
    }
    let syms = alphabet.len();
    let mut succ: Vec<Option<usize>> = vec![None; size * syms];
    let mut out = vec![0; size * syms];
    while let Some(&(n, l)) = lines.get(i) {
        if let Some(rest) = l.strip_prefix("color:") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            let [q, c] = toks[..] else {
                return Err(parse_err(n, "expected `color: state color`"));
            };
            let q = parse_number(n, q, "state")?;
            if q >= size {
                return Err(parse_err(n, "state out of range"));
            }
            parse_number(n, c, "color")?;
            i += 1;
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        let expected = if kind == Kind::Dfa { 3 } else { 4 };
        if !toks
            .first()
            .is_some_and(|t| t.chars().all(|c| c.is_ascii_digit()))
        {
            break;
        }
        if toks.len() != expected {
            return Err(parse_err(n, format!("expected {expected} fields")));
        }
        let from = parse_number(n, toks[0], "state")?;
        let mut cs = toks[1].chars();
        let a = match (cs.next(), cs.next()) {
            (Some(c), None) => alphabet
                .index_of(c)
                .ok_or_else(|| parse_err(n, format!("unknown symbol `{c}`")))?,
            _ => return Err(parse_err(n, format!("invalid symbol `{}`", toks[1]))),
        };
        let to = parse_number(n, toks[2], "state")?;
        if from >= size || to >= size {
            return Err(parse_err(n, "state out of range"));
        }
        if succ[from * syms + a].is_some() {
            return Err(parse_err(n, "duplicate transition"));
        }
        succ[from * syms + a] = Some(to);
        if expected == 4 {
            out[from * syms + a] = parse_number(n, toks[3], "priority")?;
        }
        i += 1;
    }
    let last = lines.get(i.saturating_sub(1)).map_or(n0, |x| x.0);
    if let Some(missing) = succ.iter().position(|t| t.is_none()) {
        return Err(parse_err(
            last,
            format!(
                "missing transition from state {} on `{}`",
                missing / syms,
                alphabet.char_of(missing % syms)
            ),
        ));
    }
    // Renumber so that the initial state is 0.
    let rename = |q: usize| {
        if q == initial {
            0
        } else if q == 0 {
            initial
        } else {
            q
        }
    };
    let mut ts = Ts::with_states(syms, size);
    let mut prio = vec![0; size * syms];
    let mut fin = vec![false; size];
    for q in 0..size {
        fin[rename(q)] = finals[q];
        for a in 0..syms {
            ts.set(rename(q), a, succ[q * syms + a].map(rename));
            prio[rename(q) * syms + a] = out[q * syms + a];
        }
    }
    let to_err = |e: Error| parse_err(n0, e.to_string());
    let machine = match kind {
        Kind::Dpa => Machine::Dpa(Dpa::new(alphabet, ts, prio).map_err(to_err)?),
        Kind::Mealy => Machine::Mealy(Mealy::new(alphabet, ts, prio).map_err(to_err)?),
        Kind::Dfa => Machine::Dfa(Dfa::new(alphabet, ts, fin).map_err(to_err)?),
    };
    Ok((Block { machine }, i))
}

pub fn parse_machine(text: &str) -> Result<Machine> {
    let lines = content_lines(text);
    let (block, used) = parse_block(&lines)?;
    if let Some(&(n, _)) = lines.get(used) {
        return Err(parse_err(n, "unexpected line"));
    }
    Ok(block.machine)
}

pub fn parse_dpa(text: &str) -> Result<Dpa> {
    match parse_machine(text)? {
        Machine::Dpa(a) => Ok(a),
        _ => Err(parse_err(1, "expected a dpa")),
    }
}

fn write_transitions(
    out: &mut String,
    alphabet: &Alphabet,
    ts: &Ts,
    label: impl Fn(usize, Sym) -> Option<usize>,
) {
    for q in 0..ts.size() {
        for a in 0..alphabet.len() {
            let _ = match label(q, a) {
                Some(p) => writeln!(out, "{} {} {} {}", q, alphabet.char_of(a), ts.succ(q, a), p),
                None => writeln!(out, "{} {} {}", q, alphabet.char_of(a), ts.succ(q, a)),
            };
        }
    }
}

fn header(kind: &str, alphabet: &Alphabet, size: usize) -> String {
    format!(
        "{kind}\n{}\nstates: {size}\ninitial: 0\n",
        format_alphabet(alphabet)
    )
}

pub fn format_machine(m: &Machine) -> String {
    match m {
        Machine::Dpa(a) => {
            let mut out = header("dpa", &a.alphabet, a.size());
            write_transitions(&mut out, &a.alphabet, &a.ts, |q, s| Some(a.priority(q, s)));
            out
        }
        Machine::Mealy(m) => {
            let mut out = header("mealy", &m.alphabet, m.size());
            write_transitions(&mut out, &m.alphabet, &m.ts, |q, s| Some(m.output_at(q, s)));
            out
        }
        Machine::Dfa(d) => {
            let mut out = header("dfa", &d.alphabet, d.size());
            let finals: Vec<String> = (0..d.size())
                .filter(|&q| d.finals[q])
                .map(|q| q.to_string())
                .collect();
            out.push_str(format!("final: {}", finals.join(" ")).trim_end());
            out.push('\n');
            write_transitions(&mut out, &d.alphabet, &d.ts, |_, _| None);
            out
        }
    }
}

pub fn format_dpa(a: &Dpa) -> String {
    format_machine(&Machine::Dpa(a.clone()))
}

fn format_family_parts(
    leading: &RightCongruence,
    machines: &[Mealy],
    colors: Option<&[Vec<usize>]>,
) -> String {
    let alphabet = &machines[0].alphabet;
    let dfa = Dfa::new(
        alphabet.clone(),
        leading.ts().clone(),
        vec![false; leading.size()],
    )
    .expect("complete");
    let mut out = format_machine(&Machine::Dfa(dfa));
    for (c, m) in machines.iter().enumerate() {
        let _ = writeln!(out, "progress {}:", alphabet.format_word(leading.rep(c)));
        out.push_str(&format_machine(&Machine::Mealy(m.clone())));
        if let Some(colors) = colors {
            for (q, col) in colors[c].iter().enumerate() {
                let _ = writeln!(out, "color: {q} {col}");
            }
        }
    }
    out
}

/// A colored FORC: the leading congruence as a DFA without final states,
/// then per class its progress machine emitting target colors.
pub fn format_colored_forc(cf: &ColoredForc, alphabet: &Alphabet) -> String {
    let family = crate::forc::mealy_family(cf, alphabet);
    format_family_parts(&family.leading, &family.machines, Some(&cf.colors))
}

pub fn format_family(f: &FwpmFamily) -> String {
    format_family_parts(&f.leading, &f.machines, None)
}

/// Reads a family in the format of [`format_family`]; color lines are ignored.
pub fn parse_family(text: &str) -> Result<FwpmFamily> {
    let lines = content_lines(text);
    let (lead, mut i) = parse_block(&lines)?;
    let Machine::Dfa(lead) = lead.machine else {
        return Err(parse_err(lines[0].0, "leading block must be a dfa"));
    };
    let leading = RightCongruence::from_ts(&lead.ts);
    let mut machines: Vec<Option<Mealy>> = vec![None; leading.size()];
    while let Some(&(n, l)) = lines.get(i) {
        let rep = l
            .strip_prefix("progress")
            .and_then(|r| r.trim().strip_suffix(':'))
            .ok_or_else(|| parse_err(n, "expected `progress <word>:`"))?;
        let rep = lead
            .alphabet
            .parse_word(rep.trim())
            .map_err(|e| parse_err(n, e.to_string()))?;
        let (block, used) = parse_block(&lines[i + 1..])?;
        let Machine::Mealy(m) = block.machine else {
            return Err(parse_err(n, "progress block must be a mealy machine"));
        };
        if m.alphabet != lead.alphabet {
            return Err(parse_err(n, "alphabet differs from the leading block"));
        }
        let c = leading.class_of(&rep);
        if machines[c].is_some() {
            return Err(parse_err(n, "class given twice"));
        }
        machines[c] = Some(m);
        i += 1 + used;
    }
    let machines = machines
        .into_iter()
        .enumerate()
        .map(|(c, m)| {
            m.ok_or_else(|| {
                parse_err(
                    lines.last().map_or(1, |x| x.0),
                    format!("no progress block for class {c}"),
                )
            })
        })
        .collect::<Result<_>>()?;
    Ok(FwpmFamily { leading, machines })
}
