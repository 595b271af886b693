use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use parity_learn::charsample::characteristic_sample;
use parity_learn::dpainf::learn;
use parity_learn::forc::{learn_forc, myhill_nerode_from_dpa, FwpmFamily};
use parity_learn::glerc::TraceEvent;
use parity_learn::io::{self, Machine};
use parity_learn::precise::{
    format_priority_word, join_priority_word, precise_dpa, precise_fwpm_from_dpa,
};
use parity_learn::{Alphabet, Dpa, Error};

#[derive(Parser)]
#[command(
    name = "parity-learn",
    version,
    about = "Learn parity automata from ultimately periodic examples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a DPA from a sample file.
    Learn {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write the colored family the DPA was built from.
        #[arg(long)]
        emit_forc: Option<PathBuf>,
        /// Print every attempted merge of the congruence learners to stderr.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compute the precise DPA of a DPA.
    Precise {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize the priorities of a DPA.
    Normalize {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exit 0 if two DPAs are equivalent, else print a counterexample and exit 1.
    Equiv { left: PathBuf, right: PathBuf },
    /// Print `accept` or `reject` for a word `spine,period`.
    Member { input: PathBuf, word: String },
    /// Write a sample from which the learner recovers the given DPA.
    Charsample {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the priority word `spine|period` of the join of a family, or of
    /// the precise family of a DPA, on a word.
    JoinTrace { input: PathBuf, word: String },
}

enum Failure {
    Parse(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::EmptyAlphabet
            | Error::DuplicateSymbol(_)
            | Error::ReservedSymbol(_)
            | Error::UnknownSymbol(_)
            | Error::InvalidPeriod
            | Error::MissingComma
            | Error::ConflictingSample(_) => Failure::Parse(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<ExitCode, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => {
            fs::write(p, text).map_err(|e| Failure::Internal(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_path(path: &Path, e: Error) -> Failure {
    match Failure::from(e) {
        Failure::Parse(m) => Failure::Parse(format!("{}: {m}", path.display())),
        f => f,
    }
}

fn load_dpa(path: &Path) -> std::result::Result<Dpa, Failure> {
    io::parse_dpa(&read(path)?).map_err(|e| with_path(path, e))
}

fn load_family(path: &Path) -> std::result::Result<FwpmFamily, Failure> {
    let text = read(path)?;
    let is_family = text.lines().any(|l| l.trim_start().starts_with("progress"));
    if is_family {
        return io::parse_family(&text).map_err(|e| with_path(path, e));
    }
    match io::parse_machine(&text).map_err(|e| with_path(path, e))? {
        Machine::Dpa(a) => {
            let a = a.trim();
            Ok(precise_fwpm_from_dpa(&a, &myhill_nerode_from_dpa(&a))?)
        }
        _ => Err(Failure::Parse(format!(
            "{}: expected a dpa or a family",
            path.display()
        ))),
    }
}

fn print_trace(name: &str, alphabet: &Alphabet, trace: &[TraceEvent]) {
    for e in trace {
        let mut x = e.source.clone();
        x.push(e.symbol);
        let target = match &e.target {
            Some(t) => format!("[{}]", alphabet.format_word(t)),
            None => "new".to_string(),
        };
        let verdict = if e.accepted { "accepted" } else { "rejected" };
        eprintln!(
            "{name}: [{}] -> {target} {verdict}",
            alphabet.format_word(&x)
        );
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Learn {
            sample,
            out,
            emit_forc,
            trace,
            report,
        } => {
            let s = io::parse_sample(&read(&sample)?).map_err(|e| with_path(&sample, e))?;
            if trace {
                let (_, learning) = learn_forc(&s)?;
                print_trace("leading", &s.alphabet, &learning.leading_trace);
                for (c, t) in learning.progress_traces.iter().enumerate() {
                    print_trace(&format!("progress {c}"), &s.alphabet, t);
                }
            }
            let learned = learn(&s)?;
            write(Some(&out), &io::format_dpa(&learned.dpa))?;
            if let Some(path) = emit_forc {
                let text = match &learned.forc {
                    Some(cf) => io::format_colored_forc(cf, &s.alphabet),
                    None => {
                        return Err(Failure::Internal(
                            "no family was built for this sample".into(),
                        ))
                    }
                };
                write(Some(&path), &text)?;
            }
            if let Some(path) = report {
                write(Some(&path), &learned.report.to_string())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Precise { input, out } => {
            let a = load_dpa(&input)?;
            write(out.as_deref(), &io::format_dpa(&precise_dpa(&a, None)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Normalize { input, out } => {
            let a = load_dpa(&input)?;
            write(out.as_deref(), &io::format_dpa(&a.normalize()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { left, right } => {
            let (a, b) = (load_dpa(&left)?, load_dpa(&right)?);
            if a.alphabet != b.alphabet {
                return Err(Failure::Parse(
                    "machines are over different alphabets".into(),
                ));
            }
            match a.equivalent(&b)? {
                None => Ok(ExitCode::SUCCESS),
                Some(w) => {
                    println!("{}", a.alphabet.format_upword(&w));
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Member { input, word } => {
            let a = load_dpa(&input)?;
            let w = a.alphabet.parse_upword(&word)?;
            println!("{}", if a.accepts(&w) { "accept" } else { "reject" });
            Ok(ExitCode::SUCCESS)
        }
        Command::Charsample { input, out } => {
            let a = load_dpa(&input)?;
            write(
                out.as_deref(),
                &io::format_sample(&characteristic_sample(&a)?),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::JoinTrace { input, word } => {
            let f = load_family(&input)?;
            let w = f.alphabet().parse_upword(&word)?;
            println!("{}", format_priority_word(&join_priority_word(&f, &w)?));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Parse(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
