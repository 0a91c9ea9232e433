//! Reading inputs and writing JSON-lines reports.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use cobweave_core::automata::{Alphabet, Fsa, Psa, Word};
use cobweave_core::Error;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// A failure that ends the run, with the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_budget() => 3,
            Failure::Core(Error::Consistency(_)) => 1,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Io(m) => f.write_str(m),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

/// Parses a JSON file into `T`, naming the offending path on failure.
pub fn load<T: DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|f| match f {
        Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Outcome<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if inner.is_data() || inner.is_syntax() || inner.is_eof() {
            Failure::Usage(format!("invalid input at $.{}: {inner}", path.trim_start_matches('.')))
        } else {
            Failure::Io(inner.to_string())
        }
    })
}

/// A finite or pushdown machine, told apart by the `stack_alphabet` key.
pub enum Machine {
    Finite(Fsa),
    Pushdown(Psa),
}

impl Machine {
    pub fn load(path: &Path) -> Outcome<Machine> {
        let value: serde_json::Value = load(path)?;
        let text = value.to_string();
        if value.get("stack_alphabet").is_some() {
            Ok(Machine::Pushdown(parse(&text)?))
        } else {
            Ok(Machine::Finite(parse(&text)?))
        }
    }

    pub fn finite(self, what: &str) -> Outcome<Fsa> {
        match self {
            Machine::Finite(m) => Ok(m),
            Machine::Pushdown(_) => Err(Failure::Usage(format!("{what} needs a finite automaton"))),
        }
    }
}

/// Splits `text` into symbols: on whitespace or commas when present,
/// otherwise one symbol per character.
pub fn parse_word(text: &str) -> Word {
    if text.contains(|c: char| c.is_whitespace() || c == ',') {
        Word(text.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).map(String::from).collect())
    } else {
        Word::from(text)
    }
}

pub fn check_letters(word: &Word, alphabet: &Alphabet) -> Outcome<()> {
    match word.symbols().iter().find(|s| !alphabet.contains(s)) {
        Some(s) => Err(Failure::Usage(format!("symbol `{s}` is not in the alphabet {:?}", alphabet.letters()))),
        None => Ok(()),
    }
}

/// JSON-lines sink: stdout, or the `--out` file.
pub struct Report {
    out: Box<dyn Write>,
    failed: usize,
}

impl Report {
    pub fn open(path: Option<&PathBuf>) -> Outcome<Report> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure::Io(format!("cannot create {}: {e}", p.display())))?)),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Report { out, failed: 0 })
    }

    pub fn record<T: Serialize>(&mut self, value: &T) -> Outcome<()> {
        let line = serde_json::to_string(value).map_err(|e| Failure::Io(e.to_string()))?;
        writeln!(self.out, "{line}").map_err(|e| Failure::Io(e.to_string()))
    }

    /// Writes a check record and remembers whether it passed.
    pub fn check<T: Serialize>(&mut self, passed: bool, value: &T) -> Outcome<()> {
        if !passed {
            self.failed += 1;
        }
        self.record(value)
    }

    pub fn finish(mut self) -> Outcome<usize> {
        self.out.flush().map_err(|e| Failure::Io(e.to_string()))?;
        Ok(self.failed)
    }
}
