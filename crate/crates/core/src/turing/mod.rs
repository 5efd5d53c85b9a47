//! Deterministic single-tape Turing machines over a finite alphabet.
//!
//! Machines are read from a small line-oriented text format (see [`parse_tm`]),
//! simulated on the empty input with an explicit step budget, and coded as
//! natural numbers through their canonical serialization.

mod code;
pub mod fixtures;
mod parse;
mod sim;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use code::{decode_tm, encode_tm};
pub use parse::parse_tm;
pub use sim::{halts_within, run_bounded, Configuration, HaltProbe, RunResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TuringError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown state `{name}`")]
    UnknownState { line: usize, name: String },
    #[error("line {line}: unknown symbol `{name}`")]
    UnknownSymbol { line: usize, name: String },
    #[error("line {line}: duplicate transition for ({state}, {symbol})")]
    DuplicateTransition {
        line: usize,
        state: String,
        symbol: String,
    },
    #[error("line {line}: halting state `{state}` cannot have outgoing transitions")]
    TransitionFromHalting { line: usize, state: String },
    #[error("missing transition for ({state}, {symbol})")]
    MissingTransition { state: String, symbol: String },
    #[error("missing `{0}:` header")]
    MissingHeader(&'static str),
    #[error("machine code is not a valid machine: {0}")]
    BadCode(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::Left => "L",
            Move::Right => "R",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub write: usize,
    pub movement: Move,
    pub next: usize,
}

/// A validated machine. States and symbols are kept sorted by name so that
/// two descriptions of the same machine compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TuringMachine {
    states: Vec<String>,
    symbols: Vec<String>,
    blank: usize,
    initial: usize,
    halting: usize,
    // Row-major over (state, symbol); `None` exactly on the halting row.
    table: Vec<Option<Transition>>,
}

impl TuringMachine {
    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn blank(&self) -> usize {
        self.blank
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn halting(&self) -> usize {
        self.halting
    }

    pub fn transition(&self, state: usize, symbol: usize) -> Option<Transition> {
        self.table[state * self.symbols.len() + symbol]
    }

    /// Canonical serialization: sorted headers, one transition per line in
    /// (state, symbol) order. `parse_tm` of this text yields `self` again.
    pub fn to_canonical_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("states: {}\n", self.states.join(" ")));
        out.push_str(&format!("alphabet: {}\n", self.symbols.join(" ")));
        out.push_str(&format!("blank: {}\n", self.symbols[self.blank]));
        out.push_str(&format!("initial: {}\n", self.states[self.initial]));
        out.push_str(&format!("halting: {}\n", self.states[self.halting]));
        for (q, state) in self.states.iter().enumerate() {
            for (s, symbol) in self.symbols.iter().enumerate() {
                if let Some(t) = self.transition(q, s) {
                    out.push_str(&format!(
                        "{state} {symbol} -> {} {} {}\n",
                        self.symbols[t.write], t.movement, self.states[t.next]
                    ));
                }
            }
        }
        out
    }
}

impl fmt::Display for TuringMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_text())
    }
}
