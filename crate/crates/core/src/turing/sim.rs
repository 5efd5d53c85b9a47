use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::TuringMachine;

/// Outcome of a step-bounded run on the empty input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunResult {
    /// Entered the halting state after exactly `steps` transitions.
    Halted { steps: u64 },
    /// Still running after `budget` transitions.
    StillRunning { budget: u64 },
}

impl RunResult {
    pub fn halted_at(self) -> Option<u64> {
        match self {
            RunResult::Halted { steps } => Some(steps),
            RunResult::StillRunning { .. } => None,
        }
    }
}

impl fmt::Display for RunResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunResult::Halted { steps } => write!(f, "Halted({steps})"),
            RunResult::StillRunning { budget } => write!(f, "StillRunning({budget})"),
        }
    }
}

/// Machine configuration. Only non-blank cells are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    tape: BTreeMap<i64, usize>,
    head: i64,
    state: usize,
    steps_taken: u64,
}

impl Configuration {
    /// Blank tape, head on cell 0, initial state.
    pub fn initial(tm: &TuringMachine) -> Self {
        Configuration {
            tape: BTreeMap::new(),
            head: 0,
            state: tm.initial(),
            steps_taken: 0,
        }
    }

    pub fn head(&self) -> i64 {
        self.head
    }

    pub fn state(&self) -> usize {
        self.state
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps_taken
    }

    pub fn non_blank_cells(&self) -> usize {
        self.tape.len()
    }

    pub fn read(&self, tm: &TuringMachine, cell: i64) -> usize {
        self.tape.get(&cell).copied().unwrap_or(tm.blank())
    }

    pub fn is_halted(&self, tm: &TuringMachine) -> bool {
        self.state == tm.halting()
    }

    /// Apply one transition. Returns `false` without changing anything when
    /// the machine has already halted.
    pub fn step(&mut self, tm: &TuringMachine) -> bool {
        let Some(t) = tm.transition(self.state, self.read(tm, self.head)) else {
            return false;
        };
        if t.write == tm.blank() {
            self.tape.remove(&self.head);
        } else {
            self.tape.insert(self.head, t.write);
        }
        self.head += t.movement.delta();
        self.state = t.next;
        self.steps_taken += 1;
        true
    }

    /// Step until halted or `steps_taken == limit`.
    pub fn run_until(&mut self, tm: &TuringMachine, limit: u64) {
        while self.steps_taken < limit && self.step(tm) {}
    }
}

/// Run on the empty input for at most `budget` transitions.
pub fn run_bounded(tm: &TuringMachine, budget: u64) -> RunResult {
    let mut config = Configuration::initial(tm);
    config.run_until(tm, budget);
    if config.is_halted(tm) {
        RunResult::Halted {
            steps: config.steps_taken,
        }
    } else {
        RunResult::StillRunning { budget }
    }
}

/// Whether the machine halts after at most `n` steps on the empty input.
pub fn halts_within(tm: &TuringMachine, n: u64) -> bool {
    run_bounded(tm, n).halted_at().is_some()
}

#[derive(Debug)]
struct ProbeState {
    config: Configuration,
    halted_at: Option<u64>,
}

/// Resumable halting oracle for one machine.
///
/// Answers `halts_within(n)` by extending a single cached run, so repeated
/// queries cost at most the largest `n` asked so far. Clones share the cache.
#[derive(Debug, Clone)]
pub struct HaltProbe {
    machine: Arc<TuringMachine>,
    state: Arc<Mutex<ProbeState>>,
}

impl HaltProbe {
    pub fn new(machine: TuringMachine) -> Self {
        let config = Configuration::initial(&machine);
        let halted_at = config.is_halted(&machine).then_some(0);
        HaltProbe {
            machine: Arc::new(machine),
            state: Arc::new(Mutex::new(ProbeState { config, halted_at })),
        }
    }

    pub fn machine(&self) -> &TuringMachine {
        &self.machine
    }

    pub fn halts_within(&self, n: u64) -> bool {
        let mut st = self.state.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(k) = st.halted_at {
            return k <= n;
        }
        if st.config.steps_taken() < n {
            st.config.run_until(&self.machine, n);
            if st.config.is_halted(&self.machine) {
                st.halted_at = Some(st.config.steps_taken());
            }
        }
        st.halted_at.is_some_and(|k| k <= n)
    }

    /// Halting step if it has been observed within `budget` steps.
    pub fn halted_at(&self, budget: u64) -> Option<u64> {
        self.halts_within(budget);
        let st = self.state.lock().unwrap_or_else(|e| e.into_inner());
        st.halted_at.filter(|&k| k <= budget)
    }
}
