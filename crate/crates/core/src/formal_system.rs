//! Recursively enumerable formal systems, abstracted to what the class
//! constructions need: a total theorem enumeration and a computable,
//! fixed-point-free negation on statement codes.
//!
//! Theorem positions are counted from 0 throughout.

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::unpair;

/// Code of a statement. Negation pairs `2k` with `2k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Statement(pub u64);

impl Statement {
    #[inline]
    pub fn negation(self) -> Statement {
        Statement(self.0 ^ 1)
    }
}

pub fn negation(s: Statement) -> Statement {
    s.negation()
}

type Enumeration = Arc<dyn Fn(u64) -> Statement + Send + Sync>;

#[derive(Clone)]
enum Kind {
    Consistent,
    Inconsistent,
    InconsistentAt(u64),
    Custom(Enumeration),
}

/// A theorem enumeration `i ↦ theorem(i)`.
///
/// User-supplied enumerations are taken on trust: nothing checks that they
/// prove infinitely many distinct statements.
#[derive(Clone)]
pub struct FormalSystem {
    name: String,
    kind: Kind,
}

impl fmt::Debug for FormalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormalSystem").field("name", &self.name).finish()
    }
}

impl FormalSystem {
    pub fn custom(name: impl Into<String>, theorem: impl Fn(u64) -> Statement + Send + Sync + 'static) -> Self {
        FormalSystem {
            name: name.into(),
            kind: Kind::Custom(Arc::new(theorem)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn theorem(&self, i: u64) -> Statement {
        match &self.kind {
            Kind::Consistent => Statement(2 * i),
            Kind::Inconsistent => Statement(i),
            Kind::InconsistentAt(k) if i < *k => Statement(2 * i),
            Kind::InconsistentAt(k) => Statement((i - k) ^ 1),
            Kind::Custom(f) => f(i),
        }
    }

    pub fn spec(&self) -> Option<SystemSpec> {
        match &self.kind {
            Kind::Consistent => Some(SystemSpec::Consistent),
            Kind::Inconsistent => Some(SystemSpec::Inconsistent),
            Kind::InconsistentAt(k) => Some(SystemSpec::InconsistentAt { onset: *k }),
            Kind::Custom(_) => None,
        }
    }
}

/// Proves `0, 2, 4, …`: infinitely many statements and no negation pair.
pub fn consistent_toy() -> FormalSystem {
    FormalSystem {
        name: "consistent".into(),
        kind: Kind::Consistent,
    }
}

/// Proves every statement, in order.
pub fn inconsistent_toy() -> FormalSystem {
    FormalSystem {
        name: "inconsistent".into(),
        kind: Kind::Inconsistent,
    }
}

/// Proves `0, 2, …, 2(k−1)` and then every statement in the order
/// `1, 0, 3, 2, …`. For `k ≥ 1` the first contradiction appears at
/// position `k` (statement 1 against statement 0); for `k = 0` at position 1.
pub fn inconsistent_toy_at(k: u64) -> FormalSystem {
    FormalSystem {
        name: format!("inconsistent_at:{k}"),
        kind: Kind::InconsistentAt(k),
    }
}

/// Whether domain point `n` is one where the Gödel class can be non-zero:
/// with `(i, j) = unpair(n)`, theorem `i` is the negation of theorem `j`.
pub fn active_index(fs: &FormalSystem, n: u64) -> bool {
    let (i, j) = unpair(n);
    fs.theorem(i) == fs.theorem(j).negation()
}

/// Whether theorems `0..=n` contain no statement together with its negation.
pub fn prefix_consistent(fs: &FormalSystem, n: u64) -> bool {
    inconsistency_onset(fs, n).is_none()
}

/// Smallest `n ≤ limit` at which theorems `0..=n` stop being consistent.
pub fn inconsistency_onset(fs: &FormalSystem, limit: u64) -> Option<u64> {
    let mut seen = HashSet::new();
    (0..=limit).find(|&i| {
        let t = fs.theorem(i);
        let clash = seen.contains(&t.negation());
        seen.insert(t);
        clash
    })
}

#[derive(Debug, Default)]
struct ScanState {
    scanned: u64,
    seen: HashSet<Statement>,
    onset: Option<u64>,
}

/// Resumable prefix-consistency oracle. Clones share the scan.
#[derive(Debug, Clone)]
pub struct ConsistencyProbe {
    system: FormalSystem,
    state: Arc<Mutex<ScanState>>,
}

impl ConsistencyProbe {
    pub fn new(system: FormalSystem) -> Self {
        ConsistencyProbe {
            system,
            state: Arc::new(Mutex::new(ScanState::default())),
        }
    }

    pub fn system(&self) -> &FormalSystem {
        &self.system
    }

    pub fn prefix_consistent(&self, n: u64) -> bool {
        let mut st = self.state.lock().unwrap_or_else(|e| e.into_inner());
        while st.onset.is_none() && st.scanned <= n {
            let i = st.scanned;
            let t = self.system.theorem(i);
            if st.seen.contains(&t.negation()) {
                st.onset = Some(i);
            }
            st.seen.insert(t);
            st.scanned += 1;
        }
        st.onset.is_none_or(|o| n < o)
    }

    pub fn onset(&self, limit: u64) -> Option<u64> {
        self.prefix_consistent(limit);
        let st = self.state.lock().unwrap_or_else(|e| e.into_inner());
        st.onset.filter(|&o| o <= limit)
    }
}

#[derive(Debug, Error)]
pub enum SystemSpecError {
    #[error("unknown system `{0}` (expected consistent, inconsistent or inconsistent_at:<k>)")]
    Unknown(String),
    #[error("bad onset in `{0}`")]
    BadOnset(String),
}

/// Serializable description of a toy system:
/// `{"kind": "inconsistent_at", "onset": 5}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SystemSpec {
    Consistent,
    Inconsistent,
    InconsistentAt { onset: u64 },
}

impl SystemSpec {
    pub fn build(self) -> FormalSystem {
        match self {
            SystemSpec::Consistent => consistent_toy(),
            SystemSpec::Inconsistent => inconsistent_toy(),
            SystemSpec::InconsistentAt { onset } => inconsistent_toy_at(onset),
        }
    }
}

impl std::str::FromStr for SystemSpec {
    type Err = SystemSpecError;

    /// Short form used on the command line: `consistent`, `inconsistent`,
    /// `inconsistent_at:<k>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            None if s == "consistent" => Ok(SystemSpec::Consistent),
            None if s == "inconsistent" => Ok(SystemSpec::Inconsistent),
            Some(("inconsistent_at", k)) => k
                .parse()
                .map(|onset| SystemSpec::InconsistentAt { onset })
                .map_err(|_| SystemSpecError::BadOnset(s.to_owned())),
            _ => Err(SystemSpecError::Unknown(s.to_owned())),
        }
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemSpec::Consistent => f.write_str("consistent"),
            SystemSpec::Inconsistent => f.write_str("inconsistent"),
            SystemSpec::InconsistentAt { onset } => write!(f, "inconsistent_at:{onset}"),
        }
    }
}
