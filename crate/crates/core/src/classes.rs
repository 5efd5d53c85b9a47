//! Computable function classes as total evaluators `(m, n) ↦ {0,1}`, their
//! single-function relatives, and finite materializations on a window of
//! domain points and indices.

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::seq_bit;
use crate::formal_system::{active_index, ConsistencyProbe, FormalSystem, SystemSpec};
use crate::turing::{parse_tm, HaltProbe, TuringError, TuringMachine};

/// Default cap on evaluator calls for one materialization.
pub const DEFAULT_EVAL_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error)]
pub enum ClassError {
    #[error("window needs {evaluations} evaluations, budget is {budget}; shrink the window")]
    WindowTooLarge { evaluations: u128, budget: u64 },
    #[error("index window must contain at least one index")]
    EmptyIndexWindow,
    #[error("class has no concepts")]
    Empty,
    #[error("concept {row} has {len} values, domain has {domain} points")]
    RowLength { row: usize, len: usize, domain: usize },
    #[error("domain points must be strictly increasing")]
    UnsortedDomain,
    #[error("bad class spec `{0}`")]
    BadSpec(String),
    #[error("reading machine {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("machine {path}: {source}")]
    Machine { path: PathBuf, source: TuringError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Goedel,
    Halting,
    Step,
    GoedelPrefix,
    Custom,
}

type Evaluator = Arc<dyn Fn(u64, u64) -> bool + Send + Sync>;

#[derive(Clone)]
enum ClassKind {
    Goedel(FormalSystem),
    GoedelPrefix(ConsistencyProbe),
    Halting(HaltProbe),
    Step,
    Custom(Evaluator),
}

/// A class `{ n ↦ eval(m, n) : m ∈ ℕ }` given by a total evaluator.
#[derive(Clone)]
pub struct IndexedClass {
    name: String,
    kind: ClassKind,
}

impl fmt::Debug for IndexedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndexedClass")
            .field("name", &self.name)
            .field("provenance", &self.provenance())
            .finish()
    }
}

/// `eval(m, n) = seq_bit(m, n)` where theorems `E²₁(n)` and `E²₂(n)` form a
/// negation pair, else 0.
pub fn goedel_class(fs: FormalSystem) -> IndexedClass {
    IndexedClass {
        name: format!("goedel:{}", fs.name()),
        kind: ClassKind::Goedel(fs),
    }
}

/// `eval(m, n) = seq_bit(m, n)` while the machine has not halted within `n`
/// steps, else 0.
pub fn halting_class(tm: TuringMachine) -> IndexedClass {
    IndexedClass {
        name: "halting".into(),
        kind: ClassKind::Halting(HaltProbe::new(tm)),
    }
}

/// Thresholds: index 0 is the zero function, index `m ≥ 1` is
/// `n ↦ [n ≥ m − 1]`.
pub fn step_class() -> IndexedClass {
    IndexedClass {
        name: "step".into(),
        kind: ClassKind::Step,
    }
}

/// `eval(m, n) = seq_bit(m, n)` while theorems `0..=n` are consistent, else 0.
pub fn goedel_prefix_class(fs: FormalSystem) -> IndexedClass {
    IndexedClass {
        name: format!("goedel_prefix:{}", fs.name()),
        kind: ClassKind::GoedelPrefix(ConsistencyProbe::new(fs)),
    }
}

impl IndexedClass {
    pub fn custom(name: impl Into<String>, eval: impl Fn(u64, u64) -> bool + Send + Sync + 'static) -> Self {
        IndexedClass {
            name: name.into(),
            kind: ClassKind::Custom(Arc::new(eval)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> Provenance {
        match self.kind {
            ClassKind::Goedel(_) => Provenance::Goedel,
            ClassKind::GoedelPrefix(_) => Provenance::GoedelPrefix,
            ClassKind::Halting(_) => Provenance::Halting,
            ClassKind::Step => Provenance::Step,
            ClassKind::Custom(_) => Provenance::Custom,
        }
    }

    /// For the gated constructions, whether point `n` passes the gate, i.e.
    /// `eval(·, n)` follows the index sequence there. `None` for classes
    /// without such a gate.
    pub fn activity(&self, n: u64) -> Option<bool> {
        match &self.kind {
            ClassKind::Goedel(fs) => Some(active_index(fs, n)),
            ClassKind::GoedelPrefix(p) => Some(p.prefix_consistent(n)),
            ClassKind::Halting(p) => Some(!p.halts_within(n)),
            ClassKind::Step | ClassKind::Custom(_) => None,
        }
    }

    pub fn eval(&self, m: u64, n: u64) -> bool {
        match &self.kind {
            ClassKind::Step => m > 0 && n >= m - 1,
            ClassKind::Custom(f) => f(m, n),
            _ => seq_bit(m, n) && self.activity(n) == Some(true),
        }
    }

    pub fn machine(&self) -> Option<&TuringMachine> {
        match &self.kind {
            ClassKind::Halting(p) => Some(p.machine()),
            _ => None,
        }
    }

    pub fn system(&self) -> Option<&FormalSystem> {
        match &self.kind {
            ClassKind::Goedel(fs) => Some(fs),
            ClassKind::GoedelPrefix(p) => Some(p.system()),
            _ => None,
        }
    }
}

/// A single total function `ℕ → {0,1}` with a finite description.
#[derive(Clone)]
pub enum Concept {
    Zero,
    /// `n ↦ [n ≥ k]`.
    Threshold(u64),
    /// `n ↦ 1 − [theorems 0..=n are consistent]`.
    OfSystem(ConsistencyProbe),
    /// `n ↦ [machine halts within n steps]`.
    OfMachine(HaltProbe),
}

impl fmt::Debug for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Concept::Zero => f.write_str("Zero"),
            Concept::Threshold(k) => write!(f, "Threshold({k})"),
            Concept::OfSystem(p) => write!(f, "OfSystem({})", p.system().name()),
            Concept::OfMachine(_) => f.write_str("OfMachine"),
        }
    }
}

impl Concept {
    pub fn eval(&self, n: u64) -> bool {
        match self {
            Concept::Zero => false,
            Concept::Threshold(k) => n >= *k,
            Concept::OfSystem(p) => !p.prefix_consistent(n),
            Concept::OfMachine(p) => p.halts_within(n),
        }
    }

    /// Index of this concept in [`step_class`], if its threshold shows up
    /// within `scan_limit`. Every concept here is a threshold or zero; zero
    /// (index 0) can only be certified for `Zero` itself.
    pub fn step_index(&self, scan_limit: u64) -> Option<u64> {
        match self {
            Concept::Zero => Some(0),
            Concept::Threshold(k) => Some(k + 1),
            Concept::OfSystem(p) => p.onset(scan_limit).map(|k| k + 1),
            Concept::OfMachine(p) => p.halted_at(scan_limit).map(|k| k + 1),
        }
    }

    /// `Threshold(k)` once the jump is observed within `scan_limit`.
    pub fn resolve(&self, scan_limit: u64) -> Concept {
        match self.step_index(scan_limit) {
            Some(0) => Concept::Zero,
            Some(m) => Concept::Threshold(m - 1),
            None => self.clone(),
        }
    }
}

pub fn f_of_system(fs: FormalSystem) -> Concept {
    Concept::OfSystem(ConsistencyProbe::new(fs))
}

pub fn f_of_machine(tm: TuringMachine) -> Concept {
    Concept::OfMachine(HaltProbe::new(tm))
}

/// Domain `[0, domain_max]` and indices `[0, index_count)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub domain_max: u64,
    pub index_count: u64,
}

impl Window {
    pub fn new(domain_max: u64, index_count: u64) -> Self {
        Window {
            domain_max,
            index_count,
        }
    }

    /// `M = 2^(N+1)`: every pattern on `[0, N]` has an index below `M`.
    pub fn saturating(domain_max: u64) -> Self {
        assert!(domain_max < 63, "saturating window needs N < 63");
        Window::new(domain_max, 1 << (domain_max + 1))
    }

    pub fn evaluations(&self) -> u128 {
        (u128::from(self.domain_max) + 1) * u128::from(self.index_count)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(N={}, M={})", self.domain_max, self.index_count)
    }
}

/// Default schedule `(N, 2^(N+1))` for `N = 3..=7`.
pub fn default_schedule() -> Vec<Window> {
    (3..=7).map(Window::saturating).collect()
}

/// Deduplicated finite class on an ordered domain. Concepts are addressed by
/// position; each keeps the smallest index that realized it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteClass {
    domain: Vec<u64>,
    rows: Vec<Vec<bool>>,
    witnesses: Vec<u64>,
    window: Option<Window>,
}

impl FiniteClass {
    /// Build from explicit rows. Duplicates collapse; the witness of a row
    /// is its first position in `rows`.
    pub fn from_rows(domain: Vec<u64>, rows: Vec<Vec<bool>>) -> Result<Self, ClassError> {
        let witnessed = rows.into_iter().enumerate().map(|(i, r)| (i as u64, r));
        Self::from_witnessed(domain, witnessed, None)
    }

    fn from_witnessed(
        domain: Vec<u64>,
        rows: impl IntoIterator<Item = (u64, Vec<bool>)>,
        window: Option<Window>,
    ) -> Result<Self, ClassError> {
        if domain.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ClassError::UnsortedDomain);
        }
        let mut seen: HashSet<Vec<bool>> = HashSet::new();
        let mut out_rows = Vec::new();
        let mut witnesses = Vec::new();
        for (i, (m, row)) in rows.into_iter().enumerate() {
            if row.len() != domain.len() {
                return Err(ClassError::RowLength {
                    row: i,
                    len: row.len(),
                    domain: domain.len(),
                });
            }
            if seen.insert(row.clone()) {
                out_rows.push(row);
                witnesses.push(m);
            }
        }
        if out_rows.is_empty() {
            return Err(ClassError::Empty);
        }
        Ok(FiniteClass {
            domain,
            rows: out_rows,
            witnesses,
            window,
        })
    }

    /// All `2^k` patterns on points `0..k`; the witness of a pattern is its
    /// sequence index.
    pub fn hypercube(k: u32) -> Self {
        let domain: Vec<u64> = (0..u64::from(k)).collect();
        let rows = (0..1u64 << k).map(|m| (m, (0..u64::from(k)).map(|n| seq_bit(m, n)).collect()));
        Self::from_witnessed(domain, rows, None).expect("hypercube rows are well formed")
    }

    pub fn domain(&self) -> &[u64] {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn row(&self, concept: usize) -> &[bool] {
        &self.rows[concept]
    }

    pub fn witness(&self, concept: usize) -> u64 {
        self.witnesses[concept]
    }

    pub fn witnesses(&self) -> &[u64] {
        &self.witnesses
    }

    pub fn window(&self) -> Option<Window> {
        self.window
    }

    /// Value of `concept` at domain position `pos`.
    #[inline]
    pub fn value(&self, concept: usize, pos: usize) -> bool {
        self.rows[concept][pos]
    }

    pub fn position_of(&self, point: u64) -> Option<usize> {
        self.domain.binary_search(&point).ok()
    }

    pub fn concept_of(&self, row: &[bool]) -> Option<usize> {
        self.rows.iter().position(|r| r == row)
    }

    /// Restriction of `concept` to the window, as a row over the domain.
    pub fn row_of(&self, concept: &Concept) -> Vec<bool> {
        self.domain.iter().map(|&n| concept.eval(n)).collect()
    }

    /// CSV matrix: one line per concept, `witness` then one column per
    /// domain point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("witness");
        for p in &self.domain {
            out.push_str(&format!(",{p}"));
        }
        out.push('\n');
        for (row, m) in self.rows.iter().zip(&self.witnesses) {
            out.push_str(&m.to_string());
            for &b in row {
                out.push_str(if b { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        out
    }

    pub fn export(&self) -> FiniteClassExport {
        FiniteClassExport {
            domain: self.domain.clone(),
            window: self.window,
            concepts: self
                .rows
                .iter()
                .zip(&self.witnesses)
                .map(|(row, &witness)| ConceptExport {
                    witness,
                    bits: row.iter().map(|&b| if b { '1' } else { '0' }).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptExport {
    pub witness: u64,
    /// One character per domain point, in domain order.
    pub bits: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteClassExport {
    pub domain: Vec<u64>,
    pub window: Option<Window>,
    pub concepts: Vec<ConceptExport>,
}

pub fn materialize(class: &IndexedClass, window: Window) -> Result<FiniteClass, ClassError> {
    materialize_with_budget(class, window, DEFAULT_EVAL_BUDGET)
}

/// Restrict `{ eval(m, ·) : m < M }` to `[0, N]` and deduplicate.
pub fn materialize_with_budget(
    class: &IndexedClass,
    window: Window,
    budget: u64,
) -> Result<FiniteClass, ClassError> {
    if window.index_count == 0 {
        return Err(ClassError::EmptyIndexWindow);
    }
    if window.evaluations() > u128::from(budget) {
        return Err(ClassError::WindowTooLarge {
            evaluations: window.evaluations(),
            budget,
        });
    }
    let domain: Vec<u64> = (0..=window.domain_max).collect();
    let gate: Option<Vec<bool>> = domain.iter().map(|&n| class.activity(n)).collect();
    let rows: Vec<(u64, Vec<bool>)> = (0..window.index_count)
        .into_par_iter()
        .map(|m| {
            let row = match &gate {
                Some(g) => domain.iter().map(|&n| g[n as usize] && seq_bit(m, n)).collect(),
                None => domain.iter().map(|&n| class.eval(m, n)).collect(),
            };
            (m, row)
        })
        .collect();
    FiniteClass::from_witnessed(domain, rows, Some(window))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionTag {
    Goedel,
    Halting,
    Step,
    GoedelPrefix,
}

/// Configuration form of a class:
/// `{"construction": "halting", "machine": "machines/halt3.tm"}` or
/// `{"construction": "goedel", "system": {"kind": "consistent"}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSpec {
    pub construction: ConstructionTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub machine: Option<PathBuf>,
}

impl ClassSpec {
    pub fn build(&self) -> Result<IndexedClass, ClassError> {
        let need_system = || {
            self.system
                .ok_or_else(|| ClassError::BadSpec(format!("{:?} needs a system", self.construction)))
        };
        match self.construction {
            ConstructionTag::Step => Ok(step_class()),
            ConstructionTag::Goedel => Ok(goedel_class(need_system()?.build())),
            ConstructionTag::GoedelPrefix => Ok(goedel_prefix_class(need_system()?.build())),
            ConstructionTag::Halting => {
                let path = self
                    .machine
                    .clone()
                    .ok_or_else(|| ClassError::BadSpec("halting needs a machine".into()))?;
                let text = std::fs::read_to_string(&path).map_err(|source| ClassError::Io {
                    path: path.clone(),
                    source,
                })?;
                let tm = parse_tm(&text).map_err(|source| ClassError::Machine { path, source })?;
                Ok(halting_class(tm))
            }
        }
    }
}

impl std::str::FromStr for ClassSpec {
    type Err = ClassError;

    /// `step`, `halting:<path>`, `goedel:<system>`, `goedel_prefix:<system>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ClassError::BadSpec(s.to_owned());
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let system = || rest.parse::<SystemSpec>().map_err(|_| bad());
        let spec = |construction, system, machine| ClassSpec {
            construction,
            system,
            machine,
        };
        match head {
            "step" if rest.is_empty() => Ok(spec(ConstructionTag::Step, None, None)),
            "halting" if !rest.is_empty() => {
                Ok(spec(ConstructionTag::Halting, None, Some(PathBuf::from(rest))))
            }
            "goedel" => Ok(spec(ConstructionTag::Goedel, Some(system()?), None)),
            "goedel_prefix" => Ok(spec(ConstructionTag::GoedelPrefix, Some(system()?), None)),
            _ => Err(bad()),
        }
    }
}
