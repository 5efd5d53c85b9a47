//! Exact VC, Littlestone and teaching dimensions of finite classes, with
//! certificates that can be re-checked against the class.

mod littlestone;
mod scan;
mod teaching;
mod tree;
mod vc;

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::{ClassError, FiniteClass, Window};

pub use littlestone::{littlestone_dim, littlestone_dim_with_budget, LdimSolver, LittlestoneTree};
pub use scan::{closed_form_value, saturation_scan, ScanEntry, ScanReport};
pub use teaching::{escape_witness, teaching_dim, teaching_dim_with_budget, teaching_set, TeachingSet};
pub use tree::{tree_witness, Labeling, TreeWitness};
pub use vc::{is_shattered, vc_dim, vc_dim_with_budget};

/// Default cap on elementary steps (subset checks, recursion nodes, search
/// nodes) for one dimension computation.
pub const DEFAULT_STEP_BUDGET: u64 = 50_000_000;

#[derive(Debug, Error)]
pub enum DimensionError {
    #[error("{measure} computation exceeded its budget of {budget} steps")]
    BudgetExceeded { measure: Measure, budget: u64 },
    #[error("point {0} is not in the class domain")]
    NotInDomain(u64),
    #[error("concept {0} is not in the class")]
    NotInClass(usize),
    #[error("class is empty")]
    EmptyClass,
    #[error("escape witness needs a nonempty sample")]
    EmptySample,
    #[error("escape witness needs zero labels, but point {0} is labelled 1")]
    NonZeroLabel(u64),
    #[error("no tree witness: {0}")]
    Unresolved(String),
    #[error("certificate rejected: {0}")]
    BadCertificate(String),
    #[error("schedule must be nondecreasing in both N and M")]
    BadSchedule,
    #[error(transparent)]
    Class(#[from] ClassError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Vc,
    Littlestone,
    Teaching,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Vc, Measure::Littlestone, Measure::Teaching];
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::Vc => "vc",
            Measure::Littlestone => "littlestone",
            Measure::Teaching => "teaching",
        })
    }
}

impl std::str::FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "vc" => Ok(Measure::Vc),
            "littlestone" | "ldim" => Ok(Measure::Littlestone),
            "teaching" | "tdim" => Ok(Measure::Teaching),
            _ => Err(format!("unknown measure `{s}` (vc, littlestone, teaching)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    ShatteredSet { points: Vec<u64> },
    Tree { tree: LittlestoneTree },
    TeachingSets { sets: Vec<TeachingSet> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub measure: Measure,
    pub value: u32,
    pub class_size: usize,
    pub window: Option<Window>,
    pub certificate: Certificate,
    /// Set by [`saturation_scan`]; `None` for a single computation.
    pub saturation: Option<bool>,
}

impl DimensionReport {
    /// Re-check the certificate against `fc` from scratch.
    pub fn verify(&self, fc: &FiniteClass) -> Result<(), DimensionError> {
        let reject = |msg: String| Err(DimensionError::BadCertificate(msg));
        match &self.certificate {
            Certificate::ShatteredSet { points } => {
                if points.len() != self.value as usize {
                    return reject(format!("{} points for value {}", points.len(), self.value));
                }
                if !is_shattered(fc, points)? {
                    return reject(format!("{points:?} is not shattered"));
                }
            }
            Certificate::Tree { tree } => {
                if tree.depth() != self.value {
                    return reject(format!("tree depth {} for value {}", tree.depth(), self.value));
                }
                tree.verify(fc)?;
            }
            Certificate::TeachingSets { sets } => {
                if sets.len() != fc.len() {
                    return reject(format!("{} teaching sets for {} concepts", sets.len(), fc.len()));
                }
                for s in sets {
                    s.verify(fc)?;
                }
                let worst = sets.iter().map(|s| s.examples.len()).max().unwrap_or(0);
                if worst != self.value as usize {
                    return reject(format!("largest teaching set {worst} for value {}", self.value));
                }
            }
        }
        Ok(())
    }
}

/// Compute one measure with the default step budget.
pub fn compute(fc: &FiniteClass, measure: Measure) -> Result<DimensionReport, DimensionError> {
    compute_with_budget(fc, measure, DEFAULT_STEP_BUDGET)
}

pub fn compute_with_budget(
    fc: &FiniteClass,
    measure: Measure,
    budget: u64,
) -> Result<DimensionReport, DimensionError> {
    match measure {
        Measure::Vc => vc_dim_with_budget(fc, budget),
        Measure::Littlestone => littlestone_dim_with_budget(fc, budget),
        Measure::Teaching => teaching_dim_with_budget(fc, budget),
    }
}

/// Counts elementary steps against a limit.
pub(crate) struct Meter {
    measure: Measure,
    used: u64,
    budget: u64,
}

impl Meter {
    pub(crate) fn new(measure: Measure, budget: u64) -> Self {
        Meter {
            measure,
            used: 0,
            budget,
        }
    }

    #[inline]
    pub(crate) fn tick(&mut self) -> Result<(), DimensionError> {
        self.used += 1;
        if self.used > self.budget {
            Err(DimensionError::BudgetExceeded {
                measure: self.measure,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }
}

/// For each domain position, the set of concepts taking value 1 there.
pub(crate) fn columns(fc: &FiniteClass) -> Vec<FixedBitSet> {
    (0..fc.domain().len())
        .map(|pos| {
            let mut col = FixedBitSet::with_capacity(fc.len());
            for c in 0..fc.len() {
                if fc.value(c, pos) {
                    col.insert(c);
                }
            }
            col
        })
        .collect()
}

pub(crate) fn full_set(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

pub(crate) fn floor_log2(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        usize::BITS - 1 - n.leading_zeros()
    }
}

pub(crate) fn positions(fc: &FiniteClass, points: &[u64]) -> Result<Vec<usize>, DimensionError> {
    points
        .iter()
        .map(|&p| fc.position_of(p).ok_or(DimensionError::NotInDomain(p)))
        .collect()
}
