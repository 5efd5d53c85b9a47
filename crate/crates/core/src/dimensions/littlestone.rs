use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::{columns, floor_log2, full_set, Certificate, DimensionError, DimensionReport, Measure, Meter, DEFAULT_STEP_BUDGET};
use crate::classes::FiniteClass;

/// Complete binary tree of domain points. The node reached by answering
/// `y₁ … y_k` sits at heap position `2^k − 1 + (y₁ … y_k)₂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LittlestoneTree {
    depth: u32,
    labels: Vec<u64>,
}

impl LittlestoneTree {
    pub fn new(depth: u32, labels: Vec<u64>) -> Result<Self, DimensionError> {
        if labels.len() as u64 != (1u64 << depth) - 1 {
            return Err(DimensionError::BadCertificate(format!(
                "depth {depth} tree needs {} labels, got {}",
                (1u64 << depth) - 1,
                labels.len()
            )));
        }
        Ok(LittlestoneTree { depth, labels })
    }

    /// Tree whose `k`-th layer is labelled `layers[k]` throughout.
    pub fn layered(layers: &[u64]) -> Self {
        let labels = layers
            .iter()
            .enumerate()
            .flat_map(|(k, &x)| std::iter::repeat_n(x, 1 << k))
            .collect();
        LittlestoneTree {
            depth: layers.len() as u32,
            labels,
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn node_index(prefix: &[bool]) -> usize {
        let value = prefix.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        (1usize << prefix.len()) - 1 + value
    }

    /// Point asked after the answers in `prefix`.
    pub fn label(&self, prefix: &[bool]) -> u64 {
        self.labels[Self::node_index(prefix)]
    }

    /// Answers along path number `p`, most significant answer first.
    pub fn path(&self, p: u64) -> Vec<bool> {
        (0..self.depth).rev().map(|i| (p >> i) & 1 == 1).collect()
    }

    /// `(point, answer)` pairs along path number `p`.
    pub fn path_constraints(&self, p: u64) -> Vec<(u64, bool)> {
        let answers = self.path(p);
        (0..answers.len())
            .map(|k| (self.label(&answers[..k]), answers[k]))
            .collect()
    }

    /// Check every root-to-leaf path against `fc`; returns, per path, the
    /// first concept consistent with it.
    pub fn verify(&self, fc: &FiniteClass) -> Result<Vec<usize>, DimensionError> {
        (0..1u64 << self.depth)
            .map(|p| {
                let constraints = self.path_constraints(p);
                let pos: Vec<(usize, bool)> = constraints
                    .iter()
                    .map(|&(x, y)| fc.position_of(x).map(|q| (q, y)).ok_or(DimensionError::NotInDomain(x)))
                    .collect::<Result<_, _>>()?;
                (0..fc.len())
                    .find(|&c| pos.iter().all(|&(q, y)| fc.value(c, q) == y))
                    .ok_or_else(|| {
                        DimensionError::BadCertificate(format!("path {constraints:?} is not realized"))
                    })
            })
            .collect()
    }
}

/// Memoized Littlestone dimension of subsets of one finite class.
///
/// `Ldim(V) = 0` for `|V| ≤ 1`, else the maximum over points `x` splitting
/// `V` of `1 + min(Ldim(V_{x→0}), Ldim(V_{x→1}))`.
pub struct LdimSolver<'a> {
    fc: &'a FiniteClass,
    cols: Vec<FixedBitSet>,
    memo: HashMap<FixedBitSet, u32>,
    meter: Meter,
}

impl<'a> LdimSolver<'a> {
    pub fn new(fc: &'a FiniteClass) -> Self {
        Self::with_budget(fc, DEFAULT_STEP_BUDGET)
    }

    pub fn with_budget(fc: &'a FiniteClass, budget: u64) -> Self {
        LdimSolver {
            fc,
            cols: columns(fc),
            memo: HashMap::new(),
            meter: Meter::new(Measure::Littlestone, budget),
        }
    }

    pub fn class(&self) -> &FiniteClass {
        self.fc
    }

    pub fn all(&self) -> FixedBitSet {
        full_set(self.fc.len())
    }

    /// Concepts of `set` labelling domain position `pos` with `label`.
    pub fn restrict(&self, set: &FixedBitSet, pos: usize, label: bool) -> FixedBitSet {
        let mut out = set.clone();
        if label {
            out.intersect_with(&self.cols[pos]);
        } else {
            out.difference_with(&self.cols[pos]);
        }
        out
    }

    pub fn ldim(&mut self, set: &FixedBitSet) -> Result<u32, DimensionError> {
        let count = set.count_ones(..);
        if count <= 1 {
            return Ok(0);
        }
        if let Some(&v) = self.memo.get(set) {
            return Ok(v);
        }
        self.meter.tick()?;
        let upper = floor_log2(count);
        let mut best = 0;
        for pos in 0..self.cols.len() {
            let ones = set.intersection_count(&self.cols[pos]);
            if ones == 0 || ones == count {
                continue;
            }
            // Neither branch can beat log₂ of its size.
            if floor_log2(ones.min(count - ones)) < best {
                continue;
            }
            let zero_side = self.restrict(set, pos, false);
            let a = self.ldim(&zero_side)?;
            if a < best {
                continue;
            }
            let one_side = self.restrict(set, pos, true);
            let b = self.ldim(&one_side)?;
            best = best.max(1 + a.min(b));
            if best == upper {
                break;
            }
        }
        self.memo.insert(set.clone(), best);
        Ok(best)
    }

    /// A depth-`depth` tree for `set`, choosing the smallest usable point at
    /// every node. Requires `depth ≤ ldim(set)`.
    pub fn tree(&mut self, set: &FixedBitSet, depth: u32) -> Result<LittlestoneTree, DimensionError> {
        let mut labels = vec![0u64; (1usize << depth) - 1];
        self.fill(set, depth, 0, 0, &mut labels)?;
        LittlestoneTree::new(depth, labels)
    }

    fn fill(
        &mut self,
        set: &FixedBitSet,
        depth: u32,
        level: u32,
        offset: usize,
        labels: &mut [u64],
    ) -> Result<(), DimensionError> {
        if depth == 0 {
            return Ok(());
        }
        for pos in 0..self.cols.len() {
            let zero_side = self.restrict(set, pos, false);
            let one_side = self.restrict(set, pos, true);
            if zero_side.is_clear() || one_side.is_clear() {
                continue;
            }
            if self.ldim(&zero_side)? + 1 >= depth && self.ldim(&one_side)? + 1 >= depth {
                labels[(1usize << level) - 1 + offset] = self.fc.domain()[pos];
                self.fill(&zero_side, depth - 1, level + 1, offset * 2, labels)?;
                self.fill(&one_side, depth - 1, level + 1, offset * 2 + 1, labels)?;
                return Ok(());
            }
        }
        Err(DimensionError::Unresolved(format!(
            "no tree of depth {depth} below level {level}"
        )))
    }
}

pub fn littlestone_dim(fc: &FiniteClass) -> Result<DimensionReport, DimensionError> {
    littlestone_dim_with_budget(fc, DEFAULT_STEP_BUDGET)
}

pub fn littlestone_dim_with_budget(fc: &FiniteClass, budget: u64) -> Result<DimensionReport, DimensionError> {
    if fc.is_empty() {
        return Err(DimensionError::EmptyClass);
    }
    let mut solver = LdimSolver::with_budget(fc, budget);
    let all = solver.all();
    let value = solver.ldim(&all)?;
    let tree = solver.tree(&all, value)?;
    Ok(DimensionReport {
        measure: Measure::Littlestone,
        value,
        class_size: fc.len(),
        window: fc.window(),
        certificate: Certificate::Tree { tree },
        saturation: None,
    })
}
