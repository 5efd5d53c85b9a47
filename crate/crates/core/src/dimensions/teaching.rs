use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::{Certificate, DimensionError, DimensionReport, Measure, Meter, DEFAULT_STEP_BUDGET};
use crate::classes::{Concept, FiniteClass};

/// Labelled examples that single out one concept of a finite class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeachingSet {
    /// Position of the target in the class.
    pub concept: usize,
    /// Index that realized the target.
    pub witness: u64,
    /// `(point, label)` pairs, ascending by point.
    pub examples: Vec<(u64, bool)>,
}

impl TeachingSet {
    pub fn size(&self) -> usize {
        self.examples.len()
    }

    /// The target agrees with every example and is the only concept that does.
    pub fn verify(&self, fc: &FiniteClass) -> Result<(), DimensionError> {
        if self.concept >= fc.len() {
            return Err(DimensionError::NotInClass(self.concept));
        }
        let pos: Vec<(usize, bool)> = self
            .examples
            .iter()
            .map(|&(x, y)| fc.position_of(x).map(|p| (p, y)).ok_or(DimensionError::NotInDomain(x)))
            .collect::<Result<_, _>>()?;
        let consistent: Vec<usize> = (0..fc.len())
            .filter(|&c| pos.iter().all(|&(p, y)| fc.value(c, p) == y))
            .collect();
        if consistent != [self.concept] {
            return Err(DimensionError::BadCertificate(format!(
                "examples {:?} are consistent with concepts {consistent:?}, not only {}",
                self.examples, self.concept
            )));
        }
        Ok(())
    }
}

/// Exact minimum hitting set by include/exclude search over positions in
/// ascending order, seeded with the greedy size as the initial cap. The
/// first minimum found is the lexicographically smallest one.
struct HittingSearch<'a> {
    sets: &'a [FixedBitSet],
    max_elem: Vec<usize>,
    universe: usize,
    /// Largest size still worth finding; `None` once nothing smaller exists.
    cap: Option<usize>,
    best: Option<Vec<usize>>,
    meter: &'a mut Meter,
}

impl HittingSearch<'_> {
    fn lower_bound(&self, unhit: &[usize], from: usize) -> usize {
        let mut used = FixedBitSet::with_capacity(self.universe);
        let mut count = 0;
        for &s in unhit {
            let mut rest = self.sets[s].clone();
            rest.remove_range(..from);
            if rest.is_disjoint(&used) {
                used.union_with(&rest);
                count += 1;
            }
        }
        count
    }

    fn dfs(&mut self, pos: usize, chosen: &mut Vec<usize>, unhit: &[usize]) -> Result<(), DimensionError> {
        self.meter.tick()?;
        let Some(cap) = self.cap else {
            return Ok(());
        };
        if unhit.is_empty() {
            if chosen.len() <= cap {
                self.best = Some(chosen.clone());
                self.cap = chosen.len().checked_sub(1);
            }
            return Ok(());
        }
        if pos >= self.universe || chosen.len() + self.lower_bound(unhit, pos) > cap {
            return Ok(());
        }
        let (hit, missed): (Vec<usize>, Vec<usize>) = unhit.iter().partition(|&&s| self.sets[s].contains(pos));
        if !hit.is_empty() {
            chosen.push(pos);
            self.dfs(pos + 1, chosen, &missed)?;
            chosen.pop();
        }
        if unhit.iter().all(|&s| self.max_elem[s] > pos) {
            self.dfs(pos + 1, chosen, unhit)?;
        }
        Ok(())
    }
}

fn greedy_hitting_size(sets: &[FixedBitSet], universe: usize) -> usize {
    let mut unhit: Vec<usize> = (0..sets.len()).collect();
    let mut size = 0;
    while !unhit.is_empty() {
        let best = (0..universe)
            .max_by_key(|&p| (unhit.iter().filter(|&&s| sets[s].contains(p)).count(), std::cmp::Reverse(p)))
            .expect("nonempty universe when sets are unhit");
        unhit.retain(|&s| !sets[s].contains(best));
        size += 1;
    }
    size
}

fn min_teaching_set(fc: &FiniteClass, concept: usize, meter: &mut Meter) -> Result<TeachingSet, DimensionError> {
    if concept >= fc.len() {
        return Err(DimensionError::NotInClass(concept));
    }
    let d = fc.domain().len();
    let sets: Vec<FixedBitSet> = (0..fc.len())
        .filter(|&c| c != concept)
        .map(|c| {
            let mut s = FixedBitSet::with_capacity(d);
            for p in 0..d {
                if fc.value(c, p) != fc.value(concept, p) {
                    s.insert(p);
                }
            }
            s
        })
        .collect();
    let max_elem = sets
        .iter()
        .map(|s| s.ones().next_back().expect("distinct concepts disagree somewhere"))
        .collect();
    let greedy = greedy_hitting_size(&sets, d);
    let mut search = HittingSearch {
        sets: &sets,
        max_elem,
        universe: d,
        cap: Some(greedy),
        best: None,
        meter,
    };
    let all: Vec<usize> = (0..sets.len()).collect();
    search.dfs(0, &mut Vec::new(), &all)?;
    let chosen = search.best.expect("the greedy size is attainable");
    Ok(TeachingSet {
        concept,
        witness: fc.witness(concept),
        examples: chosen
            .into_iter()
            .map(|p| (fc.domain()[p], fc.value(concept, p)))
            .collect(),
    })
}

/// A minimum-cardinality teaching set for the concept at position `concept`.
pub fn teaching_set(fc: &FiniteClass, concept: usize) -> Result<TeachingSet, DimensionError> {
    let mut meter = Meter::new(Measure::Teaching, DEFAULT_STEP_BUDGET);
    min_teaching_set(fc, concept, &mut meter)
}

pub fn teaching_dim(fc: &FiniteClass) -> Result<DimensionReport, DimensionError> {
    teaching_dim_with_budget(fc, DEFAULT_STEP_BUDGET)
}

/// Largest minimum teaching set over all concepts; the budget is shared.
pub fn teaching_dim_with_budget(fc: &FiniteClass, budget: u64) -> Result<DimensionReport, DimensionError> {
    if fc.is_empty() {
        return Err(DimensionError::EmptyClass);
    }
    let mut meter = Meter::new(Measure::Teaching, budget);
    let sets = (0..fc.len())
        .map(|c| min_teaching_set(fc, c, &mut meter))
        .collect::<Result<Vec<_>, _>>()?;
    let value = sets.iter().map(TeachingSet::size).max().unwrap_or(0) as u32;
    Ok(DimensionReport {
        measure: Measure::Teaching,
        value,
        class_size: fc.len(),
        window: fc.window(),
        certificate: Certificate::TeachingSets { sets },
        saturation: None,
    })
}

/// Given finitely many zero-labelled points, the threshold at one past the
/// largest of them: it fits the sample and is not the zero function, so no
/// finite sample teaches the zero function among thresholds.
pub fn escape_witness(sample: &[(u64, bool)]) -> Result<Concept, DimensionError> {
    if let Some(&(x, _)) = sample.iter().find(|&&(_, y)| y) {
        return Err(DimensionError::NonZeroLabel(x));
    }
    let largest = sample.iter().map(|&(x, _)| x).max().ok_or(DimensionError::EmptySample)?;
    Ok(Concept::Threshold(largest + 1))
}
