use std::collections::HashSet;

use itertools::Itertools;

use super::{floor_log2, positions, Certificate, DimensionError, DimensionReport, Measure, Meter, DEFAULT_STEP_BUDGET};
use crate::classes::FiniteClass;

fn shatters_positions(fc: &FiniteClass, pos: &[usize]) -> bool {
    if pos.len() >= 64 || fc.len() < (1usize << pos.len().min(63)) {
        return false;
    }
    let patterns: HashSet<u64> = (0..fc.len())
        .map(|c| {
            pos.iter()
                .enumerate()
                .fold(0u64, |acc, (i, &p)| acc | (u64::from(fc.value(c, p)) << i))
        })
        .collect();
    patterns.len() == 1 << pos.len()
}

/// Whether every labelling of `subset` is realized by some concept.
pub fn is_shattered(fc: &FiniteClass, subset: &[u64]) -> Result<bool, DimensionError> {
    let mut pos = positions(fc, subset)?;
    pos.sort_unstable();
    pos.dedup();
    Ok(!fc.is_empty() && shatters_positions(fc, &pos))
}

pub fn vc_dim(fc: &FiniteClass) -> Result<DimensionReport, DimensionError> {
    vc_dim_with_budget(fc, DEFAULT_STEP_BUDGET)
}

/// Exhaustive search, largest size first. A class of `c` concepts cannot
/// shatter more than `⌊log₂ c⌋` points, which caps the starting size. The
/// certificate is the lexicographically smallest maximum shattered set.
pub fn vc_dim_with_budget(fc: &FiniteClass, budget: u64) -> Result<DimensionReport, DimensionError> {
    if fc.is_empty() {
        return Err(DimensionError::EmptyClass);
    }
    let mut meter = Meter::new(Measure::Vc, budget);
    let d = fc.domain().len();
    let top = (floor_log2(fc.len()) as usize).min(d);
    for k in (0..=top).rev() {
        for pos in (0..d).combinations(k) {
            meter.tick()?;
            if shatters_positions(fc, &pos) {
                return Ok(DimensionReport {
                    measure: Measure::Vc,
                    value: k as u32,
                    class_size: fc.len(),
                    window: fc.window(),
                    certificate: Certificate::ShatteredSet {
                        points: pos.iter().map(|&p| fc.domain()[p]).collect(),
                    },
                    saturation: None,
                });
            }
        }
    }
    unreachable!("the empty set is shattered by a nonempty class")
}
