use serde::{Deserialize, Serialize};

use super::{compute_with_budget, DimensionError, DimensionReport, Measure};
use crate::classes::{materialize_with_budget, IndexedClass, Provenance, Window};
use crate::turing::HaltProbe;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub window: Window,
    pub value: u32,
    pub class_size: usize,
}

/// Window values of one measure across a schedule. The values are lower
/// bounds for the infinite class; `stabilized` is evidence, not proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub class: String,
    pub measure: Measure,
    pub entries: Vec<ScanEntry>,
    /// The last three windows agree.
    pub stabilized: bool,
    /// Every window in the schedule was computed.
    pub complete: bool,
    /// Why the scan stopped early, if it did.
    pub stopped: Option<String>,
    /// Exact infinite-class value where one is known in closed form: a
    /// halting class whose machine was seen to halt after `K` steps has all
    /// three measures equal to `K`.
    pub closed_form: Option<u64>,
    /// Full report for the last computed window.
    pub last: Option<DimensionReport>,
}

impl ScanReport {
    pub fn values(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.value).collect()
    }
}

/// Closed-form value of all three measures for a halting class whose machine
/// halts within `step_limit` steps.
pub fn closed_form_value(class: &IndexedClass, step_limit: u64) -> Option<u64> {
    match class.provenance() {
        Provenance::Halting => {
            let tm = class.machine()?.clone();
            HaltProbe::new(tm).halted_at(step_limit)
        }
        _ => None,
    }
}

/// Materialize and measure `class` on each window of a nondecreasing
/// schedule. A budget failure ends the scan with a partial report.
pub fn saturation_scan(
    class: &IndexedClass,
    measure: Measure,
    schedule: &[Window],
    eval_budget: u64,
    step_budget: u64,
) -> Result<ScanReport, DimensionError> {
    if schedule
        .windows(2)
        .any(|w| w[1].domain_max < w[0].domain_max || w[1].index_count < w[0].index_count)
    {
        return Err(DimensionError::BadSchedule);
    }
    let mut entries = Vec::new();
    let mut stopped = None;
    let mut last = None;
    for &window in schedule {
        let outcome = materialize_with_budget(class, window, eval_budget)
            .map_err(DimensionError::from)
            .and_then(|fc| compute_with_budget(&fc, measure, step_budget));
        match outcome {
            Ok(report) => {
                entries.push(ScanEntry {
                    window,
                    value: report.value,
                    class_size: report.class_size,
                });
                last = Some(report);
            }
            Err(e) => {
                stopped = Some(format!("{window}: {e}"));
                break;
            }
        }
    }
    let stabilized = entries.len() >= 3 && entries[entries.len() - 3..].windows(2).all(|w| w[0].value == w[1].value);
    if let Some(r) = last.as_mut() {
        r.saturation = Some(stabilized);
    }
    Ok(ScanReport {
        class: class.name().to_owned(),
        measure,
        complete: stopped.is_none(),
        stabilized,
        stopped,
        entries,
        closed_form: closed_form_value(class, 1 << 20),
        last,
    })
}
