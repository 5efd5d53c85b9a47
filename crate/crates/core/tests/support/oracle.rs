//! Brute-force references written directly from the definitions.

use learncomp::FiniteClass;

fn rows(fc: &FiniteClass) -> Vec<Vec<bool>> {
    (0..fc.len()).map(|c| fc.row(c).to_vec()).collect()
}

/// Largest subset (as a position mask) on which every labelling appears.
pub fn vc(fc: &FiniteClass) -> u32 {
    let d = fc.domain().len();
    let rows = rows(fc);
    let mut best = 0;
    for mask in 0u32..1 << d {
        let points: Vec<usize> = (0..d).filter(|&p| mask >> p & 1 == 1).collect();
        let mut seen = std::collections::HashSet::new();
        for r in &rows {
            seen.insert(points.iter().map(|&p| r[p]).collect::<Vec<_>>());
        }
        if seen.len() == 1 << points.len() {
            best = best.max(points.len() as u32);
        }
    }
    best
}

/// Whether `concepts` admits a mistake tree of the given depth.
fn has_tree(rows: &[Vec<bool>], concepts: &[usize], depth: u32) -> bool {
    if concepts.is_empty() {
        return false;
    }
    if depth == 0 {
        return true;
    }
    (0..rows[0].len()).any(|p| {
        let (ones, zeros): (Vec<usize>, Vec<usize>) = concepts.iter().partition(|&&c| rows[c][p]);
        has_tree(rows, &zeros, depth - 1) && has_tree(rows, &ones, depth - 1)
    })
}

pub fn ldim(fc: &FiniteClass) -> u32 {
    let rows = rows(fc);
    let all: Vec<usize> = (0..rows.len()).collect();
    let mut d = 0;
    while has_tree(&rows, &all, d + 1) {
        d += 1;
    }
    d
}

/// Size of the smallest point set whose labels single out `target`.
pub fn teaching_size(fc: &FiniteClass, target: usize) -> u32 {
    let d = fc.domain().len();
    let rows = rows(fc);
    (0u32..1 << d)
        .filter(|&mask| {
            (0..rows.len())
                .filter(|&c| (0..d).all(|p| mask >> p & 1 == 0 || rows[c][p] == rows[target][p]))
                .count()
                == 1
        })
        .map(u32::count_ones)
        .min()
        .expect("the full domain separates distinct concepts")
}

pub fn tdim(fc: &FiniteClass) -> u32 {
    (0..fc.len()).map(|c| teaching_size(fc, c)).max().unwrap_or(0)
}
