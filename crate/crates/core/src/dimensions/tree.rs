use serde::{Deserialize, Serialize};

use super::{DimensionError, LittlestoneTree};
use crate::classes::IndexedClass;
use crate::enumeration::index_of_support;

/// Largest tree depth a witness is built for (2^depth paths are checked).
pub const MAX_WITNESS_DEPTH: u32 = 20;

/// How the layers of a layer-uniform tree are labelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Labeling {
    /// Layer `k` is labelled by the point `k`.
    ByLayerIndex,
    /// Layer `k` is labelled by the `(k+1)`-th point that passes the class
    /// gate, searching points below `scan_limit`.
    ActiveIndices { scan_limit: u64 },
}

/// A tree for an indexed class together with, for every root-to-leaf path,
/// an index whose function answers the path's questions as the path does.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeWitness {
    pub tree: LittlestoneTree,
    /// Indexed by path number (answers read most significant first).
    pub path_indices: Vec<u64>,
}

impl TreeWitness {
    /// Re-evaluate every path against `class`.
    pub fn verify(&self, class: &IndexedClass) -> Result<(), DimensionError> {
        if self.path_indices.len() as u64 != 1u64 << self.tree.depth() {
            return Err(DimensionError::BadCertificate("wrong number of path indices".into()));
        }
        for (p, &m) in self.path_indices.iter().enumerate() {
            for (x, y) in self.tree.path_constraints(p as u64) {
                if class.eval(m, x) != y {
                    return Err(DimensionError::BadCertificate(format!(
                        "index {m} gives {} at {x} on path {p}",
                        u8::from(!y)
                    )));
                }
            }
        }
        Ok(())
    }
}

fn layer_points(class: &IndexedClass, depth: u32, labeling: Labeling) -> Result<Vec<u64>, DimensionError> {
    match labeling {
        Labeling::ByLayerIndex => Ok((0..u64::from(depth)).collect()),
        Labeling::ActiveIndices { scan_limit } => {
            if class.activity(0).is_none() {
                return Err(DimensionError::Unresolved(format!(
                    "class {} has no gate to scan",
                    class.name()
                )));
            }
            let points: Vec<u64> = (0..scan_limit)
                .filter(|&n| class.activity(n) == Some(true))
                .take(depth as usize)
                .collect();
            if points.len() < depth as usize {
                return Err(DimensionError::Unresolved(format!(
                    "found {} of {depth} active points below {scan_limit}",
                    points.len()
                )));
            }
            Ok(points)
        }
    }
}

/// Build a layer-uniform tree of the given depth and realize each path by
/// the sequence index that is 1 exactly where the path answers 1. Every path
/// is checked against the class; a failing path means no witness is returned.
pub fn tree_witness(class: &IndexedClass, depth: u32, labeling: Labeling) -> Result<TreeWitness, DimensionError> {
    if depth > MAX_WITNESS_DEPTH {
        return Err(DimensionError::Unresolved(format!(
            "depth {depth} exceeds the limit of {MAX_WITNESS_DEPTH}"
        )));
    }
    let layers = layer_points(class, depth, labeling)?;
    let tree = LittlestoneTree::layered(&layers);
    let mut path_indices = Vec::with_capacity(1 << depth);
    for p in 0..1u64 << depth {
        let constraints = tree.path_constraints(p);
        let ones: Vec<u64> = constraints.iter().filter(|c| c.1).map(|c| c.0).collect();
        let m = index_of_support(&ones)
            .map_err(|e| DimensionError::Unresolved(format!("path {p}: {e}")))?;
        if let Some(&(x, y)) = constraints.iter().find(|&&(x, y)| class.eval(m, x) != y) {
            return Err(DimensionError::Unresolved(format!(
                "path {p}: no index realizes label {} at point {x}",
                u8::from(y)
            )));
        }
        path_indices.push(m);
    }
    Ok(TreeWitness { tree, path_indices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{goedel_class, halting_class, step_class};
    use crate::formal_system::inconsistent_toy;
    use crate::turing::fixtures;

    #[test]
    fn looper_tree_by_layer() {
        let class = halting_class(fixtures::loop_machine());
        let w = tree_witness(&class, 4, Labeling::ByLayerIndex).unwrap();
        assert_eq!(w.tree.depth(), 4);
        assert_eq!(w.path_indices.len(), 16);
        assert_eq!(&w.tree.labels()[..3], &[0, 1, 1]);
        w.verify(&class).unwrap();
    }

    #[test]
    fn inconsistent_goedel_tree_by_active_indices() {
        let class = goedel_class(inconsistent_toy());
        let w = tree_witness(&class, 3, Labeling::ActiveIndices { scan_limit: 1000 }).unwrap();
        assert_eq!(w.tree, LittlestoneTree::layered(&[1, 2, 17]));
        w.verify(&class).unwrap();
    }

    #[test]
    fn halter_has_no_deeper_tree() {
        let class = halting_class(fixtures::chain_halter(3));
        assert!(tree_witness(&class, 3, Labeling::ByLayerIndex).is_ok());
        assert!(matches!(
            tree_witness(&class, 4, Labeling::ByLayerIndex),
            Err(DimensionError::Unresolved(_))
        ));
        assert!(matches!(
            tree_witness(&class, 4, Labeling::ActiveIndices { scan_limit: 100 }),
            Err(DimensionError::Unresolved(_))
        ));
    }

    #[test]
    fn ungated_classes_cannot_scan() {
        assert!(matches!(
            tree_witness(&step_class(), 1, Labeling::ActiveIndices { scan_limit: 10 }),
            Err(DimensionError::Unresolved(_))
        ));
    }

    #[test]
    fn tampered_witness_fails_verification() {
        let class = halting_class(fixtures::loop_machine());
        let mut w = tree_witness(&class, 2, Labeling::ByLayerIndex).unwrap();
        w.path_indices[3] = 0;
        assert!(w.verify(&class).is_err());
    }
}
