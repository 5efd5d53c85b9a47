#![allow(dead_code)]

pub mod oracle;

use learncomp::FiniteClass;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random classes with 1..=6 points and 1..=12 distinct concepts.
pub fn random_classes(count: usize, seed: u64) -> Vec<FiniteClass> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.random_range(1..=6usize);
            let wanted = rng.random_range(1..=12usize).min(1 << d);
            let mut rows: Vec<Vec<bool>> = Vec::new();
            while rows.len() < wanted {
                let r: Vec<bool> = (0..d).map(|_| rng.random()).collect();
                if !rows.contains(&r) {
                    rows.push(r);
                }
            }
            FiniteClass::from_rows((0..d as u64).collect(), rows).unwrap()
        })
        .collect()
}
