use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GameError;
use crate::classes::FiniteClass;

/// Concept minimizing disagreements with `sample`; ties go to the smallest
/// witness index.
pub fn erm(fc: &FiniteClass, sample: &[(u64, bool)]) -> Result<usize, GameError> {
    if fc.is_empty() {
        return Err(GameError::EmptyClass);
    }
    // counts[pos][label]
    let mut counts = vec![[0usize; 2]; fc.domain().len()];
    for &(x, y) in sample {
        let pos = fc.position_of(x).ok_or(GameError::OutsideDomain(x))?;
        counts[pos][usize::from(y)] += 1;
    }
    Ok(erm_counts(fc, &counts))
}

fn erm_counts(fc: &FiniteClass, counts: &[[usize; 2]]) -> usize {
    (0..fc.len())
        .min_by_key(|&c| {
            let errors: usize = counts
                .iter()
                .enumerate()
                .map(|(p, n)| n[usize::from(!fc.value(c, p))])
                .sum();
            (errors, fc.witness(c))
        })
        .expect("nonempty class")
}

/// Finite distribution over the domain of a class, with integer weights
/// aligned to `fc.domain()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Distribution {
    pub weights: Vec<u64>,
}

impl Distribution {
    pub fn uniform(fc: &FiniteClass) -> Self {
        Distribution {
            weights: vec![1; fc.domain().len()],
        }
    }

    fn total(&self) -> u64 {
        self.weights.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub trials: usize,
    pub sample_sizes: Vec<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacRow {
    pub sample_size: usize,
    pub successes: usize,
    /// Fraction of trials whose true error was at most epsilon.
    pub frequency: f64,
    pub mean_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PacReport {
    pub epsilon: f64,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
    pub target_witness: u64,
    pub rows: Vec<PacRow>,
}

impl PacReport {
    pub fn row(&self, sample_size: usize) -> Option<&PacRow> {
        self.rows.iter().find(|r| r.sample_size == sample_size)
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<(), GameError> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(GameError::BadParameter { name, value })
    }
}

/// Realizable-case sample size `⌈(8/ε)(d·log₂(16/ε) + log₂(2/δ))⌉`.
pub fn sample_size_bound(vcdim: u32, epsilon: f64, delta: f64) -> Result<u64, GameError> {
    check_unit("epsilon", epsilon)?;
    check_unit("delta", delta)?;
    let m = (8.0 / epsilon) * (f64::from(vcdim) * (16.0 / epsilon).log2() + (2.0 / delta).log2());
    Ok(m.ceil() as u64)
}

/// For each sample size, draw `trials` samples labelled by `target`, fit ERM
/// and measure its true error under `dist`. Trial `t` at size index `s` uses
/// stream `s·2³² + t` of a ChaCha8 generator keyed by the master seed, so
/// results do not depend on thread scheduling.
pub fn pac_experiment(
    fc: &FiniteClass,
    target: usize,
    dist: &Distribution,
    config: &PacConfig,
) -> Result<PacReport, GameError> {
    check_unit("epsilon", config.epsilon)?;
    check_unit("delta", config.delta)?;
    if target >= fc.len() {
        return Err(GameError::NotInClass(target));
    }
    let d = fc.domain().len();
    if dist.weights.len() != d {
        return Err(GameError::BadDistribution(format!(
            "{} weights for a domain of {d} points",
            dist.weights.len()
        )));
    }
    let sampler = WeightedIndex::new(&dist.weights).map_err(|e| GameError::BadDistribution(e.to_string()))?;
    let total = dist.total() as f64;
    let labels: Vec<bool> = (0..d).map(|p| fc.value(target, p)).collect();
    let true_error = |h: usize| -> f64 {
        (0..d)
            .filter(|&p| fc.value(h, p) != labels[p])
            .map(|p| dist.weights[p])
            .sum::<u64>() as f64
            / total
    };
    let errors: Vec<f64> = (0..fc.len()).map(true_error).collect();

    let mut rows = Vec::with_capacity(config.sample_sizes.len());
    for (s, &m) in config.sample_sizes.iter().enumerate() {
        if m == 0 {
            return Err(GameError::ZeroSampleSize);
        }
        let trial_errors: Vec<f64> = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(((s as u64) << 32) | t as u64);
                let mut counts = vec![[0usize; 2]; d];
                for _ in 0..m {
                    let p = sampler.sample(&mut rng);
                    counts[p][usize::from(labels[p])] += 1;
                }
                errors[erm_counts(fc, &counts)]
            })
            .collect();
        let successes = trial_errors.iter().filter(|&&e| e <= config.epsilon).count();
        let n = config.trials.max(1) as f64;
        rows.push(PacRow {
            sample_size: m,
            successes,
            frequency: successes as f64 / n,
            mean_error: trial_errors.iter().sum::<f64>() / n,
        });
    }
    Ok(PacReport {
        epsilon: config.epsilon,
        delta: config.delta,
        trials: config.trials,
        seed: config.seed,
        target_witness: fc.witness(target),
        rows,
    })
}
