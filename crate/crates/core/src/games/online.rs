use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::GameError;
use crate::classes::FiniteClass;
use crate::dimensions::{LdimSolver, LittlestoneTree};

/// Standard optimal algorithm on a whole class: predict the label whose
/// restriction has the larger Littlestone dimension, 0 on ties.
pub fn soa_predict(version_space: &FiniteClass, x: u64) -> Result<bool, GameError> {
    let mut solver = LdimSolver::new(version_space);
    let all = solver.all();
    soa_choice(&mut solver, &all, x)
}

fn soa_choice(solver: &mut LdimSolver<'_>, vs: &FixedBitSet, x: u64) -> Result<bool, GameError> {
    if vs.is_clear() {
        return Err(GameError::EmptyVersionSpace);
    }
    let pos = solver.class().position_of(x).ok_or(GameError::OutsideDomain(x))?;
    let zero = solver.restrict(vs, pos, false);
    let one = solver.restrict(vs, pos, true);
    Ok(match (zero.is_clear(), one.is_clear()) {
        (true, _) => true,
        (_, true) => false,
        _ => solver.ldim(&one)? > solver.ldim(&zero)?,
    })
}

pub trait Learner {
    fn name(&self) -> String;
    fn predict(&mut self, x: u64) -> Result<bool, GameError>;
    fn observe(&mut self, x: u64, label: bool) -> Result<(), GameError>;
}

/// SOA with a running version space.
pub struct SoaLearner<'a> {
    solver: LdimSolver<'a>,
    version_space: FixedBitSet,
}

impl<'a> SoaLearner<'a> {
    pub fn new(fc: &'a FiniteClass) -> Self {
        let solver = LdimSolver::new(fc);
        let version_space = solver.all();
        SoaLearner { solver, version_space }
    }

    pub fn version_space_size(&self) -> usize {
        self.version_space.count_ones(..)
    }
}

impl Learner for SoaLearner<'_> {
    fn name(&self) -> String {
        "soa".into()
    }

    fn predict(&mut self, x: u64) -> Result<bool, GameError> {
        soa_choice(&mut self.solver, &self.version_space, x)
    }

    fn observe(&mut self, x: u64, label: bool) -> Result<(), GameError> {
        let pos = self.solver.class().position_of(x).ok_or(GameError::OutsideDomain(x))?;
        self.version_space = self.solver.restrict(&self.version_space, pos, label);
        if self.version_space.is_clear() {
            return Err(GameError::EmptyVersionSpace);
        }
        Ok(())
    }
}

pub struct ConstantLearner(pub bool);

impl Learner for ConstantLearner {
    fn name(&self) -> String {
        format!("constant-{}", u8::from(self.0))
    }

    fn predict(&mut self, _x: u64) -> Result<bool, GameError> {
        Ok(self.0)
    }

    fn observe(&mut self, _x: u64, _label: bool) -> Result<(), GameError> {
        Ok(())
    }
}

pub struct RandomLearner(ChaCha8Rng);

impl RandomLearner {
    pub fn new(seed: u64) -> Self {
        RandomLearner(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl Learner for RandomLearner {
    fn name(&self) -> String {
        "random".into()
    }

    fn predict(&mut self, _x: u64) -> Result<bool, GameError> {
        Ok(self.0.random())
    }

    fn observe(&mut self, _x: u64, _label: bool) -> Result<(), GameError> {
        Ok(())
    }
}

/// Revealed label plus the position of a concept consistent with the whole
/// history including this round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Answer {
    pub label: bool,
    pub witness: usize,
}

pub trait Adversary {
    fn name(&self) -> String;
    /// Next question, or `None` to end the game.
    fn question(&mut self, round: usize) -> Option<u64>;
    fn answer(&mut self, x: u64, prediction: bool) -> Result<Answer, GameError>;
}

/// Walks a Littlestone tree, always contradicting the learner. Once the tree
/// is used up it keeps asking domain points and answers with the concept
/// realizing the path it ended on.
pub struct TreeAdversary<'a> {
    fc: &'a FiniteClass,
    tree: LittlestoneTree,
    path_witnesses: Vec<usize>,
    answers: Vec<bool>,
    after: usize,
}

impl<'a> TreeAdversary<'a> {
    pub fn new(fc: &'a FiniteClass, tree: LittlestoneTree) -> Result<Self, GameError> {
        let path_witnesses = tree.verify(fc)?;
        Ok(TreeAdversary {
            fc,
            tree,
            path_witnesses,
            answers: Vec::new(),
            after: 0,
        })
    }

    fn exhausted(&self) -> bool {
        self.answers.len() >= self.tree.depth() as usize
    }

    /// Concept realizing some full path through the current prefix.
    fn witness_for_prefix(&self) -> usize {
        let k = self.answers.len();
        let depth = self.tree.depth() as usize;
        let prefix = self.answers.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        self.path_witnesses[prefix << (depth - k.min(depth))]
    }
}

impl Adversary for TreeAdversary<'_> {
    fn name(&self) -> String {
        "tree".into()
    }

    fn question(&mut self, _round: usize) -> Option<u64> {
        if self.exhausted() {
            let d = self.fc.domain();
            (!d.is_empty()).then(|| d[self.after % d.len()])
        } else {
            Some(self.tree.label(&self.answers))
        }
    }

    fn answer(&mut self, x: u64, prediction: bool) -> Result<Answer, GameError> {
        if self.exhausted() {
            self.after += 1;
            let witness = self.witness_for_prefix();
            let pos = self.fc.position_of(x).ok_or(GameError::OutsideDomain(x))?;
            return Ok(Answer {
                label: self.fc.value(witness, pos),
                witness,
            });
        }
        self.answers.push(!prediction);
        Ok(Answer {
            label: !prediction,
            witness: self.witness_for_prefix(),
        })
    }
}

/// Asks uniformly random points and answers with a uniformly random member
/// of the current version space.
pub struct RandomConsistentAdversary<'a> {
    fc: &'a FiniteClass,
    version_space: Vec<usize>,
    rng: ChaCha8Rng,
}

impl<'a> RandomConsistentAdversary<'a> {
    pub fn new(fc: &'a FiniteClass, seed: u64) -> Self {
        RandomConsistentAdversary {
            fc,
            version_space: (0..fc.len()).collect(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Adversary for RandomConsistentAdversary<'_> {
    fn name(&self) -> String {
        "random-consistent".into()
    }

    fn question(&mut self, _round: usize) -> Option<u64> {
        let d = self.fc.domain();
        (!d.is_empty()).then(|| d[self.rng.random_range(0..d.len())])
    }

    fn answer(&mut self, x: u64, _prediction: bool) -> Result<Answer, GameError> {
        let pos = self.fc.position_of(x).ok_or(GameError::OutsideDomain(x))?;
        let witness = self.version_space[self.rng.random_range(0..self.version_space.len())];
        let label = self.fc.value(witness, pos);
        self.version_space.retain(|&c| self.fc.value(c, pos) == label);
        Ok(Answer { label, witness })
    }
}

/// Asks the smallest point that still splits the version space and answers
/// against the prediction whenever some consistent concept allows it.
pub struct MajorityFlipAdversary<'a> {
    fc: &'a FiniteClass,
    version_space: Vec<usize>,
}

impl<'a> MajorityFlipAdversary<'a> {
    pub fn new(fc: &'a FiniteClass) -> Self {
        MajorityFlipAdversary {
            fc,
            version_space: (0..fc.len()).collect(),
        }
    }
}

impl Adversary for MajorityFlipAdversary<'_> {
    fn name(&self) -> String {
        "majority-flip".into()
    }

    fn question(&mut self, round: usize) -> Option<u64> {
        let d = self.fc.domain();
        if d.is_empty() {
            return None;
        }
        let splitting = (0..d.len()).find(|&p| {
            let ones = self.version_space.iter().filter(|&&c| self.fc.value(c, p)).count();
            ones > 0 && ones < self.version_space.len()
        });
        Some(d[splitting.unwrap_or(round % d.len())])
    }

    fn answer(&mut self, x: u64, prediction: bool) -> Result<Answer, GameError> {
        let pos = self.fc.position_of(x).ok_or(GameError::OutsideDomain(x))?;
        let flipped = !prediction;
        let label = if self.version_space.iter().any(|&c| self.fc.value(c, pos) == flipped) {
            flipped
        } else {
            prediction
        };
        self.version_space.retain(|&c| self.fc.value(c, pos) == label);
        Ok(Answer {
            label,
            witness: self.version_space[0],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub point: u64,
    pub prediction: bool,
    pub label: bool,
    /// Index of a concept consistent with every round up to this one.
    pub witness: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTranscript {
    pub learner: String,
    pub adversary: String,
    pub rounds: Vec<Round>,
    pub mistakes: usize,
}

impl GameTranscript {
    /// Re-check that every prefix is realized by its round's witness.
    pub fn verify(&self, fc: &FiniteClass) -> Result<(), GameError> {
        for (t, r) in self.rounds.iter().enumerate() {
            let c = fc
                .witnesses()
                .iter()
                .position(|&m| m == r.witness)
                .ok_or(GameError::ProtocolViolation { round: t + 1 })?;
            check_prefix(fc, &self.rounds[..=t], c, t + 1)?;
        }
        Ok(())
    }
}

fn check_prefix(fc: &FiniteClass, rounds: &[Round], concept: usize, round: usize) -> Result<(), GameError> {
    for r in rounds {
        let pos = fc.position_of(r.point).ok_or(GameError::OutsideDomain(r.point))?;
        if fc.value(concept, pos) != r.label {
            return Err(GameError::ProtocolViolation { round });
        }
    }
    Ok(())
}

/// Play up to `max_rounds` rounds. The adversary's witness is checked against
/// the full history every round.
pub fn play_online_game(
    fc: &FiniteClass,
    learner: &mut dyn Learner,
    adversary: &mut dyn Adversary,
    max_rounds: usize,
) -> Result<GameTranscript, GameError> {
    let mut rounds = Vec::new();
    let mut mistakes = 0;
    for t in 0..max_rounds {
        let Some(x) = adversary.question(t) else {
            break;
        };
        if fc.position_of(x).is_none() {
            return Err(GameError::OutsideDomain(x));
        }
        let prediction = learner.predict(x)?;
        let answer = adversary.answer(x, prediction)?;
        if answer.witness >= fc.len() {
            return Err(GameError::ProtocolViolation { round: t + 1 });
        }
        rounds.push(Round {
            point: x,
            prediction,
            label: answer.label,
            witness: fc.witness(answer.witness),
        });
        check_prefix(fc, &rounds, answer.witness, t + 1)?;
        mistakes += usize::from(prediction != answer.label);
        learner.observe(x, answer.label)?;
    }
    Ok(GameTranscript {
        learner: learner.name(),
        adversary: adversary.name(),
        rounds,
        mistakes,
    })
}
