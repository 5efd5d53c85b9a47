//! Online mistake-bound games and PAC sampling experiments on finite classes.

mod online;
mod pac;

pub use online::{
    play_online_game, soa_predict, Adversary, Answer, ConstantLearner, GameTranscript, Learner,
    MajorityFlipAdversary, RandomConsistentAdversary, RandomLearner, Round, SoaLearner, TreeAdversary,
};
pub use pac::{erm, pac_experiment, sample_size_bound, Distribution, PacConfig, PacReport, PacRow};

use thiserror::Error;

use crate::dimensions::DimensionError;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("empty version space: the adversary's history is not realizable")]
    EmptyVersionSpace,
    #[error("protocol violation in round {round}: history is not realized by the witness")]
    ProtocolViolation { round: usize },
    #[error("point {0} is outside the class domain")]
    OutsideDomain(u64),
    #[error("concept position {0} is not in the class")]
    NotInClass(usize),
    #[error("empty class")]
    EmptyClass,
    #[error("{name} must lie strictly between 0 and 1, got {value}")]
    BadParameter { name: &'static str, value: f64 },
    #[error("invalid distribution: {0}")]
    BadDistribution(String),
    #[error("sample size 0 is not allowed")]
    ZeroSampleSize,
    #[error(transparent)]
    Dimension(#[from] DimensionError),
}
