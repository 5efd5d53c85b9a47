//! Learnability measures of computably indexed concept classes: Turing
//! machines and toy formal systems as class generators, exact VC, Littlestone
//! and teaching dimensions on finite windows, online and PAC learning games,
//! and the halting-to-VC reduction pipeline.

pub mod classes;
pub mod dimensions;
pub mod enumeration;
pub mod formal_system;
pub mod games;
pub mod reduction;
pub mod turing;

pub use classes::{materialize, Concept, FiniteClass, IndexedClass, Window};
pub use dimensions::{compute, Certificate, DimensionError, DimensionReport, LittlestoneTree, Measure};
pub use formal_system::{FormalSystem, Statement};
pub use games::{GameTranscript, PacReport};
pub use reduction::{ClassCode, DeciderVerdict, HaltingVerdict};
pub use turing::{RunResult, TuringMachine};
