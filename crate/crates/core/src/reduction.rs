//! From a machine `M` to the code of its halting class, and from a
//! VC-finiteness decider to a halting decider.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::{halting_class, IndexedClass};
use crate::turing::{fixtures::Fixture, parse_tm, HaltProbe, RunResult, TuringError, TuringMachine};

pub const MAGIC: &[u8; 4] = b"HMC1";
pub const TAG_HALTING: u8 = 0x01;
const HEADER_LEN: usize = MAGIC.len() + 1 + 4;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("bad magic bytes, expected \"HMC1\"")]
    BadMagic,
    #[error("unknown construction tag {0:#04x}")]
    UnknownTag(u8),
    #[error("class code truncated: {0} bytes")]
    Truncated(usize),
    #[error("length prefix says {declared} bytes, found {found}")]
    LengthMismatch { declared: usize, found: usize },
    #[error("embedded machine is not valid UTF-8")]
    Utf8,
    #[error("embedded machine: {0}")]
    Machine(#[from] TuringError),
}

/// Self-describing code of a halting class:
/// `"HMC1" | tag | u32 big-endian length | canonical machine text`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassCode(Vec<u8>);

impl ClassCode {
    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self, ReductionError> {
        let code = ClassCode(bytes);
        code.machine_text()?;
        Ok(code)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Big-endian natural number of the bytes; the magic has a nonzero
    /// first byte, so this is injective.
    pub fn to_natural(&self) -> BigUint {
        BigUint::from_bytes_be(&self.0)
    }

    pub fn from_natural(n: &BigUint) -> Result<Self, ReductionError> {
        Self::from_bytes(n.to_bytes_be())
    }

    fn machine_text(&self) -> Result<&str, ReductionError> {
        let b = &self.0;
        if b.len() < HEADER_LEN {
            return Err(ReductionError::Truncated(b.len()));
        }
        if &b[..4] != MAGIC {
            return Err(ReductionError::BadMagic);
        }
        if b[4] != TAG_HALTING {
            return Err(ReductionError::UnknownTag(b[4]));
        }
        let declared = u32::from_be_bytes(b[5..9].try_into().expect("four bytes")) as usize;
        let body = &b[HEADER_LEN..];
        if body.len() != declared {
            return Err(ReductionError::LengthMismatch {
                declared,
                found: body.len(),
            });
        }
        std::str::from_utf8(body).map_err(|_| ReductionError::Utf8)
    }

    pub fn machine(&self) -> Result<TuringMachine, ReductionError> {
        Ok(parse_tm(self.machine_text()?)?)
    }

    pub fn decode(&self) -> Result<IndexedClass, ReductionError> {
        Ok(halting_class(self.machine()?))
    }
}

pub fn class_code(tm: &TuringMachine) -> ClassCode {
    let text = tm.to_canonical_text();
    let len = u32::try_from(text.len()).expect("machine text under 4 GiB");
    let mut bytes = Vec::with_capacity(HEADER_LEN + text.len());
    bytes.extend_from_slice(MAGIC);
    bytes.push(TAG_HALTING);
    bytes.extend_from_slice(&len.to_be_bytes());
    bytes.extend_from_slice(text.as_bytes());
    ClassCode(bytes)
}

/// A decider never claims an infinite dimension: it either reports a value
/// it has seen, or gives up at its budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DeciderVerdict {
    Finite { value: u64 },
    Unknown { budget: u64 },
}

/// Simulates the embedded machine for up to `budget` steps. A halt after
/// exactly `K` steps means the class has VC dimension `K`.
pub fn budgeted_vc_decider(code: &ClassCode, budget: u64) -> Result<DeciderVerdict, ReductionError> {
    let tm = code.machine()?;
    Ok(match HaltProbe::new(tm).halted_at(budget) {
        Some(k) => DeciderVerdict::Finite { value: k },
        None => DeciderVerdict::Unknown { budget },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum HaltingVerdict {
    Halts { vc_dim: u64 },
    NoAnswer,
}

impl std::fmt::Display for HaltingVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HaltingVerdict::Halts { vc_dim } => write!(f, "Halts (VCdim = {vc_dim})"),
            HaltingVerdict::NoAnswer => f.write_str("NoAnswer"),
        }
    }
}

/// `M` halts iff its halting class has finite VC dimension: code the class
/// and ask the decider.
pub fn halting_from_vc<E>(
    decider: impl FnOnce(&ClassCode) -> Result<DeciderVerdict, E>,
    tm: &TuringMachine,
) -> Result<HaltingVerdict, E> {
    Ok(match decider(&class_code(tm))? {
        DeciderVerdict::Finite { value } => HaltingVerdict::Halts { vc_dim: value },
        DeciderVerdict::Unknown { .. } => HaltingVerdict::NoAnswer,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementEntry {
    pub name: String,
    pub verdict: HaltingVerdict,
    pub direct: RunResult,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub budget: u64,
    pub entries: Vec<AgreementEntry>,
    pub halts: usize,
    pub no_answer: usize,
    pub disagreements: usize,
}

/// Run the pipeline with [`budgeted_vc_decider`] on every machine and
/// compare against direct simulation with the same budget.
pub fn agreement_check(suite: &[Fixture], budget: u64) -> AgreementReport {
    let entries: Vec<AgreementEntry> = suite
        .par_iter()
        .map(|f| {
            let verdict = halting_from_vc(|c| budgeted_vc_decider(c, budget), &f.machine)
                .expect("codes built from parsed machines decode");
            let direct = crate::turing::run_bounded(&f.machine, budget);
            let agrees = match (verdict, direct) {
                (HaltingVerdict::Halts { vc_dim }, RunResult::Halted { steps }) => vc_dim == steps,
                (HaltingVerdict::NoAnswer, RunResult::StillRunning { .. }) => true,
                _ => false,
            };
            AgreementEntry {
                name: f.name.clone(),
                verdict,
                direct,
                agrees,
            }
        })
        .collect();
    let halts = entries
        .iter()
        .filter(|e| matches!(e.verdict, HaltingVerdict::Halts { .. }))
        .count();
    AgreementReport {
        budget,
        halts,
        no_answer: entries.len() - halts,
        disagreements: entries.iter().filter(|e| !e.agrees).count(),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{materialize, Window};
    use crate::dimensions::{compute, Measure};
    use crate::turing::fixtures::{self, chain_halter, loop_machine};

    #[test]
    fn layout() {
        let tm = chain_halter(1);
        let code = class_code(&tm);
        let b = code.as_bytes();
        assert_eq!(&b[..5], b"HMC1\x01");
        let text = tm.to_canonical_text();
        assert_eq!(u32::from_be_bytes(b[5..9].try_into().unwrap()) as usize, text.len());
        assert_eq!(&b[9..], text.as_bytes());
        assert_eq!(class_code(&tm), code);
    }

    #[test]
    fn codes_are_injective_on_collection() {
        let all = fixtures::collection();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                assert_ne!(class_code(&a.machine), class_code(&b.machine), "{} {}", a.name, b.name);
            }
        }
    }

    #[test]
    fn decode_spot_checks() {
        for f in fixtures::suite() {
            let code = class_code(&f.machine);
            let back = ClassCode::from_natural(&code.to_natural()).unwrap();
            assert_eq!(back, code);
            let decoded = back.decode().unwrap();
            let direct = halting_class(f.machine.clone());
            for m in (0..200).step_by(7) {
                for n in (0..200).step_by(3) {
                    assert_eq!(decoded.eval(m, n), direct.eval(m, n), "{} m={m} n={n}", f.name);
                }
            }
        }
    }

    #[test]
    fn malformed_codes() {
        let good = class_code(&chain_halter(2)).as_bytes().to_vec();
        assert!(matches!(ClassCode::from_bytes(good[..6].to_vec()), Err(ReductionError::Truncated(6))));
        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(ClassCode::from_bytes(bad), Err(ReductionError::BadMagic)));
        let mut bad = good.clone();
        bad[4] = 7;
        assert!(matches!(ClassCode::from_bytes(bad), Err(ReductionError::UnknownTag(7))));
        let mut bad = good.clone();
        bad.push(b'\n');
        assert!(matches!(ClassCode::from_bytes(bad), Err(ReductionError::LengthMismatch { .. })));
        let mut bad = good;
        let n = bad.len();
        bad[n - 3] = b'?';
        assert!(matches!(ClassCode::from_bytes(bad).unwrap().machine(), Err(ReductionError::Machine(_))));
    }

    #[test]
    fn decider_examples() {
        let halt3 = class_code(&chain_halter(3));
        assert_eq!(budgeted_vc_decider(&halt3, 10).unwrap(), DeciderVerdict::Finite { value: 3 });
        assert_eq!(budgeted_vc_decider(&halt3, 2).unwrap(), DeciderVerdict::Unknown { budget: 2 });
        assert_eq!(
            budgeted_vc_decider(&class_code(&loop_machine()), 10_000).unwrap(),
            DeciderVerdict::Unknown { budget: 10_000 }
        );
    }

    #[test]
    fn pipeline_examples() {
        let decide = |c: &ClassCode| budgeted_vc_decider(c, 10);
        let v = halting_from_vc(decide, &chain_halter(3)).unwrap();
        assert_eq!(v, HaltingVerdict::Halts { vc_dim: 3 });
        assert_eq!(v.to_string(), "Halts (VCdim = 3)");
        let v = halting_from_vc(decide, &loop_machine()).unwrap();
        assert_eq!(v.to_string(), "NoAnswer");
        let failing = halting_from_vc(|_| Err("boom"), &loop_machine());
        assert_eq!(failing, Err("boom"));
    }

    #[test]
    fn finite_verdicts_match_window_dimensions() {
        for k in 1..=4 {
            let tm = chain_halter(k);
            let DeciderVerdict::Finite { value } = budgeted_vc_decider(&class_code(&tm), 100).unwrap() else {
                panic!("halter {k} not seen to halt");
            };
            let fc = materialize(&halting_class(tm), Window::saturating(k + 2)).unwrap();
            for m in Measure::ALL {
                assert_eq!(u64::from(compute(&fc, m).unwrap().value), value);
            }
        }
    }

    #[test]
    fn suite_agreement() {
        let suite = fixtures::suite();
        let r = agreement_check(&suite, 10_000);
        assert_eq!((r.halts, r.no_answer, r.disagreements), (10, 5, 0));
        assert!(agreement_check(&[], 10).entries.is_empty());
        for budget in 0..25 {
            let r = agreement_check(&suite, budget);
            assert_eq!(r.disagreements, 0);
            for (e, f) in r.entries.iter().zip(&suite) {
                if let HaltingVerdict::Halts { vc_dim } = e.verdict {
                    assert_eq!(Some(vc_dim), f.halts_at);
                }
            }
        }
    }
}
