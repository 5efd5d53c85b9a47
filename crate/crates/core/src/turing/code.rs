use num_bigint::BigUint;

use super::{parse_tm, TuringError, TuringMachine};

/// Natural-number code of a machine: the big-endian integer whose bytes are
/// the canonical serialization. Injective, and equal machines get equal codes.
pub fn encode_tm(tm: &TuringMachine) -> BigUint {
    // Canonical text begins with `states:`, so there is no leading zero byte
    // to lose.
    BigUint::from_bytes_be(tm.to_canonical_text().as_bytes())
}

pub fn decode_tm(code: &BigUint) -> Result<TuringMachine, TuringError> {
    let bytes = code.to_bytes_be();
    let text = String::from_utf8(bytes).map_err(|e| TuringError::BadCode(e.to_string()))?;
    let tm = parse_tm(&text).map_err(|e| TuringError::BadCode(e.to_string()))?;
    if tm.to_canonical_text() != text {
        return Err(TuringError::BadCode("not in canonical form".into()));
    }
    Ok(tm)
}
