//! Primitive-recursive encodings used to index every class construction.
//!
//! Two enumerations are provided:
//!
//! * the Cantor pairing bijection `ℕ × ℕ → ℕ` and its inverse, used to walk
//!   all pairs of theorem indices of a formal system;
//! * the enumeration of compactly supported binary sequences, where the index
//!   `m` stands for the sequence whose `n`-th term is bit `n` of `m`
//!   (little-endian, i.e. the coefficient of `2ⁿ`).

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("pair({i}, {j}) does not fit in 64 bits")]
    PairOverflow { i: u64, j: u64 },
    #[error("bit pattern of length {0} has no 64-bit index")]
    PatternTooLong(usize),
}

/// Cantor code `(i + j)(i + j + 1) / 2 + j`.
pub fn pair(i: u64, j: u64) -> Result<u64, EnumerationError> {
    let overflow = EnumerationError::PairOverflow { i, j };
    let w = i.checked_add(j).ok_or(overflow)?;
    // w(w + 1) is always even, so halve whichever factor is even first.
    let (a, b) = if w % 2 == 0 { (w / 2, w + 1) } else { (w, w.div_ceil(2)) };
    a.checked_mul(b)
        .and_then(|t| t.checked_add(j))
        .ok_or(overflow)
}

/// Inverse of [`pair`]: returns `(i, j)` with `pair(i, j) == n`.
pub fn unpair(n: u64) -> (u64, u64) {
    // w is the diagonal index: the largest w with w(w+1)/2 <= n.
    let disc = 8 * u128::from(n) + 1;
    let w = ((disc.isqrt() - 1) / 2) as u64;
    let t = (u128::from(w) * u128::from(w + 1) / 2) as u64;
    let j = n - t;
    (w - j, j)
}

/// Term `n` of the compactly supported sequence with index `m`.
#[inline]
pub fn seq_bit(m: u64, n: u64) -> bool {
    n < 64 && (m >> n) & 1 == 1
}

/// Support of the sequence with index `m`, ascending.
pub fn support(m: u64) -> Vec<u64> {
    (0..64).filter(|&n| seq_bit(m, n)).collect()
}

/// Index of the sequence that starts with `bits` and is zero afterwards.
pub fn index_of_pattern(bits: &[bool]) -> Result<u64, EnumerationError> {
    let last_one = bits.iter().rposition(|&b| b);
    match last_one {
        None => Ok(0),
        Some(p) if p >= 64 => Err(EnumerationError::PatternTooLong(bits.len())),
        Some(_) => Ok(bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .fold(0u64, |m, (n, _)| m | (1 << n))),
    }
}

/// Index of the sequence with value 1 exactly on `points`.
pub fn index_of_support(points: &[u64]) -> Result<u64, EnumerationError> {
    points.iter().try_fold(0u64, |m, &p| {
        if p >= 64 {
            Err(EnumerationError::PatternTooLong(p as usize + 1))
        } else {
            Ok(m | (1 << p))
        }
    })
}
