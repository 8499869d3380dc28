//! Base-b digit utilities: trailing-zero counts and stripped values.
//!
//! Every closed-form characterization in this crate is phrased in terms of
//! the representation of a heap size in some base with its trailing zeros
//! deleted, so these helpers are on the hot path of the fast evaluators.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DigitError {
    #[error("base must be at least 2, got {0}")]
    BadBase(u64),
}

/// Digit-level profile of a number in a fixed base.
///
/// For `n > 0` the invariant `n == stripped * base^trailing_zeros` holds and
/// `base` does not divide `stripped`. For `n == 0` the profile is the
/// conventional `(trailing_zeros: 0, stripped: 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DigitProfile {
    pub n: u64,
    pub base: u64,
    /// Number of trailing zero digits of `n` written in `base`.
    pub trailing_zeros: u32,
    /// `n` with all trailing zero digits removed, i.e. `n / base^trailing_zeros`.
    pub stripped: u64,
    /// Number of digits equal to 1. Only the binary case is used by callers.
    pub one_digits: u32,
}

/// Computes the digit profile of `n` in base `b`.
pub fn profile(n: u64, b: u64) -> Result<DigitProfile, DigitError> {
    if b < 2 {
        return Err(DigitError::BadBase(b));
    }
    if n == 0 {
        return Ok(DigitProfile {
            n,
            base: b,
            trailing_zeros: 0,
            stripped: 0,
            one_digits: 0,
        });
    }
    if b == 2 {
        let trailing_zeros = n.trailing_zeros();
        return Ok(DigitProfile {
            n,
            base: 2,
            trailing_zeros,
            stripped: n >> trailing_zeros,
            one_digits: n.count_ones(),
        });
    }
    let mut stripped = n;
    let mut trailing_zeros = 0;
    while stripped % b == 0 {
        stripped /= b;
        trailing_zeros += 1;
    }
    let mut one_digits = 0;
    let mut rest = n;
    while rest > 0 {
        if rest % b == 1 {
            one_digits += 1;
        }
        rest /= b;
    }
    Ok(DigitProfile {
        n,
        base: b,
        trailing_zeros,
        stripped,
        one_digits,
    })
}

/// True iff `n` and `m` have the same base-`b` representation once trailing
/// zeros are deleted.
pub fn stripped_equal(n: u64, m: u64, b: u64) -> Result<bool, DigitError> {
    Ok(profile(n, b)?.stripped == profile(m, b)?.stripped)
}
