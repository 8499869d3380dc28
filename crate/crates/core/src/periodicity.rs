//! Detection, validation and refutation of (almost-)periodic structure in
//! g-value and outcome sequences.
//!
//! A certificate here is always a statement about a finite prefix, recorded
//! in `checked_prefix`: the tool verifies evidence, it does not prove
//! anything about the infinite sequence. Theorem-backed claims about whole
//! families live in the closed-form evaluators instead.

use serde_json::json;
use thiserror::Error;

use crate::engine::{EngineError, GameSpec, GrundyTable, Outcome};

#[derive(Debug, Error)]
pub enum PeriodicityError {
    #[error("prefix of length {len} is too short, need at least {need}")]
    PrefixTooShort { len: u64, need: u64 },
    #[error("the final {tail_reps} periods disagree at residue {residue}: period wrong or prefix too short")]
    InconsistentTail { tail_reps: u64, residue: u64 },
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("refutation needs a division move")]
    NoDivisionMove,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Claim that a sequence is periodic from index `preperiod` on, except on
/// the residues in `exceptions`, verified against a prefix of length
/// `checked_prefix`.
///
/// The validation predicate: for every `i` with `preperiod <= i` and
/// `i + period < checked_prefix`, if `i mod period` is not an exception
/// residue then `s[i] == s[i + period]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityCertificate {
    pub preperiod: u64,
    pub period: u64,
    /// Exception residues, sorted, each below `period`.
    pub exceptions: Vec<u64>,
    pub checked_prefix: u64,
}

impl PeriodicityCertificate {
    /// Number of exception columns.
    pub fn ell(&self) -> usize {
        self.exceptions.len()
    }

    /// `{"kind", "preperiod", "period", "exceptions", "checked_prefix"}`
    /// with kind `exact` when there are no exception columns.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kind": if self.exceptions.is_empty() { "exact" } else { "almost" },
            "preperiod": self.preperiod,
            "period": self.period,
            "exceptions": self.exceptions,
            "checked_prefix": self.checked_prefix,
        })
    }
}

/// Searches for the certificate minimizing `(ell, period, preperiod)`
/// lexicographically. Returns `None` when nothing with `ell <= ell_max` and
/// `period <= max_p` fits.
///
/// Every candidate must leave `min_reps` repetitions of the *largest*
/// candidate period after its preperiod, i.e. `len - q >= min_reps * max_p`.
/// Keeping the evidence window uniform across periods stops a tiny period
/// from winning the minimization by matching a few trailing elements.
pub fn detect<T: PartialEq>(
    seq: &[T],
    max_p: u64,
    ell_max: usize,
    min_reps: u64,
) -> Result<Option<PeriodicityCertificate>, PeriodicityError> {
    if max_p == 0 {
        return Err(PeriodicityError::ZeroPeriod);
    }
    let len = seq.len() as u64;
    let need = (min_reps + 1).saturating_mul(max_p);
    if len < need {
        return Err(PeriodicityError::PrefixTooShort { len, need });
    }
    let evidence = min_reps.saturating_mul(max_p);
    // Last mismatching index per residue column, for each candidate period.
    let mut last_mismatch: Vec<Vec<i64>> = Vec::with_capacity(max_p as usize);
    for p in 1..=max_p as usize {
        let mut lm = vec![-1i64; p];
        for i in 0..seq.len() - p {
            if seq[i] != seq[i + p] {
                lm[i % p] = i as i64;
            }
        }
        last_mismatch.push(lm);
    }
    for ell in 0..=ell_max {
        for p in 1..=max_p {
            if ell >= p as usize {
                continue;
            }
            let lm = &last_mismatch[p as usize - 1];
            let mut dirty: Vec<(i64, u64)> = lm
                .iter()
                .enumerate()
                .filter(|(_, &m)| m >= 0)
                .map(|(c, &m)| (m, c as u64))
                .collect();
            if dirty.len() < ell {
                // A smaller exception set already covers this period.
                continue;
            }
            dirty.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            let preperiod = match dirty.get(ell) {
                Some(&(m, _)) => (m + 1) as u64,
                None => 0,
            };
            if len - preperiod >= evidence {
                let mut exceptions: Vec<u64> = dirty[..ell].iter().map(|&(_, c)| c).collect();
                exceptions.sort_unstable();
                return Ok(Some(PeriodicityCertificate {
                    preperiod,
                    period: p,
                    exceptions,
                    checked_prefix: len,
                }));
            }
        }
    }
    Ok(None)
}

/// True iff the certificate's validation predicate holds over the whole
/// given prefix. Structurally bad certificates (zero period, exception
/// residues not below the period, or as many exceptions as columns) never
/// validate.
pub fn validate<T: PartialEq>(seq: &[T], cert: &PeriodicityCertificate) -> bool {
    let p = cert.period;
    if p == 0 || cert.exceptions.len() as u64 >= p {
        return false;
    }
    if cert.exceptions.iter().any(|&e| e >= p) {
        return false;
    }
    let p = p as usize;
    let len = seq.len();
    let start = cert.preperiod as usize;
    if start >= len {
        return true;
    }
    for i in start..len.saturating_sub(p) {
        if cert.exceptions.binary_search(&((i % p) as u64)).is_ok() {
            continue;
        }
        if seq[i] != seq[i + p] {
            return false;
        }
    }
    true
}

/// Census of a sequence against an assumed period: the periodic pattern is
/// inferred from the final `tail_reps` periods (which must be internally
/// consistent), and every earlier position disagreeing with it is reported
/// as an exception. The last exception closes the preperiod.
///
/// Exceptions are counted per residue class: several mismatches in one
/// column are one exception of the period, which is how the misère period
/// tables count them. The individual positions stay available.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionCensus<T> {
    pub period: u64,
    /// One value per residue, as inferred from the tail.
    pub pattern: Vec<T>,
    /// Indices whose value differs from the pattern, ascending.
    pub exception_positions: Vec<u64>,
    /// Distinct residues of the exception positions, ascending.
    pub exception_residues: Vec<u64>,
    /// One past the last exception, or 0 when the sequence is purely
    /// periodic over the whole prefix.
    pub preperiod_length: u64,
}

impl<T> ExceptionCensus<T> {
    /// Number of period columns carrying at least one exception.
    pub fn exception_count(&self) -> usize {
        self.exception_residues.len()
    }

    /// `{"period", "preperiod_length", "exception_count", "exception_positions"}`
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "period": self.period,
            "preperiod_length": self.preperiod_length,
            "exception_count": self.exception_count(),
            "exception_positions": self.exception_positions,
        })
    }
}

pub fn census<T: PartialEq + Clone>(
    seq: &[T],
    p: u64,
    tail_reps: u64,
) -> Result<ExceptionCensus<T>, PeriodicityError> {
    if p == 0 || tail_reps == 0 {
        return Err(PeriodicityError::ZeroPeriod);
    }
    let len = seq.len() as u64;
    let need = (tail_reps + 3).saturating_mul(p);
    if len < need {
        return Err(PeriodicityError::PrefixTooShort { len, need });
    }
    let p_us = p as usize;
    let window_start = seq.len() - (tail_reps * p) as usize;
    let mut pattern: Vec<Option<T>> = vec![None; p_us];
    for (i, v) in seq.iter().enumerate().skip(window_start) {
        let slot = &mut pattern[i % p_us];
        match slot {
            None => *slot = Some(v.clone()),
            Some(seen) if seen == v => {}
            Some(_) => {
                return Err(PeriodicityError::InconsistentTail {
                    tail_reps,
                    residue: (i % p_us) as u64,
                })
            }
        }
    }
    let pattern: Vec<T> = pattern.into_iter().map(|v| v.unwrap()).collect();
    let exception_positions: Vec<u64> = seq
        .iter()
        .enumerate()
        .filter(|(i, v)| **v != pattern[i % p_us])
        .map(|(i, _)| i as u64)
        .collect();
    let mut exception_residues: Vec<u64> = exception_positions.iter().map(|&i| i % p).collect();
    exception_residues.sort_unstable();
    exception_residues.dedup();
    let preperiod_length = exception_positions.last().map_or(0, |&last| last + 1);
    Ok(ExceptionCensus {
        period: p,
        pattern,
        exception_positions,
        exception_residues,
        preperiod_length,
    })
}

/// Oracle-verified counterexample to a claimed period of the g-value
/// sequence: the heap `n` and its multiple `d * n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefutationWitness {
    pub n: u64,
    pub scaled: u64,
    pub divisor: u64,
    pub grundy_n: u8,
    pub grundy_scaled: u8,
}

/// Refutes the claim that the g-sequence of `spec` is periodic with the
/// given preperiod and period. The witness is the smallest multiple of the
/// period at or past the preperiod (and at least 1), paired with its image
/// under the least divisor: the division move from `d*n` to `n` forces
/// their g-values apart, while `d*n - n` is a multiple of the period.
pub fn refute_grundy_period(
    spec: &GameSpec,
    preperiod: u64,
    period: u64,
    budget: u64,
) -> Result<RefutationWitness, PeriodicityError> {
    if period == 0 {
        return Err(PeriodicityError::ZeroPeriod);
    }
    let divisor = *spec
        .division_set()
        .first()
        .ok_or(PeriodicityError::NoDivisionMove)?;
    let base = preperiod.max(1);
    let k = base.div_ceil(period);
    let n = k
        .checked_mul(period)
        .ok_or(EngineError::LimitExceeded {
            requested: u64::MAX,
            budget,
        })?;
    let scaled = n.checked_mul(divisor).ok_or(EngineError::LimitExceeded {
        requested: u64::MAX,
        budget,
    })?;
    let table = GrundyTable::build(spec, scaled, budget)?;
    let witness = RefutationWitness {
        n,
        scaled,
        divisor,
        grundy_n: table.grundy(n),
        grundy_scaled: table.grundy(scaled),
    };
    debug_assert_ne!(witness.grundy_n, witness.grundy_scaled);
    Ok(witness)
}

/// One period of an outcome sequence as `N`/`P` characters, grouped in tens
/// the way the period tables print them.
pub fn period_string(seq: &[Outcome], cert: &PeriodicityCertificate) -> String {
    let start = cert.preperiod as usize;
    let p = cert.period as usize;
    let mut out = String::with_capacity(p + p / 10);
    for (i, o) in seq[start..start + p].iter().enumerate() {
        if i > 0 && i % 10 == 0 {
            out.push(' ');
        }
        out.push(match o {
            Outcome::N => 'N',
            Outcome::P => 'P',
        });
    }
    out
}
