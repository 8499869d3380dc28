//! O(log n) evaluators for every solved game family, each bootstrapped from
//! and validated against the exact oracle.
//!
//! A [`FamilyEvaluator`] pairs a family tag with a small bootstrap: an
//! oracle-filled prefix of g-values below the family's preperiod, plus for
//! the divide-by-t family the set of base-t stripped values that steers the
//! exception column. Construction may run the oracle; the finished evaluator
//! is immutable and can be queried from any number of threads.
//!
//! Small-n prefixes are always filled by the oracle, never copied from
//! printed tables.

use thiserror::Error;

use crate::engine::{Convention, GameSpec, GrundyTable, Outcome, DEFAULT_TABLE_BUDGET};

/// Largest accepted range parameter for the `[1, t-1]` families. Keeps the
/// subtraction set and the stripped-value bootstrap at a sane size.
const MAX_RANGE_T: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("heap {n} is outside this evaluator's domain ({reason})")]
    OutsideDomain { n: u64, reason: &'static str },
    #[error("unsupported family parameters: {0}")]
    InvalidParameters(&'static str),
}

/// Which solved family an evaluator implements, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Classic Mark: subtract 1 or move to floor(n/2). Not an integral
    /// game; handled here only, never by the oracle.
    Mark,
    /// Subtract 1 or halve exactly.
    IMark12,
    /// Subtract 1..=t-1 or divide exactly by d (outcomes only).
    RangeOutcome { t: u64, d: u64 },
    /// Subtract 1..=t-1 or divide exactly by t.
    RangeDivT { t: u64 },
    /// Subtract 1..=t-1 or halve exactly, t >= 3.
    RangeDiv2 { t: u64 },
    /// Subtract a or 2a or halve exactly, full g-values (a in {2, 4}).
    A2a { a: u64 },
    /// Subtract a or 2a (a even) or halve exactly; g-values on odd heaps only.
    A2aOdd { a: u64 },
    /// Misère subtract 1..=t-1 with any divisor set avoiding 1 mod t.
    MisereRange { t: u64 },
    /// Misère subtract a or 2a or halve exactly (a = 2 or a odd).
    MisereA2a { a: u64 },
}

/// What part of the heap-size axis an evaluator can produce g-values for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrundyDomain {
    AllHeaps,
    OddHeapsOnly,
    Unavailable,
}

/// Per-parameter precomputation backing a [`FamilyEvaluator`].
#[derive(Debug, Clone, Default)]
pub struct BootstrapCache {
    /// Oracle g-values for heaps below the family's stable region.
    prefix: Vec<u8>,
    /// For the divide-by-t family: the stripped values of the heaps below
    /// t*t that are congruent to t-1 mod t. None of them has trailing
    /// base-t zeros.
    stripped_tminus1: Vec<u64>,
}

impl BootstrapCache {
    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn stripped_tminus1(&self) -> &[u64] {
        &self.stripped_tminus1
    }
}

/// A closed-form evaluator for one `(game, convention)` pair.
#[derive(Debug, Clone)]
pub struct FamilyEvaluator {
    kind: FamilyKind,
    bootstrap: BootstrapCache,
}

fn oracle_prefix(spec: &GameSpec, limit: u64) -> Vec<u8> {
    GrundyTable::build(spec, limit, DEFAULT_TABLE_BUDGET)
        .expect("bootstrap prefix fits any sane budget")
        .values()
        .to_vec()
}

fn range_spec(t: u64, d: u64) -> GameSpec {
    GameSpec::new((1..t).collect(), vec![d]).expect("range spec is valid")
}

impl FamilyEvaluator {
    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn bootstrap(&self) -> &BootstrapCache {
        &self.bootstrap
    }

    /// Classic Mark under normal play.
    pub fn mark() -> Self {
        FamilyEvaluator {
            kind: FamilyKind::Mark,
            bootstrap: BootstrapCache::default(),
        }
    }

    /// The game with subtraction set {1} and divisor set {2}.
    pub fn imark12() -> Self {
        let spec = GameSpec::new(vec![1], vec![2]).unwrap();
        FamilyEvaluator {
            kind: FamilyKind::IMark12,
            bootstrap: BootstrapCache {
                prefix: oracle_prefix(&spec, 3),
                stripped_tminus1: Vec::new(),
            },
        }
    }

    /// Outcome-only evaluator for subtraction range 1..=t-1 with divisor d,
    /// d not congruent to 1 mod t.
    pub fn range_outcome(t: u64, d: u64) -> Result<Self, FamilyError> {
        if t < 2 || t > MAX_RANGE_T {
            return Err(FamilyError::InvalidParameters("t must be in 2..=2^20"));
        }
        if d < 2 || d % t == 1 {
            return Err(FamilyError::InvalidParameters(
                "d must be at least 2 and not 1 mod t",
            ));
        }
        Ok(FamilyEvaluator {
            kind: FamilyKind::RangeOutcome { t, d },
            bootstrap: BootstrapCache::default(),
        })
    }

    /// g-value evaluator for subtraction range 1..=t-1 with divisor t.
    pub fn range_div_t(t: u64) -> Result<Self, FamilyError> {
        if t < 2 || t > MAX_RANGE_T {
            return Err(FamilyError::InvalidParameters("t must be in 2..=2^20"));
        }
        // Heaps below t*t congruent to t-1 mod t carry g = t-1; they have no
        // trailing base-t zeros, so they are their own stripped values.
        let stripped: Vec<u64> = (1..=t).map(|j| j * t - 1).collect();
        Ok(FamilyEvaluator {
            kind: FamilyKind::RangeDivT { t },
            bootstrap: BootstrapCache {
                prefix: Vec::new(),
                stripped_tminus1: stripped,
            },
        })
    }

    /// g-value evaluator for subtraction range 1..=t-1 with divisor 2, t >= 3.
    pub fn range_div2(t: u64) -> Result<Self, FamilyError> {
        if t < 3 || t > MAX_RANGE_T {
            return Err(FamilyError::InvalidParameters("t must be in 3..=2^20"));
        }
        let spec = range_spec(t, 2);
        // t = 3 stabilizes at heap 18 and its exception recursion needs the
        // three heaps after that; larger t stabilizes at 2t with g(2t) = t
        // as the halving base.
        let prefix_limit = if t == 3 { 20 } else { 2 * t };
        Ok(FamilyEvaluator {
            kind: FamilyKind::RangeDiv2 { t },
            bootstrap: BootstrapCache {
                prefix: oracle_prefix(&spec, prefix_limit),
                stripped_tminus1: Vec::new(),
            },
        })
    }

    /// Full g-value evaluator for subtraction set {a, 2a} with halving.
    /// Solved for a in {1, 2, 4}; a = 1 is the range game with t = 3 and is
    /// returned as such.
    pub fn a2a(a: u64) -> Result<Self, FamilyError> {
        match a {
            1 => Self::range_div2(3),
            2 | 4 => {
                let spec = GameSpec::new(vec![a, 2 * a], vec![2]).unwrap();
                let prefix_limit = if a == 2 { 10 } else { 16 };
                Ok(FamilyEvaluator {
                    kind: FamilyKind::A2a { a },
                    bootstrap: BootstrapCache {
                        prefix: oracle_prefix(&spec, prefix_limit),
                        stripped_tminus1: Vec::new(),
                    },
                })
            }
            _ => Err(FamilyError::InvalidParameters(
                "full g-values are only solved for a in {1, 2, 4}",
            )),
        }
    }

    /// Odd-heap g-value evaluator for subtraction set {a, 2a}, a even.
    pub fn a2a_odd(a: u64) -> Result<Self, FamilyError> {
        if a < 2 || a % 2 != 0 || a > u64::MAX / 3 {
            return Err(FamilyError::InvalidParameters(
                "odd-heap evaluation needs an even a",
            ));
        }
        Ok(FamilyEvaluator {
            kind: FamilyKind::A2aOdd { a },
            bootstrap: BootstrapCache::default(),
        })
    }

    /// Misère outcome evaluator for subtraction range 1..=t-1 with divisors
    /// all avoiding 1 mod t.
    pub fn misere_range(t: u64, divisors: &[u64]) -> Result<Self, FamilyError> {
        if t < 2 || t > MAX_RANGE_T {
            return Err(FamilyError::InvalidParameters("t must be in 2..=2^20"));
        }
        if divisors.is_empty() || divisors.iter().any(|&d| d < 2 || d % t == 1) {
            return Err(FamilyError::InvalidParameters(
                "divisors must be nonempty and none may be 1 mod t",
            ));
        }
        Ok(FamilyEvaluator {
            kind: FamilyKind::MisereRange { t },
            bootstrap: BootstrapCache::default(),
        })
    }

    /// Misère outcome evaluator for subtraction set {a, 2a} with halving,
    /// a = 2 or a odd.
    pub fn misere_a2a(a: u64) -> Result<Self, FamilyError> {
        if a == 0 || (a != 2 && a % 2 == 0) || a > u64::MAX / 3 {
            return Err(FamilyError::InvalidParameters(
                "misère outcomes are only solved for a = 2 or a odd",
            ));
        }
        Ok(FamilyEvaluator {
            kind: FamilyKind::MisereA2a { a },
            bootstrap: BootstrapCache::default(),
        })
    }

    pub fn grundy_domain(&self) -> GrundyDomain {
        match self.kind {
            FamilyKind::Mark
            | FamilyKind::IMark12
            | FamilyKind::RangeDivT { .. }
            | FamilyKind::RangeDiv2 { .. }
            | FamilyKind::A2a { .. } => GrundyDomain::AllHeaps,
            FamilyKind::A2aOdd { .. } => GrundyDomain::OddHeapsOnly,
            FamilyKind::RangeOutcome { .. }
            | FamilyKind::MisereRange { .. }
            | FamilyKind::MisereA2a { .. } => GrundyDomain::Unavailable,
        }
    }

    /// Exact g-value of a heap of `n` tokens in O(log n) digit operations.
    pub fn grundy(&self, n: u64) -> Result<u64, FamilyError> {
        match self.kind {
            FamilyKind::Mark => Ok(mark_grundy(n)),
            FamilyKind::IMark12 => Ok(self.imark12_grundy(n)),
            FamilyKind::RangeDivT { t } => Ok(self.div_t_grundy(t, n)),
            FamilyKind::RangeDiv2 { t } => Ok(self.div2_grundy(t, n)),
            FamilyKind::A2a { a } => Ok(self.a2a_grundy(a, n)),
            FamilyKind::A2aOdd { a } => {
                if n % 2 == 0 {
                    Err(FamilyError::OutsideDomain {
                        n,
                        reason: "only odd heaps are solved for this a",
                    })
                } else {
                    Ok(a2a_odd_grundy(a, n))
                }
            }
            FamilyKind::RangeOutcome { .. } => Err(FamilyError::OutsideDomain {
                n,
                reason: "outcome-only family",
            }),
            FamilyKind::MisereRange { .. } | FamilyKind::MisereA2a { .. } => {
                Err(FamilyError::OutsideDomain {
                    n,
                    reason: "misère play has no Sprague-Grundy values here",
                })
            }
        }
    }

    /// Outcome of a heap of `n` tokens under the evaluator's convention.
    pub fn outcome(&self, n: u64) -> Result<Outcome, FamilyError> {
        match self.kind {
            FamilyKind::Mark => Ok(mark_outcome(n)),
            FamilyKind::RangeOutcome { t, d } => {
                let (q, r) = (n / t, n % t);
                Ok(win_class((r == 0 && q < d) || (r == 1 && q >= d)))
            }
            FamilyKind::MisereRange { t } => Ok(win_class(n % t == 1)),
            FamilyKind::MisereA2a { a } => Ok(misere_a2a_outcome(a, n)),
            _ => Ok(win_class(self.grundy(n)? == 0)),
        }
    }

    /// Convention this evaluator answers for.
    pub fn convention(&self) -> Convention {
        match self.kind {
            FamilyKind::MisereRange { .. } | FamilyKind::MisereA2a { .. } => Convention::Misere,
            _ => Convention::Normal,
        }
    }

    fn imark12_grundy(&self, n: u64) -> u64 {
        if n < 4 {
            return self.bootstrap.prefix[n as usize] as u64;
        }
        if n % 2 == 1 {
            return 0;
        }
        // g = 2 iff the stripped binary value is 11 and the trailing-zero
        // count is odd, or the stripped value differs from 11 and the count
        // is even.
        let z = n.trailing_zeros();
        let stripped = n >> z;
        let two = if stripped == 3 {
            z % 2 == 1
        } else {
            z % 2 == 0
        };
        if two {
            2
        } else {
            1
        }
    }

    fn div_t_grundy(&self, t: u64, n: u64) -> u64 {
        let (q, r) = (n / t, n % t);
        if q < t {
            r
        } else if r == 1 {
            0
        } else if r > 1 {
            r - 1
        } else if q == t {
            t
        } else if self.div_t_is_tminus1(t, q) {
            t
        } else {
            t - 1
        }
    }

    /// Whether g(m) = t-1 in the divide-by-t game. Walking the base-t
    /// trailing zeros of m flips the answer once per digit: a heap qt in the
    /// exception column has g = t exactly when g(q) = t-1, and g = t-1
    /// otherwise; below t*t the value t-1 appears exactly on the heaps
    /// congruent to t-1, which form the bootstrapped stripped-value set.
    fn div_t_is_tminus1(&self, t: u64, m: u64) -> bool {
        let t2 = t * t;
        let mut m = m;
        let mut flip = false;
        loop {
            if m < t2 {
                let base = self.bootstrap.stripped_tminus1.binary_search(&m).is_ok();
                return base != flip;
            }
            if m == t2 || m % t != 0 {
                return flip;
            }
            m /= t;
            flip = !flip;
        }
    }

    fn div2_grundy(&self, t: u64, n: u64) -> u64 {
        if (n as usize) < self.bootstrap.prefix.len() {
            return self.bootstrap.prefix[n as usize] as u64;
        }
        let r = n % t;
        if t == 3 {
            match r {
                1 => 0,
                2 => 1,
                _ => self.div2_exception3(n / 3),
            }
        } else {
            match r {
                1 => 0,
                2 => 2,
                3 => 1,
                0 => self.div2_exception(t, n),
                _ => r - 1,
            }
        }
    }

    /// Exception column for t = 3, heaps 3q with q >= 7: g is 3 exactly when
    /// q is even and its stripped binary value is 1 or 101 with an even
    /// number of trailing zeros, or any other stripped value with an odd
    /// number.
    fn div2_exception3(&self, q: u64) -> u64 {
        if q % 2 == 1 {
            return 2;
        }
        let z = q.trailing_zeros();
        let stripped = q >> z;
        let three = if stripped == 1 || stripped == 5 {
            z % 2 == 0
        } else {
            z % 2 == 1
        };
        if three {
            3
        } else {
            2
        }
    }

    /// Exception column for t >= 4, heaps qt with q >= 3 (q = 2 sits in the
    /// bootstrap prefix). An odd heap has no halving move and lands on t-1;
    /// an even heap has g = t exactly when its half has g = t-1. Each level
    /// halves the heap, so the walk is O(log n).
    fn div2_exception(&self, t: u64, n: u64) -> u64 {
        if n % 2 == 1 {
            t - 1
        } else if self.div2_grundy(t, n / 2) == t - 1 {
            t
        } else {
            t - 1
        }
    }

    fn a2a_grundy(&self, a: u64, n: u64) -> u64 {
        if (n as usize) < self.bootstrap.prefix.len() {
            return self.bootstrap.prefix[n as usize] as u64;
        }
        if a == 2 {
            match n % 6 {
                1 | 4 => 0,
                2 | 3 => 1,
                5 => 2,
                _ => a2_exception(n / 6),
            }
        } else {
            match n % 12 {
                1 | 3 | 4 | 10 => 0,
                5..=8 => 1,
                2 | 9 | 11 => 2,
                // 12q with q >= 2: g = 3 exactly when q has an odd number of
                // trailing binary zeros.
                _ => {
                    if (n / 12).trailing_zeros() % 2 == 1 {
                        3
                    } else {
                        2
                    }
                }
            }
        }
    }
}

fn win_class(p: bool) -> Outcome {
    if p {
        Outcome::P
    } else {
        Outcome::N
    }
}

/// Exception column for {2, 4} with halving, heaps 6q with q >= 2: g is 3
/// exactly when q >= 4 is even and its stripped binary value is 1 with an
/// even number of trailing zeros, or differs from 1 with an odd number.
fn a2_exception(q: u64) -> u64 {
    if q % 2 == 1 || q < 4 {
        return 2;
    }
    let z = q.trailing_zeros();
    let stripped = q >> z;
    let three = if stripped == 1 {
        z % 2 == 0
    } else {
        z % 2 == 1
    };
    if three {
        3
    } else {
        2
    }
}

fn a2a_odd_grundy(a: u64, n: u64) -> u64 {
    debug_assert_eq!(n % 2, 1);
    let r = n % (3 * a);
    if r < a {
        0
    } else if r < 2 * a {
        1
    } else {
        2
    }
}

fn mark_grundy(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    if n.trailing_zeros() % 2 == 1 {
        0
    } else if n.count_ones() % 2 == 1 {
        1
    } else {
        2
    }
}

fn mark_outcome(n: u64) -> Outcome {
    if n == 0 {
        return Outcome::P;
    }
    win_class(n.trailing_zeros() % 2 == 1)
}

fn misere_a2a_outcome(a: u64, n: u64) -> Outcome {
    if a == 2 {
        let r = n % 6;
        return win_class(r == 2 || r == 3);
    }
    // a odd: the outcome sequence is purely periodic with period 3a, and the
    // base segment splits at a and 2a with trailing-zero rules on each part.
    let r = n % (3 * a);
    let z = |x: u64| x.trailing_zeros();
    let p = if r == 0 {
        false
    } else if r < a {
        z(r) % 2 == 1
    } else if r == a {
        true
    } else if r < 2 * a {
        if r % 2 == 0 {
            z(r) % 2 == 1
        } else {
            z(r - a) % 2 == 0
        }
    } else if r == 2 * a {
        false
    } else if r % 2 == 1 {
        z(r - a) % 2 == 0
    } else {
        false
    };
    win_class(p)
}

/// Picks the strongest evaluator whose hypotheses cover `(spec, convention)`.
///
/// Contiguous ranges 1..=t-1 are recognized structurally, as is the ratio
/// shape {a, 2a}. Families with full g-values win over outcome-only ones.
/// Returns `None` when nothing solved applies.
pub fn family_for(spec: &GameSpec, convention: Convention) -> Option<FamilyEvaluator> {
    let s = spec.subtraction_set();
    let d = spec.division_set();
    if d.is_empty() {
        return None;
    }
    match convention {
        Convention::Normal => {
            if s == [1] && d == [2] {
                return Some(FamilyEvaluator::imark12());
            }
            if let Some(t) = contiguous_range(s) {
                if d == [t] {
                    return FamilyEvaluator::range_div_t(t).ok();
                }
                if d == [2] && t >= 3 {
                    return FamilyEvaluator::range_div2(t).ok();
                }
                if let [single] = d {
                    if single % t != 1 {
                        return FamilyEvaluator::range_outcome(t, *single).ok();
                    }
                }
            }
            if d == [2] {
                if let Some(a) = a2a_ratio(s) {
                    if a == 2 || a == 4 {
                        return FamilyEvaluator::a2a(a).ok();
                    }
                    if a % 2 == 0 {
                        return FamilyEvaluator::a2a_odd(a).ok();
                    }
                }
            }
            None
        }
        Convention::Misere => {
            if let Some(t) = contiguous_range(s) {
                if d.iter().all(|&x| x % t != 1) {
                    return FamilyEvaluator::misere_range(t, d).ok();
                }
            }
            if d == [2] {
                if let Some(a) = a2a_ratio(s) {
                    if a == 2 || a % 2 == 1 {
                        return FamilyEvaluator::misere_a2a(a).ok();
                    }
                }
            }
            None
        }
    }
}

/// `Some(t)` when the sorted set is exactly 1, 2, ..., t-1.
fn contiguous_range(s: &[u64]) -> Option<u64> {
    if s.is_empty() {
        return None;
    }
    for (i, &x) in s.iter().enumerate() {
        if x != i as u64 + 1 {
            return None;
        }
    }
    Some(s.len() as u64 + 1)
}

/// `Some(a)` when the sorted set is exactly {a, 2a}.
fn a2a_ratio(s: &[u64]) -> Option<u64> {
    match s {
        [a, b] if *b == 2 * a => Some(*a),
        _ => None,
    }
}

/// The complementary pair behind classic Mark: `a_n` is the mex of all
/// earlier terms of both sequences, `b_0 = 0` and `b_n = 2 a_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkSequences {
    /// a_1, a_2, ..., a_count.
    pub a_values: Vec<u64>,
    /// b_0, b_1, ..., b_{count-1}.
    pub b_values: Vec<u64>,
}

/// First `count` entries of each Mark sequence.
pub fn mark_sequences(count: usize) -> MarkSequences {
    assert!(count >= 1, "count must be positive");
    // a_n <= 2n and b_n <= 4n, so this table covers every mark.
    let mut used = vec![false; 4 * count + 4];
    let mut a_values = Vec::with_capacity(count);
    let mut b_values = Vec::with_capacity(count);
    used[0] = true;
    b_values.push(0);
    let mut cursor = 1usize;
    for _ in 1..=count {
        while used[cursor] {
            cursor += 1;
        }
        let a = cursor as u64;
        used[cursor] = true;
        used[2 * cursor] = true;
        a_values.push(a);
        if b_values.len() < count {
            b_values.push(2 * a);
        }
    }
    MarkSequences { a_values, b_values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{outcome_table, GrundyTable};
    use proptest::prelude::*;

    fn spec(s: &[u64], d: &[u64]) -> GameSpec {
        GameSpec::new(s.to_vec(), d.to_vec()).unwrap()
    }

    fn sweep_grundy(ev: &FamilyEvaluator, game: &GameSpec, upto: u64) {
        let table = GrundyTable::build(game, upto, DEFAULT_TABLE_BUDGET).unwrap();
        for n in 0..=upto {
            if ev.grundy_domain() == GrundyDomain::OddHeapsOnly && n % 2 == 0 {
                continue;
            }
            assert_eq!(
                ev.grundy(n).unwrap(),
                table.grundy(n) as u64,
                "g mismatch for {game} at n={n}"
            );
        }
    }

    #[test]
    fn family_selection() {
        let ev = family_for(&spec(&[1, 2], &[2]), Convention::Normal).unwrap();
        assert_eq!(ev.kind(), FamilyKind::RangeDiv2 { t: 3 });
        assert!(family_for(&spec(&[3, 6], &[2]), Convention::Normal).is_none());
        let ev = family_for(&spec(&[5, 10], &[2]), Convention::Misere).unwrap();
        assert_eq!(ev.kind(), FamilyKind::MisereA2a { a: 5 });
        let ev = family_for(&spec(&[1], &[2]), Convention::Normal).unwrap();
        assert_eq!(ev.kind(), FamilyKind::IMark12);
        let ev = family_for(&spec(&[1, 2, 3], &[4]), Convention::Normal).unwrap();
        assert_eq!(ev.kind(), FamilyKind::RangeDivT { t: 4 });
        let ev = family_for(&spec(&[1], &[4]), Convention::Normal).unwrap();
        assert_eq!(ev.kind(), FamilyKind::RangeOutcome { t: 2, d: 4 });
        // d = 1 mod t is explicitly unsolved
        assert!(family_for(&spec(&[1, 2], &[4]), Convention::Normal).is_none());
        assert!(family_for(&spec(&[1, 2], &[4]), Convention::Misere).is_none());
        // subtraction games without division are out of scope
        assert!(family_for(&spec(&[1, 2], &[]), Convention::Normal).is_none());
    }

    #[test]
    fn grundy_examples() {
        let im12 = FamilyEvaluator::imark12();
        assert_eq!(im12.grundy(36).unwrap(), 2);
        assert_eq!(im12.grundy(8).unwrap(), 1);
        assert_eq!(im12.grundy(0).unwrap(), 0);
        let div2_3 = FamilyEvaluator::range_div2(3).unwrap();
        assert_eq!(div2_3.grundy(48).unwrap(), 3);
        let a2 = FamilyEvaluator::a2a(2).unwrap();
        assert_eq!(a2.grundy(24).unwrap(), 3);
        let a4 = FamilyEvaluator::a2a(4).unwrap();
        assert_eq!(a4.grundy(24).unwrap(), 3);
        let a6 = FamilyEvaluator::a2a_odd(6).unwrap();
        assert_eq!(a6.grundy(7).unwrap(), 1);
        let mark = FamilyEvaluator::mark();
        assert_eq!(mark.grundy(3).unwrap(), 2);
        let div_t3 = FamilyEvaluator::range_div_t(3).unwrap();
        assert_eq!(div_t3.grundy(8).unwrap(), 2);
        for ev in [&im12, &div2_3, &a2, &a4, &mark, &div_t3] {
            assert_eq!(ev.grundy(0).unwrap(), 0);
        }
    }

    #[test]
    fn outcome_examples() {
        let ev = FamilyEvaluator::range_outcome(3, 2).unwrap();
        assert_eq!(ev.outcome(10).unwrap(), Outcome::P);
        let ev = FamilyEvaluator::misere_a2a(5).unwrap();
        assert_eq!(ev.outcome(17).unwrap(), Outcome::P);
        let ev = FamilyEvaluator::misere_a2a(3).unwrap();
        assert_eq!(ev.outcome(7).unwrap(), Outcome::P);
        let ev = FamilyEvaluator::misere_a2a(2).unwrap();
        assert_eq!(ev.outcome(8).unwrap(), Outcome::P);
        let mark = FamilyEvaluator::mark();
        assert_eq!(mark.outcome(6).unwrap(), Outcome::P);
        // misère range: P exactly on 1 mod t
        let ev = FamilyEvaluator::misere_range(2, &[2]).unwrap();
        assert_eq!(ev.outcome(7).unwrap(), Outcome::P);
        assert_eq!(ev.outcome(0).unwrap(), Outcome::N);
    }

    #[test]
    fn outside_domain_errors() {
        let a6 = FamilyEvaluator::a2a_odd(6).unwrap();
        assert!(matches!(
            a6.grundy(8),
            Err(FamilyError::OutsideDomain { n: 8, .. })
        ));
        assert!(matches!(
            a6.outcome(8),
            Err(FamilyError::OutsideDomain { .. })
        ));
        let mi = FamilyEvaluator::misere_range(3, &[3]).unwrap();
        assert!(mi.grundy(5).is_err());
        let out = FamilyEvaluator::range_outcome(2, 4).unwrap();
        assert!(out.grundy(5).is_err());
    }

    #[test]
    fn invalid_parameters() {
        assert!(FamilyEvaluator::a2a(3).is_err());
        assert!(FamilyEvaluator::a2a_odd(5).is_err());
        assert!(FamilyEvaluator::misere_a2a(4).is_err());
        assert!(FamilyEvaluator::range_outcome(3, 4).is_err());
        assert!(FamilyEvaluator::range_div_t(1).is_err());
        assert!(FamilyEvaluator::range_div2(2).is_err());
        // a = 1 is the t = 3 range game
        assert_eq!(
            FamilyEvaluator::a2a(1).unwrap().kind(),
            FamilyKind::RangeDiv2 { t: 3 }
        );
    }

    #[test]
    fn g2_positions_of_imark12_match_listing() {
        let ev = FamilyEvaluator::imark12();
        let listed: Vec<u64> = (0..)
            .filter(|&n| ev.grundy(n).unwrap() == 2)
            .take(20)
            .collect();
        assert_eq!(
            listed,
            [4, 6, 16, 20, 24, 28, 36, 44, 52, 60, 64, 68, 76, 80, 84, 92, 96, 100, 108, 112]
        );
    }

    #[test]
    fn g3_positions_of_range3_match_listing() {
        let ev = FamilyEvaluator::range_div2(3).unwrap();
        let listed: Vec<u64> = (0..)
            .filter(|&n| ev.grundy(n).unwrap() == 3)
            .take(17)
            .collect();
        assert_eq!(
            listed,
            [6, 18, 42, 48, 54, 60, 66, 72, 78, 90, 102, 114, 126, 138, 150, 162, 168]
        );
    }

    #[test]
    fn fast_agrees_with_oracle_small() {
        sweep_grundy(&FamilyEvaluator::imark12(), &spec(&[1], &[2]), 4000);
        for t in 2..=6 {
            let ev = FamilyEvaluator::range_div_t(t).unwrap();
            sweep_grundy(&ev, &range_spec(t, t), 4000);
        }
        for t in 3..=6 {
            let ev = FamilyEvaluator::range_div2(t).unwrap();
            sweep_grundy(&ev, &range_spec(t, 2), 4000);
        }
        sweep_grundy(&FamilyEvaluator::a2a(2).unwrap(), &spec(&[2, 4], &[2]), 4000);
        sweep_grundy(&FamilyEvaluator::a2a(4).unwrap(), &spec(&[4, 8], &[2]), 4000);
        for a in [2u64, 6, 8] {
            let ev = FamilyEvaluator::a2a_odd(a).unwrap();
            sweep_grundy(&ev, &spec(&[a, 2 * a], &[2]), 4001);
        }
    }

    #[test]
    fn misere_fast_agrees_with_oracle_small() {
        for a in [1u64, 2, 3, 5, 7] {
            let game = spec(&[a, 2 * a], &[2]);
            let ev = family_for(&game, Convention::Misere).unwrap();
            let oracle = outcome_table(&game, Convention::Misere, 3000, DEFAULT_TABLE_BUDGET).unwrap();
            for n in 0..=3000u64 {
                assert_eq!(
                    ev.outcome(n).unwrap(),
                    oracle[n as usize],
                    "misère mismatch a={a} n={n}"
                );
            }
        }
        for t in 2..=6 {
            let game = range_spec(t, t);
            let ev = family_for(&game, Convention::Misere).unwrap();
            let oracle = outcome_table(&game, Convention::Misere, 3000, DEFAULT_TABLE_BUDGET).unwrap();
            for n in 0..=3000u64 {
                assert_eq!(ev.outcome(n).unwrap(), oracle[n as usize]);
            }
        }
    }

    #[test]
    fn mark_agrees_with_floor_division_recursion() {
        // Brute-force mex over the classic moves n-1 and floor(n/2).
        let mut g = vec![0u8; 4000];
        for n in 1..g.len() {
            let opts = [g[n - 1], g[n / 2]];
            let mut mex = 0u8;
            while opts.contains(&mex) {
                mex += 1;
            }
            g[n] = mex;
        }
        let ev = FamilyEvaluator::mark();
        for (n, &want) in g.iter().enumerate() {
            assert_eq!(ev.grundy(n as u64).unwrap(), want as u64, "mark n={n}");
            let want_outcome = win_class(want == 0);
            assert_eq!(ev.outcome(n as u64).unwrap(), want_outcome);
        }
    }

    #[test]
    fn mark_sequences_match_table() {
        let seqs = mark_sequences(5);
        assert_eq!(seqs.a_values, [1, 3, 4, 5, 7]);
        assert_eq!(seqs.b_values, [0, 2, 6, 8, 10]);
        let seqs = mark_sequences(1);
        assert_eq!(seqs.a_values, [1]);
        assert_eq!(seqs.b_values, [0]);
        let seqs = mark_sequences(17);
        assert_eq!(
            seqs.a_values[..16],
            [1, 3, 4, 5, 7, 9, 11, 12, 13, 15, 16, 17, 19, 20, 21, 23]
        );
        assert_eq!(
            seqs.b_values,
            [0, 2, 6, 8, 10, 14, 18, 22, 24, 26, 30, 32, 34, 38, 40, 42, 46]
        );
    }

    #[test]
    fn mark_sequences_complement_the_outcomes() {
        // b-values are exactly the P-positions of Mark, a-values the
        // N-positions.
        let seqs = mark_sequences(60);
        let ev = FamilyEvaluator::mark();
        for &b in &seqs.b_values {
            assert_eq!(ev.outcome(b).unwrap(), Outcome::P);
        }
        for &a in &seqs.a_values {
            assert_eq!(ev.outcome(a).unwrap(), Outcome::N);
        }
    }

    #[test]
    fn divt_and_imark12_routes_agree_for_t2() {
        let divt = FamilyEvaluator::range_div_t(2).unwrap();
        let im12 = FamilyEvaluator::imark12();
        for n in (0..30_000u64).step_by(2) {
            assert_eq!(
                divt.grundy(n).unwrap() == 2,
                im12.grundy(n).unwrap() == 2,
                "n={n}"
            );
        }
    }

    #[test]
    fn exception_column_is_two_valued_far_out() {
        let divt = FamilyEvaluator::range_div_t(5).unwrap();
        let div2 = FamilyEvaluator::range_div2(6).unwrap();
        let a2 = FamilyEvaluator::a2a(2).unwrap();
        for k in 1..400u64 {
            let g = divt.grundy(k * 5 * 999_983).unwrap();
            assert!(g == 4 || g == 5, "got {g}");
            let g = div2.grundy(k * 6 * 999_983).unwrap();
            assert!(g == 5 || g == 6, "got {g}");
            let g = a2.grundy(k * 6 * 1_000_003).unwrap();
            assert!(g == 2 || g == 3, "got {g}");
        }
    }

    #[test]
    fn misere_a2a_outcomes_are_purely_periodic() {
        for a in [1u64, 2, 3, 5, 9, 11] {
            let ev = FamilyEvaluator::misere_a2a(a).unwrap();
            for n in 0..(6 * a + 20) {
                assert_eq!(ev.outcome(n).unwrap(), ev.outcome(n + 3 * a).unwrap());
            }
        }
    }

    proptest! {
        // Wherever both are defined, the fast outcome is P exactly when the
        // fast g-value is zero.
        #[test]
        fn normal_outcome_matches_grundy_zero(n in 0u64..u64::MAX / 2) {
            let evs = [
                FamilyEvaluator::imark12(),
                FamilyEvaluator::mark(),
                FamilyEvaluator::range_div_t(4).unwrap(),
                FamilyEvaluator::range_div2(5).unwrap(),
                FamilyEvaluator::a2a(4).unwrap(),
            ];
            for ev in evs {
                prop_assert_eq!(ev.outcome(n).unwrap() == Outcome::P, ev.grundy(n).unwrap() == 0);
            }
        }

        // The fast g-value is the mex of the fast g-values of the options;
        // no oracle involved, so this runs at heights the table never could.
        #[test]
        fn fast_mex_self_consistency(n in 0u64..(1u64 << 40)) {
            let cases = [
                (FamilyEvaluator::imark12(), spec(&[1], &[2])),
                (FamilyEvaluator::range_div_t(3).unwrap(), range_spec(3, 3)),
                (FamilyEvaluator::range_div2(4).unwrap(), range_spec(4, 2)),
                (FamilyEvaluator::a2a(2).unwrap(), spec(&[2, 4], &[2])),
            ];
            for (ev, game) in cases {
                let opts = game.options(n);
                let mut vals: Vec<u64> = opts.iter().map(|&m| ev.grundy(m).unwrap()).collect();
                vals.sort_unstable();
                vals.dedup();
                let mut mex = 0u64;
                for v in vals {
                    if v == mex { mex += 1; } else if v > mex { break; }
                }
                prop_assert_eq!(ev.grundy(n).unwrap(), mex);
            }
        }
    }
}
