//! Exact game semantics: move generation and the mex-based Grundy/outcome
//! oracle for arbitrary finite subtraction/division move sets, under both
//! play conventions.
//!
//! The oracle is a dense ascending-pass table. Every option of a heap is a
//! strictly smaller heap, so one bottom-up sweep fills g-values for
//! `0..=limit`; a single query still costs O(n) time and space because
//! subtraction chains reach arbitrarily far down. Completed tables are
//! immutable and safe to share across threads.

use std::fmt;
use std::io::{self, Read, Write};

use thiserror::Error;

/// Default cap on oracle table length, in entries. Callers can pass any
/// other budget; this is just a sane library-level ceiling (one byte per
/// entry, so 10^8 entries is 100 MB).
pub const DEFAULT_TABLE_BUDGET: u64 = 100_000_000;

const CACHE_MAGIC: &[u8; 4] = b"IMGT";
const CACHE_VERSION: u8 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("subtraction and division sets are both empty")]
    EmptySpec,
    #[error("bad element {value}: {reason}")]
    BadElement { value: u64, reason: &'static str },
    #[error("duplicate element {0}")]
    Duplicate(u64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("table of {requested} entries exceeds budget of {budget}")]
    LimitExceeded { requested: u64, budget: u64 },
    #[error("{0} moves per position cannot be tabulated with byte-wide g-values")]
    TooManyMoves(usize),
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("not a grundy table cache (bad magic)")]
    BadMagic,
    #[error("unsupported cache version {0}")]
    BadVersion(u8),
    #[error("cache holds an invalid game spec: {0}")]
    BadSpec(#[from] SpecError),
    #[error("cache is truncated or has inconsistent lengths")]
    Truncated,
}

/// Play convention: under normal play the player unable to move loses,
/// under misère play the player unable to move wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    Normal,
    Misere,
}

/// Outcome class of a position: `N` if the next player to move wins,
/// `P` if the previous player does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    N,
    P,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::N => "N",
            Outcome::P => "P",
        })
    }
}

/// A validated game: a set of token counts that may be subtracted and a set
/// of divisors that may divide the heap exactly.
///
/// From a heap of `n` tokens the legal moves are `n - s` for each `s` in the
/// subtraction set with `s <= n`, and `n / d` for each `d` in the division
/// set with `d | n` and `n > 0`. Both sets are kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameSpec {
    subtraction: Vec<u64>,
    division: Vec<u64>,
}

impl GameSpec {
    /// Validates and normalizes the two move sets.
    pub fn new(subtraction: Vec<u64>, division: Vec<u64>) -> Result<Self, SpecError> {
        if subtraction.is_empty() && division.is_empty() {
            return Err(SpecError::EmptySpec);
        }
        let mut subtraction = subtraction;
        let mut division = division;
        for &s in &subtraction {
            if s < 1 {
                return Err(SpecError::BadElement {
                    value: s,
                    reason: "subtraction amounts must be at least 1",
                });
            }
        }
        for &d in &division {
            if d < 2 {
                return Err(SpecError::BadElement {
                    value: d,
                    reason: "divisors must be at least 2",
                });
            }
        }
        subtraction.sort_unstable();
        division.sort_unstable();
        if let Some(w) = subtraction.windows(2).find(|w| w[0] == w[1]) {
            return Err(SpecError::Duplicate(w[0]));
        }
        if let Some(w) = division.windows(2).find(|w| w[0] == w[1]) {
            return Err(SpecError::Duplicate(w[0]));
        }
        Ok(GameSpec {
            subtraction,
            division,
        })
    }

    pub fn subtraction_set(&self) -> &[u64] {
        &self.subtraction
    }

    pub fn division_set(&self) -> &[u64] {
        &self.division
    }

    /// All positions reachable from a heap of `n` tokens, deduplicated and
    /// ascending. A subtraction target may coincide with a division target.
    pub fn options(&self, n: u64) -> Vec<u64> {
        let mut opts: Vec<u64> = Vec::with_capacity(self.subtraction.len() + self.division.len());
        for &s in &self.subtraction {
            if s <= n {
                opts.push(n - s);
            }
        }
        if n > 0 {
            for &d in &self.division {
                if n % d == 0 {
                    opts.push(n / d);
                }
            }
        }
        opts.sort_unstable();
        opts.dedup();
        opts
    }

    fn has_option(&self, n: u64) -> bool {
        self.subtraction.first().is_some_and(|&s| s <= n)
            || (n > 0 && self.division.iter().any(|&d| n % d == 0))
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[u64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "({{{}}},{{{}}})",
            join(&self.subtraction),
            join(&self.division)
        )
    }
}

/// Dense table of g-values for heaps `0..=limit` of one game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrundyTable {
    spec: GameSpec,
    values: Vec<u8>,
}

impl GrundyTable {
    /// Fills the table bottom-up. `budget` caps the number of entries
    /// (`limit + 1`); use [`DEFAULT_TABLE_BUDGET`] when in doubt.
    pub fn build(spec: &GameSpec, limit: u64, budget: u64) -> Result<Self, EngineError> {
        let entries = limit
            .checked_add(1)
            .ok_or(EngineError::LimitExceeded {
                requested: u64::MAX,
                budget,
            })?;
        if entries > budget {
            return Err(EngineError::LimitExceeded {
                requested: entries,
                budget,
            });
        }
        let move_count = spec.subtraction.len() + spec.division.len();
        if move_count > 255 {
            return Err(EngineError::TooManyMoves(move_count));
        }
        let mut values = vec![0u8; entries as usize];
        for n in 0..entries {
            // A position with k options has g-value at most k <= 255, so a
            // 256-bit mask of seen option values suffices for the mex.
            let mut seen = [0u64; 4];
            for &s in &spec.subtraction {
                if s > n {
                    break;
                }
                let v = values[(n - s) as usize];
                seen[(v >> 6) as usize] |= 1u64 << (v & 63);
            }
            if n > 0 {
                for &d in &spec.division {
                    if n % d == 0 {
                        let v = values[(n / d) as usize];
                        seen[(v >> 6) as usize] |= 1u64 << (v & 63);
                    }
                }
            }
            let mut mex = 0u32;
            for (w, word) in seen.iter().enumerate() {
                if *word != u64::MAX {
                    mex = w as u32 * 64 + (!word).trailing_zeros();
                    break;
                }
            }
            values[n as usize] = mex as u8;
        }
        Ok(GrundyTable {
            spec: spec.clone(),
            values,
        })
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    /// Largest heap size covered by the table.
    pub fn limit(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// g-value of a heap of `n` tokens. Panics beyond [`Self::limit`].
    pub fn grundy(&self, n: u64) -> u8 {
        self.values[n as usize]
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// Rechecks every entry against the mex of its option values,
    /// independently of construction order.
    pub fn verify_mex(&self) -> bool {
        (0..=self.limit()).all(|n| {
            let opts = self.spec.options(n);
            let mut vals: Vec<u8> = opts.iter().map(|&m| self.grundy(m)).collect();
            vals.sort_unstable();
            vals.dedup();
            let mut mex = 0u8;
            for v in vals {
                if v == mex {
                    mex += 1;
                } else if v > mex {
                    break;
                }
            }
            self.grundy(n) == mex
        })
    }

    /// Serializes as the binary cache format: magic `IMGT`, a version byte,
    /// the spec (each set as a little-endian u64 length followed by its
    /// little-endian u64 elements), the limit, then one byte per g-value.
    pub fn write_binary<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&[CACHE_VERSION])?;
        let write_set = |w: &mut W, xs: &[u64]| -> io::Result<()> {
            w.write_all(&(xs.len() as u64).to_le_bytes())?;
            for &x in xs {
                w.write_all(&x.to_le_bytes())?;
            }
            Ok(())
        };
        write_set(w, &self.spec.subtraction)?;
        write_set(w, &self.spec.division)?;
        w.write_all(&self.limit().to_le_bytes())?;
        w.write_all(&self.values)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(r: &mut R) -> Result<Self, CacheError> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(CacheError::BadMagic);
        }
        let mut version = [0u8; 1];
        r.read_exact(&mut version)?;
        if version[0] != CACHE_VERSION {
            return Err(CacheError::BadVersion(version[0]));
        }
        let read_u64 = |r: &mut R| -> Result<u64, CacheError> {
            let mut buf = [0u8; 8];
            r.read_exact(&mut buf)?;
            Ok(u64::from_le_bytes(buf))
        };
        let read_set = |r: &mut R| -> Result<Vec<u64>, CacheError> {
            let len = {
                let mut buf = [0u8; 8];
                r.read_exact(&mut buf)?;
                u64::from_le_bytes(buf)
            };
            if len > u32::MAX as u64 {
                return Err(CacheError::Truncated);
            }
            let mut xs = Vec::with_capacity(len as usize);
            for _ in 0..len {
                let mut buf = [0u8; 8];
                r.read_exact(&mut buf)?;
                xs.push(u64::from_le_bytes(buf));
            }
            Ok(xs)
        };
        let subtraction = read_set(r)?;
        let division = read_set(r)?;
        let spec = GameSpec::new(subtraction, division)?;
        let limit = read_u64(r)?;
        let entries = limit.checked_add(1).ok_or(CacheError::Truncated)?;
        let mut values = vec![0u8; entries as usize];
        r.read_exact(&mut values)?;
        Ok(GrundyTable { spec, values })
    }

    /// CSV export, header `n,g` then one row per heap size.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "n,g")?;
        for (n, g) in self.values.iter().enumerate() {
            writeln!(w, "{n},{g}")?;
        }
        Ok(())
    }
}

/// One-shot oracle g-value for a single heap (builds a table up to `n`).
pub fn grundy(spec: &GameSpec, n: u64, budget: u64) -> Result<u8, EngineError> {
    Ok(GrundyTable::build(spec, n, budget)?.grundy(n))
}

/// Outcome classes for heaps `0..=limit` by direct N/P recursion.
///
/// A position with no options at all is terminal: the mover loses under
/// normal play (outcome P) and wins under misère play (outcome N). Every
/// other position is P exactly when all of its options are N.
pub fn outcome_table(
    spec: &GameSpec,
    convention: Convention,
    limit: u64,
    budget: u64,
) -> Result<Vec<Outcome>, EngineError> {
    let entries = limit.checked_add(1).ok_or(EngineError::LimitExceeded {
        requested: u64::MAX,
        budget,
    })?;
    if entries > budget {
        return Err(EngineError::LimitExceeded {
            requested: entries,
            budget,
        });
    }
    let terminal = match convention {
        Convention::Normal => Outcome::P,
        Convention::Misere => Outcome::N,
    };
    let mut out = vec![Outcome::N; entries as usize];
    for n in 0..entries {
        if !spec.has_option(n) {
            out[n as usize] = terminal;
            continue;
        }
        let mut all_n = true;
        for &s in &spec.subtraction {
            if s > n {
                break;
            }
            if out[(n - s) as usize] == Outcome::P {
                all_n = false;
                break;
            }
        }
        if all_n && n > 0 {
            for &d in &spec.division {
                if n % d == 0 && out[(n / d) as usize] == Outcome::P {
                    all_n = false;
                    break;
                }
            }
        }
        out[n as usize] = if all_n { Outcome::P } else { Outcome::N };
    }
    Ok(out)
}

/// One-shot oracle outcome for a single heap.
pub fn outcome(
    spec: &GameSpec,
    convention: Convention,
    n: u64,
    budget: u64,
) -> Result<Outcome, EngineError> {
    Ok(outcome_table(spec, convention, n, budget)?[n as usize])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(s: &[u64], d: &[u64]) -> GameSpec {
        GameSpec::new(s.to_vec(), d.to_vec()).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(GameSpec::new(vec![1], vec![2]).is_ok());
        assert!(GameSpec::new(vec![2, 4], vec![2]).is_ok());
        assert_eq!(GameSpec::new(vec![], vec![]), Err(SpecError::EmptySpec));
        assert!(matches!(
            GameSpec::new(vec![0], vec![2]),
            Err(SpecError::BadElement { value: 0, .. })
        ));
        assert!(matches!(
            GameSpec::new(vec![1], vec![1]),
            Err(SpecError::BadElement { value: 1, .. })
        ));
        assert_eq!(
            GameSpec::new(vec![3, 3], vec![2]),
            Err(SpecError::Duplicate(3))
        );
        // unsorted input is normalized
        let g = GameSpec::new(vec![4, 2], vec![3, 2]).unwrap();
        assert_eq!(g.subtraction_set(), &[2, 4]);
        assert_eq!(g.division_set(), &[2, 3]);
        // subtraction-only and division-only games are legal
        assert!(GameSpec::new(vec![1], vec![]).is_ok());
        assert!(GameSpec::new(vec![], vec![2]).is_ok());
    }

    #[test]
    fn options_examples() {
        assert_eq!(spec(&[1], &[2]).options(4), vec![2, 3]);
        assert_eq!(spec(&[2, 4], &[2]).options(7), vec![3, 5]);
        assert_eq!(spec(&[2, 4], &[2]).options(0), Vec::<u64>::new());
        // n-s may coincide with n/d; duplicates are removed
        assert_eq!(spec(&[2], &[2]).options(4), vec![2]);
    }

    #[test]
    fn grundy_table_matches_printed_sequences() {
        let t = GrundyTable::build(&spec(&[1], &[2]), 16, DEFAULT_TABLE_BUDGET).unwrap();
        assert_eq!(
            t.values(),
            &[0, 1, 0, 1, 2, 0, 2, 0, 1, 0, 1, 0, 1, 0, 1, 0, 2]
        );
        let t = GrundyTable::build(&spec(&[2, 4], &[2]), 11, DEFAULT_TABLE_BUDGET).unwrap();
        assert_eq!(t.values(), &[0, 0, 1, 1, 2, 2, 0, 0, 1, 1, 3, 2]);
        let t = GrundyTable::build(&spec(&[4, 8], &[2]), 0, DEFAULT_TABLE_BUDGET).unwrap();
        assert_eq!(t.values(), &[0]);
    }

    #[test]
    fn outcome_examples() {
        let g = spec(&[1], &[2]);
        assert_eq!(
            outcome(&g, Convention::Normal, 9, DEFAULT_TABLE_BUDGET).unwrap(),
            Outcome::P
        );
        assert_eq!(
            outcome(&g, Convention::Misere, 7, DEFAULT_TABLE_BUDGET).unwrap(),
            Outcome::P
        );
        // terminal positions win for the mover under misère
        assert_eq!(
            outcome(&g, Convention::Misere, 0, DEFAULT_TABLE_BUDGET).unwrap(),
            Outcome::N
        );
        assert_eq!(
            outcome(&spec(&[4, 8], &[2]), Convention::Misere, 3, DEFAULT_TABLE_BUDGET).unwrap(),
            Outcome::N
        );
    }

    #[test]
    fn misere_flips_zero_and_one_when_one_in_s() {
        for d in [vec![2], vec![3], vec![2, 5]] {
            let g = spec(&[1, 3], &d);
            let out = outcome_table(&g, Convention::Misere, 1, DEFAULT_TABLE_BUDGET).unwrap();
            assert_eq!(out[0], Outcome::N);
            assert_eq!(out[1], Outcome::P);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = spec(&[1], &[2]);
        assert_eq!(
            GrundyTable::build(&g, 1000, 1000).unwrap_err(),
            EngineError::LimitExceeded {
                requested: 1001,
                budget: 1000
            }
        );
        assert!(GrundyTable::build(&g, 999, 1000).is_ok());
    }

    #[test]
    fn binary_cache_round_trip() {
        let t = GrundyTable::build(&spec(&[2, 4], &[2]), 500, DEFAULT_TABLE_BUDGET).unwrap();
        let mut buf = Vec::new();
        t.write_binary(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"IMGT");
        let back = GrundyTable::read_binary(&mut buf.as_slice()).unwrap();
        assert_eq!(back, t);
        assert!(back.verify_mex());
        // re-serialization is byte-identical
        let mut buf2 = Vec::new();
        back.write_binary(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn cache_rejects_garbage() {
        assert!(matches!(
            GrundyTable::read_binary(&mut &b"NOPE"[..]),
            Err(CacheError::BadMagic)
        ));
        let t = GrundyTable::build(&spec(&[1], &[2]), 10, DEFAULT_TABLE_BUDGET).unwrap();
        let mut buf = Vec::new();
        t.write_binary(&mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(matches!(
            GrundyTable::read_binary(&mut buf.as_slice()),
            Err(CacheError::Io(_))
        ));
    }

    #[test]
    fn csv_export() {
        let t = GrundyTable::build(&spec(&[1], &[2]), 3, DEFAULT_TABLE_BUDGET).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,g\n0,0\n1,1\n2,0\n3,1\n");
    }

    proptest! {
        // Random small games: the table is mex-consistent, g never equals an
        // option's g, g is bounded by the move count, and normal outcomes
        // coincide with g == 0.
        #[test]
        fn oracle_invariants(
            s in proptest::collection::btree_set(1u64..12, 0..4),
            d in proptest::collection::btree_set(2u64..8, 0..3),
            limit in 0u64..400,
        ) {
            prop_assume!(!s.is_empty() || !d.is_empty());
            let g = GameSpec::new(s.into_iter().collect(), d.into_iter().collect()).unwrap();
            let t = GrundyTable::build(&g, limit, DEFAULT_TABLE_BUDGET).unwrap();
            prop_assert!(t.verify_mex());
            let bound = (g.subtraction_set().len() + g.division_set().len()) as u8;
            let normal = outcome_table(&g, Convention::Normal, limit, DEFAULT_TABLE_BUDGET).unwrap();
            for n in 0..=limit {
                prop_assert!(t.grundy(n) <= bound);
                for m in g.options(n) {
                    prop_assert_ne!(t.grundy(m), t.grundy(n));
                }
                let p = normal[n as usize] == Outcome::P;
                prop_assert_eq!(p, t.grundy(n) == 0);
            }
        }
    }
}
