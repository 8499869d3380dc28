//! Grundy values, outcomes and periodicity analysis for integral
//! subtraction-division heap games.
//!
//! From a heap of `n` tokens a move either subtracts some `s` from the
//! game's subtraction set or divides the heap exactly by some `d` from its
//! division set. The crate pairs an exact O(n) mex oracle ([`engine`]) with
//! O(log n) closed-form evaluators for every solved family ([`closedform`]),
//! plus structure analysis over the resulting sequences ([`periodicity`])
//! and optimal play on sums of heaps ([`multiheap`]).

pub mod closedform;
pub mod digits;
pub mod engine;
pub mod multiheap;
pub mod periodicity;

pub use closedform::{family_for, FamilyEvaluator, FamilyKind, MarkSequences};
pub use digits::DigitProfile;
pub use engine::{Convention, GameSpec, GrundyTable, Outcome, DEFAULT_TABLE_BUDGET};
pub use multiheap::{MoveAdvice, SumPosition};
pub use periodicity::{ExceptionCensus, PeriodicityCertificate, RefutationWitness};
