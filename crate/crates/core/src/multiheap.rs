//! Normal-play sums of heaps: nim-sum evaluation and optimal-move search.
//!
//! Each heap carries its own game spec. The g-value of a heap comes from the
//! best available route: a closed-form family when one covers it, the oracle
//! otherwise. Misère sums are rejected outright; the misère results in this
//! crate are single-heap outcome results and no quotient theory is attempted.

use std::collections::HashMap;

use thiserror::Error;

use crate::closedform::{family_for, FamilyEvaluator, GrundyDomain};
use crate::engine::{Convention, EngineError, GameSpec, GrundyTable};

#[derive(Debug, Error)]
pub enum MultiheapError {
    #[error("misère sums are not supported")]
    MisereSumsUnsupported,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// A sum of independent heaps, possibly of different games.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumPosition {
    heaps: Vec<(GameSpec, u64)>,
}

impl SumPosition {
    pub fn new(heaps: Vec<(GameSpec, u64)>) -> Self {
        SumPosition { heaps }
    }

    /// Every heap of one shared game.
    pub fn uniform(spec: &GameSpec, sizes: &[u64]) -> Self {
        SumPosition {
            heaps: sizes.iter().map(|&n| (spec.clone(), n)).collect(),
        }
    }

    pub fn heaps(&self) -> &[(GameSpec, u64)] {
        &self.heaps
    }
}

/// A winning move on a sum, or `None` from the caller's side when the
/// position is already a P-position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoveAdvice {
    pub heap_index: usize,
    pub new_size: u64,
    /// Total g-value after the move; 0 for winning advice.
    pub resulting_grundy: u64,
}

/// Bitwise exclusive-or fold; the g-value of a sum of games.
pub fn nim_sum(values: &[u64]) -> u64 {
    values.iter().fold(0, |acc, v| acc ^ v)
}

enum Route {
    Fast(FamilyEvaluator),
    Oracle(GrundyTable),
}

impl Route {
    fn grundy(&self, n: u64) -> u64 {
        match self {
            Route::Fast(ev) => ev.grundy(n).expect("route covers its heaps"),
            Route::Oracle(table) => table.grundy(n) as u64,
        }
    }
}

/// One evaluation route per distinct spec. A fast family is used when its
/// g-values cover every heap of that spec (odd-heap families stay usable
/// because all their moves preserve parity); anything else gets a table
/// sized to the largest heap.
fn routes(pos: &SumPosition, budget: u64) -> Result<HashMap<GameSpec, Route>, MultiheapError> {
    let mut routes = HashMap::new();
    for (spec, _) in &pos.heaps {
        if routes.contains_key(spec) {
            continue;
        }
        let sizes = || {
            pos.heaps
                .iter()
                .filter(|(s, _)| s == spec)
                .map(|&(_, n)| n)
        };
        let fast = family_for(spec, Convention::Normal).and_then(|ev| match ev.grundy_domain() {
            GrundyDomain::AllHeaps => Some(ev),
            GrundyDomain::OddHeapsOnly if sizes().all(|n| n % 2 == 1) => Some(ev),
            _ => None,
        });
        let route = match fast {
            Some(ev) => Route::Fast(ev),
            None => {
                let max = sizes().max().unwrap_or(0);
                Route::Oracle(GrundyTable::build(spec, max, budget)?)
            }
        };
        routes.insert(spec.clone(), route);
    }
    Ok(routes)
}

fn per_heap_grundy(
    pos: &SumPosition,
    convention: Convention,
    budget: u64,
) -> Result<(Vec<u64>, HashMap<GameSpec, Route>), MultiheapError> {
    if convention == Convention::Misere {
        return Err(MultiheapError::MisereSumsUnsupported);
    }
    let routes = routes(pos, budget)?;
    let values = pos
        .heaps
        .iter()
        .map(|(spec, n)| routes[spec].grundy(*n))
        .collect();
    Ok((values, routes))
}

/// Nim-sum of the per-heap g-values. Empty sums have g = 0.
pub fn sum_grundy(
    pos: &SumPosition,
    convention: Convention,
    budget: u64,
) -> Result<u64, MultiheapError> {
    let (values, _) = per_heap_grundy(pos, convention, budget)?;
    Ok(nim_sum(&values))
}

/// A move bringing the total g-value to 0 when one exists, ties broken by
/// lowest heap index then smallest resulting heap; `None` when the total is
/// already 0.
pub fn optimal_move(
    pos: &SumPosition,
    convention: Convention,
    budget: u64,
) -> Result<Option<MoveAdvice>, MultiheapError> {
    let (values, routes) = per_heap_grundy(pos, convention, budget)?;
    let total = nim_sum(&values);
    if total == 0 {
        return Ok(None);
    }
    for (i, (spec, n)) in pos.heaps.iter().enumerate() {
        let target = total ^ values[i];
        let route = &routes[spec];
        for m in spec.options(*n) {
            if route.grundy(m) == target {
                return Ok(Some(MoveAdvice {
                    heap_index: i,
                    new_size: m,
                    resulting_grundy: 0,
                }));
            }
        }
    }
    unreachable!("a nonzero sum always has a move to zero");
}
