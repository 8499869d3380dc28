//! Shared helpers for the benchmark targets.

use imark_core::{FamilyEvaluator, GameSpec};

/// The evaluators the fast-path benchmarks exercise, with display labels.
pub fn benchmark_families() -> Vec<(&'static str, FamilyEvaluator)> {
    vec![
        ("imark_1_2", FamilyEvaluator::imark12()),
        ("mark", FamilyEvaluator::mark()),
        ("range_div_t_5", FamilyEvaluator::range_div_t(5).unwrap()),
        ("range_div2_6", FamilyEvaluator::range_div2(6).unwrap()),
        ("a2a_4", FamilyEvaluator::a2a(4).unwrap()),
    ]
}

pub fn imark12_spec() -> GameSpec {
    GameSpec::new(vec![1], vec![2]).unwrap()
}
