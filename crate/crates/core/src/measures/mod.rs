//! Relative-entropy values, PPT evidence and separable-state numerics.

mod exact;
mod ppt;
mod search;
mod separable;

use serde::Serialize;

use crate::quantum::Divergence;

pub use exact::{
    doubled_candidate_bound, doubled_candidate_closed_form, even_candidate_bound,
    even_candidate_closed_form, odd_doubled_bound, odd_doubled_closed_form,
    single_block_candidate, OddPairBound, MAX_DENSE_EVEN_M, MAX_DENSE_ODD_M,
};
pub use ppt::{log_negativity, ppt_check, PptReport, PPT_TOL};
pub use search::{er_search, ErReport, SearchConfig, LOWER_BOUND_SLACK, SEARCH_FLOOR};
pub use separable::{
    random_pure_state, random_separable_bell_diagonal, random_simplex, sample_separable,
    ProductTerm, SeparableAnsatz,
};

/// One computed value next to the value it is checked against.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub target: String,
    pub value_bits: Divergence,
    pub expected_bits: Option<Divergence>,
    pub tolerance: f64,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub method: String,
}

impl CheckRecord {
    /// Exact for infinite expectations, `|value - expected| <= tolerance`
    /// otherwise. Records without an expectation always pass.
    pub fn passes(&self) -> bool {
        match (self.value_bits, self.expected_bits) {
            (_, None) => true,
            (Divergence::Finite(v), Some(Divergence::Finite(e))) => (v - e).abs() <= self.tolerance,
            (Divergence::Infinite, Some(Divergence::Infinite)) => true,
            _ => false,
        }
    }
}
