//! Horizon-bounded truth values.
//!
//! Recurrence and hypercyclicity are asymptotic notions; a finite computation
//! can only exhibit a witness, fail up to a horizon, or stay undecided. Every
//! verdict carries the horizon it was computed at.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    SatisfiedWithWitness,
    FailedAtHorizon,
    Undetermined,
}

impl Status {
    pub fn is_satisfied(self) -> bool {
        self == Status::SatisfiedWithWitness
    }
}

/// Outcome of the measure-decay search for one `(N, epsilon)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairOutcome {
    pub block: u64,
    pub epsilon: f64,
    /// Smallest `n > 2N` with both block sums below epsilon.
    pub witness: Option<u64>,
    /// Forward sum `sum_{|j|<=N} mu(f^{n+j}(W))` at the witness, or at the
    /// `n` minimising `max(forward, backward)` when there is none.
    pub forward_sum: f64,
    pub backward_sum: f64,
    /// The `n` at which the sums above were taken.
    pub at: u64,
}

/// Tail data of the two-sided mass series `sum_k mu(f^k(W))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesTail {
    /// `sum_{|k|<=horizon} mu(f^k(W))`.
    pub partial_sum: f64,
    pub ln_partial_sum: f64,
    /// The same partial sum at 90% of the horizon.
    pub partial_sum_at_tail_start: f64,
    /// First index of the tail window.
    pub tail_start: u64,
    /// Largest `mu_{k+1} / mu_k` over the tail, right side.
    pub right_max_ratio: f64,
    /// Largest `mu_{-(k+1)} / mu_{-k}` over the tail, left side.
    pub left_max_ratio: f64,
    pub right_tail_bounded_below: bool,
    pub left_tail_bounded_below: bool,
    pub ratio_threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostics {
    MeasureDecay { pairs: Vec<PairOutcome> },
    SeriesTail(SeriesTail),
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<u64>,
    pub horizon: u64,
    pub diagnostics: Diagnostics,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn is_satisfied(&self) -> bool {
        self.status.is_satisfied()
    }
}
