//! Scattered sets and the crown-or-scatter dichotomy.
//!
//! The extraction lemmas run in one of two modes. [`Mode::Guaranteed`] insists on the
//! size thresholds under which success is certain; these are astronomically large, so
//! desk-scale inputs use [`Mode::BestEffort`], which attempts the same procedure on
//! whatever is available and reports failure explicitly. Every returned witness is
//! checked by its verifier first.

mod bounds;
mod clique;
mod controlled;
mod dichotomy;
mod extract;
mod scattered;

use thiserror::Error;

use crate::graph::GraphError;

pub use bounds::{
    clique_bound, lemma0_bound, lemma1_bound, margin_n, margin_n_tilde, margin_s, peel_bound, ramsey, rcdbg_bound,
    MAX_BITS,
};
pub use clique::{controlled_clique_extract, is_label_free, EdgeLabels, CLIQUE_MAX_VERTICES};
pub use controlled::{
    build_controlled_bipartite, ControlledBipartite, ControlledCrown, ControlledEdge, ControlledScattered,
};
pub use dichotomy::{
    main_tec_step, main_tec_step_with, scattered_after_deletion, uqw_iterate, uqw_refutes_crownful, Contradiction,
    Dichotomy,
};
pub use extract::{lemma0_extract, lemma1_extract, rcdbg_extract, Lemma1Outcome, RcdbgOutcome};
pub use scattered::{compute_scattered, greedy_scattered, is_scattered, ScatteredWitness, COMPUTE_SCATTERED_LIMIT};

/// Work units granted to a single dichotomy step by default.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuasiError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("input set is not scattered at the requested radius")]
    NotScattered,
    #[error("best-effort extraction failed: {0}")]
    BestEffortFailure(String),
    #[error("work budget exhausted")]
    BudgetExhausted,
    #[error("value too large to evaluate: {0}")]
    TooLarge(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Guaranteed,
    BestEffort,
}

/// Mode plus a work counter shared by nested extraction calls.
#[derive(Debug, Clone)]
pub struct Effort {
    pub mode: Mode,
    pub remaining: u64,
}

impl Effort {
    pub fn best_effort(budget: u64) -> Self {
        Effort { mode: Mode::BestEffort, remaining: budget }
    }

    pub fn guaranteed(budget: u64) -> Self {
        Effort { mode: Mode::Guaranteed, remaining: budget }
    }

    pub fn spend(&mut self, units: u64) -> Result<(), QuasiError> {
        self.remaining = self.remaining.checked_sub(units).ok_or(QuasiError::BudgetExhausted)?;
        Ok(())
    }
}
