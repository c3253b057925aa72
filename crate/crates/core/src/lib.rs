//! Quantified backward-looking responsibility for groups of agents in
//! multi-agent decision trees with ambiguity and risk.
//!
//! The crate is organised bottom-up:
//!
//! * [`tree`] and [`format`] — validated decision trees and their file format;
//! * [`strategy`] — uniform strategies, scenarios and the likelihood recursion;
//! * [`contribution`] — the member-contribution functions `like`, `risk` and
//!   `negl` together with guaranteed likelihood and optimal avoidance;
//! * [`aggregation`] — `sum`, `avg`, `max` and the modified product `mprod`;
//! * [`responsibility`] — outcome responsibility `R(G, w)`;
//! * [`axioms`] — executable axiom checkers and a seeded tree fuzzer;
//! * [`builtins`] — the standard example scenarios.

pub mod aggregation;
pub mod axioms;
pub mod builtins;
pub mod contribution;
pub mod error;
pub mod format;
pub mod group;
pub mod responsibility;
mod solver;
pub mod strategy;
pub mod tree;

pub use aggregation::Aggregator;
pub use contribution::{ContributionFunction, ContributionQuery, ContributionValue};
pub use error::{AggError, EvalError, LoadError, TreeError, ValidationError, ValidationErrors};
pub use group::Group;
pub use tree::{AgentIx, DecisionTree, NodeIx, NodeKind};

/// Absolute tolerance for every numeric comparison.
pub const EPS: f64 = 1e-9;

/// Default bound on enumerated strategy or scenario combinations.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "GROUPRESP_CAP";

/// Numeric tolerance and enumeration bound shared by all evaluations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Limits {
    pub eps: f64,
    pub cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            eps: EPS,
            cap: DEFAULT_CAP,
        }
    }
}

impl Limits {
    /// Defaults, with the cap taken from `GROUPRESP_CAP` when it is set to a
    /// positive integer.
    pub fn from_env() -> Self {
        let mut l = Limits::default();
        if let Some(cap) = std::env::var(CAP_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
            .filter(|&c| c >= 1)
        {
            l.cap = cap;
        }
        l
    }

    pub fn with_cap(self, cap: u64) -> Self {
        Limits { cap, ..self }
    }
}
