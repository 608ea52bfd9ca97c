//! Restart policies: how each try's initial assignment is drawn and what a
//! failed try teaches the next one.
//!
//! * [`UniformRestart`]: fair coins every try (classic WalkSAT).
//! * [`BetaRestart`]: per-variable Beta beliefs, updated with every failed
//!   try's final assignment.
//! * [`KBestRestart`]: Laplace-smoothed frequencies over the k best failed tries.
//! * [`AllHistoryRestart`]: the same over every failed try.

mod beta;
mod policies;

pub use beta::beta_sample;
pub use policies::{
    AllHistoryRestart, BeliefState, BetaRestart, HistoryEntry, KBestRestart, UniformRestart,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cnf::Assignment;
use crate::rng::SolverRng;
use crate::sls::TrialOutcome;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RestartError {
    #[error("Beta shape parameter must be positive and finite, got {0}")]
    BetaParameter(f64),
    #[error("belief increment must be non-negative and finite, got {0}")]
    Delta(f64),
    #[error("history capacity must be at least 1")]
    ZeroCapacity,
    #[error("failure feedback given for a solved try")]
    SolvedOutcome,
    #[error("outcome covers {got} variables, policy was built for {expected}")]
    SizeMismatch { expected: usize, got: usize },
}

/// Source of initial assignments for the outer loop.
pub trait RestartPolicy: Send {
    fn algorithm(&self) -> Algorithm;

    fn num_vars(&self) -> usize;

    fn sample_initial(&mut self, rng: &mut SolverRng) -> Assignment;

    /// Feedback from a try that ended without satisfying the formula.
    fn notify_failure(&mut self, outcome: &TrialOutcome) -> Result<(), RestartError>;

    /// Forget everything learned and size the policy for `num_vars` variables.
    fn reset(&mut self, num_vars: usize);

    /// Per-variable probability that the next sample sets the variable true.
    fn marginals(&self) -> Vec<f64>;
}

fn check_failure(num_vars: usize, outcome: &TrialOutcome) -> Result<(), RestartError> {
    if outcome.solved {
        return Err(RestartError::SolvedOutcome);
    }
    if outcome.final_assignment.num_vars() != num_vars {
        return Err(RestartError::SizeMismatch {
            expected: num_vars,
            got: outcome.final_assignment.num_vars(),
        });
    }
    Ok(())
}

/// The four solver variants compared by the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "WalkSAT")]
    WalkSat,
    #[serde(rename = "BetaWalkSAT")]
    BetaWalkSat,
    #[serde(rename = "KBestWalkSAT")]
    KBestWalkSat,
    #[serde(rename = "AllWalkSAT")]
    AllWalkSat,
}

/// Tunables shared by the learning policies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolicyParams {
    /// Pseudo-count added per failed try (BetaWalkSAT).
    pub delta: f64,
    /// History capacity (KBestWalkSAT).
    pub k: usize,
}

impl Default for PolicyParams {
    fn default() -> Self {
        PolicyParams { delta: 1.0, k: 5 }
    }
}

impl PolicyParams {
    pub fn validate(&self) -> Result<(), RestartError> {
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(RestartError::Delta(self.delta));
        }
        if self.k == 0 {
            return Err(RestartError::ZeroCapacity);
        }
        Ok(())
    }
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::WalkSat,
        Algorithm::BetaWalkSat,
        Algorithm::KBestWalkSat,
        Algorithm::AllWalkSat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::WalkSat => "WalkSAT",
            Algorithm::BetaWalkSat => "BetaWalkSAT",
            Algorithm::KBestWalkSat => "KBestWalkSAT",
            Algorithm::AllWalkSat => "AllWalkSAT",
        }
    }

    /// Short name used on the command line.
    pub fn flag(self) -> &'static str {
        match self {
            Algorithm::WalkSat => "walksat",
            Algorithm::BetaWalkSat => "beta",
            Algorithm::KBestWalkSat => "kbest",
            Algorithm::AllWalkSat => "all",
        }
    }

    /// Builds a fresh policy. Panics if `params` fails [`PolicyParams::validate`].
    pub fn policy(self, num_vars: usize, params: PolicyParams) -> Box<dyn RestartPolicy> {
        params.validate().expect("invalid policy parameters");
        match self {
            Algorithm::WalkSat => Box::new(UniformRestart::new(num_vars)),
            Algorithm::BetaWalkSat => {
                Box::new(BetaRestart::new(num_vars, params.delta).expect("validated"))
            }
            Algorithm::KBestWalkSat => {
                Box::new(KBestRestart::new(num_vars, params.k).expect("validated"))
            }
            Algorithm::AllWalkSat => Box::new(AllHistoryRestart::new(num_vars)),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown algorithm `{0}` (expected walksat, beta, kbest or all)")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.flag() == lower || a.name().to_ascii_lowercase() == lower)
            .or(match lower.as_str() {
                "5bestwalksat" | "5best" => Some(Algorithm::KBestWalkSat),
                "allhistory" => Some(Algorithm::AllWalkSat),
                _ => None,
            })
            .ok_or_else(|| UnknownAlgorithm(s.to_string()))
    }
}
