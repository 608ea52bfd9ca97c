//! The WalkSAT flip loop and the outer restart loop.
//!
//! Each solve draws from a single seeded stream. Per try: the restart policy
//! samples the initial assignment, then for each flip the violated clause is
//! drawn, followed by the draws documented on [`SearchState::pick_move`].

mod state;

pub use state::{Move, MoveKind, SearchState, UnsatBag};

use std::time::{Duration, Instant};

use rand::Rng;

use crate::cnf::{evaluate, Assignment, Formula, SizeMismatch};
use crate::restart::{RestartError, RestartPolicy};
use crate::rng::{seeded, SolverRng};

/// Inputs of the search: walk probability, try and flip budgets, seed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub p: f64,
    pub max_tries: u32,
    pub max_flips: u64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            p: 0.5,
            max_tries: 100,
            max_flips: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("walk probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("max_tries must be at least 1")]
    ZeroTries,
    #[error("max_flips must be at least 1")]
    ZeroFlips,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(ConfigError::Probability(self.p));
        }
        if self.max_tries == 0 {
            return Err(ConfigError::ZeroTries);
        }
        if self.max_flips == 0 {
            return Err(ConfigError::ZeroFlips);
        }
        Ok(())
    }
}

/// Result of one try.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    pub solved: bool,
    pub final_assignment: Assignment,
    pub flips_used: u64,
    pub unsat_remaining: usize,
}

/// Instrumentation hook for replaying a search.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchEvent<'a> {
    TryStart {
        try_index: u32,
        initial: &'a Assignment,
    },
    Flip {
        clause: usize,
        chosen: Move,
    },
    TryEnd {
        try_index: u32,
        outcome: &'a TrialOutcome,
    },
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SolveError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("clause {0} is empty; local search cannot satisfy it")]
    EmptyClause(usize),
    #[error(transparent)]
    Size(#[from] SizeMismatch),
    #[error(transparent)]
    Policy(#[from] RestartError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub solved: bool,
    /// Present iff `solved`; always accepted by [`evaluate`].
    pub witness: Option<Assignment>,
    pub tries_used: u32,
    pub total_flips: u64,
    pub elapsed: Duration,
    /// Time spent inside the policy's initial-assignment sampling.
    pub init_time: Duration,
}

/// One try from `initial`: at most `cfg.max_flips` flips, stopping as soon as
/// every clause is satisfied (including before the first flip).
pub fn run_try(
    formula: &Formula,
    initial: Assignment,
    cfg: &SolverConfig,
    rng: &mut SolverRng,
) -> Result<TrialOutcome, SizeMismatch> {
    let mut state = SearchState::new(formula, initial)?;
    Ok(walk(&mut state, cfg, rng, &mut |_| {}))
}

fn walk(
    state: &mut SearchState<'_>,
    cfg: &SolverConfig,
    rng: &mut SolverRng,
    observe: &mut dyn FnMut(SearchEvent<'_>),
) -> TrialOutcome {
    while !state.is_satisfied() && state.flips_done() < cfg.max_flips {
        let clause = state.unsat().sample(rng);
        let chosen = state.pick_move(clause, cfg.p, rng);
        observe(SearchEvent::Flip { clause, chosen });
        state.flip(chosen.var);
    }
    TrialOutcome {
        solved: state.is_satisfied(),
        final_assignment: state.assignment().clone(),
        flips_used: state.flips_done(),
        unsat_remaining: state.num_unsat(),
    }
}

/// Runs up to `cfg.max_tries` tries, seeding each from `policy` and feeding
/// every failed try back to it. The policy is reset for `formula` first.
///
/// An unsolved result means the budget ran out; it says nothing about
/// unsatisfiability.
pub fn solve(
    formula: &Formula,
    cfg: &SolverConfig,
    policy: &mut dyn RestartPolicy,
) -> Result<SolveResult, SolveError> {
    solve_observed(formula, cfg, policy, &mut |_| {})
}

pub fn solve_observed(
    formula: &Formula,
    cfg: &SolverConfig,
    policy: &mut dyn RestartPolicy,
    observe: &mut dyn FnMut(SearchEvent<'_>),
) -> Result<SolveResult, SolveError> {
    cfg.validate()?;
    if let Some(i) = formula.clauses().iter().position(|c| c.is_empty()) {
        return Err(SolveError::EmptyClause(i));
    }
    let started = Instant::now();
    policy.reset(formula.num_vars());
    let mut rng = seeded(cfg.seed);
    let mut state = SearchState::new(formula, Assignment::all(formula.num_vars(), false))?;
    let mut total_flips = 0u64;
    let mut init_time = Duration::ZERO;

    for try_index in 0..cfg.max_tries {
        let t0 = Instant::now();
        let initial = policy.sample_initial(&mut rng);
        init_time += t0.elapsed();
        observe(SearchEvent::TryStart {
            try_index,
            initial: &initial,
        });
        state.reset(initial)?;
        let outcome = walk(&mut state, cfg, &mut rng, observe);
        total_flips += outcome.flips_used;
        observe(SearchEvent::TryEnd {
            try_index,
            outcome: &outcome,
        });
        if outcome.solved {
            let witness = outcome.final_assignment;
            assert!(
                evaluate(formula, &witness)?.satisfied,
                "incremental state reported a non-satisfying witness"
            );
            return Ok(SolveResult {
                solved: true,
                witness: Some(witness),
                tries_used: try_index + 1,
                total_flips,
                elapsed: started.elapsed(),
                init_time,
            });
        }
        policy.notify_failure(&outcome)?;
    }

    Ok(SolveResult {
        solved: false,
        witness: None,
        tries_used: cfg.max_tries,
        total_flips,
        elapsed: started.elapsed(),
        init_time,
    })
}

/// Uniform random assignment; used by tests and probes.
pub fn random_assignment(num_vars: usize, rng: &mut SolverRng) -> Assignment {
    Assignment::new((0..num_vars).map(|_| rng.random_bool(0.5)).collect())
}
