//! Stochastic local search for CNF satisfiability with learned restarts.
//!
//! The solver is WalkSAT; what differs between the four variants is how each
//! try's starting assignment is drawn (see [`restart`]). BetaWalkSAT keeps a
//! Beta belief per variable and nudges it away from the values that ended
//! each failed try.
//!
//! ```
//! use betasat_core::{cnf::parse_dimacs, restart::Algorithm, sls::{solve, SolverConfig}};
//!
//! let f = parse_dimacs("p cnf 2 2\n1 2 0\n-1 0\n").unwrap();
//! let mut policy = Algorithm::BetaWalkSat.policy(f.num_vars(), Default::default());
//! let result = solve(&f, &SolverConfig::default(), policy.as_mut()).unwrap();
//! assert!(result.solved);
//! ```

pub mod cnf;
pub mod harness;
pub mod oracle;
pub mod restart;
pub mod rng;
pub mod sls;

pub use cnf::{evaluate, Assignment, Clause, Formula, Literal};
pub use oracle::{dpll_solve, OracleResult, OracleStatus};
pub use restart::{Algorithm, PolicyParams, RestartPolicy};
pub use sls::{solve, SolveResult, SolverConfig, TrialOutcome};
