//! Shared fixtures for the criterion benchmarks.

use betasat_core::cnf::{generate_random_ksat, Formula};
use betasat_core::oracle::dpll_solve;

/// First satisfiable random 3-SAT instance at the given size and ratio,
/// scanning seeds upward from `seed`.
pub fn satisfiable_3sat(num_vars: usize, ratio: f64, seed: u64) -> Formula {
    let clauses = (num_vars as f64 * ratio).round() as usize;
    (seed..)
        .map(|s| generate_random_ksat(num_vars, clauses, 3, s).expect("valid parameters"))
        .find(|f| dpll_solve(f, None).map(|r| r.is_sat()).unwrap_or(false))
        .expect("satisfiable instances exist below the threshold")
}
