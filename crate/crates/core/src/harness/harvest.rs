use crate::cnf::{generate_random_ksat, Formula};
use crate::oracle::dpll_solve;
use crate::restart::UniformRestart;
use crate::sls::{solve, SolverConfig};

use super::config::GeneratorSpec;

/// Settings for picking out satisfiable instances that plain WalkSAT finds hard.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarvestConfig {
    pub generator: GeneratorSpec,
    /// Budget for each probe; probe `j` runs with seed `probe.seed + j`.
    pub probe: SolverConfig,
    pub probe_runs: u32,
    /// Keep instances whose probe failure fraction is at least this.
    pub failure_threshold: f64,
    pub oracle_budget: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HardInstance {
    pub formula: Formula,
    /// Fraction of uniform-WalkSAT probes that ran out of budget.
    pub failure_rate: f64,
    pub oracle_decisions: u64,
}

/// Generates the batch, keeps what DPLL proves satisfiable, then keeps
/// those on which budget-limited uniform WalkSAT fails on at least
/// `failure_threshold` of its probe seeds.
pub fn harvest_hard_instances(cfg: &HarvestConfig) -> Vec<HardInstance> {
    let g = cfg.generator;
    let mut out = Vec::new();
    for i in 0..g.count {
        let Ok(formula) = generate_random_ksat(
            g.num_vars,
            g.num_clauses,
            g.k,
            g.seed.wrapping_add(i as u64),
        ) else {
            return out;
        };
        let oracle = match dpll_solve(&formula, cfg.oracle_budget) {
            Ok(r) if r.is_sat() => r,
            _ => continue,
        };
        let mut failures = 0u32;
        for j in 0..cfg.probe_runs {
            let probe = SolverConfig {
                seed: cfg.probe.seed.wrapping_add(j as u64),
                ..cfg.probe
            };
            let mut policy = UniformRestart::new(formula.num_vars());
            let r = solve(&formula, &probe, &mut policy)
                .expect("generated formulas have no empty clauses");
            failures += !r.solved as u32;
        }
        let failure_rate = if cfg.probe_runs == 0 {
            0.0
        } else {
            failures as f64 / cfg.probe_runs as f64
        };
        if failure_rate >= cfg.failure_threshold {
            log::debug!(
                "{}: probe failure rate {failure_rate:.2}",
                formula.name().unwrap_or("?")
            );
            out.push(HardInstance {
                formula,
                failure_rate,
                oracle_decisions: oracle.decisions,
            });
        }
    }
    out
}
