use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use crate::cnf::{generate_random_ksat, parse_dimacs, Formula};
use crate::oracle::dpll_solve;
use crate::restart::Algorithm;
use crate::sls::{solve, SolveError};

use super::config::SuiteConfig;
use super::record::RunRecord;

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub id: String,
    pub formula: Formula,
    /// DPLL proved it satisfiable.
    pub oracle_verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedInstance {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("instance {instance}, {algorithm}: {source}")]
    Solve {
        instance: String,
        algorithm: Algorithm,
        source: SolveError,
    },
    #[error("writing records: {0}")]
    Sink(#[from] std::io::Error),
}

/// Reads instance files and generates the configured batch. Unreadable or
/// invalid files are skipped with a logged warning and returned separately.
/// With `oracle_filter`, only instances DPLL proves satisfiable are kept;
/// a generated batch keeps drawing seeds until `count` such instances exist
/// (giving up after `100 * count` draws).
pub fn load_instances(cfg: &SuiteConfig) -> (Vec<Instance>, Vec<SkippedInstance>) {
    let mut instances = Vec::new();
    let mut skipped = Vec::new();
    let verify = |f: &Formula| -> Option<bool> {
        if !cfg.oracle_filter {
            return Some(false);
        }
        match dpll_solve(f, cfg.oracle_budget) {
            Ok(r) if r.is_sat() => Some(true),
            _ => None,
        }
    };

    for path in &cfg.instance_files {
        let id = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let parsed = std::fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|text| parse_dimacs(&text).map_err(|e| e.to_string()));
        match parsed {
            Ok(formula) => match verify(&formula) {
                Some(oracle_verified) => instances.push(Instance {
                    id,
                    formula: formula.with_name(path.display().to_string()),
                    oracle_verified,
                }),
                None => log::info!("{}: not proven satisfiable, dropped", path.display()),
            },
            Err(reason) => {
                log::warn!("skipping {}: {reason}", path.display());
                skipped.push(SkippedInstance {
                    path: path.clone(),
                    reason,
                });
            }
        }
    }

    if let Some(g) = &cfg.generator {
        let max_draws = if cfg.oracle_filter {
            g.count * 100
        } else {
            g.count
        };
        let mut kept = 0;
        for i in 0..max_draws {
            if kept == g.count {
                break;
            }
            let seed = g.seed.wrapping_add(i as u64);
            let formula = generate_random_ksat(g.num_vars, g.num_clauses, g.k, seed)
                .expect("generator parameters validated with the config");
            if let Some(oracle_verified) = verify(&formula) {
                instances.push(Instance {
                    id: formula.name().unwrap_or_default().to_string(),
                    formula,
                    oracle_verified,
                });
                kept += 1;
            }
        }
        if kept < g.count {
            log::warn!(
                "only {kept} of {} requested generated instances were kept",
                g.count
            );
        }
    }
    (instances, skipped)
}

/// Seed of cell `(instance, algorithm, repetition)`: `base_seed` plus the
/// cell's row-major index. Distinct cells never share a seed.
pub fn cell_seed(
    base_seed: u64,
    instance_idx: usize,
    algo_idx: usize,
    rep: u32,
    n_algos: usize,
    reps: u32,
) -> u64 {
    let cell = (instance_idx as u64 * n_algos as u64 + algo_idx as u64) * reps as u64 + rep as u64;
    base_seed.wrapping_add(cell)
}

struct Cell {
    instance_idx: usize,
    algo_idx: usize,
    rep: u32,
}

fn run_cell(
    cfg: &SuiteConfig,
    instances: &[Instance],
    cell: &Cell,
) -> Result<RunRecord, HarnessError> {
    let instance = &instances[cell.instance_idx];
    let algorithm = cfg.algorithms[cell.algo_idx];
    let settings = cfg.settings_for(algorithm);
    let seed = cell_seed(
        cfg.base_seed,
        cell.instance_idx,
        cell.algo_idx,
        cell.rep,
        cfg.algorithms.len(),
        cfg.repetitions,
    );
    let mut solver = settings.solver;
    solver.seed = seed;
    let mut policy = algorithm.policy(instance.formula.num_vars(), settings.policy);
    let result = solve(&instance.formula, &solver, policy.as_mut()).map_err(|source| {
        HarnessError::Solve {
            instance: instance.id.clone(),
            algorithm,
            source,
        }
    })?;
    Ok(RunRecord {
        instance: instance.id.clone(),
        algorithm,
        seed,
        solved: result.solved,
        tries_used: result.tries_used,
        total_flips: result.total_flips,
        wall_time: result.elapsed.as_secs_f64(),
    })
}

/// Runs every (instance, algorithm, repetition) cell and hands each record to
/// `sink` as soon as it exists. With `cfg.jobs == 1` records arrive in cell
/// order; with more workers they arrive in completion order, but the record
/// set is the same.
pub fn run_suite(
    cfg: &SuiteConfig,
    instances: &[Instance],
    sink: &mut dyn FnMut(&RunRecord) -> std::io::Result<()>,
) -> Result<Vec<RunRecord>, HarnessError> {
    let cells: Vec<Cell> = (0..instances.len())
        .flat_map(|i| {
            (0..cfg.algorithms.len()).flat_map(move |a| {
                (0..cfg.repetitions).map(move |rep| Cell {
                    instance_idx: i,
                    algo_idx: a,
                    rep,
                })
            })
        })
        .collect();
    let mut records = Vec::with_capacity(cells.len());

    if cfg.jobs <= 1 {
        for cell in &cells {
            let record = run_cell(cfg, instances, cell)?;
            sink(&record)?;
            records.push(record);
        }
        return Ok(records);
    }

    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        let (tx, rx) = mpsc::channel::<Result<RunRecord, HarnessError>>();
        for _ in 0..cfg.jobs.min(cells.len()) {
            let tx = tx.clone();
            let (next, cells) = (&next, &cells);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cell) = cells.get(i) else { break };
                let out = run_cell(cfg, instances, cell);
                let failed = out.is_err();
                if tx.send(out).is_err() || failed {
                    break;
                }
            });
        }
        drop(tx);
        for result in rx {
            let stop = |e| {
                // drain the queue so workers exit promptly
                next.store(cells.len(), Ordering::Relaxed);
                Err(e)
            };
            let record = match result {
                Ok(r) => r,
                Err(e) => return stop(e),
            };
            if let Err(e) = sink(&record) {
                return stop(e.into());
            }
            records.push(record);
        }
        Ok(())
    })?;
    Ok(records)
}
