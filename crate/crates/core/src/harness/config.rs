//! Suite configuration: a plain `key = value` text file.
//!
//! ```text
//! # lines starting with '#' are comments
//! instances = uf20-01.cnf uf20-02.cnf   # paths relative to the config file
//! generate.vars = 20                      # and/or a random 3-SAT batch
//! generate.clauses = 85
//! generate.k = 3
//! generate.count = 100
//! generate.seed = 1
//! oracle_filter = true                    # keep only instances DPLL proves SAT
//! oracle_budget = 1000000
//! algorithms = walksat beta kbest all
//! p = 0.5
//! max_tries = 100
//! max_flips = 10000
//! delta = 1.0
//! k = 5
//! beta.p = 0.4                            # per-algorithm override
//! repetitions = 10
//! base_seed = 42
//! jobs = 1
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::restart::{Algorithm, PolicyParams};
use crate::sls::SolverConfig;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SuiteConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value `{value}` for `{key}`")]
    Value {
        line: usize,
        key: String,
        value: String,
    },
    #[error("{0}")]
    Invalid(String),
}

/// Random k-SAT batch: instance `i` uses seed `seed + i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub k: usize,
    pub count: usize,
    pub seed: u64,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec {
            num_vars: 20,
            num_clauses: 85,
            k: 3,
            count: 100,
            seed: 1,
        }
    }
}

/// Solver budget and policy tunables for one algorithm. The seed inside
/// `solver` is ignored; cells derive their own.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AlgoSettings {
    pub solver: SolverConfig,
    pub policy: PolicyParams,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub instance_files: Vec<PathBuf>,
    pub generator: Option<GeneratorSpec>,
    pub oracle_filter: bool,
    pub oracle_budget: Option<u64>,
    pub algorithms: Vec<Algorithm>,
    pub settings: BTreeMap<Algorithm, AlgoSettings>,
    pub repetitions: u32,
    pub base_seed: u64,
    pub jobs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            instance_files: Vec::new(),
            generator: None,
            oracle_filter: false,
            oracle_budget: None,
            algorithms: Algorithm::ALL.to_vec(),
            settings: Algorithm::ALL
                .into_iter()
                .map(|a| (a, AlgoSettings::default()))
                .collect(),
            repetitions: 1,
            base_seed: 0,
            jobs: 1,
        }
    }
}

impl SuiteConfig {
    pub fn settings_for(&self, algorithm: Algorithm) -> AlgoSettings {
        self.settings.get(&algorithm).copied().unwrap_or_default()
    }

    /// Applies `f` to the settings of every algorithm.
    pub fn set_all(&mut self, f: impl Fn(&mut AlgoSettings)) {
        for a in Algorithm::ALL {
            f(self.settings.entry(a).or_default());
        }
    }

    pub fn validate(&self) -> Result<(), SuiteConfigError> {
        if self.instance_files.is_empty() && self.generator.is_none() {
            return Err(SuiteConfigError::Invalid(
                "no instances: set `instances` or `generate.*`".into(),
            ));
        }
        if self.algorithms.is_empty() {
            return Err(SuiteConfigError::Invalid("no algorithms selected".into()));
        }
        if self.repetitions == 0 {
            return Err(SuiteConfigError::Invalid(
                "repetitions must be at least 1".into(),
            ));
        }
        if self.jobs == 0 {
            return Err(SuiteConfigError::Invalid("jobs must be at least 1".into()));
        }
        if let Some(g) = &self.generator {
            if g.k == 0 || g.k > g.num_vars || g.num_clauses == 0 || g.count == 0 {
                return Err(SuiteConfigError::Invalid(format!(
                    "bad generator parameters {g:?}"
                )));
            }
        }
        for a in &self.algorithms {
            let s = self.settings_for(*a);
            s.solver
                .validate()
                .map_err(|e| SuiteConfigError::Invalid(format!("{a}: {e}")))?;
            s.policy
                .validate()
                .map_err(|e| SuiteConfigError::Invalid(format!("{a}: {e}")))?;
        }
        Ok(())
    }

    /// Parses the key-value format. Relative instance paths resolve against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, SuiteConfigError> {
        let mut cfg = SuiteConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(SuiteConfigError::Syntax { line: line_no })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || SuiteConfigError::Value {
                line: line_no,
                key: key.to_string(),
                value: value.to_string(),
            };

            if let Some(field) = key.strip_prefix("generate.") {
                let g = cfg.generator.get_or_insert_with(GeneratorSpec::default);
                match field {
                    "vars" => g.num_vars = parse(value).ok_or_else(bad)?,
                    "clauses" => g.num_clauses = parse(value).ok_or_else(bad)?,
                    "k" => g.k = parse(value).ok_or_else(bad)?,
                    "count" => g.count = parse(value).ok_or_else(bad)?,
                    "seed" => g.seed = parse(value).ok_or_else(bad)?,
                    _ => {
                        return Err(SuiteConfigError::UnknownKey {
                            line: line_no,
                            key: key.into(),
                        })
                    }
                }
                continue;
            }

            // `<algo>.<field>` overrides one algorithm, bare `<field>` sets all.
            let (targets, field) = match key.split_once('.') {
                Some((algo, field)) => {
                    let a: Algorithm = algo.parse().map_err(|_| SuiteConfigError::UnknownKey {
                        line: line_no,
                        key: key.into(),
                    })?;
                    (vec![a], field)
                }
                None => (Algorithm::ALL.to_vec(), key),
            };
            let per_algo = matches!(field, "p" | "max_tries" | "max_flips" | "delta" | "k");
            if per_algo {
                for a in targets {
                    let s = cfg.settings.entry(a).or_default();
                    match field {
                        "p" => s.solver.p = parse(value).ok_or_else(bad)?,
                        "max_tries" => s.solver.max_tries = parse(value).ok_or_else(bad)?,
                        "max_flips" => s.solver.max_flips = parse(value).ok_or_else(bad)?,
                        "delta" => s.policy.delta = parse(value).ok_or_else(bad)?,
                        "k" => s.policy.k = parse(value).ok_or_else(bad)?,
                        _ => unreachable!(),
                    }
                }
                continue;
            }
            if key.contains('.') {
                return Err(SuiteConfigError::UnknownKey {
                    line: line_no,
                    key: key.into(),
                });
            }
            match key {
                "instances" => cfg
                    .instance_files
                    .extend(split_list(value).map(|p| base_dir.join(p))),
                "algorithms" => {
                    cfg.algorithms = split_list(value)
                        .map(|a| a.parse().map_err(|_| bad()))
                        .collect::<Result<_, _>>()?;
                }
                "oracle_filter" => cfg.oracle_filter = parse(value).ok_or_else(bad)?,
                "oracle_budget" => {
                    cfg.oracle_budget = match value {
                        "none" | "unlimited" => None,
                        v => Some(parse(v).ok_or_else(bad)?),
                    }
                }
                "repetitions" => cfg.repetitions = parse(value).ok_or_else(bad)?,
                "base_seed" => cfg.base_seed = parse(value).ok_or_else(bad)?,
                "jobs" => cfg.jobs = parse(value).ok_or_else(bad)?,
                _ => {
                    return Err(SuiteConfigError::UnknownKey {
                        line: line_no,
                        key: key.into(),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse<T: FromStr>(s: &str) -> Option<T> {
    s.parse().ok()
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}
