//! Pure reductions over run records.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::record::RunRecord;
use crate::restart::Algorithm;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CactusPoint {
    /// Number of runs solved within `time_s`.
    pub solved: usize,
    pub time_s: f64,
}

/// Per algorithm, solved runs sorted by wall time: point i is (i, i-th smallest time).
/// Algorithms without a solve get an empty series.
pub fn cactus_data(records: &[RunRecord]) -> BTreeMap<Algorithm, Vec<CactusPoint>> {
    let mut times: BTreeMap<Algorithm, Vec<f64>> = BTreeMap::new();
    for r in records {
        let entry = times.entry(r.algorithm).or_default();
        if r.solved {
            entry.push(r.wall_time);
        }
    }
    times
        .into_iter()
        .map(|(algo, mut ts)| {
            ts.sort_by(f64::total_cmp);
            let series = ts
                .into_iter()
                .enumerate()
                .map(|(i, time_s)| CactusPoint {
                    solved: i + 1,
                    time_s,
                })
                .collect();
            (algo, series)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriesFlips {
    pub runs: usize,
    pub solved: usize,
    /// Mean over solved runs; `None` when nothing was solved.
    pub mean_tries: Option<f64>,
    pub mean_flips: Option<f64>,
}

impl TriesFlips {
    pub fn solve_rate(&self) -> f64 {
        self.solved as f64 / self.runs as f64
    }
}

pub fn tries_flips_summary(records: &[RunRecord]) -> BTreeMap<Algorithm, TriesFlips> {
    let mut acc: BTreeMap<Algorithm, (usize, usize, u64, u64)> = BTreeMap::new();
    for r in records {
        let e = acc.entry(r.algorithm).or_default();
        e.0 += 1;
        if r.solved {
            e.1 += 1;
            e.2 += r.tries_used as u64;
            e.3 += r.total_flips;
        }
    }
    acc.into_iter()
        .map(|(algo, (runs, solved, tries, flips))| {
            let mean = |total: u64| (solved > 0).then(|| total as f64 / solved as f64);
            (
                algo,
                TriesFlips {
                    runs,
                    solved,
                    mean_tries: mean(tries),
                    mean_flips: mean(flips),
                },
            )
        })
        .collect()
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("no records for instance `{0}`")]
pub struct UnknownInstance(pub String);

/// `100 * solved / runs` per algorithm on one instance.
pub fn solve_percentage(
    records: &[RunRecord],
    instance: &str,
) -> Result<BTreeMap<Algorithm, f64>, UnknownInstance> {
    let mut acc: BTreeMap<Algorithm, (usize, usize)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.instance == instance) {
        let e = acc.entry(r.algorithm).or_default();
        e.0 += 1;
        e.1 += r.solved as usize;
    }
    if acc.is_empty() {
        return Err(UnknownInstance(instance.to_string()));
    }
    Ok(acc
        .into_iter()
        .map(|(a, (runs, solved))| (a, 100.0 * solved as f64 / runs as f64))
        .collect())
}

/// Wilson score interval for a binomial proportion; `z = 1.96` gives ~95%.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// The three comparison tables as plain text.
pub fn render_report(records: &[RunRecord]) -> String {
    let mut out = String::new();

    writeln!(out, "== solved runs vs time (cactus) ==").unwrap();
    writeln!(out, "{:<14} {:>8} {:>12}", "algorithm", "solved", "time_s").unwrap();
    for (algo, series) in cactus_data(records) {
        if series.is_empty() {
            writeln!(out, "{:<14} {:>8} {:>12}", algo.name(), 0, "-").unwrap();
        }
        for pt in series {
            writeln!(
                out,
                "{:<14} {:>8} {:>12.6}",
                algo.name(),
                pt.solved,
                pt.time_s
            )
            .unwrap();
        }
    }

    writeln!(out, "\n== tries and flips per solution ==").unwrap();
    writeln!(
        out,
        "{:<14} {:>6} {:>7} {:>10} {:>11} {:>12}",
        "algorithm", "runs", "solved", "solve_rate", "mean_tries", "mean_flips"
    )
    .unwrap();
    let opt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.2}"));
    for (algo, s) in tries_flips_summary(records) {
        writeln!(
            out,
            "{:<14} {:>6} {:>7} {:>10.3} {:>11} {:>12}",
            algo.name(),
            s.runs,
            s.solved,
            s.solve_rate(),
            opt(s.mean_tries),
            opt(s.mean_flips)
        )
        .unwrap();
    }

    writeln!(out, "\n== solve percentage per instance ==").unwrap();
    let algos: BTreeSet<Algorithm> = records.iter().map(|r| r.algorithm).collect();
    let mut instances: Vec<&str> = Vec::new();
    for r in records {
        if !instances.contains(&r.instance.as_str()) {
            instances.push(&r.instance);
        }
    }
    write!(out, "{:<32}", "instance").unwrap();
    for a in &algos {
        write!(out, " {:>12}", a.name()).unwrap();
    }
    out.push('\n');
    for inst in instances {
        let pct = solve_percentage(records, inst).expect("instance taken from records");
        write!(out, "{inst:<32}").unwrap();
        for a in &algos {
            match pct.get(a) {
                Some(p) => write!(out, " {p:>11.1}%").unwrap(),
                None => write!(out, " {:>12}", "-").unwrap(),
            }
        }
        out.push('\n');
    }
    out
}
