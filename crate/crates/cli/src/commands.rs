use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use betasat_core::cnf::{
    emit_dimacs, generate_random_ksat, parse_dimacs_with, Assignment, Formula, ParseOptions,
};
use betasat_core::harness::{load_instances, render_report, run_suite, RecordWriter, SuiteConfig};
use betasat_core::oracle::{dpll_solve, OracleStatus};
use betasat_core::restart::PolicyParams;
use betasat_core::sls::{solve as sls_solve, SolverConfig};

use crate::{BenchArgs, GenArgs, OracleArgs, SolveArgs};

pub const EXIT_UNKNOWN: u8 = 0;
pub const EXIT_SAT: u8 = 10;
pub const EXIT_UNSAT: u8 = 20;

type CmdResult = Result<u8, String>;

fn read_formula(path: &Path, opts: ParseOptions) -> Result<Formula, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_dimacs_with(&text, opts).map_err(|e| format!("{}: {e}", path.display()))
}

fn value_line(a: &Assignment) -> String {
    let mut line = String::from("v");
    for lit in a.literals() {
        line.push(' ');
        line.push_str(&lit.to_dimacs().to_string());
    }
    line.push_str(" 0");
    line
}

pub fn solve(args: &SolveArgs) -> CmdResult {
    let formula = read_formula(&args.path, ParseOptions::default())?;
    let cfg = SolverConfig {
        p: args.p,
        max_tries: args.max_tries,
        max_flips: args.max_flips,
        seed: args.seed,
    };
    cfg.validate().map_err(|e| e.to_string())?;
    let params = PolicyParams {
        delta: args.delta,
        k: args.k,
    };
    params.validate().map_err(|e| e.to_string())?;
    let mut policy = args.algo.policy(formula.num_vars(), params);
    let result = sls_solve(&formula, &cfg, policy.as_mut()).map_err(|e| e.to_string())?;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let io_err = |e: io::Error| e.to_string();
    writeln!(out, "c algorithm {} seed {}", args.algo, args.seed).map_err(io_err)?;
    writeln!(
        out,
        "c tries {} flips {} time {:.6}s",
        result.tries_used,
        result.total_flips,
        result.elapsed.as_secs_f64()
    )
    .map_err(io_err)?;
    match &result.witness {
        Some(w) => {
            writeln!(out, "s SATISFIABLE\n{}", value_line(w)).map_err(io_err)?;
            Ok(EXIT_SAT)
        }
        None => {
            writeln!(out, "s UNKNOWN").map_err(io_err)?;
            Ok(EXIT_UNKNOWN)
        }
    }
}

pub fn gen(args: &GenArgs) -> CmdResult {
    let f = generate_random_ksat(args.vars, args.clauses, args.k, args.seed)
        .map_err(|e| e.to_string())?;
    let text = format!(
        "c random {}-SAT, seed {}\n{}",
        args.k,
        args.seed,
        emit_dimacs(&f)
    );
    match &args.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string())?,
    }
    Ok(0)
}

pub fn oracle(args: &OracleArgs) -> CmdResult {
    let formula = read_formula(
        &args.path,
        ParseOptions {
            allow_empty_clauses: true,
        },
    )?;
    match dpll_solve(&formula, args.budget) {
        Ok(r) => {
            println!(
                "c decisions {} propagations {}",
                r.decisions, r.unit_propagations
            );
            match r.status {
                OracleStatus::Sat => {
                    println!(
                        "s SATISFIABLE\n{}",
                        value_line(r.witness.as_ref().expect("SAT carries a witness"))
                    );
                    Ok(EXIT_SAT)
                }
                OracleStatus::Unsat => {
                    println!("s UNSATISFIABLE");
                    Ok(EXIT_UNSAT)
                }
            }
        }
        Err(e) => {
            println!("c {e}\ns UNKNOWN");
            Ok(EXIT_UNKNOWN)
        }
    }
}

pub fn bench(args: &BenchArgs) -> CmdResult {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| format!("{}: {e}", args.config.display()))?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    let mut cfg =
        SuiteConfig::parse(&text, base).map_err(|e| format!("{}: {e}", args.config.display()))?;
    if let Some(jobs) = args.jobs {
        cfg.jobs = jobs;
        cfg.validate().map_err(|e| e.to_string())?;
    }
    let (instances, skipped) = load_instances(&cfg);
    for s in &skipped {
        eprintln!("c skipped {}: {}", s.path.display(), s.reason);
    }
    if instances.is_empty() {
        return Err("no usable instances".into());
    }

    let file = File::create(&args.out).map_err(|e| format!("{}: {e}", args.out.display()))?;
    let mut writer = RecordWriter::new(BufWriter::new(file));
    let records = match run_suite(&cfg, &instances, &mut |r| writer.write(r)) {
        Ok(records) => records,
        Err(e) => {
            drop(writer);
            let _ = std::fs::remove_file(&args.out);
            return Err(e.to_string());
        }
    };
    writer
        .into_inner()
        .and_then(|mut w| w.flush())
        .map_err(|e| format!("{}: {e}", args.out.display()))?;

    print!("{}", render_report(&records));
    Ok(0)
}
