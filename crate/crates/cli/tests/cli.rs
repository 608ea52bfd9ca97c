use std::path::Path;
use std::process::{Command, Output};

use betasat_core::cnf::{evaluate, parse_dimacs, Assignment};

fn betasat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betasat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn witness(out: &str) -> Assignment {
    let v = out.lines().find(|l| l.starts_with("v ")).expect("v line");
    let lits: Vec<i64> = v[2..]
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(lits.last(), Some(&0));
    Assignment::new(lits[..lits.len() - 1].iter().map(|&l| l > 0).collect())
}

#[test]
fn solve_trivial_instance() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "unit.cnf", "p cnf 1 1\n1 0\n");
    let o = betasat(&["solve", &f]);
    assert_eq!(o.status.code(), Some(10));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "s SATISFIABLE"));
    assert!(text.lines().any(|l| l == "v 1 0"));
}

#[test]
fn solve_unsat_reports_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    for algo in ["walksat", "beta", "kbest", "all"] {
        let o = betasat(&[
            "solve",
            &f,
            "--algo",
            algo,
            "--max-tries",
            "3",
            "--max-flips",
            "10",
        ]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert!(text.lines().any(|l| l == "s UNKNOWN"));
        assert!(!text.contains("UNSATISFIABLE"));
    }
}

#[test]
fn solve_witness_checks_out() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.cnf");
    let p = path.to_str().unwrap();
    for seed in 0..8 {
        let seed = seed.to_string();
        assert_eq!(
            betasat(&[
                "gen",
                "--vars",
                "30",
                "--clauses",
                "110",
                "--seed",
                &seed,
                "--out",
                p
            ])
            .status
            .code(),
            Some(0)
        );
        let formula = parse_dimacs(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let o = betasat(&["solve", p, "--seed", &seed]);
        if o.status.code() == Some(10) {
            let w = witness(&stdout(&o));
            assert!(evaluate(&formula, &w).unwrap().satisfied);
        } else {
            assert_eq!(o.status.code(), Some(0));
        }
    }
}

#[test]
fn solve_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.cnf", "p cnf 1 1\n2 0\n");
    let o = betasat(&["solve", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
    assert!(stdout(&o).is_empty());

    let empty = write(dir.path(), "empty.cnf", "p cnf 1 1\n0\n");
    assert_eq!(betasat(&["solve", &empty]).status.code(), Some(1));

    let ok = write(dir.path(), "ok.cnf", "p cnf 1 1\n1 0\n");
    assert_eq!(
        betasat(&["solve", &ok, "--p", "1.5"]).status.code(),
        Some(1)
    );
    assert_eq!(
        betasat(&["solve", &ok, "--algo", "novelty"]).status.code(),
        Some(1)
    );
    assert_eq!(
        betasat(&["solve", &dir.path().join("nope.cnf").to_string_lossy()])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(betasat(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(betasat(&["--help"]).status.code(), Some(0));
}

#[test]
fn gen_is_deterministic_and_parses() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.cnf");
    let b = dir.path().join("b.cnf");
    for p in [&a, &b] {
        let o = betasat(&[
            "gen",
            "--vars",
            "20",
            "--clauses",
            "85",
            "--k",
            "3",
            "--seed",
            "7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.lines().any(|l| l == "p cnf 20 85"));
    let f = parse_dimacs(&text).unwrap();
    assert_eq!(f.num_clauses(), 85);

    let o = betasat(&["gen", "--vars", "20", "--clauses", "85", "--seed", "7"]);
    assert_eq!(stdout(&o), text);
}

#[test]
fn gen_invalid_parameters_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.cnf");
    let o = betasat(&[
        "gen",
        "--vars",
        "2",
        "--clauses",
        "5",
        "--k",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn oracle_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let unsat = write(dir.path(), "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let o = betasat(&["oracle", &unsat]);
    assert_eq!(o.status.code(), Some(20));
    assert!(stdout(&o).lines().any(|l| l == "s UNSATISFIABLE"));

    let sat = write(dir.path(), "s.cnf", "p cnf 1 1\n1 0\n");
    let o = betasat(&["oracle", &sat]);
    assert_eq!(o.status.code(), Some(10));
    assert!(stdout(&o).lines().any(|l| l == "v 1 0"));

    let empty = write(dir.path(), "e.cnf", "p cnf 2 2\n1 2 0\n0\n");
    assert_eq!(betasat(&["oracle", &empty]).status.code(), Some(20));

    let big = dir.path().join("big.cnf");
    betasat(&[
        "gen",
        "--vars",
        "200",
        "--clauses",
        "800",
        "--seed",
        "1",
        "--out",
        big.to_str().unwrap(),
    ]);
    let o = betasat(&["oracle", big.to_str().unwrap(), "--budget", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "s UNKNOWN"));

    let bad = write(dir.path(), "b.cnf", "p cnf 1\n");
    assert_eq!(betasat(&["oracle", &bad]).status.code(), Some(1));
}

fn records_without_time(path: &Path) -> Vec<String> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .map(|l| l.rsplit_once(',').unwrap().0.to_string())
        .collect()
}

#[test]
fn bench_minimal_config() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "one.cnf", "p cnf 2 2\n1 2 0\n-1 0\n");
    let cfg = write(
        dir.path(),
        "suite.txt",
        "instances = one.cnf\nalgorithms = beta\nrepetitions = 1\n",
    );
    let out = dir.path().join("records.csv");
    let o = betasat(&["bench", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rows = records_without_time(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], "instance,algorithm,seed,solved,tries,flips");
    let text = stdout(&o);
    assert!(text.contains("cactus"));
    assert!(text.contains("tries and flips"));
    assert!(text.contains("solve percentage"));
}

#[test]
fn bench_four_algorithms_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "suite.txt",
        "generate.vars = 20\ngenerate.clauses = 85\ngenerate.count = 4\ngenerate.seed = 3\noracle_filter = true\n\
         algorithms = walksat beta kbest all\nmax_tries = 20\nmax_flips = 2000\nrepetitions = 2\nbase_seed = 11\n",
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let oa = betasat(&["bench", "--config", &cfg, "--out", a.to_str().unwrap()]);
    let ob = betasat(&["bench", "--config", &cfg, "--out", b.to_str().unwrap()]);
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(ob.status.code(), Some(0));
    assert_eq!(records_without_time(&a), records_without_time(&b));
    assert_eq!(records_without_time(&a).len(), 1 + 4 * 4 * 2);
    let text = stdout(&oa);
    for name in ["WalkSAT", "BetaWalkSAT", "KBestWalkSAT", "AllWalkSAT"] {
        assert!(text.contains(name), "{name}");
    }

    let c = dir.path().join("c.csv");
    let oc = betasat(&[
        "bench",
        "--config",
        &cfg,
        "--out",
        c.to_str().unwrap(),
        "--jobs",
        "3",
    ]);
    assert_eq!(oc.status.code(), Some(0));
    let mut x = records_without_time(&a);
    let mut y = records_without_time(&c);
    x.sort();
    y.sort();
    assert_eq!(x, y);
}

#[test]
fn bench_invalid_config_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "suite.txt",
        "instances = x.cnf\nrepetitions = zero\n",
    );
    let out = dir.path().join("records.csv");
    let o = betasat(&["bench", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());

    let cfg = write(dir.path(), "suite2.txt", "instances = missing.cnf\n");
    let o = betasat(&["bench", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}
