//! Complete DPLL search used as ground truth: unit propagation, pure-literal
//! elimination, chronological backtracking. Branches on the lowest-index
//! unassigned variable, trying true first, so decision counts are reproducible.

use crate::cnf::{evaluate, Assignment, Formula};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleStatus {
    Sat,
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub status: OracleStatus,
    pub witness: Option<Assignment>,
    pub decisions: u64,
    pub unit_propagations: u64,
}

impl OracleResult {
    pub fn is_sat(&self) -> bool {
        self.status == OracleStatus::Sat
    }
}

/// The decision limit was reached. Says nothing about satisfiability.
#[derive(Debug, thiserror::Error, Clone, Copy, PartialEq, Eq)]
#[error("decision budget of {budget} exhausted")]
pub struct BudgetExceeded {
    pub budget: u64,
}

#[derive(Clone, Copy, Debug)]
enum Reason {
    Decision { flipped: bool },
    Implied,
}

struct Dpll<'f> {
    formula: &'f Formula,
    values: Vec<Option<bool>>,
    trail: Vec<(usize, Reason)>,
    decisions: u64,
    unit_propagations: u64,
}

enum ClauseStatus {
    Satisfied,
    Conflict,
    Unit(usize, bool),
    Open,
}

impl<'f> Dpll<'f> {
    fn clause_status(&self, ci: usize) -> ClauseStatus {
        let mut free = None;
        let mut n_free = 0;
        for lit in self.formula.clause(ci).literals() {
            match self.values[lit.index()] {
                Some(v) if lit.is_satisfied_by(v) => return ClauseStatus::Satisfied,
                Some(_) => {}
                None => {
                    n_free += 1;
                    free = Some((lit.index(), lit.is_positive()));
                }
            }
        }
        match (n_free, free) {
            (0, _) => ClauseStatus::Conflict,
            (1, Some((v, val))) => ClauseStatus::Unit(v, val),
            _ => ClauseStatus::Open,
        }
    }

    fn assign(&mut self, var: usize, value: bool, reason: Reason) {
        self.values[var] = Some(value);
        self.trail.push((var, reason));
    }

    /// Unit propagation to fixpoint; false on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for ci in 0..self.formula.num_clauses() {
                match self.clause_status(ci) {
                    ClauseStatus::Conflict => return false,
                    ClauseStatus::Unit(v, val) => {
                        self.assign(v, val, Reason::Implied);
                        self.unit_propagations += 1;
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// Assigns pure literals of the open clauses. Returns whether anything changed.
    fn eliminate_pure(&mut self) -> bool {
        // bit 0: seen positive, bit 1: seen negative
        let mut seen = vec![0u8; self.values.len()];
        for ci in 0..self.formula.num_clauses() {
            if matches!(self.clause_status(ci), ClauseStatus::Satisfied) {
                continue;
            }
            for lit in self.formula.clause(ci).literals() {
                if self.values[lit.index()].is_none() {
                    seen[lit.index()] |= if lit.is_positive() { 1 } else { 2 };
                }
            }
        }
        let mut changed = false;
        for (v, &s) in seen.iter().enumerate() {
            if s == 1 || s == 2 {
                self.assign(v, s == 1, Reason::Implied);
                changed = true;
            }
        }
        changed
    }

    fn all_satisfied(&self) -> bool {
        (0..self.formula.num_clauses())
            .all(|ci| matches!(self.clause_status(ci), ClauseStatus::Satisfied))
    }

    /// Undo to the most recent untried branch; false when none is left.
    fn backtrack(&mut self) -> bool {
        while let Some((var, reason)) = self.trail.pop() {
            match reason {
                Reason::Decision { flipped: false } => {
                    let other = !self.values[var].expect("trail vars are assigned");
                    self.assign(var, other, Reason::Decision { flipped: true });
                    return true;
                }
                _ => self.values[var] = None,
            }
        }
        false
    }

    fn run(&mut self, budget: Option<u64>) -> Result<OracleStatus, BudgetExceeded> {
        loop {
            if !self.propagate() {
                if !self.backtrack() {
                    return Ok(OracleStatus::Unsat);
                }
                continue;
            }
            if self.all_satisfied() {
                return Ok(OracleStatus::Sat);
            }
            if self.eliminate_pure() {
                continue;
            }
            let var = self
                .values
                .iter()
                .position(Option::is_none)
                .expect("an open clause has a free variable");
            if let Some(b) = budget {
                if self.decisions >= b {
                    return Err(BudgetExceeded { budget: b });
                }
            }
            self.decisions += 1;
            self.assign(var, true, Reason::Decision { flipped: false });
        }
    }
}

/// Decides `formula`. Empty clauses are allowed and make it UNSAT.
/// `budget` caps the number of branching decisions.
pub fn dpll_solve(formula: &Formula, budget: Option<u64>) -> Result<OracleResult, BudgetExceeded> {
    let mut dpll = Dpll {
        formula,
        values: vec![None; formula.num_vars()],
        trail: Vec::new(),
        decisions: 0,
        unit_propagations: 0,
    };
    let status = dpll.run(budget)?;
    let witness = match status {
        OracleStatus::Sat => {
            let a = Assignment::new(dpll.values.iter().map(|v| v.unwrap_or(true)).collect());
            assert!(
                evaluate(formula, &a).expect("sized from formula").satisfied,
                "DPLL produced a non-satisfying witness"
            );
            Some(a)
        }
        OracleStatus::Unsat => None,
    };
    Ok(OracleResult {
        status,
        witness,
        decisions: dpll.decisions,
        unit_propagations: dpll.unit_propagations,
    })
}

/// Instances split by oracle verdict.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Partition {
    pub satisfiable: Vec<Formula>,
    pub unsatisfiable: Vec<Formula>,
    pub undecided: Vec<Formula>,
}

pub fn filter_satisfiable(
    instances: impl IntoIterator<Item = Formula>,
    budget: Option<u64>,
) -> Partition {
    let mut out = Partition::default();
    for f in instances {
        match dpll_solve(&f, budget) {
            Ok(r) if r.is_sat() => out.satisfiable.push(f),
            Ok(_) => out.unsatisfiable.push(f),
            Err(_) => out.undecided.push(f),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{generate_random_ksat, Clause};

    fn truth_table_sat(f: &Formula) -> bool {
        let n = f.num_vars();
        (0..1u32 << n).any(|bits| {
            let a = Assignment::new((0..n).map(|i| bits >> i & 1 == 1).collect());
            evaluate(f, &a).unwrap().satisfied
        })
    }

    #[test]
    fn small_unsat() {
        let f = Formula::from_dimacs_clauses(2, &[&[1, 2], &[-1], &[-2]]);
        let r = dpll_solve(&f, None).unwrap();
        assert_eq!(r.status, OracleStatus::Unsat);
        assert!(r.witness.is_none());
    }

    #[test]
    fn unit_clause_sat() {
        let f = Formula::from_dimacs_clauses(1, &[&[1]]);
        let r = dpll_solve(&f, None).unwrap();
        assert_eq!(r.witness, Some(Assignment::new(vec![true])));
        assert_eq!(r.decisions, 0);
        assert_eq!(r.unit_propagations, 1);
    }

    #[test]
    fn empty_clause_is_unsat() {
        let f = Formula::new(2, vec![Clause::from_dimacs(&[1, 2]), Clause::default()]).unwrap();
        assert_eq!(dpll_solve(&f, None).unwrap().status, OracleStatus::Unsat);
    }

    #[test]
    fn no_clauses_is_sat() {
        let f = Formula::new(3, vec![]).unwrap();
        assert!(dpll_solve(&f, None).unwrap().is_sat());
    }

    #[test]
    fn all_small_two_variable_formulas() {
        // every clause over {x1, ¬x1, x2, ¬x2}, including the empty one
        let clauses: Vec<Clause> = (0u32..16)
            .map(|mask| {
                let lits: Vec<i64> = [1, -1, 2, -2]
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &l)| l)
                    .collect();
                Clause::from_dimacs(&lits)
            })
            .collect();
        let mut checked = 0;
        let mut formulas = vec![Formula::new(2, vec![]).unwrap()];
        for a in &clauses {
            formulas.push(Formula::new(2, vec![a.clone()]).unwrap());
            for b in &clauses {
                formulas.push(Formula::new(2, vec![a.clone(), b.clone()]).unwrap());
            }
        }
        for f in formulas {
            let r = dpll_solve(&f, None).unwrap();
            assert_eq!(r.is_sat(), truth_table_sat(&f), "{f:?}");
            checked += 1;
        }
        assert_eq!(checked, 1 + 16 + 256);
    }

    #[test]
    fn budget_exhaustion() {
        let f = generate_random_ksat(150, 600, 3, 1).unwrap();
        assert_eq!(dpll_solve(&f, Some(1)), Err(BudgetExceeded { budget: 1 }));
    }

    #[test]
    fn decision_counts_are_reproducible() {
        let f = generate_random_ksat(40, 170, 3, 3).unwrap();
        assert_eq!(dpll_solve(&f, None), dpll_solve(&f, None));
    }

    #[test]
    fn partition_basic() {
        let sat = Formula::from_dimacs_clauses(1, &[&[1]]);
        let unsat = Formula::from_dimacs_clauses(1, &[&[1], &[-1]]);
        let p = filter_satisfiable(vec![sat.clone(), unsat.clone()], None);
        assert_eq!(p.satisfiable, vec![sat]);
        assert_eq!(p.unsatisfiable, vec![unsat]);
        assert!(p.undecided.is_empty());
        assert_eq!(filter_satisfiable(Vec::new(), None), Partition::default());
    }

    #[test]
    fn phase_transition_mixture() {
        let instances = (0..1000).map(|s| generate_random_ksat(20, 85, 3, s).unwrap());
        let p = filter_satisfiable(instances, None);
        assert!(!p.satisfiable.is_empty());
        assert!(!p.unsatisfiable.is_empty());
        assert!(p.undecided.is_empty());
    }
}
