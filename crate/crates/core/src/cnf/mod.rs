//! CNF data model: literals, clauses, formulas and total assignments.

mod dimacs;
mod generate;

pub use dimacs::{emit_dimacs, parse_dimacs, parse_dimacs_with, DimacsError, ParseOptions};
pub use generate::{generate_random_ksat, GenerateError};

use std::fmt;

/// A variable occurrence. Variables are 1-based, as in DIMACS.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: u32,
    positive: bool,
}

impl Literal {
    /// Panics if `var` is zero.
    pub fn new(var: u32, positive: bool) -> Self {
        assert!(var >= 1, "variables are 1-based");
        Literal { var, positive }
    }

    pub fn pos(var: u32) -> Self {
        Self::new(var, true)
    }

    pub fn neg(var: u32) -> Self {
        Self::new(var, false)
    }

    /// Build from a signed DIMACS integer. Returns `None` for 0.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        if lit == 0 || lit.unsigned_abs() > u32::MAX as u64 {
            return None;
        }
        Some(Literal::new(lit.unsigned_abs() as u32, lit > 0))
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }

    #[inline]
    pub fn var(self) -> u32 {
        self.var
    }

    /// 0-based variable index.
    #[inline]
    pub fn index(self) -> usize {
        self.var as usize - 1
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.positive
    }

    /// Dense literal code: `2 * index + (negative as usize)`.
    #[inline]
    pub fn code(self) -> usize {
        2 * self.index() + (!self.positive) as usize
    }

    #[inline]
    pub fn negate(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// True when `value` (the variable's truth value) makes this literal true.
    #[inline]
    pub fn is_satisfied_by(self, value: bool) -> bool {
        value == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Builds a clause, dropping repeated literals while keeping first-seen order.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Self {
        let mut out: Vec<Literal> = Vec::new();
        for lit in literals {
            if !out.contains(&lit) {
                out.push(lit);
            }
        }
        Clause { literals: out }
    }

    /// Convenience constructor from signed DIMACS integers. Panics on 0.
    pub fn from_dimacs(lits: &[i64]) -> Self {
        Clause::new(
            lits.iter()
                .map(|&l| Literal::from_dimacs(l).expect("0 is not a literal")),
        )
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Contains both `x` and `¬x` for some variable.
    pub fn is_tautology(&self) -> bool {
        self.literals
            .iter()
            .any(|l| self.literals.contains(&l.negate()))
    }

    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        self.literals
            .iter()
            .any(|l| l.is_satisfied_by(assignment.value(l.var())))
    }

    fn sorted(&self) -> Vec<Literal> {
        let mut lits = self.literals.clone();
        lits.sort();
        lits
    }
}

/// An immutable CNF instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    num_vars: usize,
    clauses: Vec<Clause>,
    name: Option<String>,
    tautologies: Vec<usize>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("clause {clause} mentions variable {var} but the formula has {num_vars} variables")]
    VariableOutOfRange {
        clause: usize,
        var: u32,
        num_vars: usize,
    },
}

impl Formula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        for (ci, clause) in clauses.iter().enumerate() {
            if let Some(l) = clause
                .literals()
                .iter()
                .find(|l| l.var() as usize > num_vars)
            {
                return Err(FormulaError::VariableOutOfRange {
                    clause: ci,
                    var: l.var(),
                    num_vars,
                });
            }
        }
        let tautologies = clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_tautology())
            .map(|(i, _)| i)
            .collect();
        Ok(Formula {
            num_vars,
            clauses,
            name: None,
            tautologies,
        })
    }

    /// Builds from signed DIMACS clause lists. Panics on invalid input; meant for tests and fixtures.
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[&[i64]]) -> Self {
        Formula::new(
            num_vars,
            clauses.iter().map(|c| Clause::from_dimacs(c)).collect(),
        )
        .expect("valid formula")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, index: usize) -> &Clause {
        &self.clauses[index]
    }

    /// Indices of clauses containing both polarities of some variable.
    pub fn tautologies(&self) -> &[usize] {
        &self.tautologies
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    /// Total number of literal occurrences.
    pub fn size(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }

    pub fn clause_var_ratio(&self) -> f64 {
        self.clauses.len() as f64 / self.num_vars.max(1) as f64
    }

    /// Equality up to clause order and literal order within clauses. Names are ignored.
    pub fn same_clauses(&self, other: &Formula) -> bool {
        if self.num_vars != other.num_vars || self.clauses.len() != other.clauses.len() {
            return false;
        }
        let canon = |f: &Formula| {
            let mut cs: Vec<Vec<Literal>> = f.clauses.iter().map(Clause::sorted).collect();
            cs.sort();
            cs
        };
        canon(self) == canon(other)
    }
}

/// A total truth assignment over variables `1..=num_vars`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn all(num_vars: usize, value: bool) -> Self {
        Assignment {
            values: vec![value; num_vars],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    /// Value of 1-based variable `var`.
    #[inline]
    pub fn value(&self, var: u32) -> bool {
        self.values[var as usize - 1]
    }

    #[inline]
    pub fn set(&mut self, var: u32, value: bool) {
        self.values[var as usize - 1] = value;
    }

    #[inline]
    pub fn flip(&mut self, var: u32) {
        let v = &mut self.values[var as usize - 1];
        *v = !*v;
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// The literals made true by this assignment, in variable order.
    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| Literal::new(i as u32 + 1, v))
    }

    pub fn count_true(&self) -> usize {
        self.values.iter().filter(|&&v| v).count()
    }
}

impl From<Vec<bool>> for Assignment {
    fn from(values: Vec<bool>) -> Self {
        Assignment::new(values)
    }
}

/// Outcome of checking an assignment against a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub satisfied: bool,
    pub unsatisfied: Vec<usize>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("assignment covers {got} variables, formula has {expected}")]
pub struct SizeMismatch {
    pub expected: usize,
    pub got: usize,
}

pub fn evaluate(formula: &Formula, assignment: &Assignment) -> Result<Evaluation, SizeMismatch> {
    if assignment.num_vars() != formula.num_vars() {
        return Err(SizeMismatch {
            expected: formula.num_vars(),
            got: assignment.num_vars(),
        });
    }
    let unsatisfied: Vec<usize> = formula
        .clauses()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_satisfied_by(assignment))
        .map(|(i, _)| i)
        .collect();
    Ok(Evaluation {
        satisfied: unsatisfied.is_empty(),
        unsatisfied,
    })
}
