//! Incremental clause bookkeeping for the flip loop.

use rand::Rng;

use crate::cnf::{Assignment, Formula, Literal, SizeMismatch};
use crate::rng::SolverRng;

const ABSENT: u32 = u32::MAX;

/// Set of clause indices with O(1) insert, remove, membership and uniform sampling.
#[derive(Clone, Debug)]
pub struct UnsatBag {
    items: Vec<u32>,
    pos: Vec<u32>,
}

impl UnsatBag {
    pub fn with_capacity(num_clauses: usize) -> Self {
        UnsatBag {
            items: Vec::new(),
            pos: vec![ABSENT; num_clauses],
        }
    }

    #[inline]
    pub fn contains(&self, clause: usize) -> bool {
        self.pos[clause] != ABSENT
    }

    #[inline]
    pub fn insert(&mut self, clause: usize) {
        if self.pos[clause] == ABSENT {
            self.pos[clause] = self.items.len() as u32;
            self.items.push(clause as u32);
        }
    }

    #[inline]
    pub fn remove(&mut self, clause: usize) {
        let at = self.pos[clause];
        if at == ABSENT {
            return;
        }
        let last = *self.items.last().expect("non-empty when member present");
        self.items.swap_remove(at as usize);
        if last as usize != clause {
            self.pos[last as usize] = at;
        }
        self.pos[clause] = ABSENT;
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.items
    }

    pub fn sample(&self, rng: &mut SolverRng) -> usize {
        self.items[rng.random_range(0..self.items.len())] as usize
    }

    fn clear(&mut self) {
        for &c in &self.items {
            self.pos[c as usize] = ABSENT;
        }
        self.items.clear();
    }

    /// Members in ascending order.
    pub fn sorted(&self) -> Vec<u32> {
        let mut v = self.items.clone();
        v.sort_unstable();
        v
    }
}

/// Mutable search state for one formula: current assignment, number of true
/// literals per clause, literal occurrence lists and the violated-clause bag.
#[derive(Clone, Debug)]
pub struct SearchState<'f> {
    formula: &'f Formula,
    assignment: Assignment,
    sat_count: Vec<u32>,
    occurrence: Vec<Vec<u32>>,
    tautology: Vec<bool>,
    unsat: UnsatBag,
    flips_done: u64,
}

/// What [`SearchState::pick_move`] chose and why.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub var: u32,
    /// Break count of the chosen variable.
    pub breaks: u32,
    /// Smallest break count among the clause's variables.
    pub min_breaks: u32,
    pub kind: MoveKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    /// A zero-break variable existed; chosen uniformly among those.
    Freebie,
    /// Random-walk branch (probability p).
    Walk,
    /// Greedy branch: uniform among minimum-break variables.
    Greedy,
}

impl<'f> SearchState<'f> {
    pub fn new(formula: &'f Formula, assignment: Assignment) -> Result<Self, SizeMismatch> {
        check_size(formula, &assignment)?;
        let mut occurrence = vec![Vec::new(); 2 * formula.num_vars()];
        for (ci, clause) in formula.clauses().iter().enumerate() {
            for lit in clause.literals() {
                occurrence[lit.code()].push(ci as u32);
            }
        }
        let mut tautology = vec![false; formula.num_clauses()];
        for &t in formula.tautologies() {
            tautology[t] = true;
        }
        let mut state = SearchState {
            formula,
            assignment,
            sat_count: vec![0; formula.num_clauses()],
            occurrence,
            tautology,
            unsat: UnsatBag::with_capacity(formula.num_clauses()),
            flips_done: 0,
        };
        state.recount();
        Ok(state)
    }

    /// Installs a fresh assignment, reusing the occurrence lists. Resets the flip counter.
    pub fn reset(&mut self, assignment: Assignment) -> Result<(), SizeMismatch> {
        check_size(self.formula, &assignment)?;
        self.assignment = assignment;
        self.flips_done = 0;
        self.recount();
        Ok(())
    }

    fn recount(&mut self) {
        self.unsat.clear();
        for (ci, clause) in self.formula.clauses().iter().enumerate() {
            let n = clause
                .literals()
                .iter()
                .filter(|l| l.is_satisfied_by(self.assignment.value(l.var())))
                .count() as u32;
            self.sat_count[ci] = n;
            if n == 0 {
                self.unsat.insert(ci);
            }
        }
    }

    pub fn formula(&self) -> &'f Formula {
        self.formula
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn into_assignment(self) -> Assignment {
        self.assignment
    }

    pub fn sat_count(&self) -> &[u32] {
        &self.sat_count
    }

    /// Clause indices containing `lit`.
    pub fn occurrences(&self, lit: Literal) -> &[u32] {
        &self.occurrence[lit.code()]
    }

    pub fn unsat(&self) -> &UnsatBag {
        &self.unsat
    }

    pub fn num_unsat(&self) -> usize {
        self.unsat.len()
    }

    pub fn is_satisfied(&self) -> bool {
        self.unsat.is_empty()
    }

    pub fn flips_done(&self) -> u64 {
        self.flips_done
    }

    /// Number of currently satisfied clauses that flipping `var` would falsify:
    /// those whose only true literal belongs to `var`.
    pub fn break_count(&self, var: u32) -> u32 {
        let true_lit = Literal::new(var, self.assignment.value(var));
        self.occurrence[true_lit.code()]
            .iter()
            .filter(|&&c| self.sat_count[c as usize] == 1 && !self.tautology[c as usize])
            .count() as u32
    }

    /// Chooses the variable to flip in violated clause `clause`.
    ///
    /// RNG draws, in order: the random-walk coin (only when no freebie
    /// exists), then one uniform index among the candidates.
    pub fn pick_move(&self, clause: usize, p: f64, rng: &mut SolverRng) -> Move {
        debug_assert!(self.unsat.contains(clause));
        let lits = self.formula.clause(clause).literals();
        let mut min_breaks = u32::MAX;
        let mut n_min = 0usize;
        for lit in lits {
            let b = self.break_count(lit.var());
            if b < min_breaks {
                min_breaks = b;
                n_min = 1;
            } else if b == min_breaks {
                n_min += 1;
            }
        }

        let kind = if min_breaks == 0 {
            MoveKind::Freebie
        } else if rng.random_bool(p) {
            MoveKind::Walk
        } else {
            MoveKind::Greedy
        };

        if kind == MoveKind::Walk {
            let var = lits[rng.random_range(0..lits.len())].var();
            return Move {
                var,
                breaks: self.break_count(var),
                min_breaks,
                kind,
            };
        }

        let mut r = rng.random_range(0..n_min);
        for lit in lits {
            if self.break_count(lit.var()) == min_breaks {
                if r == 0 {
                    return Move {
                        var: lit.var(),
                        breaks: min_breaks,
                        min_breaks,
                        kind,
                    };
                }
                r -= 1;
            }
        }
        unreachable!("n_min counts at least one minimal variable")
    }

    /// Negates `var`, touching only the clauses that contain it.
    pub fn flip(&mut self, var: u32) {
        let was_true = Literal::new(var, self.assignment.value(var));
        let now_true = was_true.negate();
        self.assignment.flip(var);
        self.flips_done += 1;
        for &c in &self.occurrence[was_true.code()] {
            let c = c as usize;
            self.sat_count[c] -= 1;
            if self.sat_count[c] == 0 {
                self.unsat.insert(c);
            }
        }
        for &c in &self.occurrence[now_true.code()] {
            let c = c as usize;
            self.sat_count[c] += 1;
            if self.sat_count[c] == 1 {
                self.unsat.remove(c);
            }
        }
    }

    /// Compares the incremental fields against a from-scratch rebuild on the
    /// same assignment. Returns a description of the first discrepancy.
    pub fn check_against_recount(&self) -> Result<(), String> {
        let fresh =
            SearchState::new(self.formula, self.assignment.clone()).map_err(|e| e.to_string())?;
        if !self.same_fields(&fresh) {
            return Err(format!(
                "sat_count {:?} vs {:?}, unsat {:?} vs {:?}",
                self.sat_count,
                fresh.sat_count,
                self.unsat.sorted(),
                fresh.unsat.sorted()
            ));
        }
        for (ci, &pos) in self.unsat.pos.iter().enumerate() {
            let member = pos != ABSENT;
            if member && self.unsat.items[pos as usize] as usize != ci {
                return Err(format!("bag position index broken at clause {ci}"));
            }
        }
        Ok(())
    }

    /// Field equality ignoring the flip counter and bag ordering.
    pub fn same_fields(&self, other: &SearchState<'_>) -> bool {
        self.assignment == other.assignment
            && self.sat_count == other.sat_count
            && self.occurrence == other.occurrence
            && self.unsat.sorted() == other.unsat.sorted()
    }
}

fn check_size(formula: &Formula, assignment: &Assignment) -> Result<(), SizeMismatch> {
    if formula.num_vars() != assignment.num_vars() {
        return Err(SizeMismatch {
            expected: formula.num_vars(),
            got: assignment.num_vars(),
        });
    }
    Ok(())
}
