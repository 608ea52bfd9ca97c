use rand::seq::index;
use rand::Rng;

use super::{Clause, Formula, Literal};
use crate::rng::seeded;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("clause width {k} exceeds variable count {num_vars}")]
    WidthTooLarge { k: usize, num_vars: usize },
    #[error("{0} must be at least 1")]
    ZeroCount(&'static str),
}

/// Uniform random k-SAT: each clause draws `k` distinct variables without
/// replacement and an independent fair polarity for each. Clauses are not
/// deduplicated. Deterministic in `seed`.
///
/// For k = 3 the hardest region sits near a clause/variable ratio of 4.26.
pub fn generate_random_ksat(
    num_vars: usize,
    num_clauses: usize,
    k: usize,
    seed: u64,
) -> Result<Formula, GenerateError> {
    if num_vars == 0 {
        return Err(GenerateError::ZeroCount("num_vars"));
    }
    if num_clauses == 0 {
        return Err(GenerateError::ZeroCount("num_clauses"));
    }
    if k == 0 {
        return Err(GenerateError::ZeroCount("k"));
    }
    if k > num_vars {
        return Err(GenerateError::WidthTooLarge { k, num_vars });
    }
    let mut rng = seeded(seed);
    let clauses = (0..num_clauses)
        .map(|_| {
            let vars = index::sample(&mut rng, num_vars, k);
            Clause::new(
                vars.iter()
                    .map(|v| Literal::new(v as u32 + 1, rng.random_bool(0.5)))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    Ok(Formula::new(num_vars, clauses)
        .expect("generated variables are in range")
        .with_name(format!("rand-n{num_vars}-m{num_clauses}-k{k}-s{seed}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn shape_near_phase_transition() {
        let f = generate_random_ksat(20, 85, 3, 11).unwrap();
        assert_eq!(f.num_vars(), 20);
        assert_eq!(f.num_clauses(), 85);
        assert!((f.clause_var_ratio() - 4.25).abs() < 1e-12);
        for c in f.clauses() {
            let vars: HashSet<u32> = c.literals().iter().map(|l| l.var()).collect();
            assert_eq!(vars.len(), 3);
        }
    }

    #[test]
    fn full_width_clause_uses_every_variable() {
        let f = generate_random_ksat(3, 1, 3, 5).unwrap();
        let mut vars: Vec<u32> = f.clause(0).literals().iter().map(|l| l.var()).collect();
        vars.sort();
        assert_eq!(vars, vec![1, 2, 3]);
    }

    #[test]
    fn deterministic_in_seed() {
        let a = generate_random_ksat(50, 200, 3, 99).unwrap();
        let b = generate_random_ksat(50, 200, 3, 99).unwrap();
        let c = generate_random_ksat(50, 200, 3, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.clauses(), c.clauses());
    }

    #[test]
    fn polarities_are_roughly_fair() {
        let f = generate_random_ksat(100, 2000, 3, 3).unwrap();
        let pos = f
            .clauses()
            .iter()
            .flat_map(|c| c.literals())
            .filter(|l| l.is_positive())
            .count();
        let frac = pos as f64 / f.size() as f64;
        // 6000 fair coins: sd ~ 0.0065
        assert!((frac - 0.5).abs() < 0.03, "{frac}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            generate_random_ksat(2, 5, 3, 0),
            Err(GenerateError::WidthTooLarge { k: 3, num_vars: 2 })
        );
        assert!(generate_random_ksat(0, 5, 0, 0).is_err());
        assert!(generate_random_ksat(5, 0, 3, 0).is_err());
    }
}
