use rand::Rng;

use super::{beta_sample, check_failure, Algorithm, RestartError, RestartPolicy};
use crate::cnf::Assignment;
use crate::rng::SolverRng;
use crate::sls::TrialOutcome;

#[inline]
fn coin(rng: &mut SolverRng, p_true: f64) -> bool {
    rng.random::<f64>() < p_true
}

#[derive(Clone, Debug, Default)]
pub struct UniformRestart {
    num_vars: usize,
}

impl UniformRestart {
    pub fn new(num_vars: usize) -> Self {
        UniformRestart { num_vars }
    }
}

impl RestartPolicy for UniformRestart {
    fn algorithm(&self) -> Algorithm {
        Algorithm::WalkSat
    }

    fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn sample_initial(&mut self, rng: &mut SolverRng) -> Assignment {
        Assignment::new((0..self.num_vars).map(|_| coin(rng, 0.5)).collect())
    }

    fn notify_failure(&mut self, outcome: &TrialOutcome) -> Result<(), RestartError> {
        check_failure(self.num_vars, outcome)
    }

    fn reset(&mut self, num_vars: usize) {
        self.num_vars = num_vars;
    }

    fn marginals(&self) -> Vec<f64> {
        vec![0.5; self.num_vars]
    }
}

/// Per-variable Beta(alpha, beta) belief that the variable should be true.
/// Starts at the uniform prior (1, 1).
#[derive(Clone, Debug, PartialEq)]
pub struct BeliefState {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl BeliefState {
    pub fn uniform(num_vars: usize) -> Self {
        BeliefState {
            alpha: vec![1.0; num_vars],
            beta: vec![1.0; num_vars],
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// `(alpha, beta)` of 1-based variable `var`.
    pub fn params(&self, var: u32) -> (f64, f64) {
        let i = var as usize - 1;
        (self.alpha[i], self.beta[i])
    }

    pub fn set_params(&mut self, var: u32, alpha: f64, beta: f64) -> Result<(), RestartError> {
        for x in [alpha, beta] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(RestartError::BetaParameter(x));
            }
        }
        let i = var as usize - 1;
        self.alpha[i] = alpha;
        self.beta[i] = beta;
        Ok(())
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Posterior mean `alpha / (alpha + beta)` per variable.
    pub fn means(&self) -> Vec<f64> {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| a / (a + b))
            .collect()
    }

    /// Sum of all alpha and beta parameters.
    pub fn total_mass(&self) -> f64 {
        self.alpha.iter().sum::<f64>() + self.beta.iter().sum::<f64>()
    }

    /// A failed try ending with `var = true` shifts belief toward false, and
    /// vice versa.
    pub fn observe_failure(&mut self, assignment: &Assignment, delta: f64) {
        for (i, &value) in assignment.values().iter().enumerate() {
            if value {
                self.beta[i] += delta;
            } else {
                self.alpha[i] += delta;
            }
        }
    }
}

/// Beta-EDA restarts: each try draws `theta_v ~ Beta(alpha_v, beta_v)` and
/// sets variable v true with probability `theta_v`.
#[derive(Clone, Debug)]
pub struct BetaRestart {
    beliefs: BeliefState,
    delta: f64,
}

impl BetaRestart {
    pub fn new(num_vars: usize, delta: f64) -> Result<Self, RestartError> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(RestartError::Delta(delta));
        }
        Ok(BetaRestart {
            beliefs: BeliefState::uniform(num_vars),
            delta,
        })
    }

    pub fn beliefs(&self) -> &BeliefState {
        &self.beliefs
    }

    pub fn beliefs_mut(&mut self) -> &mut BeliefState {
        &mut self.beliefs
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

impl RestartPolicy for BetaRestart {
    fn algorithm(&self) -> Algorithm {
        Algorithm::BetaWalkSat
    }

    fn num_vars(&self) -> usize {
        self.beliefs.len()
    }

    fn sample_initial(&mut self, rng: &mut SolverRng) -> Assignment {
        let values = self
            .beliefs
            .alpha
            .iter()
            .zip(&self.beliefs.beta)
            .map(|(&a, &b)| {
                let theta = beta_sample(a, b, rng).expect("belief parameters stay positive");
                coin(rng, theta)
            })
            .collect();
        Assignment::new(values)
    }

    fn notify_failure(&mut self, outcome: &TrialOutcome) -> Result<(), RestartError> {
        check_failure(self.beliefs.len(), outcome)?;
        self.beliefs
            .observe_failure(&outcome.final_assignment, self.delta);
        Ok(())
    }

    fn reset(&mut self, num_vars: usize) {
        self.beliefs = BeliefState::uniform(num_vars);
    }

    fn marginals(&self) -> Vec<f64> {
        self.beliefs.means()
    }
}

/// A remembered failed try.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryEntry {
    pub assignment: Assignment,
    /// Violated clauses at the end of the try; lower is better.
    pub unsat_remaining: usize,
    pub try_index: u64,
}

/// Keeps the `k` failed tries with the fewest violated clauses and samples
/// each variable true with probability `(1 + #true) / (2 + #entries)`.
#[derive(Clone, Debug)]
pub struct KBestRestart {
    num_vars: usize,
    capacity: usize,
    // best first; among equal quality, newest first
    entries: Vec<HistoryEntry>,
    seen: u64,
}

impl KBestRestart {
    pub fn new(num_vars: usize, capacity: usize) -> Result<Self, RestartError> {
        if capacity == 0 {
            return Err(RestartError::ZeroCapacity);
        }
        Ok(KBestRestart {
            num_vars,
            capacity,
            entries: Vec::with_capacity(capacity + 1),
            seen: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn entries(&self) -> &[HistoryEntry] {
        &self.entries
    }

    /// Inserts and returns the evicted entry, if capacity was exceeded.
    fn insert(&mut self, entry: HistoryEntry) -> Option<HistoryEntry> {
        let key = |e: &HistoryEntry| (e.unsat_remaining, std::cmp::Reverse(e.try_index));
        let at = self.entries.partition_point(|e| key(e) <= key(&entry));
        self.entries.insert(at, entry);
        if self.entries.len() > self.capacity {
            self.entries.pop()
        } else {
            None
        }
    }
}

impl RestartPolicy for KBestRestart {
    fn algorithm(&self) -> Algorithm {
        Algorithm::KBestWalkSat
    }

    fn num_vars(&self) -> usize {
        self.num_vars
    }

    fn sample_initial(&mut self, rng: &mut SolverRng) -> Assignment {
        let q = self.marginals();
        Assignment::new(q.into_iter().map(|p| coin(rng, p)).collect())
    }

    fn notify_failure(&mut self, outcome: &TrialOutcome) -> Result<(), RestartError> {
        check_failure(self.num_vars, outcome)?;
        let entry = HistoryEntry {
            assignment: outcome.final_assignment.clone(),
            unsat_remaining: outcome.unsat_remaining,
            try_index: self.seen,
        };
        self.seen += 1;
        self.insert(entry);
        Ok(())
    }

    fn reset(&mut self, num_vars: usize) {
        self.num_vars = num_vars;
        self.entries.clear();
        self.seen = 0;
    }

    fn marginals(&self) -> Vec<f64> {
        let mut trues = vec![0u64; self.num_vars];
        for e in &self.entries {
            for (t, &v) in trues.iter_mut().zip(e.assignment.values()) {
                *t += v as u64;
            }
        }
        let denom = 2.0 + self.entries.len() as f64;
        trues
            .into_iter()
            .map(|t| (1.0 + t as f64) / denom)
            .collect()
    }
}

/// Per-variable true/false counts over every failed try, sampled with the
/// same Laplace smoothing as [`KBestRestart`].
#[derive(Clone, Debug)]
pub struct AllHistoryRestart {
    true_counts: Vec<u64>,
    false_counts: Vec<u64>,
}

impl AllHistoryRestart {
    pub fn new(num_vars: usize) -> Self {
        AllHistoryRestart {
            true_counts: vec![0; num_vars],
            false_counts: vec![0; num_vars],
        }
    }

    pub fn true_counts(&self) -> &[u64] {
        &self.true_counts
    }

    pub fn false_counts(&self) -> &[u64] {
        &self.false_counts
    }
}

impl RestartPolicy for AllHistoryRestart {
    fn algorithm(&self) -> Algorithm {
        Algorithm::AllWalkSat
    }

    fn num_vars(&self) -> usize {
        self.true_counts.len()
    }

    fn sample_initial(&mut self, rng: &mut SolverRng) -> Assignment {
        let q = self.marginals();
        Assignment::new(q.into_iter().map(|p| coin(rng, p)).collect())
    }

    fn notify_failure(&mut self, outcome: &TrialOutcome) -> Result<(), RestartError> {
        check_failure(self.true_counts.len(), outcome)?;
        for (i, &v) in outcome.final_assignment.values().iter().enumerate() {
            if v {
                self.true_counts[i] += 1;
            } else {
                self.false_counts[i] += 1;
            }
        }
        Ok(())
    }

    fn reset(&mut self, num_vars: usize) {
        *self = AllHistoryRestart::new(num_vars);
    }

    fn marginals(&self) -> Vec<f64> {
        self.true_counts
            .iter()
            .zip(&self.false_counts)
            .map(|(&t, &f)| (1.0 + t as f64) / (2.0 + (t + f) as f64))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;

    fn failure(values: &[bool], unsat: usize) -> TrialOutcome {
        TrialOutcome {
            solved: false,
            final_assignment: Assignment::new(values.to_vec()),
            flips_used: 10,
            unsat_remaining: unsat,
        }
    }

    fn empirical_true_rate(policy: &mut dyn RestartPolicy, var: usize, n: usize, seed: u64) -> f64 {
        let mut rng = seeded(seed);
        (0..n)
            .filter(|_| policy.sample_initial(&mut rng).values()[var])
            .count() as f64
            / n as f64
    }

    #[test]
    fn beta_update_direction() {
        let mut p = BetaRestart::new(3, 1.0).unwrap();
        p.notify_failure(&failure(&[true, false, true], 2)).unwrap();
        assert_eq!(p.beliefs().params(1), (1.0, 2.0));
        assert_eq!(p.beliefs().params(2), (2.0, 1.0));
        assert_eq!(p.beliefs().params(3), (1.0, 2.0));
    }

    #[test]
    fn zero_delta_is_identity() {
        let mut p = BetaRestart::new(3, 0.0).unwrap();
        let before = p.beliefs().clone();
        p.notify_failure(&failure(&[true, false, true], 2)).unwrap();
        assert_eq!(p.beliefs(), &before);
    }

    #[test]
    fn opposite_failures_compose() {
        let mut p = BetaRestart::new(1, 1.0).unwrap();
        p.notify_failure(&failure(&[true], 1)).unwrap();
        p.notify_failure(&failure(&[false], 1)).unwrap();
        assert_eq!(p.beliefs().params(1), (2.0, 2.0));
    }

    #[test]
    fn solved_feedback_rejected() {
        let mut solved = failure(&[true], 0);
        solved.solved = true;
        let mut policies: Vec<Box<dyn RestartPolicy>> = Algorithm::ALL
            .into_iter()
            .map(|a| a.policy(1, Default::default()))
            .collect();
        for p in &mut policies {
            assert_eq!(p.notify_failure(&solved), Err(RestartError::SolvedOutcome));
            assert!(matches!(
                p.notify_failure(&failure(&[true, true], 1)),
                Err(RestartError::SizeMismatch { .. })
            ));
        }
    }

    #[test]
    fn bad_constructor_params() {
        assert!(BetaRestart::new(2, -0.5).is_err());
        assert!(BetaRestart::new(2, f64::INFINITY).is_err());
        assert!(KBestRestart::new(2, 0).is_err());
        let mut b = BeliefState::uniform(2);
        assert!(b.set_params(1, 0.0, 1.0).is_err());
    }

    #[test]
    fn uniform_prior_marginal_is_half() {
        let mut p = BetaRestart::new(4, 1.0).unwrap();
        let n = 100_000;
        let rate = empirical_true_rate(&mut p, 2, n, 11);
        assert!(
            (rate - 0.5).abs() < 3.0 * (0.25 / n as f64).sqrt(),
            "{rate}"
        );
    }

    #[test]
    fn skewed_belief_marginal() {
        // Beta-Bernoulli marginal: P(true) = alpha / (alpha + beta) = 1/102
        let mut p = BetaRestart::new(2, 1.0).unwrap();
        p.beliefs_mut().set_params(1, 1.0, 101.0).unwrap();
        let n = 100_000;
        let expected = 1.0 / 102.0;
        let rate = empirical_true_rate(&mut p, 0, n, 12);
        let se = (expected * (1.0 - expected) / n as f64).sqrt();
        assert!((rate - expected).abs() < 3.0 * se, "{rate} vs {expected}");
    }

    #[test]
    fn kbest_empty_history_is_fair() {
        let p = KBestRestart::new(3, 5).unwrap();
        assert_eq!(p.marginals(), vec![0.5; 3]);
    }

    #[test]
    fn kbest_evicts_worst_then_oldest() {
        let mut p = KBestRestart::new(1, 2).unwrap();
        p.notify_failure(&failure(&[true], 5)).unwrap(); // try 0
        p.notify_failure(&failure(&[false], 3)).unwrap(); // try 1
        p.notify_failure(&failure(&[true], 5)).unwrap(); // try 2, ties with try 0
        let kept: Vec<(usize, u64)> = p
            .entries()
            .iter()
            .map(|e| (e.unsat_remaining, e.try_index))
            .collect();
        assert_eq!(kept, vec![(3, 1), (5, 2)]);
        p.notify_failure(&failure(&[true], 1)).unwrap();
        let kept: Vec<u64> = p.entries().iter().map(|e| e.try_index).collect();
        assert_eq!(kept, vec![3, 1]);
        // (1 + 1 true) / (2 + 2)
        assert_eq!(p.marginals(), vec![0.5]);
    }

    #[test]
    fn all_history_counts() {
        let mut p = AllHistoryRestart::new(2);
        for _ in 0..3 {
            p.notify_failure(&failure(&[true, false], 1)).unwrap();
        }
        assert_eq!(p.true_counts(), &[3, 0]);
        assert_eq!(p.false_counts(), &[0, 3]);
        assert_eq!(p.marginals(), vec![4.0 / 5.0, 1.0 / 5.0]);
    }

    #[test]
    fn reset_restores_fresh_state() {
        for algo in Algorithm::ALL {
            let mut p = algo.policy(3, Default::default());
            let fresh = p.marginals();
            for i in 0..6 {
                p.notify_failure(&failure(&[true, i % 2 == 0, true], 1 + i))
                    .unwrap();
            }
            p.reset(3);
            assert_eq!(p.marginals(), fresh);
            p.reset(3);
            assert_eq!(p.marginals(), vec![0.5; 3]);
            p.reset(5);
            assert_eq!(p.num_vars(), 5);
            let mut rng = seeded(0);
            assert_eq!(p.sample_initial(&mut rng).num_vars(), 5);
        }
    }

    #[test]
    fn uniform_policy_ignores_feedback() {
        let mut a = UniformRestart::new(8);
        let mut b = UniformRestart::new(8);
        b.notify_failure(&failure(&[true; 8], 3)).unwrap();
        let (mut r1, mut r2) = (seeded(5), seeded(5));
        for _ in 0..20 {
            assert_eq!(a.sample_initial(&mut r1), b.sample_initial(&mut r2));
        }
    }

    proptest! {
        #[test]
        fn mass_conservation(n in 1usize..20, delta in 0.0f64..4.0, tries in prop::collection::vec(prop::collection::vec(any::<bool>(), 20), 0..30)) {
            let mut p = BetaRestart::new(n, delta).unwrap();
            for values in &tries {
                p.notify_failure(&failure(&values[..n], 1)).unwrap();
            }
            let expected = 2.0 * n as f64 + n as f64 * tries.len() as f64 * delta;
            prop_assert!((p.beliefs().total_mass() - expected).abs() < 1e-9 * expected.max(1.0));
            prop_assert!(p.beliefs().alpha().iter().chain(p.beliefs().beta()).all(|&x| x >= 1.0 && x.is_finite()));
        }

        #[test]
        fn kbest_keeps_best(cap in 1usize..6, quals in prop::collection::vec(1usize..10, 1..40)) {
            let mut p = KBestRestart::new(1, cap).unwrap();
            let mut all = Vec::new();
            for (i, &q) in quals.iter().enumerate() {
                p.notify_failure(&failure(&[i % 2 == 0], q)).unwrap();
                all.push(q);
                prop_assert!(p.entries().len() <= cap);
                let kept_worst = p.entries().iter().map(|e| e.unsat_remaining).max().unwrap();
                let mut sorted = all.clone();
                sorted.sort();
                // kept set is exactly the best min(cap, len) qualities
                let mut kept: Vec<usize> = p.entries().iter().map(|e| e.unsat_remaining).collect();
                kept.sort();
                prop_assert_eq!(&kept[..], &sorted[..kept.len()]);
                prop_assert!(kept_worst <= *sorted.get(kept.len()).unwrap_or(&usize::MAX));
            }
        }
    }
}
