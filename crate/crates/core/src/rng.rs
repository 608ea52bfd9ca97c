//! The PRNG used everywhere a seed is accepted.
//!
//! ChaCha8 is portable across platforms and releases, so a seed fully
//! determines every run.

use rand::SeedableRng;

pub type SolverRng = rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> SolverRng {
    SolverRng::seed_from_u64(seed)
}
