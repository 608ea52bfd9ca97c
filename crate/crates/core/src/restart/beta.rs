use rand_distr::{Distribution, Gamma};

use super::RestartError;
use crate::rng::SolverRng;

/// Draws from Beta(alpha, beta) as `X / (X + Y)` with `X ~ Gamma(alpha, 1)`
/// and `Y ~ Gamma(beta, 1)`. Two gamma variates replace any inverse-CDF
/// evaluation.
pub fn beta_sample(alpha: f64, beta: f64, rng: &mut SolverRng) -> Result<f64, RestartError> {
    let x = gamma(alpha, rng)?;
    let y = gamma(beta, rng)?;
    let sum = x + y;
    if sum == 0.0 {
        // Both variates underflowed; only reachable for tiny shapes.
        return Ok(alpha / (alpha + beta));
    }
    Ok(x / sum)
}

fn gamma(shape: f64, rng: &mut SolverRng) -> Result<f64, RestartError> {
    if !(shape > 0.0 && shape.is_finite()) {
        return Err(RestartError::BetaParameter(shape));
    }
    let dist = Gamma::new(shape, 1.0).map_err(|_| RestartError::BetaParameter(shape))?;
    Ok(dist.sample(rng))
}
