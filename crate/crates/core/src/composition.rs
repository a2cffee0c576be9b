//! Composition `a ⊙ b` of symmetric states (union of their constellations)
//! and the stellar-uniform random ensembles.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, StellarError};
use crate::state::SymmetricState;
use crate::stellar::{stars_to_state, state_to_stars, Constellation, Star};

/// Deterministic random stream: ChaCha8 keyed by a 64-bit seed, identical
/// on every platform.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng { seed, inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.random::<u64>()
    }

    /// Uniform point on the sphere: `z ~ U[-1, 1]`, `Φ ~ U[0, 2π)`.
    pub fn uniform_star(&mut self) -> Star {
        let z = 2.0 * self.uniform() - 1.0;
        let phi = 2.0 * PI * self.uniform();
        let rho = (1.0 - z * z).max(0.0).sqrt();
        Star::from_vector([rho * phi.cos(), rho * phi.sin(), z]).unwrap_or(Star::NORTH)
    }
}

/// `a ⊙ b`: the state whose stars are those of `a` together with those of `b`.
pub fn compose(a: &SymmetricState, b: &SymmetricState) -> Result<SymmetricState> {
    stars_to_state(&state_to_stars(a)?.union(&state_to_stars(b)?))
}

/// `n` independent uniform stars.
pub fn random_constellation(n: usize, rng: &mut SeededRng) -> Result<Constellation> {
    if n == 0 {
        return Err(StellarError::domain("random_constellation", "n must be at least 1"));
    }
    Constellation::new((0..n).map(|_| rng.uniform_star()).collect())
}

/// Composition of `n` uniformly random single-qubit states.
pub fn random_state(n: usize, rng: &mut SeededRng) -> Result<SymmetricState> {
    stars_to_state(&random_constellation(n, rng)?)
}

/// `n/2` uniformly random stars, each paired with its antipode.
pub fn random_antipodal_constellation(n: usize, rng: &mut SeededRng) -> Result<Constellation> {
    const OP: &str = "random_antipodal_state";
    if n == 0 || !n.is_multiple_of(2) {
        return Err(StellarError::domain(OP, format!("n must be even and positive, got {n}")));
    }
    let mut stars = Vec::with_capacity(n);
    for _ in 0..n / 2 {
        let s = rng.uniform_star();
        stars.push(s);
        stars.push(s.antipode());
    }
    Constellation::new(stars)
}

/// Composition of `n/2` random antipodal pairs; `E_B = 1`.
pub fn random_antipodal_state(n: usize, rng: &mut SeededRng) -> Result<SymmetricState> {
    stars_to_state(&random_antipodal_constellation(n, rng)?)
}
