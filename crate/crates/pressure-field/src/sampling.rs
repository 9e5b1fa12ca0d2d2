//! Deterministic Gaussian sampling for the randomized verification checks.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded ChaCha8 stream with Box-Muller Gaussian variates. Both pieces are
/// deterministic transforms, so identical seeds reproduce identical draws on
/// every platform.
pub struct DetRng {
    state: ChaCha8Rng,
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        Self {
            state: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in the half-open interval `(0, 1]`.
    fn unit_open(&mut self) -> f64 {
        ((self.state.next_u64() >> 11) as f64 + 1.0) / (1u64 << 53) as f64
    }

    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.unit_open();
        let u2 = self.unit_open();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
