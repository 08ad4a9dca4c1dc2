use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qudit::StateVector;

/// Deterministic uniform sampler on `[0, 1)` keyed by a `u64` seed.
pub(crate) struct Sampler(ChaCha8Rng);

impl Sampler {
    pub(crate) fn new(seed: u64) -> Self {
        Sampler(ChaCha8Rng::seed_from_u64(seed))
    }

    pub(crate) fn uniform(&mut self) -> f64 {
        // 53 random mantissa bits
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller.
    pub(crate) fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
    }
}

/// Haar-random single qutrit drawn from a seeded generator.
///
/// The same seed always yields the same state.
pub fn random_qutrit(seed: u64) -> StateVector {
    let mut s = Sampler::new(seed);
    let raw: [Complex64; 3] = core::array::from_fn(|_| Complex64::new(s.normal(), s.normal()));
    let norm = libm::sqrt(raw.iter().map(|c| c.norm_sqr()).sum::<f64>());
    StateVector::from_amplitudes(alloc::vec![3], raw.iter().map(|c| c / norm).collect())
        .expect("normalized by construction")
}
