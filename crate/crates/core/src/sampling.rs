//! Deterministic seeded sampling primitives.
//!
//! All randomized estimators in the crate draw from a ChaCha8 stream seeded
//! with a caller-provided 64-bit seed, so identical inputs reproduce
//! identical samples bit for bit. Gaussians come from a plain Box-Muller
//! transform on top of the raw 64-bit stream; nothing here depends on the
//! distribution front-ends of the `rand` crate, which keeps the byte-level
//! behavior stable across dependency upgrades.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Derives an independent stream for a sub-task; deterministic in
    /// (seed, stream).
    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng }
    }

    /// Uniform in the half-open interval [0, 1), with 53 random bits.
    pub fn uniform01(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform in (0, 1], safe as a logarithm argument.
    pub fn uniform01_open_zero(&mut self) -> f64 {
        1.0 - self.uniform01()
    }

    /// Standard normal via Box-Muller.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.uniform01_open_zero();
        let u2 = self.uniform01();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Uniform direction on the unit sphere of R^n.
    pub fn unit_vector(&mut self, n: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| self.gaussian()).collect();
            let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm > 1e-12 {
                return v.iter().map(|c| c / norm).collect();
            }
        }
    }

    /// Uniform point in the closed ball of the given radius.
    pub fn in_ball(&mut self, n: usize, radius: f64) -> Vec<f64> {
        let dir = self.unit_vector(n);
        let r = radius * self.uniform01().powf(1.0 / n as f64);
        dir.iter().map(|c| c * r).collect()
    }
}

/// Euclidean norm of a slice.
pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Normalizes in place; returns false when the vector is numerically zero.
pub fn normalize(v: &mut [f64]) -> bool {
    let n = norm(v);
    if n <= 1e-300 {
        return false;
    }
    for c in v.iter_mut() {
        *c /= n;
    }
    true
}
