//! Seeded random streams for the synthetic generators.
//!
//! All randomness in this crate flows through [`SeedStream`], a PCG-64
//! generator wrapped so the draw protocol is fixed: uniforms come from the
//! 53-bit conversion of `next_u64`, Gaussians from the Box-Muller transform
//! applied to consecutive uniform pairs. Fixing the protocol (rather than
//! delegating to a distribution library) is what makes every generated
//! dataset bit-identical for a given seed, across crate versions and
//! platforms.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

/// Seed for a [`SeedStream`]; identical seeds yield bit-identical streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        RngSeed(seed)
    }
}

/// Deterministic uniform/Gaussian source over PCG-64.
#[derive(Debug, Clone)]
pub struct SeedStream {
    rng: Pcg64,
}

impl SeedStream {
    pub fn new(seed: RngSeed) -> Self {
        SeedStream {
            rng: Pcg64::seed_from_u64(seed.0),
        }
    }

    /// Uniform f64 in [0, 1), from the top 53 bits of the next u64.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform f64 in [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform index in 0..n. n must be nonzero.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        // Scaling the 53-bit uniform is exact for the desk-scale n used here.
        let i = (self.uniform() * n as f64) as usize;
        i.min(n - 1)
    }

    /// One standard-normal pair via Box-Muller on two consecutive uniforms.
    ///
    /// u1 is nudged away from zero so ln(u1) is finite.
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform().max(f64::MIN_POSITIVE);
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        (r * theta.cos(), r * theta.sin())
    }

    /// `count` standard normals, drawn as ceil(count/2) Box-Muller pairs with
    /// any surplus value discarded. Keeps the stream layout independent of
    /// how callers batch their requests.
    pub fn gaussians(&mut self, count: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(count + 1);
        while out.len() < count {
            let (a, b) = self.gaussian_pair();
            out.push(a);
            out.push(b);
        }
        out.truncate(count);
        out
    }
}
