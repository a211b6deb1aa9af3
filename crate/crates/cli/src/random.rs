//! Deterministic random relations for fuzzing and the property suite.

use dowker_core::complex::Universe;
use dowker_core::error::{Error, Result};
use dowker_core::relation::Relation;

/// Name of the generator, recorded in pipeline reports next to the seed.
pub const PRNG_NAME: &str = "splitmix64";

/// SplitMix64: a 64-bit generator with a single word of state. Output is
/// identical on every platform for a fixed seed.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..bound` (`bound > 0`).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

/// A random relation on ground sets `x0..x{nx-1}`, `y0..y{ny-1}`: each
/// pair is included independently with probability `density`, pairs drawn
/// in row-major order. Deterministic for a fixed seed.
pub fn random_relation(nx: usize, ny: usize, density: f64, seed: u64) -> Result<Relation> {
    assert!((0.0..=1.0).contains(&density), "density must lie in [0, 1]");
    if nx + ny > dowker_core::complex::MAX_VERTICES {
        return Err(Error::UniverseTooLarge { size: nx + ny });
    }
    let x = Universe::from_labels((0..nx).map(|i| format!("x{i}")))?;
    let y = Universe::from_labels((0..ny).map(|j| format!("y{j}")))?;
    let mut rng = SplitMix64::new(seed);
    let mut pairs = Vec::new();
    for i in 0..nx {
        for j in 0..ny {
            if rng.next_f64() < density {
                pairs.push((i as u8, j as u8));
            }
        }
    }
    Relation::new(x, y, &pairs)
}

/// A deterministic permutation of `labels` driven by the seed
/// (Fisher-Yates over SplitMix64).
pub fn random_permutation(labels: &[String], seed: u64) -> Vec<String> {
    let mut out = labels.to_vec();
    let mut rng = SplitMix64::new(seed);
    for i in (1..out.len()).rev() {
        let j = rng.next_below(i as u64 + 1) as usize;
        out.swap(i, j);
    }
    out
}
