//! Deterministic seeded noise source for every stochastic operation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::grid::Grid;

/// A counted, seeded stream of standard-normal variates.
///
/// Identical seeds produce bitwise-identical streams, which is the basis of
/// the whole-pipeline reproducibility contract. Independent streams for
/// parallel work come from [`NoiseSource::derive`].
#[derive(Debug, Clone)]
pub struct NoiseSource {
    rng: ChaCha12Rng,
    seed: u64,
    draws: u64,
}

impl NoiseSource {
    pub fn new(seed: u64) -> Self {
        NoiseSource {
            rng: ChaCha12Rng::seed_from_u64(seed),
            seed,
            draws: 0,
        }
    }

    /// Stream for an independent unit of work (sweep cell, sampling chain).
    pub fn derive(seed: u64, cell_index: u64) -> Self {
        NoiseSource::new(seed ^ cell_index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of variates drawn so far.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.draws += 1;
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.draws += 1;
        self.rng.random()
    }

    /// Grid of i.i.d. standard normals, drawn row-major.
    pub fn normal_grid(&mut self, height: usize, width: usize) -> Grid {
        let mut values = Vec::with_capacity(height * width);
        for _ in 0..height * width {
            values.push(self.standard_normal());
        }
        Grid::from_raw(height, width, values)
    }
}
