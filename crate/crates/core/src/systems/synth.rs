//! NK-style synthetic bi-objective landscape.
//!
//! Each option contributes a seeded value that depends on its own setting and
//! on the settings of `k` seeded neighbour options. Contributions are scaled
//! by a seeded heavy-tailed weight `(1 - u)^-sparsity`. The second objective
//! blends an independent landscape with the mirror image of the first:
//! `f2 = (1 - conflict) * g + conflict * (f1_max - f1)`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::System;
use crate::error::{Error, MeasureError, Result};
use crate::problem::{Configuration, ConfigurationSpace, Direction, Objectives, PerfVector};

/// Output scale of both objectives.
const SCALE: f64 = 100.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub seed: u64,
    /// Interaction order: number of neighbour options per contribution.
    pub k: usize,
    /// Heavy-tail exponent of the per-option weights; 0 gives unit weights.
    pub sparsity: f64,
    /// Anti-correlation between the objectives, in `[0, 1]`.
    pub conflict: f64,
}

#[derive(Clone, Debug)]
pub struct SynthSystem {
    space: ConfigurationSpace,
    objectives: Objectives,
    params: SynthParams,
    neighbors: Vec<Vec<usize>>,
    weights: [Vec<f64>; 2],
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn unit(h: u64) -> f64 {
    (h >> 11) as f64 / (1u64 << 53) as f64
}

impl SynthSystem {
    pub fn new(
        space: ConfigurationSpace,
        objectives: Objectives,
        params: SynthParams,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&params.conflict) {
            return Err(Error::InvalidInput(format!(
                "conflict {} outside [0, 1]",
                params.conflict
            )));
        }
        if !(params.sparsity >= 0.0 && params.sparsity.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "sparsity {} must be >= 0",
                params.sparsity
            )));
        }
        let n = space.len();
        let k = params.k.min(n - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let neighbors = (0..n)
            .map(|i| {
                let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                others.shuffle(&mut rng);
                others.truncate(k);
                others
            })
            .collect();
        let weight = |obj: u64, i: usize| {
            let u = unit(splitmix(splitmix(params.seed ^ (0xa5a5 + obj)) ^ i as u64));
            (1.0 - u).powf(-params.sparsity)
        };
        let weights = [
            (0..n).map(|i| weight(0, i)).collect(),
            (0..n).map(|i| weight(1, i)).collect(),
        ];
        Ok(Self {
            space,
            objectives,
            params,
            neighbors,
            weights,
        })
    }

    pub fn params(&self) -> &SynthParams {
        &self.params
    }

    fn landscape(&self, obj: u64, values: &[i64]) -> f64 {
        let base = splitmix(self.params.seed ^ (0x5151_0000 + obj));
        let mut total = 0.0;
        for (i, &v) in values.iter().enumerate() {
            let mut h = splitmix(base ^ i as u64);
            h = splitmix(h ^ v as u64);
            for &j in &self.neighbors[i] {
                h = splitmix(h ^ values[j] as u64);
            }
            total += self.weights[obj as usize][i] * unit(h);
        }
        total
    }

    /// Upper bounds of the two minimized objectives.
    fn maxima(&self) -> [f64; 2] {
        let c = self.params.conflict;
        let w1: f64 = self.weights[0].iter().sum();
        let w2: f64 = self.weights[1].iter().sum();
        [SCALE * w1, SCALE * ((1.0 - c) * w2 + c * w1)]
    }

    /// Both objectives in minimized form.
    pub fn minimized(&self, config: &Configuration) -> [f64; 2] {
        let c = self.params.conflict;
        let f1 = self.landscape(0, config.values());
        let g = self.landscape(1, config.values());
        let f1_max: f64 = self.weights[0].iter().sum();
        [SCALE * f1, SCALE * ((1.0 - c) * g + c * (f1_max - f1))]
    }
}

impl System for SynthSystem {
    fn space(&self) -> &ConfigurationSpace {
        &self.space
    }

    fn objectives(&self) -> &Objectives {
        &self.objectives
    }

    /// Maximized objectives report `upper_bound - value` so that larger is
    /// better and values stay non-negative.
    fn measure(&self, config: &Configuration) -> Result<PerfVector, MeasureError> {
        let m = self.minimized(config);
        let top = self.maxima();
        let mut f = [0.0; 2];
        for j in 0..2 {
            f[j] = match self.objectives[j].direction {
                Direction::Minimize => m[j],
                Direction::Maximize => top[j] - m[j],
            };
        }
        Ok(PerfVector { f })
    }
}
