//! Seeded sampling regions around a base point.
//!
//! A region describes a punctured ball probed at geometric radial levels:
//! level j holds `directions_per_level` points at distance radius * 2^-j
//! from the center. The sample order is deterministic (level-major, then
//! direction order), and regions sharing a seed and direction count produce
//! identical prefixes as the level count grows. That prefix property is what
//! makes the envelope estimates monotone under deepening.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::Point;
use crate::sampling::Sampler;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub center: Point,
    pub radius: f64,
    pub radial_levels: u32,
    pub directions_per_level: u32,
    pub seed: u64,
}

impl RegionSpec {
    pub fn new(
        center: Point,
        radius: f64,
        radial_levels: u32,
        directions_per_level: u32,
        seed: u64,
    ) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidInput("region radius must be positive".into()));
        }
        if radial_levels == 0 || directions_per_level == 0 {
            return Err(Error::InvalidInput(
                "region needs at least one level and one direction".into(),
            ));
        }
        Ok(RegionSpec {
            center,
            radius,
            radial_levels,
            directions_per_level,
            seed,
        })
    }

    pub fn origin(n: usize, radius: f64, levels: u32, directions: u32, seed: u64) -> Result<Self> {
        RegionSpec::new(Point::origin(n), radius, levels, directions, seed)
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn sample_count(&self) -> usize {
        self.radial_levels as usize * self.directions_per_level as usize
    }

    /// All sample points, level-major. Level j sits at radius * 2^-j.
    pub fn samples(&self) -> Vec<Point> {
        let n = self.dim();
        let mut sampler = Sampler::new(self.seed);
        let mut out = Vec::with_capacity(self.sample_count());
        for level in 0..self.radial_levels {
            let r = self.radius * 0.5_f64.powi(level as i32);
            for _ in 0..self.directions_per_level {
                let dir = sampler.unit_vector(n);
                let coords: Vec<f64> = self
                    .center
                    .iter()
                    .zip(&dir)
                    .map(|(c, d)| c + r * d)
                    .collect();
                out.push(Point::new(coords).expect("finite samples"));
            }
        }
        out
    }
}
