use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{BigReal, Real};

/// Uniform grid `z_i = i·h`, `h = z_max/2^level`, for the variable `x = e^{-z²}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    pub z_max: BigReal,
    pub level: u32,
    pub h: BigReal,
}

#[derive(Clone, Debug, Serialize)]
pub struct GridSummary {
    pub z_max: f64,
    pub level: u32,
    pub h: f64,
    pub precision_bits: u32,
}

impl Grid {
    pub fn new(z_max: BigReal, level: u32) -> Result<Self> {
        if z_max <= z_max.lit(0.0) {
            return Err(Error::Config("z_max must be positive".into()));
        }
        if !(3..=24).contains(&level) {
            return Err(Error::Config(format!("grid level {level} outside 3..=24")));
        }
        let h = z_max.mul_pow2(-(level as i32));
        Ok(Grid { z_max, level, h })
    }

    pub fn with_f64(z_max: f64, level: u32, prec: u32) -> Result<Self> {
        Grid::new(BigReal::with_f64(prec, z_max), level)
    }

    pub fn prec(&self) -> u32 {
        self.h.prec()
    }

    pub fn intervals(&self) -> usize {
        1usize << self.level
    }

    pub fn z(&self, i: usize) -> BigReal {
        self.h.clone() * &BigReal::from_int(self.prec(), i as i64)
    }

    pub fn z_f64(&self, i: usize) -> f64 {
        self.h.to_f64() * i as f64
    }

    /// `e^{-z_max²}`, the smallest x represented on the grid.
    pub fn x_min(&self) -> BigReal {
        (-(self.z_max.clone() * &self.z_max)).exp()
    }

    /// The grid with twice the step.
    pub fn coarsen(&self) -> Result<Grid> {
        Grid::new(self.z_max.clone(), self.level - 1)
    }

    pub fn same_family(&self, other: &Grid) -> bool {
        self.z_max == other.z_max && self.prec() == other.prec()
    }

    pub fn summary(&self) -> GridSummary {
        GridSummary {
            z_max: self.z_max.to_f64(),
            level: self.level,
            h: self.h.to_f64(),
            precision_bits: self.prec(),
        }
    }
}
