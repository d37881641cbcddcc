//! Discretized transfer operators ℬ₂, 𝒰₂, 𝒰̃₂, 𝒱₂ acting on densities on `(0, 1]`, the
//! function `G`, and the finite-dimensional spectrum of the distribution-form operator.
//!
//! Densities are sampled in double precision on the same z-grid as the distribution
//! function (`x = e^{-z²}`) and interpolated in z with even reflection at `z = 0`.
//! Beyond `z_max` they are continued linearly in `y = −ln x`, which is exact for constants
//! and matches the `lg(1/x)` growth of the fixed point.

mod gfunc;
mod spectrum;

pub use gfunc::{
    ftilde_extended, g_from_f, gsum3_rhs, k_from_vallee_formula, vallee_sum, vallee_weight, GFunction,
    ValleeSum,
};
pub use spectrum::{build_b2_matrix, spectrum, spectrum_dense, spectrum_with, B2Matrix, Eigenvalue, SpectrumResult};

use rayon::prelude::*;

use crate::density::{F64Interp, Grid, GridFunction};
use crate::real::{BigReal, Real};

/// Largest `y` at which a density obtained by differentiating F̃ is sampled directly; the
/// division by `e^{-y}` amplifies the error of F̃ beyond this point.
pub const DENSITY_Y_CUT: f64 = 32.0;

/// Largest `k` for which the inner `a`-sum of 𝒱₂ is evaluated term by term.
pub const V2_EXACT_K: u32 = 20;

/// A density sampled at the nodes `x_i = e^{-z_i²}` of a grid.
#[derive(Clone, Debug)]
pub struct DensityGrid {
    pub grid: Grid,
    pub r: usize,
    pub values: Vec<f64>,
    interp: F64Interp,
    y_last: f64,
    tail_slope: f64,
}

impl DensityGrid {
    pub fn from_values(grid: &Grid, r: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.intervals() + 1);
        let h = grid.h.to_f64();
        let n = grid.intervals();
        let y_last = grid.z_f64(n).powi(2);
        let y_prev = grid.z_f64(n - 1).powi(2);
        let tail_slope = (values[n] - values[n - 1]) / (y_last - y_prev);
        let interp = F64Interp::new(&values, h, r);
        DensityGrid { grid: grid.clone(), r, values, interp, y_last, tail_slope }
    }

    /// Samples `f(x, y)` with `y = −ln x` at the nodes.
    pub fn from_fn(grid: &Grid, r: usize, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let values = (0..=grid.intervals())
            .into_par_iter()
            .map(|i| {
                let y = grid.z_f64(i).powi(2);
                f((-y).exp(), y)
            })
            .collect();
        DensityGrid::from_values(grid, r, values)
    }

    pub fn uniform(grid: &Grid, r: usize) -> Self {
        DensityGrid::from_fn(grid, r, |_, _| 1.0)
    }

    /// The density `f = −dF̃/dx` of a distribution sampled on its own grid.
    ///
    /// With `ψ(z) = F̃(e^{-z²})`, `f = ψ'(z)/(2z e^{-z²})`, and `f(1) = ψ''(0)/2`.
    pub fn from_ftilde(f: &GridFunction) -> Self {
        let grid = &f.grid;
        let values = (0..=grid.intervals())
            .into_par_iter()
            .map(|i| {
                let z = grid.z(i);
                let [_, d1, d2] = f.eval_z_derivatives(&z);
                if i == 0 {
                    return d2.mul_pow2(-1).to_f64();
                }
                if z.to_f64().powi(2) > DENSITY_Y_CUT {
                    return 0.0;
                }
                let x = (-(z.clone() * &z)).exp();
                (d1 / &(z.mul_pow2(1) * &x)).to_f64()
            })
            .collect();
        DensityGrid::from_values(grid, f.r, values).with_linear_tail(DENSITY_Y_CUT)
    }

    /// Replaces the values at nodes with `y > y_cut` by the line in `y` through the last two
    /// nodes at or below `y_cut`.
    pub fn with_linear_tail(self, y_cut: f64) -> Self {
        let n = (0..self.values.len()).rev().find(|&i| self.grid.z_f64(i).powi(2) <= y_cut).unwrap_or(0);
        if n < 1 || n + 1 >= self.values.len() {
            return self;
        }
        let (y0, y1) = (self.grid.z_f64(n - 1).powi(2), self.grid.z_f64(n).powi(2));
        let slope = (self.values[n] - self.values[n - 1]) / (y1 - y0);
        let base = self.values[n];
        let mut values = self.values;
        for (i, v) in values.iter_mut().enumerate().skip(n + 1) {
            *v = base + slope * (self.grid.z_f64(i).powi(2) - y1);
        }
        DensityGrid::from_values(&self.grid, self.r, values)
    }

    /// `f(e^{-y})` for `y ≥ 0`.
    pub fn eval_y(&self, y: f64) -> f64 {
        match self.interp.eval_y(y) {
            Some(v) => v,
            None => self.values[self.values.len() - 1] + (y - self.y_last) * self.tail_slope,
        }
    }

    /// `f(x)` for `0 < x ≤ 1`.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_y(-x.ln())
    }

    /// `∫₀¹ f(x) dx` by the trapezoidal rule in z, with the `h²` endpoint correction at `z = 0`
    /// (the integrand `2z e^{-z²} f` has slope `2f(1)` there).
    pub fn l1_norm(&self) -> f64 {
        let n = self.grid.intervals();
        let h = self.grid.h.to_f64();
        let mut sum = 0.0;
        for i in 1..=n {
            let z = self.grid.z_f64(i);
            let w = if i == n { 0.5 } else { 1.0 };
            sum += w * self.values[i] * 2.0 * z * (-z * z).exp();
        }
        sum * h + h * h / 6.0 * self.values[0]
    }

    pub fn map_nodes(&self, op: impl Fn(f64, f64) -> f64 + Sync) -> DensityGrid {
        DensityGrid::from_fn(&self.grid, self.r, op)
    }

    /// Largest difference at the nodes with `z ≤ z_limit`.
    pub fn sup_diff(&self, other: &DensityGrid, z_limit: f64) -> f64 {
        (0..self.values.len())
            .filter(|&i| self.grid.z_f64(i) <= z_limit)
            .map(|i| (self.values[i] - other.values[i]).abs())
            .fold(0.0, f64::max)
    }
}

/// Number of k-terms for the families `1/(1+2^k x)`: enough for `(2^k x)^{-2}` to be negligible.
fn k_limit(y: f64) -> i32 {
    (y / std::f64::consts::LN_2).ceil() as i32 + 48
}

/// `𝒰₂[f](x) = Σ_k (1+2^k x)^{-2} f(1/(1+2^k x))`, at `x = e^{-y}` (any real `y`).
pub fn u2_at(f: &DensityGrid, x: f64) -> f64 {
    let y = -x.ln();
    let mut sum = 0.0;
    for k in 1..=k_limit(y.max(0.0)) {
        let p = 2f64.powi(k) * x;
        let w = 1.0 / (1.0 + p);
        sum += w * w * f.eval_y(p.ln_1p());
    }
    sum
}

/// `𝒰̃₂[f](x) = x^{-2} 𝒰₂[f](1/x)`.
pub fn utilde2_at(f: &DensityGrid, x: f64) -> f64 {
    u2_at(f, 1.0 / x) / (x * x)
}

/// `ℬ₂[f](x) = Σ_k [(x+2^k)^{-2} f(x/(x+2^k)) + (1+2^k x)^{-2} f(1/(1+2^k x))]`.
pub fn b2_at(f: &DensityGrid, x: f64) -> f64 {
    let y = -x.ln();
    let mut sum = 0.0;
    for k in 1..=k_limit(y.max(0.0)) {
        let p = 2f64.powi(k);
        let a = 1.0 / (x + p);
        sum += a * a * f.eval_y((p / x).ln_1p());
        let b = 1.0 / (1.0 + p * x);
        sum += b * b * f.eval_y((p * x).ln_1p());
    }
    sum
}

/// `𝒱₂[f](x) = Σ_k Σ_{a odd, a<2^k} (a+2^k x)^{-2} f(1/(a+2^k x))`.
///
/// Inner sums are exact for `k ≤ V2_EXACT_K`. Beyond, the odd-`a` sum is a midpoint rule
/// with step 2 for `½∫₀^{2^k} (s+2^k x)^{-2} f(1/(s+2^k x)) ds = ½∫_{w₁}^{w₂} f(w) dw`,
/// `w₁ = 1/(2^k(1+x))`, `w₂ = 1/(2^k x)`, whose error is `O((2^k x)^{-3})`. The k-sum stops
/// once the block falls below `1e-18`.
pub fn v2_at(f: &DensityGrid, x: f64) -> f64 {
    let mut sum = 0.0;
    for k in 1..=V2_EXACT_K as i32 {
        let c = 2f64.powi(k) * x;
        let mut block = 0.0;
        let mut a = 1.0;
        let top = 2f64.powi(k);
        while a < top {
            let u = a + c;
            block += f.eval_y(u.ln()) / (u * u);
            a += 2.0;
        }
        sum += block;
    }
    let mut k = V2_EXACT_K as i32 + 1;
    loop {
        let p = 2f64.powi(k);
        let y_lo = (p * x).ln();
        let y_hi = (p * (1.0 + x)).ln();
        let block = 0.5
            * quadrature::integrate(|y| f.eval_y(y) * (-y).exp(), y_lo, y_hi, 1e-20 / x.max(1e-3)).integral;
        sum += block;
        if block.abs() < 1e-18 || k > 1100 {
            break;
        }
        k += 1;
    }
    sum
}

pub fn apply_b2(f: &DensityGrid) -> DensityGrid {
    f.map_nodes(|x, _| b2_at(f, x))
}

pub fn apply_u2(f: &DensityGrid) -> DensityGrid {
    f.map_nodes(|x, _| u2_at(f, x))
}

pub fn apply_utilde2(f: &DensityGrid) -> DensityGrid {
    f.map_nodes(|x, _| utilde2_at(f, x))
}

/// 𝒱₂ on every node; expensive (about `2^{V2_EXACT_K}` evaluations per node).
pub fn apply_v2(f: &DensityGrid) -> DensityGrid {
    f.map_nodes(|x, _| v2_at(f, x))
}

/// The sample points `(j + ½)/16`, `j = 0..16`.
pub fn sample_points() -> Vec<f64> {
    (0..16).map(|j| (j as f64 + 0.5) / 16.0).collect()
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct IdentityResiduals {
    pub points: Vec<f64>,
    /// `𝒱₂f − 𝒱₂𝒰̃₂f − 𝒰₂f`.
    pub split: Vec<f64>,
    /// `(𝒱₂ − I)𝒰₂f − 𝒱₂(ℬ₂ − I)f`.
    pub commutation: Vec<f64>,
    /// `(𝒰₂ + 𝒰̃₂)f − ℬ₂f` at every grid node.
    pub additivity_max: f64,
}

impl IdentityResiduals {
    pub fn split_max(&self) -> f64 {
        self.split.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn commutation_max(&self) -> f64 {
        self.commutation.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Residuals of `𝒱 = 𝒱𝒰̃ + 𝒰`, `(𝒱−I)𝒰 = 𝒱(ℬ−I)` at `points`, and of `ℬ = 𝒰 + 𝒰̃` on the grid.
///
/// Inner operator images are materialized on the grid before 𝒱₂ is applied to them.
pub fn identity_residuals(f: &DensityGrid, points: &[f64]) -> IdentityResiduals {
    let uf = apply_u2(f);
    let utf = apply_utilde2(f);
    let bf = apply_b2(f);
    let additivity_max = (0..f.values.len())
        .map(|i| ((uf.values[i] + utf.values[i]) - bf.values[i]).abs() / bf.values[i].abs().max(1.0))
        .fold(0.0, f64::max);
    let rows: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&x| {
            let vf = v2_at(f, x);
            let vuf = v2_at(&uf, x);
            let vutf = v2_at(&utf, x);
            let vbf = v2_at(&bf, x);
            let u = u2_at(f, x);
            let split = vf - vutf - u;
            let commutation = (vuf - u) - (vbf - vf);
            (split, commutation)
        })
        .collect();
    IdentityResiduals {
        points: points.to_vec(),
        split: rows.iter().map(|r| r.0).collect(),
        commutation: rows.iter().map(|r| r.1).collect(),
        additivity_max,
    }
}

/// `f(1)` and `g(1) = 𝒰₂[f](1) = Σ_k (1+2^k)^{-2} f(1/(1+2^k))` in extended precision, with
/// `f = −dF̃/dx` from the interpolant.
pub fn f1_and_g1(f: &GridFunction) -> (BigReal, BigReal) {
    let prec = f.grid.prec();
    let f1 = f.eval_z_derivatives(&BigReal::zero(prec))[2].mul_pow2(-1);
    let one = BigReal::one(prec);
    let mut g1 = BigReal::zero(prec);
    for k in 1..=(prec as i32 / 2 + 4) {
        let p = one.mul_pow2(k) + &one;
        let y = p.ln();
        let z = y.sqrt();
        if z > f.grid.z_max {
            break;
        }
        let [_, d1, _] = f.eval_z_derivatives(&z);
        // f(w) = ψ'(z)/(2z w) with w = 1/p, weighted by w².
        let density = d1 * &p / &z.mul_pow2(1);
        g1 += &(density / &(p.clone() * &p));
    }
    (f1, g1)
}
