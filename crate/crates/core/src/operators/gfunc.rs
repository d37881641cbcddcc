//! `G(x) = Σ_k 2^{-k} F̃(1/(1+2^k x))`, the integral of `g = 𝒰₂ f`, and the sums over odd `a`
//! built from it.

use serde::Serialize;

use super::f1_and_g1;
use crate::density::{F64Interp, GridFunction};
use crate::error::{Error, Result};
use crate::real::{BigReal, Real};

/// `G` evaluated from a sampled F̃, in extended or double precision.
pub struct GFunction<'a> {
    pub ftilde: &'a GridFunction,
    fast: F64Interp,
}

impl<'a> GFunction<'a> {
    pub fn new(ftilde: &'a GridFunction) -> Self {
        let fast = F64Interp::new(&ftilde.values_f64(), ftilde.grid.h.to_f64(), ftilde.r);
        GFunction { ftilde, fast }
    }

    /// `G(x)` for `x > 0`. Once `1/(1+2^k x)` leaves the grid F̃ = 1, and the remaining
    /// terms sum to `2^{-(k-1)}`.
    pub fn eval(&self, x: &BigReal) -> Result<BigReal> {
        if *x <= x.lit(0.0) {
            return Err(Error::Domain("G needs x > 0".into()));
        }
        let prec = x.prec();
        let y_max = self.ftilde.grid.z_max.clone() * &self.ftilde.grid.z_max;
        let one = BigReal::one(prec);
        let mut sum = BigReal::zero(prec);
        let k_cap = prec as i32 + 2;
        for k in 1..=k_cap {
            let y = x.mul_pow2(k).ln_1p();
            if y > y_max {
                return Ok(sum + &one.mul_pow2(1 - k));
            }
            sum += &self.ftilde.eval_neg_log(&y).mul_pow2(-k);
        }
        Ok(sum + &one.mul_pow2(-k_cap))
    }

    /// `G(1/a)` in double precision, via `F̃(a/(a+2^k))`.
    pub fn eval_inv_f64(&self, a: f64) -> f64 {
        let mut sum = 0.0;
        let mut w = 0.5;
        for k in 1..=64 {
            let y = (2f64.powi(k) / a).ln_1p();
            match self.fast.eval_y(y) {
                Some(v) => sum += w * v,
                None => return sum + 2.0 * w,
            }
            w *= 0.5;
        }
        sum + 2.0 * w
    }
}

/// `(g(1), G)`: `g(1)` from the sum `Σ_k (1+2^k)^{-2} f(1/(1+2^k))`.
pub fn g_from_f(ftilde: &GridFunction) -> (BigReal, GFunction<'_>) {
    let (_, g1) = f1_and_g1(ftilde);
    (g1, GFunction::new(ftilde))
}

/// F̃ on `(0, ∞)`: the grid value for `x ≤ 1`, and `−F̃(1/x)` for `x > 1`.
pub fn ftilde_extended(ftilde: &GridFunction, x: &BigReal) -> Result<BigReal> {
    let one = BigReal::one(x.prec());
    if *x > one {
        Ok(-ftilde.eval_ftilde(&(one / x))?)
    } else {
        ftilde.eval_ftilde(x)
    }
}

/// `c_a = 2^{-⌊lg a⌋}`.
pub fn vallee_weight(a: u64) -> f64 {
    2f64.powi(-(63 - a.leading_zeros() as i32))
}

#[derive(Debug, Clone, Serialize)]
pub struct ValleeSum {
    pub a_max: u64,
    /// `Σ_{a odd ≤ a_max} 2^{-⌊lg a⌋} G(1/a)`.
    pub partial: f64,
    /// Partial sums at `a = 2^j − 1`, `j = 2, 3, …`.
    pub octave_partials: Vec<(u32, f64)>,
    /// Estimate of `Σ_{a odd > a_max}` from octave integrals.
    pub tail: f64,
}

impl ValleeSum {
    pub fn deficit(&self) -> f64 {
        1.0 - self.partial
    }

    pub fn corrected_deficit(&self) -> f64 {
        1.0 - self.partial - self.tail
    }

    pub fn monotone(&self) -> bool {
        self.octave_partials.windows(2).all(|w| w[1].1 >= w[0].1)
    }
}

/// Partial sum of `Σ_{a odd} 2^{-⌊lg a⌋} G(1/a)` up to `a_max`, and a tail estimate.
///
/// For an octave `2^j ≤ a < 2^{j+1}` the odd terms are a step-2 midpoint rule, so its
/// contribution is `≈ ½ ∫₁² G(1/(2^j t)) dt`. The estimate sums these integrals from the
/// octave after `a_max` (which must end an octave for the estimate to apply) while they matter.
pub fn vallee_sum(g: &GFunction<'_>, a_max: u64) -> Result<ValleeSum> {
    if a_max < 3 || a_max % 2 == 0 {
        return Err(Error::Config("a_max must be odd and at least 3".into()));
    }
    let mut partial = 0.0;
    let mut octave_partials = Vec::new();
    let mut octave = 0u32;
    let mut a = 1u64;
    while a <= a_max {
        let j = 63 - a.leading_zeros();
        if j != octave {
            octave_partials.push((j, partial));
            octave = j;
        }
        partial += vallee_weight(a) * g.eval_inv_f64(a as f64);
        a += 2;
    }
    let next_octave = 64 - a_max.leading_zeros();
    if (a_max + 1).is_power_of_two() {
        octave_partials.push((next_octave, partial));
    }
    let mut tail = 0.0;
    for j in next_octave..1000 {
        let scale = 2f64.powi(j as i32);
        let block = 0.5 * quadrature::integrate(|t| g.eval_inv_f64(scale * t), 1.0, 2.0, 1e-17).integral;
        tail += block;
        if block < 1e-17 {
            break;
        }
    }
    Ok(ValleeSum { a_max, partial, octave_partials, tail })
}

/// `K = (2 ln 2/(π² g(1))) · Σ_{a odd} 2^{-⌊lg a⌋} G(1/a)`.
pub fn k_from_vallee_formula(g1: f64, sum: f64) -> f64 {
    2.0 * std::f64::consts::LN_2 / (std::f64::consts::PI.powi(2) * g1) * sum
}

/// Right side of `G(x) = Σ_k 2^{-k} Σ_{a odd < 2^k} (G(1/a) − G(1/(a+2^k x)))`.
///
/// Odd `a < 2^12` are summed exactly; the rest of each inner sum is a step-2 midpoint rule,
/// `½∫ (G(1/s) − G(1/(s+2^k x))) ds`, integrated in `ln s`. The k-sum runs to `k_max`.
pub fn gsum3_rhs(g: &GFunction<'_>, x: f64, k_max: i32) -> f64 {
    const EXACT: f64 = 4096.0;
    let mut total = 0.0;
    for k in 1..=k_max {
        let top = 2f64.powi(k);
        let c = top * x;
        let mut block = 0.0;
        let mut a = 1.0;
        while a < top.min(EXACT) {
            block += g.eval_inv_f64(a) - g.eval_inv_f64(a + c);
            a += 2.0;
        }
        if top > EXACT {
            let integrand = |u: f64| {
                let s = u.exp();
                (g.eval_inv_f64(s) - g.eval_inv_f64(s + c)) * s
            };
            block += 0.5 * quadrature::integrate(integrand, EXACT.ln(), top.ln(), 1e-16).integral;
        }
        total += block / top;
    }
    total
}
