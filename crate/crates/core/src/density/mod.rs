//! Functional iteration of the F̃ recurrence on a z-grid and the constants derived from
//! its fixed point.
//!
//! `F̃_{n+1}(x) = Σ_{k≥1} 2^{-k} (F̃_n(x/(x+2^k)) − F̃_n(1/(1+2^k x)))`, `F̃₀(x) = 1 − x`,
//! sampled at `x = e^{-z²}` on a uniform grid in `z`.

mod constants;
mod grid;
mod interp;
mod io;
mod plan;
mod quadrature;
mod richardson;

pub use constants::{
    compute_constants, compute_e_inf_ladder, compute_k, compute_lambda, lambda_extrapolations, solve_ladder, ConstantsReport,
    LadderParams,
};
pub use grid::{Grid, GridSummary};
pub use interp::{F64Interp, Location, Stencil};
pub use io::{read_grid_function, write_grid_function, FORMAT_VERSION};
pub use plan::IterationPlan;
pub use quadrature::{b_from_density, compute_b, compute_e_inf, d_ftilde_dz};
pub use richardson::{richardson, RichardsonTable};

use crate::error::{Error, Result};
use crate::real::{BigReal, Real};

/// When to stop iterating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IterationPolicy {
    Fixed(usize),
    /// Stop once the sup-norm change of one step falls below `tol`, after at most `cap` steps.
    UntilChange { tol: f64, cap: usize },
}

impl IterationPolicy {
    pub fn desk() -> Self {
        IterationPolicy::UntilChange { tol: 1e-14, cap: 120 }
    }
}

/// Samples of F̃ on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub grid: Grid,
    /// Interpolation half-width: stencils have `2r+2` nodes.
    pub r: usize,
    pub values: Vec<BigReal>,
    pub iterations: usize,
    /// Sup-norm change of the last step, if any step was taken.
    pub last_change: Option<f64>,
    /// Whether the iteration met its stopping criterion.
    pub converged: bool,
}

impl GridFunction {
    /// `F̃₀(x) = 1 − x = −expm1(−z²)`.
    pub fn initial(grid: &Grid, r: usize) -> Self {
        let values = (0..=grid.intervals())
            .map(|i| {
                let z = grid.z(i);
                -(-(z.clone() * &z)).exp_m1()
            })
            .collect();
        GridFunction { grid: grid.clone(), r, values, iterations: 0, last_change: None, converged: false }
    }

    pub fn stencil(&self) -> Stencil {
        Stencil::new(self.r, self.grid.intervals())
    }

    fn at_scaled(&self, s: &BigReal) -> BigReal {
        let stencil = self.stencil();
        match stencil.locate(s) {
            Location::Tail => BigReal::one(self.grid.prec()),
            Location::Node(i) => self.values[i].clone(),
            Location::Inside { base, t } => stencil.eval(&stencil.differences(&self.values, base), &t),
        }
    }

    /// F̃ as a function of `z ≥ 0`.
    pub fn eval_z(&self, z: &BigReal) -> BigReal {
        let s = z.clone().abs() / &self.grid.h;
        self.at_scaled(&s)
    }

    /// `F̃(e^{-y})` for `y ≥ 0`.
    pub fn eval_neg_log(&self, y: &BigReal) -> BigReal {
        self.eval_z(&y.sqrt())
    }

    /// F̃(x) for `0 < x ≤ 1`; exact at grid points, 1 beyond `z_max`.
    pub fn eval_ftilde(&self, x: &BigReal) -> Result<BigReal> {
        let one = BigReal::one(x.prec());
        if *x <= x.lit(0.0) || *x > one {
            return Err(Error::Domain(format!("F̃ needs 0 < x <= 1, got {}", x.to_f64())));
        }
        if *x == one {
            return Ok(self.values[0].clone());
        }
        Ok(self.eval_neg_log(&(-x.ln())))
    }

    /// `(ψ, ψ', ψ'')` with `ψ(z) = F̃(e^{-z²})`, derivatives in `z`.
    pub fn eval_z_derivatives(&self, z: &BigReal) -> [BigReal; 3] {
        let prec = self.grid.prec();
        let stencil = self.stencil();
        let s = z.clone() / &self.grid.h;
        let sign = if *z < z.lit(0.0) { -1.0 } else { 1.0 };
        let s_abs = s.abs();
        let floor = s_abs.floor_i64();
        if stencil.locate(&s_abs).is_tail() {
            return [BigReal::one(prec), BigReal::zero(prec), BigReal::zero(prec)];
        }
        let base = (floor - self.r as i64).min(stencil.max_base());
        let t = s_abs - &BigReal::from_int(prec, base);
        let [p, dp, ddp] = stencil.eval_with_derivatives(&stencil.differences(&self.values, base), &t);
        let h = &self.grid.h;
        [p, dp / h * &BigReal::with_f64(prec, sign), ddp / h / h]
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.values.iter().map(Real::to_f64).collect()
    }

    /// Largest violation of `0 ≤ F̃ ≤ 1` and of monotonicity in z, as a sanity diagnostic.
    pub fn shape_violation(&self) -> f64 {
        let mut worst = 0.0f64;
        for w in self.values.windows(2) {
            worst = worst.max((w[0].clone() - &w[1]).to_f64());
        }
        for v in &self.values {
            let f = v.to_f64();
            worst = worst.max(-f).max(f - 1.0);
        }
        worst
    }
}

impl<R> Location<R> {
    pub fn is_tail(&self) -> bool {
        matches!(self, Location::Tail)
    }
}

fn sup_change(a: &[BigReal], b: &[BigReal]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.clone() - y).abs().to_f64())
        .fold(0.0, f64::max)
}

/// Runs the recurrence from `start` under `policy`, reusing a prebuilt plan.
pub fn iterate_with_plan(plan: &IterationPlan, start: GridFunction, policy: IterationPolicy) -> GridFunction {
    let mut f = start;
    let (max_steps, tol) = match policy {
        IterationPolicy::Fixed(n) => (n, None),
        IterationPolicy::UntilChange { tol, cap } => (cap, Some(tol)),
    };
    f.converged = false;
    for _ in 0..max_steps {
        let next = plan.apply(&f.values);
        let change = sup_change(&next, &f.values);
        f.values = next;
        f.iterations += 1;
        f.last_change = Some(change);
        if let Some(tol) = tol {
            if change < tol {
                f.converged = true;
                break;
            }
        }
    }
    if tol.is_none() {
        f.converged = true;
    }
    f
}

/// `F̃_steps` from `F̃₀(x) = 1 − x`.
pub fn iterate_ftilde(grid: &Grid, r: usize, steps: usize) -> Result<GridFunction> {
    if steps == 0 {
        return Ok(GridFunction::initial(grid, r));
    }
    let plan = IterationPlan::build(grid, r);
    Ok(iterate_with_plan(&plan, GridFunction::initial(grid, r), IterationPolicy::Fixed(steps)))
}

/// Interpolates `coarse` onto the nodes of `fine` (same `z_max`).
pub fn prolong(coarse: &GridFunction, fine: &Grid) -> Result<GridFunction> {
    if !coarse.grid.same_family(fine) {
        return Err(Error::NotNested("different z_max or precision".into()));
    }
    let values = (0..=fine.intervals()).map(|i| coarse.eval_z(&fine.z(i))).collect();
    Ok(GridFunction {
        grid: fine.clone(),
        r: coarse.r,
        values,
        iterations: 0,
        last_change: None,
        converged: false,
    })
}
