//! The ladder of nested grids and the constants K, λ, E∞ extracted from it.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::io::{read_grid_function, write_grid_function};
use super::quadrature::{b_from_density, compute_b, compute_e_inf};
use super::richardson::{RichardsonSummary, RichardsonTable};
use super::{iterate_with_plan, prolong, Grid, GridFunction, IterationPlan, IterationPolicy};
use crate::error::{Error, Result};
use crate::real::{BigReal, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct LadderParams {
    pub z_max: f64,
    /// Level of the finest grid.
    pub level: u32,
    /// Number of Richardson extrapolations for K; the ladder has this many coarser grids.
    pub extrapolations: usize,
    /// Interpolation half-width (degree `2r+1`).
    pub r: usize,
    pub precision: u32,
    pub policy: IterationPolicy,
}

impl LadderParams {
    /// Level 12, four extrapolations, 200 bits, iterate to a 1e-14 change.
    pub fn desk() -> Self {
        LadderParams {
            z_max: 11.0,
            level: 12,
            extrapolations: 4,
            r: 4,
            precision: 200,
            policy: IterationPolicy::desk(),
        }
    }

    /// Level 15, seven extrapolations, 400 bits, 81 iterations per grid.
    pub fn full() -> Self {
        LadderParams {
            z_max: 11.0,
            level: 15,
            extrapolations: 7,
            r: 7,
            precision: 400,
            policy: IterationPolicy::Fixed(81),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision < 64 {
            return Err(Error::Config("precision_bits must be at least 64".into()));
        }
        if self.level < 6 {
            return Err(Error::Config("grid_level must be at least 6".into()));
        }
        if self.extrapolations as u32 >= self.level {
            return Err(Error::Config("extrapolations must be below grid_level".into()));
        }
        let coarsest = 1usize << (self.level - self.extrapolations as u32);
        if coarsest < 2 * (2 * self.r + 2) {
            return Err(Error::Config(format!(
                "coarsest grid (level {}) too small for interpolation degree {}",
                self.level - self.extrapolations as u32,
                2 * self.r + 1
            )));
        }
        if !(self.z_max > 0.0 && self.z_max.is_finite()) {
            return Err(Error::Config("z_max must be positive".into()));
        }
        Ok(())
    }

    fn cache_name(&self, level: u32) -> String {
        let policy = match self.policy {
            IterationPolicy::Fixed(n) => format!("n{n}"),
            IterationPolicy::UntilChange { tol, cap } => format!("tol{tol:e}-cap{cap}"),
        };
        format!("ftilde_z{}_l{}_p{}_r{}_{}.txt", self.z_max, level, self.precision, self.r, policy)
    }
}

fn load_cached(path: &Path) -> Option<GridFunction> {
    let file = File::open(path).ok()?;
    read_grid_function(BufReader::new(file)).ok()
}

/// Solves the fixed point on levels `level, level−1, …, level−extrapolations` (returned finest
/// first). With a tolerance policy, each grid starts from the interpolated solution of the next
/// coarser one; with a fixed count every grid starts from `1 − x`.
pub fn solve_ladder(
    params: &LadderParams,
    cache_dir: Option<&Path>,
    mut progress: impl FnMut(&str),
) -> Result<Vec<GridFunction>> {
    params.validate()?;
    let mut solutions: Vec<GridFunction> = Vec::new();
    let coarsest = params.level - params.extrapolations as u32;
    for level in coarsest..=params.level {
        let grid = Grid::with_f64(params.z_max, level, params.precision)?;
        let cache_path: Option<PathBuf> = cache_dir.map(|d| d.join(params.cache_name(level)));
        if let Some(f) = cache_path.as_deref().and_then(load_cached) {
            if f.grid == grid && f.r == params.r {
                progress(&format!("level {level}: loaded from cache"));
                solutions.push(f);
                continue;
            }
        }
        let plan = IterationPlan::build(&grid, params.r);
        let start = match (params.policy, solutions.last()) {
            (IterationPolicy::UntilChange { .. }, Some(prev)) => prolong(prev, &grid)?,
            _ => GridFunction::initial(&grid, params.r),
        };
        let f = iterate_with_plan(&plan, start, params.policy);
        progress(&format!(
            "level {level}: {} terms, {} iterations, last change {:.3e}, converged {}",
            plan.term_count(),
            f.iterations,
            f.last_change.unwrap_or(f64::NAN),
            f.converged
        ));
        if let Some(path) = &cache_path {
            if let Some(dir) = path.parent() {
                std::fs::create_dir_all(dir)?;
            }
            write_grid_function(&f, BufWriter::new(File::create(path)?))?;
        }
        solutions.push(f);
    }
    solutions.reverse();
    Ok(solutions)
}

fn check_ladder(solutions: &[GridFunction]) -> Result<()> {
    if solutions.len() < 2 {
        return Err(Error::NotNested("need at least two grids".into()));
    }
    for w in solutions.windows(2) {
        if !w[0].grid.same_family(&w[1].grid) || w[1].grid.level + 1 != w[0].grid.level {
            return Err(Error::NotNested(format!(
                "levels {} and {} are not consecutive grids of one family",
                w[0].grid.level, w[1].grid.level
            )));
        }
    }
    Ok(())
}

/// `K = 2/b` on each grid, extrapolated on the h² ladder. `solutions` is finest first.
pub fn compute_k(solutions: &[GridFunction]) -> Result<(BigReal, RichardsonTable)> {
    check_ladder(solutions)?;
    let prec = solutions[0].grid.prec();
    let two = BigReal::with_f64(prec, 2.0);
    let estimates = solutions.iter().map(|f| (f.grid.h.clone(), two.clone() / &compute_b(f))).collect();
    let table = RichardsonTable::new(2, estimates)?;
    Ok((table.best().clone(), table))
}

/// `E∞` on each grid, extrapolated on the h² ladder.
pub fn compute_e_inf_ladder(solutions: &[GridFunction]) -> Result<(BigReal, RichardsonTable)> {
    check_ladder(solutions)?;
    let estimates = solutions.iter().map(|f| (f.grid.h.clone(), compute_e_inf(f))).collect();
    let table = RichardsonTable::new(2, estimates)?;
    Ok((table.best().clone(), table))
}

/// Number of h⁴ extrapolations for λ that matches `r` h² extrapolations for K.
pub fn lambda_extrapolations(r: usize) -> usize {
    (r + 2) / 2 - 1
}

/// `λ ≈ F̃(e^{-h²})/h²` read at the nodes `z = 2^j h` of the finest grid, extrapolated on
/// the h⁴ ladder.
pub fn compute_lambda(solutions: &[GridFunction], extrapolations: usize) -> Result<(BigReal, RichardsonTable)> {
    let f = solutions.first().ok_or_else(|| Error::NotNested("no grids".into()))?;
    if solutions.len() > 1 {
        check_ladder(solutions)?;
    }
    let estimates = (0..=extrapolations)
        .map(|j| {
            let node = 1usize << j;
            let z = f.grid.z(node);
            let quotient = f.values[node].clone() / &(z.clone() * &z);
            (z, quotient)
        })
        .collect();
    let table = RichardsonTable::new(4, estimates)?;
    Ok((table.best().clone(), table))
}

#[derive(Debug, Clone)]
pub struct ConstantsReport {
    pub k: BigReal,
    pub k_table: RichardsonTable,
    pub lambda: BigReal,
    pub lambda_table: RichardsonTable,
    pub e_inf: BigReal,
    pub e_inf_table: RichardsonTable,
    /// `ln 2/E∞`.
    pub k_from_e_inf: BigReal,
    /// `b` from the density route on the finest grid (double precision).
    pub b_density_route: f64,
    pub k_lambda: BigReal,
    /// `4 ln 2/π²`.
    pub conjectured: BigReal,
    /// `Kλ − 4 ln 2/π²`.
    pub difference: BigReal,
    pub converged: bool,
    pub iterations: Vec<(u32, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsJson {
    pub k: String,
    pub lambda: String,
    pub k_lambda: String,
    pub four_ln2_over_pi2: String,
    pub difference: String,
    pub e_inf: String,
    pub k_from_e_inf: String,
    pub b_density_route: f64,
    pub converged: bool,
    pub iterations: Vec<(u32, usize)>,
    pub k_table: RichardsonSummary,
    pub lambda_table: RichardsonSummary,
}

impl ConstantsReport {
    pub fn to_json(&self, digits: usize) -> ConstantsJson {
        ConstantsJson {
            k: self.k.to_digits(digits),
            lambda: self.lambda.to_digits(digits),
            k_lambda: self.k_lambda.to_digits(digits),
            four_ln2_over_pi2: self.conjectured.to_digits(digits),
            difference: self.difference.to_digits(6),
            e_inf: self.e_inf.to_digits(digits),
            k_from_e_inf: self.k_from_e_inf.to_digits(digits),
            b_density_route: self.b_density_route,
            converged: self.converged,
            iterations: self.iterations.clone(),
            k_table: self.k_table.summary(digits),
            lambda_table: self.lambda_table.summary(digits),
        }
    }
}

/// K, λ, E∞ and the check of `Kλ = 4 ln 2/π²` from a solved ladder (finest first).
pub fn compute_constants(solutions: &[GridFunction], r: usize) -> Result<ConstantsReport> {
    let prec = solutions[0].grid.prec();
    let (k, k_table) = compute_k(solutions)?;
    let (lambda, lambda_table) = compute_lambda(solutions, lambda_extrapolations(r))?;
    let (e_inf, e_inf_table) = compute_e_inf_ladder(solutions)?;
    let ln2 = BigReal::ln2(prec);
    let pi = BigReal::pi(prec);
    let conjectured = ln2.mul_pow2(2) / &(pi.clone() * &pi);
    let k_lambda = k.clone() * &lambda;
    Ok(ConstantsReport {
        k_from_e_inf: ln2 / &e_inf,
        b_density_route: b_from_density(&solutions[0]),
        difference: k_lambda.clone() - &conjectured,
        k,
        k_table,
        lambda,
        lambda_table,
        e_inf,
        e_inf_table,
        k_lambda,
        conjectured,
        converged: solutions.iter().all(|f| f.converged),
        iterations: solutions.iter().map(|f| (f.grid.level, f.iterations)).collect(),
    })
}
