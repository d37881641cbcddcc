//! Finite-dimensional approximation of the distribution-form operator and its leading
//! eigenvalues.
//!
//! The linear operator `T[φ](x) = Σ_k 2^{-k}(φ(x/(x+2^k)) − φ(1/(1+2^k x)))` is discretized on
//! the nodes `z_1..z_N` of a grid (`φ(1) = 0` is built in), with interpolation of degree
//! `2r+1` and φ continued by its value at `z_max` beyond the grid. The fixed point F̃ is then
//! an eigenvector for an eigenvalue within the truncation error of 1.
//!
//! The nodal matrix also carries eigenvalues of modes concentrated near `x = 0`, which are
//! artefacts of the truncated domain (their modulus moves with `z_max`). [`spectrum`]
//! therefore runs Arnoldi from the smooth vector `1 − x` and keeps only Ritz pairs with small
//! residual; [`spectrum_dense`] returns all eigenvalues of the matrix.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

type C64 = nalgebra::Complex<f64>;

pub const SPECTRUM_Z_MAX: f64 = 11.0;
pub const SPECTRUM_R: usize = 3;

pub struct B2Matrix {
    pub matrix: DMatrix<f64>,
    pub z_max: f64,
    pub h: f64,
}

impl B2Matrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `1 − x` at the nodes.
    pub fn start_vector(&self) -> DVector<f64> {
        DVector::from_fn(self.dim(), |i, _| {
            let z = (i + 1) as f64 * self.h;
            -(-z * z).exp_m1()
        })
    }
}

fn lagrange_weights(t: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|m| {
            (0..n)
                .filter(|&l| l != m)
                .map(|l| (t - l as f64) / (m as f64 - l as f64))
                .product()
        })
        .collect()
}

/// The matrix of the discretized operator on `dim` unknowns (`dim` a power of two, ≥ 64).
pub fn build_b2_matrix(dim: usize) -> Result<B2Matrix> {
    if dim < 64 || !dim.is_power_of_two() {
        return Err(Error::Config(format!("matrix dimension must be a power of two >= 64, got {dim}")));
    }
    let n_int = dim;
    let h = SPECTRUM_Z_MAX / n_int as f64;
    let r = SPECTRUM_R;
    let points = 2 * r + 2;
    let max_base = (n_int - points + 1) as i64;
    let y_max = SPECTRUM_Z_MAX * SPECTRUM_Z_MAX;
    let k_max = 64 + (y_max / std::f64::consts::LN_2) as i32;

    let rows: Vec<Vec<f64>> = (1..=n_int)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0; dim];
            let z = i as f64 * h;
            let y = z * z;
            let x = (-y).exp();
            let mut add = |yq: f64, w: f64| {
                let s = yq.sqrt() / h;
                if s >= n_int as f64 {
                    row[dim - 1] += w;
                    return;
                }
                let base = (s.floor() as i64 - r as i64).min(max_base);
                let weights = lagrange_weights(s - base as f64, points);
                for (m, wm) in weights.into_iter().enumerate() {
                    let idx = (base + m as i64).unsigned_abs() as usize;
                    if idx > 0 {
                        row[idx - 1] += w * wm;
                    }
                }
            };
            for k in 1..=k_max {
                let w = 2f64.powi(-k);
                let ya = y + k as f64 * std::f64::consts::LN_2 + (x * w).ln_1p();
                let yb = (x / w).ln_1p();
                if ya >= y_max && yb >= y_max {
                    break;
                }
                add(ya, w);
                add(yb, -w);
            }
            row
        })
        .collect();
    let matrix = DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
    Ok(B2Matrix { matrix, z_max: SPECTRUM_Z_MAX, h })
}

#[derive(Debug, Clone, Serialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
    /// `‖Ty − θy‖/‖y‖` for the Ritz vector (0 for dense results).
    pub residual: f64,
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    /// Ordered by decreasing modulus.
    pub eigenvalues: Vec<Eigenvalue>,
    pub matrix_dim: usize,
    pub krylov_dim: usize,
    pub residual_tolerance: f64,
}

/// Arnoldi basis `Q` (n × (m+1)) and Hessenberg `H` ((m+1) × m), with reorthogonalization.
fn arnoldi(a: &DMatrix<f64>, v0: &DVector<f64>, m: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut q = DMatrix::<f64>::zeros(n, m + 1);
    let mut h = DMatrix::<f64>::zeros(m + 1, m);
    q.set_column(0, &(v0 / v0.norm()));
    for j in 0..m {
        let mut w = a * q.column(j);
        for _ in 0..2 {
            for i in 0..=j {
                let hij = q.column(i).dot(&w);
                h[(i, j)] += hij;
                w -= q.column(i) * hij;
            }
        }
        let norm = w.norm();
        h[(j + 1, j)] = norm;
        if norm == 0.0 {
            break;
        }
        q.set_column(j + 1, &(w / norm));
    }
    (q, h)
}

/// Eigenvector of `h` for `theta` by inverse iteration.
fn eigenvector(h: &DMatrix<f64>, theta: C64) -> DVector<C64> {
    let m = h.nrows();
    let scale = h.norm().max(1.0);
    let shift = theta + C64::new(1e-10 * scale, 1e-10 * scale);
    let shifted = DMatrix::from_fn(m, m, |i, j| {
        let v = C64::new(h[(i, j)], 0.0);
        if i == j {
            v - shift
        } else {
            v
        }
    });
    let lu = shifted.lu();
    let mut v = DVector::from_element(m, C64::new(1.0, 0.0));
    for _ in 0..3 {
        if let Some(next) = lu.solve(&v) {
            let norm = next.norm();
            if norm == 0.0 || !norm.is_finite() {
                break;
            }
            v = next / C64::new(norm, 0.0);
        }
    }
    v
}

/// Leading eigenvalues by Arnoldi from `1 − x` with `krylov_dim` steps; Ritz pairs with
/// residual above `residual_tolerance` are discarded.
pub fn spectrum_with(b: &B2Matrix, count: usize, krylov_dim: usize, residual_tolerance: f64) -> Result<SpectrumResult> {
    if count == 0 || count > 6 {
        return Err(Error::Config("eigenvalue count must be between 1 and 6".into()));
    }
    if b.dim() < 8 * krylov_dim || krylov_dim < count {
        return Err(Error::Config(format!("matrix dimension {} too small for {} eigenvalues", b.dim(), count)));
    }
    let (_, hfull) = arnoldi(&b.matrix, &b.start_vector(), krylov_dim);
    let m = krylov_dim;
    let h = hfull.rows(0, m).into_owned();
    let beta = hfull[(m, m - 1)];
    let ritz = h.complex_eigenvalues();
    let mut out: Vec<Eigenvalue> = ritz
        .iter()
        .map(|&theta| {
            let s = eigenvector(&h, theta);
            let residual = beta * s[m - 1].norm() / s.norm();
            Eigenvalue { re: theta.re, im: theta.im, residual }
        })
        .filter(|e| e.residual < residual_tolerance)
        .collect();
    out.sort_by(|a, b| b.modulus().total_cmp(&a.modulus()).then(b.im.total_cmp(&a.im)));
    out.truncate(count);
    Ok(SpectrumResult { eigenvalues: out, matrix_dim: b.dim(), krylov_dim, residual_tolerance })
}

/// [`spectrum_with`] using 16 Arnoldi steps and a residual tolerance of `1e-6`.
pub fn spectrum(b: &B2Matrix, count: usize) -> Result<SpectrumResult> {
    spectrum_with(b, count, 16, 1e-6)
}

/// All eigenvalues of the nodal matrix (dense QR), largest modulus first.
pub fn spectrum_dense(b: &B2Matrix) -> Vec<Eigenvalue> {
    let mut ev: Vec<Eigenvalue> = b
        .matrix
        .complex_eigenvalues()
        .iter()
        .map(|c| Eigenvalue { re: c.re, im: c.im, residual: 0.0 })
        .collect();
    ev.sort_by(|a, b| b.modulus().total_cmp(&a.modulus()));
    ev
}

