//! Local polynomial interpolation on the uniform z-grid.
//!
//! A stencil of `n = 2r+2` nodes is evaluated in Newton forward-difference form,
//! `p(t) = Σ_m C(t, m) Δ^m y_base`, by a Horner-like recursion. Nodes with negative
//! index are mirrored (`y_{-i} = y_i`), which is exact because F̃(e^{-z²}) is even in z.
//! Near `z_max` the stencil is shifted to stay inside the grid.

use rug::ops::SubFrom;
use rug::Assign;
use rug::Float;

use crate::real::{BigReal, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stencil {
    /// Half-width `r`; the interpolating polynomial has degree `2r+1`.
    pub r: usize,
    /// Number of grid intervals `N`.
    pub intervals: usize,
}

/// Where an argument falls: outside the grid (tail), on a node, or inside a stencil.
#[derive(Debug, Clone)]
pub enum Location<R> {
    Tail,
    Node(usize),
    Inside { base: i64, t: R },
}

impl Stencil {
    pub fn new(r: usize, intervals: usize) -> Self {
        assert!(intervals >= 2 * r + 2, "grid too small for stencil");
        Stencil { r, intervals }
    }

    pub fn points(&self) -> usize {
        2 * self.r + 2
    }

    pub fn min_base(&self) -> i64 {
        -(self.r as i64)
    }

    pub fn max_base(&self) -> i64 {
        (self.intervals - self.points() + 1) as i64
    }

    /// Locates `s = z/h` (in units of the step).
    pub fn locate<R: Real>(&self, s: &R) -> Location<R> {
        if s.to_f64() >= self.intervals as f64 && *s > s.lit(self.intervals as f64) {
            return Location::Tail;
        }
        let fl = s.floor_i64();
        if s.is_integer() {
            return Location::Node(fl as usize);
        }
        let base = (fl - self.r as i64).min(self.max_base());
        let t = s.clone() - s.lit(base as f64);
        Location::Inside { base, t }
    }

    /// Forward differences `Δ^m y_base`, `m = 0..n`.
    pub fn differences<R: Real>(&self, values: &[R], base: i64) -> Vec<R> {
        let n = self.points();
        let mut d: Vec<R> = (0..n).map(|m| values[(base + m as i64).unsigned_abs() as usize].clone()).collect();
        let mut out = Vec::with_capacity(n);
        for level in 0..n {
            out.push(d[0].clone());
            for i in 0..n - 1 - level {
                d[i] = d[i + 1].clone() - &d[i];
            }
        }
        out
    }

    /// Interpolant and its first two derivatives with respect to `t`.
    pub fn eval_with_derivatives<R: Real>(&self, diffs: &[R], t: &R) -> [R; 3] {
        let n = diffs.len();
        let mut acc = diffs[n - 1].clone();
        let mut dacc = t.lit(0.0);
        let mut ddacc = t.lit(0.0);
        for m in (1..n).rev() {
            let mm = t.lit(m as f64);
            let q = (t.clone() - t.lit((m - 1) as f64)) / &mm;
            ddacc = q.clone() * &ddacc + (dacc.clone() + &dacc) / &mm;
            dacc = q.clone() * &dacc + acc.clone() / &mm;
            acc = q * &acc + &diffs[m - 1];
        }
        [acc, dacc, ddacc]
    }

    pub fn eval<R: Real>(&self, diffs: &[R], t: &R) -> R {
        let n = diffs.len();
        let mut acc = diffs[n - 1].clone();
        for m in (1..n).rev() {
            let q = (t.clone() - t.lit((m - 1) as f64)) / t.lit(m as f64);
            acc = q * &acc + &diffs[m - 1];
        }
        acc
    }
}

/// Forward-difference rows for every admissible stencil base, at full precision.
pub(crate) struct DiffTable {
    n: usize,
    min_base: i64,
    rows: Vec<Float>,
}

impl DiffTable {
    pub fn build(stencil: &Stencil, values: &[BigReal]) -> Self {
        let n = stencil.points();
        let min_base = stencil.min_base();
        let count = (stencil.max_base() - min_base + 1) as usize;
        let mut rows = Vec::with_capacity(count * n);
        let mut d: Vec<Float> = Vec::with_capacity(n);
        for b in 0..count as i64 {
            let base = b + min_base;
            d.clear();
            d.extend((0..n).map(|m| values[(base + m as i64).unsigned_abs() as usize].0.clone()));
            for level in 0..n {
                rows.push(d[0].clone());
                for i in 0..n - 1 - level {
                    let (lo, hi) = d.split_at_mut(i + 1);
                    lo[i].sub_from(&hi[0]);
                }
            }
        }
        DiffTable { n, min_base, rows }
    }

    fn row(&self, base: i64) -> &[Float] {
        let start = (base - self.min_base) as usize * self.n;
        &self.rows[start..start + self.n]
    }

    /// Writes `p(t)` for the stencil at `base` into `out`, using `s` as scratch.
    pub fn eval_into(&self, base: i64, t: &Float, out: &mut Float, s: &mut Float) {
        let d = self.row(base);
        out.assign(&d[self.n - 1]);
        for m in (1..self.n).rev() {
            s.assign(t - (m - 1) as u32);
            *s /= m as u32;
            *out *= &*s;
            *out += &d[m - 1];
        }
    }
}

/// Double-precision interpolation on a grid with step `h`, with forward differences
/// precomputed for every stencil base.
#[derive(Clone, Debug)]
pub struct F64Interp {
    stencil: Stencil,
    inv_h: f64,
    h: f64,
    rows: Vec<f64>,
}

impl F64Interp {
    pub fn new(values: &[f64], h: f64, r: usize) -> Self {
        let stencil = Stencil::new(r, values.len() - 1);
        let n = stencil.points();
        let mut rows = Vec::with_capacity((stencil.max_base() - stencil.min_base() + 1) as usize * n);
        for base in stencil.min_base()..=stencil.max_base() {
            rows.extend(stencil.differences(values, base));
        }
        F64Interp { stencil, inv_h: 1.0 / h, h, rows }
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn z_max(&self) -> f64 {
        self.h * self.stencil.intervals as f64
    }

    /// Value at `z`, or `None` beyond the last node.
    pub fn eval_z(&self, z: f64) -> Option<f64> {
        let s = z.abs() * self.inv_h;
        let n_int = self.stencil.intervals as f64;
        if s > n_int {
            return None;
        }
        let n = self.stencil.points();
        let base = (s.floor() as i64 - self.stencil.r as i64).min(self.stencil.max_base());
        let t = s - base as f64;
        let start = (base - self.stencil.min_base()) as usize * n;
        let d = &self.rows[start..start + n];
        let mut acc = d[n - 1];
        for m in (1..n).rev() {
            acc = d[m - 1] + acc * (t - (m - 1) as f64) / m as f64;
        }
        Some(acc)
    }

    /// Value at `x = e^{-y}`.
    pub fn eval_y(&self, y: f64) -> Option<f64> {
        self.eval_z(y.max(0.0).sqrt())
    }
}
