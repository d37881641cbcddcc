//! Integrals of the fixed point: `b` (two routes) and `E∞`.

use super::GridFunction;
use crate::real::{BigReal, Real};

/// Trapezoidal rule on the grid nodes; the integrand vanishes at `z = 0`.
fn trapezoid(f: &GridFunction, g: impl Fn(usize, &BigReal, &BigReal) -> BigReal) -> BigReal {
    let grid = &f.grid;
    let n = grid.intervals();
    let prec = grid.prec();
    let mut sum = BigReal::zero(prec);
    for i in 1..=n {
        let z = grid.z(i);
        let mut term = g(i, &z, &f.values[i]);
        if i == n {
            term = term.mul_pow2(-1);
        }
        sum += &term;
    }
    sum * &grid.h
}

/// `b = 2 + (1/ln 2) ∫₀¹ F̃(x)/(1−x) dx` by the trapezoidal rule in z.
///
/// In z the integrand is `F̃ · 2z e^{-z²}/(1 − e^{-z²})`, which tends to 0 at z = 0 since
/// `F̃(x)/(1−x) → λ`. Beyond `z_max`, where F̃ = 1, the integral `−ln(1 − x_min)` is added.
pub fn compute_b(f: &GridFunction) -> BigReal {
    let prec = f.grid.prec();
    let integral = trapezoid(f, |_, z, v| {
        let y = z.clone() * z;
        let x = (-y.clone()).exp();
        let one_minus_x = -(-y).exp_m1();
        v.clone() * &(z.mul_pow2(1) * &x) / &one_minus_x
    });
    let tail = -(-f.grid.x_min()).ln_1p();
    BigReal::with_f64(prec, 2.0) + &((integral + &tail) / &BigReal::ln2(prec))
}

/// `E∞ = ln 2 + ∫₀¹ S(x) F(x) dx` with `F = 1 − F̃` and
/// `S(x) = Σ_{k≥2} (1−2^{-k})/(1+(2^k−1)x) − 1/(2(1+x))`.
///
/// The k-sum is cut once `2^{-k}/x` drops below the working precision, and the remainder
/// `≈ 2^{-k_cut}/x` is added. The integral over `(0, x_min)` is below `x_min²·lg(1/x_min)`
/// and is dropped.
pub fn compute_e_inf(f: &GridFunction) -> BigReal {
    let prec = f.grid.prec();
    let integral = trapezoid(f, |_, z, v| {
        let y = z.clone() * z;
        let x = (-y.clone()).exp();
        let lg_inv_x = y.to_f64() / std::f64::consts::LN_2;
        let k_cut = prec as i32 + lg_inv_x.ceil() as i32 + 4;
        let one = BigReal::one(prec);
        let mut s = BigReal::zero(prec);
        for k in 2..=k_cut {
            let p = one.mul_pow2(k);
            let num = one.clone() - &one.mul_pow2(-k);
            let den = one.clone() + &((p - &one) * &x);
            s += &(num / &den);
        }
        s += &(one.mul_pow2(-k_cut) / &x);
        s -= &(one.clone() / &(one.clone() + &x).mul_pow2(1));
        let big_f = one - v;
        s * &big_f * &(z.mul_pow2(1) * &x)
    });
    BigReal::ln2(prec) + &integral
}

/// `dF̃/dz` at `z`, in double precision.
pub fn d_ftilde_dz(f: &GridFunction, z: f64) -> f64 {
    let zb = BigReal::with_f64(f.grid.prec(), z);
    f.eval_z_derivatives(&zb)[1].to_f64()
}

/// `b = 2 − ∫₀¹ lg(1−x) f(x) dx` with the density `f = −dF̃/dx` obtained by differentiating
/// the interpolant. In z this is `2 − ∫₀^{z_max} lg(1 − e^{-z²}) ψ'(z) dz`, whose logarithmic
/// endpoint singularity is handled by double-exponential quadrature in double precision.
pub fn b_from_density(f: &GridFunction) -> f64 {
    let z_max = f.grid.z_max.to_f64();
    let integrand = |z: f64| {
        let y = z * z;
        let lg = if y < 0.5 { (-(-y).exp_m1()).ln() } else { (-(-y).exp()).ln_1p() } / std::f64::consts::LN_2;
        lg * d_ftilde_dz(f, z)
    };
    let out = quadrature::integrate(integrand, 0.0, z_max, 1e-15);
    2.0 - out.integral
}
