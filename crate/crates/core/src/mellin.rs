//! `D₁(x) = Σ_{k≥1} 2^{-k}/(1+2^k x)` by direct summation and by its Mellin expansion
//!
//! `D₁(x) = 1 + x lg x + x/2 + x P(lg x) + Σ_{m≥2} c_m x^m`,
//!
//! where `P(t) = (2π/ln 2) Σ_n sin(2nπt)/sinh(2nπ²/ln 2)` collects the residues at
//! `s = −1 ± 2πin/ln 2` and `c_m = (−1)^m/(2^{1−m} − 1)` is the residue at `s = −m`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{BigReal, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionTerms {
    pub include_p: bool,
    /// Number of power terms `c_m x^m`, starting at `m = 2`.
    pub power_terms: usize,
}

impl ExpansionTerms {
    pub fn new(include_p: bool, power_terms: usize) -> Result<Self> {
        if power_terms == 0 {
            return Err(Error::Config("power_terms must be at least 1".into()));
        }
        Ok(ExpansionTerms { include_p, power_terms })
    }
}

fn positive(x: &BigReal) -> Result<()> {
    if *x <= x.lit(0.0) {
        return Err(Error::Domain("D1 needs x > 0".into()));
    }
    Ok(())
}

/// Number of terms after which `Σ_{k>K} 2^{-k} < tol`.
fn term_count(tol: &BigReal) -> Result<i32> {
    if *tol <= tol.lit(0.0) {
        return Err(Error::Config("tolerance must be positive".into()));
    }
    let bits = -tol.log2().to_f64();
    Ok(bits.ceil().max(1.0) as i32)
}

/// Forward summation of `D₁(x)`, truncated where the remaining terms are below `tol`.
pub fn d1_direct(x: &BigReal, tol: &BigReal) -> Result<BigReal> {
    positive(x)?;
    let one = BigReal::one(x.prec());
    let mut sum = BigReal::zero(x.prec());
    for k in 1..=term_count(tol)? {
        sum += &(one.mul_pow2(-k) / &(x.mul_pow2(k) + &one));
    }
    Ok(sum)
}

/// Compensated (Kahan) summation of the same terms, smallest first.
pub fn d1_direct_compensated(x: &BigReal, tol: &BigReal) -> Result<BigReal> {
    positive(x)?;
    let prec = x.prec();
    let one = BigReal::one(prec);
    let mut sum = BigReal::zero(prec);
    let mut carry = BigReal::zero(prec);
    for k in (1..=term_count(tol)?).rev() {
        let term = one.mul_pow2(-k) / &(x.mul_pow2(k) + &one);
        let y = term - &carry;
        let t = sum.clone() + &y;
        carry = (t.clone() - &sum) - &y;
        sum = t;
    }
    Ok(sum)
}

/// `F₁(x) = 1 + D₁(1/x) − D₁(x)`.
pub fn f1_from_d1(x: &BigReal, tol: &BigReal) -> Result<BigReal> {
    let one = BigReal::one(x.prec());
    Ok(one.clone() + &d1_direct(&(one / x), tol)? - &d1_direct(x, tol)?)
}

/// `c_m = (−1)^m/(2^{1−m} − 1)`.
pub fn power_coefficient(m: u32, prec: u32) -> BigReal {
    let one = BigReal::one(prec);
    let c = one.clone() / &(one.mul_pow2(1 - m as i32) - &one);
    if m % 2 == 0 {
        c
    } else {
        -c
    }
}

/// `P(t)`, summed until `sinh(2nπ²/ln 2)` exceeds `2^prec`.
pub fn periodic_p(t: &BigReal) -> BigReal {
    let prec = t.prec();
    let pi = BigReal::pi(prec);
    let ln2 = BigReal::ln2(prec);
    let step = (pi.clone() * &pi).mul_pow2(1) / &ln2;
    let mut sum = BigReal::zero(prec);
    let mut n = 1;
    loop {
        let arg = step.clone() * &BigReal::from_int(prec, n);
        if arg.to_f64() > prec as f64 * std::f64::consts::LN_2 + 8.0 {
            break;
        }
        let angle = (pi.clone() * t).mul_pow2(1) * &BigReal::from_int(prec, n);
        sum += &(angle.sin() / &arg.sinh());
        n += 1;
    }
    sum * &pi.mul_pow2(1) / &ln2
}

/// The expansion of `D₁(x)` for `0 < x < 1/2`.
pub fn d1_expansion(x: &BigReal, terms: ExpansionTerms) -> Result<BigReal> {
    positive(x)?;
    if *x >= x.lit(0.5) {
        return Err(Error::Domain("the expansion of D1 is used only for 0 < x < 1/2".into()));
    }
    if terms.power_terms == 0 {
        return Err(Error::Config("power_terms must be at least 1".into()));
    }
    let prec = x.prec();
    let lg = x.log2();
    let mut sum = BigReal::one(prec) + &(x.clone() * &lg) + &x.mul_pow2(-1);
    if terms.include_p {
        sum += &(x.clone() * &periodic_p(&lg));
    }
    let mut power = x.clone();
    for m in 2..terms.power_terms as u32 + 2 {
        power = power * x;
        sum += &(power_coefficient(m, prec) * &power);
    }
    Ok(sum)
}

#[derive(Debug, Clone, Serialize)]
pub struct PMax {
    pub t: f64,
    pub value: String,
    pub value_f64: f64,
}

/// `max |P(t)|` over `resolution` equispaced samples of `[0, 1)`, refined by golden-section
/// search around the best sample.
pub fn p_max(resolution: usize, prec: u32) -> Result<PMax> {
    if resolution < 1024 {
        return Err(Error::Config("P_max needs at least 1024 sample points".into()));
    }
    let abs_p = |t: f64| periodic_p(&BigReal::with_f64(prec, t)).abs();
    let step = 1.0 / resolution as f64;
    let best = (0..resolution)
        .map(|i| (i as f64 * step, abs_p(i as f64 * step)))
        .max_by(|a, b| a.1.partial_cmp(&b.1).expect("P is finite"))
        .expect("resolution is positive");
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (best.0 - step, best.0 + step);
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (abs_p(c), abs_p(d));
    for _ in 0..80 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = abs_p(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = abs_p(d);
        }
    }
    let (t, value) = if fc > fd { (c, fc) } else { (d, fd) };
    let (t, value) = if value > best.1 { (t, value) } else { best };
    Ok(PMax { t: t.rem_euclid(1.0), value_f64: value.to_f64(), value: value.to_digits(25) })
}

#[derive(Debug, Clone, Serialize)]
pub struct MellinRow {
    pub x: f64,
    pub direct: BigReal,
    pub with_p: BigReal,
    pub without_p: BigReal,
}

impl MellinRow {
    /// `direct − without_p`, the part of `D₁` that the expansion without `P` misses.
    pub fn discrepancy(&self) -> BigReal {
        self.direct.clone() - &self.without_p
    }
}

/// Direct sum and both expansions at each `x`.
pub fn mellin_table(xs: &[f64], power_terms: usize, prec: u32) -> Result<Vec<MellinRow>> {
    let tol = BigReal::one(prec).mul_pow2(-(prec as i32) - 4);
    xs.iter()
        .map(|&x| {
            let xb = BigReal::with_f64(prec, x);
            Ok(MellinRow {
                x,
                direct: d1_direct(&xb, &tol)?,
                with_p: d1_expansion(&xb, ExpansionTerms::new(true, power_terms)?)?,
                without_p: d1_expansion(&xb, ExpansionTerms::new(false, power_terms)?)?,
            })
        })
        .collect()
}

/// `x = 2^{-t}` for `t` evenly spaced in `[lg_min, lg_max]`.
pub fn log_spaced(lg_min: f64, lg_max: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| {
            let t = if count == 1 { lg_min } else { lg_min + (lg_max - lg_min) * i as f64 / (count - 1) as f64 };
            2f64.powf(-t)
        })
        .collect()
}

pub fn write_mellin_csv<W: Write>(rows: &[MellinRow], mut out: W) -> Result<()> {
    writeln!(out, "x,direct,expansion_with_P,expansion_without_P,discrepancy")?;
    for row in rows {
        writeln!(
            out,
            "{:e},{},{},{},{}",
            row.x,
            row.direct.to_digits(30),
            row.with_p.to_digits(30),
            row.without_p.to_digits(30),
            row.discrepancy().to_digits(12)
        )?;
    }
    Ok(())
}
