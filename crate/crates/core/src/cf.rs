//! Binary continued fractions `u/v = 1/a₁ + 2^{k₁}/a₂ + … + 2^{k_{r-1}}/(a_r + 2^{k_r})`.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gcd::run_algorithm_v;
use crate::natural::Natural;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CfTerm {
    pub a: Natural,
    pub k: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BinaryCf {
    pub terms: Vec<CfTerm>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CfStats {
    pub depth: u64,
    pub ones_total: u64,
    pub shifts_total: u64,
}

impl CfTerm {
    pub fn new(a: impl Into<Natural>, k: u64) -> Self {
        CfTerm { a: a.into(), k }
    }

    fn validate(&self) -> Result<()> {
        let ok = self.k >= 1 && self.a.is_odd() && self.a.bits() <= self.k;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidTerm { a: self.a.to_string(), k: self.k })
        }
    }
}

impl BinaryCf {
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Self {
        BinaryCf { terms: pairs.iter().map(|&(a, k)| CfTerm::new(a, k)).collect() }
    }

    pub fn validate(&self) -> Result<()> {
        self.terms.iter().try_for_each(CfTerm::validate)
    }
}

/// Expansion of the reduced odd fraction `u/v`, `u ≤ v`, read off Algorithm V.
///
/// An inner loop with shifts `b₁…b_m` yields `a = 1 + 2^{b₁} + … + 2^{b₁+…+b_{m-1}}`
/// and `k = b₁ + … + b_m`.
pub fn expand(u: &Natural, v: &Natural) -> Result<BinaryCf> {
    if u.is_zero() || v.is_zero() {
        return Err(Error::ZeroInput);
    }
    if u.is_even() || v.is_even() {
        return Err(Error::EvenInput);
    }
    if u > v {
        return Err(Error::Order);
    }
    let g = u.gcd(v);
    if !g.is_one() {
        return Err(Error::NotCoprime(g.to_string()));
    }
    let (_, _, passes) = run_algorithm_v(u, v)?;
    let terms = passes
        .into_iter()
        .map(|shifts| {
            let mut a = BigUint::zero();
            let mut k = 0u64;
            for b in shifts {
                a.set_bit(k, true);
                k += b;
            }
            CfTerm { a, k }
        })
        .collect();
    Ok(BinaryCf { terms })
}

/// Folds the expansion back into the reduced fraction `(u, v)`.
pub fn evaluate(cf: &BinaryCf) -> Result<(Natural, Natural)> {
    cf.validate()?;
    // x = p/q, starting from the innermost value 1.
    let mut p = BigUint::one();
    let mut q = BigUint::one();
    for term in cf.terms.iter().rev() {
        // x ← 1/(a + 2^k x) = q / (a q + 2^k p)
        let denom = &term.a * &q + (&p << term.k);
        p = q;
        q = denom;
    }
    let g = p.gcd(&q);
    Ok((p / &g, q / g))
}

pub fn stats(cf: &BinaryCf) -> CfStats {
    CfStats {
        depth: cf.terms.len() as u64,
        ones_total: cf.terms.iter().map(|t| t.a.count_ones()).sum(),
        shifts_total: cf.terms.iter().map(|t| t.k).sum(),
    }
}

fn render_denominator(a: &Natural, tail: Option<u64>) -> String {
    match tail {
        None => a.to_string(),
        Some(k) => format!("({}+{})", a, BigUint::one() << k),
    }
}

impl fmt::Display for BinaryCf {
    /// Linear notation, e.g. `1/1 + 2/1 + 4/(1+2)`; the empty expansion prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "1");
        }
        let r = self.terms.len();
        let mut numerator = BigUint::one();
        for (i, term) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let tail = (i + 1 == r).then_some(term.k);
            write!(f, "{}/{}", numerator, render_denominator(&term.a, tail))?;
            numerator = BigUint::one() << term.k;
        }
        Ok(())
    }
}
