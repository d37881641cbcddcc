//! Algorithm B, Algorithm V and the extended binary GCD, with instrumentation.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::natural::{val2, Natural};

/// How much of the run to record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceDetail {
    /// Counters only.
    Counters,
    /// Counters plus the ratio `min(u,v)/max(u,v)` after every subtract-shift step,
    /// and the individual shift amounts.
    Full,
}

/// Counters collected during one GCD run.
///
/// `shift_events` counts shift-until-odd operations (one per B2 step) and
/// `shift_total` counts single-bit shifts.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct GcdTrace {
    pub b3_count: u64,
    pub shift_total: u64,
    pub shift_events: u64,
    pub outer_exchanges: u64,
    /// Shift amount of each subtract-shift event in execution order (only with [`TraceDetail::Full`]).
    #[serde(skip)]
    pub shifts: Vec<u64>,
    /// `(n, x_n)`; `n = 0` is the odd-reduced input pair (only with [`TraceDetail::Full`]).
    #[serde(skip)]
    pub ratio_snapshots: Vec<(usize, BigRational)>,
}

impl GcdTrace {
    fn record(&mut self, detail: TraceDetail, step: usize, u: &BigUint, v: &BigUint) {
        if detail == TraceDetail::Full {
            let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
            self.ratio_snapshots.push((
                step,
                BigRational::new_raw(BigInt::from(lo.clone()), BigInt::from(hi.clone())),
            ));
        }
    }
}

/// Binary GCD (Algorithm B) with full tracing.
///
/// Even inputs are reduced with `GCD(u,v) = 2^min(Val₂u, Val₂v) · GCD(odd parts)`;
/// the trace describes the odd phase only.
pub fn gcd_binary(u: &Natural, v: &Natural) -> Result<(Natural, GcdTrace)> {
    gcd_binary_with(u, v, TraceDetail::Full)
}

pub fn gcd_binary_with(u: &Natural, v: &Natural, detail: TraceDetail) -> Result<(Natural, GcdTrace)> {
    let ju = val2(u)?;
    let jv = val2(v)?;
    let mut u = u >> ju;
    let mut v = v >> jv;
    let mut trace = GcdTrace::default();
    trace.record(detail, 0, &u, &v);
    loop {
        // B1
        let mut t = if u >= v { &u - &v } else { &v - &u };
        if t.is_zero() {
            break;
        }
        // B2
        let j = t.trailing_zeros().unwrap_or(0);
        t >>= j;
        trace.shift_total += j;
        trace.shift_events += 1;
        if detail == TraceDetail::Full {
            trace.shifts.push(j);
        }
        // B3
        if u >= v {
            u = t;
        } else {
            v = t;
        }
        trace.b3_count += 1;
        trace.record(detail, trace.b3_count as usize, &u, &v);
    }
    Ok((u << ju.min(jv), trace))
}

/// Algorithm V for odd `u ≤ v`. Each pass of the outer loop ends with an exchange.
pub fn gcd_algorithm_v(u: &Natural, v: &Natural) -> Result<(Natural, GcdTrace)> {
    let (g, trace, _) = run_algorithm_v(u, v)?;
    Ok((g, trace))
}

/// Runs Algorithm V and also returns the shift sequence `b₁…b_m` of every inner loop.
pub(crate) fn run_algorithm_v(u: &Natural, v: &Natural) -> Result<(Natural, GcdTrace, Vec<Vec<u64>>)> {
    if u.is_zero() || v.is_zero() {
        return Err(Error::ZeroInput);
    }
    if u.is_even() || v.is_even() {
        return Err(Error::EvenInput);
    }
    if u > v {
        return Err(Error::Order);
    }
    let mut u = u.clone();
    let mut v = v.clone();
    let mut trace = GcdTrace::default();
    let mut passes = Vec::new();
    trace.record(TraceDetail::Full, 0, &u, &v);
    while u != v {
        let mut pass = Vec::new();
        while u < v {
            let mut t = &v - &u;
            let j = t.trailing_zeros().unwrap_or(0);
            t >>= j;
            v = t;
            trace.b3_count += 1;
            trace.shift_total += j;
            trace.shift_events += 1;
            trace.shifts.push(j);
            trace.record(TraceDetail::Full, trace.b3_count as usize, &u, &v);
            pass.push(j);
        }
        std::mem::swap(&mut u, &mut v);
        trace.outer_exchanges += 1;
        passes.push(pass);
    }
    Ok((u, trace, passes))
}

/// Extended binary GCD: returns `(g, α, β)` with `αu + βv = g`, normalized so that
/// `0 ≤ α < v/g` (hence `|β| ≤ u/g`).
pub fn gcd_extended(u: &Natural, v: &Natural) -> Result<(Natural, BigInt, BigInt)> {
    if u.is_zero() || v.is_zero() {
        return Err(Error::ZeroInput);
    }
    let shift = val2(u)?.min(val2(v)?);
    let x = BigInt::from(u >> shift);
    let y = BigInt::from(v >> shift);

    let (mut a, mut b, mut c, mut d) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    let mut p = x.clone();
    let mut q = y.clone();
    // Invariants: a·x + b·y = p, c·x + d·y = q.
    loop {
        while p.is_even() {
            p >>= 1;
            if a.is_even() && b.is_even() {
                a >>= 1;
                b >>= 1;
            } else {
                a = (a + &y) >> 1;
                b = (b - &x) >> 1;
            }
        }
        while q.is_even() {
            q >>= 1;
            if c.is_even() && d.is_even() {
                c >>= 1;
                d >>= 1;
            } else {
                c = (c + &y) >> 1;
                d = (d - &x) >> 1;
            }
        }
        if p >= q {
            p -= &q;
            a -= &c;
            b -= &d;
        } else {
            q -= &p;
            c -= &a;
            d -= &b;
        }
        if p.is_zero() {
            break;
        }
    }
    let g_odd = q;
    let g = BigInt::from(g_odd.magnitude().clone() << shift);
    let ug = BigInt::from(u.clone()) / &g;
    let vg = BigInt::from(v.clone()) / &g;
    let alpha = c.mod_floor(&vg);
    let beta = (&g - &alpha * BigInt::from(u.clone())) / BigInt::from(v.clone());
    debug_assert!(beta.abs() <= ug);
    let (sign, mag) = g.into_parts();
    debug_assert_eq!(sign, Sign::Plus);
    Ok((mag, alpha, beta))
}

/// Classical Euclid by repeated remainder; used as an oracle.
pub fn gcd_euclid(u: &Natural, v: &Natural) -> Natural {
    let (mut a, mut b) = (u.clone(), v.clone());
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}
