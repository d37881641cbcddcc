//! Precomputed argument locations for one application of the F̃ recurrence.
//!
//! For node `x = e^{-y}` the recurrence needs F̃ at
//! `A_k = x/(x+2^k)` with `-ln A_k = y + k ln 2 + ln(1 + x 2^{-k})` and at
//! `B_k = 1/(1+2^k x)` with `-ln B_k = ln(1 + 2^k x)`. Their grid positions do not
//! change between iterations, so they are located once.

use rayon::prelude::*;
use rug::Float;

use super::grid::Grid;
use super::interp::{DiffTable, Location, Stencil};
use crate::real::{BigReal, Real};

struct Term {
    base: i32,
    k: u16,
    negative: bool,
    t: Float,
}

struct NodePlan {
    /// Sum of `±2^{-k}` over arguments beyond `z_max`, where F̃ = 1.
    tail: Float,
    /// Arguments landing exactly on a node: `(index, k, negative)`.
    nodes: Vec<(u32, u16, bool)>,
    terms: Vec<Term>,
}

pub struct IterationPlan {
    stencil: Stencil,
    prec: u32,
    nodes: Vec<NodePlan>,
    k_max: u32,
}

impl IterationPlan {
    /// `k_max` bounds the k-sum; the neglected part is below `2^{-k_max}`.
    pub fn build(grid: &Grid, r: usize) -> Self {
        let prec = grid.prec();
        let n = grid.intervals();
        let stencil = Stencil::new(r, n);
        let k_max = prec + 2;
        let z_max_f = grid.z_max.to_f64();
        let y_max = z_max_f * z_max_f;
        let inv_h = BigReal::one(prec) / &grid.h;
        let ln2 = BigReal::ln2(prec);

        let nodes = (0..=n)
            .into_par_iter()
            .map(|i| {
                let mut plan = NodePlan { tail: Float::new(prec), nodes: Vec::new(), terms: Vec::new() };
                if i == 0 {
                    // Both arguments coincide at x = 1.
                    return plan;
                }
                let z = grid.z(i);
                let y = z.clone() * &z;
                let x = (-y.clone()).exp();
                let y_f = y.to_f64();
                let x_f = (-y_f).exp();
                for k in 1..=k_max {
                    let kf = k as f64;
                    let ya_f = y_f + kf * std::f64::consts::LN_2;
                    let yb_f = (x_f * 2f64.powi(k as i32)).ln_1p();
                    let a_far = ya_f > y_max + 1.0;
                    let b_far = yb_f > y_max + 1.0;
                    if a_far && b_far {
                        // Both arguments are in the tail: contributions cancel.
                        continue;
                    }
                    for negative in [false, true] {
                        let far = if negative { b_far } else { a_far };
                        let neg_log = if far {
                            None
                        } else if negative {
                            Some(x.mul_pow2(k as i32).ln_1p())
                        } else {
                            let ratio = x.mul_pow2(-(k as i32));
                            Some(y.clone() + &(ln2.clone() * &BigReal::from_int(prec, k as i64)) + &ratio.ln_1p())
                        };
                        let loc = match neg_log {
                            None => Location::Tail,
                            Some(v) => stencil.locate(&(v.sqrt() * &inv_h)),
                        };
                        match loc {
                            Location::Tail => {
                                let w = Float::with_val(prec, 1) >> k;
                                if negative {
                                    plan.tail -= w;
                                } else {
                                    plan.tail += w;
                                }
                            }
                            Location::Node(j) => plan.nodes.push((j as u32, k as u16, negative)),
                            Location::Inside { base, t } => plan.terms.push(Term {
                                base: base as i32,
                                k: k as u16,
                                negative,
                                t: t.0,
                            }),
                        }
                    }
                }
                plan
            })
            .collect();
        IterationPlan { stencil, prec, nodes, k_max }
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn term_count(&self) -> usize {
        self.nodes.iter().map(|p| p.terms.len() + p.nodes.len()).sum()
    }

    /// One application of the recurrence.
    pub fn apply(&self, values: &[BigReal]) -> Vec<BigReal> {
        let table = DiffTable::build(&self.stencil, values);
        let prec = self.prec;
        self.nodes
            .par_iter()
            .map_init(
                || (Float::new(prec), Float::new(prec)),
                |(val, scratch), plan| {
                    let mut acc = plan.tail.clone();
                    for &(j, k, negative) in &plan.nodes {
                        let v = Float::with_val(prec, &values[j as usize].0 >> k as u32);
                        if negative {
                            acc -= v;
                        } else {
                            acc += v;
                        }
                    }
                    for term in &plan.terms {
                        table.eval_into(term.base as i64, &term.t, val, scratch);
                        *val >>= term.k as u32;
                        if term.negative {
                            acc -= &*val;
                        } else {
                            acc += &*val;
                        }
                    }
                    BigReal(acc)
                },
            )
            .collect()
    }
}
