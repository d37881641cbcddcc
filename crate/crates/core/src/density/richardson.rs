use serde::Serialize;

use crate::error::{Error, Result};
use crate::real::{BigReal, Real};

/// Raw estimates at stepsizes `h, 2h, 4h, …` (finest first) and the triangular array of
/// extrapolants. `columns[j][i]` combines raw entries `i..=i+j`.
#[derive(Clone, Debug)]
pub struct RichardsonTable {
    /// Each elimination removes the next term of the series in `h^power_step`.
    pub power_step: u32,
    pub steps: Vec<BigReal>,
    pub columns: Vec<Vec<BigReal>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RichardsonSummary {
    pub power_step: u32,
    pub steps: Vec<f64>,
    pub columns: Vec<Vec<String>>,
}

impl RichardsonTable {
    pub fn new(power_step: u32, estimates: Vec<(BigReal, BigReal)>) -> Result<Self> {
        if estimates.is_empty() {
            return Err(Error::Config("Richardson table needs at least one estimate".into()));
        }
        for w in estimates.windows(2) {
            if w[1].0 != w[0].0.mul_pow2(1) {
                return Err(Error::NotNested(format!(
                    "stepsizes {} and {} are not in ratio 2",
                    w[0].0.to_f64(),
                    w[1].0.to_f64()
                )));
            }
        }
        let (steps, raw): (Vec<_>, Vec<_>) = estimates.into_iter().unzip();
        let mut columns = vec![raw];
        for j in 1..steps.len() {
            let prev = &columns[j - 1];
            let factor = prev[0].lit(2f64.powi((power_step as usize * j) as i32));
            let denom = factor.clone() - &factor.lit(1.0);
            let next = (0..prev.len() - 1)
                .map(|i| (factor.clone() * &prev[i] - &prev[i + 1]) / &denom)
                .collect();
            columns.push(next);
        }
        Ok(RichardsonTable { power_step, steps, columns })
    }

    /// The most extrapolated value.
    pub fn best(&self) -> &BigReal {
        &self.columns.last().expect("nonempty")[0]
    }

    pub fn summary(&self, digits: usize) -> RichardsonSummary {
        RichardsonSummary {
            power_step: self.power_step,
            steps: self.steps.iter().map(Real::to_f64).collect(),
            columns: self.columns.iter().map(|c| c.iter().map(|v| v.to_digits(digits)).collect()).collect(),
        }
    }
}

/// Builds the table for `estimates` (finest stepsize first) and returns the final extrapolant.
pub fn richardson(estimates: Vec<(BigReal, BigReal)>, power_step: u32) -> Result<BigReal> {
    Ok(RichardsonTable::new(power_step, estimates)?.best().clone())
}
