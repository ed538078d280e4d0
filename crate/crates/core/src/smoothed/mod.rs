//! Budget-smoothed competitive ratio program.
//!
//! For a budget drawn as `ρ_k·B` with probability `p_k`, the adversary picks
//! a worst-case Bayesian market given by a [`PiecewiseCurve`]; the best
//! truthful mechanism is a cutoff buying fraction `f_k` (where `cF(c) = ρ_kB`)
//! against the non-IC fraction `g_k` (where `∫_0^F x dF = ρ_kB`). The
//! objective is `Σ p_k·f_k/g_k`.

mod curve;
mod distribution;
mod lambert;
mod optimize;
mod simplex;

pub use curve::PiecewiseCurve;
pub use distribution::BudgetDistribution;
pub use lambert::{lambert_w_minus1, lambert_w_minus1_log};
pub use optimize::{
    optimize_worst_curve, optimize_worst_curve_with, two_budget_sweep, OptimizeOptions, SweepPoint,
};
pub use simplex::{nelder_mead, NelderMeadOptions, NelderMeadResult};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetEval {
    pub rho: f64,
    pub prob: f64,
    /// `ρ_k·B`.
    pub budget: f64,
    /// Cutoff cost `c` with `c·F(c) = ρ_k·B`.
    pub cutoff: f64,
    pub f: f64,
    pub g: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedResult {
    pub ratio: f64,
    pub curve: PiecewiseCurve,
    pub per_budget: Vec<BudgetEval>,
}

/// Lowest non-degenerate piece `i` with `bounds[i] ≤ v ≤ bounds[i+1]`.
fn locate(curve: &PiecewiseCurve, bounds: &[f64], v: f64) -> usize {
    let mut last = 0;
    for i in 0..curve.segments() {
        if curve.is_degenerate(i) {
            continue;
        }
        last = i;
        if v <= bounds[i + 1] {
            return i;
        }
    }
    last
}

/// `f_k/g_k` of the best cutoff against the non-IC optimum at `ρ·B`.
pub fn eval_budget(curve: &PiecewiseCurve, rho: f64, prob: f64) -> Result<BudgetEval> {
    let total = curve.total_cost();
    let budget = rho * total;
    if !(total > 0.0) {
        return Ok(BudgetEval {
            rho,
            prob,
            budget,
            cutoff: 0.0,
            f: 1.0,
            g: 1.0,
            ratio: 1.0,
        });
    }

    let g = if rho >= 1.0 {
        1.0
    } else {
        let i = locate(curve, curve.cumulative_cost(), budget);
        let (a, b) = (curve.slopes()[i], curve.intercepts()[i]);
        let h = budget + b + curve.log_sum(i) - b * curve.breakpoints()[i].ln();
        let w = lambert_w_minus1_log(((a / b).ln() - h / b).min(-1.0))?;
        (-(b / a) * w).clamp(curve.breakpoints()[i], curve.upper(i))
    };

    let j = locate(curve, curve.heights(), budget);
    let (a, b) = (curve.slopes()[j], curve.intercepts()[j]);
    let f = ((budget + b) / a).min(g);
    let cutoff = a - b / f;
    if !(f > 0.0 && g > 0.0) {
        return Err(Error::InvalidCurve(format!(
            "non-positive fractions f = {f}, g = {g}"
        )));
    }
    Ok(BudgetEval {
        rho,
        prob,
        budget,
        cutoff,
        f,
        g,
        ratio: f / g,
    })
}

pub fn eval_curve_ratio(
    curve: &PiecewiseCurve,
    dist: &BudgetDistribution,
) -> Result<SmoothedResult> {
    let per_budget = dist
        .points()
        .iter()
        .map(|&(rho, prob)| eval_budget(curve, rho, prob))
        .collect::<Result<Vec<_>>>()?;
    let ratio = per_budget.iter().map(|e| e.prob * e.ratio).sum();
    Ok(SmoothedResult {
        ratio,
        curve: curve.clone(),
        per_budget,
    })
}
