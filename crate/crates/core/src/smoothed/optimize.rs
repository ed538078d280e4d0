use std::f64::consts::E;

use rand::Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::rng::stream;

use super::simplex::{nelder_mead, NelderMeadOptions};
use super::{eval_curve_ratio, BudgetDistribution, PiecewiseCurve, SmoothedResult};

const THETA_CLAMP: f64 = 40.0;

#[derive(Debug, Clone, Copy)]
pub struct OptimizeOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Number of linear pieces; defaults to the number of budgets.
    pub segments: Option<usize>,
    pub simplex: NelderMeadOptions,
    /// Extra simplex restarts from each local optimum.
    pub polish_rounds: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            restarts: 64,
            seed: 42,
            segments: None,
            simplex: NelderMeadOptions {
                max_evals: 4_000,
                f_tol: 1e-13,
                x_tol: 1e-8,
                step: 1.0,
            },
            polish_rounds: 3,
        }
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Unconstrained `θ ∈ R^{2m−1}` to a valid curve: stick-breaking breakpoints
/// and `a_1 = 1` plus positive slope increments (the ratio is scale-free in `a`).
pub(crate) fn decode(theta: &[f64], m: usize) -> Result<PiecewiseCurve> {
    let t = |k: usize| theta[k].clamp(-THETA_CLAMP, THETA_CLAMP);
    let mut breakpoints = Vec::with_capacity(m);
    let mut f = sigmoid(t(0));
    breakpoints.push(f);
    for k in 1..m {
        f += (1.0 - f) * sigmoid(t(k));
        breakpoints.push(f.min(1.0));
    }
    let mut slopes = Vec::with_capacity(m);
    let mut a = 1.0;
    slopes.push(a);
    for k in 1..m {
        a += t(m - 1 + k).exp();
        slopes.push(a);
    }
    PiecewiseCurve::new(breakpoints, slopes)
}

fn objective(theta: &[f64], m: usize, dist: &BudgetDistribution) -> f64 {
    decode(theta, m)
        .and_then(|c| eval_curve_ratio(&c, dist))
        .map_or(f64::INFINITY, |r| r.ratio)
}

/// The single-budget worst curve `b/a = 1/e`, padded with equal-slope pieces.
fn fallback_curve(m: usize) -> PiecewiseCurve {
    let f1 = 1.0 / E;
    let breakpoints = (0..m)
        .map(|k| f1 + (1.0 - f1) * k as f64 / m as f64)
        .collect();
    PiecewiseCurve::new(breakpoints, vec![1.0; m]).expect("valid fallback curve")
}

pub fn optimize_worst_curve(
    dist: &BudgetDistribution,
    restarts: usize,
    seed: u64,
) -> Result<SmoothedResult> {
    optimize_worst_curve_with(
        dist,
        &OptimizeOptions {
            restarts,
            seed,
            ..Default::default()
        },
    )
}

/// Multi-start simplex search for the curve minimising the smoothed ratio.
///
/// The result is an upper bound on the true minimum. Restarts run in parallel
/// with independent RNG streams; the best is chosen by (value, restart index).
pub fn optimize_worst_curve_with(
    dist: &BudgetDistribution,
    opts: &OptimizeOptions,
) -> Result<SmoothedResult> {
    let m = opts.segments.unwrap_or(dist.len()).max(1);
    let dim = 2 * m - 1;
    let restarts = opts.restarts.max(1);

    let runs: Vec<(f64, Vec<f64>)> = (0..restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream(opts.seed, "smoothed-restart", k as u64);
            let mut x: Vec<f64> = (0..dim).map(|_| rng.random_range(-3.0..3.0)).collect();
            let mut value = objective(&x, m, dist);
            let mut step = opts.simplex.step;
            for _ in 0..=opts.polish_rounds {
                let nm = NelderMeadOptions {
                    step,
                    ..opts.simplex
                };
                let r = nelder_mead(|th| objective(th, m, dist), &x, &nm);
                let improved = value - r.value;
                if r.value <= value {
                    x = r.x;
                    value = r.value;
                }
                if improved.abs() < 1e-12 && r.converged {
                    break;
                }
                step *= 0.5;
            }
            (value, x)
        })
        .collect();

    let best = runs
        .iter()
        .enumerate()
        .filter(|(_, r)| r.0.is_finite())
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then(a.0.cmp(&b.0)));

    let fallback = eval_curve_ratio(&fallback_curve(m), dist)?;
    match best {
        Some((_, (value, x))) if *value <= fallback.ratio => eval_curve_ratio(&decode(x, m)?, dist),
        _ => Ok(fallback),
    }
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub rho: f64,
    pub result: SmoothedResult,
}

/// Optimal two-budget ratio for budgets `ρB` and `B`, for each `ρ`.
pub fn two_budget_sweep(rhos: &[f64], opts: &OptimizeOptions) -> Result<Vec<SweepPoint>> {
    rhos.iter()
        .map(|&rho| {
            let dist = BudgetDistribution::two_budget(rho)?;
            Ok(SweepPoint {
                rho,
                result: optimize_worst_curve_with(&dist, opts)?,
            })
        })
        .collect()
}
