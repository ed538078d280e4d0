//! The instance-optimal uniform "mechanism" with complete information.
//!
//! Sellers are merged into price levels. Level 0 is the `γ = 0` level and
//! levels `1..=n'` are the positive-cost levels in ascending `γ`. From the
//! current frontier `i`, Greedy picks the `j ≥ i` maximising the marginal
//! utility per marginal payment `e_{i,j}` and raises `f` uniformly on
//! `(γ_{i−1}, γ_j]`.
//!
//! With `U_k` the cumulative utility of levels `0..=k`, the full-step payment is
//! `q^max_{i,j} = γ_j·U_j − γ_{i−1}·U_{i−1}`, so `e_{i,j}` is the inverse slope
//! from `(U_{i−1}, γ_{i−1}U_{i−1})` to `(U_j, γ_jU_j)`. The argmax is therefore
//! the next vertex of the lower convex hull of those points, which [`greedy`]
//! uses. [`greedy_reference`] enumerates every `j` instead.

use crate::error::Result;
use crate::market::{Market, MechanismOutcome, PriceLevels, TwoStepRule};

use super::check_budget;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyStepCandidate {
    pub i: usize,
    pub j: usize,
    pub v_ij: f64,
    pub q_ij_max: f64,
    pub e_ij: f64,
}

/// Merged price levels laid out with the zero-cost level at index 0.
#[derive(Debug, Clone)]
pub struct GreedyLadder {
    pub gammas: Vec<f64>,
    /// `U_k = Σ_{0≤l≤k} u_l`.
    pub cumulative: Vec<f64>,
    levels: PriceLevels,
}

impl GreedyLadder {
    pub fn new(market: &Market) -> Self {
        let levels = market.price_levels();
        let mut gammas = vec![0.0];
        let mut cumulative = vec![levels.zero_cost_utility()];
        for level in levels.levels.iter().filter(|l| l.gamma > 0.0) {
            gammas.push(level.gamma);
            cumulative.push(cumulative.last().unwrap() + level.utility);
        }
        GreedyLadder {
            gammas,
            cumulative,
            levels,
        }
    }

    /// Number of positive-cost levels `n'`.
    pub fn positive_levels(&self) -> usize {
        self.gammas.len() - 1
    }

    /// Payment of `f = 1` on `[0, γ_k]`.
    fn full_payment(&self, k: usize) -> f64 {
        self.gammas[k] * self.cumulative[k]
    }

    pub fn candidate(&self, i: usize, j: usize) -> GreedyStepCandidate {
        debug_assert!(1 <= i && i <= j && j <= self.positive_levels());
        let below = self.cumulative[i - 1];
        let v_ij = self.cumulative[j] - below;
        let q_ij_max = (self.gammas[j] - self.gammas[i - 1]) * below + self.gammas[j] * v_ij;
        GreedyStepCandidate {
            i,
            j,
            v_ij,
            q_ij_max,
            e_ij: v_ij / q_ij_max,
        }
    }
}

/// All candidates `e_{i,j}` for `j ∈ i..=n'`.
pub fn step_candidates(ladder: &GreedyLadder, i: usize) -> Vec<GreedyStepCandidate> {
    (i..=ladder.positive_levels())
        .map(|j| ladder.candidate(i, j))
        .collect()
}

#[derive(Debug, Clone)]
pub struct GreedyRun {
    pub rule: TwoStepRule,
    pub outcome: MechanismOutcome,
    /// Steps taken, in order; the last one is partial when `exhausted`.
    pub steps: Vec<GreedyStepCandidate>,
    /// The loop stopped in the budget-exhausting branch.
    pub exhausted: bool,
}

pub fn greedy(market: &Market, budget: f64) -> Result<GreedyRun> {
    let ladder = GreedyLadder::new(market);
    let next = lower_hull_successors(&ladder);
    run_with(market, &ladder, budget, |i| next[i - 1])
}

/// Literal quadratic version: scans every `j ≥ i` for the largest `e_{i,j}`,
/// keeping the smallest `j` among ties.
pub fn greedy_reference(market: &Market, budget: f64) -> Result<GreedyRun> {
    let ladder = GreedyLadder::new(market);
    let choose = |i: usize| {
        let mut best = ladder.candidate(i, i);
        for c in step_candidates(&ladder, i).into_iter().skip(1) {
            if c.e_ij > best.e_ij {
                best = c;
            }
        }
        best.j
    };
    run_with(market, &ladder, budget, choose)
}

/// For each ladder vertex `k`, the next lower-hull vertex after it.
/// Collinear points are kept so the smallest maximiser wins ties.
fn lower_hull_successors(ladder: &GreedyLadder) -> Vec<usize> {
    let n = ladder.positive_levels();
    let point = |k: usize| (ladder.cumulative[k], ladder.full_payment(k));
    let mut hull: Vec<usize> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let (bx, by) = point(k);
        while hull.len() >= 2 {
            let (ox, oy) = point(hull[hull.len() - 2]);
            let (ax, ay) = point(hull[hull.len() - 1]);
            let cross = (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
            if cross < 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    // Greedy only ever stands on hull vertices, so successors of others are unused.
    let mut next = vec![n; n + 1];
    for w in hull.windows(2) {
        next[w[0]] = w[1];
    }
    next
}

fn run_with(
    market: &Market,
    ladder: &GreedyLadder,
    budget: f64,
    mut choose: impl FnMut(usize) -> usize,
) -> Result<GreedyRun> {
    let budget = check_budget(budget)?;
    let n = ladder.positive_levels();
    let mut steps = Vec::new();
    let mut partial: Option<(usize, usize, f64)> = None;
    let mut i = 1;
    while i <= n {
        let j = choose(i);
        let cand = ladder.candidate(i, j);
        // Full steps so far spent exactly γ_{i−1}·U_{i−1}.
        let remaining = (budget - ladder.full_payment(i - 1)).max(0.0);
        steps.push(cand);
        if remaining > cand.q_ij_max {
            i = j + 1;
        } else {
            partial = Some((i - 1, j, remaining / cand.q_ij_max));
            break;
        }
    }

    let (mut rule, exhausted) = match partial {
        Some((lo, hi, t)) => (step_rule(ladder, lo, hi, t)?, true),
        None => (TwoStepRule::cutoff(ladder.gammas[n])?, false),
    };
    let mut outcome = apply_rule(market, &ladder.levels, &rule);

    // Rounding in the per-seller sum may overshoot the budget by a few ulps.
    if let Some((lo, hi, t0)) = partial {
        let mut t = t0.min(1.0);
        let mut guard = 0;
        while outcome.total_payment > budget && t > 0.0 && guard < 64 {
            t = t.next_down();
            rule = step_rule(ladder, lo, hi, t)?;
            outcome = apply_rule(market, &ladder.levels, &rule);
            guard += 1;
        }
    }

    Ok(GreedyRun {
        rule,
        outcome,
        steps,
        exhausted,
    })
}

fn step_rule(ladder: &GreedyLadder, lo: usize, hi: usize, t: f64) -> Result<TwoStepRule> {
    let (p1, p2) = (ladder.gammas[lo], ladder.gammas[hi]);
    if t >= 1.0 {
        TwoStepRule::cutoff(p2)
    } else if t <= 0.0 {
        TwoStepRule::cutoff(p1)
    } else {
        TwoStepRule::new(t, Some(p1), p2)
    }
}

/// Apply `f` and `Q_f` to every seller at its merged level `γ`.
fn apply_rule(market: &Market, levels: &PriceLevels, rule: &TwoStepRule) -> MechanismOutcome {
    use crate::market::AllocationRule;
    let mut fractions = Vec::with_capacity(market.len());
    let mut payments = Vec::with_capacity(market.len());
    for (s, &lvl) in market.sellers().iter().zip(&levels.level_of) {
        let g = levels.levels[lvl].gamma;
        fractions.push(rule.allocation(g));
        payments.push(rule.payment_per_utility(g) * s.utility);
    }
    MechanismOutcome::new(market, fractions, payments)
}
