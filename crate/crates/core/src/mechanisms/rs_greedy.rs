//! Random-Sampling-Greedy: learn a step rule on one random half of the
//! market and post it to the other half.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::market::{posted_price_utility, AllocationRule, Market, MechanismOutcome, TwoStepRule};
use crate::rng::seeded_rng;

use super::{check_budget, greedy};

/// `ε₁` (pre-purchase share), `δ₁` (learning-budget haircut), `η` and `C`
/// (truncation and top-seller count). All zero disables pre-purchase and
/// truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsGreedyParams {
    pub epsilon1: f64,
    pub delta1: f64,
    pub eta: f64,
    pub top_c: usize,
    pub seed: u64,
}

impl RsGreedyParams {
    pub fn zeros(seed: u64) -> Self {
        RsGreedyParams {
            epsilon1: 0.0,
            delta1: 0.0,
            eta: 0.0,
            top_c: 0,
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        RsGreedyParams { seed, ..self }
    }

    fn validate(&self, n: usize) -> Result<()> {
        for (name, v) in [
            ("epsilon1", self.epsilon1),
            ("delta1", self.delta1),
            ("eta", self.eta),
        ] {
            if !(0.0..1.0).contains(&v) {
                return Err(Error::param(format!("{name} = {v} must lie in [0, 1)")));
            }
        }
        if self.top_c > n {
            return Err(Error::param(format!(
                "top_c = {} exceeds market size {n}",
                self.top_c
            )));
        }
        Ok(())
    }
}

impl Default for RsGreedyParams {
    fn default() -> Self {
        RsGreedyParams::zeros(0)
    }
}

pub fn rs_greedy(
    market: &Market,
    budget: f64,
    params: &RsGreedyParams,
) -> Result<MechanismOutcome> {
    let budget = check_budget(budget)?;
    params.validate(market.len())?;
    let n = market.len();
    let mut fractions = vec![0.0; n];
    let mut payments = vec![0.0; n];

    // Top-C sellers by utility (ties by index) are bought outright.
    let mut by_utility: Vec<usize> = (0..n).collect();
    by_utility.sort_by(|&a, &b| {
        market.sellers()[b]
            .utility
            .total_cmp(&market.sellers()[a].utility)
            .then(a.cmp(&b))
    });
    let (top, rest) = by_utility.split_at(params.top_c);
    let top_utility: f64 = top.iter().map(|&i| market.sellers()[i].utility).sum();
    if params.top_c > 0 {
        let each = params.epsilon1 * budget / params.top_c as f64;
        for &i in top {
            fractions[i] = 1.0;
            payments[i] = each;
        }
    }

    let mut others = rest.to_vec();
    others.sort_unstable();
    others.shuffle(&mut seeded_rng(params.seed));
    let split = others.len().div_ceil(2);
    let (x, y) = others.split_at(split);

    let learn_budget = (1.0 - params.delta1) * budget / 2.0;
    let cap = (1.0 - params.epsilon1) * budget / 2.0;
    let truncation = (params.eta > 0.0 && params.top_c > 0)
        .then(|| top_utility / (params.eta * params.top_c as f64));

    let rule_x = learn_rule(market, x, learn_budget, truncation)?;
    let rule_y = learn_rule(market, y, learn_budget, truncation)?;
    post_sequentially(market, y, &rule_x, cap, &mut fractions, &mut payments);
    post_sequentially(market, x, &rule_y, cap, &mut fractions, &mut payments);

    Ok(MechanismOutcome::new(market, fractions, payments))
}

/// Greedy on one half, with the low price dropped when too little utility
/// sits below it.
fn learn_rule(
    market: &Market,
    half: &[usize],
    budget: f64,
    truncation: Option<f64>,
) -> Result<TwoStepRule> {
    let sub = market.subset(half);
    let rule = greedy(&sub, budget)?.rule;
    let Some(threshold) = truncation else {
        return Ok(rule);
    };
    // The half is a uniform sample of the non-top sellers, so twice its
    // utility below p₁ estimates U_{p₁} on all of them.
    let estimate = 2.0 * posted_price_utility(sub.sellers(), rule.low_price());
    Ok(if estimate < threshold {
        rule.without_low_price()
    } else {
        rule
    })
}

/// Offer `rule` to `targets` in ascending `γ` until `cap` is spent; the seller
/// that would cross the cap is bought fractionally to land on it.
fn post_sequentially(
    market: &Market,
    targets: &[usize],
    rule: &TwoStepRule,
    cap: f64,
    fractions: &mut [f64],
    payments: &mut [f64],
) {
    let mut order = targets.to_vec();
    order.sort_by(|&a, &b| market.gamma(a).total_cmp(&market.gamma(b)).then(a.cmp(&b)));
    let mut spent = 0.0;
    for i in order {
        let g = market.gamma(i);
        let x = rule.allocation(g);
        if x <= 0.0 {
            continue;
        }
        let pay = rule.payment_per_utility(g) * market.sellers()[i].utility;
        if spent + pay <= cap {
            fractions[i] = x;
            payments[i] = pay;
            spent += pay;
        } else {
            let scale = ((cap - spent) / pay).clamp(0.0, 1.0);
            fractions[i] = x * scale;
            payments[i] = (cap - spent).max(0.0);
            break;
        }
    }
}
