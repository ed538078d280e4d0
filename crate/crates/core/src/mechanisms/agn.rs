use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::market::{AllocationRule, Market, MechanismOutcome};

use super::check_budget;

const MAX_BISECTIONS: usize = 200;
const R_REL_WIDTH: f64 = 1e-12;

/// `f_r(γ) = ln(e − γ/r)` below `r(e−1)`, zero above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgnRule {
    r: f64,
}

impl AgnRule {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r > 0.0 {
            Ok(AgnRule { r })
        } else {
            Err(Error::InvalidRule(format!(
                "AGN scale r = {r} must be positive"
            )))
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    fn cap(&self) -> f64 {
        self.r * (E - 1.0)
    }
}

impl AllocationRule for AgnRule {
    fn allocation(&self, gamma: f64) -> f64 {
        if gamma < self.cap() {
            (E - gamma / self.r).ln().max(0.0)
        } else {
            0.0
        }
    }

    fn support_end(&self) -> Option<f64> {
        Some(self.cap())
    }

    fn tail_integral(&self, gamma: f64) -> f64 {
        if gamma < self.cap() {
            let f = self.allocation(gamma);
            self.r - (1.0 - f) * (self.r * E - gamma)
        } else {
            0.0
        }
    }

    /// `Q_{f_r}(γ) = r·e·f_r(γ) − r(e−1) + γ` on the support.
    fn payment_per_utility(&self, gamma: f64) -> f64 {
        if gamma < self.cap() {
            (self.r * E * self.allocation(gamma) - self.cap() + gamma).max(0.0)
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone)]
pub struct AgnRun {
    /// `None` when the market has no positive-cost seller or the budget is
    /// zero with only free sellers allocated; the scale is then irrelevant.
    pub rule: Option<AgnRule>,
    pub outcome: MechanismOutcome,
    pub degenerate: bool,
}

fn total_payment(market: &Market, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    let rule = AgnRule { r };
    market
        .sellers()
        .iter()
        .map(|s| rule.payment_per_utility(s.cost / s.utility) * s.utility)
        .sum()
}

pub fn agn(market: &Market, budget: f64) -> Result<AgnRun> {
    let budget = check_budget(budget)?;
    let free_outcome = || {
        let fractions = market
            .sellers()
            .iter()
            .map(|s| if s.cost == 0.0 { 1.0 } else { 0.0 })
            .collect();
        MechanismOutcome::new(market, fractions, vec![0.0; market.len()])
    };
    let max_gamma = (0..market.len())
        .map(|i| market.gamma(i))
        .fold(0.0, f64::max);
    if max_gamma == 0.0 {
        return Ok(AgnRun {
            rule: None,
            outcome: free_outcome(),
            degenerate: true,
        });
    }

    // Largest r with payment ≤ B: payment is continuous and non-decreasing in r.
    let utility = market.total_utility();
    let mut hi = (budget / utility)
        .max(max_gamma / (E - 1.0))
        .max(f64::MIN_POSITIVE);
    let mut doublings = 0;
    while total_payment(market, hi) <= budget {
        hi *= 2.0;
        doublings += 1;
        if doublings > 2100 {
            return Err(Error::Bracketing(
                "AGN payment never exceeds the budget".into(),
            ));
        }
    }
    let mut lo = 0.0;
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= R_REL_WIDTH * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if total_payment(market, mid) <= budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    if lo <= 0.0 {
        return Ok(AgnRun {
            rule: None,
            outcome: free_outcome(),
            degenerate: false,
        });
    }
    let rule = AgnRule::new(lo)?;
    let mut fractions = Vec::with_capacity(market.len());
    let mut payments = Vec::with_capacity(market.len());
    for s in market.sellers() {
        let g = s.cost / s.utility;
        fractions.push(rule.allocation(g));
        payments.push(rule.payment_per_utility(g) * s.utility);
    }
    Ok(AgnRun {
        rule: Some(rule),
        outcome: MechanismOutcome::new(market, fractions, payments),
        degenerate: false,
    })
}
