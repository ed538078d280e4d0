//! The non-IC benchmark: fractional knapsack with public costs.

use crate::market::{Market, MechanismOutcome};

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackSolution {
    pub utility: f64,
    pub fractions: Vec<f64>,
    pub spend: f64,
}

/// Maximise `Σ x_i u_i` s.t. `Σ x_i c_i ≤ budget`, `x ∈ [0,1]^n`.
///
/// Fills price levels in ascending `γ`; the marginal level is split
/// proportionally across its members.
pub fn non_ic_optimum(market: &Market, budget: f64) -> KnapsackSolution {
    let budget = budget.max(0.0);
    let levels = market.price_levels();
    let mut fractions = vec![0.0; market.len()];
    let mut remaining = budget;
    let mut utility = 0.0;
    let mut spend = 0.0;
    for level in &levels.levels {
        let cost: f64 = level
            .members
            .iter()
            .map(|&i| market.sellers()[i].cost)
            .sum();
        let x = if cost <= remaining {
            1.0
        } else if cost > 0.0 {
            remaining / cost
        } else {
            1.0
        };
        if x <= 0.0 {
            break;
        }
        for &i in &level.members {
            fractions[i] = x;
        }
        utility += x * level.utility;
        spend += x * cost;
        remaining -= x * cost;
        if x < 1.0 {
            break;
        }
    }
    KnapsackSolution {
        utility,
        fractions,
        spend,
    }
}

/// `R_M(I, B)`: achieved utility over the non-IC optimum (1 if both vanish).
pub fn competitive_ratio(outcome: &MechanismOutcome, market: &Market, budget: f64) -> f64 {
    ratio_against(
        outcome.total_utility,
        non_ic_optimum(market, budget).utility,
    )
}

pub fn ratio_against(utility: f64, optimum: f64) -> f64 {
    if optimum <= 0.0 {
        1.0
    } else {
        utility / optimum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_all_costs() {
        let m = Market::uniform(4, 1.0).unwrap();
        let sol = non_ic_optimum(&m, 4.0);
        assert_eq!(sol.utility, 4.0);
        assert_eq!(sol.spend, 4.0);
    }

    #[test]
    fn fractional_fill_by_gamma() {
        let m = Market::from_pairs([(2.0, 1.0), (1.0, 1.0)]).unwrap();
        let sol = non_ic_optimum(&m, 2.0);
        assert_eq!(sol.utility, 1.5);
        assert_eq!(sol.fractions, vec![0.5, 1.0]);
    }

    #[test]
    fn zero_budget_buys_free_items() {
        let m = Market::from_pairs([(0.0, 2.0), (1.0, 1.0), (0.0, 0.5)]).unwrap();
        assert_eq!(non_ic_optimum(&m, 0.0).utility, 2.5);
    }

    #[test]
    fn tied_level_is_split_proportionally() {
        let m = Market::from_pairs([(1.0, 1.0), (2.0, 2.0), (5.0, 1.0)]).unwrap();
        let sol = non_ic_optimum(&m, 1.5);
        assert_eq!(sol.fractions, vec![0.5, 0.5, 0.0]);
        assert_eq!(sol.utility, 1.5);
    }

    #[test]
    fn ratio_examples() {
        let m = Market::uniform(10, 1.0).unwrap();
        let mut out = MechanismOutcome::empty(&m);
        out.total_utility = 6.32;
        assert!((competitive_ratio(&out, &m, 10.0) - 0.632).abs() < 1e-12);
        assert_eq!(ratio_against(0.0, 0.0), 1.0);
        assert!((ratio_against(4.0 / 3.0, 1.5) - 8.0 / 9.0).abs() < 1e-15);
    }
}
