use crate::error::{Error, Result};

/// A worst-case Bayesian market described by its `cF(c)`-versus-`F(c)` plot:
/// zero up to `F_1`, then linear pieces with non-decreasing slopes `a_i`
/// starting at `F_i`, ending at `F_{m+1} = 1`.
///
/// On piece `j` the CDF is `F(c) = b_j/(a_j − c)` with `b_j = a_jF_j − y_j`,
/// where `y_j` is the curve height at `F_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseCurve {
    breakpoints: Vec<f64>,
    slopes: Vec<f64>,
    /// `y_1..y_{m+1}`.
    heights: Vec<f64>,
    /// `b_1..b_m`.
    intercepts: Vec<f64>,
    /// `∫_0^{F_i} x dF(x)` for `i = 1..m+1`.
    cumulative_cost: Vec<f64>,
}

impl PiecewiseCurve {
    pub fn new(breakpoints: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        let m = breakpoints.len();
        if m == 0 || slopes.len() != m {
            return Err(Error::InvalidCurve(format!(
                "need equal, non-zero numbers of breakpoints and slopes (got {m} and {})",
                slopes.len()
            )));
        }
        if !breakpoints.iter().chain(&slopes).all(|v| v.is_finite()) {
            return Err(Error::InvalidCurve("non-finite parameter".into()));
        }
        if !(breakpoints[0] > 0.0) || breakpoints[m - 1] > 1.0 {
            return Err(Error::InvalidCurve(format!(
                "breakpoints must lie in (0, 1], got {breakpoints:?}"
            )));
        }
        if breakpoints.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidCurve(
                "breakpoints must be non-decreasing".into(),
            ));
        }
        if !(slopes[0] > 0.0) || slopes.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidCurve(
                "slopes must be positive and non-decreasing".into(),
            ));
        }

        let upper = |j: usize| if j + 1 < m { breakpoints[j + 1] } else { 1.0 };
        let mut heights = vec![0.0];
        let mut intercepts = Vec::with_capacity(m);
        let mut cumulative_cost = vec![0.0];
        let mut log_sum = 0.0;
        for j in 0..m {
            let (f_lo, f_hi) = (breakpoints[j], upper(j));
            // b_{j+1} = b_j + (a_{j+1} − a_j)·F_{j+1} avoids cancellation in a·F − y.
            let b = match intercepts.last() {
                None => slopes[0] * f_lo,
                Some(&prev) => prev + (slopes[j] - slopes[j - 1]) * f_lo,
            };
            if !(b > 0.0) {
                return Err(Error::InvalidCurve(format!(
                    "intercept b_{} = {b} must be > 0",
                    j + 1
                )));
            }
            intercepts.push(b);
            heights.push(heights[j] + slopes[j] * (f_hi - f_lo));
            // Cost of the fraction bought up to the end of this piece.
            let cost = slopes[j] * f_hi - b - log_sum - b * (f_hi / f_lo).ln();
            log_sum += b * (f_hi / f_lo).ln();
            cumulative_cost.push(cost);
        }
        Ok(PiecewiseCurve {
            breakpoints,
            slopes,
            heights,
            intercepts,
            cumulative_cost,
        })
    }

    /// Single linear piece starting at `F_1 = ratio` with unit slope, so
    /// `b/a = ratio`.
    pub fn relu(ratio: f64) -> Result<Self> {
        PiecewiseCurve::new(vec![ratio], vec![1.0])
    }

    pub fn segments(&self) -> usize {
        self.slopes.len()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn intercepts(&self) -> &[f64] {
        &self.intercepts
    }

    /// `y_1..y_{m+1}`; `y_i = c_iF_i` is the cutoff spend at `F_i`.
    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    /// `∫_0^{F_i} x dF(x)` for `i = 1..m+1`.
    pub fn cumulative_cost(&self) -> &[f64] {
        &self.cumulative_cost
    }

    /// `F_i`, with `F_{m+1} = 1` for `i = m`.
    pub fn upper(&self, j: usize) -> f64 {
        self.breakpoints.get(j + 1).copied().unwrap_or(1.0)
    }

    pub(crate) fn is_degenerate(&self, j: usize) -> bool {
        !(self.upper(j) > self.breakpoints[j])
    }

    /// Expected cost of buying every item, `∫_0^1 x dF(x)`.
    pub fn total_cost(&self) -> f64 {
        self.cumulative_cost[self.segments()]
    }

    /// Largest cost in the support, `c_{m+1} = y_{m+1}`.
    pub fn max_cost(&self) -> f64 {
        self.heights[self.segments()]
    }

    /// Cost `c_j = y_j/F_j` where piece `j` starts.
    pub fn breakpoint_cost(&self, j: usize) -> f64 {
        self.slopes[j] - self.intercepts[j] / self.breakpoints[j]
    }

    /// Partial sum `Σ_{l<j} b_l ln(F_{l+1}/F_l)`.
    pub(crate) fn log_sum(&self, j: usize) -> f64 {
        (0..j)
            .map(|l| self.intercepts[l] * (self.upper(l) / self.breakpoints[l]).ln())
            .sum()
    }

    /// `F(c)`.
    pub fn cdf(&self, c: f64) -> f64 {
        if c < 0.0 {
            return 0.0;
        }
        for j in 0..self.segments() {
            if self.is_degenerate(j) {
                continue;
            }
            let c_hi = self.heights[j + 1] / self.upper(j);
            if c < c_hi {
                return (self.intercepts[j] / (self.slopes[j] - c)).max(self.breakpoints[j]);
            }
        }
        1.0
    }

    /// Inverse CDF: `0` on the atom `u ≤ F_1`, else `a_j − b_j/u` on piece `j`.
    pub fn quantile(&self, u: f64) -> f64 {
        if u <= self.breakpoints[0] {
            return 0.0;
        }
        let j = (0..self.segments())
            .rev()
            .find(|&j| u > self.breakpoints[j])
            .unwrap_or(0);
        (self.slopes[j] - self.intercepts[j] / u.min(1.0)).max(0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Midpoint rule for `∫ x dF(x)` over `u ∈ (0, F]` via the quantile.
    fn quadrature(curve: &PiecewiseCurve, upto: f64) -> f64 {
        let steps = 400_000;
        let h = upto / steps as f64;
        (0..steps)
            .map(|k| curve.quantile((k as f64 + 0.5) * h) * h)
            .sum()
    }

    #[test]
    fn rejects_invalid() {
        assert!(PiecewiseCurve::new(vec![], vec![]).is_err());
        assert!(PiecewiseCurve::new(vec![0.0], vec![1.0]).is_err());
        assert!(PiecewiseCurve::new(vec![0.5, 0.4], vec![1.0, 2.0]).is_err());
        assert!(PiecewiseCurve::new(vec![0.2, 0.4], vec![2.0, 1.0]).is_err());
        assert!(PiecewiseCurve::new(vec![0.2], vec![-1.0]).is_err());
        assert!(PiecewiseCurve::new(vec![1.2], vec![1.0]).is_err());
        assert!(PiecewiseCurve::new(vec![0.2, 0.4], vec![1.0]).is_err());
    }

    #[test]
    fn relu_closed_forms() {
        let r = 1.0 / std::f64::consts::E;
        let c = PiecewiseCurve::relu(r).unwrap();
        assert_eq!(c.intercepts(), &[r]);
        assert!((c.total_cost() - (1.0 - r + r * r.ln())).abs() < 1e-15);
        assert_eq!(c.quantile(0.2), 0.0);
        assert!((c.max_cost() - (1.0 - r)).abs() < 1e-15);
    }

    #[test]
    fn cumulative_cost_matches_quadrature() {
        let c = PiecewiseCurve::new(vec![0.1, 0.3, 0.7], vec![1.0, 1.5, 4.0]).unwrap();
        for j in 0..=3 {
            let f = if j < 3 { c.breakpoints()[j] } else { 1.0 };
            let q = quadrature(&c, f);
            assert!(
                (c.cumulative_cost()[j] - q).abs() < 1e-6,
                "{j}: {} vs {q}",
                c.cumulative_cost()[j]
            );
        }
    }

    #[test]
    fn cdf_inverts_quantile() {
        let c = PiecewiseCurve::new(vec![0.25, 0.25, 0.6], vec![2.0, 3.0, 3.0]).unwrap();
        for k in 1..100 {
            let u = k as f64 / 100.0;
            let x = c.quantile(u);
            if u > 0.25 {
                assert!((c.cdf(x) - u).abs() < 1e-12, "u={u}");
            } else {
                assert_eq!(x, 0.0);
            }
        }
        assert_eq!(c.cdf(c.max_cost() + 1.0), 1.0);
        assert_eq!(c.cdf(0.0), 0.25);
    }

    #[test]
    fn breakpoint_costs_continuous() {
        let c = PiecewiseCurve::new(vec![0.1, 0.3, 0.7], vec![1.0, 1.5, 4.0]).unwrap();
        assert!(c.breakpoint_cost(0).abs() < 1e-15);
        for j in 1..3 {
            let prev = c.slopes()[j - 1] - c.intercepts()[j - 1] / c.breakpoints()[j];
            assert!((prev - c.breakpoint_cost(j)).abs() < 1e-12);
            assert!(c.breakpoint_cost(j) > c.breakpoint_cost(j - 1));
        }
    }
}
