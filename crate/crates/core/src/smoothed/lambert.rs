//! The lower real branch `W_{−1}` of the Lambert W function.

use std::f64::consts::E;

use crate::error::{Error, Result};

const MAX_HALLEY: usize = 64;

/// `W_{−1}(x)` for `x ∈ [−1/e, 0)`: the solution `w ≤ −1` of `w·eʷ = x`.
pub fn lambert_w_minus1(x: f64) -> Result<f64> {
    let branch = -1.0 / E;
    if !(x < 0.0) || x.is_nan() {
        return Err(Error::LambertDomain(x));
    }
    if x <= branch {
        // Tolerate rounding of `-1/e` itself.
        if x >= branch * (1.0 + 4.0 * f64::EPSILON) {
            return Ok(-1.0);
        }
        return Err(Error::LambertDomain(x));
    }
    Ok(w_minus1_from_log(x.abs().ln()))
}

/// `W_{−1}(−e^{log_neg_x})`, i.e. the `w ≤ −1` solving `w + ln(−w) = log_neg_x`.
///
/// Working with `ln(−x)` avoids underflow when `x` is far below `f64::MIN_POSITIVE`.
pub fn lambert_w_minus1_log(log_neg_x: f64) -> Result<f64> {
    if log_neg_x.is_nan() || log_neg_x > -1.0 + 4.0 * f64::EPSILON {
        return Err(Error::LambertDomain(-log_neg_x.exp()));
    }
    Ok(w_minus1_from_log(log_neg_x.min(-1.0)))
}

fn w_minus1_from_log(l: f64) -> f64 {
    if l >= -1.0 {
        return -1.0;
    }
    if l == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let g = |w: f64| w + (-w).ln() - l;

    // Branch-point series in p = −√(2(1 + e·x)), else the asymptotic guess.
    let one_plus_ex = -(l + 1.0).exp_m1();
    let p = -(2.0 * one_plus_ex).sqrt();
    let mut w = if p > -1.0 {
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else {
        l - (-l).ln()
    };
    w = w.min(-1.0);

    for _ in 0..MAX_HALLEY {
        let r = g(w);
        let d1 = 1.0 + 1.0 / w;
        let d2 = -1.0 / (w * w);
        let denom = 2.0 * d1 * d1 - r * d2;
        if denom == 0.0 || !denom.is_finite() {
            break;
        }
        let mut next = w - 2.0 * r * d1 / denom;
        if !next.is_finite() {
            break;
        }
        if next > -1.0 {
            next = 0.5 * (w - 1.0);
        }
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * w.abs();
        w = next;
        if done {
            return w;
        }
    }
    bisect(l, g)
}

/// `g(w) = w + ln(−w) − l` is increasing on `(−∞, −1]`.
fn bisect(l: f64, g: impl Fn(f64) -> f64) -> f64 {
    let mut hi = -1.0;
    let mut lo = 2.0 * l - 1.0;
    while g(lo) > 0.0 {
        lo *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
