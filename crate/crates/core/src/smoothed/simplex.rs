//! Nelder–Mead simplex search with dimension-adaptive coefficients.

use std::cell::Cell;

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    pub max_evals: usize,
    /// Stop when the spread of objective values over the simplex drops below this.
    pub f_tol: f64,
    /// ... and every vertex is within this distance of the best one.
    pub x_tol: f64,
    /// Edge length of the initial simplex.
    pub step: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_evals: 20_000,
            f_tol: 1e-12,
            x_tol: 1e-9,
            step: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

/// Minimise `f` from `x0`. Non-finite objective values are treated as `+∞`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let evals = Cell::new(0usize);
    let mut eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if n == 0 {
        let value = eval(x0);
        return NelderMeadResult {
            x: vec![],
            value,
            evals: 1,
            converged: true,
        };
    }

    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for k in 0..n {
        let mut x = x0.to_vec();
        x[k] += opts.step;
        let v = eval(&x);
        simplex.push((x, v));
    }

    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let along = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(w).map(|(ci, wi)| ci + t * (wi - ci)).collect()
    };
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let spread = (worst - best).abs();
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if spread <= opts.f_tol && diameter <= opts.x_tol {
            converged = true;
            break;
        }
        if evals.get() >= opts.max_evals {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / nf;
            }
        }
        let worst_x = simplex[n].0.clone();
        let xr = along(&centroid, &worst_x, -alpha);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(&centroid, &worst_x, -alpha * beta);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst {
            let xc = along(&centroid, &worst_x, -alpha * gamma);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(&centroid, &worst_x, gamma);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < fr.min(worst) {
            simplex[n] = (xc, fc);
            continue;
        }
        // Shrink towards the best vertex.
        let best_x = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x = along(&best_x, &vertex.0, delta);
            let v = eval(&x);
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    NelderMeadResult {
        x,
        value,
        evals: evals.get(),
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = nelder_mead(
            |x| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            &NelderMeadOptions::default(),
        );
        assert!(r.converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] + 2.0).abs() < 1e-5,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn rosenbrock() {
        let opts = NelderMeadOptions {
            max_evals: 50_000,
            ..Default::default()
        };
        let r = nelder_mead(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            &opts,
        );
        assert!(r.value < 1e-10, "{}", r.value);
    }

    #[test]
    fn respects_eval_budget() {
        let opts = NelderMeadOptions {
            max_evals: 50,
            ..Default::default()
        };
        let r = nelder_mead(|x| x.iter().map(|v| v.abs()).sum(), &[3.0; 6], &opts);
        assert!(!r.converged);
        assert!(r.evals <= 50 + 8);
    }

    #[test]
    fn nan_is_avoided() {
        let r = nelder_mead(
            |x| {
                if x[0] < 0.0 {
                    f64::NAN
                } else {
                    (x[0] - 0.25).powi(2)
                }
            },
            &[1.0],
            &NelderMeadOptions::default(),
        );
        assert!((r.x[0] - 0.25).abs() < 1e-5);
    }
}
