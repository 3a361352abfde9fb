//! Derivative-free local minimization used by the global-minimum checks.

use argmin::core::{CostFunction, Executor};
use argmin::solver::neldermead::NelderMead;

struct Objective<F>(F);

impl<F: Fn(&[f64]) -> f64> CostFunction for Objective<F> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> Result<f64, argmin::core::Error> {
        Ok((self.0)(p))
    }
}

/// Nelder–Mead from `start` with an axis-aligned initial simplex of size `step`.
///
/// Returns the best point and value found. Non-finite objective values are treated as +∞.
pub fn minimize<F>(f: F, start: &[f64], step: f64, max_iters: u64) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let guarded = move |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut simplex = vec![start.to_vec()];
    for i in 0..start.len() {
        let mut v = start.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let fallback = (start.to_vec(), guarded(start));
    let solver = match NelderMead::new(simplex).with_sd_tolerance(1e-14) {
        Ok(s) => s,
        Err(_) => return fallback,
    };
    match Executor::new(Objective(guarded), solver).configure(|s| s.max_iters(max_iters)).run() {
        Ok(res) => match res.state.best_param {
            Some(p) => (p, res.state.best_cost),
            None => fallback,
        },
        Err(_) => fallback,
    }
}
