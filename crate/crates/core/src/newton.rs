//! Damped Gauss-Newton with minimum-norm steps, shared by the regularity
//! test and the probe.

use nalgebra::{DMatrix, DVector};

use crate::linalg::min_norm_solve;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-10, max_iter: 200 }
    }
}

#[derive(Debug, Clone)]
pub struct NewtonResult {
    pub x: DVector<f64>,
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Drive `F(x)` to zero; `system` returns `(F(x), DF(x))`.
pub fn solve<S>(system: S, x0: DVector<f64>, opts: NewtonOptions) -> NewtonResult
where
    S: Fn(&DVector<f64>) -> (DVector<f64>, DMatrix<f64>),
{
    let mut x = x0;
    let (mut f, mut j) = system(&x);
    let mut norm = f.norm();
    for it in 0..opts.max_iter {
        if norm <= opts.tol {
            return NewtonResult { x, residual: norm, converged: true, iterations: it };
        }
        let step = min_norm_solve(&j, &(-&f));
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let cand = &x + &step * alpha;
            let (fc, jc) = system(&cand);
            let nc = fc.norm();
            if nc.is_finite() && nc < (1.0 - 1e-4 * alpha) * norm {
                x = cand;
                f = fc;
                j = jc;
                norm = nc;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            return NewtonResult { x, residual: norm, converged: norm <= opts.tol, iterations: it };
        }
    }
    NewtonResult { converged: norm <= opts.tol, x, residual: norm, iterations: opts.max_iter }
}

/// Keep points at least `tol` apart, in input order.
pub fn dedup(points: Vec<DVector<f64>>, tol: f64) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::new();
    for p in points {
        if out.iter().all(|q| (q - &p).norm() > tol) {
            out.push(p);
        }
    }
    out
}
