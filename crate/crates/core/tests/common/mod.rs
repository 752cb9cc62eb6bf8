#![allow(dead_code)]

use equistrat::representation::Representation;
use nalgebra::Complex;

/// Degree-`d` symmetric power trace of one matrix from its eigenvalues:
/// the complete homogeneous symmetric polynomial `h_d(lambda_1..lambda_n)`.
pub fn sym_power_trace(m: &nalgebra::DMatrix<f64>, d: usize) -> f64 {
    let eig = m.clone().complex_eigenvalues();
    // h[k] over the eigenvalues processed so far
    let mut h = vec![Complex::new(0.0, 0.0); d + 1];
    h[0] = Complex::new(1.0, 0.0);
    for lam in eig.iter() {
        for k in 1..=d {
            let prev = h[k - 1];
            h[k] += lam * prev;
        }
    }
    h[d].re
}

/// `dim Hom_G(S^d V, W)` by brute-force averaging over every element.
pub fn dim_by_eigenvalues(v: &Representation, w: &Representation, d: usize) -> usize {
    let n = v.group().order();
    let s: f64 = (0..n).map(|g| sym_power_trace(v.matrix(g), d) * w.matrix(g).trace()).sum();
    (s / n as f64).round() as usize
}

use equistrat::poly::HomogeneousMap;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};

/// A displayed parametrized form `q(y, t)` with its Jacobian in `y`.
pub struct DisplayedForm {
    pub n_params: usize,
    pub n_vars: usize,
    pub eval: fn(&[f64], &[f64]) -> Vec<f64>,
    pub jac: fn(&[f64], &[f64]) -> Vec<Vec<f64>>,
}

pub struct FormMatch {
    /// max |P T - O| relative to max |O|: our family expressed in the
    /// displayed parameters.
    pub forward: f64,
    /// max |O S - P| relative to max |P|.
    pub backward: f64,
    /// max relative Jacobian difference at random points under `t = T s`.
    pub jacobian: f64,
}

fn sample_matrix(n_rows: usize, n_cols: usize, f: impl Fn(usize, usize) -> f64) -> DMatrix<f64> {
    DMatrix::from_fn(n_rows, n_cols, f)
}

fn lstsq(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.clone().svd(true, true).solve(b, 1e-12).unwrap()
}

/// Compare a family of restricted maps with a displayed form by values at
/// random points: both are linear in their parameters, so equality up to a
/// change of parameters is a least-squares problem.
pub fn match_family(ours: &[HomogeneousMap], form: &DisplayedForm, seed: u64) -> FormMatch {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n_out = ours[0].n_out();
    let pts: Vec<Vec<f64>> = (0..60).map(|_| (0..form.n_vars).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let rows = pts.len() * n_out;
    let o = sample_matrix(rows, ours.len(), |r, k| ours[k].evaluate(&DVector::from_column_slice(&pts[r / n_out]))[r % n_out]);
    let p = sample_matrix(rows, form.n_params, |r, k| {
        let mut t = vec![0.0; form.n_params];
        t[k] = 1.0;
        (form.eval)(&pts[r / n_out], &t)[r % n_out]
    });
    let t_of_s = lstsq(&p, &o);
    let s_of_t = lstsq(&o, &p);
    let forward = (&p * &t_of_s - &o).amax() / o.amax();
    let backward = (&o * &s_of_t - &p).amax() / p.amax();
    let mut jacobian: f64 = 0.0;
    for _ in 0..20 {
        let s: Vec<f64> = (0..ours.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let t = &t_of_s * DVector::from_column_slice(&s);
        let y: Vec<f64> = (0..form.n_vars).map(|_| rng.random_range(-1.0..1.0)).collect();
        let f = HomogeneousMap::combine(ours, &s).unwrap();
        let ja = f.jacobian(&DVector::from_column_slice(&y));
        let jp = (form.jac)(&y, t.as_slice());
        let scale = ja.amax().max(1e-300);
        for (i, row) in jp.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                jacobian = jacobian.max((ja[(i, j)] - v).abs() / scale);
            }
        }
    }
    FormMatch { forward, backward, jacobian }
}

pub const D6_QUADRATIC: DisplayedForm = DisplayedForm {
    n_params: 3,
    n_vars: 2,
    eval: |y, t| vec![t[0] * y[0] * y[0] + t[1] * y[0] * y[1] + t[2] * y[1] * y[1]],
    jac: |y, t| vec![vec![2.0 * t[0] * y[0] + t[1] * y[1], t[1] * y[0] + 2.0 * t[2] * y[1]]],
};

/// Binary cubic with coefficients `(c0, c1, c2, c3)` of
/// `x3^3, x1 x3^2, x1^2 x3, x1^3`, where `y = (x1, x3)`.
fn cubic(y: &[f64], c: [f64; 4]) -> Vec<f64> {
    let (x1, x3) = (y[0], y[1]);
    vec![c[0] * x3.powi(3) + c[1] * x1 * x3 * x3 + c[2] * x1 * x1 * x3 + c[3] * x1.powi(3)]
}

fn cubic_jac(y: &[f64], c: [f64; 4]) -> Vec<Vec<f64>> {
    let (x1, x3) = (y[0], y[1]);
    vec![vec![
        c[1] * x3 * x3 + 2.0 * c[2] * x1 * x3 + 3.0 * c[3] * x1 * x1,
        3.0 * c[0] * x3 * x3 + 2.0 * c[1] * x1 * x3 + c[2] * x1 * x1,
    ]]
}

fn sigma1(t: &[f64]) -> [f64; 4] {
    [t[0] + t[1], t[2] + t[4] + t[6], t[3] + t[5] + t[7], t[8]]
}

fn sigma2(t: &[f64]) -> [f64; 4] {
    [-t[0] + t[1], t[2] - t[4] + t[6], t[3] - t[5] + t[7], -t[8]]
}

pub const F_SIGMA1_CUBIC: DisplayedForm = DisplayedForm {
    n_params: 9,
    n_vars: 2,
    eval: |y, t| cubic(y, sigma1(t)),
    jac: |y, t| cubic_jac(y, sigma1(t)),
};

pub const F_SIGMA2_CUBIC: DisplayedForm = DisplayedForm {
    n_params: 9,
    n_vars: 2,
    eval: |y, t| cubic(y, sigma2(t)),
    jac: |y, t| cubic_jac(y, sigma2(t)),
};
