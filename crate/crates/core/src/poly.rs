//! Homogeneous polynomial maps `R^n -> R^m` in a graded-lex monomial basis.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Exponent vectors of all monomials in `n` variables up to a degree, graded
/// and lex-descending inside each degree (`x1^2, x1 x2, x2^2`).
#[derive(Debug)]
pub struct Monomials {
    n: usize,
    levels: Vec<Vec<Vec<u8>>>,
    index: Vec<HashMap<Vec<u8>, usize>>,
    /// `up[k][b][j]`: index at level `k+1` of monomial `b` (level `k`) times `x_j`.
    up: Vec<Vec<Vec<usize>>>,
    /// `down[k][a]`: first variable of `a` (level `k`) and the index of `a / x_i`.
    down: Vec<Vec<(usize, usize)>>,
}

fn exponents(n: usize, d: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n - 1 {
            cur.push(left as u8);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e as u8);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

impl Monomials {
    pub fn new(n: usize, max_degree: usize) -> Arc<Self> {
        let levels: Vec<Vec<Vec<u8>>> = (0..=max_degree).map(|d| exponents(n, d)).collect();
        let index: Vec<HashMap<Vec<u8>, usize>> = levels
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect())
            .collect();
        let mut up = Vec::new();
        for k in 0..max_degree {
            let table = levels[k]
                .iter()
                .map(|b| {
                    (0..n)
                        .map(|j| {
                            let mut e = b.clone();
                            e[j] += 1;
                            index[k + 1][&e]
                        })
                        .collect()
                })
                .collect();
            up.push(table);
        }
        let mut down = vec![Vec::new()];
        for k in 1..=max_degree {
            let table = levels[k]
                .iter()
                .map(|a| {
                    let i = a.iter().position(|&e| e > 0).unwrap();
                    let mut e = a.clone();
                    e[i] -= 1;
                    (i, index[k - 1][&e])
                })
                .collect();
            down.push(table);
        }
        Arc::new(Monomials { n, levels, index, up, down })
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn count(&self, d: usize) -> usize {
        self.levels[d].len()
    }

    pub fn exponents(&self, d: usize) -> &[Vec<u8>] {
        &self.levels[d]
    }

    pub fn index_of(&self, e: &[u8]) -> Option<usize> {
        let d: usize = e.iter().map(|&v| v as usize).sum();
        self.index.get(d)?.get(e).copied()
    }

    /// Values of all degree-`d` monomials at `x`.
    pub fn values(&self, d: usize, x: &[f64]) -> Vec<f64> {
        let mut prev = vec![1.0];
        for k in 1..=d {
            prev = self.down[k].iter().map(|&(i, p)| prev[p] * x[i]).collect();
        }
        prev
    }

    /// Sparse substitution matrix for `x = L y` at degree `d`: row `a` holds
    /// the coefficients of `x^a` in the monomials of `y` (`target`).
    pub fn substitution(&self, target: &Monomials, l: &DMatrix<f64>, d: usize) -> Vec<Vec<(usize, f64)>> {
        debug_assert_eq!(l.nrows(), self.n);
        debug_assert_eq!(l.ncols(), target.n);
        let nz: Vec<Vec<(usize, f64)>> = (0..self.n)
            .map(|i| (0..target.n).filter(|&j| l[(i, j)] != 0.0).map(|j| (j, l[(i, j)])).collect())
            .collect();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![vec![(0, 1.0)]];
        for k in 1..=d {
            let width = target.count(k);
            let mut scratch = vec![0.0; width];
            let mut touched: Vec<usize> = Vec::new();
            let mut next = Vec::with_capacity(self.count(k));
            for &(i, p) in &self.down[k] {
                for &(b, c) in &rows[p] {
                    for &(j, lij) in &nz[i] {
                        let t = target.up[k - 1][b][j];
                        if scratch[t] == 0.0 {
                            touched.push(t);
                        }
                        scratch[t] += c * lij;
                        if scratch[t] == 0.0 {
                            scratch[t] = f64::MIN_POSITIVE;
                        }
                    }
                }
                touched.sort_unstable();
                let row: Vec<(usize, f64)> = touched
                    .iter()
                    .filter_map(|&t| {
                        let v = scratch[t];
                        scratch[t] = 0.0;
                        (v.abs() > 1e-15).then_some((t, v))
                    })
                    .collect();
                touched.clear();
                next.push(row);
            }
            rows = next;
        }
        rows
    }
}

/// A homogeneous polynomial map; column `i` of `coeffs` holds output
/// component `i` in the monomial basis of degree `degree`.
#[derive(Debug, Clone)]
pub struct HomogeneousMap {
    monos: Arc<Monomials>,
    degree: usize,
    coeffs: DMatrix<f64>,
}

impl HomogeneousMap {
    pub fn new(monos: Arc<Monomials>, degree: usize, coeffs: DMatrix<f64>) -> Result<Self> {
        if degree > monos.max_degree() || coeffs.nrows() != monos.count(degree) {
            return Err(Error::ShapeMismatch);
        }
        Ok(HomogeneousMap { monos, degree, coeffs })
    }

    pub fn zero(monos: Arc<Monomials>, degree: usize, n_out: usize) -> Self {
        let rows = monos.count(degree);
        HomogeneousMap { monos, degree, coeffs: DMatrix::zeros(rows, n_out) }
    }

    pub fn monomials(&self) -> &Arc<Monomials> {
        &self.monos
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_in(&self) -> usize {
        self.monos.n_vars()
    }

    pub fn n_out(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    pub fn max_coeff(&self) -> f64 {
        crate::linalg::max_abs(&self.coeffs)
    }

    pub fn evaluate(&self, x: &DVector<f64>) -> DVector<f64> {
        let vals = self.monos.values(self.degree, x.as_slice());
        let mut out = DVector::zeros(self.n_out());
        for (r, v) in vals.iter().enumerate() {
            if *v == 0.0 {
                continue;
            }
            for c in 0..self.n_out() {
                out[c] += self.coeffs[(r, c)] * v;
            }
        }
        out
    }

    /// Analytic Jacobian, `n_out x n_in`.
    pub fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n_in();
        let mut jac = DMatrix::zeros(self.n_out(), n);
        if self.degree == 0 {
            return jac;
        }
        let lower = self.monos.values(self.degree - 1, x.as_slice());
        for (r, e) in self.monos.exponents(self.degree).iter().enumerate() {
            for i in 0..n {
                if e[i] == 0 {
                    continue;
                }
                let mut f = e.clone();
                f[i] -= 1;
                let v = e[i] as f64 * lower[self.monos.index[self.degree - 1][&f]];
                if v == 0.0 {
                    continue;
                }
                for c in 0..self.n_out() {
                    jac[(c, i)] += self.coeffs[(r, c)] * v;
                }
            }
        }
        jac
    }

    /// `sum_k t_k maps_k`; all maps must share degree and shape.
    pub fn combine(maps: &[HomogeneousMap], t: &[f64]) -> Result<HomogeneousMap> {
        if maps.len() != t.len() {
            return Err(Error::LengthMismatch { expected: maps.len(), found: t.len() });
        }
        let first = maps.first().ok_or(Error::ShapeMismatch)?;
        let mut coeffs = DMatrix::zeros(first.coeffs.nrows(), first.coeffs.ncols());
        for (m, &tk) in maps.iter().zip(t) {
            if m.coeffs.shape() != coeffs.shape() {
                return Err(Error::ShapeMismatch);
            }
            coeffs += &m.coeffs * tk;
        }
        Ok(HomogeneousMap { monos: first.monos.clone(), degree: first.degree, coeffs })
    }

    /// Precompose with `x = L y`; `target` indexes monomials in `y`.
    pub fn substitute(&self, l: &DMatrix<f64>, target: &Arc<Monomials>) -> HomogeneousMap {
        let rows = self.monos.substitution(target, l, self.degree);
        let mut coeffs = DMatrix::zeros(target.count(self.degree), self.n_out());
        for (a, row) in rows.iter().enumerate() {
            for &(b, v) in row {
                for c in 0..self.n_out() {
                    coeffs[(b, c)] += v * self.coeffs[(a, c)];
                }
            }
        }
        HomogeneousMap { monos: target.clone(), degree: self.degree, coeffs }
    }

    /// Postcompose with a linear map `m` (`k x n_out`).
    pub fn map_output(&self, m: &DMatrix<f64>) -> HomogeneousMap {
        HomogeneousMap { monos: self.monos.clone(), degree: self.degree, coeffs: &self.coeffs * m.transpose() }
    }

    /// Product `p * self` with a scalar polynomial `p` (one output column).
    pub fn scale_by(&self, p: &HomogeneousMap) -> Result<HomogeneousMap> {
        if p.n_out() != 1 || p.n_in() != self.n_in() {
            return Err(Error::ShapeMismatch);
        }
        let degree = self.degree + p.degree;
        if degree > self.monos.max_degree() {
            return Err(Error::ShapeMismatch);
        }
        let mut coeffs = DMatrix::zeros(self.monos.count(degree), self.n_out());
        for (a, ea) in p.monos.exponents(p.degree).iter().enumerate() {
            let pa = p.coeffs[(a, 0)];
            if pa == 0.0 {
                continue;
            }
            for (b, eb) in self.monos.exponents(self.degree).iter().enumerate() {
                let sum: Vec<u8> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let idx = self.monos.index[degree][&sum];
                for c in 0..self.n_out() {
                    coeffs[(idx, c)] += pa * self.coeffs[(b, c)];
                }
            }
        }
        Ok(HomogeneousMap { monos: self.monos.clone(), degree, coeffs })
    }

    /// Coefficients flattened monomial-major, output-minor.
    pub fn flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.coeffs.len());
        for r in 0..self.coeffs.nrows() {
            for c in 0..self.coeffs.ncols() {
                v.push(self.coeffs[(r, c)]);
            }
        }
        v
    }

    /// One line per output component, e.g. `[0] 1*x1^2 - 0.5*x1*x2`.
    pub fn to_text(&self, var: &str) -> String {
        let mut s = String::new();
        for c in 0..self.n_out() {
            let _ = write!(s, "[{c}] ");
            let mut first = true;
            for (r, e) in self.monos.exponents(self.degree).iter().enumerate() {
                let v = self.coeffs[(r, c)];
                if v == 0.0 {
                    continue;
                }
                let sign = if v < 0.0 { "-" } else { "+" };
                if first {
                    if v < 0.0 {
                        s.push('-');
                    }
                } else {
                    let _ = write!(s, " {sign} ");
                }
                first = false;
                let _ = write!(s, "{}", fmt_num(v.abs()));
                for (i, &p) in e.iter().enumerate() {
                    match p {
                        0 => {}
                        1 => {
                            let _ = write!(s, "*{var}{}", i + 1);
                        }
                        _ => {
                            let _ = write!(s, "*{var}{}^{p}", i + 1);
                        }
                    }
                }
            }
            if first {
                s.push('0');
            }
            s.push('\n');
        }
        s
    }
}

fn fmt_num(v: f64) -> String {
    let r = (v * 1e9).round() / 1e9;
    if (r - r.round()).abs() < 1e-12 {
        format!("{}", r.round() as i64)
    } else {
        format!("{r}")
    }
}

/// Sum of homogeneous layers sharing input and output dimensions.
#[derive(Debug, Clone)]
pub struct PolyMap {
    pub n_in: usize,
    pub n_out: usize,
    pub layers: Vec<HomogeneousMap>,
}

impl PolyMap {
    pub fn evaluate(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.n_out);
        for l in &self.layers {
            out += l.evaluate(x);
        }
        out
    }

    pub fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(self.n_out, self.n_in);
        for l in &self.layers {
            jac += l.jacobian(x);
        }
        jac
    }

    pub fn is_zero(&self) -> bool {
        self.layers.iter().all(|l| l.max_coeff() == 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let m = Monomials::new(2, 2);
        assert_eq!(m.exponents(2), &[vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(m.count(1), 2);
    }

    #[test]
    fn substitution_of_square() {
        // (y1 + y2)^2 = y1^2 + 2 y1 y2 + y2^2
        let src = Monomials::new(1, 2);
        let dst = Monomials::new(2, 2);
        let l = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let rows = src.substitution(&dst, &l, 2);
        assert_eq!(rows[0], vec![(0, 1.0), (1, 2.0), (2, 1.0)]);
    }

    #[test]
    fn evaluate_and_jacobian() {
        let m = Monomials::new(2, 3);
        let mut c = DMatrix::zeros(4, 1);
        c[(1, 0)] = 3.0; // x1^2 x2
        let f = HomogeneousMap::new(m, 3, c).unwrap();
        let x = DVector::from_vec(vec![2.0, 5.0]);
        assert_eq!(f.evaluate(&x)[0], 60.0);
        let j = f.jacobian(&x);
        assert_eq!((j[(0, 0)], j[(0, 1)]), (60.0, 12.0));
    }
}
