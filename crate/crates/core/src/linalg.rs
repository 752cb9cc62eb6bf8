//! Small dense linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};

/// Relative singular value cutoff used for numerical rank.
pub const RANK_REL_TOL: f64 = 1e-8;

/// Singular values below this are zero regardless of scale.
const ABS_FLOOR: f64 = 1e-13;

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Numerical rank with cutoff `rel * sigma_max`.
pub fn rank_with(m: &DMatrix<f64>, rel: f64) -> usize {
    let sv = singular_values(m);
    let Some(&top) = sv.first() else { return 0 };
    if top < ABS_FLOOR {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * top).count()
}

pub fn rank(m: &DMatrix<f64>) -> usize {
    rank_with(m, RANK_REL_TOL)
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues ascending.
pub fn sym_eigen_sorted(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let sym = (a + a.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (c, &i) in order.iter().enumerate() {
        vectors.set_column(c, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Orthonormal basis of the range of a symmetric idempotent matrix.
pub fn projector_range(p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = p.nrows();
    let (values, vectors) = sym_eigen_sorted(p);
    let cols: Vec<usize> = (0..n).filter(|&i| values[i] > 0.5).collect();
    select_columns(&vectors, &cols)
}

pub fn select_columns(m: &DMatrix<f64>, cols: &[usize]) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m.nrows(), cols.len());
    for (c, &i) in cols.iter().enumerate() {
        out.set_column(c, &m.column(i));
    }
    out
}

pub fn hstack(blocks: &[DMatrix<f64>], nrows: usize) -> DMatrix<f64> {
    let ncols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(nrows, ncols);
    let mut c = 0;
    for b in blocks {
        out.view_mut((0, c), (nrows, b.ncols())).copy_from(b);
        c += b.ncols();
    }
    out
}

pub fn block_diag(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

/// Orthonormal basis of the orthogonal complement of the columns of `q`
/// (assumed orthonormal) in R^n.
pub fn orthogonal_complement(q: &DMatrix<f64>) -> DMatrix<f64> {
    let n = q.nrows();
    let p = DMatrix::identity(n, n) - q * q.transpose();
    projector_range(&p)
}

/// Orthonormal basis for the column span of `m` (rank decided by [`rank`]).
pub fn column_span(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.unwrap();
    let top = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    if top < ABS_FLOOR {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > RANK_REL_TOL * top)
        .collect();
    select_columns(&u, &cols)
}

/// Minimum-norm least-squares solution of `j x = f`.
pub fn min_norm_solve(j: &DMatrix<f64>, f: &DVector<f64>) -> DVector<f64> {
    let n = j.ncols();
    if j.nrows() == 0 || n == 0 {
        return DVector::zeros(n);
    }
    let svd = j.clone().svd(true, true);
    let top = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    if top < ABS_FLOOR {
        return DVector::zeros(n);
    }
    svd.solve(f, 1e-12 * top).unwrap_or_else(|_| DVector::zeros(n))
}

/// Largest principal-angle sine between two column spans (both orthonormalised).
pub fn subspace_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let qa = column_span(a);
    let qb = column_span(b);
    if qa.ncols() != qb.ncols() {
        return f64::INFINITY;
    }
    let r = &qb - &qa * (qa.transpose() * &qb);
    max_abs(&r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_outer_product() {
        let u = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let m = &u * u.transpose();
        assert_eq!(rank(&m), 1);
        assert_eq!(rank(&DMatrix::<f64>::zeros(3, 3)), 0);
    }

    #[test]
    fn complement_is_orthogonal() {
        let q = DMatrix::from_column_slice(3, 1, &[1.0, 0.0, 0.0]);
        let c = orthogonal_complement(&q);
        assert_eq!(c.ncols(), 2);
        assert!(max_abs(&(q.transpose() * &c)) < 1e-12);
    }

    #[test]
    fn min_norm_step() {
        let j = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let x = min_norm_solve(&j, &DVector::from_vec(vec![2.0]));
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }
}
