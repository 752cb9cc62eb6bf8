//! Homogeneous equivariant polynomial maps: dimensions from symmetric-power
//! characters, explicit bases by Reynolds averaging, restriction to fixed
//! subspaces and the universal map.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::linalg::{self, max_abs};
use crate::poly::{HomogeneousMap, Monomials, PolyMap};
use crate::representation::{char_inner, Character, Representation};

/// Character of the `d`-th symmetric power.
#[derive(Debug, Clone)]
pub struct SymPowerCharacter {
    pub degree: usize,
    pub character: Character,
}

/// Newton recursion `h_d(g) = (1/d) sum_{k=1..d} chi(g^k) h_{d-k}(g)`.
pub fn sym_power_character(chi: &Character, d: usize) -> SymPowerCharacter {
    let g = chi.group().clone();
    let values = g
        .classes()
        .iter()
        .map(|cls| {
            let x = cls[0];
            let mut h = vec![1.0];
            for k in 1..=d {
                let s: f64 = (1..=k).map(|i| chi.value_at(g.power(x, i)) * h[k - i]).sum();
                h.push(s / k as f64);
            }
            h[d]
        })
        .collect();
    SymPowerCharacter { degree: d, character: Character::new(g, values) }
}

/// `dim` of degree-`d` homogeneous equivariants `V -> W` by the trace formula.
pub fn equivariant_dimension(v: &Representation, w: &Representation, d: usize) -> Result<usize> {
    if !Arc::ptr_eq(v.group(), w.group()) {
        return Err(Error::GroupMismatch);
    }
    let s = sym_power_character(&v.character(), d);
    char_inner(&s.character, &w.character())
}

/// Basis of degree-`d` equivariants; `pairs` lists the seed `(monomial,
/// target coordinate)` of each map.
#[derive(Debug, Clone)]
pub struct EquivariantBasis {
    pub degree: usize,
    pub dim_v: usize,
    pub dim_w: usize,
    pub maps: Vec<HomogeneousMap>,
    pub pairs: Vec<(usize, usize)>,
}

impl EquivariantBasis {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `sum_k t_k f_k`.
    pub fn combine(&self, t: &[f64]) -> Result<HomogeneousMap> {
        if self.maps.is_empty() {
            if !t.is_empty() {
                return Err(Error::LengthMismatch { expected: 0, found: t.len() });
            }
            return Ok(HomogeneousMap::zero(Monomials::new(self.dim_v, self.degree), self.degree, self.dim_w));
        }
        HomogeneousMap::combine(&self.maps, t)
    }

    /// Plain-text listing, one block per basis map.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "degree {} equivariants R^{} -> R^{}: {}\n",
            self.degree,
            self.dim_v,
            self.dim_w,
            self.maps.len()
        );
        for (k, m) in self.maps.iter().enumerate() {
            s.push_str(&format!("f{}:\n", k + 1));
            for line in m.to_text("x").lines() {
                s.push_str("  ");
                s.push_str(line);
                s.push('\n');
            }
        }
        s
    }
}

const CHUNK_BUDGET: usize = 4_000_000;
const EXHAUSTIVE_LIMIT: usize = 4096;

/// Reynolds-averaged basis of degree-`d` equivariants.
pub fn equivariant_basis(v: &Representation, w: &Representation, d: usize) -> Result<EquivariantBasis> {
    equivariant_basis_in(v, w, d, &Monomials::new(v.dim(), d))
}

/// As [`equivariant_basis`], with maps expressed over a caller-supplied
/// monomial table (so maps of several degrees can be combined).
pub fn equivariant_basis_in(
    v: &Representation,
    w: &Representation,
    d: usize,
    monos: &Arc<Monomials>,
) -> Result<EquivariantBasis> {
    let expected = equivariant_dimension(v, w, d)?;
    let n_mono = monos.count(d);
    let m = w.dim();
    let total = n_mono * m;
    let group = v.group().clone();
    let order = group.order() as f64;

    let subst: Vec<Vec<Vec<(usize, f64)>>> =
        v.matrices().iter().map(|g| monos.substitution(monos, g, d)).collect();

    let exhaustive = total <= EXHAUSTIVE_LIMIT;
    let chunk = (CHUNK_BUDGET / total.max(1)).max(1);
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    let mut images: Vec<DVector<f64>> = Vec::new();
    let mut pairs = Vec::new();

    let mut start = 0;
    'outer: while start < total {
        let end = (start + chunk).min(total);
        let mut block = DMatrix::<f64>::zeros(end - start, total);
        for (g, rows) in subst.iter().enumerate() {
            let rw = w.matrix(g);
            for r in start..end {
                let (alpha, j) = (r / m, r % m);
                for &(beta, t) in &rows[alpha] {
                    for i in 0..m {
                        let c = rw[(j, i)];
                        if c != 0.0 {
                            block[(r - start, beta * m + i)] += t * c;
                        }
                    }
                }
            }
        }
        block /= order;
        for r in 0..(end - start) {
            let row: DVector<f64> = block.row(r).transpose();
            let norm = row.norm();
            if norm < 1e-12 {
                continue;
            }
            let mut res = row.clone();
            for _ in 0..2 {
                for q in &ortho {
                    let c = q.dot(&res);
                    res.axpy(-c, q, 1.0);
                }
            }
            let rn = res.norm();
            if rn > 1e-7 * norm {
                ortho.push(res / rn);
                images.push(row);
                pairs.push(((start + r) / m, (start + r) % m));
                if !exhaustive && images.len() == expected {
                    break 'outer;
                }
            }
        }
        start = end;
    }

    if !images.is_empty() {
        let stacked = DMatrix::from_fn(images.len(), total, |r, c| images[r][c]);
        let rank = linalg::rank(&stacked);
        if rank != images.len() {
            return Err(Error::DimensionMismatch { expected, found: rank });
        }
    }
    if images.len() != expected {
        return Err(Error::DimensionMismatch { expected, found: images.len() });
    }

    let maps = images
        .into_iter()
        .map(|img| {
            let scale = img.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            let coeffs = DMatrix::from_fn(n_mono, m, |b, i| {
                let c = img[b * m + i] / scale;
                if c.abs() < 1e-12 {
                    0.0
                } else {
                    c
                }
            });
            HomogeneousMap::new(monos.clone(), d, coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EquivariantBasis { degree: d, dim_v: v.dim(), dim_w: w.dim(), maps, pairs })
}

/// Smallest `d` in `1..=d_max` with nonzero equivariants.
pub fn lowest_degree(v: &Representation, w: &Representation, d_max: usize) -> Result<usize> {
    for d in 1..=d_max {
        if equivariant_dimension(v, w, d)? > 0 {
            return Ok(d);
        }
    }
    Err(Error::NoEquivariants { max_degree: d_max })
}

/// Maximum deviation from equivariance over all group elements at `x`.
pub fn equivariance_residual(f: &HomogeneousMap, v: &Representation, w: &Representation, x: &DVector<f64>) -> f64 {
    let fx = f.evaluate(x);
    (0..v.group().order())
        .map(|g| {
            let lhs = f.evaluate(&(v.matrix(g) * x));
            (lhs - w.matrix(g) * &fx).amax()
        })
        .fold(0.0, f64::max)
}

/// Basis maps restricted to `Fix_V(S) -> Fix_W(S)` in the coordinates of the
/// stored orthonormal bases.
#[derive(Debug, Clone)]
pub struct RestrictedFamily {
    pub fix_v: DMatrix<f64>,
    pub fix_w: DMatrix<f64>,
    pub maps: Vec<HomogeneousMap>,
}

impl RestrictedFamily {
    pub fn dim_in(&self) -> usize {
        self.fix_v.ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.fix_w.ncols()
    }

    pub fn combine(&self, t: &[f64]) -> Result<HomogeneousMap> {
        HomogeneousMap::combine(&self.maps, t)
    }

    /// True when every restricted map vanishes identically.
    pub fn is_identically_zero(&self, tol: f64) -> bool {
        self.maps.iter().all(|m| m.max_coeff() <= tol)
    }
}

pub fn restrict_to_fix(
    basis: &EquivariantBasis,
    v: &Representation,
    w: &Representation,
    sub: &Subgroup,
) -> Result<RestrictedFamily> {
    restrict_with(basis, &v.fix_basis(sub)?, &w.fix_basis(sub)?)
}

/// Restrict to `x = bv y`, project outputs with `bw^T`, and check that the
/// outputs lie in the span of `bw`.
pub fn restrict_with(basis: &EquivariantBasis, bv: &DMatrix<f64>, bw: &DMatrix<f64>) -> Result<RestrictedFamily> {
    let target = Monomials::new(bv.ncols(), basis.degree);
    let mut maps = Vec::with_capacity(basis.maps.len());
    for f in &basis.maps {
        let full = f.substitute(bv, &target);
        let proj = full.coeffs() * bw * bw.transpose();
        let residual = max_abs(&(full.coeffs() - proj));
        if residual > 1e-8 * f.max_coeff().max(1.0) {
            return Err(Error::FixViolation { residual });
        }
        maps.push(full.map_output(&bw.transpose()));
    }
    Ok(RestrictedFamily { fix_v: bv.clone(), fix_w: bw.clone(), maps })
}

/// How many degree-`d` equivariants are new module generators over the
/// invariant ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ModuleGenerators {
    pub degree: usize,
    /// All homogeneous equivariants of degree `d`.
    pub homogeneous: usize,
    /// Dimension of the span of `p * f` with `p` invariant of degree >= 1.
    pub from_lower: usize,
    /// `homogeneous - from_lower`.
    pub new: usize,
}

pub fn module_generators(v: &Representation, w: &Representation, d: usize) -> Result<ModuleGenerators> {
    let monos = Monomials::new(v.dim(), d);
    let top = equivariant_basis_in(v, w, d, &monos)?;
    let one = Representation::trivial(v.group().clone(), 1);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for k in 1..d {
        let inv = equivariant_basis_in(v, &one, k, &monos)?;
        if inv.is_empty() {
            continue;
        }
        let lower = equivariant_basis_in(v, w, d - k, &monos)?;
        for p in &inv.maps {
            for f in &lower.maps {
                rows.push(f.scale_by(p)?.flat());
            }
        }
    }
    let from_lower = if rows.is_empty() {
        0
    } else {
        let width = rows[0].len();
        linalg::rank(&DMatrix::from_fn(rows.len(), width, |r, c| rows[r][c]))
    };
    Ok(ModuleGenerators { degree: d, homogeneous: top.len(), from_lower, new: top.len() - from_lower })
}

/// `F(x, t) = sum_k t_k f_k(x)` over all basis maps of the listed degrees.
#[derive(Debug, Clone)]
pub struct UniversalMap {
    pub dim_v: usize,
    pub dim_w: usize,
    pub layers: Vec<EquivariantBasis>,
}

impl UniversalMap {
    pub fn new(v: &Representation, w: &Representation, degrees: &[usize]) -> Result<Self> {
        let max_d = degrees.iter().copied().max().unwrap_or(0);
        let monos = Monomials::new(v.dim(), max_d);
        let layers = degrees
            .iter()
            .map(|&d| equivariant_basis_in(v, w, d, &monos))
            .collect::<Result<Vec<_>>>()?;
        Ok(UniversalMap { dim_v: v.dim(), dim_w: w.dim(), layers })
    }

    /// Total number of parameters `k`.
    pub fn num_params(&self) -> usize {
        self.layers.iter().map(|l| l.len()).sum()
    }

    pub fn instantiate(&self, t: &[f64]) -> Result<PolyMap> {
        if t.len() != self.num_params() {
            return Err(Error::LengthMismatch { expected: self.num_params(), found: t.len() });
        }
        let mut layers = Vec::new();
        let mut off = 0;
        for l in &self.layers {
            if !l.is_empty() {
                layers.push(l.combine(&t[off..off + l.len()])?);
            }
            off += l.len();
        }
        Ok(PolyMap { n_in: self.dim_v, n_out: self.dim_w, layers })
    }

    pub fn evaluate(&self, x: &DVector<f64>, t: &[f64]) -> Result<DVector<f64>> {
        Ok(self.instantiate(t)?.evaluate(x))
    }
}
