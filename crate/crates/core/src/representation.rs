//! Real orthogonal representations of a [`GroupTable`], their characters,
//! fixed-point subspaces and isotypic decompositions.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::group::{generate_group, GroupTable, Subgroup, DEFAULT_MAX_ORDER, ELEMENT_TOL};
use crate::linalg::{self, max_abs};

/// Residual allowed when rounding a character inner product or an average
/// trace to an integer.
pub const INTEGRAL_TOL: f64 = 1e-6;
/// Relative eigenvalue gap that separates clusters during splitting.
pub const SPLIT_GAP: f64 = 1e-6;
/// Gaps below this (relative) are treated as exact degeneracies.
const SPLIT_SAME: f64 = 1e-10;
/// Random draws allowed per block before splitting gives up.
pub const SPLIT_RETRIES: usize = 8;

const HOM_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Representation {
    group: Arc<GroupTable>,
    dim: usize,
    mats: Vec<DMatrix<f64>>,
}

/// Class function stored as one value per conjugacy class.
#[derive(Debug, Clone)]
pub struct Character {
    group: Arc<GroupTable>,
    pub values: Vec<f64>,
}

/// All copies of one irreducible type inside a representation.
#[derive(Debug, Clone)]
pub struct IsotypicComponent {
    /// Dimension of the irreducible type `U`.
    pub irr_dim: usize,
    /// Number of copies of `U`.
    pub multiplicity: usize,
    /// `dim End_G(U)`: 1, 2 or 4.
    pub endo_dim: usize,
    /// Orthonormal basis of each copy, in ambient coordinates.
    pub copies: Vec<DMatrix<f64>>,
    /// The irreducible `U`, realised on the first copy.
    pub irreducible: Representation,
}

impl IsotypicComponent {
    /// Orthonormal basis of the whole component (copies stacked).
    pub fn basis(&self) -> DMatrix<f64> {
        let n = self.copies[0].nrows();
        linalg::hstack(&self.copies, n)
    }

    pub fn dim(&self) -> usize {
        self.irr_dim * self.multiplicity
    }
}

pub fn round_integral(value: f64) -> Result<i64> {
    let r = value.round();
    let residual = (value - r).abs();
    if residual >= INTEGRAL_TOL {
        return Err(Error::NotIntegral { value, residual });
    }
    Ok(r as i64)
}

impl Character {
    pub fn new(group: Arc<GroupTable>, values: Vec<f64>) -> Self {
        Character { group, values }
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    /// `(1/|G|) sum_g a(g) b(g)`; real characters so no conjugation.
    pub fn inner_raw(&self, other: &Character) -> f64 {
        let sizes = self.group.class_sizes();
        let s: f64 = (0..self.values.len())
            .map(|c| sizes[c] as f64 * self.values[c] * other.values[c])
            .sum();
        s / self.group.order() as f64
    }

    pub fn value_at(&self, g: usize) -> f64 {
        self.values[self.group.class_of(g)]
    }

    pub fn degree(&self) -> f64 {
        self.values[self.group.class_of(0)]
    }
}

/// Character inner product rounded to an integer.
pub fn char_inner(a: &Character, b: &Character) -> Result<usize> {
    if !Arc::ptr_eq(&a.group, &b.group) {
        return Err(Error::GroupMismatch);
    }
    let v = round_integral(a.inner_raw(b))?;
    if v < 0 {
        return Err(Error::InternalMismatch(format!("negative character inner product {v}")));
    }
    Ok(v as usize)
}

impl Representation {
    /// Build a representation from the images of the group generators.
    pub fn from_generator_images(group: Arc<GroupTable>, images: &[DMatrix<f64>]) -> Result<Self> {
        if images.len() != group.generator_elements().len() {
            return Err(Error::LengthMismatch {
                expected: group.generator_elements().len(),
                found: images.len(),
            });
        }
        let dim = images.first().map(|m| m.nrows()).unwrap_or(0);
        for (name, m) in group.generator_names().iter().zip(images) {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::ShapeMismatch);
            }
            let residual = max_abs(&(m.transpose() * m - DMatrix::identity(dim, dim)));
            if residual > HOM_TOL {
                return Err(Error::NotOrthogonal { name: name.clone(), residual });
            }
        }
        let mats: Vec<DMatrix<f64>> = (0..group.order())
            .map(|g| {
                group.word(g).iter().fold(DMatrix::identity(dim, dim), |acc, &s| acc * &images[s])
            })
            .collect();
        let mut residual = 0.0f64;
        for g in 0..group.order() {
            for (s, &ge) in group.generator_elements().iter().enumerate() {
                let lhs = &mats[g] * &images[s];
                residual = residual.max(max_abs(&(lhs - &mats[group.mul(g, ge)])));
            }
        }
        if residual > HOM_TOL {
            return Err(Error::NotAHomomorphism { residual });
        }
        Ok(Representation { group, dim, mats })
    }

    /// The matrices the group was generated from.
    pub fn defining(group: Arc<GroupTable>) -> Self {
        let mats = (0..group.order()).map(|g| group.matrix(g).clone()).collect();
        let dim = group.defining_dim();
        Representation { group, dim, mats }
    }

    pub fn trivial(group: Arc<GroupTable>, dim: usize) -> Self {
        let mats = vec![DMatrix::identity(dim, dim); group.order()];
        Representation { group, dim, mats }
    }

    pub fn direct_sum(parts: &[&Representation]) -> Result<Self> {
        let group = parts.first().ok_or_else(|| Error::Spec("empty direct sum".into()))?.group.clone();
        if parts.iter().any(|p| !Arc::ptr_eq(&p.group, &group)) {
            return Err(Error::GroupMismatch);
        }
        let dim = parts.iter().map(|p| p.dim).sum();
        let mats = (0..group.order())
            .map(|g| {
                let blocks: Vec<DMatrix<f64>> = parts.iter().map(|p| p.mats[g].clone()).collect();
                linalg::block_diag(&blocks)
            })
            .collect();
        Ok(Representation { group, dim, mats })
    }

    pub fn tensor(&self, other: &Representation) -> Result<Self> {
        if !Arc::ptr_eq(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let mats = (0..self.group.order()).map(|g| linalg::kron(&self.mats[g], &other.mats[g])).collect();
        Ok(Representation { group: self.group.clone(), dim: self.dim * other.dim, mats })
    }

    /// Restrict to an invariant subspace with orthonormal basis `basis`.
    pub fn restrict(&self, basis: &DMatrix<f64>) -> Result<Self> {
        let k = basis.ncols();
        let mut residual = 0.0f64;
        let mats: Vec<DMatrix<f64>> = self
            .mats
            .iter()
            .map(|m| {
                let img = m * basis;
                let r = basis.transpose() * &img;
                residual = residual.max(max_abs(&(img - basis * &r)));
                r
            })
            .collect();
        if residual > 1e-7 {
            return Err(Error::InternalMismatch(format!(
                "subspace is not invariant (residual {residual:.3e})"
            )));
        }
        Ok(Representation { group: self.group.clone(), dim: k, mats })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &DMatrix<f64> {
        &self.mats[g]
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.mats
    }

    pub fn generator_images(&self) -> Vec<DMatrix<f64>> {
        self.group.generator_elements().iter().map(|&g| self.mats[g].clone()).collect()
    }

    pub fn character(&self) -> Character {
        let values = self.group.classes().iter().map(|c| self.mats[c[0]].trace()).collect();
        Character::new(self.group.clone(), values)
    }

    /// Elements acting as the identity.
    pub fn kernel(&self) -> Subgroup {
        let id = DMatrix::identity(self.dim, self.dim);
        Subgroup::new(
            (0..self.group.order())
                .filter(|&g| max_abs(&(&self.mats[g] - &id)) <= ELEMENT_TOL.max(1e-8))
                .collect(),
        )
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel().order() == 1
    }

    /// `(1/|S|) sum_{s in S} rho(s)`.
    pub fn averaged_projector(&self, sub: &Subgroup) -> DMatrix<f64> {
        let mut p = DMatrix::zeros(self.dim, self.dim);
        for &g in &sub.elements {
            p += &self.mats[g];
        }
        p / sub.order() as f64
    }

    /// Orthonormal basis of `Fix(S)`, cross-checked against the character
    /// average.
    pub fn fix_basis(&self, sub: &Subgroup) -> Result<DMatrix<f64>> {
        let basis = linalg::projector_range(&self.averaged_projector(sub));
        let avg: f64 = sub.elements.iter().map(|&g| self.mats[g].trace()).sum::<f64>() / sub.order() as f64;
        let by_char = round_integral(avg)?;
        if by_char as usize != basis.ncols() {
            return Err(Error::InternalMismatch(format!(
                "fixed dimension {by_char} from characters, {} from projector",
                basis.ncols()
            )));
        }
        Ok(basis)
    }

    pub fn fix_dimension(&self, sub: &Subgroup) -> Result<usize> {
        Ok(self.fix_basis(sub)?.ncols())
    }

    /// Pointwise stabiliser of a subspace given by an orthonormal basis.
    pub fn pointwise_stabilizer(&self, basis: &DMatrix<f64>) -> Subgroup {
        Subgroup::new(
            (0..self.group.order())
                .filter(|&g| max_abs(&(&self.mats[g] * basis - basis)) <= 1e-8)
                .collect(),
        )
    }

    /// Orthonormal basis of the fixed subspace of the whole group.
    pub fn trivial_part(&self) -> Result<DMatrix<f64>> {
        self.fix_basis(&self.group.whole())
    }

    /// Averaged intertwiner `(1/|G|) sum_g rho_self(g) m rho_other(g)^T`.
    pub fn average_intertwiner(&self, other: &Representation, m: &DMatrix<f64>) -> DMatrix<f64> {
        let mut acc = DMatrix::zeros(self.dim, other.dim);
        for g in 0..self.group.order() {
            acc += &self.mats[g] * m * other.mats[g].transpose();
        }
        acc / self.group.order() as f64
    }

    /// The group `G / ker` realised by this representation, together with
    /// the corresponding faithful representation.
    pub fn quotient_by_kernel(&self) -> Result<(Arc<GroupTable>, Representation)> {
        let gens: Vec<(String, DMatrix<f64>)> = self
            .group
            .generator_names()
            .iter()
            .cloned()
            .zip(self.generator_images())
            .collect();
        let name = format!("{}/ker", self.group.name());
        let q = generate_group(&name, &gens, ELEMENT_TOL, DEFAULT_MAX_ORDER)?;
        let rep = Representation::defining(q.clone());
        Ok((q, rep))
    }

    /// Split into isotypic components with a seeded randomized splitting.
    pub fn isotypic_decompose(&self, seed: u64) -> Result<Vec<IsotypicComponent>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut irreducibles = Vec::new();
        self.split(&DMatrix::identity(self.dim, self.dim), &mut rng, &mut irreducibles)?;

        let mut groups: Vec<Vec<(DMatrix<f64>, Representation)>> = Vec::new();
        for q in irreducibles {
            let sub = self.restrict(&q)?;
            let chi = sub.character();
            let mut placed = false;
            for grp in groups.iter_mut() {
                let other = &grp[0].1;
                if other.dim != sub.dim {
                    continue;
                }
                let m = random_matrix(&mut rng, other.dim, sub.dim);
                let t = other.average_intertwiner(&sub, &m);
                let iso = max_abs(&t) > 1e-6 * max_abs(&m);
                let by_char = char_inner(&chi, &other.character())? > 0;
                if iso != by_char {
                    return Err(Error::InternalMismatch(
                        "intertwiner test and character test disagree".into(),
                    ));
                }
                if iso {
                    grp.push((q.clone(), sub.clone()));
                    placed = true;
                    break;
                }
            }
            if !placed {
                groups.push(vec![(q, sub)]);
            }
        }

        let mut comps = Vec::new();
        for grp in groups {
            let irreducible = grp[0].1.clone();
            let chi = irreducible.character();
            let endo_dim = char_inner(&chi, &chi)?;
            comps.push(IsotypicComponent {
                irr_dim: irreducible.dim,
                multiplicity: grp.len(),
                endo_dim,
                copies: grp.into_iter().map(|(q, _)| q).collect(),
                irreducible,
            });
        }
        comps.sort_by_key(|c| {
            let key: Vec<i64> =
                c.irreducible.character().values.iter().map(|v| (v * 1e6).round() as i64).collect();
            (c.irr_dim, key)
        });
        Ok(comps)
    }

    fn split(&self, q: &DMatrix<f64>, rng: &mut ChaCha8Rng, out: &mut Vec<DMatrix<f64>>) -> Result<()> {
        let k = q.ncols();
        if k == 0 {
            return Ok(());
        }
        let block = self.restrict(q)?;
        for _ in 0..SPLIT_RETRIES {
            let s = random_matrix(rng, k, k);
            let s = (&s + s.transpose()) * 0.5;
            let a = block.average_intertwiner(&block, &s);
            let (values, vectors) = linalg::sym_eigen_sorted(&a);
            let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale < 1e-14 {
                continue;
            }
            let mut clusters: Vec<Vec<usize>> = vec![vec![0]];
            let mut ambiguous = false;
            for i in 1..k {
                let gap = (values[i] - values[i - 1]) / scale;
                if gap > SPLIT_GAP {
                    clusters.push(vec![i]);
                } else {
                    if gap > SPLIT_SAME {
                        ambiguous = true;
                    }
                    clusters.last_mut().unwrap().push(i);
                }
            }
            if ambiguous {
                continue;
            }
            if clusters.len() == 1 {
                let chi = block.character();
                let self_inner = round_integral(chi.inner_raw(&chi))?;
                if matches!(self_inner, 1 | 2 | 4) {
                    out.push(q.clone());
                    return Ok(());
                }
                continue;
            }
            for c in clusters {
                let sub = q * linalg::select_columns(&vectors, &c);
                self.split(&sub, rng, out)?;
            }
            return Ok(());
        }
        Err(Error::SplitFailed { attempts: SPLIT_RETRIES })
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| StandardNormal.sample(rng))
}
