//! Numerical check of predicted branch dimensions: instantiate one map from
//! the universal family, find its zeros inside `Fix_V(S)` near the origin
//! and read the local dimension off the Jacobian rank.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{mix_seed, AnalysisReport};
use crate::equivariants::{equivariant_dimension, UniversalMap};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::isotropy::IsotropyNode;
use crate::linalg::{self, RANK_REL_TOL};
use crate::newton::{self, NewtonOptions};
use crate::poly::PolyMap;
use crate::representation::Representation;
use crate::spec::Options;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeOptions {
    pub seed: u64,
    pub radius: f64,
    /// Starts closer to the origin than `puncture * radius` are rejected,
    /// as are zeros found there.
    pub puncture: f64,
    pub n_starts: usize,
    pub zero_tol: f64,
    pub dedup_tol: f64,
    pub max_iter: usize,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions::from(&Options::default())
    }
}

impl From<&Options> for ProbeOptions {
    fn from(o: &Options) -> Self {
        ProbeOptions {
            seed: o.seed,
            radius: o.probe_radius,
            puncture: 0.01,
            n_starts: o.probe_starts,
            zero_tol: 1e-9,
            dedup_tol: 1e-5,
            max_iter: 200,
        }
    }
}

/// Zeros of one map inside `Fix_V(S)`.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroBranchSample {
    pub sigma: String,
    pub dim_fix_v: usize,
    pub dim_fix_w: usize,
    /// Zeros in the coordinates of `V`.
    pub zeros: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    /// Rank of the restricted Jacobian at each zero.
    pub ranks: Vec<usize>,
    /// Whether the isotropy of each zero is exactly `S` rather than larger.
    pub exact: Vec<bool>,
    /// `dim Fix_V(S)` minus the most frequent rank over zeros with isotropy
    /// exactly `S`.
    pub estimated_dim: Option<usize>,
    /// Largest component of `f(x)` outside `Fix_W(S)` over all zeros.
    pub off_fix_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MatchStatus {
    Match,
    Mismatch,
    NoZeros,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub sigma: String,
    pub predicted: i64,
    pub estimated: Option<usize>,
    pub status: MatchStatus,
    /// Set on every mismatch: the drawn parameters may be non-generic.
    pub non_generic_suspect: bool,
    pub t_norm: f64,
}

/// Default probe degrees: every degree up to `lowest + 2` that carries
/// equivariants.
pub fn default_degrees(v: &Representation, w: &Representation, budget: usize) -> Result<Vec<usize>> {
    let mut degrees = Vec::new();
    let mut lowest = None;
    for d in 1..=budget {
        if equivariant_dimension(v, w, d)? > 0 {
            lowest.get_or_insert(d);
            degrees.push(d);
        }
        if let Some(l) = lowest {
            if d >= l + 2 {
                break;
            }
        }
    }
    if degrees.is_empty() {
        return Err(Error::NoEquivariants { max_degree: budget });
    }
    Ok(degrees)
}

/// Standard normal coefficients for every basis map, from `seed`.
pub fn draw_parameters(universal: &UniversalMap, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, "probe-t"));
    (0..universal.num_params()).map(|_| StandardNormal.sample(&mut rng)).collect()
}

fn ball_start(rng: &mut ChaCha8Rng, a: usize, radius: f64, puncture: f64) -> DVector<f64> {
    loop {
        let dir = DVector::<f64>::from_fn(a, |_, _| StandardNormal.sample(rng));
        let n = dir.norm();
        if n < 1e-12 {
            continue;
        }
        let r = radius * rng.random::<f64>().powf(1.0 / a as f64);
        if r >= puncture * radius {
            return dir * (r / n);
        }
    }
}

fn modal_rank(ranks: &[usize]) -> Option<usize> {
    let max = *ranks.iter().max()?;
    let mut counts = vec![0usize; max + 1];
    for &r in ranks {
        counts[r] += 1;
    }
    // ties go to the higher rank
    (0..=max).rev().max_by_key(|&r| counts[r])
}

pub fn find_zero_branches(
    f: &PolyMap,
    v: &Representation,
    w: &Representation,
    node: &IsotropyNode,
    opts: &ProbeOptions,
) -> Result<ZeroBranchSample> {
    let sub = node.subgroup();
    let bv = v.fix_basis(&sub)?;
    let bw = w.fix_basis(&sub)?;
    let (a, b) = (bv.ncols(), bw.ncols());
    let mut sample = ZeroBranchSample {
        sigma: node.name.clone(),
        dim_fix_v: a,
        dim_fix_w: b,
        zeros: Vec::new(),
        residuals: Vec::new(),
        ranks: Vec::new(),
        exact: Vec::new(),
        estimated_dim: None,
        off_fix_residual: 0.0,
    };
    if a == 0 {
        return Ok(sample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(opts.seed, &format!("probe-starts/{}", node.name)));
    let starts: Vec<DVector<f64>> =
        (0..opts.n_starts).map(|_| ball_start(&mut rng, a, opts.radius, opts.puncture)).collect();
    let system = |y: &DVector<f64>| {
        let x = &bv * y;
        (bw.transpose() * f.evaluate(&x), bw.transpose() * f.jacobian(&x) * &bv)
    };
    let nopts = NewtonOptions { tol: opts.zero_tol, max_iter: opts.max_iter };
    let found: Vec<DVector<f64>> = starts
        .par_iter()
        .map(|s| newton::solve(system, s.clone(), nopts))
        .collect::<Vec<_>>()
        .into_iter()
        .filter(|r| r.converged)
        .map(|r| r.x)
        .filter(|y| {
            let n = y.norm();
            n >= opts.puncture * opts.radius && n <= opts.radius
        })
        .collect();
    for y in newton::dedup(found, opts.dedup_tol) {
        let x = &bv * &y;
        let fx = f.evaluate(&x);
        let off = &fx - &bw * (bw.transpose() * &fx);
        sample.off_fix_residual = sample.off_fix_residual.max(off.amax());
        let (g, jac) = system(&y);
        sample.residuals.push(g.norm());
        sample.ranks.push(if b == 0 { 0 } else { linalg::rank_with(&jac, RANK_REL_TOL) });
        sample.exact.push(has_exact_isotropy(v, &sub, &x));
        sample.zeros.push(x.iter().copied().collect());
    }
    let exact_ranks: Vec<usize> =
        sample.ranks.iter().zip(&sample.exact).filter(|(_, e)| **e).map(|(r, _)| *r).collect();
    sample.estimated_dim = modal_rank(&exact_ranks).map(|r| a - r);
    Ok(sample)
}

const ISOTROPY_TOL: f64 = 1e-6;

fn has_exact_isotropy(v: &Representation, sub: &Subgroup, x: &DVector<f64>) -> bool {
    let scale = x.norm().max(1.0);
    (0..v.group().order()).filter(|g| !sub.contains(*g)).all(|g| (v.matrix(g) * x - x).norm() > ISOTROPY_TOL * scale)
}

/// Probe every isotropy subgroup with `dim Fix_V(S) > 0`.
pub fn probe_all(
    f: &PolyMap,
    v: &Representation,
    w: &Representation,
    nodes: &[IsotropyNode],
    opts: &ProbeOptions,
) -> Result<Vec<ZeroBranchSample>> {
    nodes
        .iter()
        .filter(|n| n.dim_fix_v > 0)
        .map(|n| find_zero_branches(f, v, w, n, opts))
        .collect()
}

/// Compare estimated dimensions with `s(S)` from the lattice of the report.
pub fn verify_predictions(report: &AnalysisReport, samples: &[ZeroBranchSample], t: &[f64]) -> Vec<Comparison> {
    let t_norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
    samples
        .iter()
        .filter_map(|s| {
            let node = report.lattice.find(&s.sigma)?;
            let status = match s.estimated_dim {
                None => MatchStatus::NoZeros,
                Some(d) if d as i64 == node.index => MatchStatus::Match,
                Some(_) => MatchStatus::Mismatch,
            };
            Some(Comparison {
                sigma: s.sigma.clone(),
                predicted: node.index,
                estimated: s.estimated_dim,
                status,
                non_generic_suspect: status == MatchStatus::Mismatch || t_norm == 0.0,
                t_norm,
            })
        })
        .collect()
}

/// One row per zero: subgroup, residual, rank, exact isotropy, coordinates.
pub fn samples_to_csv(samples: &[ZeroBranchSample]) -> Result<String> {
    let width = samples.iter().flat_map(|s| s.zeros.iter().map(|z| z.len())).max().unwrap_or(0);
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["sigma".to_string(), "residual".into(), "rank".into(), "exact".into()];
    header.extend((1..=width).map(|i| format!("x{i}")));
    wtr.write_record(&header).map_err(|e| Error::Io(e.to_string()))?;
    for s in samples {
        for (((z, r), k), e) in s.zeros.iter().zip(&s.residuals).zip(&s.ranks).zip(&s.exact) {
            let mut row = vec![s.sigma.clone(), format!("{r:e}"), k.to_string(), e.to_string()];
            row.extend(z.iter().map(|x| format!("{x}")));
            wtr.write_record(&row).map_err(|e| Error::Io(e.to_string()))?;
        }
    }
    let bytes = wtr.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}
