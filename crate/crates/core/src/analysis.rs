//! Decide, for each maximal isotropy subgroup `S`, whether generic
//! equivariant maps have a branch of zeros with isotropy `S` emanating from
//! the origin, and with what dimension.
//!
//! The target is split into isotypic components `W_i = U^r`. With
//! `delta = (chi_V, chi_U)`:
//! * `delta >= r`: the linear terms decide (implicit function theorem);
//! * `delta == 0`: the lowest-degree terms decide, through a sampled test of
//!   regularity of the restricted forms `Q^S`;
//! * otherwise the matched copies are eliminated and the remaining map is
//!   tested as in the second case.
//!
//! Component verdicts are combined by conjunction.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::equivariants::{equivariant_basis, lowest_degree, restrict_to_fix, EquivariantBasis};
use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::isotropy::{build_lattice, IsotropyLattice, IsotropyNode};
use crate::linalg::{self, RANK_REL_TOL};
use crate::newton::{self, NewtonOptions};
use crate::poly::HomogeneousMap;
use crate::representation::{char_inner, IsotypicComponent, Representation};
use crate::spec::{Options, Problem};

/// Ratio `sigma_min / sigma_max` below which a zero counts as ill-conditioned.
const ILL_CONDITIONED: f64 = 1e-5;
/// Coefficients below this mark a restricted family as identically zero.
const ZERO_FAMILY_TOL: f64 = 1e-10;
const ROOT_DEDUP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOptions {
    pub seed: u64,
    pub n_samples: usize,
    pub n_starts: usize,
    pub newton: NewtonOptions,
    pub degree_budget: usize,
    /// Fraction of successful samples required for inclusion.
    pub success_threshold: f64,
    /// Random draws used to certify the generic rank of the linear part.
    pub rank_draws: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions::from(&Options::default())
    }
}

impl From<&Options> for AnalysisOptions {
    fn from(o: &Options) -> Self {
        AnalysisOptions {
            seed: o.seed,
            n_samples: o.samples,
            n_starts: o.starts,
            newton: NewtonOptions::default(),
            degree_budget: o.degree_budget,
            success_threshold: 0.75,
            rank_draws: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Included,
    NotIncluded,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mechanism {
    /// Generic surjective linear part.
    TheoremIft,
    /// Sampled regularity of the lowest-degree restricted forms.
    BmsRegularity,
    /// Elimination of matched copies, then the regularity test.
    LsReduction,
    /// Every equivariant into the component vanishes.
    Vanishing,
    /// `s(S) <= 0`.
    IndexFilter,
    /// `Fix_W(S) = 0`, so `Fix_V(S)` consists of zeros.
    FixTargetTrivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    DeltaGeqR,
    DeltaZero,
    DeltaIntermediate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseInfo {
    pub tag: CaseTag,
    pub delta: usize,
    pub r: usize,
    pub endo_dim: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SampleOutcome {
    /// Zeros found and all of them regular.
    Regular,
    /// No nonzero zero found on the unit sphere.
    NoRoots,
    /// Every zero has full rank but some are close to singular.
    IllConditioned,
    /// Some zero has a rank-deficient Jacobian.
    Irregular,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleRecord {
    pub roots: usize,
    pub irregular: usize,
    /// Zeros whose conditioning is above the ill-conditioning cutoff.
    pub well_conditioned: usize,
    /// Smallest `sigma_min / sigma_max` over the zeros found.
    pub min_conditioning: Option<f64>,
    pub outcome: SampleOutcome,
    /// Zeros of the unrestricted form found / irregular among them.
    pub global_roots: usize,
    pub global_irregular: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind")]
pub enum Evidence {
    None,
    Index,
    LinearRank {
        generic_rank: usize,
        target_rank: usize,
        draws: usize,
        fix_rank: usize,
    },
    Regularity {
        degree: usize,
        n_params: usize,
        samples: Vec<SampleRecord>,
        success_fraction: f64,
        samples_with_roots: usize,
        irregular_roots: usize,
        global_irregular_roots: usize,
    },
    Reduction {
        matched_copies: usize,
        reduced_dim_v: usize,
        reduced_dim_w: usize,
        linear: Box<Evidence>,
        reduced: Box<InclusionVerdict>,
    },
    Vanishing {
        kernel_v: usize,
        kernel_w: usize,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionVerdict {
    pub sigma: String,
    pub order: usize,
    pub dim_fix_v: usize,
    pub dim_fix_w: usize,
    pub index: i64,
    pub verdict: Verdict,
    pub mechanism: Mechanism,
    pub predicted_branch_dim: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub irr_dim: usize,
    pub multiplicity: usize,
    pub endo_dim: usize,
    pub delta: usize,
    pub case: Option<CaseTag>,
    pub vanishing: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub verdicts: Vec<InclusionVerdict>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GlobalVerdict {
    pub sigma: String,
    /// `s(S)` on the reduced problem, counting only components that do not vanish.
    pub index: i64,
    pub verdict: Verdict,
    pub mechanisms: Vec<Mechanism>,
    pub predicted_branch_dim: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Reductions {
    /// `dim Fix_V(G)` removed from `V`.
    pub trivial_v: usize,
    /// `dim Fix_W(G)` removed from `W`.
    pub trivial_w: usize,
    pub kernel_order: usize,
    pub quotient_order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub seed: u64,
    pub group: String,
    pub group_order: usize,
    pub dim_v: usize,
    pub dim_w: usize,
    pub reductions: Reductions,
    pub lattice: IsotropyLattice,
    pub components: Vec<ComponentReport>,
    pub verdicts: Vec<GlobalVerdict>,
    /// Every component of the reduced target vanishes.
    pub vanishing: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub main_theorem: Option<String>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn included(&self) -> Vec<&str> {
        self.verdicts.iter().filter(|v| v.verdict == Verdict::Included).map(|v| v.sigma.as_str()).collect()
    }

    pub fn verdict_for(&self, sigma: &str) -> Option<&GlobalVerdict> {
        self.verdicts.iter().find(|v| v.sigma == sigma)
    }
}

/// `V = Fix_V(G) + V'`, `W = Fix_W(G) + W'`.
#[derive(Debug, Clone)]
pub struct Stripped {
    pub v: Representation,
    pub w: Representation,
    pub p: usize,
    pub q: usize,
}

pub fn strip_trivial(v: &Representation, w: &Representation) -> Result<Stripped> {
    let tv = v.trivial_part()?;
    let tw = w.trivial_part()?;
    let v_red = v.restrict(&linalg::orthogonal_complement(&tv))?;
    let w_red = w.restrict(&linalg::orthogonal_complement(&tw))?;
    Ok(Stripped { v: v_red, w: w_red, p: tv.ncols(), q: tw.ncols() })
}

/// Case of one isotypic component `U^r` of the target.
pub fn classify_case(v: &Representation, comp: &IsotypicComponent) -> Result<CaseInfo> {
    let chi_u = comp.irreducible.character();
    let delta = char_inner(&v.character(), &chi_u)?;
    let r = comp.multiplicity;
    let e = comp.endo_dim;
    let tag_of = |d: usize| {
        if d >= r {
            CaseTag::DeltaGeqR
        } else if d == 0 {
            CaseTag::DeltaZero
        } else {
            CaseTag::DeltaIntermediate
        }
    };
    if e > 1 {
        if delta % e != 0 {
            return Err(Error::InternalMismatch(format!("delta {delta} not divisible by endo_dim {e}")));
        }
        if tag_of(delta) != tag_of(delta / e) {
            return Err(Error::EndoTypeAmbiguous { endo_dim: e });
        }
    }
    Ok(CaseInfo { tag: tag_of(delta), delta, r, endo_dim: e })
}

pub(crate) fn mix_seed(seed: u64, tag: &str) -> u64 {
    let mut h = seed ^ 0x9E37_79B9_7F4A_7C15;
    for b in tag.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3);
    }
    // splitmix64 finaliser
    h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    h ^ (h >> 31)
}

fn gaussian(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| StandardNormal.sample(rng)).collect()
}

fn unit(rng: &mut ChaCha8Rng, k: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_vec(gaussian(rng, k));
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

fn base_verdict(node: &IsotropyNode, dim_fix_w: usize, index: i64) -> InclusionVerdict {
    InclusionVerdict {
        sigma: node.name.clone(),
        order: node.order,
        dim_fix_v: node.dim_fix_v,
        dim_fix_w,
        index,
        verdict: Verdict::Inconclusive,
        mechanism: Mechanism::IndexFilter,
        predicted_branch_dim: None,
        reason: None,
        evidence: Evidence::None,
    }
}

/// Verdicts decided by the index alone, if any.
fn index_gate(node: &IsotropyNode, v: &Representation, w: &Representation) -> Result<(InclusionVerdict, bool)> {
    let sub = node.subgroup();
    let a = v.fix_dimension(&sub)?;
    let b = w.fix_dimension(&sub)?;
    let s = a as i64 - b as i64;
    let mut out = base_verdict(node, b, s);
    out.dim_fix_v = a;
    if s <= 0 {
        out.verdict = Verdict::NotIncluded;
        out.mechanism = Mechanism::IndexFilter;
        out.evidence = Evidence::Index;
        return Ok((out, true));
    }
    if b == 0 {
        out.verdict = Verdict::Included;
        out.mechanism = Mechanism::FixTargetTrivial;
        out.predicted_branch_dim = Some(s);
        return Ok((out, true));
    }
    Ok((out, false))
}

/// Case `delta >= r`: certify the generic rank of the linear part and apply
/// the implicit function theorem on each `Fix_V(S)`.
pub fn predict_case1(
    v: &Representation,
    w: &Representation,
    maximal: &[IsotropyNode],
    opts: &AnalysisOptions,
) -> Result<Vec<InclusionVerdict>> {
    let linear = equivariant_basis(v, w, 1)?;
    let target = w.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(opts.seed, "case1-rank"));
    let mut found = None;
    for draw in 1..=opts.rank_draws {
        if linear.is_empty() {
            break;
        }
        let t = gaussian(&mut rng, linear.len());
        let m = linear.combine(&t)?.coeffs().transpose();
        if linalg::rank(&m) == target {
            found = Some((m, draw));
            break;
        }
    }
    let Some((m, draws)) = found else {
        return Err(Error::GenericRankFailed { target, draws: opts.rank_draws });
    };
    let mut out = Vec::new();
    for node in maximal {
        let (mut verdict, decided) = index_gate(node, v, w)?;
        if decided {
            out.push(verdict);
            continue;
        }
        let sub = node.subgroup();
        let fix_rank = linalg::rank(&(w.fix_basis(&sub)?.transpose() * &m * v.fix_basis(&sub)?));
        verdict.verdict = Verdict::Included;
        verdict.mechanism = Mechanism::TheoremIft;
        verdict.predicted_branch_dim = Some(verdict.index);
        verdict.evidence = Evidence::LinearRank { generic_rank: target, target_rank: target, draws, fix_rank };
        if fix_rank != verdict.dim_fix_w {
            return Err(Error::InternalMismatch(format!(
                "linear part has rank {fix_rank} on Fix({}) but dim Fix_W is {}",
                node.name, verdict.dim_fix_w
            )));
        }
        out.push(verdict);
    }
    Ok(out)
}

/// Nonzero zeros of a homogeneous map on the unit sphere.
fn sphere_zeros(q: &HomogeneousMap, starts: &[DVector<f64>], opts: NewtonOptions) -> Vec<DVector<f64>> {
    let a = q.n_in();
    let b = q.n_out();
    let system = |y: &DVector<f64>| {
        let mut f = DVector::zeros(b + 1);
        f.rows_mut(0, b).copy_from(&q.evaluate(y));
        f[b] = 0.5 * (y.norm_squared() - 1.0);
        let mut j = DMatrix::zeros(b + 1, a);
        j.rows_mut(0, b).copy_from(&q.jacobian(y));
        j.row_mut(b).copy_from(&y.transpose());
        (f, j)
    };
    let found: Vec<DVector<f64>> = starts
        .iter()
        .filter_map(|s| {
            let r = newton::solve(system, s.clone(), opts);
            r.converged.then_some(r.x)
        })
        .collect();
    newton::dedup(found, ROOT_DEDUP)
}

/// `(irregular, conditioning)` of a zero.
fn classify_zero(q: &HomogeneousMap, y: &DVector<f64>) -> (bool, f64) {
    let b = q.n_out();
    if b == 0 {
        return (false, 1.0);
    }
    let j = q.jacobian(y);
    let sv = linalg::singular_values(&j);
    let top = sv.first().copied().unwrap_or(0.0);
    let irregular = linalg::rank_with(&j, RANK_REL_TOL) < b;
    let cond = if top > 0.0 && sv.len() >= b { sv[b - 1] / top } else { 0.0 };
    (irregular, cond)
}

fn run_sample(
    basis: &EquivariantBasis,
    restricted: &[HomogeneousMap],
    t: &[f64],
    starts: &[DVector<f64>],
    global_starts: &[DVector<f64>],
    opts: NewtonOptions,
) -> Result<SampleRecord> {
    let q = HomogeneousMap::combine(restricted, t)?;
    let zeros = sphere_zeros(&q, starts, opts);
    let mut irregular = 0;
    let mut well_conditioned = 0;
    let mut min_cond: Option<f64> = None;
    for y in &zeros {
        let (irr, cond) = classify_zero(&q, y);
        irregular += irr as usize;
        well_conditioned += (!irr && cond >= ILL_CONDITIONED) as usize;
        min_cond = Some(min_cond.map_or(cond, |m: f64| m.min(cond)));
    }
    let outcome = if zeros.is_empty() {
        SampleOutcome::NoRoots
    } else if irregular > 0 {
        SampleOutcome::Irregular
    } else if min_cond.unwrap_or(1.0) < ILL_CONDITIONED {
        SampleOutcome::IllConditioned
    } else {
        SampleOutcome::Regular
    };
    let full = basis.combine(t)?;
    let global = sphere_zeros(&full, global_starts, opts);
    let global_irregular = global.iter().filter(|y| classify_zero(&full, y).0).count();
    Ok(SampleRecord {
        roots: zeros.len(),
        irregular,
        well_conditioned,
        min_conditioning: min_cond,
        outcome,
        global_roots: global.len(),
        global_irregular,
    })
}

type SampleInput = (Vec<f64>, Vec<DVector<f64>>, Vec<DVector<f64>>);

/// Case `delta == 0` for one maximal isotropy subgroup: sample the
/// lowest-degree restricted form `Q^S_t` and test regularity on its zeros.
///
/// A draw succeeds when the zeros it finds are all regular (or it finds
/// none). Inclusion needs the success fraction to reach the threshold, no
/// rank-deficient zero in any draw, and zeros in at least one draw.
pub fn case2_regularity_test(
    v: &Representation,
    w: &Representation,
    node: &IsotropyNode,
    opts: &AnalysisOptions,
) -> Result<InclusionVerdict> {
    let (mut verdict, decided) = index_gate(node, v, w)?;
    if decided {
        return Ok(verdict);
    }
    verdict.mechanism = Mechanism::BmsRegularity;
    let d = match lowest_degree(v, w, opts.degree_budget) {
        Ok(d) => d,
        Err(Error::NoEquivariants { .. }) => {
            return Err(Error::DegreeCapExceeded { budget: opts.degree_budget });
        }
        Err(e) => return Err(e),
    };
    let basis = equivariant_basis(v, w, d)?;
    let sub: Subgroup = node.subgroup();
    let fam = restrict_to_fix(&basis, v, w, &sub)?;
    if fam.is_identically_zero(ZERO_FAMILY_TOL) {
        verdict.reason = Some(format!("NoDependence: Q^S vanishes identically at degree {d}"));
        return Ok(verdict);
    }

    let k = basis.len();
    let (a, n) = (fam.dim_in(), v.dim());
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(opts.seed, &format!("case2/{}", node.name)));
    // parameters, restricted starts and ambient starts for each draw
    let inputs: Vec<SampleInput> = (0..opts.n_samples)
        .map(|_| {
            let t = unit(&mut rng, k).as_slice().to_vec();
            let starts = (0..opts.n_starts).map(|_| unit(&mut rng, a)).collect();
            let global = (0..opts.n_starts).map(|_| unit(&mut rng, n)).collect();
            (t, starts, global)
        })
        .collect();
    let samples = inputs
        .par_iter()
        .map(|(t, s, g)| run_sample(&basis, &fam.maps, t, s, g, opts.newton))
        .collect::<Result<Vec<_>>>()?;

    let n_samples = samples.len().max(1);
    let successes = samples
        .iter()
        .filter(|s| matches!(s.outcome, SampleOutcome::Regular | SampleOutcome::NoRoots))
        .count();
    let with_roots = samples.iter().filter(|s| s.roots > 0).count();
    let irregular: usize = samples.iter().map(|s| s.irregular).sum();
    let global_irregular: usize = samples.iter().map(|s| s.global_irregular).sum();
    let success_fraction = successes as f64 / n_samples as f64;

    if success_fraction >= opts.success_threshold && irregular == 0 && with_roots > 0 {
        verdict.verdict = Verdict::Included;
        verdict.predicted_branch_dim = Some(verdict.index);
    } else if with_roots == 0 {
        verdict.reason = Some("no nonzero zeros of Q^S found in any draw".into());
    } else {
        let ill = samples.iter().filter(|s| s.outcome == SampleOutcome::IllConditioned).count();
        verdict.reason = Some(format!(
            "Q^S not regular on its zero set: {irregular} rank-deficient zeros, {ill} of {} draws with \
             near-singular zeros; success fraction {success_fraction:.3}",
            samples.len()
        ));
    }
    verdict.evidence = Evidence::Regularity {
        degree: d,
        n_params: k,
        samples,
        success_fraction,
        samples_with_roots: with_roots,
        irregular_roots: irregular,
        global_irregular_roots: global_irregular,
    };
    Ok(verdict)
}

/// Case `0 < delta < r`: split off `delta` copies of `U` that the linear part
/// hits, and test the reduced map `V'' -> W''` (no common irreducibles) as
/// in the second case.
pub fn case3_reduce(
    v: &Representation,
    w: &Representation,
    info: &CaseInfo,
    maximal: &[IsotropyNode],
    opts: &AnalysisOptions,
) -> Result<Vec<InclusionVerdict>> {
    if info.tag != CaseTag::DeltaIntermediate {
        return Err(Error::CaseMismatch(format!(
            "reduction needs 0 < delta < r, got delta {} and r {}",
            info.delta, info.r
        )));
    }
    let w_comps = w.isotypic_decompose(mix_seed(opts.seed, "case3-w"))?;
    if w_comps.len() != 1 {
        return Err(Error::CaseMismatch("reduction expects an isotypic target".into()));
    }
    let comp = &w_comps[0];
    let matched = info.delta / info.endo_dim;
    let n_w = w.dim();
    let hit = linalg::hstack(&comp.copies[..matched], n_w);
    let rest = linalg::hstack(&comp.copies[matched..], n_w);
    let w_hit = w.restrict(&hit)?;
    let w_rest = w.restrict(&rest)?;

    let chi_u = comp.irreducible.character();
    let v_comps = v.isotypic_decompose(mix_seed(opts.seed, "case3-v"))?;
    let mut u_part = None;
    for c in &v_comps {
        if char_inner(&c.irreducible.character(), &chi_u)? > 0 {
            u_part = Some(c.basis());
        }
    }
    let u_part = u_part.ok_or_else(|| Error::InternalMismatch("target type missing from V".into()))?;
    let v_rest = v.restrict(&linalg::orthogonal_complement(&u_part))?;

    let linear = predict_case1(v, &w_hit, maximal, opts)?;
    let mut out = Vec::new();
    for (node, lin) in maximal.iter().zip(linear) {
        let (mut verdict, decided) = index_gate(node, v, w)?;
        if decided {
            out.push(verdict);
            continue;
        }
        let reduced = case2_regularity_test(&v_rest, &w_rest, node, opts)?;
        if reduced.index != verdict.index {
            return Err(Error::InternalMismatch(format!(
                "reduced index {} differs from {} for {}",
                reduced.index, verdict.index, node.name
            )));
        }
        verdict.mechanism = Mechanism::LsReduction;
        verdict.verdict = match (lin.verdict, reduced.verdict) {
            (Verdict::NotIncluded, _) | (_, Verdict::NotIncluded) => Verdict::NotIncluded,
            (Verdict::Included, Verdict::Included) => Verdict::Included,
            _ => Verdict::Inconclusive,
        };
        if verdict.verdict == Verdict::Included {
            verdict.predicted_branch_dim = Some(verdict.index);
        }
        verdict.reason = reduced.reason.clone();
        verdict.evidence = Evidence::Reduction {
            matched_copies: matched,
            reduced_dim_v: v_rest.dim(),
            reduced_dim_w: w_rest.dim(),
            linear: Box::new(lin.evidence),
            reduced: Box::new(reduced),
        };
        out.push(verdict);
    }
    Ok(out)
}

/// Errors that make a component inconclusive instead of aborting.
fn soft_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::GenericRankFailed { .. } | Error::DegreeCapExceeded { .. } | Error::EndoTypeAmbiguous { .. }
    )
}

fn inconclusive_all(maximal: &[IsotropyNode], v: &Representation, w: &Representation, mechanism: Mechanism, why: &str) -> Result<Vec<InclusionVerdict>> {
    maximal
        .iter()
        .map(|node| {
            let (mut verdict, decided) = index_gate(node, v, w)?;
            if !decided {
                verdict.mechanism = mechanism;
                verdict.reason = Some(why.to_string());
            }
            Ok(verdict)
        })
        .collect()
}

fn analyze_component(
    v: &Representation,
    w_red: &Representation,
    comp: &IsotypicComponent,
    maximal: &[IsotropyNode],
    opts: &AnalysisOptions,
) -> Result<ComponentReport> {
    let w_i = w_red.restrict(&comp.basis())?;
    let chi_u = comp.irreducible.character();
    let delta = char_inner(&v.character(), &chi_u)?;
    let mut report = ComponentReport {
        irr_dim: comp.irr_dim,
        multiplicity: comp.multiplicity,
        endo_dim: comp.endo_dim,
        delta,
        case: None,
        vanishing: false,
        note: None,
        verdicts: Vec::new(),
    };

    let kv = v.kernel();
    let kw = w_i.kernel();
    if !kv.is_subset_of(&kw) {
        if delta != 0 {
            return Err(Error::InternalMismatch("kernel of V acts nontrivially on a type present in V".into()));
        }
        report.vanishing = true;
        report.note = Some(format!(
            "ker V (order {}) is not contained in ker W_i (order {}): every equivariant into this component is zero",
            kv.order(),
            kw.order()
        ));
        for node in maximal {
            let sub = node.subgroup();
            let a = v.fix_dimension(&sub)?;
            let b = w_i.fix_dimension(&sub)?;
            let mut verdict = base_verdict(node, b, a as i64 - b as i64);
            verdict.dim_fix_v = a;
            verdict.verdict = Verdict::Included;
            verdict.mechanism = Mechanism::Vanishing;
            verdict.predicted_branch_dim = Some(a as i64);
            verdict.evidence = Evidence::Vanishing { kernel_v: kv.order(), kernel_w: kw.order() };
            report.verdicts.push(verdict);
        }
        return Ok(report);
    }

    let info = match classify_case(v, comp) {
        Ok(i) => i,
        Err(e) if soft_failure(&e) => {
            report.note = Some(e.to_string());
            report.verdicts = inconclusive_all(maximal, v, &w_i, Mechanism::BmsRegularity, &e.to_string())?;
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.case = Some(info.tag);
    let result = match info.tag {
        CaseTag::DeltaGeqR => predict_case1(v, &w_i, maximal, opts),
        CaseTag::DeltaZero => maximal.iter().map(|n| case2_regularity_test(v, &w_i, n, opts)).collect(),
        CaseTag::DeltaIntermediate => case3_reduce(v, &w_i, &info, maximal, opts),
    };
    report.verdicts = match result {
        Ok(v) => v,
        Err(e) if soft_failure(&e) => {
            report.note = Some(e.to_string());
            let mech = match info.tag {
                CaseTag::DeltaGeqR => Mechanism::TheoremIft,
                CaseTag::DeltaZero => Mechanism::BmsRegularity,
                CaseTag::DeltaIntermediate => Mechanism::LsReduction,
            };
            inconclusive_all(maximal, v, &w_i, mech, &e.to_string())?
        }
        Err(e) => return Err(e),
    };
    Ok(report)
}

/// Combine component verdicts for one subgroup by conjunction, after the
/// index gate on the non-vanishing part of the target.
pub fn aggregate(index: i64, parts: &[&InclusionVerdict]) -> (Verdict, Vec<Mechanism>) {
    let mut mechanisms: Vec<Mechanism> = Vec::new();
    for p in parts {
        if !mechanisms.contains(&p.mechanism) {
            mechanisms.push(p.mechanism);
        }
    }
    if index <= 0 {
        return (Verdict::NotIncluded, vec![Mechanism::IndexFilter]);
    }
    let verdict = if parts.iter().any(|p| p.verdict == Verdict::NotIncluded) {
        Verdict::NotIncluded
    } else if parts.iter().all(|p| p.verdict == Verdict::Included) {
        Verdict::Included
    } else {
        Verdict::Inconclusive
    };
    (verdict, mechanisms)
}

pub fn analyze(name: &str, v: &Representation, w: &Representation, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    let lattice = build_lattice(v, w)?;
    let stripped = strip_trivial(v, w)?;
    let g = v.group();
    let kernel = stripped.v.kernel();
    let mut notes = Vec::new();
    if stripped.p > 0 || stripped.q > 0 {
        notes.push(format!(
            "removed trivial summands: {} from V, {} from W; verdicts refer to the reduced problem",
            stripped.p, stripped.q
        ));
    }
    if kernel.order() > 1 {
        notes.push(format!(
            "V has a kernel of order {}; every representation used factors through the quotient of order {}",
            kernel.order(),
            g.order() / kernel.order()
        ));
    }
    let reductions = Reductions {
        trivial_v: stripped.p,
        trivial_w: stripped.q,
        kernel_order: kernel.order(),
        quotient_order: g.order() / kernel.order(),
    };
    let mut report = AnalysisReport {
        name: name.to_string(),
        seed: opts.seed,
        group: g.name().to_string(),
        group_order: g.order(),
        dim_v: v.dim(),
        dim_w: w.dim(),
        reductions,
        lattice,
        components: Vec::new(),
        verdicts: Vec::new(),
        vanishing: false,
        main_theorem: None,
        notes,
    };
    if stripped.w.dim() == 0 {
        report.notes.push(format!(
            "W is trivial: every equivariant map has {} unconstrained invariant outputs and nothing else",
            stripped.q
        ));
        return Ok(report);
    }
    if stripped.v.dim() == 0 {
        report.notes.push("V is trivial: no isotropy subgroup other than G".into());
        return Ok(report);
    }

    let red_lattice = build_lattice(&stripped.v, &stripped.w)?;
    let maximal: Vec<IsotropyNode> = red_lattice.maximal().cloned().collect();
    let comps = stripped.w.isotypic_decompose(mix_seed(opts.seed, "target-split"))?;
    for comp in &comps {
        report.components.push(analyze_component(&stripped.v, &stripped.w, comp, &maximal, opts)?);
    }
    report.vanishing = report.components.iter().all(|c| c.vanishing);

    for (i, node) in maximal.iter().enumerate() {
        let sub = node.subgroup();
        let mut index = stripped.v.fix_dimension(&sub)? as i64;
        let mut parts = Vec::new();
        for (c, comp) in report.components.iter().zip(&comps) {
            let part = &c.verdicts[i];
            if !c.vanishing {
                let w_i = stripped.w.restrict(&comp.basis())?;
                index -= w_i.fix_dimension(&sub)? as i64;
            }
            parts.push(part);
        }
        let (verdict, mechanisms) = aggregate(index, &parts);
        report.verdicts.push(GlobalVerdict {
            sigma: node.name.clone(),
            index,
            verdict,
            mechanisms,
            predicted_branch_dim: (verdict == Verdict::Included).then_some(index),
        });
    }
    if report.components.iter().filter(|c| !c.vanishing).all(|c| c.case == Some(CaseTag::DeltaGeqR))
        && !report.vanishing
    {
        let dims: Vec<String> = report
            .verdicts
            .iter()
            .filter_map(|v| v.predicted_branch_dim.map(|d| format!("{} ({d})", v.sigma)))
            .collect();
        report.main_theorem = Some(format!(
            "every target type occurs in V at least as often as in W, so the linear terms are generically onto; \
             the zero set of a generic map contains branches {}",
            dims.join(", ")
        ));
    }
    Ok(report)
}

pub fn analyze_problem(p: &Problem) -> Result<AnalysisReport> {
    analyze(&p.spec.name, &p.v, &p.w, &AnalysisOptions::from(&p.spec.options))
}
