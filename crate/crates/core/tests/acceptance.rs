//! Exit gate: one line per criterion, nonzero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};

use common::{match_family, D6_QUADRATIC, F_SIGMA1_CUBIC, F_SIGMA2_CUBIC};
use equistrat::analysis::{analyze, analyze_problem, AnalysisOptions, Evidence, Mechanism, Verdict};
use equistrat::catalog;
use equistrat::equivariants::{
    equivariance_residual, equivariant_basis, equivariant_dimension, module_generators, restrict_to_fix, UniversalMap,
};
use equistrat::isotropy::build_lattice;
use equistrat::probe::{self, MatchStatus, ProbeOptions};
use equistrat::report::to_json;
use equistrat::representation::Representation;
use equistrat::spec::Problem;
use nalgebra::{DMatrix, DVector};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn load(src: &str) -> Problem {
    catalog::load(src).unwrap()
}

fn indices(p: &Problem) -> Vec<(String, i64, usize, usize)> {
    build_lattice(&p.v, &p.w)
        .unwrap()
        .nodes
        .iter()
        .map(|n| (n.name.clone(), n.index, n.dim_fix_v, n.dim_fix_w))
        .collect()
}

fn criterion_1() -> Outcome {
    let d2: Vec<i64> = indices(&load(catalog::D2)).iter().map(|n| n.1).collect();
    ensure(d2 == [0, 0, 1, 1], format!("D2 indices {d2:?}"))?;
    let d6: Vec<i64> = indices(&load(catalog::D6)).iter().map(|n| n.1).collect();
    ensure(d6 == [0, 1, 1, 2], format!("D6 indices {d6:?}"))?;
    let f = indices(&load(catalog::FROBENIUS_CASE1));
    let want = [("Z4(b)", 1, 1), ("Z4(bg)", 1, 1), ("Z2(b^2)", 2, 2), ("Z2(b^2g)", 2, 2)];
    for (name, s, fix_w) in want {
        let n = f.iter().find(|n| n.0 == name).ok_or(format!("{name} missing"))?;
        ensure(n.1 == s && n.3 == fix_w, format!("{name}: s = {}, dim Fix_W = {}", n.1, n.3))?;
    }
    Ok(format!("D2 {d2:?}, D6 {d6:?}, F s = (1,1,2,2), fixed dims (1,1,2,2)"))
}

fn both_routes(v: &Representation, w: &Representation, d: usize, want: usize, what: &str) -> Result<(), String> {
    let trace = equivariant_dimension(v, w, d).unwrap();
    let basis = equivariant_basis(v, w, d).unwrap().len();
    let oracle = common::dim_by_eigenvalues(v, w, d);
    ensure(
        trace == want && basis == want && oracle == want,
        format!("{what} d={d}: trace {trace}, basis {basis}, eigenvalue oracle {oracle}, expected {want}"),
    )
}

fn criterion_2() -> Outcome {
    let d6 = load(catalog::D6);
    both_routes(&d6.v, &d6.w, 2, 3, "D6")?;
    both_routes(&d6.v, &d6.w, 3, 0, "D6")?;
    // the quartic count is the number of generators beyond the products of
    // invariants with lower-degree equivariants; homogeneous maps number 13
    both_routes(&d6.v, &d6.w, 4, 13, "D6 homogeneous")?;
    let gens = module_generators(&d6.v, &d6.w, 4).unwrap();
    ensure(gens.new == 5, format!("D6 d=4 new generators {}", gens.new))?;
    let f = load(catalog::FROBENIUS_CASE2);
    both_routes(&f.v, &f.w, 3, 9, "C(V1xV2, V3)")?;
    let g = catalog::with_blocks(catalog::FROBENIUS_CASE2, &["orbit 7 x sign", "orbit 7 x sign"], &["orbit 10 x sign"])
        .unwrap();
    both_routes(&g.v, &g.w, 3, 6, "C(V3^2, V2)")?;
    let d2 = load(catalog::D2);
    both_routes(&d2.v, &d2.w, 1, 1, "D2")?;
    Ok("D6 3/0/5 (13 homogeneous), F 9 and 6, D2 1; trace and basis agree".into())
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for (src, sigma, degree, form) in [
        (catalog::D6, "Z2(k)", 2, &D6_QUADRATIC),
        (catalog::FROBENIUS_CASE2, "Z4(b)", 3, &F_SIGMA1_CUBIC),
        (catalog::FROBENIUS_CASE2, "Z4(bg)", 3, &F_SIGMA2_CUBIC),
    ] {
        let p = load(src);
        let lattice = build_lattice(&p.v, &p.w).unwrap();
        let node = lattice.find(sigma).unwrap();
        let basis = equivariant_basis(&p.v, &p.w, degree).unwrap();
        let fam = restrict_to_fix(&basis, &p.v, &p.w, &node.subgroup()).unwrap();
        let m = match_family(&fam.maps, form, 7);
        let r = m.forward.max(m.backward).max(m.jacobian);
        ensure(r < 1e-8, format!("{sigma}: residual {r:e}"))?;
        worst = worst.max(r);
    }
    Ok(format!("max residual {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let mut failures = Vec::new();
    let d6 = analyze_problem(&load(catalog::D6)).unwrap();
    if d6.included() != ["Z2(k)", "Z2(ks)"] {
        failures.push(format!("D6 included {:?}", d6.included()));
    }
    for c in &d6.components {
        for v in &c.verdicts {
            match &v.evidence {
                Evidence::Regularity { samples, success_fraction, .. } => {
                    if v.mechanism != Mechanism::BmsRegularity || samples.len() != 32 || *success_fraction < 0.75 {
                        failures.push(format!("D6 {}: {} samples, success {success_fraction}", v.sigma, samples.len()));
                    }
                }
                _ => failures.push(format!("D6 {}: mechanism {:?}", v.sigma, v.mechanism)),
            }
        }
    }
    let f1 = analyze_problem(&load(catalog::FROBENIUS_CASE1)).unwrap();
    if f1.included() != ["Z4(b)", "Z4(bg)", "Z2(b^2g)"]
        || f1.verdicts.iter().any(|v| v.mechanisms != [Mechanism::TheoremIft])
    {
        failures.push(format!("case 1 included {:?}", f1.included()));
    }
    for src in [catalog::FROBENIUS_CASE2, catalog::FROBENIUS_CASE3] {
        let r = analyze_problem(&load(src)).unwrap();
        for (sigma, dim) in [("Z4(b)", 1), ("Z4(bg)", 1), ("Z2(b^2g)", 2)] {
            match r.verdict_for(sigma) {
                Some(v) if v.verdict == Verdict::Included && v.predicted_branch_dim == Some(dim) => {}
                Some(v) => failures.push(format!("{} {sigma}: {:?} dim {:?}", r.name, v.verdict, v.predicted_branch_dim)),
                None => failures.push(format!("{} {sigma}: no verdict", r.name)),
            }
        }
        if r.included().len() != 3 {
            failures.push(format!("{} included {:?}", r.name, r.included()));
        }
    }
    if failures.is_empty() {
        Ok("D6 {Z2(k), Z2(ks)}; case 1 IFT x3; cases 2 and 3 dims (1,1,2)".into())
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_5() -> Outcome {
    let p = load(catalog::VANISHING);
    ensure(p.v.kernel().order() > 1 && !p.v.kernel().is_subset_of(&p.w.kernel()), "kernel hypothesis")?;
    for d in 0..=6 {
        let n = equivariant_dimension(&p.v, &p.w, d).unwrap();
        ensure(n == 0, format!("degree {d}: {n}"))?;
    }
    let r = analyze_problem(&p).unwrap();
    ensure(r.vanishing, "report not vanishing")?;
    ensure(
        r.verdicts.iter().all(|v| v.mechanisms.contains(&Mechanism::Vanishing)),
        "verdicts without the vanishing mechanism",
    )?;
    Ok("dimension 0 for d <= 6, report vanishing".into())
}

fn criterion_6() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (src, sigmas) in [
        (catalog::D2, &["Z2(s)"][..]),
        (catalog::Z2_REVERSIBLE, &["Z2"][..]),
        (catalog::D6, &["Z2(k)", "Z2(ks)"][..]),
    ] {
        let p = load(src);
        let report = analyze_problem(&p).unwrap();
        let degrees = probe::default_degrees(&p.v, &p.w, p.spec.options.degree_budget).unwrap();
        let u = UniversalMap::new(&p.v, &p.w, &degrees).unwrap();
        let mut matches = vec![0usize; sigmas.len()];
        let mut flagged = vec![Vec::new(); sigmas.len()];
        for seed in 0..10u64 {
            let t = probe::draw_parameters(&u, seed);
            let f = u.instantiate(&t).unwrap();
            let opts = ProbeOptions { seed, ..ProbeOptions::from(&p.spec.options) };
            let nodes: Vec<_> = report.lattice.nodes.iter().filter(|n| sigmas.contains(&n.name.as_str())).cloned().collect();
            let samples = probe::probe_all(&f, &p.v, &p.w, &nodes, &opts).unwrap();
            for c in probe::verify_predictions(&report, &samples, &t) {
                let i = sigmas.iter().position(|s| *s == c.sigma).unwrap();
                if c.status == MatchStatus::Match {
                    matches[i] += 1;
                } else {
                    flagged[i].push(format!("seed {seed} {:?}", c.status));
                }
            }
        }
        for (i, s) in sigmas.iter().enumerate() {
            ok &= matches[i] >= 9;
            let extra = if flagged[i].is_empty() { String::new() } else { format!(" [{}]", flagged[i].join(", ")) };
            lines.push(format!("{} {s} {}/10{extra}", p.spec.name, matches[i]));
        }
    }
    if ok {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

fn criterion_7() -> Outcome {
    // equivariance
    let mut worst: f64 = 0.0;
    for (_, src) in catalog::ALL {
        let p = load(src);
        for d in 1..=3 {
            let basis = equivariant_basis(&p.v, &p.w, d).unwrap();
            if basis.is_empty() {
                continue;
            }
            let t: Vec<f64> = (0..basis.len()).map(|k| ((k as f64) * 1.3).cos()).collect();
            let x = DVector::from_fn(p.v.dim(), |i, _| ((i as f64) * 0.7 + 0.2).sin());
            worst = worst.max(equivariance_residual(&basis.combine(&t).unwrap(), &p.v, &p.w, &x));
        }
    }
    ensure(worst < 1e-8, format!("equivariance residual {worst:e}"))?;

    // fixed dimensions
    let mut checked = 0;
    for (_, src) in catalog::ALL {
        let p = load(src);
        for sub in p.group.enumerate_subgroups() {
            for rep in [&p.v, &p.w] {
                let n = sub.order() as f64;
                let chi: f64 = sub.elements.iter().map(|&h| rep.matrix(h).trace()).sum::<f64>() / n;
                let mut proj = DMatrix::zeros(rep.dim(), rep.dim());
                for &h in &sub.elements {
                    proj += rep.matrix(h);
                }
                proj /= n;
                let rank = proj.svd(false, false).singular_values.iter().filter(|s| **s > 1e-8).count();
                let got = rep.fix_dimension(&sub).unwrap();
                ensure(chi.round() as usize == rank && got == rank, format!("fix dims {chi} {rank} {got}"))?;
                checked += 1;
            }
        }
    }

    // jacobians
    let mut jac_err: f64 = 0.0;
    for (_, src) in catalog::ALL {
        let p = load(src);
        let Ok(degrees) = probe::default_degrees(&p.v, &p.w, 4) else { continue };
        let u = UniversalMap::new(&p.v, &p.w, &degrees).unwrap();
        let f = u.instantiate(&probe::draw_parameters(&u, 9)).unwrap();
        let x = DVector::from_fn(p.v.dim(), |i, _| ((i as f64) * 0.9 + 0.4).cos() * 0.5);
        let j = f.jacobian(&x);
        for c in 0..x.len() {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[c] += 1e-6;
            xm[c] -= 1e-6;
            let col = (f.evaluate(&xp) - f.evaluate(&xm)) / 2e-6;
            jac_err = jac_err.max((j.column(c) - col).amax() / j.amax().max(1.0));
        }
    }
    ensure(jac_err < 1e-6, format!("jacobian error {jac_err:e}"))?;

    // aggregation over a two-component target
    let v = ["orbit 1 x sign", "orbit 10 x sign", "orbit 10 x sign"];
    let whole = catalog::with_blocks(catalog::FROBENIUS_CASE1, &v, &["orbit 10 x sign", "orbit 7 x sign"]).unwrap();
    let opts = AnalysisOptions::from(&whole.spec.options);
    let r = analyze("whole", &whole.v, &whole.w, &opts).unwrap();
    let parts: Vec<_> = ["orbit 10 x sign", "orbit 7 x sign"]
        .iter()
        .map(|w| {
            let p = catalog::with_blocks(catalog::FROBENIUS_CASE1, &v, &[w]).unwrap();
            analyze("part", &p.v, &p.w, &opts).unwrap()
        })
        .collect();
    for g in &r.verdicts {
        let all_included = parts.iter().all(|p| {
            p.components[0].verdicts.iter().any(|v| v.sigma == g.sigma && v.verdict == Verdict::Included)
        });
        let expect = g.index > 0 && all_included;
        ensure((g.verdict == Verdict::Included) == expect, format!("aggregation at {}", g.sigma))?;
    }

    // determinism
    let d6 = load(catalog::D6);
    let a = to_json(&analyze_problem(&d6).unwrap()).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| to_json(&analyze_problem(&d6).unwrap()).unwrap());
    ensure(a == b, "analysis JSON differs between runs")?;
    let p1 = to_json(&equistrat::cli::run_probe(&d6, None, None).unwrap()).unwrap();
    let p2 = pool.install(|| to_json(&equistrat::cli::run_probe(&d6, None, None).unwrap()).unwrap());
    ensure(p1 == p2, "probe JSON differs between runs")?;

    Ok(format!(
        "equivariance {worst:.1e}, {checked} fix-dim checks, jacobian {jac_err:.1e}, aggregation, determinism"
    ))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 lattice and index reproduction", criterion_1),
        ("2 equivariant dimensions", criterion_2),
        ("3 restricted forms", criterion_3),
        ("4 verdict reproduction", criterion_4),
        ("5 vanishing", criterion_5),
        ("6 probe dimension match", criterion_6),
        ("7 property suites", criterion_7),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("acceptance {name}: PASS ({detail})"),
            Err(detail) => {
                failed += 1;
                println!("acceptance {name}: FAIL ({detail})");
            }
        }
    }
    println!("acceptance: {} of 7 criteria passed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
