//! Command implementations behind the `equistrat` binary. Each command
//! returns what it would print plus the files it would write, so callers can
//! decide where output goes.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::analysis::analyze_problem;
use crate::equivariants::{equivariant_basis, equivariant_dimension, module_generators, UniversalMap};
use crate::error::{Error, Result};
use crate::isotropy::build_lattice;
use crate::probe::{self, Comparison, ProbeOptions, ZeroBranchSample};
use crate::report;
use crate::spec::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Md,
    Dot,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "md" => Ok(Format::Md),
            "dot" => Ok(Format::Dot),
            _ => Err(Error::Spec(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Output {
    pub stdout: String,
    /// `(file name, contents)` pairs for `--out`.
    pub files: Vec<(String, String)>,
}

impl Output {
    pub fn write_files(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, contents) in &self.files {
            std::fs::write(dir.join(name), contents)?;
        }
        Ok(())
    }
}

fn unsupported(cmd: &str, f: Format) -> Error {
    Error::Spec(format!("`{cmd}` does not support format {f:?}"))
}

pub fn cmd_lattice(p: &Problem, format: Format) -> Result<Output> {
    let lattice = build_lattice(&p.v, &p.w)?;
    let json = report::to_json(&lattice)?;
    let dot = lattice.to_dot();
    let stdout = match format {
        Format::Text | Format::Md => lattice.to_table(),
        Format::Json => json.clone(),
        Format::Dot => dot.clone(),
    };
    Ok(Output { stdout, files: vec![("lattice.json".into(), json), ("lattice.dot".into(), dot)] })
}

#[derive(Debug, Clone, Serialize)]
pub struct DegreeRow {
    pub degree: usize,
    pub trace_formula: usize,
    pub basis: usize,
    pub new_generators: usize,
}

/// Dimension table up to the degree budget, or one degree with its basis.
pub fn cmd_equivariants(p: &Problem, degree: Option<usize>, format: Format) -> Result<Output> {
    let degrees: Vec<usize> = match degree {
        Some(d) => vec![d],
        None => (0..=p.spec.options.degree_budget).collect(),
    };
    let mut rows = Vec::new();
    let mut bases = String::new();
    for &d in &degrees {
        let trace = equivariant_dimension(&p.v, &p.w, d)?;
        let basis = equivariant_basis(&p.v, &p.w, d)?;
        if basis.len() != trace {
            return Err(Error::InternalMismatch(format!(
                "degree {d}: trace formula {trace}, basis {}",
                basis.len()
            )));
        }
        let gens = module_generators(&p.v, &p.w, d)?;
        rows.push(DegreeRow { degree: d, trace_formula: trace, basis: basis.len(), new_generators: gens.new });
        if degree.is_some() {
            bases.push_str(&basis.to_text());
        }
    }
    let json = report::to_json(&rows)?;
    let mut table = format!("{:>6} {:>6} {:>6} {:>6}\n", "degree", "trace", "basis", "new");
    for r in &rows {
        let trace = if r.trace_formula == 0 { "none".to_string() } else { r.trace_formula.to_string() };
        let _ = writeln!(table, "{:>6} {:>6} {:>6} {:>6}", r.degree, trace, r.basis, r.new_generators);
    }
    table.push_str(&bases);
    let stdout = match format {
        Format::Text | Format::Md => table.clone(),
        Format::Json => json.clone(),
        Format::Dot => return Err(unsupported("equivariants", format)),
    };
    Ok(Output { stdout, files: vec![("equivariants.json".into(), json), ("equivariants.txt".into(), table)] })
}

pub fn cmd_analyze(p: &Problem, format: Format) -> Result<Output> {
    let r = analyze_problem(p)?;
    let json = report::to_json(&r)?;
    let md = report::to_markdown(&r);
    let dot = r.lattice.to_dot();
    let stdout = match format {
        Format::Text | Format::Md => md.clone(),
        Format::Json => json.clone(),
        Format::Dot => dot.clone(),
    };
    Ok(Output {
        stdout,
        files: vec![("analysis.json".into(), json), ("analysis.md".into(), md), ("lattice.dot".into(), dot)],
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeRun {
    pub name: String,
    pub seed: u64,
    pub degrees: Vec<usize>,
    pub t: Vec<f64>,
    pub samples: Vec<ZeroBranchSample>,
    pub comparisons: Vec<Comparison>,
}

/// Draw `t` from the seed in the options (or use `t`), probe every isotropy
/// subgroup and compare with the predicted indices.
pub fn run_probe(p: &Problem, degree: Option<usize>, t: Option<Vec<f64>>) -> Result<ProbeRun> {
    let o = &p.spec.options;
    let report = analyze_problem(p)?;
    let degrees = match degree {
        Some(d) => probe::default_degrees(&p.v, &p.w, d)?.into_iter().filter(|&k| k <= d).collect(),
        None if !o.probe_degrees.is_empty() => o.probe_degrees.clone(),
        None => probe::default_degrees(&p.v, &p.w, o.degree_budget)?,
    };
    let universal = UniversalMap::new(&p.v, &p.w, &degrees)?;
    let t = t.unwrap_or_else(|| probe::draw_parameters(&universal, o.seed));
    let f = universal.instantiate(&t)?;
    let samples = probe::probe_all(&f, &p.v, &p.w, &report.lattice.nodes, &ProbeOptions::from(o))?;
    let comparisons = probe::verify_predictions(&report, &samples, &t);
    Ok(ProbeRun { name: p.spec.name.clone(), seed: o.seed, degrees, t, samples, comparisons })
}

pub fn cmd_probe(p: &Problem, degree: Option<usize>, format: Format) -> Result<Output> {
    let run = run_probe(p, degree, None)?;
    let csv = probe::samples_to_csv(&run.samples)?;
    let json = report::to_json(&run)?;
    let mut text = format!("{} seed {} degrees {:?}\n", run.name, run.seed, run.degrees);
    text.push_str(&report::comparisons_to_table(&run.comparisons));
    let stdout = match format {
        Format::Text | Format::Md => text,
        Format::Json => json.clone(),
        Format::Dot => return Err(unsupported("probe", format)),
    };
    Ok(Output { stdout, files: vec![("samples.csv".into(), csv), ("probe.json".into(), json)] })
}
