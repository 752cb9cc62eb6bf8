//! Problem files: a group, a source representation `V`, a target `W` and
//! analysis options, stored as TOML.
//!
//! ```toml
//! name = "d6"
//! [group]
//! builtin = "dihedral 6"
//! [v]
//! blocks = ["std 1", "std 1"]
//! [w]
//! blocks = ["std 2"]
//! ```
//!
//! Instead of `builtin`, a group may list `generators`, each with a `name`
//! and a `matrix` whose entries are numbers or strings such as
//! `"cos(2*pi/6)"`. Representations then give `matrices`, one per
//! generator, in the same order.

pub mod builtin;
pub mod expr;

use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{generate_group, GroupTable, DEFAULT_MAX_ORDER, ELEMENT_TOL};
use crate::representation::Representation;
use builtin::BuiltinGroup;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Num(f64),
    Expr(String),
}

impl Entry {
    pub fn value(&self) -> Result<f64> {
        match self {
            Entry::Num(v) => Ok(*v),
            Entry::Expr(s) => expr::eval(s),
        }
    }
}

pub type MatrixSpec = Vec<Vec<Entry>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub matrix: MatrixSpec,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    /// Display name of the whole group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Overrides the default generator names of a builtin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub matrices: Vec<MatrixSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    pub seed: u64,
    /// Parameter draws in the regularity test.
    pub samples: usize,
    /// Newton starts per draw.
    pub starts: usize,
    /// Highest degree searched for lowest-degree equivariants.
    pub degree_budget: usize,
    /// Degrees of the universal map used by the probe; empty means the
    /// nonzero degrees up to `lowest + 2`.
    pub probe_degrees: Vec<usize>,
    pub probe_starts: usize,
    pub probe_radius: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 42,
            samples: 32,
            starts: 64,
            degree_budget: 6,
            probe_degrees: Vec::new(),
            probe_starts: 256,
            probe_radius: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub group: GroupSpec,
    pub v: RepSpec,
    pub w: RepSpec,
    #[serde(default)]
    pub options: Options,
}

/// A resolved problem: the group table and both representations.
#[derive(Debug, Clone)]
pub struct Problem {
    pub spec: ProblemSpec,
    pub group: Arc<GroupTable>,
    pub v: Representation,
    pub w: Representation,
}

fn matrix(spec: &MatrixSpec) -> Result<DMatrix<f64>> {
    let n = spec.len();
    if n == 0 || spec.iter().any(|row| row.len() != n) {
        return Err(Error::Spec("matrices must be square and nonempty".into()));
    }
    let mut m = DMatrix::zeros(n, n);
    for (i, row) in spec.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            m[(i, j)] = e.value()?;
        }
    }
    Ok(m)
}

impl ProblemSpec {
    pub fn from_toml(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn build(&self) -> Result<Problem> {
        let g = &self.group;
        let (group, v, w) = match (&g.builtin, g.generators.is_empty()) {
            (Some(directive), true) => {
                let bg = BuiltinGroup::parse(directive, g.names.as_deref())?;
                let defining = bg.blocks(&bg.defining_blocks())?;
                let gens: Vec<(String, DMatrix<f64>)> = bg.names.iter().cloned().zip(defining).collect();
                let label = g.label.clone().unwrap_or_else(|| bg.label());
                let group = generate_group(&label, &gens, ELEMENT_TOL, DEFAULT_MAX_ORDER)?;
                let rep = |r: &RepSpec, which: &str| -> Result<Representation> {
                    if !r.matrices.is_empty() {
                        let mats = r.matrices.iter().map(matrix).collect::<Result<Vec<_>>>()?;
                        return Representation::from_generator_images(group.clone(), &mats);
                    }
                    if r.blocks.is_empty() {
                        return Err(Error::Spec(format!("representation `{which}` is empty")));
                    }
                    Representation::from_generator_images(group.clone(), &bg.blocks(&r.blocks)?)
                };
                let v = rep(&self.v, "v")?;
                let w = rep(&self.w, "w")?;
                (group, v, w)
            }
            (None, false) => {
                let gens = g
                    .generators
                    .iter()
                    .map(|s| Ok((s.name.clone(), matrix(&s.matrix)?)))
                    .collect::<Result<Vec<_>>>()?;
                let label = g.label.clone().unwrap_or_else(|| "G".into());
                let group = generate_group(&label, &gens, ELEMENT_TOL, DEFAULT_MAX_ORDER)?;
                let rep = |r: &RepSpec, which: &str| -> Result<Representation> {
                    if !r.blocks.is_empty() {
                        return Err(Error::Spec(format!(
                            "representation `{which}`: named blocks need a builtin group"
                        )));
                    }
                    if r.matrices.is_empty() {
                        return Ok(Representation::defining(group.clone()));
                    }
                    let mats = r.matrices.iter().map(matrix).collect::<Result<Vec<_>>>()?;
                    Representation::from_generator_images(group.clone(), &mats)
                };
                let v = rep(&self.v, "v")?;
                let w = rep(&self.w, "w")?;
                (group, v, w)
            }
            _ => return Err(Error::Spec("group needs exactly one of `builtin` or `generators`".into())),
        };
        Ok(Problem { spec: self.clone(), group, v, w })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXPLICIT: &str = r#"
name = "d3-explicit"
[group]
label = "D3"
generators = [
  { name = "k", matrix = [[1, 0], [0, -1]] },
  { name = "s", matrix = [["cos(2*pi/3)", "-sin(2*pi/3)"], ["sin(2*pi/3)", "cos(2*pi/3)"]] },
]
[v]
[w]
matrices = [[[-1]], [[1]]]
"#;

    #[test]
    fn explicit_generators() {
        let spec = ProblemSpec::from_toml(EXPLICIT).unwrap();
        let p = spec.build().unwrap();
        assert_eq!(p.group.order(), 6);
        assert_eq!(p.v.dim(), 2);
        assert_eq!(p.w.dim(), 1);
    }

    #[test]
    fn round_trip_is_idempotent() {
        let spec = ProblemSpec::from_toml(EXPLICIT).unwrap();
        let once = spec.to_toml().unwrap();
        let again = ProblemSpec::from_toml(&once).unwrap();
        assert_eq!(again.to_toml().unwrap(), once);
        assert_eq!(again.build().unwrap().group.order(), 6);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(ProblemSpec::from_toml("name = 'x'\nbogus = 1\n[group]\n[v]\n[w]\n").is_err());
    }
}
