//! Problem files shipped with the crate (`specs/*.toml`).

use crate::error::Result;
use crate::spec::{Problem, ProblemSpec};

pub const D2: &str = include_str!("../specs/d2.toml");
pub const D6: &str = include_str!("../specs/d6.toml");
pub const Z2_REVERSIBLE: &str = include_str!("../specs/z2_reversible.toml");
pub const VANISHING: &str = include_str!("../specs/vanishing.toml");
pub const FROBENIUS_CASE1: &str = include_str!("../specs/frobenius_case1.toml");
pub const FROBENIUS_CASE2: &str = include_str!("../specs/frobenius_case2.toml");
pub const FROBENIUS_CASE3: &str = include_str!("../specs/frobenius_case3.toml");

/// `(file stem, contents)` for every bundled problem.
pub const ALL: &[(&str, &str)] = &[
    ("d2", D2),
    ("d6", D6),
    ("z2_reversible", Z2_REVERSIBLE),
    ("vanishing", VANISHING),
    ("frobenius_case1", FROBENIUS_CASE1),
    ("frobenius_case2", FROBENIUS_CASE2),
    ("frobenius_case3", FROBENIUS_CASE3),
];

pub fn load(src: &str) -> Result<Problem> {
    ProblemSpec::from_toml(src)?.build()
}

/// Same group and blocks as a bundled problem, with `v` and `w` replaced.
pub fn with_blocks(src: &str, v: &[&str], w: &[&str]) -> Result<Problem> {
    let mut spec = ProblemSpec::from_toml(src)?;
    spec.v.blocks = v.iter().map(|s| s.to_string()).collect();
    spec.w.blocks = w.iter().map(|s| s.to_string()).collect();
    spec.build()
}
