//! Problems from spec files: an explicit-matrix D3 given with cos/sin
//! expressions, parsed, re-serialized and analyzed.

use equistrat::analysis::analyze_problem;
use equistrat::report::to_markdown;
use equistrat::spec::ProblemSpec;

const SRC: &str = r#"
name = "d3-explicit"

[group]
label = "D3"
generators = [
  { name = "r", matrix = [["cos(2*pi/3)", "-sin(2*pi/3)"], ["sin(2*pi/3)", "cos(2*pi/3)"]] },
  { name = "s", matrix = [[1, 0], [0, -1]] },
]

[v]

[w]
matrices = [[[1]], [[-1]]]
"#;

fn main() -> equistrat::Result<()> {
    let spec = ProblemSpec::from_toml(SRC)?;
    println!("{}", spec.to_toml()?);
    let report = analyze_problem(&spec.build()?)?;
    print!("{}", to_markdown(&report));
    Ok(())
}
