//! The three decision cases on F(13,4) x Z2: a linear case settled by the
//! implicit function theorem, a cubic case settled by regularity sampling,
//! and a case with repeated target copies handled by elimination.

use equistrat::analysis::analyze_problem;
use equistrat::catalog;

fn main() -> equistrat::Result<()> {
    for src in [catalog::FROBENIUS_CASE1, catalog::FROBENIUS_CASE2, catalog::FROBENIUS_CASE3] {
        let p = catalog::load(src)?;
        let report = analyze_problem(&p)?;
        println!("== {}", report.name);
        for c in &report.components {
            println!("  component dim {} x{}: case {:?}, delta {}", c.irr_dim, c.multiplicity, c.case, c.delta);
        }
        for v in &report.verdicts {
            println!(
                "  {:<10} s={} {:?} {:?} branch dim {:?}",
                v.sigma, v.index, v.verdict, v.mechanisms, v.predicted_branch_dim
            );
        }
    }
    Ok(())
}
