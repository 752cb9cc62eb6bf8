//! A Z2 x Z2 action where V and W have incompatible kernels: no nonzero
//! equivariant exists in any degree.

use equistrat::analysis::analyze_problem;
use equistrat::catalog;
use equistrat::equivariants::equivariant_dimension;

fn main() -> equistrat::Result<()> {
    let p = catalog::load(catalog::VANISHING)?;
    println!("|ker V| = {}, |ker W| = {}", p.v.kernel().order(), p.w.kernel().order());
    for d in 0..=6 {
        println!("degree {d}: {}", equivariant_dimension(&p.v, &p.w, d)?);
    }
    let report = analyze_problem(&p)?;
    println!("vanishing: {}", report.vanishing);
    for v in &report.verdicts {
        println!("{}: {:?} via {:?}", v.sigma, v.verdict, v.mechanisms);
    }
    Ok(())
}
