//! The quadratic D6 example: restrict the lowest-degree equivariants to each
//! reflection's fixed plane and test regularity of the zero set over seeded
//! parameter draws.

use equistrat::analysis::{analyze_problem, Evidence};
use equistrat::catalog;
use equistrat::equivariants::{equivariant_basis, restrict_to_fix};

fn main() -> equistrat::Result<()> {
    let p = catalog::load(catalog::D6)?;
    let report = analyze_problem(&p)?;
    let basis = equivariant_basis(&p.v, &p.w, 2)?;
    for node in report.lattice.maximal() {
        let fam = restrict_to_fix(&basis, &p.v, &p.w, &node.subgroup())?;
        println!("{}: Fix_V {} -> Fix_W {}", node.name, fam.dim_in(), fam.dim_out());
        for (k, m) in fam.maps.iter().enumerate() {
            println!("  restricted generator {}: {}", k + 1, m.to_text("y").trim());
        }
    }
    for v in &report.verdicts {
        println!("{}: {:?} via {:?}", v.sigma, v.verdict, v.mechanisms);
    }
    for c in &report.components {
        for v in &c.verdicts {
            if let Evidence::Regularity { success_fraction, samples, .. } = &v.evidence {
                println!("{}: {} draws, success {success_fraction:.2}", v.sigma, samples.len());
            }
        }
    }
    Ok(())
}
