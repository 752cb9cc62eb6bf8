//! Numerical zero branches of reversible Z2-equivariant vector fields on R^3:
//! draw maps from the universal family and estimate branch dimensions.

use equistrat::analysis::analyze_problem;
use equistrat::catalog;
use equistrat::equivariants::UniversalMap;
use equistrat::probe::{self, ProbeOptions};
use equistrat::report::comparisons_to_table;

fn main() -> equistrat::Result<()> {
    let p = catalog::load(catalog::Z2_REVERSIBLE)?;
    let report = analyze_problem(&p)?;
    let degrees = probe::default_degrees(&p.v, &p.w, p.spec.options.degree_budget)?;
    let universal = UniversalMap::new(&p.v, &p.w, &degrees)?;
    println!("degrees {degrees:?}, {} parameters", universal.num_params());
    for seed in 0..3 {
        let t = probe::draw_parameters(&universal, seed);
        let f = universal.instantiate(&t)?;
        let opts = ProbeOptions { seed, ..ProbeOptions::from(&p.spec.options) };
        let samples = probe::probe_all(&f, &p.v, &p.w, &report.lattice.nodes, &opts)?;
        println!("-- seed {seed}");
        print!("{}", comparisons_to_table(&probe::verify_predictions(&report, &samples, &t)));
    }
    Ok(())
}
