//! Equivariant polynomial maps for D6 acting on two copies of its standard
//! representation, mapping to the rotation-by-2 representation: dimensions by
//! the trace formula, explicit bases, and module generators.

use equistrat::catalog;
use equistrat::equivariants::{equivariant_basis, equivariant_dimension, module_generators};

fn main() -> equistrat::Result<()> {
    let p = catalog::load(catalog::D6)?;
    for d in 1..=4 {
        let gens = module_generators(&p.v, &p.w, d)?;
        println!(
            "degree {d}: trace formula {}, homogeneous {}, from lower degrees {}, new generators {}",
            equivariant_dimension(&p.v, &p.w, d)?,
            gens.homogeneous,
            gens.from_lower,
            gens.new
        );
    }
    print!("{}", equivariant_basis(&p.v, &p.w, 2)?.to_text());
    Ok(())
}
