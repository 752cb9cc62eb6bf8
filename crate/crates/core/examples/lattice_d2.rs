//! Isotropy lattice of D2 acting on the plane, with indices and DOT output.

use equistrat::catalog;
use equistrat::isotropy::build_lattice;

fn main() -> equistrat::Result<()> {
    let p = catalog::load(catalog::D2)?;
    let lattice = build_lattice(&p.v, &p.w)?;
    print!("{}", lattice.to_table());
    println!();
    print!("{}", lattice.to_dot());
    Ok(())
}
