//! The order-104 group F(13,4) x Z2 built from realified orbit blocks, its
//! conjugacy classes and the isotropy lattice of V1 x V2 -> V2.

use equistrat::catalog;
use equistrat::isotropy::build_lattice;

fn main() -> equistrat::Result<()> {
    let p = catalog::load(catalog::FROBENIUS_CASE1)?;
    let g = &p.group;
    println!("{}: order {}, {} conjugacy classes", g.name(), g.order(), g.num_classes());
    println!("class sizes {:?}", g.class_sizes());
    println!("dim V = {}, dim W = {}, V faithful: {}", p.v.dim(), p.w.dim(), p.v.is_faithful());
    let lattice = build_lattice(&p.v, &p.w)?;
    print!("{}", lattice.to_table());
    for n in lattice.maximal() {
        println!("maximal {} with s = {}", n.name, n.index);
    }
    Ok(())
}
