mod common;

use equistrat::catalog;
use equistrat::equivariants::{equivariant_basis, equivariant_dimension, lowest_degree, module_generators};

#[test]
fn d6_dimensions_by_degree() {
    let p = catalog::load(catalog::D6).unwrap();
    for d in 1..=4 {
        let oracle = common::dim_by_eigenvalues(&p.v, &p.w, d);
        assert_eq!(equivariant_dimension(&p.v, &p.w, d).unwrap(), oracle, "d = {d}");
        assert_eq!(equivariant_basis(&p.v, &p.w, d).unwrap().len(), oracle, "d = {d}");
    }
    assert_eq!(equivariant_dimension(&p.v, &p.w, 2).unwrap(), 3);
    assert_eq!(equivariant_dimension(&p.v, &p.w, 3).unwrap(), 0);
    let gens = module_generators(&p.v, &p.w, 4).unwrap();
    assert_eq!((gens.homogeneous, gens.from_lower, gens.new), (13, 8, 5));
}

#[test]
fn frobenius_cubic_dimensions() {
    let p = catalog::load(catalog::FROBENIUS_CASE2).unwrap();
    assert_eq!(p.group.order(), 104);
    assert_eq!(lowest_degree(&p.v, &p.w, 5).unwrap(), 3);
    assert_eq!(common::dim_by_eigenvalues(&p.v, &p.w, 3), 9);
    assert_eq!(equivariant_basis(&p.v, &p.w, 3).unwrap().len(), 9);

    let q = catalog::with_blocks(catalog::FROBENIUS_CASE2, &["orbit 7 x sign", "orbit 7 x sign"], &["orbit 10 x sign"])
        .unwrap();
    assert_eq!(common::dim_by_eigenvalues(&q.v, &q.w, 3), 6);
    assert_eq!(equivariant_basis(&q.v, &q.w, 3).unwrap().len(), 6);
}

#[test]
fn vanishing_has_no_equivariants() {
    let p = catalog::load(catalog::VANISHING).unwrap();
    for d in 0..=6 {
        assert_eq!(equivariant_dimension(&p.v, &p.w, d).unwrap(), 0);
        assert_eq!(equivariant_basis(&p.v, &p.w, d).unwrap().len(), 0);
    }
}
