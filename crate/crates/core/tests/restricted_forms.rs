mod common;

use common::{match_family, DisplayedForm, D6_QUADRATIC, F_SIGMA1_CUBIC, F_SIGMA2_CUBIC};
use equistrat::catalog;
use equistrat::equivariants::{equivariant_basis, restrict_to_fix, restrict_with};
use equistrat::isotropy::build_lattice;
use equistrat::spec::Problem;
use nalgebra::DMatrix;

fn check(p: &Problem, sigma: &str, degree: usize, form: &DisplayedForm) {
    let lattice = build_lattice(&p.v, &p.w).unwrap();
    let node = lattice.find(sigma).unwrap();
    let basis = equivariant_basis(&p.v, &p.w, degree).unwrap();
    let fam = restrict_to_fix(&basis, &p.v, &p.w, &node.subgroup()).unwrap();
    assert_eq!(fam.dim_in(), form.n_vars);
    let m = match_family(&fam.maps, form, 7);
    assert!(m.forward < 1e-8, "{sigma}: forward residual {}", m.forward);
    assert!(m.backward < 1e-8, "{sigma}: backward residual {}", m.backward);
    assert!(m.jacobian < 1e-8, "{sigma}: jacobian residual {}", m.jacobian);
}

#[test]
fn d6_quadratic_on_both_reflection_planes() {
    let p = catalog::load(catalog::D6).unwrap();
    check(&p, "Z2(k)", 2, &D6_QUADRATIC);
    check(&p, "Z2(ks)", 2, &D6_QUADRATIC);
}

#[test]
fn d6_quadratic_in_real_part_coordinates() {
    // k conjugates both complex coordinates, so its fixed plane is spanned
    // by the real axes; in those coordinates the restricted family should be
    // exactly t1 u^2 + t2 u v + t3 v^2 up to reparametrization.
    let p = catalog::load(catalog::D6).unwrap();
    let basis = equivariant_basis(&p.v, &p.w, 2).unwrap();
    let mut bv = DMatrix::zeros(4, 2);
    bv[(0, 0)] = 1.0;
    bv[(2, 1)] = 1.0;
    let bw = DMatrix::from_column_slice(2, 1, &[1.0, 0.0]);
    let fam = restrict_with(&basis, &bv, &bw).unwrap();
    let m = match_family(&fam.maps, &D6_QUADRATIC, 11);
    assert!(m.forward < 1e-8 && m.backward < 1e-8 && m.jacobian < 1e-8);
}

#[test]
fn frobenius_cubic_forms_on_z4_planes() {
    let p = catalog::load(catalog::FROBENIUS_CASE2).unwrap();
    check(&p, "Z4(b)", 3, &F_SIGMA1_CUBIC);
    check(&p, "Z4(bg)", 3, &F_SIGMA2_CUBIC);
}

#[test]
fn wrong_degree_does_not_match() {
    let p = catalog::load(catalog::D6).unwrap();
    let lattice = build_lattice(&p.v, &p.w).unwrap();
    let node = lattice.find("Z2(k)").unwrap();
    let basis = equivariant_basis(&p.v, &p.w, 4).unwrap();
    let fam = restrict_to_fix(&basis, &p.v, &p.w, &node.subgroup()).unwrap();
    let m = match_family(&fam.maps, &D6_QUADRATIC, 3);
    assert!(m.backward > 1e-3);
}
