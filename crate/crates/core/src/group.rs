//! Finite matrix groups: closure from orthogonal generators, Cayley table,
//! conjugacy classes and subgroup enumeration.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::max_abs;

/// Entrywise tolerance for identifying two group elements.
pub const ELEMENT_TOL: f64 = 1e-9;
/// Default cap on the group order during closure.
pub const DEFAULT_MAX_ORDER: usize = 2000;

const HASH_GRID: f64 = 1e-6;

/// A finite group stored as its multiplication table, together with the
/// defining matrices it was generated from.
#[derive(Debug, Clone)]
pub struct GroupTable {
    name: String,
    gen_names: Vec<String>,
    gen_elements: Vec<usize>,
    matrices: Vec<DMatrix<f64>>,
    words: Vec<Vec<usize>>,
    mult: Vec<u32>,
    inv: Vec<usize>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    elem_order: Vec<usize>,
}

/// A subgroup as a sorted list of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subgroup {
    pub elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Subgroup { elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }
}

/// A conjugacy class of subgroups with its lexicographically least member
/// as representative.
#[derive(Debug, Clone)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    pub members: Vec<Subgroup>,
}

fn hash_key(m: &DMatrix<f64>) -> Vec<i64> {
    m.iter().map(|v| (v / HASH_GRID).round() as i64).collect()
}

/// Close a set of named orthogonal generators under multiplication.
pub fn generate_group(
    name: &str,
    generators: &[(String, DMatrix<f64>)],
    tol: f64,
    max_order: usize,
) -> Result<Arc<GroupTable>> {
    if generators.is_empty() {
        return Err(Error::Spec("a group needs at least one generator".into()));
    }
    let n = generators[0].1.nrows();
    for (gname, m) in generators {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::ShapeMismatch);
        }
        let residual = max_abs(&(m.transpose() * m - DMatrix::identity(n, n)));
        if residual > tol.max(1e-9) {
            return Err(Error::NotOrthogonal { name: gname.clone(), residual });
        }
    }
    let ngen = generators.len();
    let mut matrices = vec![DMatrix::identity(n, n)];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut index: HashMap<Vec<i64>, usize> = HashMap::new();
    index.insert(hash_key(&matrices[0]), 0);
    let mut right: Vec<Vec<usize>> = Vec::new();

    let lookup = |matrices: &Vec<DMatrix<f64>>, index: &HashMap<Vec<i64>, usize>, m: &DMatrix<f64>| {
        if let Some(&i) = index.get(&hash_key(m)) {
            if max_abs(&(&matrices[i] - m)) <= tol {
                return Some(i);
            }
        }
        matrices.iter().position(|x| max_abs(&(x - m)) <= tol)
    };

    let mut head = 0;
    while head < matrices.len() {
        let mut row = Vec::with_capacity(ngen);
        for (s, (_, gm)) in generators.iter().enumerate() {
            let prod = &matrices[head] * gm;
            let idx = match lookup(&matrices, &index, &prod) {
                Some(i) => i,
                None => {
                    if matrices.len() >= max_order {
                        return Err(Error::OrderExceeded { cap: max_order });
                    }
                    let mut w = words[head].clone();
                    w.push(s);
                    index.insert(hash_key(&prod), matrices.len());
                    matrices.push(prod);
                    words.push(w);
                    matrices.len() - 1
                }
            };
            row.push(idx);
        }
        right.push(row);
        head += 1;
    }

    let order = matrices.len();
    let mut mult = vec![0u32; order * order];
    for g in 0..order {
        for h in 0..order {
            let mut cur = g;
            for &s in &words[h] {
                cur = right[cur][s];
            }
            mult[g * order + h] = cur as u32;
        }
    }
    let mut inv = vec![0; order];
    for g in 0..order {
        inv[g] = (0..order).find(|&h| mult[g * order + h] == 0).ok_or_else(|| {
            Error::InternalMismatch("element without inverse in Cayley table".into())
        })?;
    }
    let gen_elements = (0..ngen).map(|s| right[0][s]).collect();

    let mut table = GroupTable {
        name: name.to_string(),
        gen_names: generators.iter().map(|(n, _)| n.clone()).collect(),
        gen_elements,
        matrices,
        words,
        mult,
        inv,
        classes: Vec::new(),
        class_of: vec![usize::MAX; order],
        elem_order: vec![0; order],
    };
    table.build_classes();
    for g in 0..order {
        let mut k = 1;
        let mut cur = g;
        while cur != 0 {
            cur = table.mul(cur, g);
            k += 1;
        }
        table.elem_order[g] = k;
    }
    Ok(Arc::new(table))
}

impl GroupTable {
    fn build_classes(&mut self) {
        let order = self.order();
        for g in 0..order {
            if self.class_of[g] != usize::MAX {
                continue;
            }
            let cls: BTreeSet<usize> = (0..order).map(|x| self.conjugate(x, g)).collect();
            let id = self.classes.len();
            for &h in &cls {
                self.class_of[h] = id;
            }
            self.classes.push(cls.into_iter().collect());
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    pub fn defining_dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.gen_names
    }

    /// Element indices of the generators, in declaration order.
    pub fn generator_elements(&self) -> &[usize] {
        &self.gen_elements
    }

    /// Defining matrix of element `g`.
    pub fn matrix(&self, g: usize) -> &DMatrix<f64> {
        &self.matrices[g]
    }

    /// Shortest word (generator indices) found by breadth-first closure.
    pub fn word(&self, g: usize) -> &[usize] {
        &self.words[g]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order() + b] as usize
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inv[g]
    }

    /// `x g x^-1`.
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inv[x])
    }

    pub fn power(&self, g: usize, k: usize) -> usize {
        let mut cur = 0;
        for _ in 0..k {
            cur = self.mul(cur, g);
        }
        cur
    }

    pub fn element_order(&self, g: usize) -> usize {
        self.elem_order[g]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    /// Human readable word, runs collapsed to powers: `b^2g`.
    pub fn element_name(&self, g: usize) -> String {
        let w = &self.words[g];
        if w.is_empty() {
            return "e".into();
        }
        let sep = if self.gen_names.iter().all(|n| n.chars().count() == 1) { "" } else { "*" };
        let mut parts = Vec::new();
        let mut i = 0;
        while i < w.len() {
            let mut j = i;
            while j < w.len() && w[j] == w[i] {
                j += 1;
            }
            let run = j - i;
            let base = &self.gen_names[w[i]];
            parts.push(if run == 1 { base.clone() } else { format!("{base}^{run}") });
            i = j;
        }
        parts.join(sep)
    }

    /// Subgroup generated by the given elements.
    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        self.closure_from(&[0], gens)
    }

    fn closure_from(&self, seed: &[usize], gens: &[usize]) -> Subgroup {
        let order = self.order();
        let mut member = vec![false; order];
        let mut list = Vec::new();
        for &s in seed.iter().chain(std::iter::once(&0)) {
            if !member[s] {
                member[s] = true;
                list.push(s);
            }
        }
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            head += 1;
            for &s in gens {
                let y = self.mul(x, s);
                if !member[y] {
                    member[y] = true;
                    list.push(y);
                }
            }
        }
        Subgroup::new(list)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::new((0..self.order()).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::new(vec![0])
    }

    pub fn conjugate_subgroup(&self, x: usize, h: &Subgroup) -> Subgroup {
        Subgroup::new(h.elements.iter().map(|&g| self.conjugate(x, g)).collect())
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let elems = (0..self.order()).filter(|&x| self.conjugate_subgroup(x, h) == *h).collect();
        Subgroup::new(elems)
    }

    /// Every subgroup, sorted by order and then by element list.
    pub fn enumerate_subgroups(&self) -> Vec<Subgroup> {
        let mut cyclic: Vec<(Subgroup, usize)> = Vec::new();
        let mut seen: BTreeSet<Subgroup> = BTreeSet::new();
        for g in 0..self.order() {
            let c = self.closure(&[g]);
            if seen.insert(c.clone()) {
                cyclic.push((c, g));
            }
        }
        let mut all: Vec<(Subgroup, Vec<usize>)> =
            cyclic.iter().map(|(s, g)| (s.clone(), vec![*g])).collect();
        let mut head = 0;
        while head < all.len() {
            let (h, gens) = all[head].clone();
            head += 1;
            for (_, c) in &cyclic {
                if h.contains(*c) {
                    continue;
                }
                let mut ng = gens.clone();
                ng.push(*c);
                let j = self.closure_from(&h.elements, &ng);
                if seen.insert(j.clone()) {
                    all.push((j, ng));
                }
            }
        }
        let mut out: Vec<Subgroup> = all.into_iter().map(|(s, _)| s).collect();
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
        out
    }

    /// Partition subgroups into conjugacy classes, ordered by order and then
    /// by representative.
    pub fn subgroup_classes(&self, subs: &[Subgroup]) -> Vec<SubgroupClass> {
        let mut assigned: BTreeSet<Subgroup> = BTreeSet::new();
        let mut classes = Vec::new();
        for h in subs {
            if assigned.contains(h) {
                continue;
            }
            let members: BTreeSet<Subgroup> =
                (0..self.order()).map(|x| self.conjugate_subgroup(x, h)).collect();
            for m in &members {
                assigned.insert(m.clone());
            }
            let members: Vec<Subgroup> = members.into_iter().collect();
            classes.push(SubgroupClass { representative: members[0].clone(), members });
        }
        classes.sort_by(|a, b| {
            a.representative
                .order()
                .cmp(&b.representative.order())
                .then_with(|| a.representative.cmp(&b.representative))
        });
        classes
    }

    /// True when some conjugate of `a` is contained in `b`.
    pub fn conjugate_contained(&self, a: &Subgroup, b: &Subgroup) -> bool {
        if a.order() > b.order() || !b.order().is_multiple_of(a.order()) {
            return false;
        }
        (0..self.order()).any(|x| a.elements.iter().all(|&g| b.contains(self.conjugate(x, g))))
    }

    pub fn are_conjugate(&self, a: &Subgroup, b: &Subgroup) -> bool {
        a.order() == b.order() && self.conjugate_contained(a, b)
    }

    /// Short display name for a subgroup: `1`, the group name, `Z4(b)`, or
    /// `H8<b,g>` built from a small generating set.
    pub fn subgroup_name(&self, h: &Subgroup) -> String {
        if h.order() == 1 {
            return "1".into();
        }
        if h.order() == self.order() {
            return self.name.clone();
        }
        let by_word = |a: &usize, b: &usize| {
            self.words[*a].len().cmp(&self.words[*b].len()).then_with(|| self.words[*a].cmp(&self.words[*b]))
        };
        let mut elems: Vec<usize> = h.elements.iter().copied().filter(|&g| g != 0).collect();
        elems.sort_by(by_word);
        if let Some(&g) = elems.iter().find(|&&g| self.elem_order[g] == h.order()) {
            return format!("Z{}({})", h.order(), self.element_name(g));
        }
        let mut gens = Vec::new();
        let mut cur = self.trivial();
        for &g in &elems {
            if !cur.contains(g) {
                gens.push(g);
                cur = self.closure(&gens);
                if cur.order() == h.order() {
                    break;
                }
            }
        }
        let names: Vec<String> = gens.iter().map(|&g| self.element_name(g)).collect();
        format!("H{}<{}>", h.order(), names.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rot(theta: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
    }

    fn dihedral(n: usize) -> Arc<GroupTable> {
        let k = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        generate_group(
            &format!("D{n}"),
            &[("k".into(), k), ("s".into(), rot(2.0 * PI / n as f64))],
            ELEMENT_TOL,
            DEFAULT_MAX_ORDER,
        )
        .unwrap()
    }

    #[test]
    fn cyclic_four() {
        let g = generate_group("Z4", &[("g".into(), rot(PI / 2.0))], ELEMENT_TOL, 100).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.enumerate_subgroups().len(), 3);
        assert_eq!(g.num_classes(), 4);
    }

    #[test]
    fn dihedral_counts() {
        let d2 = dihedral(2);
        assert_eq!(d2.order(), 4);
        assert_eq!(d2.enumerate_subgroups().len(), 5);
        let d6 = dihedral(6);
        assert_eq!(d6.order(), 12);
        assert_eq!(d6.num_classes(), 6);
        let subs = d6.enumerate_subgroups();
        assert_eq!(subs.len(), 16);
        assert_eq!(d6.subgroup_classes(&subs).len(), 10);
    }

    #[test]
    fn table_is_associative_with_inverses() {
        let g = dihedral(5);
        let n = g.order();
        for a in 0..n {
            assert_eq!(g.mul(a, g.inverse(a)), 0);
            for b in 0..n {
                let ab = g.mul(a, b);
                assert!(max_abs(&(g.matrix(a) * g.matrix(b) - g.matrix(ab))) < 1e-9);
            }
        }
    }

    #[test]
    fn order_cap() {
        let err = generate_group("R", &[("r".into(), rot(1.0))], ELEMENT_TOL, 50).unwrap_err();
        assert_eq!(err, Error::OrderExceeded { cap: 50 });
    }

    #[test]
    fn rejects_non_orthogonal() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert!(matches!(
            generate_group("X", &[("m".into(), m)], ELEMENT_TOL, 10),
            Err(Error::NotOrthogonal { .. })
        ));
    }

    #[test]
    fn reflection_names_in_d6() {
        let d6 = dihedral(6);
        let subs = d6.enumerate_subgroups();
        let names: Vec<String> = d6
            .subgroup_classes(&subs)
            .iter()
            .filter(|c| c.representative.order() == 2)
            .map(|c| d6.subgroup_name(&c.representative))
            .collect();
        assert!(names.contains(&"Z2(k)".to_string()));
        assert!(names.contains(&"Z2(ks)".to_string()));
    }
}
