//! Isotropy subgroups of `V`, their lattice up to conjugacy, and the index
//! `s(S) = dim Fix_V(S) - dim Fix_W(S)`.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Subgroup;
use crate::representation::Representation;

#[derive(Debug, Clone, Serialize)]
pub struct IsotropyNode {
    pub name: String,
    pub order: usize,
    /// Number of conjugates.
    pub class_size: usize,
    /// Element indices of the lexicographically least conjugate.
    pub elements: Vec<usize>,
    pub dim_fix_v: usize,
    pub dim_fix_w: usize,
    pub index: i64,
    /// Codimension of the stratum inside the zero set; always zero here.
    pub n_sigma: usize,
    pub is_maximal: bool,
}

impl IsotropyNode {
    pub fn subgroup(&self) -> Subgroup {
        Subgroup::new(self.elements.clone())
    }

    /// `name (s)`.
    pub fn label(&self) -> String {
        format!("{} ({})", self.name, self.index)
    }

    /// Dimension of the stratum with this isotropy and `k` parameters.
    pub fn stratum_dim(&self, k: usize) -> i64 {
        self.index + k as i64
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IsotropyLattice {
    pub group: String,
    pub group_order: usize,
    pub nodes: Vec<IsotropyNode>,
    /// Covering relations `(upper, lower)` as node indices.
    pub edges: Vec<(usize, usize)>,
}

/// True when the pointwise stabiliser of `Fix_V(S)` is exactly `S`.
pub fn is_isotropy(v: &Representation, s: &Subgroup) -> Result<bool> {
    let fix = v.fix_basis(s)?;
    Ok(v.pointwise_stabilizer(&fix) == *s)
}

pub fn index_s(v: &Representation, w: &Representation, s: &Subgroup) -> Result<i64> {
    Ok(v.fix_dimension(s)? as i64 - w.fix_dimension(s)? as i64)
}

pub fn build_lattice(v: &Representation, w: &Representation) -> Result<IsotropyLattice> {
    let g = v.group().clone();
    if !Arc::ptr_eq(&g, w.group()) {
        return Err(Error::GroupMismatch);
    }
    let subs = g.enumerate_subgroups();
    let classes = g.subgroup_classes(&subs);
    let mut nodes = Vec::new();
    for c in &classes {
        let rep = &c.representative;
        if !is_isotropy(v, rep)? {
            continue;
        }
        let dim_fix_v = v.fix_dimension(rep)?;
        let dim_fix_w = w.fix_dimension(rep)?;
        nodes.push(IsotropyNode {
            name: g.subgroup_name(rep),
            order: rep.order(),
            class_size: c.members.len(),
            elements: rep.elements.clone(),
            dim_fix_v,
            dim_fix_w,
            index: dim_fix_v as i64 - dim_fix_w as i64,
            n_sigma: 0,
            is_maximal: false,
        });
    }
    nodes.sort_by(|a, b| b.order.cmp(&a.order).then_with(|| a.elements.cmp(&b.elements)));

    let subgroups: Vec<Subgroup> = nodes.iter().map(|n| n.subgroup()).collect();
    let n = nodes.len();
    let above = |t: usize, m: usize| {
        subgroups[m].order() < subgroups[t].order() && g.conjugate_contained(&subgroups[m], &subgroups[t])
    };
    let greater: Vec<Vec<bool>> = (0..n).map(|t| (0..n).map(|m| above(t, m)).collect()).collect();
    let mut edges = Vec::new();
    for t in 0..n {
        for m in 0..n {
            if greater[t][m] && !(0..n).any(|k| greater[t][k] && greater[k][m]) {
                edges.push((t, m));
            }
        }
    }
    let order = g.order();
    for m in 0..n {
        if nodes[m].order == order {
            continue;
        }
        nodes[m].is_maximal = (0..n).filter(|&t| greater[t][m]).all(|t| nodes[t].order == order);
    }
    Ok(IsotropyLattice { group: g.name().to_string(), group_order: order, nodes, edges })
}

impl IsotropyLattice {
    pub fn maximal(&self) -> impl Iterator<Item = &IsotropyNode> {
        self.nodes.iter().filter(|n| n.is_maximal)
    }

    pub fn find(&self, name: &str) -> Option<&IsotropyNode> {
        self.nodes.iter().find(|n| n.name == name)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph isotropy {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", n.label());
        }
        for (t, m) in &self.edges {
            let _ = writeln!(s, "  n{m} -> n{t};");
        }
        s.push_str("}\n");
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("isotropy lattice of {} (order {})\n", self.group, self.group_order);
        let _ = writeln!(
            s,
            "{:<16} {:>6} {:>6} {:>8} {:>8} {:>4}  maximal",
            "subgroup", "order", "conj", "dimFixV", "dimFixW", "s"
        );
        for n in &self.nodes {
            let _ = writeln!(
                s,
                "{:<16} {:>6} {:>6} {:>8} {:>8} {:>4}  {}",
                n.name,
                n.order,
                n.class_size,
                n.dim_fix_v,
                n.dim_fix_w,
                n.index,
                if n.is_maximal { "yes" } else { "" }
            );
        }
        s
    }
}
