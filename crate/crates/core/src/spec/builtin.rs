//! Built-in groups (`cyclic n`, `dihedral n`, `frobenius p q` and products
//! `A x B`) and their named representation blocks.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Cyclic(usize),
    Dihedral(usize),
    /// `F_{p,q}`: `a^p = b^q = 1`, `b^-1 a b = a^u` with `u` of order `q` mod `p`.
    Frobenius { p: usize, q: usize, u: usize },
}

fn rot(theta: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
}

fn scalar(v: f64) -> DMatrix<f64> {
    DMatrix::from_element(1, 1, v)
}

fn parse_usize(tok: Option<&str>, what: &str) -> Result<usize> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| Error::Spec(format!("expected an integer for {what}")))
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn mult_order(u: usize, p: usize) -> usize {
    let mut x = u % p;
    let mut k = 1;
    while x != 1 {
        x = x * u % p;
        k += 1;
    }
    k
}

impl Factor {
    pub fn parse(s: &str) -> Result<Factor> {
        let mut it = s.split_whitespace();
        let kind = it.next().unwrap_or("");
        let f = match kind {
            "cyclic" => {
                let n = parse_usize(it.next(), "cyclic order")?;
                if n == 0 {
                    return Err(Error::Spec("cyclic order must be positive".into()));
                }
                Factor::Cyclic(n)
            }
            "dihedral" => {
                let n = parse_usize(it.next(), "dihedral order")?;
                if n < 2 {
                    return Err(Error::Spec("dihedral n needs n >= 2".into()));
                }
                Factor::Dihedral(n)
            }
            "frobenius" => {
                let p = parse_usize(it.next(), "frobenius p")?;
                let q = parse_usize(it.next(), "frobenius q")?;
                if !is_prime(p) || q < 2 || q % 2 != 0 || (p - 1) % q != 0 {
                    return Err(Error::Spec(format!(
                        "frobenius {p} {q}: need p prime and q even dividing p - 1"
                    )));
                }
                let u = (2..p).find(|&u| mult_order(u, p) == q).unwrap();
                Factor::Frobenius { p, q, u }
            }
            _ => return Err(Error::Spec(format!("unknown group `{s}`"))),
        };
        if it.next().is_some() {
            return Err(Error::Spec(format!("trailing tokens in `{s}`")));
        }
        Ok(f)
    }

    pub fn label(&self) -> String {
        match self {
            Factor::Cyclic(n) => format!("Z{n}"),
            Factor::Dihedral(n) => format!("D{n}"),
            Factor::Frobenius { p, q, .. } => format!("F{p},{q}"),
        }
    }

    pub fn generator_names(&self) -> Vec<&'static str> {
        match self {
            Factor::Cyclic(_) => vec!["g"],
            Factor::Dihedral(_) => vec!["k", "s"],
            Factor::Frobenius { .. } => vec!["a", "b"],
        }
    }

    /// Faithful block used as the defining representation.
    pub fn defining_block(&self) -> &'static str {
        match self {
            Factor::Cyclic(1) => "trivial",
            Factor::Cyclic(2) => "sign",
            Factor::Cyclic(_) => "rot 1",
            Factor::Dihedral(_) => "std 1",
            Factor::Frobenius { .. } => "orbit 1",
        }
    }

    /// Images of this factor's generators in the named block.
    pub fn block(&self, name: &str) -> Result<Vec<DMatrix<f64>>> {
        let toks: Vec<&str> = name.split_whitespace().collect();
        let ngen = self.generator_names().len();
        if toks == ["trivial"] {
            return Ok(vec![scalar(1.0); ngen]);
        }
        let bad = || Error::Spec(format!("unknown block `{name}` for {}", self.label()));
        let arg = |i: usize| toks.get(i).and_then(|t| t.parse::<i64>().ok()).ok_or_else(bad);
        match (self, toks.first().copied()) {
            (Factor::Cyclic(n), Some("sign")) if n % 2 == 0 && toks.len() == 1 => Ok(vec![scalar(-1.0)]),
            (Factor::Cyclic(n), Some("rot")) if toks.len() == 2 => {
                Ok(vec![rot(2.0 * PI * arg(1)? as f64 / *n as f64)])
            }
            (Factor::Dihedral(n), Some("std")) if toks.len() == 2 => {
                let kappa = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
                Ok(vec![kappa, rot(2.0 * PI * arg(1)? as f64 / *n as f64)])
            }
            (Factor::Dihedral(n), Some("char")) if toks.len() == 2 => {
                let signs: Vec<char> = toks[1].chars().collect();
                if signs.len() != 2 || signs.iter().any(|c| *c != '+' && *c != '-') {
                    return Err(bad());
                }
                if signs[1] == '-' && n % 2 != 0 {
                    return Err(Error::Spec(format!("char {} needs an even dihedral order", toks[1])));
                }
                let v = |c: char| scalar(if c == '+' { 1.0 } else { -1.0 });
                Ok(vec![v(signs[0]), v(signs[1])])
            }
            (Factor::Frobenius { .. }, Some("sign")) if toks.len() == 1 => Ok(vec![scalar(1.0), scalar(-1.0)]),
            (Factor::Frobenius { q, .. }, Some("rot")) if toks.len() == 2 => Ok(vec![
                DMatrix::identity(2, 2),
                rot(2.0 * PI * arg(1)? as f64 / *q as f64),
            ]),
            (Factor::Frobenius { p, q, u }, Some("orbit")) if toks.len() == 2 => {
                let k = arg(1)?.rem_euclid(*p as i64) as usize;
                if k == 0 {
                    return Err(Error::Spec("orbit index must be nonzero mod p".into()));
                }
                Ok(frobenius_orbit(*p, *q, *u, k))
            }
            _ => Err(bad()),
        }
    }
}

/// Realification of `a z_j = w^{k u^j} z_j`, `b (z_0..z_{h-1}) =
/// (conj z_{h-1}, z_0, .., z_{h-2})`, `h = q / 2`, coordinates
/// `(Re z_0, Im z_0, Re z_1, ..)`.
fn frobenius_orbit(p: usize, q: usize, u: usize, k: usize) -> Vec<DMatrix<f64>> {
    let h = q / 2;
    let mut blocks = Vec::with_capacity(h);
    let mut e = k % p;
    for _ in 0..h {
        blocks.push(rot(2.0 * PI * e as f64 / p as f64));
        e = e * u % p;
    }
    let a = linalg::block_diag(&blocks);
    let mut b = DMatrix::zeros(q, q);
    // new z_0 = conj(old z_{h-1})
    b[(0, 2 * (h - 1))] = 1.0;
    b[(1, 2 * (h - 1) + 1)] = -1.0;
    for j in 1..h {
        b[(2 * j, 2 * (j - 1))] = 1.0;
        b[(2 * j + 1, 2 * (j - 1) + 1)] = 1.0;
    }
    vec![a, b]
}

/// A parsed `A x B x ..` group directive.
#[derive(Debug, Clone)]
pub struct BuiltinGroup {
    pub factors: Vec<Factor>,
    pub names: Vec<String>,
}

impl BuiltinGroup {
    pub fn parse(directive: &str, names: Option<&[String]>) -> Result<Self> {
        let factors = directive.split(" x ").map(|s| Factor::parse(s.trim())).collect::<Result<Vec<_>>>()?;
        let mut default: Vec<String> = Vec::new();
        for f in &factors {
            for n in f.generator_names() {
                let mut cand = n.to_string();
                let mut k = 2;
                while default.contains(&cand) {
                    cand = format!("{n}{k}");
                    k += 1;
                }
                default.push(cand);
            }
        }
        let names = match names {
            Some(ns) => {
                if ns.len() != default.len() {
                    return Err(Error::Spec(format!(
                        "expected {} generator names, got {}",
                        default.len(),
                        ns.len()
                    )));
                }
                ns.to_vec()
            }
            None => default,
        };
        Ok(BuiltinGroup { factors, names })
    }

    pub fn label(&self) -> String {
        self.factors.iter().map(|f| f.label()).collect::<Vec<_>>().join("x")
    }

    /// One block per factor: that factor's defining block tensored with
    /// the trivial block of every other factor.
    pub fn defining_blocks(&self) -> Vec<String> {
        (0..self.factors.len())
            .map(|i| {
                self.factors
                    .iter()
                    .enumerate()
                    .map(|(j, f)| if i == j { f.defining_block() } else { "trivial" })
                    .collect::<Vec<_>>()
                    .join(" x ")
            })
            .collect()
    }

    /// Images of every generator of the product in a block `X x Y x ..`
    /// (one part per factor, tensored) or `trivial`.
    pub fn block(&self, name: &str) -> Result<Vec<DMatrix<f64>>> {
        let parts: Vec<&str> = if name.trim() == "trivial" {
            vec!["trivial"; self.factors.len()]
        } else {
            name.split(" x ").map(|s| s.trim()).collect()
        };
        if parts.len() != self.factors.len() {
            return Err(Error::Spec(format!(
                "block `{name}` needs {} factor(s) joined by ` x `",
                self.factors.len()
            )));
        }
        let per_factor: Vec<Vec<DMatrix<f64>>> =
            self.factors.iter().zip(&parts).map(|(f, p)| f.block(p)).collect::<Result<_>>()?;
        let mut images = Vec::new();
        for (fi, imgs) in per_factor.iter().enumerate() {
            for img in imgs {
                let mut acc = DMatrix::identity(1, 1);
                for (fj, other) in per_factor.iter().enumerate() {
                    let m = if fi == fj {
                        img.clone()
                    } else {
                        DMatrix::identity(other[0].nrows(), other[0].nrows())
                    };
                    acc = linalg::kron(&acc, &m);
                }
                images.push(acc);
            }
        }
        Ok(images)
    }

    /// Images of every generator on a direct sum of blocks.
    pub fn blocks(&self, names: &[String]) -> Result<Vec<DMatrix<f64>>> {
        let per_block: Vec<Vec<DMatrix<f64>>> = names.iter().map(|n| self.block(n)).collect::<Result<_>>()?;
        Ok((0..self.names.len())
            .map(|g| linalg::block_diag(&per_block.iter().map(|b| b[g].clone()).collect::<Vec<_>>()))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    #[test]
    fn frobenius_relation() {
        let f = Factor::parse("frobenius 13 4").unwrap();
        assert_eq!(f, Factor::Frobenius { p: 13, q: 4, u: 5 });
        for k in [1, 7, 10] {
            let g = f.block(&format!("orbit {k}")).unwrap();
            let (a, b) = (&g[0], &g[1]);
            let a5 = a * a * a * a * a;
            let lhs = b.transpose() * a * b;
            assert!(max_abs(&(lhs - a5)) < 1e-12);
        }
    }

    #[test]
    fn product_names_do_not_collide() {
        let g = BuiltinGroup::parse("cyclic 2 x cyclic 2", None).unwrap();
        assert_eq!(g.names, vec!["g", "g2"]);
        assert_eq!(g.label(), "Z2xZ2");
        let imgs = g.block("trivial x sign").unwrap();
        assert_eq!(imgs[0][(0, 0)], 1.0);
        assert_eq!(imgs[1][(0, 0)], -1.0);
    }

    #[test]
    fn bad_directives() {
        assert!(Factor::parse("frobenius 12 4").is_err());
        assert!(Factor::parse("dihedral 1").is_err());
        assert!(Factor::parse("dihedral 3").unwrap().block("char +-").is_err());
    }
}
