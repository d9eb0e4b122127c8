//! Multiplicities N_v, the products x and x̂, M(𝒯) and the completeness classes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::tree::{CellRef, Diagnostic, EdgeRef, Rule, Tree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MultiplicityError {
    #[error("`{0}` is not a (1)-arrow")]
    NotOneArrow(String),
    #[error("multiplicity is not defined at the (1)-arrow `{0}`")]
    UndefinedAtOneArrow(String),
}

/// Sum of x̂_{from,α} over the (1)-arrows α lying beyond `to`, where `to` is adjacent to `from`.
///
/// Memoized per directed edge; this is the engine's fast path.
pub struct BeyondSums<'t> {
    tree: &'t Tree,
    memo: BTreeMap<(CellRef, CellRef), BigInt>,
}

impl<'t> BeyondSums<'t> {
    pub fn new(tree: &'t Tree) -> Self {
        BeyondSums { tree, memo: BTreeMap::new() }
    }

    pub fn get(&mut self, from: CellRef, to: CellRef) -> BigInt {
        if let Some(v) = self.memo.get(&(from, to)) {
            return v.clone();
        }
        // Iterative post-order so deep trees cannot overflow the stack.
        let t = self.tree;
        let mut stack = vec![(from, to, false)];
        while let Some((f, c, ready)) = stack.pop() {
            if self.memo.contains_key(&(f, c)) {
                continue;
            }
            if t.is_one_arrow(c) {
                self.memo.insert((f, c), BigInt::one());
                continue;
            }
            if t.is_zero_arrow(c) {
                self.memo.insert((f, c), BigInt::zero());
                continue;
            }
            let e = t.edge_between(f, c).expect("adjacent cells");
            let others: Vec<EdgeRef> = t.incident(c).iter().copied().filter(|&g| g != e).collect();
            if !ready {
                stack.push((f, c, true));
                for &g in &others {
                    let n = t.other_end(g, c);
                    if !self.memo.contains_key(&(c, n)) {
                        stack.push((c, n, false));
                    }
                }
                continue;
            }
            let mut total = BigInt::zero();
            for &g in &others {
                let weight: BigInt = others.iter().filter(|&&h| h != g).map(|&h| t.q(h, c).clone()).product();
                total += weight * &self.memo[&(c, t.other_end(g, c))];
            }
            self.memo.insert((f, c), total);
        }
        self.memo[&(from, to)].clone()
    }
}

/// x_{v,α}: product of q(ε,γ) over the edges ε incident to γ = γ_{v,α}.
pub fn compute_x(t: &Tree, v: CellRef, alpha: CellRef) -> Result<BigInt, MultiplicityError> {
    path_product(t, v, alpha, true)
}

/// x̂_{v,α}: as [`compute_x`] but skipping the edges incident to v.
pub fn compute_x_hat(t: &Tree, v: CellRef, alpha: CellRef) -> Result<BigInt, MultiplicityError> {
    path_product(t, v, alpha, false)
}

fn path_product(t: &Tree, v: CellRef, alpha: CellRef, include_v: bool) -> Result<BigInt, MultiplicityError> {
    if !t.is_one_arrow(alpha) {
        return Err(MultiplicityError::NotOneArrow(t.id(alpha).to_string()));
    }
    let path = t.path(v, alpha);
    Ok(t.incident_edges_of_path(&path)
        .into_iter()
        .filter(|&(_, c)| include_v || c != v)
        .map(|(e, c)| t.q(e, c).clone())
        .product())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityTable {
    /// N over vertices and (0)-arrows.
    pub n: BTreeMap<CellRef, BigInt>,
    pub m_of_t: BigInt,
    pub points_at_infinity: usize,
}

impl MultiplicityTable {
    pub fn n(&self, c: CellRef) -> Option<&BigInt> {
        self.n.get(&c)
    }

    pub fn get(&self, t: &Tree, c: CellRef) -> Result<&BigInt, MultiplicityError> {
        self.n.get(&c).ok_or_else(|| MultiplicityError::UndefinedAtOneArrow(t.id(c).to_string()))
    }
}

pub fn multiplicities(t: &Tree) -> MultiplicityTable {
    let mut sums = BeyondSums::new(t);
    let mut n = BTreeMap::new();
    for c in t.cells().filter(|&c| !t.is_one_arrow(c)) {
        let mut total = BigInt::zero();
        for &e in t.incident(c) {
            let q_other = t.big_q(e, c).expect("incident edge");
            total += q_other * sums.get(c, t.other_end(e, c));
        }
        n.insert(c, total);
    }
    let m_of_t = -n.iter().map(|(&c, nv)| nv * BigInt::from(t.valency(c) as i64 - 2)).sum::<BigInt>();
    let root = t.root();
    let points_at_infinity = t.valency(root) - usize::from(t.dead_end(root).is_some());
    MultiplicityTable { n, m_of_t, points_at_infinity }
}

/// Dicriticals, their degrees, and the cumulative class flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DicriticalInfo {
    pub dicriticals: Vec<CellRef>,
    pub degree: BTreeMap<CellRef, usize>,
    pub generic: bool,
    pub complete: bool,
    pub minimally_complete: bool,
    /// Why the tree falls short of minimal completeness, if it does.
    pub diagnostics: Vec<Diagnostic>,
}

pub fn classify(t: &Tree, m: &MultiplicityTable) -> DicriticalInfo {
    let dicriticals: Vec<CellRef> = t.vertices().filter(|&v| m.n[&v].is_zero()).collect();
    let degree = dicriticals.iter().map(|&u| (u, t.neighbors(u).filter(|&x| t.is_one_arrow(x)).count())).collect();
    let mut diagnostics = vec![];

    for v in t.vertices() {
        if m.n[&v].is_negative() {
            diagnostics.push(Diagnostic {
                rule: Rule::Generic,
                cells: vec![v],
                edges: vec![],
                message: format!("vertex `{}` has negative multiplicity {}", t.id(v), m.n[&v]),
            });
        }
    }
    let generic = diagnostics.is_empty();

    for a in t.one_arrows() {
        let v = t.neighbors(a).next().expect("arrow has a neighbour");
        if !m.n.get(&v).is_some_and(Zero::is_zero) {
            diagnostics.push(Diagnostic {
                rule: Rule::Complete,
                cells: vec![a, v],
                edges: vec![],
                message: format!("(1)-arrow `{}` is adjacent to the non-dicritical `{}`", t.id(a), t.id(v)),
            });
        }
    }
    let complete = diagnostics.is_empty();

    for &u in &dicriticals {
        if t.dead_end(u).is_none() {
            diagnostics.push(Diagnostic {
                rule: Rule::DicriticalDeadEnd,
                cells: vec![u],
                edges: vec![],
                message: format!("dicritical `{}` has no dead end", t.id(u)),
            });
        }
    }
    for v in t.vertices() {
        if let Some(d) = t.dead_end(v) {
            if t.q(d, v).is_one() && !m.n[&v].is_zero() {
                diagnostics.push(Diagnostic {
                    rule: Rule::DeadEndOne,
                    cells: vec![v],
                    edges: vec![d],
                    message: format!("dead end decorated 1 at the non-dicritical `{}`", t.id(v)),
                });
            }
        }
        if v != t.root() && t.valency(v) == 2 {
            diagnostics.push(Diagnostic {
                rule: Rule::ValencyTwo,
                cells: vec![v],
                edges: vec![],
                message: format!("vertex `{}` has valency 2", t.id(v)),
            });
        }
    }
    let minimally_complete = diagnostics.is_empty();
    DicriticalInfo { dicriticals, degree, generic, complete, minimally_complete, diagnostics }
}

/// Both sides of the determinant identities for a linear path from `v` to `v2`.
///
/// Returns `None` when the path is not linear or an end is not a vertex.
pub fn linear_path_identities(
    t: &Tree,
    m: &MultiplicityTable,
    v: CellRef,
    v2: CellRef,
) -> Option<[(BigInt, BigInt); 2]> {
    if v == v2 || !t.is_vertex(v) || !t.is_vertex(v2) {
        return None;
    }
    let path = t.path(v, v2);
    if path[1..path.len() - 1].iter().any(|&c| t.valency(c) != 2) {
        return None;
    }
    let edges = t.path_edges(&path);
    let (e, e2) = (edges[0], *edges.last().unwrap());
    let (q, q2) = (t.q(e, v).clone(), t.q(e2, v2).clone());
    let (big, big2) = (t.big_q(e, v).ok()?, t.big_q(e2, v2).ok()?);
    let det = &q * &q2 - &big * &big2;
    let (mut beyond, mut behind) = (BigInt::zero(), BigInt::zero());
    for a in t.one_arrows() {
        if t.path(v, a).contains(&v2) {
            beyond += compute_x_hat(t, v, a).ok()?;
        } else {
            behind += compute_x_hat(t, v2, a).ok()?;
        }
    }
    let (nv, nv2) = (m.n[&v].clone(), m.n[&v2].clone());
    Some([(&q * &nv2 - &big2 * &nv, &det * beyond), (&q2 * &nv - &big * &nv2, det * behind)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::fixtures::load;

    fn cell(t: &Tree, id: &str) -> CellRef {
        t.find(id).unwrap()
    }

    #[test]
    fn t_a_values() {
        let t = load("t_a");
        let m = multiplicities(&t);
        assert_eq!(m.n[&cell(&t, "v0")], BigInt::from(1));
        assert_eq!(m.n[&cell(&t, "u")], BigInt::from(0));
        assert_eq!(m.m_of_t, BigInt::from(1));
        assert_eq!(m.points_at_infinity, 1);
        let beta = cell(&t, "beta");
        assert_eq!(compute_x(&t, cell(&t, "v0"), beta).unwrap(), BigInt::from(1));
        assert!(m.get(&t, beta).is_err());
        let info = classify(&t, &m);
        assert!(info.generic && info.complete && info.minimally_complete);
        assert_eq!(info.degree[&cell(&t, "u")], 1);
    }

    #[test]
    fn t_b_products() {
        let t = load("t_b_2_3");
        let (v0, u1) = (cell(&t, "v0"), cell(&t, "u1"));
        let (b1, b2) = (cell(&t, "beta1"), cell(&t, "beta2"));
        assert_eq!(compute_x(&t, v0, b1).unwrap(), BigInt::from(2));
        assert_eq!(compute_x(&t, u1, b2).unwrap(), BigInt::from(6));
        assert!(compute_x(&t, v0, cell(&t, "alpha1")).is_err());
    }

    #[test]
    fn t_c_root_multiplicity() {
        let t = load("t_c_1_2_3");
        let m = multiplicities(&t);
        assert_eq!(m.n[&cell(&t, "v0")], BigInt::from(6));
        for u in ["u1", "u2", "u3"] {
            assert!(m.n[&cell(&t, u)].is_zero());
        }
    }

    #[test]
    fn t_d_values() {
        let t = load("t_d");
        let m = multiplicities(&t);
        assert_eq!(m.n[&cell(&t, "v0")], BigInt::from(6));
        assert_eq!(m.n[&cell(&t, "w")], BigInt::from(6));
        assert_eq!(m.n[&cell(&t, "u")], BigInt::from(0));
        assert_eq!(m.n[&cell(&t, "alpha_w")], BigInt::from(3));
        assert_eq!(m.m_of_t, BigInt::from(3));
        let x_hat = compute_x_hat(&t, cell(&t, "v0"), cell(&t, "beta1")).unwrap();
        assert_eq!(x_hat, BigInt::from(2));
        let info = classify(&t, &m);
        assert!(info.minimally_complete);
        assert_eq!(info.dicriticals, vec![cell(&t, "u")]);
        assert_eq!(info.degree[&cell(&t, "u")], 3);
    }

    #[test]
    fn dicritical_without_dead_end_is_not_minimally_complete() {
        use crate::tree::{build_tree, ArrowMark, CellSpec, EdgeSpec};
        let t = build_tree(
            &[CellSpec::vertex("v0"), CellSpec::vertex("u"), CellSpec::arrow("beta", ArrowMark::One)],
            &[EdgeSpec::new("v0", "u", 1, 0), EdgeSpec::new("u", "beta", 1, 1)],
            "v0",
        )
        .unwrap();
        let info = classify(&t, &multiplicities(&t));
        assert!(info.complete);
        assert!(!info.minimally_complete);
        let rules: Vec<Rule> = info.diagnostics.iter().map(|d| d.rule).collect();
        assert!(rules.contains(&Rule::DicriticalDeadEnd));
        assert!(rules.contains(&Rule::ValencyTwo));
    }

    #[test]
    fn determinant_identities_on_fixtures() {
        for (name, _) in crate::io::fixtures::ALL {
            let t = load(name);
            let m = multiplicities(&t);
            for a in t.vertices() {
                for b in t.vertices() {
                    if let Some(sides) = linear_path_identities(&t, &m, a, b) {
                        for (l, r) in sides {
                            assert_eq!(l, r, "{name}: {} {}", t.id(a), t.id(b));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dead_end_multiplicity_relation() {
        for (name, _) in crate::io::fixtures::ALL {
            let t = load(name);
            let m = multiplicities(&t);
            for v in t.vertices() {
                if let Some(d) = t.dead_end(v) {
                    let alpha = t.other_end(d, v);
                    assert_eq!(m.n[&v], t.q(d, v) * &m.n[&alpha], "{name}");
                }
            }
        }
    }
}
