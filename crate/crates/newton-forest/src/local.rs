//! Per-vertex invariants on the positive-multiplicity subtree 𝒩.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::AnalysisError;
use crate::multiplicity::{DicriticalInfo, MultiplicityTable};
use crate::tree::{gcd_all, CellRef, Tree};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexData {
    pub n: BigInt,
    /// Dead-end decoration, or 1.
    pub a: BigInt,
    /// Number of adjacent vertices minus one.
    pub r: usize,
    /// Adjacent dicriticals, sorted by (degree, id).
    pub dicriticals: Vec<CellRef>,
    /// Node type: degrees of the adjacent dicriticals, ascending. Empty if not a node.
    pub node_type: Vec<usize>,
    /// k_u = -det({u, v}) for each adjacent dicritical u.
    pub k: BTreeMap<CellRef, BigInt>,
    pub sigma: BigInt,
    /// Neighbours inside 𝒩.
    pub n_neighbors: Vec<CellRef>,
    pub epsilon: usize,
    pub delta: BigInt,
    pub delta_tilde: BigInt,
    /// Gcd of the type for a node, N_v otherwise.
    pub d: BigInt,
    pub xi: usize,
    pub pure: bool,
    /// 1 if a (0)-arrow is adjacent.
    pub a_star: usize,
    /// Adjacent dicriticals of degree < N_v.
    pub b: usize,
    pub epsilon_prime: usize,
}

impl VertexData {
    pub fn is_node(&self) -> bool {
        !self.dicriticals.is_empty()
    }

    /// Number of ones in the node type.
    pub fn ones_in_type(&self) -> usize {
        self.node_type.iter().filter(|&&d| d == 1).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalLedger {
    pub vertices: BTreeMap<CellRef, VertexData>,
    /// Vertices with N > 0.
    pub n_set: BTreeSet<CellRef>,
    /// Dicriticals.
    pub d_set: BTreeSet<CellRef>,
    pub degree: BTreeMap<CellRef, usize>,
    pub nodes: BTreeSet<CellRef>,
    pub nd_star: BTreeSet<CellRef>,
    pub delta_total: BigInt,
    pub delta_tilde_total: BigInt,
    pub xi_total: usize,
    /// Σ d_u over dicriticals.
    pub degree_sum: BigInt,
    /// Σ (d_u - 1) over dicriticals.
    pub degree_excess: BigInt,
    /// Half of Δ̃(𝒩) when it is even and nonnegative.
    pub genus: Option<BigInt>,
    pub degree_gcd: BigInt,
}

impl LocalLedger {
    pub fn v(&self, c: CellRef) -> &VertexData {
        &self.vertices[&c]
    }

    pub fn delta_tilde(&self, c: CellRef) -> &BigInt {
        &self.vertices[&c].delta_tilde
    }

    /// Δ̃ of a subset of 𝒩.
    pub fn delta_tilde_of<'a>(&self, set: impl IntoIterator<Item = &'a CellRef>) -> BigInt {
        set.into_iter().map(|c| &self.vertices[c].delta_tilde).sum()
    }

    pub fn xi_of<'a>(&self, set: impl IntoIterator<Item = &'a CellRef>) -> usize {
        set.into_iter().map(|c| self.vertices[c].xi).sum()
    }

    pub fn is_rational_candidate(&self) -> bool {
        self.delta_tilde_total.is_zero() && self.degree_gcd.is_one()
    }
}

fn require_minimally_complete(info: &DicriticalInfo) -> Result<(), AnalysisError> {
    if info.minimally_complete {
        Ok(())
    } else {
        Err(AnalysisError::NotMinimallyComplete(info.diagnostics.clone()))
    }
}

/// Exact division that reports a non-integral quotient as an inconsistency.
pub(crate) fn exact_div(num: &BigInt, den: &BigInt, what: &str) -> Result<BigInt, AnalysisError> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(AnalysisError::Inconsistent(format!("{what}: {den} does not divide {num}")))
    }
}

pub fn vertex_ledger(t: &Tree, m: &MultiplicityTable, info: &DicriticalInfo) -> Result<LocalLedger, AnalysisError> {
    require_minimally_complete(info)?;
    let d_set: BTreeSet<CellRef> = info.dicriticals.iter().copied().collect();
    let n_set: BTreeSet<CellRef> = t.vertices().filter(|v| !d_set.contains(v)).collect();
    let mut vertices = BTreeMap::new();
    for &v in &n_set {
        let n = m.n[&v].clone();
        let a = t.dead_end(v).map_or_else(BigInt::one, |e| t.q(e, v).clone());
        let vertex_neighbors: Vec<CellRef> = t.neighbors(v).filter(|&x| t.is_vertex(x)).collect();
        let r = vertex_neighbors.len().saturating_sub(1);
        let mut dicriticals: Vec<CellRef> = vertex_neighbors.iter().copied().filter(|x| d_set.contains(x)).collect();
        dicriticals.sort_by_key(|u| (info.degree[u], *u));
        let node_type: Vec<usize> = dicriticals.iter().map(|u| info.degree[u]).collect();
        let mut k = BTreeMap::new();
        let mut sigma = BigInt::zero();
        for &u in &dicriticals {
            let e = t.edge_between(u, v).expect("adjacent");
            let ku = -t.det(e).expect("vertex edge");
            sigma += (&ku - 1) * BigInt::from(info.degree[&u]);
            k.insert(u, ku);
        }
        let n_neighbors: Vec<CellRef> = vertex_neighbors.iter().copied().filter(|x| n_set.contains(x)).collect();
        let epsilon = n_neighbors.len();
        let n_over_a = exact_div(&n, &a, "dead-end decoration must divide the multiplicity")?;
        let delta = (BigInt::from(r as i64) - 1) * (&n - 1) + (&n - &n_over_a);
        let excess: BigInt = node_type.iter().map(|&d| BigInt::from(d as i64 - 1)).sum();
        let delta_tilde = &delta - excess;
        let d = if node_type.is_empty() {
            n.clone()
        } else {
            node_type.iter().fold(BigInt::zero(), |g, &x| g.gcd(&BigInt::from(x)))
        };
        let ones = node_type.iter().filter(|&&x| x == 1).count();
        let xi = if !d.is_one() {
            0
        } else if n.is_one() {
            1
        } else {
            ones.max(1)
        };
        let pure = node_type.iter().all(|&x| x == 1 || BigInt::from(x) == n);
        let a_star = usize::from(t.dead_end(v).is_some());
        let b = node_type.iter().filter(|&&x| BigInt::from(x) < n).count();
        vertices.insert(
            v,
            VertexData {
                n,
                a,
                r,
                dicriticals,
                node_type,
                k,
                sigma,
                epsilon_prime: a_star + b + epsilon,
                n_neighbors,
                epsilon,
                delta,
                delta_tilde,
                d,
                xi,
                pure,
                a_star,
                b,
            },
        );
    }

    let nodes: BTreeSet<CellRef> = vertices.iter().filter(|(_, d)| d.is_node()).map(|(&v, _)| v).collect();
    let nd_star = nodes.iter().copied().filter(|v| vertices[v].d.is_one()).collect();
    let delta_total = vertices.values().map(|d| &d.delta).sum();
    let delta_tilde_total: BigInt = vertices.values().map(|d| &d.delta_tilde).sum();
    let xi_total = vertices.values().map(|d| d.xi).sum();
    let degree_sum: BigInt = info.degree.values().map(|&d| BigInt::from(d)).sum();
    let degree_excess = info.degree.values().map(|&d| BigInt::from(d as i64 - 1)).sum();
    let genus = (!delta_tilde_total.is_negative() && delta_tilde_total.is_even()).then(|| &delta_tilde_total / 2);
    let degrees: Vec<BigInt> = info.degree.values().map(|&d| BigInt::from(d)).collect();
    let degree_gcd = gcd_all(&degrees);
    Ok(LocalLedger {
        vertices,
        n_set,
        d_set,
        degree: info.degree.clone(),
        nodes,
        nd_star,
        delta_total,
        delta_tilde_total,
        xi_total,
        degree_sum,
        degree_excess,
        genus,
        degree_gcd,
    })
}

/// The global identity Δ̃(𝒩) = Δ(𝒩) − D′ = 2 − M(𝒯) − D, checked route against route.
pub fn global_check(ledger: &LocalLedger, m: &MultiplicityTable) -> Result<BigInt, AnalysisError> {
    let by_sum = ledger.delta_tilde_total.clone();
    let by_delta = &ledger.delta_total - &ledger.degree_excess;
    let by_multiplicity = BigInt::from(2) - &m.m_of_t - &ledger.degree_sum;
    if by_sum != by_delta || by_sum != by_multiplicity {
        return Err(AnalysisError::Inconsistent(format!(
            "global Δ̃ routes disagree: {by_sum} vs {by_delta} vs {by_multiplicity}"
        )));
    }
    Ok(by_sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::fixtures::load;
    use crate::multiplicity::{classify, multiplicities};

    fn ledger(name: &str) -> (Tree, LocalLedger, MultiplicityTable) {
        let t = load(name);
        let m = multiplicities(&t);
        let info = classify(&t, &m);
        let l = vertex_ledger(&t, &m, &info).unwrap();
        (t, l, m)
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn t_b_1_2_root() {
        let (t, l, _) = ledger("t_b_1_2");
        let v0 = l.v(t.root());
        assert_eq!(v0.node_type, vec![1, 1]);
        assert!(v0.k.values().all(|k| k == &big(3)));
        assert_eq!(v0.sigma, big(4));
        assert_eq!(v0.epsilon, 0);
        assert_eq!(v0.delta_tilde, big(0));
    }

    #[test]
    fn t_c_1_1_2_root() {
        let (t, l, _) = ledger("t_c_1_1_2");
        let v0 = l.v(t.root());
        assert_eq!(v0.node_type, vec![1, 1, 2]);
        assert_eq!(v0.n, big(4));
        let mut ks: Vec<BigInt> = v0.k.values().cloned().collect();
        ks.sort();
        assert_eq!(ks, vec![big(2), big(4), big(4)]);
        assert_eq!(v0.sigma, big(8));
        assert_eq!(v0.delta_tilde, big(2));
    }

    #[test]
    fn t_d_vertices() {
        let (t, l, m) = ledger("t_d");
        let w = l.v(t.find("w").unwrap());
        assert_eq!(w.node_type, vec![3]);
        assert_eq!(w.k[&t.find("u").unwrap()], big(2));
        assert_eq!(w.sigma, big(3));
        assert_eq!(w.a, big(2));
        assert_eq!(w.epsilon, 1);
        assert_eq!(w.delta_tilde, big(1));
        let v0 = l.v(t.root());
        assert!(!v0.is_node());
        assert_eq!(v0.delta_tilde, big(-5));
        assert_eq!(global_check(&l, &m).unwrap(), big(-4));
        assert!(l.nd_star.is_empty());
        assert_eq!(l.xi_total, 0);
        assert_eq!(l.genus, None);
    }

    #[test]
    fn t_a_and_t_b_xi() {
        let (t, l, m) = ledger("t_a");
        assert_eq!(global_check(&l, &m).unwrap(), big(0));
        assert_eq!(l.nd_star, BTreeSet::from([t.root()]));
        assert_eq!(l.v(t.root()).xi, 1);
        let (t, l, _) = ledger("t_b_1_1");
        assert_eq!(l.nd_star, BTreeSet::from([t.root()]));
        assert_eq!(l.v(t.root()).xi, 2);
    }

    #[test]
    fn t_c_genus() {
        let (_, l, m) = ledger("t_c_1_1_1");
        assert_eq!(global_check(&l, &m).unwrap(), big(2));
        assert_eq!(l.genus, Some(big(1)));
    }

    #[test]
    fn rejects_non_minimally_complete() {
        use crate::tree::{build_tree, ArrowMark, CellSpec, EdgeSpec};
        let t = build_tree(
            &[CellSpec::vertex("v0"), CellSpec::vertex("u"), CellSpec::arrow("beta", ArrowMark::One)],
            &[EdgeSpec::new("v0", "u", 1, 0), EdgeSpec::new("u", "beta", 1, 1)],
            "v0",
        )
        .unwrap();
        let m = multiplicities(&t);
        let info = classify(&t, &m);
        assert!(matches!(vertex_ledger(&t, &m, &info), Err(AnalysisError::NotMinimallyComplete(_))));
    }
}
