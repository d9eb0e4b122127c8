//! The poset of pairs (u,e), characteristic numbers and the quantities built on them.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AnalysisError;
use crate::local::LocalLedger;
use crate::multiplicity::{compute_x_hat, BeyondSums};
use crate::tree::{CellRef, EdgeRef, Tree};

pub type Rational = BigRational;

pub fn rat(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// The nonnegative generator of the ℤ-module spanned by `xs`.
pub fn rational_gcd(xs: &[Rational]) -> Rational {
    let m = xs.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let g = xs.iter().fold(BigInt::zero(), |g, x| g.gcd(&(x.numer() * (&m / x.denom()))));
    Rational::new(g, m)
}

/// True if `y` lies in x·ℤ (for x = 0 only y = 0 does).
pub fn divides(x: &Rational, y: &Rational) -> bool {
    if x.is_zero() {
        return y.is_zero();
    }
    (y / x).is_integer()
}

/// A pair (u,e) with u ∈ 𝒩 and e an edge of 𝒩 at u; `far` is the other end of e.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    pub u: CellRef,
    pub e: EdgeRef,
    pub far: CellRef,
}

#[derive(Clone, Debug)]
pub struct Poset {
    pub pairs: Vec<Pair>,
    pub index: BTreeMap<(CellRef, EdgeRef), usize>,
    /// Immediate predecessors of each pair.
    pub preds: Vec<Vec<usize>>,
    /// All pairs strictly below each pair.
    pub below: Vec<BTreeSet<usize>>,
    /// 𝒩(u,e): the vertices of 𝒩 reached from u through e.
    pub side: Vec<BTreeSet<CellRef>>,
}

impl Poset {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn find(&self, u: CellRef, e: EdgeRef) -> Option<usize> {
        self.index.get(&(u, e)).copied()
    }

    /// i ≺ j.
    pub fn less(&self, i: usize, j: usize) -> bool {
        self.below[j].contains(&i)
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        i == j || self.less(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.le(i, j) || self.le(j, i)
    }

    pub fn is_minimal(&self, i: usize) -> bool {
        self.preds[i].is_empty()
    }
}

/// Vertices of 𝒩 on the far side of the 𝒩-edge `e` as seen from `u`.
fn far_side(t: &Tree, n_set: &BTreeSet<CellRef>, u: CellRef, far: CellRef) -> BTreeSet<CellRef> {
    let mut seen = BTreeSet::from([far]);
    let mut stack = vec![far];
    while let Some(c) = stack.pop() {
        for x in t.neighbors(c) {
            if x != u && n_set.contains(&x) && seen.insert(x) {
                stack.push(x);
            }
        }
    }
    seen
}

pub fn build_poset(t: &Tree, ledger: &LocalLedger) -> Poset {
    let mut pairs = vec![];
    for &u in &ledger.n_set {
        for &far in &ledger.v(u).n_neighbors {
            pairs.push(Pair { u, e: t.edge_between(u, far).expect("adjacent"), far });
        }
    }
    let index: BTreeMap<(CellRef, EdgeRef), usize> = pairs.iter().enumerate().map(|(i, p)| ((p.u, p.e), i)).collect();
    let preds: Vec<Vec<usize>> = pairs
        .iter()
        .map(|p| {
            ledger
                .v(p.far)
                .n_neighbors
                .iter()
                .filter(|&&x| x != p.u)
                .map(|&x| index[&(p.far, t.edge_between(p.far, x).unwrap())])
                .collect()
        })
        .collect();
    let side: Vec<BTreeSet<CellRef>> = pairs.iter().map(|p| far_side(t, &ledger.n_set, p.u, p.far)).collect();
    // Predecessors have strictly smaller far sides, so sorting by size is a topological order.
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by_key(|&i| side[i].len());
    let mut below = vec![BTreeSet::new(); pairs.len()];
    for &i in &order {
        let mut acc = BTreeSet::new();
        for &p in &preds[i] {
            acc.insert(p);
            acc.extend(below[p].iter().copied());
        }
        below[i] = acc;
    }
    Poset { pairs, index, preds, below, side }
}

/// The order straight from its definition: (u',e') ≺ (u,e) iff γ_{u',u} contains e but not e'.
pub fn precedes_by_paths(t: &Tree, lower: &Pair, upper: &Pair) -> bool {
    let path = t.path(lower.u, upper.u);
    let edges = t.path_edges(&path);
    edges.contains(&upper.e) && !edges.contains(&lower.e)
}

/// α_{[x,y]} style products of a-values along γ_{x,y}.
pub fn path_dead_end_product(
    t: &Tree,
    ledger: &LocalLedger,
    x: CellRef,
    y: CellRef,
    include_x: bool,
    include_y: bool,
) -> BigInt {
    t.path(x, y)
        .into_iter()
        .filter(|&c| (c != x || include_x) && (c != y || include_y))
        .map(|c| ledger.v(c).a.clone())
        .product()
}

#[derive(Clone, Debug)]
pub struct PairData {
    pub c: Rational,
    pub m: BigInt,
    pub p: BigInt,
    pub p_prime: BigInt,
    pub eta: Rational,
    /// Δ̃(𝒩(u,e)).
    pub side_delta_tilde: BigInt,
    pub nonpositive: bool,
}

#[derive(Clone, Debug)]
pub struct CharacteristicTable {
    pub poset: Poset,
    pub data: Vec<PairData>,
}

impl CharacteristicTable {
    pub fn pair(&self, i: usize) -> &Pair {
        &self.poset.pairs[i]
    }

    pub fn at(&self, i: usize) -> &PairData {
        &self.data[i]
    }

    pub fn lookup(&self, u: CellRef, e: EdgeRef) -> Option<&PairData> {
        self.poset.find(u, e).map(|i| &self.data[i])
    }

    /// Indices of the pairs based at `u`, i.e. the edges ℰ_u.
    pub fn pairs_at(&self, u: CellRef) -> impl Iterator<Item = usize> + '_ {
        self.poset.pairs.iter().enumerate().filter(move |(_, p)| p.u == u).map(|(i, _)| i)
    }
}

pub fn characteristic_numbers(t: &Tree, ledger: &LocalLedger) -> Result<CharacteristicTable, AnalysisError> {
    let poset = build_poset(t, ledger);
    let mut order: Vec<usize> = (0..poset.len()).collect();
    order.sort_by_key(|&i| poset.side[i].len());
    let mut c: Vec<Option<Rational>> = vec![None; poset.len()];
    for &i in &order {
        let far = poset.pairs[i].far;
        let fv = ledger.v(far);
        let mut gens = vec![rat(fv.d.clone())];
        for &p in &poset.preds[i] {
            gens.push(c[p].clone().expect("predecessors come first"));
        }
        let g = rational_gcd(&gens);
        if !g.is_positive() {
            return Err(AnalysisError::Inconsistent("characteristic gcd vanished".into()));
        }
        c[i] = Some(g / rat(fv.a.clone()));
    }
    let mut sums = BeyondSums::new(t);
    let mut data = Vec::with_capacity(poset.len());
    for (i, pair) in poset.pairs.iter().enumerate() {
        let ci = c[i].take().expect("all pairs evaluated");
        let nu = rat(ledger.v(pair.u).n.clone());
        let m = nu / &ci;
        if !m.is_integer() || !m.is_positive() {
            return Err(AnalysisError::Inconsistent(format!(
                "M({}, {}) = {m} is not a positive integer",
                t.id(pair.u),
                t.edge_label(pair.e)
            )));
        }
        let p = sums.get(pair.u, pair.far);
        let p_prime = sums.get(pair.far, pair.u);
        for (name, val) in [("p", &p), ("p'", &p_prime)] {
            if !divides(&ci, &rat(val.clone())) {
                return Err(AnalysisError::Inconsistent(format!(
                    "c({}, {}) = {ci} does not divide {name} = {val}",
                    t.id(pair.u),
                    t.edge_label(pair.e)
                )));
            }
        }
        let side_delta_tilde = ledger.delta_tilde_of(&poset.side[i]);
        let eta = rat(side_delta_tilde.clone()) - (Rational::one() - &ci);
        data.push(PairData {
            m: m.to_integer(),
            nonpositive: !side_delta_tilde.is_positive(),
            c: ci,
            p,
            p_prime,
            eta,
            side_delta_tilde,
        });
    }
    Ok(CharacteristicTable { poset, data })
}

/// R(u,A) and Δ̄(u,A) for a set A of 𝒩-edges at u.
pub fn r_and_delta_bar(
    t: &Tree,
    ledger: &LocalLedger,
    table: &CharacteristicTable,
    u: CellRef,
    edges: &[EdgeRef],
) -> Result<(Rational, BigInt), AnalysisError> {
    let vd = ledger.v(u);
    let one = Rational::one();
    let mut r: Rational = vd.k.values().map(|k| &one - Rational::new(BigInt::one(), k.clone())).sum();
    r += &one - Rational::new(BigInt::one(), vd.a.clone());
    let mut union = BTreeSet::from([u]);
    for &e in edges {
        let i = table.poset.find(u, e).ok_or_else(|| {
            AnalysisError::Precondition(format!("edge {} is not an 𝒩-edge at `{}`", t.edge_label(e), t.id(u)))
        })?;
        r += &one - Rational::new(BigInt::one(), table.data[i].m.clone());
        union.extend(table.poset.side[i].iter().copied());
    }
    Ok((r, ledger.delta_tilde_of(&union)))
}

/// h(w,A) and ĥ(w,A): products over pairs (e,x) with x on every γ_{w,α} and e on none.
pub fn h_products(t: &Tree, w: CellRef, arrows: &[CellRef]) -> Result<(BigInt, BigInt), AnalysisError> {
    if arrows.is_empty() {
        return Err(AnalysisError::Precondition("h(w,A) needs a nonempty arrow set".into()));
    }
    let mut common: Option<BTreeSet<CellRef>> = None;
    let mut used = BTreeSet::new();
    for &a in arrows {
        if !t.is_one_arrow(a) {
            return Err(AnalysisError::Precondition(format!("`{}` is not a (1)-arrow", t.id(a))));
        }
        let path = t.path(w, a);
        used.extend(t.path_edges(&path));
        let cells: BTreeSet<CellRef> = path.into_iter().filter(|&c| t.is_vertex(c)).collect();
        common = Some(match common {
            None => cells,
            Some(prev) => prev.intersection(&cells).copied().collect(),
        });
    }
    let (mut h, mut h_hat) = (BigInt::one(), BigInt::one());
    for x in common.unwrap_or_default() {
        for &e in t.incident(x) {
            if !used.contains(&e) {
                h *= t.q(e, x);
                if x != w {
                    h_hat *= t.q(e, x);
                }
            }
        }
    }
    Ok((h, h_hat))
}

/// Σ x̂_{w,α} over α, by explicit paths.
pub fn x_hat_sum(t: &Tree, w: CellRef, arrows: &[CellRef]) -> BigInt {
    arrows.iter().map(|&a| compute_x_hat(t, w, a).expect("(1)-arrow")).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::fixtures::load;
    use crate::local::vertex_ledger;
    use crate::multiplicity::{classify, multiplicities};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn setup(name: &str) -> (Tree, LocalLedger, CharacteristicTable) {
        let t = load(name);
        let m = multiplicities(&t);
        let l = vertex_ledger(&t, &m, &classify(&t, &m)).unwrap();
        let c = characteristic_numbers(&t, &l).unwrap();
        (t, l, c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(rational_gcd(&[r(1, 2), r(1, 3)]), r(1, 6));
        let x = r(-7, 5);
        assert_eq!(rational_gcd(&[x.clone(), x.clone() * rat(2), x.clone() * rat(5)]), r(7, 5));
        assert_eq!(rational_gcd(&[]), r(0, 1));
        assert_eq!(rational_gcd(&[r(0, 1), r(3, 4)]), r(3, 4));
    }

    #[test]
    fn single_vertex_skeleton_has_empty_poset() {
        let (_, _, c) = setup("t_a");
        assert!(c.poset.is_empty());
    }

    #[test]
    fn t_d_table() {
        let (t, l, c) = setup("t_d");
        let (v0, w) = (t.root(), t.find("w").unwrap());
        let e = t.edge_between(v0, w).unwrap();
        assert_eq!(c.poset.len(), 2);
        let (iv, iw) = (c.poset.find(v0, e).unwrap(), c.poset.find(w, e).unwrap());
        assert!(c.poset.is_minimal(iv) && c.poset.is_minimal(iw));
        assert!(!c.poset.comparable(iv, iw));
        assert_eq!(path_dead_end_product(&t, &l, v0, w, true, true), BigInt::from(2));
        assert_eq!(c.at(iw).c, rat(6));
        assert_eq!(c.at(iw).m, BigInt::from(1));
        assert_eq!(c.at(iv).c, r(3, 2));
        assert_eq!(c.at(iv).m, BigInt::from(4));
        assert_eq!(c.at(iw).eta, rat(0));
        assert_eq!(c.at(iv).eta, r(3, 2));
        let (rw, bar_w) = r_and_delta_bar(&t, &l, &c, w, &[e]).unwrap();
        assert_eq!((rw, bar_w), (rat(1), BigInt::from(-4)));
        let (rv, _) = r_and_delta_bar(&t, &l, &c, v0, &[e]).unwrap();
        assert_eq!(rv, r(3, 4));
        let foreign = t.edge_between(w, t.find("u").unwrap()).unwrap();
        assert!(r_and_delta_bar(&t, &l, &c, w, &[foreign]).is_err());
    }

    #[test]
    fn r_vanishes_without_contributions() {
        let (t, l, c) = setup("t_c_1_1_1");
        let (rv, _) = r_and_delta_bar(&t, &l, &c, t.root(), &[]).unwrap();
        // root of T_C(1,1,1) has a = 1 but σ > 0, so R is just the k-terms
        assert_eq!(rv, r(2, 3) * rat(3));
        let (t, l, c) = setup("t_a");
        assert_eq!(r_and_delta_bar(&t, &l, &c, t.root(), &[]).unwrap().0, rat(0));
    }

    #[test]
    fn h_products_examples() {
        let t = load("t_b_1_2");
        let arrows: Vec<CellRef> = t.one_arrows().collect();
        assert_eq!(h_products(&t, t.root(), &arrows).unwrap().0, BigInt::from(1));
        let beta = t.find("beta1").unwrap();
        let single = h_products(&t, t.root(), &[beta]).unwrap();
        assert_eq!(single.0, crate::multiplicity::compute_x(&t, t.root(), beta).unwrap());
        assert_eq!(single.1, compute_x_hat(&t, t.root(), beta).unwrap());

        let t = load("t_c_1_2_3");
        let u2 = t.find("u2").unwrap();
        let own: Vec<CellRef> = ["beta2_1", "beta2_2"].iter().map(|s| t.find(s).unwrap()).collect();
        let (h, h_hat) = h_products(&t, u2, &own).unwrap();
        // dead end (1) and root-edge decoration (-2) near u2
        assert_eq!(h, BigInt::from(-2));
        assert_eq!(h_hat, BigInt::from(1));
        assert!(h_products(&t, u2, &[]).is_err());
    }
}
