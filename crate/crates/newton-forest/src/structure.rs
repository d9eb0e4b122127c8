//! Global structure of 𝒩: trivial paths, teeth, the skeleton and the decomposition into combs.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::characteristic::{r_and_delta_bar, CharacteristicTable, Rational};
use crate::error::AnalysisError;
use crate::local::LocalLedger;
use crate::tree::{CellRef, EdgeRef, Tree};

#[derive(Clone, Debug)]
pub struct StructureLedger {
    /// Z: vertices of 𝒩 with ε = 1 and Δ̃ ≤ 0.
    pub z: BTreeSet<CellRef>,
    /// Γ, each path listed from its loose end z₁ to the vertex of W it hangs from.
    pub gamma: Vec<Vec<CellRef>>,
    pub w: BTreeSet<CellRef>,
    /// V(w) for w ∈ W.
    pub v: BTreeMap<CellRef, BTreeSet<CellRef>>,
    /// V̄(w) for w ∈ W; every other vertex x of 𝒩 has V̄(x) = {x}.
    pub v_bar: BTreeMap<CellRef, BTreeSet<CellRef>>,
    pub omega: BTreeSet<CellRef>,
    pub is_brush: bool,
    pub skeleton: BTreeSet<CellRef>,
    pub delta_star: BTreeMap<CellRef, usize>,
    /// t(v): number of 𝒩-edges at v lying on a path of Γ.
    pub t: BTreeMap<CellRef, usize>,
    pub initial: BTreeSet<CellRef>,
    /// Teeth as pair indices of the characteristic table.
    pub teeth: BTreeSet<usize>,
    /// R(u,{e}) for every pair, indexed like the table.
    pub r_single: Vec<Rational>,
}

impl StructureLedger {
    /// V̄(x) for any vertex of 𝒩.
    pub fn v_bar_of(&self, x: CellRef) -> BTreeSet<CellRef> {
        self.v_bar.get(&x).cloned().unwrap_or_else(|| BTreeSet::from([x]))
    }

    pub fn is_tooth(&self, i: usize) -> bool {
        self.teeth.contains(&i)
    }

    /// Pairs (u,e) with u in the skeleton.
    pub fn skeleton_pairs<'a>(&'a self, table: &'a CharacteristicTable) -> impl Iterator<Item = usize> + 'a {
        (0..table.poset.len()).filter(move |&i| self.skeleton.contains(&table.pair(i).u))
    }
}

/// Every Δ̃-trivial path that starts at `z`, shortest first.
pub fn trivial_paths_from(ledger: &LocalLedger, z: CellRef) -> Vec<Vec<CellRef>> {
    let vz = ledger.v(z);
    if vz.epsilon != 1 {
        return vec![];
    }
    let mut path = vec![z, vz.n_neighbors[0]];
    let mut out = vec![];
    loop {
        out.push(path.clone());
        let last = *path.last().unwrap();
        let prev = path[path.len() - 2];
        let lv = ledger.v(last);
        if lv.epsilon != 2 || !lv.delta_tilde.is_zero() {
            break;
        }
        let next = *lv.n_neighbors.iter().find(|&&x| x != prev).expect("ε = 2");
        path.push(next);
    }
    out
}

fn path_is_in_gamma(t: &Tree, ledger: &LocalLedger, p: &[CellRef]) -> bool {
    let n = p.len();
    !ledger.delta_tilde(p[0]).is_positive()
        && ledger.delta_tilde_of(p.iter()).is_positive()
        && t.less_than(p[n - 1], p[n - 2])
}

/// The endpoint form: Δ̃(z₁) ≤ 0 < Δ̃(zₙ) and zₙ₋₁ > zₙ.
fn path_is_in_gamma_by_ends(t: &Tree, ledger: &LocalLedger, p: &[CellRef]) -> bool {
    let n = p.len();
    !ledger.delta_tilde(p[0]).is_positive()
        && ledger.delta_tilde(p[n - 1]).is_positive()
        && t.less_than(p[n - 1], p[n - 2])
}

pub fn structure_ledger(
    t: &Tree,
    ledger: &LocalLedger,
    table: &CharacteristicTable,
) -> Result<StructureLedger, AnalysisError> {
    let z: BTreeSet<CellRef> = ledger
        .n_set
        .iter()
        .copied()
        .filter(|&x| ledger.v(x).epsilon == 1 && !ledger.delta_tilde(x).is_positive())
        .collect();

    let mut gamma = vec![];
    for &x in &ledger.n_set {
        for p in trivial_paths_from(ledger, x) {
            let by_def = path_is_in_gamma(t, ledger, &p);
            if by_def != path_is_in_gamma_by_ends(t, ledger, &p) {
                return Err(AnalysisError::Inconsistent(format!(
                    "the two descriptions of Γ disagree on the path starting at `{}`",
                    t.id(p[0])
                )));
            }
            if by_def {
                gamma.push(p);
            }
        }
    }

    let mut w = BTreeSet::new();
    let mut v: BTreeMap<CellRef, BTreeSet<CellRef>> = BTreeMap::new();
    let mut v_bar: BTreeMap<CellRef, BTreeSet<CellRef>> = BTreeMap::new();
    let mut teeth = BTreeSet::new();
    let mut gamma_edges = BTreeSet::new();
    for p in &gamma {
        let n = p.len();
        let end = p[n - 1];
        w.insert(end);
        v.entry(end).or_default().insert(p[0]);
        v_bar.entry(end).or_default().extend(p.iter().copied());
        let e = t.edge_between(end, p[n - 2]).expect("path cells are adjacent");
        teeth.insert(table.poset.find(end, e).expect("tooth is a pair"));
        gamma_edges.extend(t.path_edges(p));
    }

    let absorbed: BTreeSet<CellRef> = v.values().flatten().copied().collect();
    let omega: BTreeSet<CellRef> = z.difference(&absorbed).copied().collect();
    let is_brush = v_bar.values().any(|s| *s == ledger.n_set);
    let removed: BTreeSet<CellRef> =
        v_bar.iter().flat_map(|(wv, s)| s.iter().copied().filter(move |x| x != wv)).collect();
    let skeleton: BTreeSet<CellRef> = ledger.n_set.difference(&removed).copied().collect();

    let mut delta_star = BTreeMap::new();
    let mut tcount = BTreeMap::new();
    for &x in &ledger.n_set {
        let mut typed = 0;
        for &y in &ledger.v(x).n_neighbors {
            if gamma_edges.contains(&t.edge_between(x, y).unwrap()) {
                typed += 1;
            }
        }
        tcount.insert(x, typed);
        delta_star.insert(x, ledger.v(x).epsilon - typed);
    }

    let initial = if omega.is_empty() {
        skeleton.iter().copied().filter(|x| delta_star[x] <= 1).collect()
    } else {
        omega.clone()
    };

    let mut r_single = Vec::with_capacity(table.poset.len());
    for (i, pair) in table.poset.pairs.iter().enumerate() {
        let (r, _) = r_and_delta_bar(t, ledger, table, pair.u, &[pair.e])?;
        debug_assert_eq!(table.poset.find(pair.u, pair.e), Some(i));
        r_single.push(r);
    }

    Ok(StructureLedger {
        z,
        gamma,
        w,
        v,
        v_bar,
        omega,
        is_brush,
        skeleton,
        delta_star,
        t: tcount,
        initial,
        teeth,
        r_single,
    })
}

/// Checks clauses (a)–(c) of the comb condition at one intermediate pair (v,f) seen from `top`.
fn comb_clause_holds(
    t: &Tree,
    ledger: &LocalLedger,
    table: &CharacteristicTable,
    s: &StructureLedger,
    top: CellRef,
    k: usize,
) -> Result<bool, AnalysisError> {
    let pair = table.pair(k);
    let v = pair.u;
    let r = &s.r_single[k];
    match ledger.v(v).epsilon {
        2 => Ok(*r < Rational::one()),
        3 => {
            if !r.is_zero() {
                return Ok(false);
            }
            let on_path: BTreeSet<EdgeRef> = t.path_edges(&t.path(top, v)).into_iter().collect();
            let others: Vec<EdgeRef> = ledger
                .v(v)
                .n_neighbors
                .iter()
                .map(|&y| t.edge_between(v, y).unwrap())
                .filter(|e| *e != pair.e && !on_path.contains(e))
                .collect();
            if others.len() != 1 {
                return Err(AnalysisError::Inconsistent(format!(
                    "comb test at `{}`: expected one remaining edge, found {}",
                    t.id(v),
                    others.len()
                )));
            }
            let g = table.poset.find(v, others[0]).expect("𝒩-edge");
            Ok(s.is_tooth(g))
        }
        _ => Ok(false),
    }
}

/// Whether pair `upper` is a comb over pair `lower`, straight from the definition.
/// Returns `Ok(false)` when `upper` lies strictly below `lower`.
pub fn is_comb_over(
    t: &Tree,
    ledger: &LocalLedger,
    table: &CharacteristicTable,
    s: &StructureLedger,
    upper: usize,
    lower: usize,
) -> Result<bool, AnalysisError> {
    let poset = &table.poset;
    if !poset.comparable(upper, lower) {
        return Err(AnalysisError::Precondition(format!(
            "pairs ({}, {}) and ({}, {}) are not comparable",
            t.id(table.pair(upper).u),
            t.edge_label(table.pair(upper).e),
            t.id(table.pair(lower).u),
            t.edge_label(table.pair(lower).e)
        )));
    }
    if !poset.le(lower, upper) {
        return Ok(false);
    }
    let top = table.pair(upper).u;
    for &k in &poset.below[upper] {
        if poset.le(lower, k) && !comb_clause_holds(t, ledger, table, s, top, k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The one-step test: a non-minimal pair over one of its immediate predecessors.
pub fn is_immediate_comb_step(table: &CharacteristicTable, s: &StructureLedger, upper: usize, pred: usize) -> bool {
    let preds = &table.poset.preds[upper];
    debug_assert!(preds.contains(&pred));
    match preds.len() {
        1 => s.r_single[pred] < Rational::one(),
        2 => {
            let other = if preds[0] == pred { preds[1] } else { preds[0] };
            s.r_single[pred].is_zero() && s.is_tooth(other)
        }
        _ => false,
    }
}

/// A rooted tree on class indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientTree {
    pub root: usize,
    pub adjacency: Vec<BTreeSet<usize>>,
}

impl QuotientTree {
    pub fn from_edges(n: usize, root: usize, edges: &[(usize, usize)]) -> Self {
        let mut adjacency = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            adjacency[a].insert(b);
            adjacency[b].insert(a);
        }
        QuotientTree { root, adjacency }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn is_tree(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        let edges: usize = self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2;
        let mut seen = BTreeSet::from([self.root]);
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            for &y in &self.adjacency[x] {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        edges + 1 == n && seen.len() == n
    }

    /// 2λ + n₂ − 2, with λ the valency-1 vertices (root included) and n₂ the non-root valency-2 vertices.
    pub fn h(&self) -> i64 {
        let lambda = self.adjacency.iter().filter(|a| a.len() == 1).count() as i64;
        let n2 = self.adjacency.iter().enumerate().filter(|(i, a)| *i != self.root && a.len() == 2).count() as i64;
        2 * lambda + n2 - 2
    }
}

#[derive(Clone, Debug)]
pub struct CombClass {
    /// Pair indices, greatest first.
    pub pairs: Vec<usize>,
    pub u: CellRef,
    pub c_dot: BigInt,
    pub y: BTreeSet<CellRef>,
    pub teeth: usize,
}

impl CombClass {
    pub fn greatest(&self) -> usize {
        self.pairs[0]
    }

    pub fn least(&self) -> usize {
        *self.pairs.last().unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombStatistics {
    pub b: i64,
    pub leaves: i64,
    pub o1: usize,
    pub o2: usize,
    pub o_gt2: usize,
    pub teeth_excess: i64,
    pub x0: BigInt,
    /// x_C for every class other than C₀, by class index.
    pub x_c: BTreeMap<usize, BigInt>,
    pub h: i64,
}

#[derive(Clone, Debug)]
pub struct CombDecomposition {
    pub z: CellRef,
    /// 𝒪(𝒯,z) as pair indices, one per skeleton vertex other than z.
    pub ordered: Vec<usize>,
    /// Classes sorted by the cell of their greatest pair.
    pub classes: Vec<CombClass>,
    pub c0: Option<usize>,
    pub u0: Option<CellRef>,
    pub quotient: Option<QuotientTree>,
    pub stats: Option<CombStatistics>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = x;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

pub fn comb_decomposition(
    t: &Tree,
    ledger: &LocalLedger,
    table: &CharacteristicTable,
    s: &StructureLedger,
    z: CellRef,
) -> Result<CombDecomposition, AnalysisError> {
    if !s.initial.contains(&z) {
        return Err(AnalysisError::Precondition(format!("`{}` is not an initial vertex", t.id(z))));
    }
    let poset = &table.poset;
    let mut ordered = vec![];
    let mut pair_of: BTreeMap<CellRef, usize> = BTreeMap::new();
    for &u in &s.skeleton {
        if u == z {
            continue;
        }
        let path = t.path(u, z);
        let e = t.edge_between(u, path[1]).unwrap();
        let i = poset.find(u, e).expect("skeleton edges join vertices of 𝒩");
        pair_of.insert(u, i);
        ordered.push(i);
    }
    if ordered.is_empty() {
        return Ok(CombDecomposition { z, ordered, classes: vec![], c0: None, u0: None, quotient: None, stats: None });
    }

    // Union along immediate comb steps (u,e_u) -> (u', e_u') with u' the next vertex toward z.
    let slot: BTreeMap<usize, usize> = ordered.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut parent: Vec<usize> = (0..ordered.len()).collect();
    for (k, &i) in ordered.iter().enumerate() {
        let far = table.pair(i).far;
        if let Some(&j) = pair_of.get(&far) {
            if is_immediate_comb_step(table, s, i, j) {
                let (a, b) = (find(&mut parent, k), find(&mut parent, slot[&j]));
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..ordered.len() {
        let r = find(&mut parent, k);
        groups.entry(r).or_default().push(ordered[k]);
    }
    let class_of_pair: BTreeMap<usize, usize> = {
        let mut m = BTreeMap::new();
        for (g, members) in groups.values().enumerate() {
            for &i in members {
                m.insert(i, g);
            }
        }
        m
    };

    // Cross-check against the definition on every comparable pair of 𝒪.
    for &i in &ordered {
        for &j in &ordered {
            if i == j || !poset.comparable(i, j) {
                continue;
            }
            let related = is_comb_over(t, ledger, table, s, i, j)? || is_comb_over(t, ledger, table, s, j, i)?;
            if related != (class_of_pair[&i] == class_of_pair[&j]) {
                return Err(AnalysisError::Inconsistent(format!(
                    "comb classes of `{}` and `{}` disagree with the comb relation",
                    t.id(table.pair(i).u),
                    t.id(table.pair(j).u)
                )));
            }
        }
    }

    let mut classes = vec![];
    for mut members in groups.into_values() {
        members.sort_by(|&a, &b| {
            if poset.less(a, b) {
                std::cmp::Ordering::Greater
            } else if poset.less(b, a) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Equal
            }
        });
        for w in members.windows(2) {
            if !poset.less(w[1], w[0]) {
                return Err(AnalysisError::Inconsistent("a comb class is not totally ordered".into()));
            }
        }
        let (g, l) = (members[0], *members.last().unwrap());
        let u = table.pair(g).u;
        let c_dot = &table.at(l).c - &table.at(g).c;
        if !c_dot.is_integer() {
            return Err(AnalysisError::Inconsistent(format!("ċ of the comb at `{}` is {c_dot}", t.id(u))));
        }
        let mut y = s.v_bar_of(u);
        y.extend(poset.side[g].difference(&poset.side[l]).copied());
        let teeth = members.iter().filter(|&&i| table.pair(i).u != u && s.t[&table.pair(i).u] > 0).count();
        classes.push(CombClass { pairs: members, u, c_dot: c_dot.to_integer(), y, teeth });
    }
    classes.sort_by_key(|c| c.u);
    let index_of: BTreeMap<usize, usize> =
        classes.iter().enumerate().flat_map(|(ci, c)| c.pairs.iter().map(move |&i| (i, ci))).collect();

    let z_next =
        *ledger.v(z).n_neighbors.iter().find(|x| s.skeleton.contains(x)).expect("|S| > 1 gives z a skeleton neighbour");
    let c0 = index_of[&pair_of[&z_next]];
    let u0 = classes[c0].u;

    let mut qedges = BTreeSet::new();
    for (&x, &i) in &pair_of {
        for &y in &ledger.v(x).n_neighbors {
            if let Some(&j) = pair_of.get(&y) {
                let (a, b) = (index_of[&i], index_of[&j]);
                if a != b {
                    qedges.insert((a.min(b), a.max(b)));
                }
            }
        }
    }
    let quotient = QuotientTree::from_edges(classes.len(), c0, &qedges.into_iter().collect::<Vec<_>>());
    if !quotient.is_tree() {
        return Err(AnalysisError::Inconsistent("the quotient of the skeleton by combs is not a tree".into()));
    }

    let mut d =
        CombDecomposition { z, ordered, classes, c0: Some(c0), u0: Some(u0), quotient: Some(quotient), stats: None };
    if d.classes.len() > 1 {
        let st = statistics(ledger, table, s, &d)?;
        let lhs = &ledger.delta_tilde_total;
        let mut rhs = BigInt::from(st.b + 2 * (st.leaves - 2) + st.o2 as i64 + st.teeth_excess) + &st.x0;
        for (ci, x) in &st.x_c {
            rhs += &d.classes[*ci].c_dot + x;
        }
        if *lhs != rhs {
            return Err(AnalysisError::Inconsistent(format!(
                "comb decomposition gives Δ̃(𝒩) = {rhs}, ledger has {lhs}"
            )));
        }
        if st.h != st.b + 2 * (st.leaves - 2) + st.o2 as i64 {
            return Err(AnalysisError::Inconsistent(format!("H(Õ) = {} disagrees with B + 2(L−2) + |Ō₂|", st.h)));
        }
        d.stats = Some(st);
    }
    Ok(d)
}

fn statistics(
    ledger: &LocalLedger,
    table: &CharacteristicTable,
    s: &StructureLedger,
    d: &CombDecomposition,
) -> Result<CombStatistics, AnalysisError> {
    let c0 = d.c0.expect("nonempty decomposition");
    let u0 = d.u0.unwrap();
    let ds = |x: CellRef| s.delta_star[&x] as i64;
    let b = if ds(u0) == 2 { 2 } else { 0 };
    let leaves = s.skeleton.iter().filter(|&&x| ds(x) == 1).count() as i64;
    let (mut o1, mut o2, mut o_gt2, mut teeth_excess) = (0, 0, 0, 0i64);
    let mut x_c = BTreeMap::new();
    for (ci, c) in d.classes.iter().enumerate() {
        if ci == c0 {
            continue;
        }
        let tu = s.t[&c.u] as i64;
        match ds(c.u) {
            1 => {
                o1 += 1;
                teeth_excess += (tu - 2).max(0);
            }
            2 => {
                o2 += 1;
                teeth_excess += (tu - 1).max(0);
            }
            _ => {
                o_gt2 += 1;
                teeth_excess += tu;
            }
        }
        let eps = ledger.v(c.u).epsilon as i64;
        x_c.insert(ci, ledger.delta_tilde_of(&s.v_bar_of(c.u)) - BigInt::from(1.max(eps - 2)));
    }
    let g0 = d.classes[c0].greatest();
    let mut region = s.v_bar_of(u0);
    region.extend(table.poset.side[g0].iter().copied());
    let x0 = ledger.delta_tilde_of(&region) - BigInt::from((ds(u0) - 3).abs());
    let h = d.quotient.as_ref().map(QuotientTree::h).unwrap_or_default();
    Ok(CombStatistics { b, leaves, o1, o2, o_gt2, teeth_excess, x0, x_c, h })
}

/// H(Õ) of a decomposition with at least two combs.
pub fn quotient_tree_h(d: &CombDecomposition) -> Result<i64, AnalysisError> {
    match (&d.quotient, &d.stats) {
        (Some(q), Some(st)) if q.len() > 1 => {
            let h = q.h();
            if h != st.b + 2 * (st.leaves - 2) + st.o2 as i64 {
                return Err(AnalysisError::Inconsistent("H(Õ) disagrees with B + 2(L−2) + |Ō₂|".into()));
            }
            Ok(h)
        }
        _ => Err(AnalysisError::Precondition("H needs at least two combs".into())),
    }
}

/// Whether a class C satisfies ċ(C) = 0 exactly when its lower members are all ε = 2, Δ̃ = 0.
pub fn c_dot_zero_matches(ledger: &LocalLedger, table: &CharacteristicTable, c: &CombClass) -> bool {
    let flat = c.pairs.iter().skip(1).all(|&i| {
        let x = table.pair(i).u;
        ledger.v(x).epsilon == 2 && ledger.delta_tilde(x).is_zero()
    });
    flat == c.c_dot.is_zero()
}

/// Rooted shapes used to sanity-check H; returns the number of leaves other than the root.
pub fn non_root_leaves(q: &QuotientTree) -> usize {
    q.adjacency.iter().enumerate().filter(|(i, a)| *i != q.root && a.len() == 1).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristic::characteristic_numbers;
    use crate::io::fixtures::load;
    use crate::local::vertex_ledger;
    use crate::multiplicity::{classify, multiplicities};

    struct Fx {
        t: Tree,
        l: LocalLedger,
        c: CharacteristicTable,
        s: StructureLedger,
    }

    fn setup(name: &str) -> Fx {
        let t = load(name);
        let m = multiplicities(&t);
        let l = vertex_ledger(&t, &m, &classify(&t, &m)).unwrap();
        let c = characteristic_numbers(&t, &l).unwrap();
        let s = structure_ledger(&t, &l, &c).unwrap();
        Fx { t, l, c, s }
    }

    fn ids(t: &Tree, set: &BTreeSet<CellRef>) -> Vec<String> {
        set.iter().map(|&c| t.id(c).to_string()).collect()
    }

    #[test]
    fn t_d_structure() {
        let f = setup("t_d");
        assert_eq!(ids(&f.t, &f.s.z), ["v0"]);
        assert!(f.s.gamma.is_empty());
        assert!(f.s.w.is_empty());
        assert_eq!(ids(&f.t, &f.s.omega), ["v0"]);
        assert!(!f.s.is_brush);
        let mut sk = ids(&f.t, &f.s.skeleton);
        sk.sort();
        assert_eq!(sk, ["v0", "w"]);
        assert_eq!(ids(&f.t, &f.s.initial), ["v0"]);
    }

    #[test]
    fn t_a_structure() {
        let f = setup("t_a");
        assert!(f.s.z.is_empty());
        assert!(f.s.omega.is_empty());
        assert_eq!(ids(&f.t, &f.s.skeleton), ["v0"]);
        assert_eq!(ids(&f.t, &f.s.initial), ["v0"]);
        let v0 = f.t.root();
        let d = comb_decomposition(&f.t, &f.l, &f.c, &f.s, v0).unwrap();
        assert!(d.classes.is_empty());
        assert!(quotient_tree_h(&d).is_err());
    }

    #[test]
    fn t_d_decomposition() {
        let f = setup("t_d");
        let v0 = f.t.root();
        let w = f.t.find("w").unwrap();
        let d = comb_decomposition(&f.t, &f.l, &f.c, &f.s, v0).unwrap();
        assert_eq!(d.classes.len(), 1);
        let c0 = &d.classes[d.c0.unwrap()];
        assert_eq!(d.u0, Some(w));
        assert_eq!(c0.pairs.len(), 1);
        assert_eq!(f.c.pair(c0.pairs[0]).u, w);
        assert!(c0.c_dot.is_zero());
        assert_eq!(c0.y, BTreeSet::from([w]));
        assert!(comb_decomposition(&f.t, &f.l, &f.c, &f.s, w).is_err());
    }

    #[test]
    fn t_d_comb_relation() {
        let f = setup("t_d");
        for i in 0..f.c.poset.len() {
            assert!(is_comb_over(&f.t, &f.l, &f.c, &f.s, i, i).unwrap());
        }
        // The two pairs of T_D point in opposite directions along one edge.
        assert_eq!(f.c.poset.len(), 2);
        assert!(is_comb_over(&f.t, &f.l, &f.c, &f.s, 0, 1).is_err());
    }

    #[test]
    fn v_bar_partitions_n_on_fixtures() {
        for (name, _) in crate::io::fixtures::ALL {
            let f = setup(name);
            let mut seen = BTreeSet::new();
            for &x in &f.s.skeleton {
                for y in f.s.v_bar_of(x) {
                    assert!(seen.insert(y), "{name}: V̄ sets overlap");
                }
            }
            assert_eq!(seen, f.l.n_set, "{name}");
            for &x in &f.l.n_set {
                assert_eq!(f.s.delta_star[&x] + f.s.t[&x], f.l.v(x).epsilon);
            }
        }
    }

    fn shape(n: usize, edges: &[(usize, usize)]) -> QuotientTree {
        QuotientTree::from_edges(n, 0, edges)
    }

    #[test]
    fn h_on_small_rooted_trees() {
        // (shape, H) for every rooted tree with 2 to 5 vertices, root = 0.
        let rows: Vec<(QuotientTree, i64)> = vec![
            (shape(2, &[(0, 1)]), 2),
            (shape(3, &[(0, 1), (0, 2)]), 2),
            (shape(3, &[(0, 1), (1, 2)]), 3),
            (shape(4, &[(0, 1), (0, 2), (0, 3)]), 4),
            (shape(4, &[(0, 1), (0, 2), (2, 3)]), 3),
            (shape(4, &[(0, 1), (1, 2), (1, 3)]), 4),
            (shape(4, &[(0, 1), (1, 2), (2, 3)]), 4),
            (shape(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]), 6),
            (shape(5, &[(0, 1), (0, 2), (0, 3), (3, 4)]), 5),
            (shape(5, &[(0, 1), (0, 2), (2, 3), (2, 4)]), 4),
            (shape(5, &[(0, 1), (0, 2), (2, 3), (3, 4)]), 4),
            (shape(5, &[(0, 1), (1, 2), (0, 3), (3, 4)]), 4),
            (shape(5, &[(0, 1), (1, 2), (1, 3), (1, 4)]), 6),
            (shape(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]), 5),
            (shape(5, &[(0, 1), (1, 2), (2, 3), (2, 4)]), 5),
            (shape(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]), 5),
        ];
        for (q, h) in rows {
            assert!(q.is_tree());
            assert_eq!(q.h(), h, "{q:?}");
            // B + 2(L−2) + |Ō₂| read off the shape: L counts the leaves of S, one of which is z.
            let b = if q.adjacency[q.root].len() == 1 { 2 } else { 0 };
            let l = non_root_leaves(&q) as i64 + 1;
            let o2 = q.adjacency.iter().enumerate().filter(|(i, a)| *i != q.root && a.len() == 2).count() as i64;
            assert_eq!(b + 2 * (l - 2) + o2, h, "{q:?}");
        }
    }
}
