//! Classification results: the root fan when the skeleton is a single vertex, the canonical
//! families, the shapes of small comb quotients, and the chain structure of rational trees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::analysis::Analysis;
use crate::audit::{Outcome, Sink};
use crate::characteristic::Rational;
use crate::error::AnalysisError;
use crate::local::VertexData;
use crate::structure::{comb_decomposition, CombDecomposition, QuotientTree};
use crate::tree::{CellRef, EdgeRef};

/// Δ̃(𝒩) = 0 and the dicritical degrees are coprime.
pub fn is_rational_tree(a: &Analysis) -> bool {
    a.ledger.is_rational_candidate()
}

/// One root edge seen through the fan at v0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanEdge {
    pub edge: EdgeRef,
    pub far: CellRef,
    pub dicritical: bool,
    pub a: BigInt,
    pub d: BigInt,
    /// N / d.
    pub k: BigInt,
    /// Decoration of the edge near its far end.
    pub x: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootFanData {
    pub n: BigInt,
    /// Number of root edges.
    pub delta: usize,
    pub edges: Vec<FanEdge>,
}

impl RootFanData {
    /// 2 + Σ [(δ − 2)a − 1] d over the root edges.
    pub fn delta_tilde_by_fan(&self) -> BigInt {
        let spread = BigInt::from(self.delta as i64 - 2);
        self.edges.iter().fold(BigInt::from(2), |acc, f| acc + (&spread * &f.a - 1) * &f.d)
    }

    pub fn sorted_d(&self) -> Vec<BigInt> {
        let mut d: Vec<BigInt> = self.edges.iter().map(|f| f.d.clone()).collect();
        d.sort();
        d
    }
}

fn integral(x: &Rational, what: impl FnOnce() -> String) -> Result<BigInt, AnalysisError> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(AnalysisError::Inconsistent(format!("{} is {x}, expected an integer", what())))
    }
}

/// The fan data at the root, defined only when the skeleton is the root alone.
pub fn root_fan_data(a: &Analysis) -> Result<RootFanData, AnalysisError> {
    let t = &a.tree;
    let v0 = t.root();
    if a.structure.skeleton.len() != 1 {
        return Err(AnalysisError::Precondition(format!(
            "the root fan needs a one-vertex skeleton, this one has {} vertices",
            a.structure.skeleton.len()
        )));
    }
    let n = a.ledger.v(v0).n.clone();
    let mut edges = vec![];
    for &e in t.incident(v0) {
        let far = t.other_end(e, v0);
        let x = t.q(e, far).clone();
        let (dicritical, fa, d) = if a.ledger.d_set.contains(&far) {
            let dead = t.dead_end(far).map_or_else(BigInt::one, |de| t.q(de, far).clone());
            (true, dead, BigInt::from(a.ledger.degree[&far]))
        } else {
            let pd = a.table.lookup(v0, e).ok_or_else(|| {
                AnalysisError::Inconsistent(format!("root edge {} has no characteristic pair", t.edge_label(e)))
            })?;
            let d = integral(&pd.c, || format!("c(v0, {})", t.edge_label(e)))?;
            let fa = integral(&Rational::new(pd.p.clone(), d.clone()), || format!("p/c on {}", t.edge_label(e)))?;
            (false, fa, d)
        };
        let (k, r) = n.div_rem(&d);
        if !r.is_zero() {
            return Err(AnalysisError::Inconsistent(format!("d = {d} does not divide N = {n} on {}", t.edge_label(e))));
        }
        edges.push(FanEdge { edge: e, far, dicritical, a: fa, d, k, x });
    }
    let fan = RootFanData { n, delta: edges.len(), edges };
    let by_fan = fan.delta_tilde_by_fan();
    if &by_fan != a.delta_tilde() {
        return Err(AnalysisError::Inconsistent(format!(
            "the root fan gives Δ̃(𝒩) = {by_fan}, the ledger has {}",
            a.delta_tilde()
        )));
    }
    Ok(fan)
}

/// The three canonical families of rational trees and the three Δ̃ = 2 fans.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Canonical {
    TreeA,
    /// Dead-end decorations, smaller first.
    TreeB {
        a1: BigInt,
        a2: BigInt,
    },
    /// Degrees, ascending.
    TreeC {
        d: [usize; 3],
    },
}

impl fmt::Display for Canonical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Canonical::TreeA => write!(f, "T_A"),
            Canonical::TreeB { a1, a2 } => write!(f, "T_B({a1},{a2})"),
            Canonical::TreeC { d } => write!(f, "T_C({},{},{})", d[0], d[1], d[2]),
        }
    }
}

const FANS_OF_THREE: [[usize; 3]; 3] = [[1, 1, 1], [1, 1, 2], [1, 2, 3]];

/// Recognizes the canonical trees by their exact decorations.
pub fn recognize_canonical(a: &Analysis) -> Option<Canonical> {
    let t = &a.tree;
    let v0 = t.root();
    if a.ledger.n_set.len() != 1 {
        return None;
    }
    // (dead end, degree, decoration near the dicritical)
    let mut fan: Vec<(BigInt, usize, BigInt)> = vec![];
    for &e in t.incident(v0) {
        let u = t.other_end(e, v0);
        if !a.ledger.d_set.contains(&u) || !t.q(e, v0).is_one() {
            return None;
        }
        let dead = t.dead_end(u)?;
        let degree = a.ledger.degree[&u];
        let only_arrows = t.neighbors(u).filter(|&x| x != v0).all(|x| t.is_arrow(x));
        if !only_arrows || t.valency(u) != degree + 2 || t.dead_ends(u).count() != 1 {
            return None;
        }
        fan.push((t.q(dead, u).clone(), degree, t.q(e, u).clone()));
    }
    match fan.as_slice() {
        [(a1, 1, x)] if a1.is_one() && x.is_zero() => Some(Canonical::TreeA),
        [(a1, 1, x1), (a2, 1, x2)] => {
            let ok = *x1 == -a2 && *x2 == -a1 && a1.gcd(a2).is_one();
            ok.then(|| Canonical::TreeB { a1: a1.min(a2).clone(), a2: a1.max(a2).clone() })
        }
        [_, _, _] => {
            let total: usize = fan.iter().map(|f| f.1).sum();
            let exact =
                fan.iter().all(|(dead, d, x)| dead.is_one() && x * BigInt::from(*d) == -BigInt::from(total - d));
            let mut d = [fan[0].1, fan[1].1, fan[2].1];
            d.sort_unstable();
            (exact && FANS_OF_THREE.contains(&d)).then_some(Canonical::TreeC { d })
        }
        _ => None,
    }
}

/// Rooted shapes of quotient trees with up to five combs, root labelled 0.
const QUOTIENT_ROWS: [(char, &[(usize, usize)]); 16] = [
    ('a', &[(0, 1)]),
    ('b', &[(0, 1), (0, 2)]),
    ('c', &[(0, 1), (1, 2)]),
    ('d', &[(0, 1), (0, 2), (0, 3)]),
    ('e', &[(0, 1), (0, 2), (2, 3)]),
    ('f', &[(0, 1), (1, 2), (1, 3)]),
    ('g', &[(0, 1), (1, 2), (2, 3)]),
    ('h', &[(0, 1), (0, 2), (0, 3), (0, 4)]),
    ('i', &[(0, 1), (0, 2), (0, 3), (3, 4)]),
    ('j', &[(0, 1), (0, 2), (2, 3), (2, 4)]),
    ('k', &[(0, 1), (0, 2), (2, 3), (3, 4)]),
    ('l', &[(0, 1), (1, 2), (0, 3), (3, 4)]),
    ('m', &[(0, 1), (1, 2), (1, 3), (1, 4)]),
    ('n', &[(0, 1), (1, 2), (1, 3), (3, 4)]),
    ('o', &[(0, 1), (1, 2), (2, 3), (2, 4)]),
    ('p', &[(0, 1), (1, 2), (2, 3), (3, 4)]),
];

fn rooted_code(adj: &[BTreeSet<usize>], x: usize, parent: Option<usize>) -> String {
    let mut kids: Vec<String> =
        adj[x].iter().filter(|&&y| Some(y) != parent).map(|&y| rooted_code(adj, y, Some(x))).collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// The row letter of a rooted quotient shape, if it has between two and five classes.
pub fn quotient_row(q: &QuotientTree) -> Option<char> {
    if !q.is_tree() {
        return None;
    }
    let code = rooted_code(&q.adjacency, q.root, None);
    QUOTIENT_ROWS.iter().find_map(|&(row, edges)| {
        let shape = QuotientTree::from_edges(edges.len() + 1, 0, edges);
        (rooted_code(&shape.adjacency, 0, None) == code).then_some(row)
    })
}

/// The rows allowed for Δ̃(𝒩) = 4 with at least two combs.
pub const ROWS_FOR_FOUR: [char; 10] = ['a', 'b', 'c', 'd', 'e', 'f', 'g', 'j', 'k', 'l'];

/// Which case of the divisor-tuple lemma a vertex falls in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailCase {
    /// N = 1 and every entry is 1.
    AllOnes,
    /// (1, 1, N, …, N).
    OneOne,
    /// (2, b, b, N, …, N) with N = 2b and b ≥ 3 odd.
    TwoOddOdd { b: BigInt },
}

impl fmt::Display for TailCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailCase::AllOnes => write!(f, "all ones"),
            TailCase::OneOne => write!(f, "(1, 1, N, ..., N)"),
            TailCase::TwoOddOdd { b } => write!(f, "(2, {b}, {b}, N, ..., N)"),
        }
    }
}

/// The sorted tuple of dicritical degrees, c(u,e) over 𝒩-edges and N_u/a_u at `u`.
pub fn divisor_tuple(a: &Analysis, u: CellRef) -> Result<Vec<BigInt>, String> {
    let vd = a.ledger.v(u);
    let mut tuple: Vec<BigInt> = vd.node_type.iter().map(|&d| BigInt::from(d)).collect();
    for i in a.table.pairs_at(u) {
        let c = &a.table.at(i).c;
        if !c.is_integer() {
            return Err(format!(
                "c({}, {}) = {c} is not an integer",
                a.tree.id(u),
                a.tree.edge_label(a.table.pair(i).e)
            ));
        }
        tuple.push(c.to_integer());
    }
    tuple.push(&vd.n / &vd.a);
    tuple.sort();
    Ok(tuple)
}

/// The case a sorted tuple falls in, when exactly one applies.
pub fn tail_case(n: &BigInt, tuple: &[BigInt]) -> Option<TailCase> {
    let m = tuple.len();
    let rest_is_n = |from: usize| tuple[from..].iter().all(|x| x == n);
    let mut found = vec![];
    if n.is_one() && tuple.iter().all(One::is_one) {
        found.push(TailCase::AllOnes);
    }
    if m >= 2 && *n >= BigInt::from(2) && tuple[0].is_one() && tuple[1].is_one() && rest_is_n(2) {
        found.push(TailCase::OneOne);
    }
    if m >= 3 && n.is_even() {
        let b: BigInt = n / 2;
        if b >= BigInt::from(3)
            && b.is_odd()
            && tuple[0] == BigInt::from(2)
            && tuple[1] == b
            && tuple[2] == b
            && rest_is_n(3)
        {
            found.push(TailCase::TwoOddOdd { b });
        }
    }
    (found.len() == 1).then(|| found.pop().unwrap())
}

/// Type [1, N, …, N].
pub fn type_is_one_then_n(vd: &VertexData) -> bool {
    match vd.node_type.split_first() {
        Some((&first, rest)) => first == 1 && rest.iter().all(|&x| BigInt::from(x) == vd.n),
        None => false,
    }
}

/// Type [d, N, …, N] with d dividing N.
pub fn type_is_divisor_then_n(vd: &VertexData) -> bool {
    match vd.node_type.split_first() {
        Some((&first, rest)) => {
            rest.iter().all(|&x| BigInt::from(x) == vd.n) && (&vd.n % BigInt::from(first)).is_zero()
        }
        None => false,
    }
}

/// The skeleton of a non-canonical rational tree, listed z₁ … zₙ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub cells: Vec<CellRef>,
    /// Position of v0 in `cells`.
    pub root_index: Option<usize>,
    pub tail: Option<TailCase>,
    pub tail_teeth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RationalShape {
    Canonical(Canonical),
    Chain(Chain),
    /// Neither shape could be read off; the findings say why.
    Unrecognized,
}

#[derive(Clone, Debug)]
pub struct RationalReport {
    pub shape: RationalShape,
    pub findings: Vec<Outcome>,
}

impl RationalReport {
    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.findings.iter().filter(|o| o.failed())
    }
}

fn decomposition_at(a: &Analysis, z: CellRef) -> Result<CombDecomposition, AnalysisError> {
    match a.decomposition(z) {
        Some(d) => Ok(d.clone()),
        None => comb_decomposition(&a.tree, &a.ledger, &a.table, &a.structure, z),
    }
}

/// Orders the skeleton as a chain from `start`, or reports where it branches.
fn walk_chain(a: &Analysis, start: CellRef) -> Result<Vec<CellRef>, String> {
    let s = &a.structure;
    let mut chain = vec![start];
    let mut prev: Option<CellRef> = None;
    let mut cur = start;
    loop {
        let next: Vec<CellRef> = a
            .ledger
            .v(cur)
            .n_neighbors
            .iter()
            .copied()
            .filter(|x| s.skeleton.contains(x) && Some(*x) != prev)
            .collect();
        match next.as_slice() {
            [] => break,
            [y] => {
                prev = Some(cur);
                cur = *y;
                chain.push(cur);
            }
            _ => return Err(format!("the skeleton branches at {}", a.tree.id(cur))),
        }
    }
    if chain.len() != s.skeleton.len() {
        return Err(format!("the chain from {} misses part of the skeleton", a.tree.id(start)));
    }
    Ok(chain)
}

/// Reads the structure of a rational tree and checks every clause of the classification.
pub fn rational_structure_report(a: &Analysis) -> Result<RationalReport, AnalysisError> {
    if !is_rational_tree(a) {
        return Err(AnalysisError::Precondition("the tree is not rational".into()));
    }
    let t = &a.tree;
    let l = &a.ledger;
    let s = &a.structure;
    let v0 = t.root();
    let id = |x: CellRef| t.id(x).to_string();
    let mut findings = vec![];

    let canonical = recognize_canonical(a);
    let z1 = if s.omega.len() == 2 {
        // orient the path so that it does not end at v0
        let ends: Vec<CellRef> = s.omega.iter().copied().collect();
        if ends[1] == v0 {
            ends[1]
        } else {
            ends[0]
        }
    } else {
        s.omega.iter().next().copied().unwrap_or(v0)
    };
    let decomposition = if s.initial.contains(&z1) { Some(decomposition_at(a, z1)?) } else { None };
    let classes = decomposition.as_ref().map_or(0, |d| d.classes.len());

    let mut sink = Sink::default();
    let facts =
        [classes == 0, s.skeleton.len() == 1, l.n_set == BTreeSet::from([v0]), s.omega.is_empty(), canonical.is_some()];
    sink.require(facts.iter().all(|&f| f == facts[0]), || {
        format!(
            "no combs {}, one-vertex skeleton {}, 𝒩 = {{v0}} {}, Ω empty {}, canonical {}",
            facts[0], facts[1], facts[2], facts[3], facts[4]
        )
    });
    findings.push(sink.finish("rational-canonical-equivalences"));

    if let Some(c) = canonical {
        return Ok(RationalReport { shape: RationalShape::Canonical(c), findings });
    }
    let Some(d) = decomposition else {
        let mut sink = Sink::default();
        sink.fail(format!("{} is not an initial vertex", id(z1)));
        findings.push(sink.finish("rational-chain-shape"));
        return Ok(RationalReport { shape: RationalShape::Unrecognized, findings });
    };

    // One comb, hanging from the root of the skeleton.
    let mut sink = Sink::default();
    if classes > 0 {
        let u0 = d.u0.unwrap();
        sink.require(classes == 1, || format!("{classes} combs"));
        sink.require(s.delta_star[&u0] == 1, || format!("δ*({}) = {}", id(u0), s.delta_star[&u0]));
        let vd = l.v(u0);
        let big_k = vd.k.values().filter(|k| **k > BigInt::one()).count();
        let count = big_k + vd.a_star + s.t[&u0];
        sink.require(count <= 3, || format!("#{{k > 1}} + a* + t at {} is {count}", id(u0)));
    }
    findings.push(sink.finish("rational-single-comb"));

    let cells = if s.omega.len() == 2 {
        let other = *s.omega.iter().find(|&&x| x != z1).unwrap();
        let path = t.path(z1, other);
        let mut sink = Sink::default();
        sink.require(path.iter().copied().collect::<BTreeSet<_>>() == l.n_set, || {
            "𝒩 is not the path between the ends of Ω".into()
        });
        findings.push(sink.finish("rational-chain-shape"));
        path
    } else {
        match walk_chain(a, z1) {
            Ok(c) => c,
            Err(w) => {
                let mut sink = Sink::default();
                sink.fail(w);
                findings.push(sink.finish("rational-chain-shape"));
                return Ok(RationalReport { shape: RationalShape::Unrecognized, findings });
            }
        }
    };
    let n = cells.len();
    let zn = cells[n - 1];
    let pos: BTreeMap<CellRef, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let toward_start = |i: usize| t.edge_between(cells[i], cells[i - 1]).unwrap();
    let delta_v0 = t.valency(v0);

    if s.omega.len() != 2 {
        let mut sink = Sink::default();
        sink.require(n > 1, || "the chain has one vertex".into());
        sink.require(d.u0 == Some(zn), || format!("the comb top is not the chain end {}", id(zn)));
        findings.push(sink.finish("rational-chain-shape"));
    }

    // The start of the chain.
    let mut sink = Sink::default();
    let v1 = l.v(z1);
    sink.require(!s.w.contains(&z1), || format!("{} carries teeth", id(z1)));
    let bare_root = z1 == v0 && !v1.is_node() && delta_v0 == 1;
    let good_node =
        v1.is_node() && type_is_divisor_then_n(v1) && (BigInt::from(v1.node_type[0]) == v1.n || v1.a.is_one());
    sink.require(bare_root || good_node, || {
        format!("{} is neither a bare root of one edge nor a node of type [d, N, ..., N]", id(z1))
    });
    sink.require(v1.epsilon_prime <= 2, || format!("ε′({}) = {}", id(z1), v1.epsilon_prime));
    findings.push(sink.finish("rational-chain-start"));

    // Where the root sits.
    let mut sink = Sink::default();
    let root_index = pos.get(&v0).copied();
    match root_index {
        Some(i0) => {
            sink.require(i0 + 1 < n, || "v0 is the chain end".into());
            for &w in s.w.iter().filter(|&&w| w != zn) {
                match pos.get(&w) {
                    Some(&iw) => sink.require(i0 < iw, || format!("teeth at {} sit below v0", id(w))),
                    None => sink.fail(format!("{} carries teeth off the chain", id(w))),
                }
            }
        }
        None => sink.fail("v0 is not on the chain".into()),
    }
    sink.require(delta_v0 <= 2, || format!("δ(v0) = {delta_v0}"));
    findings.push(sink.finish("rational-chain-root"));

    // The end of the chain.
    let mut sink = Sink::default();
    let vn = l.v(zn);
    for i in a.table.pairs_at(zn) {
        sink.require(a.table.at(i).nonpositive, || {
            format!("({}, {}) is positive", id(zn), t.edge_label(a.table.pair(i).e))
        });
    }
    let tail = match divisor_tuple(a, zn) {
        Ok(tuple) => {
            let case = tail_case(&vn.n, &tuple);
            sink.require(case.is_some(), || {
                let shown: Vec<String> = tuple.iter().map(ToString::to_string).collect();
                format!("tuple ({}) at {} fits no case", shown.join(", "), id(zn))
            });
            case
        }
        Err(w) => {
            sink.fail(w);
            None
        }
    };
    let tail_teeth = s.t[&zn];
    sink.require(tail_teeth <= 3, || format!("t({}) = {tail_teeth}", id(zn)));
    sink.require(vn.epsilon_prime <= 4, || format!("ε′({}) = {}", id(zn), vn.epsilon_prime));
    findings.push(sink.finish("rational-chain-end"));

    // Interior of the chain.
    let mut sink = Sink::default();
    for i in 1..n.saturating_sub(1) {
        let x = cells[i];
        let vx = l.v(x);
        let r = &s.r_single[a.table.poset.find(x, toward_start(i)).unwrap()];
        match vx.epsilon {
            3 => sink.require(r.is_zero(), || format!("R at {} is {r} with ε = 3", id(x))),
            2 => sink.require(*r < Rational::one(), || format!("R at {} is {r} with ε = 2", id(x))),
            e => sink.fail(format!("ε({}) = {e}", id(x))),
        }
        sink.require(vx.epsilon_prime <= 3, || format!("ε′({}) = {}", id(x), vx.epsilon_prime));
    }
    for &x in &cells[..n - 1] {
        sink.require(s.t[&x] <= 1, || format!("t({}) = {}", id(x), s.t[&x]));
    }
    findings.push(sink.finish("rational-chain-interior"));

    // Teeth are chains of nodes.
    let mut sink = Sink::default();
    for p in &s.gamma {
        for &x in &p[..p.len() - 1] {
            let vx = l.v(x);
            sink.require(vx.is_node() && vx.epsilon_prime <= 2, || {
                format!("{} on a tooth: node {}, ε′ = {}", id(x), vx.is_node(), vx.epsilon_prime)
            });
        }
    }
    findings.push(sink.finish("rational-tooth-nodes"));

    findings.push(nd_star_clauses(a, &d, &cells));
    if l.nodes == l.nd_star {
        findings.push(nd_equals_nd_star_clauses(a, &cells, delta_v0));
    }

    let chain = Chain { cells, root_index, tail, tail_teeth };
    Ok(RationalReport { shape: RationalShape::Chain(chain), findings })
}

fn nd_star_clauses(a: &Analysis, d: &CombDecomposition, cells: &[CellRef]) -> Outcome {
    let t = &a.tree;
    let l = &a.ledger;
    let s = &a.structure;
    let id = |x: CellRef| t.id(x).to_string();
    let mut sink = Sink::default();
    sink.require(l.nd_star.len() <= l.xi_total && l.xi_total <= 2, || {
        format!("|Nd*| = {}, ξ = {}", l.nd_star.len(), l.xi_total)
    });
    let one_then_n = |x: CellRef| type_is_one_then_n(l.v(x)) && l.v(x).a.is_one();
    if s.omega.len() == 1 {
        let u0 = d.u0.expect("one comb");
        let z1 = cells[0];
        sink.require(s.initial == BTreeSet::from([z1]), || "the initial set is not the loose end".into());
        let vu = s.v.get(&u0).cloned().unwrap_or_default();
        for &x in &l.nd_star {
            sink.require(x == u0 || vu.contains(&x), || format!("{} in Nd* lies off the comb top", id(x)));
            if vu.contains(&x) {
                sink.require(one_then_n(x), || {
                    format!("{} in Nd* has type {:?}, a = {}", id(x), l.v(x).node_type, l.v(x).a)
                });
            }
        }
        if l.xi_total == 2 {
            let i = a.table.poset.find(u0, t.edge_between(u0, cells[cells.len() - 2]).unwrap()).unwrap();
            sink.require(l.v(u0).n > BigInt::one(), || format!("N({}) = 1", id(u0)));
            sink.require(a.table.at(i).m.is_one(), || format!("M at {} is {}", id(u0), a.table.at(i).m));
            sink.require(vu.is_subset(&l.nd_star), || format!("V({}) is not inside Nd*", id(u0)));
            for x in s.v_bar_of(u0) {
                sink.require(l.v(x).pure && l.v(x).a.is_one(), || format!("{} is not pure with a = 1", id(x)));
            }
        }
    } else {
        sink.require(l.nd_star.is_subset(&s.omega), || "Nd* leaves Ω".into());
        sink.require(l.nd_star.len() == l.xi_total, || format!("|Nd*| = {} but ξ = {}", l.nd_star.len(), l.xi_total));
        for &x in &l.nd_star {
            let vx = l.v(x);
            sink.require(one_then_n(x) && vx.xi == 1 && vx.delta_tilde.is_zero(), || {
                format!(
                    "{} in Nd*: type {:?}, a = {}, ξ = {}, Δ̃ = {}",
                    id(x),
                    vx.node_type,
                    vx.a,
                    vx.xi,
                    vx.delta_tilde
                )
            });
        }
        if l.xi_total == 2 {
            for &x in &l.n_set {
                let vx = l.v(x);
                sink.require(vx.pure && vx.a.is_one() && vx.delta_tilde.is_zero(), || {
                    format!("{} is not pure, flat with a = 1", id(x))
                });
            }
        }
    }
    sink.finish("rational-nd-star")
}

/// The finer picture when every node touches only coprime degrees.
fn nd_equals_nd_star_clauses(a: &Analysis, cells: &[CellRef], delta_v0: usize) -> Outcome {
    let t = &a.tree;
    let l = &a.ledger;
    let s = &a.structure;
    let v0 = t.root();
    let id = |x: CellRef| t.id(x).to_string();
    let n = cells.len();
    let (z1, zn) = (cells[0], cells[n - 1]);
    let mut sink = Sink::default();
    let type_ok = |x: CellRef| type_is_one_then_n(l.v(x));
    if s.omega.len() == 1 {
        sink.require(n > 1 && z1 == v0 && delta_v0 == 1, || {
            format!("chain starts at {} with δ(v0) = {delta_v0}", id(z1))
        });
        let vn: BTreeSet<CellRef> = s.v.get(&zn).cloned().unwrap_or_default();
        let mut expected: BTreeSet<CellRef> = cells.iter().copied().collect();
        expected.extend(vn.iter().copied());
        sink.require(expected == l.n_set, || "𝒩 is not the chain plus the teeth at its end".into());
        for &y in &vn {
            sink.require(t.edge_between(y, zn).is_some(), || format!("{} is not adjacent to {}", id(y), id(zn)));
        }
        let nodes = &l.nodes;
        match vn.len() {
            0 => {
                let ty = &l.v(zn).node_type;
                sink.require(*nodes == BTreeSet::from([zn]) && (ty == &[1] || ty == &[1, 1]), || {
                    format!("nodes at a bare end: type {ty:?}")
                });
            }
            1 => {
                let y1 = *vn.iter().next().unwrap();
                let only_y = *nodes == BTreeSet::from([y1]);
                let both = *nodes == BTreeSet::from([zn, y1]) && l.v(zn).node_type == [1];
                sink.require((only_y || both) && type_ok(y1), || format!("one tooth at {}: nodes do not fit", id(zn)));
            }
            2 => {
                sink.require(*nodes == vn && vn.iter().all(|&y| type_ok(y)), || {
                    format!("two teeth at {}: nodes do not fit", id(zn))
                });
            }
            k => sink.fail(format!("{k} teeth at {}", id(zn))),
        }
    } else {
        sink.require(n == 2 || n == 3, || format!("the path has {n} vertices"));
        if n == 3 {
            sink.require(cells[1] == v0, || "the middle of a three-vertex path is not v0".into());
        }
        for &x in &l.n_set {
            sink.require(l.v(x).a.is_one(), || format!("a({}) = {}", id(x), l.v(x).a));
        }
        sink.require(l.nodes == BTreeSet::from([z1, zn]), || "the nodes are not the path ends".into());
        for &x in &l.nodes {
            let single = l.v(x).node_type.len() == 1;
            sink.require(type_ok(x) && single == (x == v0), || format!("{} has type {:?}", id(x), l.v(x).node_type));
        }
    }
    sink.finish("rational-nd-is-nd-star")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze;
    use crate::io::fixtures::{load, ALL};

    fn run(name: &str) -> Analysis {
        analyze(load(name)).unwrap()
    }

    #[test]
    fn fan_of_t_a() {
        let a = run("t_a");
        assert!(is_rational_tree(&a));
        let fan = root_fan_data(&a).unwrap();
        assert_eq!(fan.delta, 1);
        let e = &fan.edges[0];
        assert!(e.dicritical);
        assert_eq!((e.a.clone(), e.d.clone(), e.k.clone()), (1.into(), 1.into(), 1.into()));
    }

    #[test]
    fn fan_of_t_c_1_2_3() {
        let a = run("t_c_1_2_3");
        let fan = root_fan_data(&a).unwrap();
        assert_eq!(fan.n, BigInt::from(6));
        let mut k: Vec<BigInt> = fan.edges.iter().map(|f| f.k.clone()).collect();
        k.sort();
        assert_eq!(k, vec![2.into(), 3.into(), 6.into()]);
        assert_eq!(fan.delta_tilde_by_fan(), BigInt::from(2));
        assert_eq!(fan.sorted_d(), vec![1.into(), 2.into(), 3.into()]);
    }

    #[test]
    fn canonical_names() {
        let want = [
            ("t_a", Some("T_A")),
            ("t_b_1_1", Some("T_B(1,1)")),
            ("t_b_1_2", Some("T_B(1,2)")),
            ("t_b_2_3", Some("T_B(2,3)")),
            ("t_c_1_1_1", Some("T_C(1,1,1)")),
            ("t_c_1_1_2", Some("T_C(1,1,2)")),
            ("t_c_1_2_3", Some("T_C(1,2,3)")),
            ("t_d", None),
        ];
        assert_eq!(want.len(), ALL.len());
        for (name, expected) in want {
            let got = recognize_canonical(&run(name)).map(|c| c.to_string());
            assert_eq!(got.as_deref(), expected, "{name}");
        }
    }

    #[test]
    fn t_d_has_no_root_fan() {
        let a = run("t_d");
        assert!(matches!(root_fan_data(&a), Err(AnalysisError::Precondition(_))));
        assert!(matches!(rational_structure_report(&a), Err(AnalysisError::Precondition(_))));
    }

    #[test]
    fn rational_fixtures_are_canonical() {
        for name in ["t_a", "t_b_1_1", "t_b_1_2", "t_b_2_3"] {
            let r = rational_structure_report(&run(name)).unwrap();
            assert!(matches!(r.shape, RationalShape::Canonical(_)), "{name}");
            assert_eq!(r.failures().count(), 0, "{name}");
        }
    }

    #[test]
    fn every_row_is_found_under_relabelling() {
        for &(row, edges) in &QUOTIENT_ROWS {
            let n = edges.len() + 1;
            // reverse the labels of the non-root classes
            let relabel = |x: usize| if x == 0 { 0 } else { n - x };
            let moved: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (relabel(a), relabel(b))).collect();
            assert_eq!(quotient_row(&QuotientTree::from_edges(n, 0, &moved)), Some(row));
        }
        let star_of_five = QuotientTree::from_edges(6, 0, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        assert_eq!(quotient_row(&star_of_five), None);
    }

    #[test]
    fn rows_differ_from_the_root() {
        // a path rooted at an end and rooted in the middle are different rows
        let end = QuotientTree::from_edges(3, 0, &[(0, 1), (1, 2)]);
        let middle = QuotientTree::from_edges(3, 1, &[(0, 1), (1, 2)]);
        assert_eq!(quotient_row(&end), Some('c'));
        assert_eq!(quotient_row(&middle), Some('b'));
    }

    #[test]
    fn tail_cases() {
        let b = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(tail_case(&1.into(), &b(&[1, 1])), Some(TailCase::AllOnes));
        assert_eq!(tail_case(&4.into(), &b(&[1, 1, 4])), Some(TailCase::OneOne));
        assert_eq!(tail_case(&6.into(), &b(&[2, 3, 3, 6])), Some(TailCase::TwoOddOdd { b: 3.into() }));
        assert_eq!(tail_case(&4.into(), &b(&[2, 2, 4])), None);
        assert_eq!(tail_case(&6.into(), &b(&[1, 2, 6])), None);
    }
}
