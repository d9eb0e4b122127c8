//! Theorem audits: every identity and inequality the engine's ledgers must satisfy.
//!
//! Each check is registered with an id, an applicability test and an evaluator. A failure on a
//! valid, minimally complete tree means the engine (or a hand-edited ledger) is wrong.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::analysis::{analyze, Analysis};
use crate::characteristic::{divides, h_products, path_dead_end_product, r_and_delta_bar, rat, Rational};
use crate::classify::{
    divisor_tuple, is_rational_tree, quotient_row, rational_structure_report, recognize_canonical, root_fan_data,
    tail_case, type_is_one_then_n, Canonical, RationalShape, ROWS_FOR_FOUR,
};
use crate::error::AnalysisError;
use crate::multiplicity::{compute_x, compute_x_hat, linear_path_identities};
use crate::structure::{c_dot_zero_matches, is_comb_over, trivial_paths_from, CombDecomposition};
use crate::tree::{CellRef, Tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub id: String,
    pub status: Status,
    /// The cells, pairs or classes that break the check, with the offending values.
    pub witnesses: Vec<String>,
}

impl Outcome {
    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn skipped(id: &str) -> Self {
        Outcome { id: id.to_string(), status: Status::Skipped, witnesses: vec![] }
    }
}

/// Collects failure witnesses for one check.
#[derive(Debug, Default)]
pub struct Sink {
    witnesses: Vec<String>,
}

impl Sink {
    pub fn require(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.witnesses.push(witness());
        }
    }

    pub fn fail(&mut self, witness: String) {
        self.witnesses.push(witness);
    }

    pub fn finish(self, id: &str) -> Outcome {
        let status = if self.witnesses.is_empty() { Status::Pass } else { Status::Fail };
        Outcome { id: id.to_string(), status, witnesses: self.witnesses }
    }
}

/// One registered check.
pub struct Check {
    pub id: &'static str,
    /// What is being verified, in words.
    pub statement: &'static str,
    pub applies: fn(&Analysis) -> bool,
    run: fn(&Analysis, &mut Sink),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub outcomes: Vec<Outcome>,
}

impl AuditReport {
    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| o.failed())
    }

    pub fn is_clean(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn count(&self, status: Status) -> usize {
        self.outcomes.iter().filter(|o| o.status == status).count()
    }
}

/// Runs every applicable check.
pub fn audit(a: &Analysis) -> AuditReport {
    let outcomes = CHECKS
        .iter()
        .map(|c| {
            if (c.applies)(a) {
                let mut sink = Sink::default();
                (c.run)(a, &mut sink);
                sink.finish(c.id)
            } else {
                Outcome::skipped(c.id)
            }
        })
        .collect();
    AuditReport { outcomes }
}

/// Analyzes and audits a tree; pipeline errors are returned as they are.
pub fn audit_tree(t: Tree) -> Result<AuditReport, AnalysisError> {
    Ok(audit(&analyze(t)?))
}

pub fn checks() -> &'static [Check] {
    CHECKS
}

fn always(_: &Analysis) -> bool {
    true
}

fn id(a: &Analysis, x: CellRef) -> String {
    a.tree.id(x).to_string()
}

fn pair_name(a: &Analysis, i: usize) -> String {
    let p = a.table.pair(i);
    format!("({}, {})", a.tree.id(p.u), a.tree.edge_label(p.e))
}

fn names(a: &Analysis, set: &BTreeSet<CellRef>) -> String {
    let v: Vec<&str> = set.iter().map(|&x| a.tree.id(x)).collect();
    format!("{{{}}}", v.join(", "))
}

/// x ∈ m·ℤ for rationals.
fn in_multiples(x: &Rational, m: &Rational) -> bool {
    divides(m, x)
}

/// m | x over the integers, where only 0 is a multiple of 0.
fn int_divides(m: &BigInt, x: &BigInt) -> bool {
    if m.is_zero() {
        x.is_zero()
    } else {
        (x % m).is_zero()
    }
}

fn max0(x: &BigInt) -> BigInt {
    x.max(&BigInt::zero()).clone()
}

fn n_of(a: &Analysis, x: CellRef) -> &BigInt {
    &a.ledger.v(x).n
}

/// The edge from `x` toward `z` inside the tree.
fn toward(a: &Analysis, x: CellRef, z: CellRef) -> Option<usize> {
    let path = a.tree.path(x, z);
    let e = a.tree.edge_between(x, *path.get(1)?)?;
    a.table.poset.find(x, e)
}

// ---------------------------------------------------------------- tree level

fn root_bounds(a: &Analysis, s: &mut Sink) {
    let t = &a.tree;
    let v0 = t.root();
    let n0 = n_of(a, v0);
    let arrows = BigInt::from(t.one_arrows().count());
    let points = a.multiplicities.points_at_infinity;
    s.require(*n0 >= arrows, || format!("N(v0) = {n0} < {arrows} (1)-arrows"));
    s.require(arrows >= BigInt::from(points) && points >= 1, || {
        format!("{arrows} (1)-arrows, {points} points at infinity")
    });
    s.require(t.neighbors(v0).all(|x| t.is_vertex(x)), || "an arrow touches v0".into());
    s.require(a.ledger.v(v0).a.is_one(), || format!("a(v0) = {}", a.ledger.v(v0).a));
    s.require(t.valency(v0) == points, || format!("δ(v0) = {} but {points} points at infinity", t.valency(v0)));
}

fn nonnegative_connected(a: &Analysis, s: &mut Sink) {
    let t = &a.tree;
    let nonneg: BTreeSet<CellRef> = t.vertices().filter(|v| !a.multiplicities.n[v].is_negative()).collect();
    let pos: BTreeSet<CellRef> = t.vertices().filter(|v| a.multiplicities.n[v].is_positive()).collect();
    s.require(t.connected(&nonneg), || "vertices with N ≥ 0 are not connected".into());
    s.require(t.connected(&pos), || "vertices with N > 0 are not connected".into());
}

fn dead_end_multiplicity(a: &Analysis, s: &mut Sink) {
    let t = &a.tree;
    for v in t.vertices() {
        for e in t.dead_ends(v) {
            let alpha = t.other_end(e, v);
            let (nv, na) = (&a.multiplicities.n[&v], &a.multiplicities.n[&alpha]);
            s.require(*nv == t.q(e, v) * na, || format!("{}: N = {nv}, dead end gives {} × {na}", id(a, v), t.q(e, v)));
        }
    }
}

fn unit_multiplicity_edges(a: &Analysis, s: &mut Sink) {
    let t = &a.tree;
    for v in t.vertices() {
        if !a.multiplicities.n[&v].is_one() {
            continue;
        }
        for w in t.children(v).filter(|&w| t.is_vertex(w)) {
            let e = t.edge_between(v, w).unwrap();
            let deg = a.ledger.degree.get(&w).copied();
            let det = t.det(e).ok();
            s.require(deg == Some(1) && det == Some(BigInt::from(-1)), || {
                format!("{} has N = 1 but child {} has degree {deg:?}, det {det:?}", id(a, v), id(a, w))
            });
        }
    }
}

fn linear_path_determinants(a: &Analysis, s: &mut Sink) {
    let t = &a.tree;
    let vs: Vec<CellRef> = t.vertices().collect();
    for (i, &v) in vs.iter().enumerate() {
        for &w in &vs[i + 1..] {
            if let Some(sides) = linear_path_identities(t, &a.multiplicities, v, w) {
                for (k, (lhs, rhs)) in sides.iter().enumerate() {
                    s.require(lhs == rhs, || {
                        format!("path {}–{}, identity {}: {lhs} ≠ {rhs}", id(a, v), id(a, w), k + 1)
                    });
                }
            }
        }
    }
}

fn valency_rules(a: &Analysis, s: &mut Sink) {
    let t = &a.tree;
    for v in t.vertices().filter(|&v| v != t.root()) {
        let k = t.valency(v);
        s.require(k >= 3, || format!("{} has valency {k}", id(a, v)));
    }
}

fn h_hat_divides(a: &Analysis, s: &mut Sink) {
    let t = &a.tree;
    let dic: Vec<CellRef> = a.ledger.d_set.iter().copied().collect();
    let mut groups: Vec<Vec<CellRef>> = dic.iter().map(|&u| vec![u]).collect();
    for i in 0..dic.len() {
        for j in i + 1..dic.len() {
            groups.push(vec![dic[i], dic[j]]);
        }
    }
    if dic.len() > 2 {
        groups.push(dic.clone());
    }
    for g in groups {
        let d = g.iter().fold(BigInt::zero(), |acc, u| acc.gcd(&BigInt::from(a.ledger.degree[u])));
        let arrows: Vec<CellRef> =
            g.iter().flat_map(|&u| t.neighbors(u).filter(|&x| t.is_one_arrow(x)).collect::<Vec<_>>()).collect();
        for w in t.vertices() {
            let Ok((h, h_hat)) = h_products(t, w, &arrows) else {
                s.fail(format!("h products undefined at {}", id(a, w)));
                continue;
            };
            let sum_x: BigInt = arrows.iter().map(|&al| compute_x(t, w, al).unwrap_or_default()).sum();
            let sum_hat: BigInt = arrows.iter().map(|&al| compute_x_hat(t, w, al).unwrap_or_default()).sum();
            let label = || g.iter().map(|&u| id(a, u)).collect::<Vec<_>>().join(",");
            s.require(int_divides(&(&h * &d), &sum_x), || {
                format!("w = {}, S = {{{}}}: h·d = {} ∤ {sum_x}", id(a, w), label(), &h * &d)
            });
            s.require(int_divides(&(&h_hat * &d), &sum_hat), || {
                format!("w = {}, S = {{{}}}: ĥ·d = {} ∤ {sum_hat}", id(a, w), label(), &h_hat * &d)
            });
        }
    }
}

// ---------------------------------------------------------------- vertex ledger

fn local_recomputed(a: &Analysis, s: &mut Sink) {
    let t = &a.tree;
    let l = &a.ledger;
    for (&v, vd) in &l.vertices {
        let n = &a.multiplicities.n[&v];
        let dead = t.dead_end(v).map_or_else(BigInt::one, |e| t.q(e, v).clone());
        let vertex_nbrs = t.neighbors(v).filter(|&x| t.is_vertex(x)).count() as i64;
        let excess: BigInt = t
            .neighbors(v)
            .filter(|x| l.d_set.contains(x))
            .map(|x| BigInt::from(t.neighbors(x).filter(|&y| t.is_one_arrow(y)).count() as i64 - 1))
            .sum();
        let delta = (BigInt::from(vertex_nbrs - 2)) * (n - 1) + (n - n / &dead);
        let dt = &delta - excess;
        s.require(vd.n == *n && vd.a == dead, || format!("{}: stored N = {}, a = {}", id(a, v), vd.n, vd.a));
        s.require(vd.delta == delta, || format!("{}: Δ stored {} recomputed {delta}", id(a, v), vd.delta));
        s.require(vd.delta_tilde == dt, || format!("{}: Δ̃ stored {} recomputed {dt}", id(a, v), vd.delta_tilde));
    }
    let sum: BigInt = l.vertices.values().map(|v| &v.delta_tilde).sum();
    let global = BigInt::from(2) - &a.multiplicities.m_of_t - &l.degree_sum;
    s.require(sum == l.delta_tilde_total && sum == global, || {
        format!("Δ̃(𝒩): stored {}, vertex sum {sum}, 2 − M − D = {global}", l.delta_tilde_total)
    });
}

fn unit_multiplicity_vertex(a: &Analysis, s: &mut Sink) {
    for (&v, vd) in &a.ledger.vertices {
        if vd.n.is_one() {
            let ok = vd.delta_tilde.is_zero()
                && vd.sigma.is_zero()
                && vd.a.is_one()
                && vd.epsilon <= 1
                && vd.node_type.iter().all(|&d| d == 1);
            s.require(ok, || {
                format!(
                    "{} has N = 1 with Δ̃ = {}, σ = {}, a = {}, ε = {}",
                    id(a, v),
                    vd.delta_tilde,
                    vd.sigma,
                    vd.a,
                    vd.epsilon
                )
            });
        }
    }
}

fn valency_sign(a: &Analysis, s: &mut Sink) {
    for (&v, vd) in &a.ledger.vertices {
        if vd.epsilon > 2 {
            s.require(vd.delta_tilde.is_positive(), || {
                format!("{}: ε = {} but Δ̃ = {}", id(a, v), vd.epsilon, vd.delta_tilde)
            });
        }
        if vd.delta_tilde.is_negative() {
            s.require(vd.epsilon <= 1, || format!("{}: Δ̃ = {} but ε = {}", id(a, v), vd.delta_tilde, vd.epsilon));
        }
    }
}

fn sigma_sum(a: &Analysis, s: &mut Sink) {
    for (&v, vd) in &a.ledger.vertices {
        let lhs = Rational::new(vd.sigma.clone(), vd.n.clone());
        let rhs: Rational = vd.k.values().map(|k| Rational::one() - Rational::new(BigInt::one(), k.clone())).sum();
        s.require(lhs == rhs, || format!("{}: σ/N = {lhs}, Σ(1 − 1/k) = {rhs}", id(a, v)));
    }
}

fn loose_end_value(a: &Analysis, s: &mut Sink) {
    for (&v, vd) in &a.ledger.vertices {
        if vd.epsilon == 1 && !vd.delta_tilde.is_positive() {
            let want = Rational::one() - Rational::new(vd.d.clone(), vd.a.clone());
            s.require(rat(vd.delta_tilde.clone()) == want, || {
                format!("{}: Δ̃ = {}, 1 − d/a = {want}", id(a, v), vd.delta_tilde)
            });
            if vd.is_node() {
                let ok =
                    BigInt::from(vd.node_type[0]) == vd.d && vd.node_type[1..].iter().all(|&x| BigInt::from(x) == vd.n);
                s.require(ok, || format!("{}: type {:?} is not [d, N, ..., N]", id(a, v), vd.node_type));
            }
        }
    }
}

fn sigma_bounds(a: &Analysis, s: &mut Sink) {
    for (&v, vd) in &a.ledger.vertices {
        let low = &vd.n - &vd.d;
        s.require(vd.sigma >= low, || format!("{}: σ = {} < N − d = {low}", id(a, v), vd.sigma));
        if vd.sigma == low && vd.is_node() {
            let ok =
                BigInt::from(vd.node_type[0]) == vd.d && vd.node_type[1..].iter().all(|&x| BigInt::from(x) == vd.n);
            s.require(ok, || format!("{}: σ = N − d but type {:?}", id(a, v), vd.node_type));
        }
        let pure_low = BigInt::from(vd.xi) * (&vd.n - 1);
        s.require(vd.sigma >= pure_low, || format!("{}: σ = {} < ξ(N − 1) = {pure_low}", id(a, v), vd.sigma));
        s.require((vd.sigma == pure_low) == vd.pure, || {
            format!("{}: σ = ξ(N − 1) is {} but pure is {}", id(a, v), vd.sigma == pure_low, vd.pure)
        });
    }
}

fn nd_star_loose_ends(a: &Analysis, s: &mut Sink) {
    let l = &a.ledger;
    for &x in l.nd_star.intersection(&a.structure.z) {
        let vd = l.v(x);
        let ok = vd.xi == 1 && vd.delta_tilde.is_zero() && vd.a.is_one() && type_is_one_then_n(vd);
        s.require(ok, || {
            format!("{}: ξ = {}, Δ̃ = {}, a = {}, type {:?}", id(a, x), vd.xi, vd.delta_tilde, vd.a, vd.node_type)
        });
    }
}

fn xi_bound(a: &Analysis, s: &mut Sink) {
    let l = &a.ledger;
    let cap = max0(a.delta_tilde()) + 2;
    let xi = BigInt::from(l.xi_total);
    let nd = BigInt::from(l.nd_star.len());
    s.require(nd <= xi && xi <= cap, || format!("|Nd*| = {nd}, ξ = {xi}, bound {cap}"));
    if xi == cap {
        for &x in &l.nd_star {
            s.require(l.v(x).pure && l.v(x).a.is_one(), || {
                format!("ξ at its bound but {} is not pure with a = 1", id(a, x))
            });
        }
    }
    if nd == cap {
        for &x in &l.nd_star {
            let vd = l.v(x);
            s.require(type_is_one_then_n(vd) && vd.a.is_one(), || {
                format!("|Nd*| at its bound but {} has type {:?}", id(a, x), vd.node_type)
            });
        }
    }
}

fn root_valency_bound(a: &Analysis, s: &mut Sink) {
    let dt = a.delta_tilde();
    let delta = BigInt::from(a.tree.valency(a.tree.root()));
    // below three root edges the multiplier δ − 2 is not positive and the bound can fail
    if delta >= BigInt::from(3) {
        let low = (&delta - 1) * (&delta - 2);
        s.require(*dt >= low, || format!("Δ̃ = {dt} < (δ−1)(δ−2) = {low}"));
    }
    if !dt.is_negative() {
        let lhs: BigInt = BigInt::from(2) * &delta - 3;
        s.require(lhs.is_negative() || &lhs * &lhs <= BigInt::from(4) * dt + 1, || {
            format!("δ = {delta} too large for Δ̃ = {dt}")
        });
    }
}

// ---------------------------------------------------------------- characteristic numbers

fn characteristic_divides(a: &Analysis, s: &mut Sink) {
    for (i, p) in a.table.poset.pairs.iter().enumerate() {
        let d = a.table.at(i);
        s.require(d.c.is_positive(), || format!("{}: c = {}", pair_name(a, i), d.c));
        for (name, v) in [("p", &d.p), ("p′", &d.p_prime), ("N", n_of(a, p.u))] {
            s.require(divides(&d.c, &rat(v.clone())), || format!("{}: c = {} ∤ {name} = {v}", pair_name(a, i), d.c));
        }
    }
}

fn divisibility_chain(a: &Analysis, s: &mut Sink) {
    let (t, l, table) = (&a.tree, &a.ledger, &a.table);
    for (i, upper) in table.poset.pairs.iter().enumerate() {
        let c = &table.at(i).c;
        for &j in &table.poset.below[i] {
            if j == i {
                continue;
            }
            let lower = table.pair(j);
            let alpha = rat(path_dead_end_product(t, l, lower.u, upper.u, true, false));
            let cj = &table.at(j).c;
            s.require(in_multiples(cj, &(&alpha * c)), || {
                format!("{} below {}: {cj} ∉ {alpha}·{c}·ℤ", pair_name(a, j), pair_name(a, i))
            });
        }
        let nodes: BTreeSet<CellRef> = table.poset.side[i].iter().copied().filter(|x| l.v(*x).is_node()).collect();
        let mut g = BigInt::zero();
        for &z in &nodes {
            let dz = &l.v(z).d;
            g = g.gcd(dz);
            let alpha = rat(path_dead_end_product(t, l, z, upper.u, true, false));
            s.require(in_multiples(&rat(dz.clone()), &(&alpha * c)), || {
                format!("{}: d({}) = {dz} ∉ {alpha}·{c}·ℤ", pair_name(a, i), id(a, z))
            });
        }
        if !nodes.is_empty() {
            s.require(in_multiples(&rat(g.clone()), c), || format!("{}: gcd of node d = {g} ∉ {c}·ℤ", pair_name(a, i)));
        }
    }
}

fn multiplicity_one_points_up(a: &Analysis, s: &mut Sink) {
    for (i, p) in a.table.poset.pairs.iter().enumerate() {
        if a.table.at(i).m.is_one() {
            s.require(a.tree.less_than(p.far, p.u), || {
                format!("{}: M = 1 but the far end is not above", pair_name(a, i))
            });
        }
    }
}

// ---------------------------------------------------------------- local structure of 𝒩

fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for size in 1..=k.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.clone());
            let mut i = size;
            while i > 0 && idx[i - 1] == n - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    if n > k {
        out.push((0..n).collect());
    }
    out
}

fn pair_identity(a: &Analysis, s: &mut Sink) {
    let (t, l, table) = (&a.tree, &a.ledger, &a.table);
    let one = Rational::one();
    for &u in &l.n_set {
        let at_u: Vec<usize> = table.pairs_at(u).collect();
        let vd = l.v(u);
        let n = rat(vd.n.clone());
        for subset in subsets_up_to(at_u.len(), 3) {
            let chosen: Vec<usize> = subset.iter().map(|&k| at_u[k]).collect();
            let edges: Vec<_> = chosen.iter().map(|&i| table.pair(i).e).collect();
            let Ok((r, dbar)) = r_and_delta_bar(t, l, table, u, &edges) else {
                s.fail(format!("R undefined at {}", id(a, u)));
                continue;
            };
            let eta_sum: Rational = chosen.iter().map(|&i| table.at(i).eta.clone()).sum();
            let gap = vd.epsilon as i64 - chosen.len() as i64;
            let lhs = &r + rat(gap - 1) * (&one - one.clone() / &n);
            let rhs = &one + (rat(dbar.clone()) - &one - &eta_sum) / &n;
            let label = || format!("{} with {} edges", id(a, u), chosen.len());
            s.require(lhs == rhs, || format!("{}: {lhs} ≠ {rhs}", label()));
            if rat(dbar.clone()) < &one + &eta_sum {
                s.require((0..=2).contains(&gap), || format!("{}: Δ̄ small but ε − |A| = {gap}", label()));
                if gap == 2 {
                    s.require(r.is_zero() && rat(dbar.clone()) == eta_sum, || {
                        format!("{}: R = {r}, Δ̄ = {dbar}", label())
                    });
                }
                if gap == 1 {
                    let rest = at_u.iter().copied().find(|i| !chosen.contains(i)).unwrap();
                    let p = table.pair(rest);
                    let seen = table.poset.find(p.far, p.e).unwrap();
                    let want = &eta_sum + &one - &table.at(seen).c;
                    s.require(r < one && rat(dbar.clone()) == want, || {
                        format!("{}: R = {r}, Δ̄ = {dbar}, expected {want}", label())
                    });
                }
            }
        }
    }
}

fn vertex_identity(a: &Analysis, s: &mut Sink) {
    let (t, l, table) = (&a.tree, &a.ledger, &a.table);
    let total = rat(a.delta_tilde().clone());
    for &u in &l.n_set {
        let at_u: Vec<usize> = table.pairs_at(u).collect();
        let edges: Vec<_> = at_u.iter().map(|&i| table.pair(i).e).collect();
        let Ok((r, _)) = r_and_delta_bar(t, l, table, u, &edges) else {
            s.fail(format!("R undefined at {}", id(a, u)));
            continue;
        };
        let eta_sum: Rational = at_u.iter().map(|&i| table.at(i).eta.clone()).sum();
        let rhs = (r - rat(2)) * rat(l.v(u).n.clone()) + rat(2) + eta_sum;
        s.require(rhs == total, || format!("at {}: {rhs} ≠ Δ̃(𝒩) = {total}", id(a, u)));
    }
}

fn eta_growth(a: &Analysis, s: &mut Sink) {
    let table = &a.table;
    for i in 0..table.poset.len() {
        let d = table.at(i);
        s.require(!d.eta.is_negative(), || format!("{}: η = {}", pair_name(a, i), d.eta));
        let preds = &table.poset.preds[i];
        if preds.is_empty() {
            continue;
        }
        let sum: Rational = preds.iter().map(|&j| table.at(j).eta.clone()).sum();
        s.require(d.eta >= sum, || format!("{}: η = {} below Σ of predecessors {sum}", pair_name(a, i), d.eta));
        if rat(d.side_delta_tilde.clone()) < Rational::one() + &sum {
            s.require(d.eta == sum, || format!("{}: η = {} should equal {sum}", pair_name(a, i), d.eta));
        }
    }
}

fn monotone(a: &Analysis, s: &mut Sink) {
    let table = &a.table;
    for i in 0..table.poset.len() {
        for &j in &table.poset.below[i] {
            if i == j {
                continue;
            }
            let (hi, lo) = (table.at(i), table.at(j));
            let w = || format!("{} over {}", pair_name(a, i), pair_name(a, j));
            s.require(table.poset.side[i].is_superset(&table.poset.side[j]), || format!("{}: sides not nested", w()));
            s.require(hi.c <= lo.c && hi.eta >= lo.eta, || {
                format!("{}: c {} vs {}, η {} vs {}", w(), hi.c, lo.c, hi.eta, lo.eta)
            });
            let jump = rat(&hi.side_delta_tilde - &lo.side_delta_tilde);
            s.require(jump == (&lo.c - &hi.c) + (&hi.eta - &lo.eta), || format!("{}: Δ̃ jump {jump}", w()));
            let same = hi.c == lo.c && hi.eta == lo.eta;
            s.require(!jump.is_negative() && (jump.is_zero() == same), || {
                format!("{}: Δ̃ jump {jump}, c and η equal {same}", w())
            });
        }
    }
}

fn nonpositive_pairs(a: &Analysis, s: &mut Sink) {
    for i in 0..a.table.poset.len() {
        let d = a.table.at(i);
        let by_flag = d.nonpositive;
        let by_eta = d.eta.is_zero();
        let by_value = rat(d.side_delta_tilde.clone()) == Rational::one() - &d.c;
        s.require(by_flag == by_eta && by_eta == by_value, || {
            format!("{}: nonpositive {by_flag}, η = {}, Δ̃ = {}", pair_name(a, i), d.eta, d.side_delta_tilde)
        });
        if by_flag {
            s.require(d.c.is_integer(), || format!("{}: nonpositive with c = {}", pair_name(a, i), d.c));
        }
    }
}

fn count_bound(a: &Analysis, s: &mut Sink) {
    let top = max0(&(a.delta_tilde() + 2)).max(BigInt::from(3));
    for (&u, vd) in &a.ledger.vertices {
        let big_k = vd.k.values().filter(|k| **k > BigInt::one()).count();
        let big_m = a.table.pairs_at(u).filter(|&i| a.table.at(i).m > BigInt::one()).count();
        let count = big_k + vd.a_star + big_m;
        s.require(big_k + vd.a_star + vd.epsilon <= count + 1, || {
            format!("{}: #(u) = {count} below its lower bound", id(a, u))
        });
        s.require(BigInt::from(count) <= top, || format!("{}: #(u) = {count} > {top}", id(a, u)));
    }
}

fn trivial_paths(a: &Analysis, s: &mut Sink) {
    let (t, l, table) = (&a.tree, &a.ledger, &a.table);
    for &u1 in &l.n_set {
        for p in trivial_paths_from(l, u1) {
            let v1 = l.v(u1);
            let want = Rational::new(v1.d.clone(), v1.a.clone());
            let label = || p.iter().map(|&x| id(a, x)).collect::<Vec<_>>().join("–");
            for i in 1..p.len() {
                let e = t.edge_between(p[i], p[i - 1]).unwrap();
                let c = &table.lookup(p[i], e).unwrap().c;
                s.require(*c == want, || format!("path {}: c at {} is {c}, d/a = {want}", label(), id(a, p[i])));
            }
            let n = p.len();
            if rat(l.v(p[n - 1]).n.clone()) == want {
                s.require(t.less_than(p[n - 2], p[n - 1]), || {
                    format!("path {}: last step goes toward the root", label())
                });
            }
            // interior nodes and Nd*
            for &x in &p[1..n - 1] {
                let vx = l.v(x);
                let ok = !l.nd_star.contains(&x) && vx.pure && vx.a.is_one() && vx.delta_tilde.is_zero();
                s.require(ok, || format!("path {}: interior {} fails purity", label(), id(a, x)));
            }
            if l.nd_star.contains(&u1) && !v1.delta_tilde.is_positive() {
                let e = t.edge_between(p[n - 1], p[n - 2]).unwrap();
                let c = &table.lookup(p[n - 1], e).unwrap().c;
                let ok =
                    type_is_one_then_n(v1) && v1.a.is_one() && v1.xi == 1 && v1.delta_tilde.is_zero() && c.is_one();
                s.require(ok, || format!("path {}: Nd* start with type {:?}, c at end {c}", label(), v1.node_type));
            }
        }
    }
}

// ---------------------------------------------------------------- teeth, W, Ω, skeleton

fn teeth(a: &Analysis, s: &mut Sink) {
    let (l, table, st) = (&a.ledger, &a.table, &a.structure);
    for &i in &st.teeth {
        let d = table.at(i);
        let mut with_u = table.poset.side[i].clone();
        with_u.insert(table.pair(i).u);
        let ok = d.eta.is_zero()
            && rat(d.side_delta_tilde.clone()) == Rational::one() - &d.c
            && l.delta_tilde_of(&with_u).is_positive()
            && d.m > BigInt::one();
        s.require(ok, || format!("tooth {}: η = {}, M = {}", pair_name(a, i), d.eta, d.m));
    }
    for (&x, &k) in st.t.iter().filter(|(x, _)| st.skeleton.contains(x)) {
        let teeth_here = st.teeth.iter().filter(|&&i| table.pair(i).u == x).count();
        s.require(k == teeth_here, || format!("t({}) = {k} but {teeth_here} teeth", id(a, x)));
        s.require((k > 0) == st.w.contains(&x), || format!("t({}) = {k}, in W {}", id(a, x), st.w.contains(&x)));
        if k > 0 {
            let vw = st.v.get(&x).map_or(0, BTreeSet::len);
            s.require(k == vw, || format!("t({}) = {k} but |V| = {vw}", id(a, x)));
        }
    }
}

fn tooth_bases(a: &Analysis, s: &mut Sink) {
    let (l, st) = (&a.ledger, &a.structure);
    let v0 = a.tree.root();
    for &w in &st.w {
        let vb = st.v_bar_of(w);
        s.require(w == v0 || !vb.contains(&v0), || format!("v0 hangs in a tooth of {}", id(a, w)));
        if !st.is_brush {
            let eps = l.v(w).epsilon;
            let vw = st.v[&w].len();
            let dt = l.delta_tilde_of(&vb);
            let floor = BigInt::from(1.max(eps as i64 - 2));
            s.require(eps > vw && dt >= floor, || format!("{}: ε = {eps}, |V| = {vw}, Δ̃(V̄) = {dt}", id(a, w)));
        }
    }
    if st.is_brush {
        s.require(l.n_set.len() > 1 && st.w == BTreeSet::from([v0]), || format!("brush with W = {}", names(a, &st.w)));
        s.require(*a.delta_tilde() >= BigInt::from(2), || format!("brush with Δ̃ = {}", a.delta_tilde()));
    }
}

fn omega_membership(a: &Analysis, s: &mut Sink) {
    let (t, l, st) = (&a.tree, &a.ledger, &a.structure);
    let v0 = t.root();
    let in_omega = st.omega.contains(&v0);
    s.require(in_omega == st.z.contains(&v0), || format!("v0 in Ω {in_omega}, in Z {}", st.z.contains(&v0)));
    let vd = l.v(v0);
    if vd.epsilon == 1 && vd.dicriticals.len() <= 1 {
        s.require(in_omega, || "ε(v0) = 1 with at most one dicritical, yet v0 ∉ Ω".into());
    }
    if t.valency(v0) == 1 && l.n_set.len() > 1 {
        s.require(in_omega, || "δ(v0) = 1 and |𝒩| > 1, yet v0 ∉ Ω".into());
    }
}

fn omega_size(a: &Analysis, s: &mut Sink) {
    let (t, l, st) = (&a.tree, &a.ledger, &a.structure);
    s.require(st.omega.len() <= 2, || format!("|Ω| = {}", st.omega.len()));
    let mut full: Vec<Vec<CellRef>> = vec![];
    for &z in &l.n_set {
        for p in trivial_paths_from(l, z) {
            if l.v(*p.last().unwrap()).epsilon == 1 {
                full.push(p);
            }
        }
    }
    if st.omega.len() == 2 {
        s.require(!full.is_empty(), || "|Ω| = 2 without a trivial path through 𝒩".into());
        for p in &full {
            let (z1, zn) = (p[0], *p.last().unwrap());
            let cells: BTreeSet<CellRef> = p.iter().copied().collect();
            let (d1, dn) = (l.delta_tilde(z1), l.delta_tilde(zn));
            s.require(cells == l.n_set && st.omega == BTreeSet::from([z1, zn]), || {
                "the path is not 𝒩 or its ends are not Ω".into()
            });
            s.require(!d1.is_positive() && !dn.is_positive() && *a.delta_tilde() == d1 + dn, || {
                format!("end values {d1}, {dn}")
            });
            let back = trivial_paths_from(l, zn);
            s.require(back.iter().any(|q| q.len() == p.len()), || "the reversed path is not trivial".into());
        }
    }
    if full.is_empty() {
        s.require(st.omega.len() <= 1, || "no trivial path through 𝒩 but |Ω| = 2".into());
        if let Some(&z) = st.omega.iter().next() {
            let found = trivial_paths_from(l, z).iter().any(|p| {
                let n = p.len();
                t.less_than(p[n - 2], p[n - 1])
            });
            s.require(found, || format!("no trivial path from {} ending away from the root", id(a, z)));
        }
    }
}

fn skeleton(a: &Analysis, s: &mut Sink) {
    let (t, l, st) = (&a.tree, &a.ledger, &a.structure);
    let v0 = t.root();
    let sk = &st.skeleton;
    s.require(!sk.is_empty() && t.connected(sk), || "the skeleton is empty or disconnected".into());
    s.require(sk.contains(&v0) && st.w.is_subset(sk) && st.omega.is_subset(sk), || {
        "v0, W or Ω leaves the skeleton".into()
    });
    if st.omega == *sk {
        s.require(st.omega.len() == 2, || "Ω = S with |Ω| ≠ 2".into());
    }
    let single = sk.len() == 1;
    s.require(single == (st.is_brush || l.n_set.len() == 1), || {
        format!("|S| = {} with brush {}", sk.len(), st.is_brush)
    });
    // partition of 𝒩 by V̄ over the skeleton
    let mut seen = BTreeSet::new();
    for &v in sk {
        for x in st.v_bar_of(v) {
            s.require(seen.insert(x), || format!("{} lies in two V̄ sets", id(a, x)));
        }
    }
    s.require(seen == l.n_set, || "the V̄ sets do not cover 𝒩".into());
    for (&x, &ds) in &st.delta_star {
        let vd = l.v(x);
        s.require(ds + st.t[&x] == vd.epsilon, || format!("{}: δ* + t ≠ ε", id(a, x)));
        if !sk.contains(&x) {
            s.require(ds == 0, || format!("{} off the skeleton has δ* = {ds}", id(a, x)));
        } else {
            let inside = vd.n_neighbors.iter().filter(|y| sk.contains(y)).count();
            s.require(ds == inside, || format!("{}: δ* = {ds}, skeleton valency {inside}", id(a, x)));
            if sk.len() > 1 {
                s.require(ds > 0, || format!("{} in a larger skeleton has δ* = 0", id(a, x)));
            }
        }
    }
}

// ---------------------------------------------------------------- combs

fn comb_relation(a: &Analysis, s: &mut Sink) {
    let (t, l, table, st) = (&a.tree, &a.ledger, &a.table, &a.structure);
    let ps: Vec<usize> = st.skeleton_pairs(table).collect();
    let k = ps.len();
    // over[x][y]: ps[x] is a comb over ps[y]
    let mut over = vec![vec![false; k]; k];
    for x in 0..k {
        for y in 0..k {
            if table.poset.comparable(ps[x], ps[y]) || x == y {
                match is_comb_over(t, l, table, st, ps[x], ps[y]) {
                    Ok(b) => over[x][y] = b,
                    Err(e) => s.fail(format!("{} vs {}: {e}", pair_name(a, ps[x]), pair_name(a, ps[y]))),
                }
            }
        }
    }
    let rel = |x: usize, y: usize| over[x][y] || over[y][x];
    for x in 0..k {
        s.require(over[x][x], || format!("{} is not a comb over itself", pair_name(a, ps[x])));
        for y in 0..k {
            if !rel(x, y) {
                continue;
            }
            s.require(table.poset.comparable(ps[x], ps[y]) || x == y, || {
                format!("{} ∼ {} but incomparable", pair_name(a, ps[x]), pair_name(a, ps[y]))
            });
            for z in 0..k {
                if rel(y, z) {
                    s.require(rel(x, z), || {
                        format!(
                            "∼ not transitive on {}, {}, {}",
                            pair_name(a, ps[x]),
                            pair_name(a, ps[y]),
                            pair_name(a, ps[z])
                        )
                    });
                }
            }
        }
    }
    // triples in order
    for x in 0..k {
        for y in 0..k {
            if x == y || !table.poset.le(ps[y], ps[x]) {
                continue;
            }
            for z in 0..k {
                if z == y || !table.poset.le(ps[z], ps[y]) {
                    continue;
                }
                s.require((over[x][y] && over[y][z]) == over[x][z], || {
                    format!(
                        "comb chain {} ⪰ {} ⪰ {} breaks",
                        pair_name(a, ps[x]),
                        pair_name(a, ps[y]),
                        pair_name(a, ps[z])
                    )
                });
            }
        }
    }
}

fn comb_characterization(a: &Analysis, s: &mut Sink) {
    let (t, l, table, st) = (&a.tree, &a.ledger, &a.table, &a.structure);
    for i in 0..table.poset.len() {
        for &j in &table.poset.below[i] {
            let comb = match is_comb_over(t, l, table, st, i, j) {
                Ok(b) => b,
                Err(e) => {
                    s.fail(e.to_string());
                    continue;
                }
            };
            let (hi, lo) = (table.at(i), table.at(j));
            let diff: BTreeSet<CellRef> = table.poset.side[i].difference(&table.poset.side[j]).copied().collect();
            let clear = diff.is_disjoint(&st.omega);
            let w = || format!("{} over {}", pair_name(a, i), pair_name(a, j));
            s.require(comb == (hi.eta == lo.eta && clear), || {
                format!("{}: comb {comb}, η {} vs {}, Ω clear {clear}", w(), hi.eta, lo.eta)
            });
            let (u, u2) = (table.pair(i).u, table.pair(j).u);
            let flat = t.path(u, u2).into_iter().skip(1).all(|v| l.v(v).epsilon == 2 && l.delta_tilde(v).is_zero());
            let first = hi.side_delta_tilde == lo.side_delta_tilde && clear;
            let second = comb && hi.c == lo.c;
            s.require(first == second && second == flat, || {
                format!("{}: equal Δ̃ {first}, comb with equal c {second}, flat path {flat}", w())
            });
            if comb && t.less_than(u, u2) {
                s.require(flat, || format!("{}: comb going away from the root over a non-flat path", w()));
            }
        }
    }
}

fn comb_interior_types(a: &Analysis, s: &mut Sink) {
    let (l, table) = (&a.ledger, &a.table);
    for d in &a.decompositions {
        for c in &d.classes {
            for &k in &c.pairs[1..] {
                let v = table.pair(k).u;
                let vd = l.v(v);
                let m = &table.at(k).m;
                let rest_n = vd.node_type.iter().skip(1).all(|&x| BigInt::from(x) == vd.n);
                match vd.epsilon {
                    2 => {
                        if vd.is_node() {
                            s.require(rest_n, || format!("{} inside a comb has type {:?}", id(a, v), vd.node_type));
                            if BigInt::from(vd.node_type[0]) != vd.n {
                                s.require(vd.a.is_one() && m.is_one(), || {
                                    format!("{}: a = {}, M = {m}", id(a, v), vd.a)
                                });
                            }
                        }
                    }
                    3 => {
                        let all_n = vd.node_type.iter().all(|&x| BigInt::from(x) == vd.n);
                        s.require(vd.a.is_one() && m.is_one() && all_n, || {
                            format!("{}: ε = 3 with a = {}, M = {m}, type {:?}", id(a, v), vd.a, vd.node_type)
                        });
                    }
                    e => s.fail(format!("{} inside a comb has ε = {e}", id(a, v))),
                }
            }
        }
    }
}

fn decomposition_partitions(a: &Analysis, s: &mut Sink) {
    let (l, table, st) = (&a.ledger, &a.table, &a.structure);
    for d in &a.decompositions {
        let z = id(a, d.z);
        let members: Vec<usize> = d.classes.iter().flat_map(|c| c.pairs.iter().copied()).collect();
        let as_set: BTreeSet<usize> = members.iter().copied().collect();
        let ordered: BTreeSet<usize> = d.ordered.iter().copied().collect();
        s.require(as_set.len() == members.len() && as_set == ordered, || {
            format!("z = {z}: classes do not partition the ordered pairs")
        });
        let mut ys = BTreeSet::new();
        for c in &d.classes {
            for &x in &c.y {
                s.require(ys.insert(x), || format!("z = {z}: {} in two Y sets", id(a, x)));
            }
            s.require(!c.c_dot.is_negative() && BigInt::from(c.teeth) <= c.c_dot, || {
                format!("z = {z}: comb at {} has t = {}, ċ = {}", id(a, c.u), c.teeth, c.c_dot)
            });
            s.require(c_dot_zero_matches(l, table, c), || {
                format!("z = {z}: ċ = {} at {} disagrees with flatness", c.c_dot, id(a, c.u))
            });
            let want = l.delta_tilde_of(&st.v_bar_of(c.u)) + &c.c_dot;
            let got = l.delta_tilde_of(&c.y);
            s.require(got == want, || format!("z = {z}: Δ̃(Y) = {got} at {}, expected {want}", id(a, c.u)));
        }
        let rest: BTreeSet<CellRef> = l.n_set.difference(&st.v_bar_of(d.z)).copied().collect();
        s.require(ys == rest, || format!("z = {z}: the Y sets do not cover 𝒩 ∖ V̄(z)"));
    }
}

fn class_tops(a: &Analysis, s: &mut Sink) {
    let (t, l, table, st) = (&a.tree, &a.ledger, &a.table, &a.structure);
    for d in &a.decompositions {
        for c in &d.classes {
            let u = c.u;
            let g = c.greatest();
            let eps = l.v(u).epsilon as i64;
            let vb = st.v_bar_of(u);
            let high = l.delta_tilde_of(&vb) >= BigInt::from(1.max(eps - 2));
            s.require(high == (st.omega.len() <= 1), || {
                format!("z = {}: Δ̃(V̄({})) high {high}, |Ω| = {}", id(a, d.z), id(a, u), st.omega.len())
            });
            let ds = st.delta_star[&u] as i64;
            let mut region = vb.clone();
            region.extend(table.poset.side[g].iter().copied());
            let val = l.delta_tilde_of(&region);
            if ds >= 2 {
                s.require(val >= BigInt::from((ds - 3).abs()), || {
                    format!("{}: Δ̃(V̄ ∪ side) = {val} with δ* = {ds}", id(a, u))
                });
            }
            if ds >= 3 && val == BigInt::from(ds - 3) {
                let p = table.pair(g);
                let ok = st.r_single[g].is_zero() && st.t[&u] == 0 && table.at(g).nonpositive && t.less_than(p.far, u);
                s.require(ok, || format!("{}: tight bound without the forced shape", id(a, u)));
            }
        }
    }
}

fn loose_end_equivalences(a: &Analysis, s: &mut Sink) {
    let (l, table, st) = (&a.ledger, &a.table, &a.structure);
    for d in &a.decompositions {
        let (Some(c0), Some(u0)) = (d.c0, d.u0) else { continue };
        let g = d.classes[c0].greatest();
        let facts = [
            !st.omega.is_empty(),
            !l.delta_tilde_of(&st.v_bar_of(d.z)).is_positive(),
            table.at(g).nonpositive,
            table.at(g).nonpositive
                && st.skeleton_pairs(table).all(|j| j == g || !table.poset.less(g, j) || !table.at(j).nonpositive),
        ];
        s.require(facts.iter().all(|&f| f == facts[0]), || {
            format!("z = {}: equivalences split as {facts:?}", id(a, d.z))
        });
        let mut region = st.v_bar_of(u0);
        region.extend(table.poset.side[g].iter().copied());
        let val = l.delta_tilde_of(&region);
        if val <= BigInt::one() {
            s.require(facts[0], || format!("z = {}: Δ̃(V̄(u0) ∪ side) = {val} but Ω is empty", id(a, d.z)));
        }
        if st.delta_star[&u0] == 2 && val.is_one() {
            let r = r_with_teeth(a, u0, g);
            s.require(r.is_one(), || format!("z = {}: R at {} with teeth is {r}", id(a, d.z), id(a, u0)));
        }
        if st.omega.len() == 2 {
            let far_end = st.omega.iter().copied().find(|&x| x != d.z);
            let ok = d.classes.len() == 1 && d.classes[0].c_dot.is_zero() && far_end == Some(u0);
            s.require(ok, || format!("z = {}: two loose ends but {} combs", id(a, d.z), d.classes.len()));
        }
    }
}

/// R(u, {e} ∪ teeth at u) for the greatest pair `g` of a class topped at `u`.
fn r_with_teeth(a: &Analysis, u: CellRef, g: usize) -> Rational {
    let (t, l, table, st) = (&a.tree, &a.ledger, &a.table, &a.structure);
    let mut edges = vec![table.pair(g).e];
    edges.extend(table.pairs_at(u).filter(|&i| st.is_tooth(i)).map(|i| table.pair(i).e));
    r_and_delta_bar(t, l, table, u, &edges).map(|x| x.0).unwrap_or_else(|_| rat(-1))
}

fn comb_totals(a: &Analysis, s: &mut Sink) {
    let (l, table, st) = (&a.ledger, &a.table, &a.structure);
    let dt = a.delta_tilde();
    for d in &a.decompositions {
        let z = id(a, d.z);
        let (Some(c0), Some(u0)) = (d.c0, d.u0) else { continue };
        let others: BigInt =
            d.classes.iter().enumerate().filter(|(ci, _)| *ci != c0).map(|(_, c)| c.c_dot.clone()).sum();
        let lhs = BigInt::from(d.classes.len()) + &others;
        s.require(lhs <= max0(dt) + 1, || format!("z = {z}: |Ō| + Σċ = {lhs}"));
        if st.omega.len() <= 1 {
            let by_y: BigInt =
                d.classes.iter().map(|c| l.delta_tilde_of(&c.y)).sum::<BigInt>() + l.delta_tilde_of(&st.v_bar_of(d.z));
            s.require(by_y == *dt, || format!("z = {z}: Σ Δ̃(Y) + Δ̃(V̄(z)) = {by_y}"));
            let g = d.classes[c0].greatest();
            let mut region = st.v_bar_of(u0);
            region.extend(table.poset.side[g].iter().copied());
            let by_top: BigInt = d
                .classes
                .iter()
                .enumerate()
                .filter(|(ci, _)| *ci != c0)
                .map(|(_, c)| l.delta_tilde_of(&c.y))
                .sum::<BigInt>()
                + l.delta_tilde_of(&region);
            s.require(by_top == *dt, || format!("z = {z}: top region plus other Y gives {by_top}"));
        }
    }
    if l.n_set.len() > 1 {
        for d in &a.decompositions {
            if BigInt::from(d.classes.len()) >= *dt {
                s.require(!st.omega.is_empty(), || format!("z = {}: |Ō| ≥ Δ̃ but Ω is empty", id(a, d.z)));
            }
        }
    }
}

fn comb_statistics(a: &Analysis, s: &mut Sink) {
    let dt = a.delta_tilde();
    for d in &a.decompositions {
        if d.classes.len() < 2 {
            continue;
        }
        let z = id(a, d.z);
        let (Some(st), Some(q)) = (&d.stats, &d.quotient) else {
            s.fail(format!("z = {z}: statistics missing"));
            continue;
        };
        let l2 = st.leaves - 2;
        let h = st.b + 2 * l2 + st.o2 as i64;
        let mut total = BigInt::from(h + st.teeth_excess) + &st.x0;
        for (ci, x) in &st.x_c {
            total += &d.classes[*ci].c_dot + x;
            s.require(!x.is_negative(), || format!("z = {z}: x_C = {x}"));
        }
        s.require(total == *dt, || format!("z = {z}: statistics give {total}, Δ̃ = {dt}"));
        let nonneg = st.b >= 0 && l2 >= 0 && st.teeth_excess >= 0 && !st.x0.is_negative();
        s.require(nonneg, || format!("z = {z}: B = {}, L − 2 = {l2}, T = {}, x0 = {}", st.b, st.teeth_excess, st.x0));
        s.require(*dt >= BigInt::from(h) && h >= 2, || format!("z = {z}: H = {h}, Δ̃ = {dt}"));
        s.require(q.h() == h && st.h == h, || format!("z = {z}: quotient H = {}, statistics H = {h}", q.h()));
    }
}

// ---------------------------------------------------------------- Nd* and ξ

fn tooth_base_nodes(a: &Analysis, s: &mut Sink) {
    let (t, l, table, st) = (&a.tree, &a.ledger, &a.table, &a.structure);
    for &w in &st.skeleton {
        let vb = st.v_bar_of(w);
        let vw = st.v.get(&w).cloned().unwrap_or_default();
        let mut near = vw.clone();
        near.insert(w);
        for &x in &vb {
            let vx = l.v(x);
            if near.contains(&x) {
                continue;
            }
            s.require(!l.nd_star.contains(&x), || format!("{} in Nd* deep in a tooth of {}", id(a, x), id(a, w)));
            s.require(vx.pure && vx.a.is_one() && vx.xi == 0 && vx.delta_tilde.is_zero(), || {
                format!("{} inside a tooth of {} is not flat", id(a, x), id(a, w))
            });
        }
        let mut nd_in_v = 0;
        let mut arm_edges = vec![];
        for &x in &vw {
            let e = t.edge_between(w, t.path(w, x)[1]).unwrap();
            arm_edges.push(e);
            if l.nd_star.contains(&x) {
                nd_in_v += 1;
                let vx = l.v(x);
                let c = &table.lookup(w, e).unwrap().c;
                let ok =
                    type_is_one_then_n(vx) && vx.a.is_one() && vx.xi == 1 && vx.delta_tilde.is_zero() && c.is_one();
                s.require(ok, || format!("{} in Nd* ∩ V({}): type {:?}, c = {c}", id(a, x), id(a, w), vx.node_type));
            }
        }
        let nu = l.xi_of(&vb);
        s.require(nu == l.v(w).xi + nd_in_v && nu == l.v(w).xi + l.xi_of(&vw), || format!("ξ(V̄({})) = {nu}", id(a, w)));
        let nw = &l.v(w).n;
        let ds = st.delta_star[&w] as i64;
        let dtv = l.delta_tilde_of(&vb);
        let r = r_and_delta_bar(t, l, table, w, &arm_edges).map(|x| x.0).unwrap_or_else(|_| rat(-1));
        let r_floor = rat(nu as i64) * (Rational::one() - Rational::new(BigInt::one(), nw.clone()));
        let b_floor = BigInt::from(nu as i64 + ds - 2) * (nw - 1);
        s.require(r >= r_floor, || format!("{}: R over teeth {r} < {r_floor}", id(a, w)));
        s.require(dtv >= b_floor, || format!("{}: Δ̃(V̄) = {dtv} < {b_floor}", id(a, w)));
        let c_case = l.n_set != BTreeSet::from([w]) && !st.omega.contains(&w);
        let c_floor = BigInt::from(nu as i64 + ds - 2);
        if c_case {
            s.require(dtv >= c_floor, || format!("{}: Δ̃(V̄) = {dtv} < ν + δ* − 2 = {c_floor}", id(a, w)));
        }
        if r == r_floor || dtv == b_floor || (c_case && dtv == c_floor) {
            let all_pure = vb.iter().all(|&x| l.v(x).pure && l.v(x).a.is_one());
            s.require(all_pure && vw.is_subset(&l.nd_star), || format!("{}: equality without purity", id(a, w)));
        }
    }
}

fn nd_star_special(a: &Analysis, s: &mut Sink) {
    let (l, st) = (&a.ledger, &a.structure);
    let v0 = a.tree.root();
    let cap = max0(a.delta_tilde()) + 2;
    let xi = BigInt::from(l.xi_total);
    if l.n_set.len() == 1 {
        let is_b = matches!(recognize_canonical(a), Some(Canonical::TreeB { .. }));
        s.require((xi == cap) == is_b, || format!("|𝒩| = 1: ξ = {xi}, bound {cap}, canonical pair {is_b}"));
    }
    if st.is_brush {
        s.require(st.v_bar_of(v0) == l.n_set, || "brush: V̄(v0) ≠ 𝒩".into());
        let mut allowed = st.v.get(&v0).cloned().unwrap_or_default();
        allowed.insert(v0);
        s.require(l.nd_star.is_subset(&allowed), || "brush: Nd* outside v0 and its teeth ends".into());
        if xi == a.delta_tilde() + 2 {
            let vv = st.v.get(&v0).cloned().unwrap_or_default();
            let pure = l.n_set.iter().all(|&x| l.v(x).pure && l.v(x).a.is_one());
            s.require(vv.is_subset(&l.nd_star) && pure, || "brush at the ξ bound without purity".into());
        }
    }
    if st.omega.len() == 2 {
        s.require(l.nd_star.is_subset(&st.omega) && l.nd_star.len() == l.xi_total && l.xi_total <= 2, || {
            "two loose ends: Nd* misplaced".into()
        });
        for &x in &l.nd_star {
            let vx = l.v(x);
            s.require(type_is_one_then_n(vx) && vx.a.is_one() && vx.xi == 1 && vx.delta_tilde.is_zero(), || {
                format!("{} in Nd* with type {:?}", id(a, x), vx.node_type)
            });
        }
        if l.xi_total == 2 {
            let ok = l.n_set.iter().all(|&x| l.v(x).pure && l.v(x).a.is_one() && l.delta_tilde(x).is_zero());
            s.require(ok, || "two loose ends with ξ = 2 but not all flat and pure".into());
        }
    }
}

fn nd_star_general(a: &Analysis, s: &mut Sink) {
    for d in &a.decompositions {
        nd_star_at(a, d, s);
    }
}

fn nd_star_at(a: &Analysis, d: &CombDecomposition, s: &mut Sink) {
    let (l, table, st) = (&a.ledger, &a.table, &a.structure);
    let (Some(c0), Some(u0)) = (d.c0, d.u0) else { return };
    let z = d.z;
    let zname = id(a, z);
    let tops: BTreeSet<CellRef> = d.classes.iter().map(|c| c.u).collect();
    let in_v: BTreeSet<CellRef> = st.v.values().flatten().copied().collect();
    let mut top_reach: BTreeSet<CellRef> = tops.clone();
    for u in &tops {
        top_reach.extend(st.v.get(u).into_iter().flatten().copied());
    }
    for &x in l.nd_star.iter().filter(|&&x| x != z) {
        let i = tops.contains(&x);
        let ii = in_v.contains(&x);
        let iii = st.skeleton.contains(&x) && !tops.contains(&x) && l.v(x).epsilon == 2;
        let count = [i, ii, iii].iter().filter(|&&b| b).count();
        s.require(count == 1, || format!("z = {zname}: {} in Nd* meets {count} of the three cases", id(a, x)));
        if ii || iii {
            let vx = l.v(x);
            s.require(type_is_one_then_n(vx) && vx.a.is_one(), || {
                format!("z = {zname}: {} has type {:?}, a = {}", id(a, x), vx.node_type, vx.a)
            });
        }
    }
    for c in &d.classes {
        let least = c.least();
        if !table.poset.side[least].is_disjoint(&l.nd_star) {
            s.require(c.c_dot.is_zero(), || {
                format!("z = {zname}: comb at {} meets Nd* below but ċ = {}", id(a, c.u), c.c_dot)
            });
        }
    }
    for &v in st.skeleton.iter().filter(|&&v| v != z) {
        let Some(i) = toward(a, v, z) else { continue };
        let side = &table.poset.side[i];
        if side.is_disjoint(&l.nd_star) {
            continue;
        }
        for &x in l.nd_star.difference(side) {
            s.require(top_reach.contains(&x), || {
                format!("z = {zname}: {} in Nd* outside the side of {} and off the comb tops", id(a, x), id(a, v))
            });
        }
    }
    let g = d.classes[c0].greatest();
    let side0 = &table.poset.side[g];
    if BigInt::from(l.xi_total) == max0(a.delta_tilde()) + 2 {
        s.require(l.v(u0).n > BigInt::one(), || format!("z = {zname}: N(u0) = 1 at the ξ bound"));
        for &x in l.n_set.difference(side0) {
            s.require(l.v(x).pure && l.v(x).a.is_one(), || {
                format!("z = {zname}: {} outside the top side is not pure", id(a, x))
            });
        }
        for &x in &l.nd_star {
            s.require(l.v(x).pure && l.v(x).a.is_one(), || format!("z = {zname}: {} in Nd* is not pure", id(a, x)));
        }
        for &w in st.skeleton.difference(side0) {
            let vw = st.v.get(&w).cloned().unwrap_or_default();
            s.require(vw.is_subset(&l.nd_star), || format!("z = {zname}: V({}) not inside Nd*", id(a, w)));
        }
    }
    if !a.delta_tilde().is_positive() {
        let mut allowed = st.v.get(&u0).cloned().unwrap_or_default();
        allowed.insert(u0);
        s.require(d.classes.len() == 1 && l.nd_star.is_subset(&allowed), || {
            format!("z = {zname}: Δ̃ ≤ 0 with {} combs", d.classes.len())
        });
        if l.xi_total == 2 {
            s.require(table.at(g).m.is_one(), || format!("z = {zname}: ξ = 2 but M(u0) = {}", table.at(g).m));
        }
    }
}

fn applies_nd_star_general(a: &Analysis) -> bool {
    a.structure.skeleton.len() != 1 && a.structure.omega.len() != 2
}

// ---------------------------------------------------------------- one-vertex skeleton

fn root_fan(a: &Analysis, s: &mut Sink) {
    let fan = match root_fan_data(a) {
        Ok(f) => f,
        Err(e) => {
            s.fail(e.to_string());
            return;
        }
    };
    let (t, l, table) = (&a.tree, &a.ledger, &a.table);
    let v0 = t.root();
    let dt = a.delta_tilde();
    let sum_ad: BigInt = fan.edges.iter().map(|f| &f.a * &f.d).sum();
    s.require(sum_ad == fan.n, || format!("Σ a·d = {sum_ad}, N = {}", fan.n));
    for f in &fan.edges {
        let ok = f.a.is_positive() && f.d.is_positive() && f.k.is_positive() && &f.k * &f.d == fan.n;
        s.require(ok, || format!("edge {}: a = {}, d = {}, k = {}", t.edge_label(f.edge), f.a, f.d, f.k));
        if f.dicritical {
            let det = -t.det(f.edge).unwrap_or_default();
            s.require(f.k == det && f.k == &f.a - &f.x, || {
                format!("edge {}: k = {} but −det = {det}, a − x = {}", t.edge_label(f.edge), f.k, &f.a - &f.x)
            });
        }
    }
    let edges: Vec<_> = t.incident(v0).to_vec();
    if let Ok((r, _)) = r_and_delta_bar(
        t,
        l,
        table,
        v0,
        &edges.iter().copied().filter(|&e| table.poset.find(v0, e).is_some()).collect::<Vec<_>>(),
    ) {
        let want: Rational =
            fan.edges.iter().map(|f| Rational::one() - Rational::new(BigInt::one(), f.k.clone())).sum();
        s.require(r == want, || format!("R(v0) = {r}, Σ(1 − 1/k) = {want}"));
    }
    let gcd_d = fan.edges.iter().fold(BigInt::zero(), |g, f| g.gcd(&f.d));
    if l.degree_gcd.is_one() {
        s.require(gcd_d.is_one(), || format!("gcd of d(e) = {gcd_d}"));
    }
    let delta = fan.delta;
    let pos = dt.is_positive();
    s.require(pos == (*dt >= BigInt::from(2)) && pos == (delta > 2), || format!("Δ̃ = {dt} with δ = {delta}"));
    if delta > 3 {
        let dd = BigInt::from(delta);
        let sum_d: BigInt = fan.edges.iter().map(|f| f.d.clone()).sum();
        let chain = [dd.clone(), &dd * (&dd - 3), (&dd - 3) * sum_d, dt - 2];
        s.require(chain.windows(2).all(|w| w[0] <= w[1]), || format!("δ chain {chain:?}"));
    }
    if l.n_set.len() == 1 {
        s.require(dt.is_even(), || format!("|𝒩| = 1 with odd Δ̃ = {dt}"));
    }
    if *dt == BigInt::from(2) && l.degree_gcd.is_one() {
        let sorted: Vec<BigInt> = fan.sorted_d();
        let shapes: [[i64; 3]; 3] = [[1, 1, 1], [1, 1, 2], [1, 2, 3]];
        let fits = delta == 3
            && fan.edges.iter().all(|f| f.a.is_one())
            && shapes.iter().any(|sh| sh.iter().map(|&x| BigInt::from(x)).eq(sorted.iter().cloned()));
        s.require(fits, || format!("Δ̃ = 2 fan with δ = {delta}, d = {sorted:?}"));
        if l.n_set.len() == 1 {
            s.require(matches!(recognize_canonical(a), Some(Canonical::TreeC { .. })), || {
                "Δ̃ = 2 with |𝒩| = 1 is not a canonical fan".into()
            });
        }
    }
    if *dt < BigInt::from(2) && (l.degree_gcd.is_one() || !dt.is_negative()) {
        let c = recognize_canonical(a);
        s.require(matches!(c, Some(Canonical::TreeA) | Some(Canonical::TreeB { .. })), || {
            format!("Δ̃ = {dt} but the tree is {c:?}")
        });
    }
}

fn applies_root_fan(a: &Analysis) -> bool {
    a.structure.skeleton.len() == 1
}

// ---------------------------------------------------------------- rational trees

fn rational(a: &Analysis, s: &mut Sink) {
    match rational_structure_report(a) {
        Ok(r) => {
            for o in r.failures() {
                for w in &o.witnesses {
                    s.fail(format!("{}: {w}", o.id));
                }
            }
            if let RationalShape::Chain(c) = &r.shape {
                let n = c.cells.len();
                let zn = c.cells[n - 1];
                if let Ok(tuple) = divisor_tuple(a, zn) {
                    s.require(tuple.iter().all(|x| x.is_positive() && (n_of(a, zn) % x).is_zero()), || {
                        format!("tuple at {} has a non-divisor", id(a, zn))
                    });
                    s.require(tail_case(n_of(a, zn), &tuple) == c.tail, || "tail case recomputed differently".into());
                }
            }
        }
        Err(e) => s.fail(e.to_string()),
    }
}

fn nonpositive_vertices(a: &Analysis) -> Vec<CellRef> {
    a.ledger.n_set.iter().copied().filter(|&u| a.table.pairs_at(u).all(|i| a.table.at(i).nonpositive)).collect()
}

fn rational_tuples(a: &Analysis, s: &mut Sink) {
    for u in nonpositive_vertices(a) {
        match divisor_tuple(a, u) {
            Ok(tuple) => {
                let n = n_of(a, u);
                s.require(tuple.iter().all(|x| x.is_positive() && (n % x).is_zero()), || {
                    format!("{}: tuple {tuple:?} has a non-divisor of {n}", id(a, u))
                });
                s.require(tail_case(n, &tuple).is_some(), || format!("{}: tuple {tuple:?} fits no case", id(a, u)));
            }
            Err(w) => s.fail(w),
        }
    }
}

// ---------------------------------------------------------------- Δ̃ = 2 and Δ̃ = 4

fn delta_is(a: &Analysis, v: i64) -> bool {
    *a.delta_tilde() == BigInt::from(v)
}

fn other_tops(d: &CombDecomposition) -> Vec<CellRef> {
    let c0 = d.c0.unwrap_or(usize::MAX);
    d.classes.iter().enumerate().filter(|(ci, _)| *ci != c0).map(|(_, c)| c.u).collect()
}

fn inner_flat(a: &Analysis, from: CellRef, to: CellRef) -> bool {
    let p = a.tree.path(from, to);
    p[1..p.len() - 1].iter().all(|&x| a.ledger.v(x).epsilon == 2 && a.ledger.delta_tilde(x).is_zero())
}

fn delta_two(a: &Analysis, s: &mut Sink) {
    let (l, st) = (&a.ledger, &a.structure);
    s.require(st.omega.len() <= 1, || format!("|Ω| = {}", st.omega.len()));
    for d in &a.decompositions {
        let z = id(a, d.z);
        let k = d.classes.len();
        s.require(k <= 3, || format!("z = {z}: {k} combs"));
        if k >= 2 {
            s.require(st.omega.len() == 1, || format!("z = {z}: {k} combs with |Ω| = {}", st.omega.len()));
            let row = d.quotient.as_ref().and_then(quotient_row);
            let want = if k == 2 { 'a' } else { 'b' };
            s.require(row == Some(want), || format!("z = {z}: quotient row {row:?}, expected {want}"));
        }
        let (Some(c0), Some(u0)) = (d.c0, d.u0) else { continue };
        let g = d.classes[c0].greatest();
        let t0 = st.t[&u0];
        let ds0 = st.delta_star[&u0];
        let vb_one = |u: CellRef| l.delta_tilde_of(&st.v_bar_of(u)).is_one();
        match k {
            3 => {
                s.require(ds0 == 3 && st.r_single[g].is_zero() && t0 == 0, || {
                    format!("z = {z}: u0 has δ* = {ds0}, t = {t0}, R = {}", st.r_single[g])
                });
                for u in other_tops(d) {
                    s.require(st.t[&u] <= 2 && vb_one(u) && inner_flat(a, u0, u), || {
                        format!("z = {z}: comb top {} off shape", id(a, u))
                    });
                }
            }
            2 => {
                let r = r_with_teeth(a, u0, g);
                s.require(ds0 == 2 && t0 <= 2 && r.is_one(), || {
                    format!("z = {z}: u0 has δ* = {ds0}, t = {t0}, R = {r}")
                });
                for u in other_tops(d) {
                    s.require(st.t[&u] <= 2 && vb_one(u) && inner_flat(a, u0, u), || {
                        format!("z = {z}: comb top {} off shape", id(a, u))
                    });
                }
            }
            1 => {
                let vd = l.v(u0);
                let big_k = vd.k.values().filter(|x| **x > BigInt::one()).count();
                let count = big_k + vd.a_star + t0;
                s.require(ds0 == 1 && count <= 4, || format!("z = {z}: δ*(u0) = {ds0}, count {count}"));
            }
            _ => {}
        }
    }
}

fn delta_four(a: &Analysis, s: &mut Sink) {
    let st = &a.structure;
    s.require(st.omega.len() <= 1, || format!("|Ω| = {}", st.omega.len()));
    for d in &a.decompositions {
        let z = id(a, d.z);
        let k = d.classes.len();
        s.require(k <= 5, || format!("z = {z}: {k} combs"));
        if k >= 4 {
            s.require(st.omega.len() == 1, || format!("z = {z}: {k} combs with |Ω| = {}", st.omega.len()));
        }
        if k > 1 {
            let row = d.quotient.as_ref().and_then(quotient_row);
            s.require(row.is_some_and(|r| ROWS_FOR_FOUR.contains(&r)), || format!("z = {z}: quotient row {row:?}"));
            if let Some(stats) = &d.stats {
                if stats.h == 4 {
                    let zero = stats.teeth_excess == 0
                        && stats.x0.is_zero()
                        && stats.x_c.values().all(Zero::is_zero)
                        && other_tops(d).len() + 1 == k
                        && d.classes.iter().enumerate().all(|(ci, c)| Some(ci) == d.c0 || c.c_dot.is_zero());
                    s.require(zero, || format!("z = {z}: H = 4 leaves slack"));
                }
            }
        }
    }
}

// ---------------------------------------------------------------- registry

static CHECKS: &[Check] = &[
    Check {
        id: "root-multiplicity-bounds",
        statement: "N(v0) ≥ #(1)-arrows ≥ points at infinity ≥ 1, and the root carries no arrow and a = 1",
        applies: always,
        run: root_bounds,
    },
    Check {
        id: "nonnegative-region-connected",
        statement: "vertices with N ≥ 0, and with N > 0, form connected sets",
        applies: always,
        run: nonnegative_connected,
    },
    Check {
        id: "dead-end-multiplicity",
        statement: "N at a vertex is the dead-end decoration times N of the dead end",
        applies: always,
        run: dead_end_multiplicity,
    },
    Check {
        id: "unit-multiplicity-edges",
        statement: "below a vertex with N = 1 hang only degree-one dicriticals with det = −1",
        applies: always,
        run: unit_multiplicity_edges,
    },
    Check {
        id: "linear-path-determinants",
        statement: "both determinant identities hold on every linear path",
        applies: always,
        run: linear_path_determinants,
    },
    Check {
        id: "no-valency-two",
        statement: "non-root vertices have valency at least 3",
        applies: always,
        run: valency_rules,
    },
    Check {
        id: "h-hat-divides-sums",
        statement: "h·d and ĥ·d divide the sums of x and x̂ over the arrows of a set of dicriticals",
        applies: always,
        run: h_hat_divides,
    },
    Check {
        id: "local-delta-tilde-recomputed",
        statement: "every Δ and Δ̃ matches a recomputation from the decorations",
        applies: always,
        run: local_recomputed,
    },
    Check {
        id: "unit-multiplicity-vertex",
        statement: "N = 1 forces Δ̃ = σ = 0, a = 1, ε ≤ 1 and an all-ones type",
        applies: always,
        run: unit_multiplicity_vertex,
    },
    Check {
        id: "valency-sign",
        statement: "ε > 2 forces Δ̃ > 0, and Δ̃ < 0 forces ε ≤ 1",
        applies: always,
        run: valency_sign,
    },
    Check {
        id: "sigma-as-sum",
        statement: "σ/N equals Σ(1 − 1/k) over adjacent dicriticals",
        applies: always,
        run: sigma_sum,
    },
    Check {
        id: "loose-end-value",
        statement: "a loose end with Δ̃ ≤ 0 has Δ̃ = 1 − d/a and type [d, N, ..., N]",
        applies: always,
        run: loose_end_value,
    },
    Check {
        id: "sigma-bounds",
        statement: "σ ≥ N − d and σ ≥ ξ(N − 1), with the equality cases",
        applies: always,
        run: sigma_bounds,
    },
    Check {
        id: "nd-star-loose-ends",
        statement: "Nd* vertices that are loose ends have ξ = 1, Δ̃ = 0, a = 1 and type [1, N, ...]",
        applies: always,
        run: nd_star_loose_ends,
    },
    Check {
        id: "xi-bound",
        statement: "|Nd*| ≤ ξ(𝒩) ≤ 2 + max(0, Δ̃), with the equality cases",
        applies: always,
        run: xi_bound,
    },
    Check {
        id: "root-valency-bound",
        statement: "Δ̃ ≥ (δ − 1)(δ − 2) when the root has δ ≥ 3, and the matching upper bound on δ",
        applies: always,
        run: root_valency_bound,
    },
    Check {
        id: "characteristic-divides",
        statement: "c > 0 and c divides p, p′ and N",
        applies: always,
        run: characteristic_divides,
    },
    Check {
        id: "characteristic-divisibility-chain",
        statement: "lower characteristic numbers and node gcds are multiples along paths",
        applies: always,
        run: divisibility_chain,
    },
    Check {
        id: "multiplicity-one-points-up",
        statement: "M(u,e) = 1 means e leads toward the root",
        applies: always,
        run: multiplicity_one_points_up,
    },
    Check {
        id: "pair-identity",
        statement: "the R, Δ̄, η identity for edge sets of size at most 3 and for all edges, with its corollary",
        applies: always,
        run: pair_identity,
    },
    Check {
        id: "vertex-identity",
        statement: "Δ̃(𝒩) = (R − 2)N + 2 + Σ η at every vertex",
        applies: always,
        run: vertex_identity,
    },
    Check {
        id: "eta-growth",
        statement: "η ≥ 0 and η dominates the sum over immediate predecessors",
        applies: always,
        run: eta_growth,
    },
    Check {
        id: "monotone-on-comparable-pairs",
        statement: "sides, c, η and Δ̃ are monotone along the pair order",
        applies: always,
        run: monotone,
    },
    Check {
        id: "nonpositive-pairs",
        statement: "nonpositive ⇔ η = 0 ⇔ Δ̃(side) = 1 − c, with c integral",
        applies: always,
        run: nonpositive_pairs,
    },
    Check {
        id: "count-bound",
        statement: "the #(u) count lies between its lower bound and max(3, Δ̃ + 2)",
        applies: always,
        run: count_bound,
    },
    Check {
        id: "trivial-paths",
        statement: "characteristic numbers, direction and nodes along Δ̃-trivial paths",
        applies: always,
        run: trivial_paths,
    },
    Check {
        id: "teeth",
        statement: "teeth have η = 0, M > 1 and a positive base, and t counts them",
        applies: always,
        run: teeth,
    },
    Check {
        id: "tooth-bases",
        statement: "tooth bases carry enough Δ̃, and brushes are rooted at v0",
        applies: always,
        run: tooth_bases,
    },
    Check { id: "omega-membership", statement: "when v0 belongs to Ω", applies: always, run: omega_membership },
    Check {
        id: "omega-size",
        statement: "|Ω| ≤ 2, with the shape of 𝒩 in each case",
        applies: always,
        run: omega_size,
    },
    Check {
        id: "skeleton",
        statement: "the skeleton is a subtree holding v0, W and Ω, and the V̄ sets partition 𝒩",
        applies: always,
        run: skeleton,
    },
    Check {
        id: "comb-relation",
        statement: "the comb relation is an equivalence with totally ordered classes",
        applies: always,
        run: comb_relation,
    },
    Check {
        id: "comb-characterization",
        statement: "comb ⇔ equal η with no loose end in between, and the flat-path equivalences",
        applies: always,
        run: comb_characterization,
    },
    Check {
        id: "comb-interior-types",
        statement: "vertices inside a comb have the restricted node types",
        applies: always,
        run: comb_interior_types,
    },
    Check {
        id: "decomposition-partitions",
        statement: "combs partition the ordered pairs and the Y sets partition 𝒩 ∖ V̄(z)",
        applies: always,
        run: decomposition_partitions,
    },
    Check {
        id: "comb-tops",
        statement: "the bounds at the top vertex of every comb",
        applies: always,
        run: class_tops,
    },
    Check {
        id: "loose-end-equivalences",
        statement: "Ω ≠ ∅ ⇔ Δ̃(V̄(z)) ≤ 0 ⇔ the top pair is nonpositive ⇔ it is maximal such",
        applies: always,
        run: loose_end_equivalences,
    },
    Check {
        id: "comb-totals",
        statement: "Δ̃ splits over the Y sets, and the comb count is bounded",
        applies: always,
        run: comb_totals,
    },
    Check {
        id: "comb-statistics",
        statement: "the statistics identity, their signs, and H of the quotient",
        applies: always,
        run: comb_statistics,
    },
    Check {
        id: "tooth-base-nodes",
        statement: "where Nd* can sit around a skeleton vertex and the resulting Δ̃ bounds",
        applies: always,
        run: tooth_base_nodes,
    },
    Check {
        id: "nd-star-special-cases",
        statement: "Nd* when |𝒩| = 1, for brushes, and with two loose ends",
        applies: always,
        run: nd_star_special,
    },
    Check {
        id: "nd-star-general",
        statement: "the placement of Nd* relative to the combs",
        applies: applies_nd_star_general,
        run: nd_star_general,
    },
    Check {
        id: "root-fan",
        statement: "fan identities when the skeleton is the root alone",
        applies: applies_root_fan,
        run: root_fan,
    },
    Check {
        id: "rational-structure",
        statement: "canonical or chain structure of a rational tree",
        applies: is_rational_tree,
        run: rational,
    },
    Check {
        id: "rational-divisor-tuples",
        statement: "divisor tuples at vertices whose pairs are all nonpositive",
        applies: is_rational_tree,
        run: rational_tuples,
    },
    Check {
        id: "delta-two",
        statement: "comb counts and shapes when Δ̃(𝒩) = 2",
        applies: |a| delta_is(a, 2),
        run: delta_two,
    },
    Check {
        id: "delta-four",
        statement: "comb counts and shapes when Δ̃(𝒩) = 4",
        applies: |a| delta_is(a, 4),
        run: delta_four,
    },
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::fixtures::{load, ALL};
    use std::collections::BTreeMap;

    #[test]
    fn fixtures_are_clean() {
        for (name, _) in ALL {
            let r = audit_tree(load(name)).unwrap();
            let bad: Vec<_> = r.failures().collect();
            assert!(bad.is_empty(), "{name}: {bad:#?}");
        }
    }

    #[test]
    fn ids_are_unique() {
        let ids: BTreeSet<&str> = checks().iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), checks().len());
    }

    #[test]
    fn t_d_skips_the_special_values() {
        let r = audit_tree(load("t_d")).unwrap();
        let status: BTreeMap<&str, Status> = r.outcomes.iter().map(|o| (o.id.as_str(), o.status)).collect();
        for skipped in ["delta-two", "delta-four", "rational-structure", "root-fan"] {
            assert_eq!(status[skipped], Status::Skipped, "{skipped}");
        }
        assert_eq!(status["pair-identity"], Status::Pass);
    }

    #[test]
    fn t_c_1_1_2_runs_the_delta_two_suite() {
        let r = audit_tree(load("t_c_1_1_2")).unwrap();
        let two = r.outcomes.iter().find(|o| o.id == "delta-two").unwrap();
        assert_eq!(two.status, Status::Pass);
        let fan = r.outcomes.iter().find(|o| o.id == "root-fan").unwrap();
        assert_eq!(fan.status, Status::Pass);
    }

    #[test]
    fn corrupted_delta_tilde_names_the_vertex() {
        let mut a = analyze(load("t_d")).unwrap();
        let w = a.tree.find("w").unwrap();
        a.ledger.vertices.get_mut(&w).unwrap().delta_tilde += 1;
        let r = audit(&a);
        let hit = r.failures().find(|o| o.id == "local-delta-tilde-recomputed").expect("a failure");
        assert!(hit.witnesses.iter().any(|w| w.starts_with("w:")), "{hit:?}");
    }

    #[test]
    fn subsets_are_complete() {
        assert_eq!(subsets_up_to(4, 3).len(), 1 + 4 + 6 + 4 + 1);
        assert_eq!(subsets_up_to(2, 3).len(), 4);
    }
}
