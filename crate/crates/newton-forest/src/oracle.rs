//! Slow recomputations straight from the definitions, sharing no code with the engine.
//!
//! Nothing here is memoized: multiplicities come from explicit path products and characteristic
//! numbers from plain recursion over the pairs below. Use only on small trees.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::tree::{CellRef, EdgeRef, Tree};

/// x_{v,α}: the product of the decorations, taken at the path end, of edges touching the path from v to α.
fn path_product(t: &Tree, v: CellRef, alpha: CellRef) -> BigInt {
    let path = t.path(v, alpha);
    let mut on_path = vec![];
    for w in path.windows(2) {
        on_path.push(t.edge_between(w[0], w[1]).unwrap());
    }
    let mut x = BigInt::one();
    for &c in &path {
        for &e in t.incident(c) {
            if !on_path.contains(&e) {
                x *= t.q(e, c);
            }
        }
    }
    x
}

/// N_v as the sum of path products over all (1)-arrows.
pub fn oracle_n(t: &Tree, v: CellRef) -> BigInt {
    t.cells().filter(|&a| t.is_one_arrow(a)).map(|a| path_product(t, v, a)).sum()
}

fn is_dicritical(t: &Tree, v: CellRef) -> bool {
    t.is_vertex(v) && oracle_n(t, v).is_zero()
}

fn in_n(t: &Tree, v: CellRef) -> bool {
    t.is_vertex(v) && oracle_n(t, v).is_positive()
}

fn degree(t: &Tree, v: CellRef) -> BigInt {
    BigInt::from(t.neighbors(v).filter(|&x| t.is_one_arrow(x)).count())
}

fn dead_end_decoration(t: &Tree, v: CellRef) -> BigInt {
    for &e in t.incident(v) {
        if t.is_zero_arrow(t.other_end(e, v)) {
            return t.q(e, v).clone();
        }
    }
    BigInt::one()
}

/// d(v): gcd of adjacent dicritical degrees, or N_v when v touches no dicritical.
fn d_of(t: &Tree, v: CellRef) -> BigInt {
    let mut g = BigInt::zero();
    let mut any = false;
    for x in t.neighbors(v) {
        if is_dicritical(t, x) {
            any = true;
            g = g.gcd(&degree(t, x));
        }
    }
    if any {
        g
    } else {
        oracle_n(t, v)
    }
}

/// gcd of two nonnegative rationals, computed over a common denominator.
fn gcd_q(x: &BigRational, y: &BigRational) -> BigRational {
    let den = x.denom() * y.denom();
    let a = x.numer() * y.denom();
    let b = y.numer() * x.denom();
    BigRational::new(a.gcd(&b), den)
}

/// c(u,e) by direct recursion on the pairs below (u,e).
pub fn oracle_c(t: &Tree, u: CellRef, e: EdgeRef) -> BigRational {
    let far = t.other_end(e, u);
    let mut g = BigRational::from_integer(d_of(t, far));
    for y in t.neighbors(far) {
        if y != u && in_n(t, y) {
            let f = t.edge_between(far, y).unwrap();
            g = gcd_q(&g, &oracle_c(t, far, f));
        }
    }
    g / BigRational::from_integer(dead_end_decoration(t, far))
}

/// Δ̃(𝒩) = 2 − M(𝒯) − D(𝒯), with M summed over vertices and (0)-arrows.
pub fn oracle_delta_tilde_n(t: &Tree) -> BigInt {
    let mut m = BigInt::zero();
    let mut d_total = BigInt::zero();
    for c in t.cells() {
        if t.is_vertex(c) || t.is_zero_arrow(c) {
            let n = oracle_n(t, c);
            m -= &n * (BigInt::from(t.valency(c)) - 2);
            if t.is_vertex(c) && n.is_zero() {
                d_total += degree(t, c);
            }
        }
    }
    BigInt::from(2) - m - d_total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::fixtures::{load, ALL};
    use crate::multiplicity::multiplicities;

    #[test]
    fn n_agrees_on_fixtures() {
        for (name, _) in ALL {
            let t = load(name);
            let m = multiplicities(&t);
            for c in t.cells().filter(|&c| t.is_vertex(c) || t.is_zero_arrow(c)) {
                assert_eq!(&oracle_n(&t, c), m.n(c).unwrap(), "{name} {}", t.id(c));
            }
        }
    }

    #[test]
    fn t_d_values() {
        let t = load("t_d");
        let v0 = t.root();
        let w = t.find("w").unwrap();
        let e = t.edge_between(v0, w).unwrap();
        assert_eq!(oracle_c(&t, v0, e), BigRational::new(3.into(), 2.into()));
        assert_eq!(oracle_c(&t, w, e), BigRational::from_integer(6.into()));
        assert_eq!(oracle_delta_tilde_n(&t), BigInt::from(-4));
    }

    #[test]
    fn delta_tilde_on_families() {
        for (name, want) in [("t_a", 0), ("t_b_2_3", 0), ("t_c_1_2_3", 2)] {
            assert_eq!(oracle_delta_tilde_n(&load(name)), BigInt::from(want), "{name}");
        }
    }
}
