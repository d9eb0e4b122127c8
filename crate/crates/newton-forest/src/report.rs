//! Deterministic JSON and text renderings of an analysis.
//!
//! Object keys come out sorted (serde_json's default map is ordered). Integers that fit in 64 bits
//! are JSON numbers and larger ones are decimal strings; rationals are always "p/q" or "p" strings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::analysis::Analysis;
use crate::audit::{AuditReport, Status};
use crate::characteristic::Rational;
use crate::classify::{is_rational_tree, rational_structure_report, recognize_canonical, RationalShape};
use crate::io::TreeDocument;
use crate::structure::CombDecomposition;
use crate::tree::CellRef;

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn ratio(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn cells(a: &Analysis, set: &BTreeSet<CellRef>) -> Value {
    let mut ids: Vec<&str> = set.iter().map(|&c| a.tree.id(c)).collect();
    ids.sort_unstable();
    json!(ids)
}

fn pair_key(a: &Analysis, i: usize) -> String {
    let p = a.table.pair(i);
    format!("({}, {})", a.tree.id(p.u), a.tree.edge_label(p.e))
}

fn vertex_entry(a: &Analysis, c: CellRef) -> Value {
    let vd = a.ledger.v(c);
    let s = &a.structure;
    let mut m = Map::new();
    m.insert("n".into(), int(&vd.n));
    m.insert("a".into(), int(&vd.a));
    m.insert("epsilon".into(), json!(vd.epsilon));
    m.insert("delta".into(), int(&vd.delta));
    m.insert("delta_tilde".into(), int(&vd.delta_tilde));
    m.insert("sigma".into(), int(&vd.sigma));
    m.insert("d".into(), int(&vd.d));
    m.insert("xi".into(), json!(vd.xi));
    m.insert("pure".into(), json!(vd.pure));
    m.insert("node_type".into(), json!(vd.node_type));
    m.insert("a_star".into(), json!(vd.a_star));
    let k: Map<String, Value> = vd.k.iter().map(|(&u, k)| (a.tree.id(u).to_string(), int(k))).collect();
    m.insert("k".into(), Value::Object(k));
    if let Some(ds) = s.delta_star.get(&c) {
        m.insert("delta_star".into(), json!(ds));
    }
    if let Some(t) = s.t.get(&c) {
        m.insert("t".into(), json!(t));
    }
    Value::Object(m)
}

fn global_entry(a: &Analysis) -> Value {
    let l = &a.ledger;
    json!({
        "delta_total": int(&l.delta_total),
        "delta_tilde": int(&l.delta_tilde_total),
        "m_of_tree": int(&a.multiplicities.m_of_t),
        "degree_sum": int(&l.degree_sum),
        "degree_gcd": int(&l.degree_gcd),
        "genus": l.genus.as_ref().map(int),
        "xi": l.xi_total,
        "points_at_infinity": a.multiplicities.points_at_infinity,
        "n_set": cells(a, &l.n_set),
        "dicriticals": cells(a, &l.d_set),
        "nodes": cells(a, &l.nodes),
        "nd_star": cells(a, &l.nd_star),
        "minimally_complete": a.info.minimally_complete,
    })
}

fn table_entry(a: &Analysis) -> Value {
    let mut m = Map::new();
    for i in 0..a.table.poset.len() {
        let d = a.table.at(i);
        m.insert(
            pair_key(a, i),
            json!({
                "c": ratio(&d.c),
                "m": int(&d.m),
                "p": int(&d.p),
                "p_prime": int(&d.p_prime),
                "eta": ratio(&d.eta),
                "side_delta_tilde": int(&d.side_delta_tilde),
                "nonpositive": d.nonpositive,
                "r_single": ratio(&a.structure.r_single[i]),
            }),
        );
    }
    Value::Object(m)
}

fn structure_entry(a: &Analysis) -> Value {
    let s = &a.structure;
    let gamma: Vec<Vec<&str>> = s.gamma.iter().map(|p| p.iter().map(|&c| a.tree.id(c)).collect()).collect();
    let v_bar: Map<String, Value> = s.v_bar.iter().map(|(&w, set)| (a.tree.id(w).to_string(), cells(a, set))).collect();
    let teeth: Vec<String> = s.teeth.iter().map(|&i| pair_key(a, i)).collect();
    json!({
        "z": cells(a, &s.z),
        "gamma": gamma,
        "w": cells(a, &s.w),
        "v_bar": v_bar,
        "omega": cells(a, &s.omega),
        "is_brush": s.is_brush,
        "skeleton": cells(a, &s.skeleton),
        "initial": cells(a, &s.initial),
        "teeth": teeth,
    })
}

pub fn decomposition_entry(a: &Analysis, d: &CombDecomposition) -> Value {
    let classes: Vec<Value> = d
        .classes
        .iter()
        .map(|c| {
            json!({
                "top": a.tree.id(c.u),
                "greatest": pair_key(a, c.greatest()),
                "least": pair_key(a, c.least()),
                "pairs": c.pairs.iter().map(|&i| pair_key(a, i)).collect::<Vec<_>>(),
                "c_dot": int(&c.c_dot),
                "y": cells(a, &c.y),
                "teeth": c.teeth,
            })
        })
        .collect();
    let stats = d.stats.as_ref().map(|st| {
        let x_c: Map<String, Value> =
            st.x_c.iter().map(|(ci, x)| (a.tree.id(d.classes[*ci].u).to_string(), int(x))).collect();
        json!({
            "b": st.b, "leaves": st.leaves, "o1": st.o1, "o2": st.o2, "o_gt2": st.o_gt2,
            "teeth_excess": st.teeth_excess, "x0": int(&st.x0), "x_c": x_c, "h": st.h,
        })
    });
    let quotient = d.quotient.as_ref().map(|q| {
        let edges: Vec<[&str; 2]> = q
            .adjacency
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().filter(move |&&y| x < y).map(move |&y| (x, y)))
            .map(|(x, y)| [a.tree.id(d.classes[x].u), a.tree.id(d.classes[y].u)])
            .collect();
        json!({ "root": a.tree.id(d.classes[q.root].u), "edges": edges })
    });
    json!({
        "z": a.tree.id(d.z),
        "classes": classes,
        "u0": d.u0.map(|u| a.tree.id(u)),
        "quotient": quotient,
        "statistics": stats,
    })
}

fn classification_entry(a: &Analysis) -> Value {
    let canonical = recognize_canonical(a).map(|c| c.to_string());
    let rational = if is_rational_tree(a) {
        match rational_structure_report(a) {
            Ok(r) => {
                let shape = match &r.shape {
                    RationalShape::Canonical(c) => json!({ "canonical": c.to_string() }),
                    RationalShape::Chain(ch) => json!({
                        "chain": ch.cells.iter().map(|&c| a.tree.id(c)).collect::<Vec<_>>(),
                        "tail_case": ch.tail.as_ref().map(|t| t.to_string()),
                        "tail_teeth": ch.tail_teeth,
                    }),
                    RationalShape::Unrecognized => json!("unrecognized"),
                };
                let failed: Vec<&str> = r.failures().map(|o| o.id.as_str()).collect();
                json!({ "shape": shape, "failed_clauses": failed })
            }
            Err(e) => json!({ "error": e.to_string() }),
        }
    } else {
        Value::Null
    };
    json!({ "canonical": canonical, "rational": rational })
}

pub fn audit_entry(r: &AuditReport) -> Value {
    let outcomes: Vec<Value> =
        r.outcomes.iter().map(|o| json!({ "id": o.id, "status": o.status, "witnesses": o.witnesses })).collect();
    json!({
        "passed": r.count(Status::Pass),
        "failed": r.count(Status::Fail),
        "skipped": r.count(Status::Skipped),
        "outcomes": outcomes,
    })
}

/// The whole report as one JSON value.
pub fn report_json(a: &Analysis, audit: Option<&AuditReport>) -> Value {
    let tree = TreeDocument::from_tree(&a.tree).map_or(Value::Null, |d| serde_json::to_value(d).unwrap_or(Value::Null));
    let vertices: Map<String, Value> =
        a.ledger.n_set.iter().map(|&c| (a.tree.id(c).to_string(), vertex_entry(a, c))).collect();
    let decompositions: Vec<Value> = a.decompositions.iter().map(|d| decomposition_entry(a, d)).collect();
    json!({
        "tree": tree,
        "vertices": vertices,
        "global": global_entry(a),
        "characteristic": table_entry(a),
        "structure": structure_entry(a),
        "decompositions": decompositions,
        "classification": classification_entry(a),
        "audit": audit.map(audit_entry),
    })
}

fn join(a: &Analysis, set: &BTreeSet<CellRef>) -> String {
    let mut ids: Vec<&str> = set.iter().map(|&c| a.tree.id(c)).collect();
    ids.sort_unstable();
    format!("{{{}}}", ids.join(", "))
}

/// The comb decompositions alone, as text.
pub fn combs_text(a: &Analysis) -> String {
    let mut out = String::new();
    for d in &a.decompositions {
        let _ = writeln!(out, "z = {}: {} comb(s)", a.tree.id(d.z), d.classes.len());
        for c in &d.classes {
            let _ = writeln!(
                out,
                "  comb at {}: {} pair(s), greatest {}, least {}, c_dot = {}, Y = {}",
                a.tree.id(c.u),
                c.pairs.len(),
                pair_key(a, c.greatest()),
                pair_key(a, c.least()),
                c.c_dot,
                join(a, &c.y)
            );
        }
        if let Some(st) = &d.stats {
            let _ = writeln!(
                out,
                "  statistics: B = {}, L = {}, O2 = {}, T = {}, x0 = {}, H = {}",
                st.b, st.leaves, st.o2, st.teeth_excess, st.x0, st.h
            );
        }
    }
    out
}

/// A readable summary of the report.
pub fn report_text(a: &Analysis, audit: Option<&AuditReport>) -> String {
    let (l, s) = (&a.ledger, &a.structure);
    let mut out = String::new();
    let _ = writeln!(out, "root: {}", a.tree.id(a.tree.root()));
    let _ = writeln!(out, "delta_tilde(N) = {}", l.delta_tilde_total);
    let _ = writeln!(out, "M(T) = {}", a.multiplicities.m_of_t);
    let _ = writeln!(out, "degree gcd = {}", l.degree_gcd);
    let _ = writeln!(out, "xi = {}, Nd* = {}", l.xi_total, join(a, &l.nd_star));
    let _ = writeln!(out, "vertices:");
    for &c in &l.n_set {
        let vd = l.v(c);
        let _ = writeln!(
            out,
            "  {}: N = {}, a = {}, epsilon = {}, delta_tilde = {}, type = {:?}",
            a.tree.id(c),
            vd.n,
            vd.a,
            vd.epsilon,
            vd.delta_tilde,
            vd.node_type
        );
    }
    let _ = writeln!(out, "pairs:");
    for i in 0..a.table.poset.len() {
        let d = a.table.at(i);
        let _ = writeln!(out, "  {}: c = {}, M = {}, eta = {}", pair_key(a, i), d.c, d.m, d.eta);
    }
    let _ = writeln!(out, "omega = {}, skeleton = {}, brush = {}", join(a, &s.omega), join(a, &s.skeleton), s.is_brush);
    out.push_str(&combs_text(a));
    if let Some(c) = recognize_canonical(a) {
        let _ = writeln!(out, "canonical: {c}");
    }
    if let Some(r) = audit {
        let _ = writeln!(
            out,
            "audit: {} passed, {} failed, {} skipped",
            r.count(Status::Pass),
            r.count(Status::Fail),
            r.count(Status::Skipped)
        );
        for o in r.failures() {
            let _ = writeln!(out, "  FAIL {}: {}", o.id, o.witnesses.join("; "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze;
    use crate::audit::audit;
    use crate::io::fixtures::load;

    #[test]
    fn t_d_json_values() {
        let a = analyze(load("t_d")).unwrap();
        let v = report_json(&a, None);
        assert_eq!(v["global"]["delta_tilde"], json!(-4));
        assert_eq!(v["characteristic"]["(v0, {v0, w})"]["c"], json!("3/2"));
        assert_eq!(v["characteristic"]["(w, {v0, w})"]["c"], json!("6"));
        assert_eq!(v["structure"]["omega"], json!(["v0"]));
    }

    #[test]
    fn output_is_stable() {
        let a = analyze(load("t_c_1_2_3")).unwrap();
        let r = audit(&a);
        let first = serde_json::to_string(&report_json(&a, Some(&r))).unwrap();
        let again = analyze(load("t_c_1_2_3")).unwrap();
        assert_eq!(first, serde_json::to_string(&report_json(&again, Some(&audit(&again)))).unwrap());
    }

    #[test]
    fn big_integers_become_strings() {
        let big = BigInt::from(i64::MAX) * 4;
        assert_eq!(int(&big), json!(big.to_string()));
        assert_eq!(int(&BigInt::from(-3)), json!(-3));
    }

    #[test]
    fn text_names_the_family() {
        let a = analyze(load("t_b_2_3")).unwrap();
        assert!(report_text(&a, None).contains("canonical: T_B(2,3)"));
    }
}
