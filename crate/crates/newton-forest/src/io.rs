//! The `.ntree` document format and Graphviz export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::multiplicity::multiplicities;
use crate::tree::{build_tree, ArrowMark, CellKind, CellRef, CellSpec, DeclaredKind, EdgeSpec, Tree, TreeError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindField {
    Vertex,
    Arrow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellEntry {
    pub id: String,
    pub kind: KindField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoration: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub ends: [String; 2],
    pub q: [i64; 2],
}

/// On-disk shape of a tree; `q[i]` decorates the edge near `ends[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    pub root: String,
    pub cells: Vec<CellEntry>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("cell `{id}`: arrow decoration must be 0 or 1, found {value}")]
    BadDecoration { id: String, value: i64 },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Error)]
pub enum SerializeError {
    #[error("decoration {0} does not fit in a signed 64-bit integer")]
    Overflow(BigInt),
}

impl TreeDocument {
    pub fn from_tree(t: &Tree) -> Result<Self, SerializeError> {
        let cells = t
            .cells()
            .map(|c| match t.kind(c) {
                CellKind::Vertex => CellEntry { id: t.id(c).to_string(), kind: KindField::Vertex, decoration: None },
                CellKind::Arrow(m) => {
                    CellEntry { id: t.id(c).to_string(), kind: KindField::Arrow, decoration: Some(m.digit() as i64) }
                }
            })
            .collect();
        let mut edges = vec![];
        for e in t.edge_refs() {
            let ed = t.edge(e);
            let q = [to_i64(&ed.q[0])?, to_i64(&ed.q[1])?];
            edges.push(EdgeEntry { ends: [t.id(ed.ends[0]).to_string(), t.id(ed.ends[1]).to_string()], q });
        }
        Ok(TreeDocument { root: t.id(t.root()).to_string(), cells, edges })
    }

    pub fn into_tree(self) -> Result<Tree, ParseError> {
        let mut cells = Vec::with_capacity(self.cells.len());
        for c in self.cells {
            let kind = match c.kind {
                KindField::Vertex => DeclaredKind::Vertex,
                KindField::Arrow => DeclaredKind::Arrow,
            };
            let decoration = match c.decoration {
                None => None,
                Some(v) => Some(
                    ArrowMark::from_digit(v).ok_or_else(|| ParseError::BadDecoration { id: c.id.clone(), value: v })?,
                ),
            };
            cells.push(CellSpec { id: c.id, kind, decoration });
        }
        let edges: Vec<EdgeSpec> = self
            .edges
            .into_iter()
            .map(|e| EdgeSpec { ends: e.ends, q: [BigInt::from(e.q[0]), BigInt::from(e.q[1])] })
            .collect();
        Ok(build_tree(&cells, &edges, &self.root)?)
    }
}

fn to_i64(x: &BigInt) -> Result<i64, SerializeError> {
    x.to_i64().ok_or_else(|| SerializeError::Overflow(x.clone()))
}

pub fn parse(text: &str) -> Result<Tree, ParseError> {
    let doc: TreeDocument = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.into_tree()
}

/// Canonical text: cells sorted by id, edges by their sorted end pair.
pub fn serialize(t: &Tree) -> Result<String, SerializeError> {
    let doc = TreeDocument::from_tree(t)?;
    let mut s = serde_json::to_string_pretty(&doc).expect("document serialization is infallible");
    s.push('\n');
    Ok(s)
}

/// Extra per-vertex labels drawn by [`export_dot`].
#[derive(Clone, Debug, Default)]
pub struct DotLabels {
    pub multiplicity: BTreeMap<CellRef, BigInt>,
    pub delta_tilde: BTreeMap<CellRef, BigInt>,
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

/// Dicriticals are filled discs, other vertices circles, arrows points with an arrowhead edge.
pub fn export_dot(t: &Tree, labels: Option<&DotLabels>) -> String {
    let mult = multiplicities(t);
    let mut out = String::from("graph newton_tree {\n  node [fontsize=10];\n");
    for c in t.cells() {
        let id = quote(t.id(c));
        match t.kind(c) {
            CellKind::Vertex => {
                let filled = mult.n(c).is_some_and(|n| n == &BigInt::from(0));
                let mut label = escape(t.id(c));
                if let Some(l) = labels {
                    if let Some(n) = l.multiplicity.get(&c) {
                        let _ = write!(label, "\\nN={n}");
                    }
                    if let Some(d) = l.delta_tilde.get(&c) {
                        let _ = write!(label, "\\nD~={d}");
                    }
                }
                let style = if filled {
                    "shape=circle, style=filled, fillcolor=black, fontcolor=white"
                } else {
                    "shape=circle"
                };
                let _ = writeln!(out, "  {id} [{style}, label=\"{label}\"];");
            }
            CellKind::Arrow(m) => {
                let _ = writeln!(out, "  {id} [shape=point, xlabel=\"({})\"];", m.digit());
            }
        }
    }
    for e in t.edge_refs() {
        let ed = t.edge(e);
        let [a, b] = ed.ends;
        // Draw arrows at the arrow end so the picture reads like the usual diagrams.
        let (x, y, qx, qy) = if t.is_arrow(a) { (b, a, &ed.q[1], &ed.q[0]) } else { (a, b, &ed.q[0], &ed.q[1]) };
        let head = if t.is_arrow(y) { ", dir=forward, arrowhead=normal" } else { "" };
        let _ =
            writeln!(out, "  {} -- {} [taillabel=\"{qx}\", headlabel=\"{qy}\"{head}];", quote(t.id(x)), quote(t.id(y)));
    }
    out.push_str("}\n");
    out
}

/// Built-in fixtures, keyed by file stem.
pub mod fixtures {
    use super::parse;
    use crate::tree::Tree;

    pub const T_A: &str = include_str!("../fixtures/t_a.ntree");
    pub const T_B_1_1: &str = include_str!("../fixtures/t_b_1_1.ntree");
    pub const T_B_1_2: &str = include_str!("../fixtures/t_b_1_2.ntree");
    pub const T_B_2_3: &str = include_str!("../fixtures/t_b_2_3.ntree");
    pub const T_C_1_1_1: &str = include_str!("../fixtures/t_c_1_1_1.ntree");
    pub const T_C_1_1_2: &str = include_str!("../fixtures/t_c_1_1_2.ntree");
    pub const T_C_1_2_3: &str = include_str!("../fixtures/t_c_1_2_3.ntree");
    pub const T_D: &str = include_str!("../fixtures/t_d.ntree");

    pub const ALL: [(&str, &str); 8] = [
        ("t_a", T_A),
        ("t_b_1_1", T_B_1_1),
        ("t_b_1_2", T_B_1_2),
        ("t_b_2_3", T_B_2_3),
        ("t_c_1_1_1", T_C_1_1_1),
        ("t_c_1_1_2", T_C_1_1_2),
        ("t_c_1_2_3", T_C_1_2_3),
        ("t_d", T_D),
    ];

    /// Parses a built-in fixture by name; panics on an unknown name or a broken fixture.
    pub fn load(name: &str) -> Tree {
        let text = ALL.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("no fixture named {name}")).1;
        parse(text).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_round_trip() {
        for (name, text) in fixtures::ALL {
            let t = parse(text).unwrap();
            let s = serialize(&t).unwrap();
            assert_eq!(s, text, "fixture {name} is not in canonical form");
            assert_eq!(parse(&s).unwrap(), t);
        }
    }

    #[test]
    fn fractional_decoration_is_a_syntax_error() {
        let bad = fixtures::T_A.replacen("\"q\": [\n        1,", "\"q\": [\n        1.5,", 1);
        assert_ne!(bad, fixtures::T_A);
        match parse(&bad) {
            Err(ParseError::Syntax { line, .. }) => assert!(line > 1),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn arrow_decoration_out_of_range() {
        let bad = fixtures::T_A.replacen("\"decoration\": 0", "\"decoration\": 2", 1);
        assert!(matches!(parse(&bad), Err(ParseError::BadDecoration { value: 2, .. })));
    }

    fn count(s: &str, pat: &str) -> usize {
        s.matches(pat).count()
    }

    #[test]
    fn dot_shapes_for_t_a() {
        let dot = export_dot(&fixtures::load("t_a"), None);
        assert_eq!(count(&dot, "style=filled"), 1);
        assert_eq!(count(&dot, "shape=circle"), 2);
        assert_eq!(count(&dot, "arrowhead=normal"), 2);
    }

    #[test]
    fn dot_shapes_for_t_c_1_1_1() {
        let dot = export_dot(&fixtures::load("t_c_1_1_1"), None);
        assert_eq!(count(&dot, "style=filled"), 3);
        assert_eq!(count(&dot, "xlabel=\"(1)\""), 3);
        assert_eq!(count(&dot, "xlabel=\"(0)\""), 3);
    }

    #[test]
    fn dot_is_deterministic_and_labels_report_values() {
        let t = fixtures::load("t_d");
        let mut labels = DotLabels::default();
        labels.multiplicity.insert(t.find("w").unwrap(), BigInt::from(6));
        labels.delta_tilde.insert(t.find("w").unwrap(), BigInt::from(1));
        let a = export_dot(&t, Some(&labels));
        assert_eq!(a, export_dot(&t, Some(&labels)));
        assert!(a.contains("w\\nN=6\\nD~=1"));
    }

    #[test]
    fn serialize_is_idempotent_on_t_d() {
        let t = fixtures::load("t_d");
        let once = serialize(&t).unwrap();
        assert_eq!(serialize(&parse(&once).unwrap()).unwrap(), once);
    }
}
