//! Decorated rooted trees: construction, primitive queries and the axiom check.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Index of a cell inside a [`Tree`]. Cells are stored sorted by id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellRef(pub usize);

/// Index of an edge inside a [`Tree`]. Edges are stored sorted by their end ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRef(pub usize);

/// Decoration carried by an arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArrowMark {
    Zero,
    One,
}

impl ArrowMark {
    pub fn from_digit(d: i64) -> Option<Self> {
        match d {
            0 => Some(ArrowMark::Zero),
            1 => Some(ArrowMark::One),
            _ => None,
        }
    }

    pub fn digit(self) -> u8 {
        match self {
            ArrowMark::Zero => 0,
            ArrowMark::One => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellKind {
    Vertex,
    Arrow(ArrowMark),
}

/// Kind as declared by the caller; it is cross-checked against the valency.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeclaredKind {
    Vertex,
    Arrow,
}

impl fmt::Display for DeclaredKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeclaredKind::Vertex => f.write_str("vertex"),
            DeclaredKind::Arrow => f.write_str("arrow"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSpec {
    pub id: String,
    pub kind: DeclaredKind,
    pub decoration: Option<ArrowMark>,
}

impl CellSpec {
    pub fn vertex(id: impl Into<String>) -> Self {
        CellSpec { id: id.into(), kind: DeclaredKind::Vertex, decoration: None }
    }

    pub fn arrow(id: impl Into<String>, mark: ArrowMark) -> Self {
        CellSpec { id: id.into(), kind: DeclaredKind::Arrow, decoration: Some(mark) }
    }
}

/// An edge as supplied by the caller: `q[i]` decorates the edge near `ends[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub ends: [String; 2],
    pub q: [BigInt; 2],
}

impl EdgeSpec {
    pub fn new(a: impl Into<String>, b: impl Into<String>, qa: impl Into<BigInt>, qb: impl Into<BigInt>) -> Self {
        EdgeSpec { ends: [a.into(), b.into()], q: [qa.into(), qb.into()] }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree has no cells")]
    Empty,
    #[error("duplicate cell id `{0}`")]
    DuplicateId(String),
    #[error("edge refers to unknown cell `{0}`")]
    UnknownCell(String),
    #[error("root `{0}` is not a cell of the tree")]
    UnknownRoot(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("disconnected: cell `{0}` is not reachable from the root")]
    Disconnected(String),
    #[error("root `{0}` must be a vertex")]
    RootIsArrow(String),
    #[error("cell `{id}` declared {declared} but its valency makes it a {computed}")]
    KindMismatch { id: String, declared: DeclaredKind, computed: DeclaredKind },
    #[error("arrow `{0}` has no (0)/(1) decoration")]
    MissingDecoration(String),
    #[error("vertex `{0}` carries an arrow decoration")]
    UnexpectedDecoration(String),
    #[error("cell `{cell}` is not an end of edge {edge}")]
    NotAnEnd { cell: String, edge: String },
    #[error("edge {0} has an arrow end; its determinant is undefined")]
    ArrowEnd(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub ends: [CellRef; 2],
    pub q: [BigInt; 2],
}

impl Edge {
    pub fn side(&self, c: CellRef) -> Option<usize> {
        if self.ends[0] == c {
            Some(0)
        } else if self.ends[1] == c {
            Some(1)
        } else {
            None
        }
    }

    pub fn other(&self, c: CellRef) -> CellRef {
        if self.ends[0] == c {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

/// An immutable decorated rooted tree.
#[derive(Clone, Debug)]
pub struct Tree {
    ids: Vec<String>,
    kinds: Vec<CellKind>,
    edges: Vec<Edge>,
    incident: Vec<Vec<EdgeRef>>,
    root: CellRef,
    parent: Vec<Option<EdgeRef>>,
    depth: Vec<usize>,
    bfs: Vec<CellRef>,
    index: BTreeMap<String, CellRef>,
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.kinds == other.kinds && self.edges == other.edges && self.root == other.root
    }
}

impl Eq for Tree {}

/// Builds a tree, recomputing the vertex/arrow split from valencies.
pub fn build_tree(cells: &[CellSpec], edges: &[EdgeSpec], root: &str) -> Result<Tree, TreeError> {
    if cells.is_empty() {
        return Err(TreeError::Empty);
    }
    let mut sorted: Vec<&CellSpec> = cells.iter().collect();
    sorted.sort_by(|a, b| a.id.cmp(&b.id));
    for w in sorted.windows(2) {
        if w[0].id == w[1].id {
            return Err(TreeError::DuplicateId(w[0].id.clone()));
        }
    }
    let index: BTreeMap<String, CellRef> = sorted.iter().enumerate().map(|(i, c)| (c.id.clone(), CellRef(i))).collect();
    let root_ref = *index.get(root).ok_or_else(|| TreeError::UnknownRoot(root.to_string()))?;

    let mut raw: Vec<Edge> = Vec::with_capacity(edges.len());
    let mut seen = BTreeSet::new();
    for e in edges {
        let a = *index.get(&e.ends[0]).ok_or_else(|| TreeError::UnknownCell(e.ends[0].clone()))?;
        let b = *index.get(&e.ends[1]).ok_or_else(|| TreeError::UnknownCell(e.ends[1].clone()))?;
        if a == b {
            return Err(TreeError::NotATree(format!("loop at `{}`", e.ends[0])));
        }
        let key = (a.min(b), a.max(b));
        if !seen.insert(key) {
            return Err(TreeError::NotATree(format!("duplicate edge {{{}, {}}}", e.ends[0], e.ends[1])));
        }
        let (ends, q) =
            if a < b { ([a, b], [e.q[0].clone(), e.q[1].clone()]) } else { ([b, a], [e.q[1].clone(), e.q[0].clone()]) };
        raw.push(Edge { ends, q });
    }
    raw.sort_by(|x, y| x.ends.cmp(&y.ends));

    let n = sorted.len();
    let mut incident = vec![Vec::new(); n];
    for (i, e) in raw.iter().enumerate() {
        incident[e.ends[0].0].push(EdgeRef(i));
        incident[e.ends[1].0].push(EdgeRef(i));
    }

    // Breadth-first search from the root detects cycles and unreachable cells.
    let mut parent: Vec<Option<EdgeRef>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut bfs = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root_ref]);
    depth[root_ref.0] = 0;
    while let Some(c) = queue.pop_front() {
        bfs.push(c);
        for &er in &incident[c.0] {
            if parent[c.0] == Some(er) {
                continue;
            }
            let o = raw[er.0].other(c);
            if depth[o.0] != usize::MAX {
                return Err(TreeError::NotATree(format!("cycle through `{}`", sorted[o.0].id)));
            }
            depth[o.0] = depth[c.0] + 1;
            parent[o.0] = Some(er);
            queue.push_back(o);
        }
    }
    if let Some(i) = depth.iter().position(|&d| d == usize::MAX) {
        return Err(TreeError::Disconnected(sorted[i].id.clone()));
    }
    if raw.len() + 1 != n {
        return Err(TreeError::NotATree(format!("{} cells but {} edges", n, raw.len())));
    }

    let mut kinds = Vec::with_capacity(n);
    for (i, spec) in sorted.iter().enumerate() {
        let is_arrow = CellRef(i) != root_ref && incident[i].len() == 1;
        let computed = if is_arrow { DeclaredKind::Arrow } else { DeclaredKind::Vertex };
        if CellRef(i) == root_ref && spec.kind == DeclaredKind::Arrow {
            return Err(TreeError::RootIsArrow(spec.id.clone()));
        }
        if spec.kind != computed {
            return Err(TreeError::KindMismatch { id: spec.id.clone(), declared: spec.kind, computed });
        }
        kinds.push(match (computed, spec.decoration) {
            (DeclaredKind::Arrow, Some(m)) => CellKind::Arrow(m),
            (DeclaredKind::Arrow, None) => return Err(TreeError::MissingDecoration(spec.id.clone())),
            (DeclaredKind::Vertex, None) => CellKind::Vertex,
            (DeclaredKind::Vertex, Some(_)) => return Err(TreeError::UnexpectedDecoration(spec.id.clone())),
        });
    }

    Ok(Tree {
        ids: sorted.iter().map(|c| c.id.clone()).collect(),
        kinds,
        edges: raw,
        incident,
        root: root_ref,
        parent,
        depth,
        bfs,
        index,
    })
}

impl Tree {
    pub fn cell_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn cells(&self) -> impl Iterator<Item = CellRef> + '_ {
        (0..self.ids.len()).map(CellRef)
    }

    pub fn edge_refs(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        (0..self.edges.len()).map(EdgeRef)
    }

    /// Cells in breadth-first order from the root.
    pub fn bfs_order(&self) -> &[CellRef] {
        &self.bfs
    }

    pub fn root(&self) -> CellRef {
        self.root
    }

    pub fn id(&self, c: CellRef) -> &str {
        &self.ids[c.0]
    }

    pub fn find(&self, id: &str) -> Option<CellRef> {
        self.index.get(id).copied()
    }

    pub fn kind(&self, c: CellRef) -> CellKind {
        self.kinds[c.0]
    }

    pub fn is_vertex(&self, c: CellRef) -> bool {
        self.kinds[c.0] == CellKind::Vertex
    }

    pub fn is_arrow(&self, c: CellRef) -> bool {
        !self.is_vertex(c)
    }

    pub fn is_one_arrow(&self, c: CellRef) -> bool {
        self.kinds[c.0] == CellKind::Arrow(ArrowMark::One)
    }

    pub fn is_zero_arrow(&self, c: CellRef) -> bool {
        self.kinds[c.0] == CellKind::Arrow(ArrowMark::Zero)
    }

    pub fn vertices(&self) -> impl Iterator<Item = CellRef> + '_ {
        self.cells().filter(move |&c| self.is_vertex(c))
    }

    pub fn one_arrows(&self) -> impl Iterator<Item = CellRef> + '_ {
        self.cells().filter(move |&c| self.is_one_arrow(c))
    }

    pub fn zero_arrows(&self) -> impl Iterator<Item = CellRef> + '_ {
        self.cells().filter(move |&c| self.is_zero_arrow(c))
    }

    pub fn edge(&self, e: EdgeRef) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_label(&self, e: EdgeRef) -> String {
        let ed = &self.edges[e.0];
        format!("{{{}, {}}}", self.id(ed.ends[0]), self.id(ed.ends[1]))
    }

    pub fn incident(&self, c: CellRef) -> &[EdgeRef] {
        &self.incident[c.0]
    }

    pub fn valency(&self, c: CellRef) -> usize {
        self.incident[c.0].len()
    }

    pub fn neighbors(&self, c: CellRef) -> impl Iterator<Item = CellRef> + '_ {
        self.incident[c.0].iter().map(move |&e| self.edges[e.0].other(c))
    }

    pub fn other_end(&self, e: EdgeRef, c: CellRef) -> CellRef {
        self.edges[e.0].other(c)
    }

    pub fn edge_between(&self, x: CellRef, y: CellRef) -> Option<EdgeRef> {
        self.incident[x.0].iter().copied().find(|&e| self.edges[e.0].other(x) == y)
    }

    /// q(e, x). Panics if `x` is not an end of `e`; use [`Tree::try_q`] otherwise.
    pub fn q(&self, e: EdgeRef, x: CellRef) -> &BigInt {
        self.try_q(e, x).expect("cell is not an end of the edge")
    }

    pub fn try_q(&self, e: EdgeRef, x: CellRef) -> Result<&BigInt, TreeError> {
        let ed = &self.edges[e.0];
        match ed.side(x) {
            Some(s) => Ok(&ed.q[s]),
            None => Err(TreeError::NotAnEnd { cell: self.id(x).to_string(), edge: self.edge_label(e) }),
        }
    }

    /// Q(e, x): product of the decorations near `x` of the other edges at `x`.
    pub fn big_q(&self, e: EdgeRef, x: CellRef) -> Result<BigInt, TreeError> {
        self.try_q(e, x)?;
        Ok(self.incident[x.0].iter().filter(|&&f| f != e).map(|&f| self.q(f, x).clone()).product())
    }

    /// det(e) = q(e,x)q(e,y) - Q(e,x)Q(e,y) for an edge joining two vertices.
    pub fn det(&self, e: EdgeRef) -> Result<BigInt, TreeError> {
        let [x, y] = self.edges[e.0].ends;
        if self.is_arrow(x) || self.is_arrow(y) {
            return Err(TreeError::ArrowEnd(self.edge_label(e)));
        }
        Ok(self.q(e, x) * self.q(e, y) - self.big_q(e, x)? * self.big_q(e, y)?)
    }

    pub fn parent_edge(&self, c: CellRef) -> Option<EdgeRef> {
        self.parent[c.0]
    }

    pub fn parent(&self, c: CellRef) -> Option<CellRef> {
        self.parent[c.0].map(|e| self.edges[e.0].other(c))
    }

    pub fn depth(&self, c: CellRef) -> usize {
        self.depth[c.0]
    }

    /// Edges from `c` to cells above it.
    pub fn child_edges(&self, c: CellRef) -> impl Iterator<Item = EdgeRef> + '_ {
        let up = self.parent[c.0];
        self.incident[c.0].iter().copied().filter(move |&e| Some(e) != up)
    }

    pub fn children(&self, c: CellRef) -> impl Iterator<Item = CellRef> + '_ {
        self.child_edges(c).map(move |e| self.edges[e.0].other(c))
    }

    /// x < y in the tree order: x lies on the path from the root to y and x != y.
    pub fn less_than(&self, x: CellRef, y: CellRef) -> bool {
        if self.depth[x.0] >= self.depth[y.0] {
            return false;
        }
        let mut c = y;
        while self.depth[c.0] > self.depth[x.0] {
            c = self.parent(c).expect("non-root cell has a parent");
        }
        c == x
    }

    /// The unique path from `x` to `y`, both ends included.
    pub fn path(&self, x: CellRef, y: CellRef) -> Vec<CellRef> {
        let (mut a, mut b) = (x, y);
        let mut front = vec![];
        let mut back = vec![];
        while self.depth[a.0] > self.depth[b.0] {
            front.push(a);
            a = self.parent(a).unwrap();
        }
        while self.depth[b.0] > self.depth[a.0] {
            back.push(b);
            b = self.parent(b).unwrap();
        }
        while a != b {
            front.push(a);
            back.push(b);
            a = self.parent(a).unwrap();
            b = self.parent(b).unwrap();
        }
        front.push(a);
        front.extend(back.into_iter().rev());
        front
    }

    pub fn path_edges(&self, path: &[CellRef]) -> Vec<EdgeRef> {
        path.windows(2).map(|w| self.edge_between(w[0], w[1]).expect("consecutive path cells are adjacent")).collect()
    }

    /// Edges not on the path but incident to one of its cells, paired with that cell.
    pub fn incident_edges_of_path(&self, path: &[CellRef]) -> Vec<(EdgeRef, CellRef)> {
        let on: BTreeSet<EdgeRef> = self.path_edges(path).into_iter().collect();
        let mut out = vec![];
        for &c in path {
            for &e in &self.incident[c.0] {
                if !on.contains(&e) {
                    out.push((e, c));
                }
            }
        }
        out
    }

    /// True if the cells of `set` induce a connected subgraph (the empty set counts as connected).
    pub fn connected(&self, set: &BTreeSet<CellRef>) -> bool {
        let Some(&start) = set.iter().next() else { return true };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for o in self.neighbors(c) {
                if set.contains(&o) && seen.insert(o) {
                    stack.push(o);
                }
            }
        }
        seen.len() == set.len()
    }

    /// Dead ends at `v`: edges joining `v` to a (0)-arrow.
    pub fn dead_ends(&self, v: CellRef) -> impl Iterator<Item = EdgeRef> + '_ {
        self.incident[v.0].iter().copied().filter(move |&e| self.is_zero_arrow(self.edges[e.0].other(v)))
    }

    pub fn dead_end(&self, v: CellRef) -> Option<EdgeRef> {
        self.dead_ends(v).next()
    }

    /// Returns a copy with one decoration replaced.
    pub fn with_decoration(&self, e: EdgeRef, near: CellRef, value: BigInt) -> Tree {
        let mut t = self.clone();
        let side = t.edges[e.0].side(near).expect("cell is not an end of the edge");
        t.edges[e.0].q[side] = value;
        t
    }

    pub fn cell_specs(&self) -> Vec<CellSpec> {
        self.cells()
            .map(|c| match self.kind(c) {
                CellKind::Vertex => CellSpec::vertex(self.id(c)),
                CellKind::Arrow(m) => CellSpec::arrow(self.id(c), m),
            })
            .collect()
    }

    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        self.edges
            .iter()
            .map(|e| EdgeSpec {
                ends: [self.id(e.ends[0]).to_string(), self.id(e.ends[1]).to_string()],
                q: e.q.clone(),
            })
            .collect()
    }
}

/// Which requirement a diagnostic refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// One of the six axioms, numbered 1 to 6.
    Axiom(u8),
    /// Some vertex has negative multiplicity.
    Generic,
    /// A (1)-arrow is not adjacent to a dicritical.
    Complete,
    /// A dicritical without dead end.
    DicriticalDeadEnd,
    /// A dead end decorated 1 at a non-dicritical.
    DeadEndOne,
    /// A non-root vertex of valency 2.
    ValencyTwo,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Axiom(n) => write!(f, "axiom {n}"),
            Rule::Generic => f.write_str("generic"),
            Rule::Complete => f.write_str("complete"),
            Rule::DicriticalDeadEnd => f.write_str("minimally complete (ii)"),
            Rule::DeadEndOne => f.write_str("minimally complete (iii)"),
            Rule::ValencyTwo => f.write_str("minimally complete (iv)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Rule,
    pub cells: Vec<CellRef>,
    pub edges: Vec<EdgeRef>,
    pub message: String,
}

impl Diagnostic {
    fn new(rule: Rule, cells: Vec<CellRef>, edges: Vec<EdgeRef>, message: String) -> Self {
        Diagnostic { rule, cells, edges, message }
    }
}

/// Checks the six axioms and returns every violation found.
pub fn validate_axioms(t: &Tree) -> Vec<Diagnostic> {
    let mut out = vec![];
    let one = BigInt::one();

    // (1) every vertex has a (1)-arrow above it
    let mut has_above = vec![false; t.cell_count()];
    for &c in t.bfs_order().iter().rev() {
        let mut any = false;
        for ch in t.children(c) {
            any |= t.is_one_arrow(ch) || has_above[ch.0];
        }
        has_above[c.0] = any;
    }
    for v in t.vertices() {
        if !has_above[v.0] {
            out.push(Diagnostic::new(
                Rule::Axiom(1),
                vec![v],
                vec![],
                format!("no (1)-arrow above vertex `{}`", t.id(v)),
            ));
        }
    }

    // (2) at most one dead end per vertex
    for v in t.vertices() {
        let ds: Vec<EdgeRef> = t.dead_ends(v).collect();
        if ds.len() > 1 {
            out.push(Diagnostic::new(
                Rule::Axiom(2),
                vec![v],
                ds,
                format!("vertex `{}` has more than one dead end", t.id(v)),
            ));
        }
    }

    // (3) decorations near the root
    for &e in t.incident(t.root()) {
        if t.q(e, t.root()) != &one {
            out.push(Diagnostic::new(
                Rule::Axiom(3),
                vec![t.root()],
                vec![e],
                format!("decoration near the root on edge {} is {}, not 1", t.edge_label(e), t.q(e, t.root())),
            ));
        }
    }

    // (4) decorations near arrows
    for a in t.cells().filter(|&c| t.is_arrow(c)) {
        for &e in t.incident(a) {
            if t.q(e, a) != &one {
                out.push(Diagnostic::new(
                    Rule::Axiom(4),
                    vec![a],
                    vec![e],
                    format!("decoration near arrow `{}` is {}, not 1", t.id(a), t.q(e, a)),
                ));
            }
        }
    }

    // (5) local conditions at each vertex
    for v in t.vertices() {
        let inc = t.incident(v);
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                let (a, b) = (t.q(inc[i], v), t.q(inc[j], v));
                if !a.gcd(b).is_one() {
                    out.push(Diagnostic::new(
                        Rule::Axiom(5),
                        vec![v],
                        vec![inc[i], inc[j]],
                        format!("decorations {a} and {b} near `{}` are not coprime", t.id(v)),
                    ));
                }
            }
        }
        let plus: Vec<EdgeRef> = t.child_edges(v).collect();
        for &e in &plus {
            if t.q(e, v) < &one {
                out.push(Diagnostic::new(
                    Rule::Axiom(5),
                    vec![v],
                    vec![e],
                    format!("decoration {} near `{}` on an upward edge is not positive", t.q(e, v), t.id(v)),
                ));
            }
        }
        let big: Vec<EdgeRef> = plus.iter().copied().filter(|&e| t.q(e, v) > &one).collect();
        if big.len() > 1 {
            out.push(Diagnostic::new(
                Rule::Axiom(5),
                vec![v],
                big,
                format!("more than one upward edge at `{}` has decoration > 1", t.id(v)),
            ));
        }
        if let Some(d) = t.dead_end(v) {
            let max = plus.iter().map(|&e| t.q(e, v)).max();
            if max.is_some_and(|m| m != t.q(d, v)) {
                out.push(Diagnostic::new(
                    Rule::Axiom(5),
                    vec![v],
                    vec![d],
                    format!("dead end at `{}` is not decorated by the maximum upward decoration", t.id(v)),
                ));
            }
        }
    }

    // (6) negative determinants
    for e in t.edge_refs() {
        if let Ok(d) = t.det(e) {
            if !d.is_negative() {
                out.push(Diagnostic::new(
                    Rule::Axiom(6),
                    t.edge(e).ends.to_vec(),
                    vec![e],
                    format!("edge {} has determinant {d} >= 0", t.edge_label(e)),
                ));
            }
        }
    }
    out
}

/// gcd helper used across modules; gcd(0, x) = |x|.
pub(crate) fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::fixtures::load;

    fn t_a_specs() -> (Vec<CellSpec>, Vec<EdgeSpec>) {
        (
            vec![
                CellSpec::vertex("v0"),
                CellSpec::vertex("u"),
                CellSpec::arrow("beta", ArrowMark::One),
                CellSpec::arrow("alpha", ArrowMark::Zero),
            ],
            vec![EdgeSpec::new("v0", "u", 1, 0), EdgeSpec::new("u", "beta", 1, 1), EdgeSpec::new("u", "alpha", 1, 1)],
        )
    }

    #[test]
    fn t_a_builds_and_validates() {
        let (cells, edges) = t_a_specs();
        let t = build_tree(&cells, &edges, "v0").unwrap();
        assert_eq!(t.vertices().count(), 2);
        assert_eq!(t.cells().filter(|&c| t.is_arrow(c)).count(), 2);
        assert!(validate_axioms(&t).is_empty());
    }

    #[test]
    fn structural_errors() {
        let (cells, mut edges) = t_a_specs();
        let without: Vec<EdgeSpec> = edges[1..].to_vec();
        assert!(matches!(build_tree(&cells, &without, "v0"), Err(TreeError::Disconnected(_))));
        edges.push(EdgeSpec::new("u", "v0", 1, 1));
        assert!(matches!(build_tree(&cells, &edges, "v0"), Err(TreeError::NotATree(_))));
        let (cells, edges) = t_a_specs();
        assert!(matches!(build_tree(&cells, &edges, "beta"), Err(TreeError::RootIsArrow(_))));
        let mut dup = cells.clone();
        dup.push(CellSpec::vertex("u"));
        assert!(matches!(build_tree(&dup, &edges, "v0"), Err(TreeError::DuplicateId(_))));
        let mut undecorated = cells.clone();
        undecorated[2].decoration = None;
        assert!(matches!(build_tree(&undecorated, &edges, "v0"), Err(TreeError::MissingDecoration(_))));
        let mut wrong = cells;
        wrong[1].kind = DeclaredKind::Arrow;
        assert!(matches!(build_tree(&wrong, &edges, "v0"), Err(TreeError::KindMismatch { .. })));
    }

    #[test]
    fn root_decoration_violation_is_axiom_three() {
        let t = load("t_a");
        let (v0, u) = (t.find("v0").unwrap(), t.find("u").unwrap());
        let e = t.edge_between(v0, u).unwrap();
        let bad = t.with_decoration(e, v0, BigInt::from(2));
        let rules: Vec<Rule> = validate_axioms(&bad).into_iter().map(|d| d.rule).collect();
        assert!(rules.contains(&Rule::Axiom(3)));
    }

    #[test]
    fn fixtures_satisfy_axioms() {
        for (name, _) in crate::io::fixtures::ALL {
            assert!(validate_axioms(&load(name)).is_empty(), "{name}");
        }
    }

    #[test]
    fn big_q_and_det() {
        let t = load("t_a");
        let (v0, u) = (t.find("v0").unwrap(), t.find("u").unwrap());
        let e = t.edge_between(v0, u).unwrap();
        assert_eq!(t.big_q(e, u).unwrap(), BigInt::from(1));
        assert_eq!(t.big_q(e, v0).unwrap(), BigInt::from(1));
        assert_eq!(t.det(e).unwrap(), BigInt::from(-1));
        let beta = t.find("beta").unwrap();
        let arrow_edge = t.edge_between(u, beta).unwrap();
        assert!(t.det(arrow_edge).is_err());
        assert!(t.big_q(arrow_edge, v0).is_err());

        let t = load("t_b_1_2");
        let (v0, u1) = (t.find("v0").unwrap(), t.find("u1").unwrap());
        let e = t.edge_between(v0, u1).unwrap();
        assert_eq!(t.big_q(e, u1).unwrap(), BigInt::from(1));
        assert_eq!(t.det(e).unwrap(), BigInt::from(-3));
    }

    #[test]
    fn symmetric_degenerate_determinant_is_zero() {
        let t = build_tree(
            &[
                CellSpec::vertex("x"),
                CellSpec::vertex("y"),
                CellSpec::arrow("a", ArrowMark::One),
                CellSpec::arrow("b", ArrowMark::One),
            ],
            &[EdgeSpec::new("x", "y", 1, 1), EdgeSpec::new("x", "a", 1, 1), EdgeSpec::new("y", "b", 1, 1)],
            "x",
        )
        .unwrap();
        let e = t.edge_between(t.find("x").unwrap(), t.find("y").unwrap()).unwrap();
        assert_eq!(t.det(e).unwrap(), BigInt::zero());
        assert!(validate_axioms(&t).iter().any(|d| d.rule == Rule::Axiom(6)));
    }

    #[test]
    fn paths_and_order() {
        let t = load("t_d");
        let ids = |p: Vec<CellRef>| p.into_iter().map(|c| t.id(c).to_string()).collect::<Vec<_>>();
        let (v0, beta) = (t.find("v0").unwrap(), t.find("beta1").unwrap());
        assert_eq!(ids(t.path(v0, beta)), ["v0", "w", "u", "beta1"]);
        let t = load("t_a");
        assert!(t.less_than(t.find("v0").unwrap(), t.find("u").unwrap()));
        let t = load("t_b_1_1");
        let (u1, u2) = (t.find("u1").unwrap(), t.find("u2").unwrap());
        assert!(!t.less_than(u1, u2) && !t.less_than(u2, u1));
        assert!(t.connected(&BTreeSet::from([u1, t.root(), u2])));
        assert!(!t.connected(&BTreeSet::from([u1, u2])));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn fixture_cells() -> impl Strategy<Value = (usize, usize, usize)> {
            (0..crate::io::fixtures::ALL.len(), 0usize..32, 0usize..32)
        }

        proptest! {
            #[test]
            fn path_reversal_and_order((f, i, j) in fixture_cells()) {
                let t = load(crate::io::fixtures::ALL[f].0);
                let n = t.cell_count();
                let (x, y) = (CellRef(i % n), CellRef(j % n));
                let mut back = t.path(y, x);
                back.reverse();
                prop_assert_eq!(t.path(x, y), back);
                prop_assert_eq!(t.path(x, x), vec![x]);
                let relations = [t.less_than(x, y), t.less_than(y, x), x == y];
                prop_assert!(relations.iter().filter(|&&r| r).count() <= 1);
                let on_root_path = t.path(t.root(), y).contains(&x);
                prop_assert_eq!(t.less_than(x, y), on_root_path && x != y);
            }

            #[test]
            fn det_is_symmetric((f, i, _j) in fixture_cells()) {
                let t = load(crate::io::fixtures::ALL[f].0);
                let e = EdgeRef(i % t.edge_count());
                let [x, y] = t.edge(e).ends;
                if let Ok(d) = t.det(e) {
                    let flipped = t.q(e, y) * t.q(e, x) - t.big_q(e, y).unwrap() * t.big_q(e, x).unwrap();
                    prop_assert_eq!(d, flipped);
                }
            }
        }
    }
}
