//! Edge-weighted planar trees labelled by little disks configurations and
//! their quotient under the three W-relations.

mod text;

use std::cmp::Ordering;

use thiserror::Error;

use crate::disks::{partial_compose, DiskConfig};
use crate::perm;
use crate::tol;

pub use text::{parse_tree, print_tree, MAX_DEPTH};

/// Slot indices from the root down to a vertex.
pub type Path = Vec<usize>;

#[derive(Debug, Clone, PartialEq)]
pub enum WTree {
    /// The tree with no vertices; its single input is labelled 1.
    Trivial,
    Node(Vertex),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub label: DiskConfig,
    pub slots: Vec<Slot>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Slot {
    /// External input edge with its 1-based label.
    Leaf(usize),
    Edge(Edge),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub length: f64,
    pub child: Vertex,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("expected {expected} trees, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("vertex label has arity {label} but {slots} slots")]
    LabelArity { label: usize, slots: usize },
    #[error("edge length {0} outside [0, 1]")]
    Length(f64),
    #[error("input labels {0:?} are not 1..j")]
    Inputs(Vec<usize>),
    #[error("mixed dimensions {0} and {1}")]
    Dimension(usize, usize),
    #[error("invalid vertex label: {0}")]
    Label(String),
    #[error("{0:?} is not a permutation of the inputs")]
    NotAPermutation(Vec<usize>),
}

/// `t1 + t2 - t1·t2`, with 1 absorbing exactly.
pub fn star(t1: f64, t2: f64) -> f64 {
    if t1 == 1.0 || t2 == 1.0 {
        1.0
    } else {
        t1 + t2 - t1 * t2
    }
}

impl Vertex {
    pub fn new(label: DiskConfig, slots: Vec<Slot>) -> Self {
        Vertex { label, slots }
    }

    pub fn leaf_count(&self) -> usize {
        self.slots
            .iter()
            .map(|s| match s {
                Slot::Leaf(_) => 1,
                Slot::Edge(e) => e.child.leaf_count(),
            })
            .sum()
    }

    pub fn vertex_count(&self) -> usize {
        1 + self
            .children()
            .map(|e| e.child.vertex_count())
            .sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().map(|e| e.child.depth()).max().unwrap_or(0)
    }

    pub fn children(&self) -> impl Iterator<Item = &Edge> {
        self.slots.iter().filter_map(|s| match s {
            Slot::Edge(e) => Some(e),
            Slot::Leaf(_) => None,
        })
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        for s in &self.slots {
            match s {
                Slot::Leaf(i) => out.push(*i),
                Slot::Edge(e) => e.child.collect_leaves(out),
            }
        }
    }

    fn map_leaves(&mut self, f: &impl Fn(usize) -> usize) {
        for s in &mut self.slots {
            match s {
                Slot::Leaf(i) => *i = f(*i),
                Slot::Edge(e) => e.child.map_leaves(f),
            }
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Vertex> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self.slots.get(i)? {
                Slot::Edge(e) => e.child.at(rest),
                Slot::Leaf(_) => None,
            },
        }
    }

    fn at_mut(&mut self, path: &[usize]) -> Option<&mut Vertex> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => match self.slots.get_mut(i)? {
                Slot::Edge(e) => e.child.at_mut(rest),
                Slot::Leaf(_) => None,
            },
        }
    }

    fn is_identity(&self) -> bool {
        self.slots.len() == 1 && self.label.is_identity()
    }

    fn check(&self, dim: usize) -> Result<(), TreeError> {
        if self.label.dim != dim {
            return Err(TreeError::Dimension(dim, self.label.dim));
        }
        if self.label.arity() != self.slots.len() {
            return Err(TreeError::LabelArity {
                label: self.label.arity(),
                slots: self.slots.len(),
            });
        }
        if let Err(v) = self.label.validate() {
            return Err(TreeError::Label(format!("{v:?}")));
        }
        for e in self.children() {
            if !(0.0..=1.0).contains(&e.length) {
                return Err(TreeError::Length(e.length));
            }
            e.child.check(dim)?;
        }
        Ok(())
    }
}

impl WTree {
    pub fn vertex(label: DiskConfig, slots: Vec<Slot>) -> Self {
        WTree::Node(Vertex::new(label, slots))
    }

    /// Single vertex with leaves `1..=k` in slot order.
    pub fn corolla(label: DiskConfig) -> Self {
        let slots = (1..=label.arity()).map(Slot::Leaf).collect();
        WTree::vertex(label, slots)
    }

    pub fn arity(&self) -> usize {
        match self {
            WTree::Trivial => 1,
            WTree::Node(v) => v.leaf_count(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            WTree::Trivial => 0,
            WTree::Node(v) => v.vertex_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            WTree::Trivial => 0,
            WTree::Node(v) => v.depth(),
        }
    }

    pub fn root(&self) -> Option<&Vertex> {
        match self {
            WTree::Trivial => None,
            WTree::Node(v) => Some(v),
        }
    }

    pub fn dim(&self) -> Option<usize> {
        self.root().map(|v| v.label.dim)
    }

    /// Input labels in planar order.
    pub fn leaves(&self) -> Vec<usize> {
        match self {
            WTree::Trivial => vec![1],
            WTree::Node(v) => {
                let mut out = Vec::new();
                v.collect_leaves(&mut out);
                out
            }
        }
    }

    pub fn at(&self, path: &[usize]) -> Option<&Vertex> {
        self.root()?.at(path)
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        if let WTree::Node(v) = self {
            v.check(v.label.dim)?;
        }
        let mut leaves = self.leaves();
        leaves.sort_unstable();
        if leaves.iter().enumerate().any(|(i, &l)| l != i + 1) {
            return Err(TreeError::Inputs(self.leaves()));
        }
        Ok(())
    }

    fn map_leaves(&mut self, f: impl Fn(usize) -> usize) {
        if let WTree::Node(v) = self {
            v.map_leaves(&f);
        }
    }

    /// Paths of every vertex, parents before children.
    pub fn vertex_paths(&self) -> Vec<Path> {
        fn walk(v: &Vertex, here: &mut Path, out: &mut Vec<Path>) {
            out.push(here.clone());
            for (i, s) in v.slots.iter().enumerate() {
                if let Slot::Edge(e) = s {
                    here.push(i);
                    walk(&e.child, here, out);
                    here.pop();
                }
            }
        }
        let mut out = Vec::new();
        if let WTree::Node(v) = self {
            walk(v, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Paths of the child vertex of every internal edge.
    pub fn edge_paths(&self) -> Vec<Path> {
        self.vertex_paths()
            .into_iter()
            .filter(|p| !p.is_empty())
            .collect()
    }

    pub fn edge_length(&self, path: &[usize]) -> Option<f64> {
        let (&last, parent) = path.split_last()?;
        match self.at(parent)?.slots.get(last)? {
            Slot::Edge(e) => Some(e.length),
            Slot::Leaf(_) => None,
        }
    }
}

/// Grafts `us[i]` onto the input labelled `i + 1` along an edge of length 1.
/// Inputs of `us[i]` are shifted past those of `us[..i]`.
pub fn compose(t: &WTree, us: &[WTree]) -> Result<WTree, TreeError> {
    if us.len() != t.arity() {
        return Err(TreeError::ArityMismatch {
            expected: t.arity(),
            found: us.len(),
        });
    }
    if t.leaves().iter().any(|&l| l == 0 || l > us.len()) {
        return Err(TreeError::Inputs(t.leaves()));
    }
    let mut offsets = Vec::with_capacity(us.len());
    let mut acc = 0;
    for u in us {
        offsets.push(acc);
        acc += u.arity();
    }
    fn graft(v: &mut Vertex, us: &[WTree], offsets: &[usize]) {
        for s in &mut v.slots {
            match s {
                Slot::Leaf(i) => {
                    let k = *i - 1;
                    *s = match &us[k] {
                        WTree::Trivial => Slot::Leaf(offsets[k] + 1),
                        WTree::Node(child) => {
                            let mut child = child.clone();
                            child.map_leaves(&|l| l + offsets[k]);
                            Slot::Edge(Edge { length: 1.0, child })
                        }
                    }
                }
                Slot::Edge(e) => graft(&mut e.child, us, offsets),
            }
        }
    }
    Ok(match t {
        WTree::Trivial => us[0].clone(),
        WTree::Node(v) => {
            let mut v = v.clone();
            graft(&mut v, us, &offsets);
            WTree::Node(v)
        }
    })
}

/// Relabels inputs so that input `i + 1` becomes `sigma[i] + 1`.
pub fn act_sigma(t: &WTree, sigma: &[usize]) -> Result<WTree, TreeError> {
    if sigma.len() != t.arity() || !perm::is_permutation(sigma) {
        return Err(TreeError::NotAPermutation(sigma.to_vec()));
    }
    let mut out = t.clone();
    out.map_leaves(|l| sigma[l - 1] + 1);
    Ok(out)
}

/// Removes every unary vertex labelled by the identity configuration,
/// merging its two edges with `star`. External edges have length 1.
pub fn reduce_a(t: &WTree) -> WTree {
    fn reduce(v: &Vertex) -> Vertex {
        let slots = v
            .slots
            .iter()
            .map(|s| match s {
                Slot::Leaf(i) => Slot::Leaf(*i),
                Slot::Edge(e) => {
                    let child = reduce(&e.child);
                    if child.is_identity() {
                        match child.slots.into_iter().next().expect("unary") {
                            Slot::Leaf(i) => Slot::Leaf(i),
                            Slot::Edge(below) => Slot::Edge(Edge {
                                length: star(e.length, below.length),
                                child: below.child,
                            }),
                        }
                    } else {
                        Slot::Edge(Edge {
                            length: e.length,
                            child,
                        })
                    }
                }
            })
            .collect();
        Vertex::new(v.label.clone(), slots)
    }
    match t {
        WTree::Trivial => WTree::Trivial,
        WTree::Node(v) => {
            let root = reduce(v);
            if root.is_identity() {
                match root.slots.into_iter().next().expect("unary") {
                    Slot::Leaf(_) => WTree::Trivial,
                    Slot::Edge(e) => WTree::Node(e.child),
                }
            } else {
                WTree::Node(root)
            }
        }
    }
}

fn merge_into(v: &mut Vertex, i: usize) {
    let Slot::Edge(e) = v.slots[i].clone() else {
        return;
    };
    v.label = partial_compose(&v.label, i, &e.child.label);
    v.slots.splice(i..=i, e.child.slots);
}

/// Contracts every internal edge of length 0 by operad composition of the
/// two end labels; the child's slots take the place of the edge.
pub fn contract_c(t: &WTree) -> WTree {
    fn contract(v: &Vertex) -> Vertex {
        let mut out = Vertex::new(
            v.label.clone(),
            v.slots
                .iter()
                .map(|s| match s {
                    Slot::Leaf(i) => Slot::Leaf(*i),
                    Slot::Edge(e) => Slot::Edge(Edge {
                        length: e.length,
                        child: contract(&e.child),
                    }),
                })
                .collect(),
        );
        let mut i = 0;
        while i < out.slots.len() {
            match &out.slots[i] {
                Slot::Edge(e) if e.length == 0.0 => {
                    let width = e.child.slots.len();
                    merge_into(&mut out, i);
                    i += width;
                }
                _ => i += 1,
            }
        }
        out
    }
    match t {
        WTree::Trivial => WTree::Trivial,
        WTree::Node(v) => WTree::Node(contract(v)),
    }
}

fn disk_order(c: &DiskConfig, a: usize, b: usize) -> Ordering {
    let (da, db) = (&c.disks[a], &c.disks[b]);
    for (x, y) in da.center.iter().zip(&db.center) {
        match x.total_cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    da.radius.total_cmp(&db.radius)
}

/// Sorts each vertex's disks lexicographically by (center, radius) and
/// carries the slots along.
pub fn canonicalize_b(t: &WTree) -> WTree {
    fn canon(v: &Vertex) -> Vertex {
        let mut order: Vec<usize> = (0..v.slots.len()).collect();
        order.sort_by(|&a, &b| disk_order(&v.label, a, b));
        let label = DiskConfig::new(
            v.label.dim,
            order.iter().map(|&i| v.label.disks[i].clone()).collect(),
        );
        let slots = order
            .iter()
            .map(|&i| match &v.slots[i] {
                Slot::Leaf(l) => Slot::Leaf(*l),
                Slot::Edge(e) => Slot::Edge(Edge {
                    length: e.length,
                    child: canon(&e.child),
                }),
            })
            .collect();
        Vertex::new(label, slots)
    }
    match t {
        WTree::Trivial => WTree::Trivial,
        WTree::Node(v) => WTree::Node(canon(v)),
    }
}

/// Passes of (b), (a), (c) until nothing changes.
pub fn normalize(t: &WTree) -> WTree {
    let mut cur = canonicalize_b(t);
    // every pass that changes the tree removes a vertex
    for _ in 0..=t.vertex_count() + 1 {
        let next = canonicalize_b(&contract_c(&reduce_a(&cur)));
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

fn vertex_close(a: &Vertex, b: &Vertex, tol: f64) -> bool {
    a.slots.len() == b.slots.len()
        && a.label.dim == b.label.dim
        && a.label.disks.iter().zip(&b.label.disks).all(|(x, y)| {
            tol::close(x.radius, y.radius, tol)
                && x.center
                    .iter()
                    .zip(&y.center)
                    .all(|(p, q)| tol::close(*p, *q, tol))
        })
        && a.slots.iter().zip(&b.slots).all(|(x, y)| match (x, y) {
            (Slot::Leaf(i), Slot::Leaf(k)) => i == k,
            (Slot::Edge(e), Slot::Edge(f)) => {
                tol::close(e.length, f.length, tol) && vertex_close(&e.child, &f.child, tol)
            }
            _ => false,
        })
}

/// Structural equality with lengths and disk data compared within `tol`.
pub fn trees_close(a: &WTree, b: &WTree, tol: f64) -> bool {
    match (a, b) {
        (WTree::Trivial, WTree::Trivial) => true,
        (WTree::Node(x), WTree::Node(y)) => vertex_close(x, y, tol),
        _ => false,
    }
}

pub fn w_equal(a: &WTree, b: &WTree) -> bool {
    trees_close(&normalize(a), &normalize(b), tol::LENGTH)
}

// Single rewrite steps, for checking the relations one at a time.

/// Contracts the edge above the vertex at `path`, whatever its length.
pub fn contract_edge(t: &WTree, path: &[usize]) -> Option<WTree> {
    let (&last, parent) = path.split_last()?;
    let mut out = t.clone();
    let WTree::Node(root) = &mut out else {
        return None;
    };
    let v = root.at_mut(parent)?;
    if !matches!(v.slots.get(last)?, Slot::Edge(_)) {
        return None;
    }
    merge_into(v, last);
    Some(out)
}

/// Paths of child vertices hanging from zero-length edges.
pub fn zero_edge_paths(t: &WTree) -> Vec<Path> {
    t.edge_paths()
        .into_iter()
        .filter(|p| t.edge_length(p) == Some(0.0))
        .collect()
}

/// Puts a unary identity vertex into slot `slot` of the vertex at `path`,
/// splitting the edge there (or the input edge) into `above` and `below`.
/// Relation (a) only holds if `star(above, below)` is the old length.
pub fn insert_identity(
    t: &WTree,
    path: &[usize],
    slot: usize,
    above: f64,
    below: f64,
) -> Option<WTree> {
    let mut out = t.clone();
    let WTree::Node(root) = &mut out else {
        return None;
    };
    let v = root.at_mut(path)?;
    let dim = v.label.dim;
    let old = v.slots.get(slot)?.clone();
    let lower = match old {
        Slot::Leaf(i) => Slot::Leaf(i),
        Slot::Edge(e) => Slot::Edge(Edge {
            length: below,
            child: e.child,
        }),
    };
    v.slots[slot] = Slot::Edge(Edge {
        length: above,
        child: Vertex::new(DiskConfig::identity(dim), vec![lower]),
    });
    Some(out)
}

/// Applies `sigma` to the label of the vertex at `path` and permutes its
/// slots the same way.
pub fn permute_vertex(t: &WTree, path: &[usize], sigma: &[usize]) -> Option<WTree> {
    let mut out = t.clone();
    let WTree::Node(root) = &mut out else {
        return None;
    };
    let v = root.at_mut(path)?;
    if sigma.len() != v.slots.len() || !perm::is_permutation(sigma) {
        return None;
    }
    v.label = DiskConfig::new(v.label.dim, perm::permute(&v.label.disks, sigma));
    v.slots = perm::permute(&v.slots, sigma);
    Some(out)
}
