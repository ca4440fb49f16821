//! Finite ordered trees and forests in canonical preorder numbering.
//!
//! Vertices are numbered `0..n` by a depth-first preorder walk that visits
//! children in their sibling order. With this numbering the linear order
//! `<=_T` induced by the sibling orders is plain integer comparison, every
//! initial subtree `T^v = { y : y <=_T v }` is the index prefix `0..=v`, and
//! the subtree rooted at `v` is the contiguous index range `v..end(v)`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::TreeError;

/// Index of a vertex, meaningful only relative to a particular tree.
pub type VertexId = usize;

/// The on-disk record used for trees and forests: `{"n": 3, "parent": [null, 0, 0]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeRecord {
    pub n: usize,
    pub parent: Vec<Option<VertexId>>,
}

/// A finite ordered forest with zero or more roots.
///
/// Roots carry a `None` parent and are ordered among themselves by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TreeRecord", into = "TreeRecord")]
pub struct Forest {
    parent: Vec<Option<VertexId>>,
}

/// A finite ordered tree with root `0`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TreeRecord", into = "TreeRecord")]
pub struct OrderedTree {
    parent: Vec<Option<VertexId>>,
    #[serde(skip)]
    children: Vec<Vec<VertexId>>,
    #[serde(skip)]
    depth: Vec<usize>,
    #[serde(skip)]
    end: Vec<VertexId>,
}

// Checks that `parent` lists a forest in preorder: each non-root vertex hangs
// off an ancestor-or-self of the previous vertex.
fn check_preorder(parent: &[Option<VertexId>]) -> Result<(), TreeError> {
    // the current rightmost path, root first
    let mut path: Vec<VertexId> = Vec::new();
    for (v, p) in parent.iter().enumerate() {
        match *p {
            None => path.clear(),
            Some(p) => {
                if p >= v {
                    return Err(TreeError::ParentNotEarlier { vertex: v, parent: p });
                }
                while path.last().is_some_and(|&top| top != p) {
                    path.pop();
                }
                if path.is_empty() {
                    return Err(TreeError::NotPreorder { vertex: v });
                }
            }
        }
        path.push(v);
    }
    Ok(())
}

impl Forest {
    pub fn new(parent: Vec<Option<VertexId>>) -> Result<Self, TreeError> {
        check_preorder(&parent)?;
        Ok(Self { parent })
    }

    pub fn empty() -> Self {
        Self { parent: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<VertexId>] {
        &self.parent
    }

    pub fn roots(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .map(|(v, _)| v)
    }

    /// Splits the forest into its component trees, in order.
    pub fn components(&self) -> Vec<OrderedTree> {
        let roots: Vec<VertexId> = self.roots().collect();
        let mut out = Vec::with_capacity(roots.len());
        for (k, &r) in roots.iter().enumerate() {
            let stop = roots.get(k + 1).copied().unwrap_or(self.len());
            let parent = (r..stop)
                .map(|v| self.parent[v].map(|p| p - r))
                .collect();
            out.push(OrderedTree::from_parents_unchecked(parent));
        }
        out
    }

    /// Concatenates trees into a forest, preserving their order.
    pub fn from_trees<'a>(trees: impl IntoIterator<Item = &'a OrderedTree>) -> Self {
        let mut parent = Vec::new();
        for t in trees {
            let offset = parent.len();
            parent.extend(t.parent.iter().map(|p| p.map(|p| p + offset)));
        }
        Self { parent }
    }

    /// Parses a concatenation of balanced groups such as `"(())()"`; the
    /// empty string is the empty forest.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let parent = parse_groups(text)?;
        Ok(Self { parent })
    }

    pub fn format(&self) -> String {
        self.components().iter().map(OrderedTree::format).collect()
    }
}

impl TryFrom<TreeRecord> for Forest {
    type Error = TreeError;

    fn try_from(rec: TreeRecord) -> Result<Self, Self::Error> {
        if rec.n != rec.parent.len() {
            return Err(TreeError::LengthMismatch { n: rec.n, len: rec.parent.len() });
        }
        Forest::new(rec.parent)
    }
}

impl From<Forest> for TreeRecord {
    fn from(f: Forest) -> Self {
        TreeRecord { n: f.parent.len(), parent: f.parent }
    }
}

fn parse_groups(text: &str) -> Result<Vec<Option<VertexId>>, TreeError> {
    let mut parent = Vec::new();
    let mut stack: Vec<VertexId> = Vec::new();
    for (offset, ch) in text.char_indices() {
        match ch {
            '(' => {
                parent.push(stack.last().copied());
                stack.push(parent.len() - 1);
            }
            ')' => {
                if stack.pop().is_none() {
                    return Err(TreeError::Parse { offset, reason: "unmatched ')'" });
                }
            }
            c if c.is_whitespace() => {}
            _ => return Err(TreeError::Parse { offset, reason: "unexpected character" }),
        }
    }
    if !stack.is_empty() {
        return Err(TreeError::Parse { offset: text.len(), reason: "unclosed '('" });
    }
    Ok(parent)
}

impl OrderedTree {
    /// Builds a tree from a canonical parent sequence.
    pub fn new(parent: Vec<Option<VertexId>>) -> Result<Self, TreeError> {
        if parent.is_empty() {
            return Err(TreeError::Empty);
        }
        if parent[0].is_some() {
            return Err(TreeError::RootHasParent);
        }
        if let Some(v) = parent.iter().skip(1).position(Option::is_none) {
            return Err(TreeError::ExtraRoot { vertex: v + 1 });
        }
        check_preorder(&parent)?;
        Ok(Self::from_parents_unchecked(parent))
    }

    pub(crate) fn from_parents_unchecked(parent: Vec<Option<VertexId>>) -> Self {
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0; n];
        for v in 1..n {
            let p = parent[v].expect("non-root vertex has a parent");
            children[p].push(v);
            depth[v] = depth[p] + 1;
        }
        let mut end: Vec<VertexId> = (1..=n).collect();
        for v in (1..n).rev() {
            let p = parent[v].unwrap();
            end[p] = end[p].max(end[v]);
        }
        Self { parent, children, depth, end }
    }

    /// The path with `k` vertices, i.e. the linear order of size `k`.
    pub fn chain(k: usize) -> Result<Self, TreeError> {
        if k == 0 {
            return Err(TreeError::Empty);
        }
        Ok(Self::from_parents_unchecked(
            (0..k).map(|v| v.checked_sub(1)).collect(),
        ))
    }

    /// The single-vertex tree.
    pub fn singleton() -> Self {
        Self::from_parents_unchecked(vec![None])
    }

    /// Parses a single balanced-parenthesis group.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let parent = parse_groups(text)?;
        if parent.is_empty() {
            return Err(TreeError::Parse { offset: 0, reason: "empty input" });
        }
        if let Some(v) = parent.iter().skip(1).position(Option::is_none) {
            // report the byte offset of the second top-level group
            let offset = text
                .char_indices()
                .filter(|&(_, c)| c == '(')
                .nth(v + 1)
                .map_or(0, |(o, _)| o);
            return Err(TreeError::Parse { offset, reason: "more than one top-level group" });
        }
        Ok(Self::from_parents_unchecked(parent))
    }

    pub fn format(&self) -> String {
        let mut out = String::with_capacity(2 * self.len());
        let mut open: Vec<VertexId> = Vec::new();
        for v in 0..self.len() {
            while let Some(&top) = open.last() {
                if self.end[top] > v {
                    break;
                }
                out.push(')');
                open.pop();
            }
            out.push('(');
            open.push(v);
        }
        out.extend(std::iter::repeat_n(')', open.len()));
        out
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    /// Trees always have at least one vertex.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.len()
    }

    pub fn parents(&self) -> &[Option<VertexId>] {
        &self.parent
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    /// Immediate successors of `v`, in sibling order.
    pub fn children(&self, v: VertexId) -> &[VertexId] {
        &self.children[v]
    }

    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v]
    }

    /// One past the last vertex of the subtree rooted at `v`.
    pub fn subtree_end(&self, v: VertexId) -> VertexId {
        self.end[v]
    }

    /// The largest vertex, which is always a leaf.
    pub fn last(&self) -> VertexId {
        self.len() - 1
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<VertexId, TreeError> {
        if v < self.len() {
            Ok(v)
        } else {
            Err(TreeError::InvalidVertex { vertex: v, len: self.len() })
        }
    }

    /// `u ⊑ v`: `u` is a predecessor of (or equal to) `v`.
    #[inline]
    pub fn is_ancestor(&self, u: VertexId, v: VertexId) -> bool {
        u <= v && v < self.end[u]
    }

    /// Largest common predecessor of `u` and `v`.
    pub fn meet(&self, mut u: VertexId, mut v: VertexId) -> VertexId {
        while self.depth[u] > self.depth[v] {
            u = self.parent[u].unwrap();
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v].unwrap();
        }
        while u != v {
            u = self.parent[u].unwrap();
            v = self.parent[v].unwrap();
        }
        u
    }

    pub fn try_meet(&self, u: VertexId, v: VertexId) -> Result<VertexId, TreeError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.meet(u, v))
    }

    /// Meet of a nonempty set of vertices.
    pub fn meet_all(&self, vs: impl IntoIterator<Item = VertexId>) -> Option<VertexId> {
        vs.into_iter().reduce(|a, b| self.meet(a, b))
    }

    /// The tree order evaluated from its two-clause definition: `u <= v` iff
    /// `u ⊑ v`, or `v ⋢ u` and the branch towards `u` precedes the branch
    /// towards `v` at `u ∧ v`. Agrees with index comparison on canonical trees.
    pub fn definitional_order(&self, u: VertexId, v: VertexId) -> Ordering {
        if u == v {
            return Ordering::Equal;
        }
        if self.is_ancestor(u, v) {
            return Ordering::Less;
        }
        if self.is_ancestor(v, u) {
            return Ordering::Greater;
        }
        let m = self.meet(u, v);
        let branch = |mut x: VertexId| {
            while self.parent[x] != Some(m) {
                x = self.parent[x].unwrap();
            }
            x
        };
        let (bu, bv) = (branch(u), branch(v));
        let pos = |x| self.children[m].iter().position(|&c| c == x).unwrap();
        pos(bu).cmp(&pos(bv))
    }

    /// `T^v`: the induced tree on `0..=v`.
    pub fn initial_subtree(&self, v: VertexId) -> Result<Self, TreeError> {
        self.check_vertex(v)?;
        Ok(Self::from_parents_unchecked(self.parent[..=v].to_vec()))
    }

    /// Vertices without immediate successors.
    pub fn leaves(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.children[v].is_empty()).collect()
    }

    /// Non-root vertices with at most one immediate successor.
    pub fn marked_set(&self) -> Vec<VertexId> {
        self.vertices()
            .skip(1)
            .filter(|&v| self.children[v].len() <= 1)
            .collect()
    }

    pub fn is_chain(&self) -> bool {
        self.parent.iter().enumerate().skip(1).all(|(v, p)| *p == Some(v - 1))
    }

    /// Rebuilds a tree from child lists over arbitrary labels, returning the
    /// canonical tree and the map from old label to new index.
    pub fn from_children(root: usize, children: &[Vec<usize>]) -> (Self, Vec<Option<VertexId>>) {
        let mut relabel = vec![None; children.len()];
        let mut parent = Vec::new();
        let mut stack = vec![(root, None)];
        while let Some((x, p)) = stack.pop() {
            relabel[x] = Some(parent.len());
            parent.push(p);
            let me = parent.len() - 1;
            for &c in children[x].iter().rev() {
                stack.push((c, Some(me)));
            }
        }
        (Self::from_parents_unchecked(parent), relabel)
    }

    pub fn to_record(&self) -> TreeRecord {
        TreeRecord { n: self.len(), parent: self.parent.clone() }
    }
}

impl fmt::Debug for OrderedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OrderedTree({})", self.format())
    }
}

impl fmt::Display for OrderedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl FromStr for OrderedTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl TryFrom<TreeRecord> for OrderedTree {
    type Error = TreeError;

    fn try_from(rec: TreeRecord) -> Result<Self, Self::Error> {
        if rec.n != rec.parent.len() {
            return Err(TreeError::LengthMismatch { n: rec.n, len: rec.parent.len() });
        }
        OrderedTree::new(rec.parent)
    }
}

impl From<OrderedTree> for TreeRecord {
    fn from(t: OrderedTree) -> Self {
        TreeRecord { n: t.len(), parent: t.parent }
    }
}

impl From<OrderedTree> for Forest {
    fn from(t: OrderedTree) -> Self {
        Forest { parent: t.parent }
    }
}

/// All ordered trees with `n` vertices, in lexicographic order of their
/// parent sequences.
pub fn enumerate_trees(n: usize, max_vertices: usize) -> Result<Vec<OrderedTree>, TreeError> {
    if n == 0 {
        return Err(TreeError::Empty);
    }
    if n > max_vertices {
        return Err(TreeError::Budget { n, max: max_vertices });
    }
    let mut out = Vec::new();
    let mut parent = vec![None];
    let mut path = vec![0];
    extend_trees(n, &mut parent, &mut path, &mut out);
    Ok(out)
}

fn extend_trees(
    n: usize,
    parent: &mut Vec<Option<VertexId>>,
    path: &mut Vec<VertexId>,
    out: &mut Vec<OrderedTree>,
) {
    if parent.len() == n {
        out.push(OrderedTree::from_parents_unchecked(parent.clone()));
        return;
    }
    let v = parent.len();
    // candidates are the rightmost path, root first = ascending index
    for k in 0..path.len() {
        let saved: Vec<VertexId> = path.drain(k + 1..).collect();
        parent.push(Some(path[k]));
        path.push(v);
        extend_trees(n, parent, path, out);
        path.pop();
        parent.pop();
        path.extend(saved);
    }
}
