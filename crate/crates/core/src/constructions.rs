//! Explicit tree constructions: the doubling tree with its witness
//! connections, grafting forests onto a tree, root adjunction, and the
//! one-vertex extensions used when pruning or extending a source tree.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::TreeError;
use crate::morphism::{Category, Connection, TreeMap};
use crate::tree::{Forest, OrderedTree, TreeRecord, VertexId};

/// The doubled copy of one marked vertex `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubledVertex {
    /// `a`, as a vertex of the original tree.
    pub vertex: VertexId,
    /// `a₁`, as a vertex of the doubling tree.
    pub first: VertexId,
    /// `a₂`, as a vertex of the doubling tree.
    pub second: VertexId,
}

/// The doubling tree `T` of `S` together with its rigid surjection
/// `s: T -> S` and the embeddings `i_B`, `B ⊆ A(S)`.
///
/// `T` adds two immediate successors `a₁ < a₂` above each marked vertex
/// `a`; the former child of `a` (if any) moves on top of `a₁`.
#[derive(Debug, Clone)]
pub struct DoublingResult {
    pub source: Arc<OrderedTree>,
    pub tree: Arc<OrderedTree>,
    /// Index in `tree` of each vertex of `source`.
    pub embed: Vec<VertexId>,
    pub doubled: Vec<DoubledVertex>,
    /// `s: T -> S`; identity on `S`, and `a₁, a₂ ↦ a`.
    pub surj: TreeMap,
}

impl DoublingResult {
    /// The marked set `A(S)`, in order.
    pub fn marked(&self) -> Vec<VertexId> {
        self.doubled.iter().map(|d| d.vertex).collect()
    }

    /// `i_B`: identity off `B`, and `b ↦ b₁` on `B`. Vertices of `B` outside
    /// the marked set are ignored.
    pub fn embedding(&self, subset: &[VertexId]) -> TreeMap {
        let mut map = self.embed.clone();
        for d in &self.doubled {
            if subset.contains(&d.vertex) {
                map[d.vertex] = d.first;
            }
        }
        TreeMap::from_parts(self.source.clone(), self.tree.clone(), map, None)
    }

    /// The connection `(s, i_B): S -> T`.
    pub fn witness(&self, subset: &[VertexId]) -> Connection {
        Connection::from_parts(Category::ConnT, self.surj.clone(), self.embedding(subset))
    }

    /// Every subset of `A`, in binary-counter order over the marked
    /// vertices, paired with its witness connection.
    pub fn witnesses(&self) -> Vec<(Vec<VertexId>, Connection)> {
        let marked = self.marked();
        (0u64..1 << marked.len())
            .map(|bits| {
                let subset: Vec<VertexId> = marked
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| bits >> k & 1 == 1)
                    .map(|(_, &a)| a)
                    .collect();
                let c = self.witness(&subset);
                (subset, c)
            })
            .collect()
    }

    /// Name of every vertex of the doubling tree: original vertices keep
    /// their index as name, doubles are `a_1` and `a_2`.
    pub fn names(&self) -> Vec<String> {
        let mut names = vec![String::new(); self.tree.len()];
        for (x, &y) in self.embed.iter().enumerate() {
            names[y] = x.to_string();
        }
        for d in &self.doubled {
            names[d.first] = format!("{}_1", d.vertex);
            names[d.second] = format!("{}_2", d.vertex);
        }
        names
    }

    pub fn to_table(&self) -> DoublingTable {
        DoublingTable {
            source: self.source.to_record(),
            tree: self.tree.to_record(),
            embed: self.embed.clone(),
            doubled: self.doubled.clone(),
            names: self.names(),
            surj: self.surj.as_slice().to_vec(),
            embeddings: self
                .witnesses()
                .into_iter()
                .map(|(subset, c)| SubsetEmbedding { subset, emb: c.emb().as_slice().to_vec() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetEmbedding {
    pub subset: Vec<VertexId>,
    pub emb: Vec<VertexId>,
}

/// Translation table written next to a doubling tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingTable {
    pub source: TreeRecord,
    pub tree: TreeRecord,
    pub embed: Vec<VertexId>,
    pub doubled: Vec<DoubledVertex>,
    pub names: Vec<String>,
    pub surj: Vec<VertexId>,
    pub embeddings: Vec<SubsetEmbedding>,
}

pub fn doubling_tree(source: &Arc<OrderedTree>) -> DoublingResult {
    let n = source.len();
    let marked = source.marked_set();
    let mut children: Vec<Vec<usize>> = source.vertices().map(|v| source.children(v).to_vec()).collect();
    let mut labels = Vec::with_capacity(marked.len());
    for &a in &marked {
        let (a1, a2) = (children.len(), children.len() + 1);
        let old = std::mem::replace(&mut children[a], vec![a1, a2]);
        children.push(old);
        children.push(Vec::new());
        labels.push((a, a1, a2));
    }
    let (tree, relabel) = OrderedTree::from_children(0, &children);
    let relabel: Vec<VertexId> = relabel.into_iter().map(Option::unwrap).collect();
    let embed: Vec<VertexId> = relabel[..n].to_vec();
    let doubled: Vec<DoubledVertex> = labels
        .iter()
        .map(|&(a, a1, a2)| DoubledVertex { vertex: a, first: relabel[a1], second: relabel[a2] })
        .collect();
    let mut surj = vec![0; tree.len()];
    for (x, &y) in embed.iter().enumerate() {
        surj[y] = x;
    }
    for d in &doubled {
        surj[d.first] = d.vertex;
        surj[d.second] = d.vertex;
    }
    let tree = Arc::new(tree);
    let surj = TreeMap::from_parts(tree.clone(), source.clone(), surj, None);
    DoublingResult { source: source.clone(), tree, embed, doubled, surj }
}

/// Result of grafting forests onto a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraftResult {
    pub tree: OrderedTree,
    /// New index of each vertex of the base tree.
    pub from_base: Vec<VertexId>,
    /// New index of each vertex of each grafted forest.
    pub from_forest: Vec<Vec<VertexId>>,
}

impl GraftResult {
    /// Deletes the grafted vertices again, recovering the base tree.
    pub fn base(&self) -> OrderedTree {
        let mut back = vec![usize::MAX; self.tree.len()];
        for (old, &new) in self.from_base.iter().enumerate() {
            back[new] = old;
        }
        let parent = self
            .from_base
            .iter()
            .map(|&new| self.tree.parent(new).map(|p| back[p]))
            .collect();
        OrderedTree::from_parents_unchecked(parent)
    }
}

/// `(T; x₁, …, xₙ) ⊕ (F₁, …, Fₙ)`: each forest is put on top of its anchor,
/// after the anchor's existing successors.
pub fn graft(base: &OrderedTree, anchors: &[VertexId], forests: &[Forest]) -> Result<GraftResult, TreeError> {
    if anchors.len() != forests.len() {
        return Err(TreeError::GraftArity { anchors: anchors.len(), forests: forests.len() });
    }
    for (k, &x) in anchors.iter().enumerate() {
        base.check_vertex(x)?;
        if anchors[..k].contains(&x) {
            return Err(TreeError::DuplicateAnchor { vertex: x });
        }
    }
    let mut children: Vec<Vec<usize>> = base.vertices().map(|v| base.children(v).to_vec()).collect();
    let mut offsets = Vec::with_capacity(forests.len());
    for (&x, f) in anchors.iter().zip(forests) {
        let offset = children.len();
        offsets.push(offset);
        children.extend(std::iter::repeat_n(Vec::new(), f.len()));
        for (v, p) in f.parents().iter().enumerate() {
            match p {
                Some(p) => children[offset + p].push(offset + v),
                None => children[x].push(offset + v),
            }
        }
    }
    let (tree, relabel) = OrderedTree::from_children(0, &children);
    let relabel: Vec<VertexId> = relabel.into_iter().map(Option::unwrap).collect();
    let from_base = relabel[..base.len()].to_vec();
    let from_forest = offsets
        .iter()
        .zip(forests)
        .map(|(&o, f)| relabel[o..o + f.len()].to_vec())
        .collect();
    Ok(GraftResult { tree, from_base, from_forest })
}

/// `1 ⊕ F`: a new root whose children are the roots of `F`, in order.
pub fn add_root(forest: &Forest) -> OrderedTree {
    let parent = std::iter::once(None)
        .chain(forest.parents().iter().map(|p| Some(p.map_or(0, |p| p + 1))))
        .collect();
    OrderedTree::from_parents_unchecked(parent)
}

/// `S₊`: one new vertex directly above the largest vertex.
pub fn plus_leaf(s: &OrderedTree) -> OrderedTree {
    let mut parent = s.parents().to_vec();
    parent.push(Some(s.last()));
    OrderedTree::from_parents_unchecked(parent)
}

/// `S★`: one new leaf, the last immediate successor of the root.
pub fn star_extend(s: &OrderedTree) -> OrderedTree {
    let mut parent = s.parents().to_vec();
    parent.push(Some(0));
    OrderedTree::from_parents_unchecked(parent)
}
