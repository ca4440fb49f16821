//! The invariant set of a connection, the colorings built from it, and the
//! functors `δ: Conn_T -> PSC`, `∂` (prune the largest leaf), `γ` and the
//! iterate `Δ`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{FunctorError, MorphismError};
use crate::morphism::{induced_embedding, restrict, Category, Connection, PscHom, TreeMap};
use crate::tree::{OrderedTree, VertexId};

/// A subset of the marked set `A(S)`, stored as one bit per marked vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InvariantSet {
    marked: Vec<VertexId>,
    bits: Vec<bool>,
}

impl InvariantSet {
    /// Fails if some member lies outside `marked`.
    pub fn from_members(marked: Vec<VertexId>, members: &[VertexId]) -> Result<Self, FunctorError> {
        if let Some(&vertex) = members.iter().find(|x| !marked.contains(x)) {
            return Err(FunctorError::OutsideMarkedSet { vertex });
        }
        let bits = marked.iter().map(|a| members.contains(a)).collect();
        Ok(Self { marked, bits })
    }

    pub fn marked(&self) -> &[VertexId] {
        &self.marked
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn members(&self) -> Vec<VertexId> {
        self.marked
            .iter()
            .zip(&self.bits)
            .filter(|(_, &b)| b)
            .map(|(&a, _)| a)
            .collect()
    }

    pub fn contains(&self, x: VertexId) -> bool {
        self.marked.iter().zip(&self.bits).any(|(&a, &b)| b && a == x)
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    /// The subset read as a number, bit `k` standing for the `k`-th marked
    /// vertex. Used as a color index.
    pub fn as_index(&self) -> u64 {
        self.bits.iter().enumerate().map(|(k, &b)| u64::from(b) << k).sum()
    }
}

impl fmt::Display for InvariantSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.members().iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", members.join(","))
    }
}

impl Serialize for InvariantSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}

pub(crate) fn induced_or_err(c: &Connection) -> Result<TreeMap, FunctorError> {
    let cat = c.category();
    if !cat.has_embedding() || !cat.has_surjection() {
        return Err(FunctorError::InertHalf(cat));
    }
    induced_embedding(c.surj())?
        .ok_or(FunctorError::Morphism(MorphismError::Invalid(cat, "surjection is not rigid")))
}

/// `{x ∈ A : i_s(x) ≠ i(x)}`.
///
/// Every vertex is compared; a disagreement outside `A` is reported as an
/// error, since a valid connection whose embedding keeps the root cannot
/// have one.
pub fn invariant_set(c: &Connection) -> Result<InvariantSet, FunctorError> {
    let induced = induced_or_err(c)?;
    let (i_s, i) = (induced.as_slice(), c.emb().as_slice());
    let mut members: Vec<VertexId> = (0..i.len()).filter(|&x| i_s[x] != i[x]).collect();
    let marked = c.source().marked_set();
    if c.category() == Category::ConnL {
        // the embedding half need not keep the minimum here
        members.retain(|&x| x != 0);
    }
    InvariantSet::from_members(marked, &members)
}

/// `0` if `i_s(x) = i(x)`, else `1`.
pub fn two_coloring(x: VertexId, c: &Connection) -> Result<u8, FunctorError> {
    let induced = induced_or_err(c)?;
    c.source().check_vertex(x).map_err(MorphismError::from)?;
    Ok(u8::from(induced.as_slice()[x] != c.emb().as_slice()[x]))
}

/// The coloring sending a connection to its invariant set.
pub fn powerset_coloring(c: &Connection) -> Result<InvariantSet, FunctorError> {
    invariant_set(c)
}

/// `δ(s, i) = (s^{i(v)}, i)`, `v` the largest leaf of `S`.
pub fn delta(c: &Connection) -> Result<PscHom, FunctorError> {
    if c.category() != Category::ConnT {
        return Err(MorphismError::Invalid(c.category(), "delta is defined on tree connections").into());
    }
    let v = c.source().last();
    let surj = restrict(c.surj(), c.emb().as_slice()[v])?;
    let out = Connection::from_parts(Category::Psc, surj, c.emb().clone());
    debug_assert!(out.is_valid());
    Ok(PscHom::from_connection_unchecked(out))
}

/// A partial strong connection together with a bit string. Composition
/// acts on the morphism and leaves the bits alone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnnotatedPscHom {
    pub hom: PscHom,
    pub bits: Vec<bool>,
}

impl AnnotatedPscHom {
    pub fn new(hom: PscHom) -> Self {
        Self { hom, bits: Vec::new() }
    }

    /// `outer ∘ (self.hom, bits)`.
    pub fn then(&self, outer: &PscHom) -> Result<Self, MorphismError> {
        let hom = crate::morphism::compose_psc(&self.hom, outer)?;
        Ok(Self { hom, bits: self.bits.clone() })
    }
}

/// `∂`: prunes the largest leaf `v` of `S`, restricting to `S^w` and
/// `T^{i(w)}`, and appends the bit `[i(v) ≠ i_s(v)]`. The target tree is
/// kept.
pub fn partial_functor(p: &AnnotatedPscHom) -> Result<AnnotatedPscHom, FunctorError> {
    let c = p.hom.as_connection();
    let s_tree = c.source();
    if s_tree.len() < 2 {
        return Err(FunctorError::SingleVertex);
    }
    let (v, w) = (s_tree.len() - 1, s_tree.len() - 2);
    let induced = induced_or_err(c)?;
    let emb = c.emb().as_slice();
    let bit = emb[v] != induced.as_slice()[v];

    let pruned = Arc::new(s_tree.initial_subtree(w).map_err(MorphismError::from)?);
    let t_tree = c.target().clone();
    let iw = emb[w];
    let surj = TreeMap::from_parts(t_tree.clone(), pruned.clone(), c.surj().as_slice()[..=iw].to_vec(), Some(iw));
    let emb = TreeMap::from_parts(pruned, t_tree, emb[..=w].to_vec(), None);
    let out = Connection::from_parts(Category::Psc, surj, emb);
    debug_assert!(out.is_valid(), "pruned morphism {out:?}");
    let mut bits = p.bits.clone();
    bits.push(bit);
    Ok(AnnotatedPscHom { hom: PscHom::from_connection_unchecked(out), bits })
}

/// `γ(q, j) = (q^{i_q(v)}, j')` with `j' = j` below `v` and `j'(v) = i_q(v)`.
pub fn gamma(q: &PscHom) -> Result<PscHom, FunctorError> {
    let c = q.as_connection();
    let induced = induced_or_err(c)?;
    let v = c.source().last();
    let target = induced.as_slice()[v];
    if target == c.emb().as_slice()[v] {
        return Err(FunctorError::BitNotSet);
    }
    let surj = restrict(c.surj(), target)?;
    let mut emb = c.emb().as_slice().to_vec();
    emb[v] = target;
    let emb = TreeMap::new(c.source().clone(), c.target().clone(), emb)?;
    Ok(PscHom::try_from(Connection::new(Category::Psc, surj, emb)?)?)
}

/// `Δ`: applies `∂` until one vertex is left and reads off the set of
/// vertices whose bit was set.
pub fn delta_signature(p: &PscHom) -> Result<InvariantSet, FunctorError> {
    let s_tree: Arc<OrderedTree> = p.source().clone();
    let n = s_tree.len();
    let mut cur = AnnotatedPscHom::new(p.clone());
    while cur.hom.source().len() > 1 {
        cur = partial_functor(&cur)?;
    }
    // the N-th bit was produced when pruning vertex n - N
    let members: Vec<VertexId> = cur
        .bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| n - 1 - k)
        .collect();
    InvariantSet::from_members(s_tree.marked_set(), &members)
}
