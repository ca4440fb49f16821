//! Embeddings, rigid surjections and connections between ordered trees.
//!
//! A morphism `S -> T` is a pair `(s, i)` with the surjection part
//! `s: T -> S` and the embedding part `i: S -> T`. Partial strong
//! connections carry an explicit `domain_top = v`, meaning `s` is only
//! defined on the initial subtree `T^v`; the source tree is never
//! renumbered.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::MorphismError;
use crate::tree::{OrderedTree, TreeRecord, VertexId};

/// Which category a [`Connection`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    /// Connections between trees.
    ConnT,
    /// Partial strong connections `T^v <-> S`.
    #[serde(rename = "PSC")]
    Psc,
    /// Connections between linear orders (chains).
    ConnL,
    /// Linear-order connections whose embedding keeps the minimum.
    ConnLstar,
    /// Increasing injections only; the surjection half is inert.
    IncInj,
    /// Rigid surjections only; the embedding half is inert.
    RigidOnly,
}

impl Category {
    pub fn has_surjection(self) -> bool {
        self != Category::IncInj
    }

    pub fn has_embedding(self) -> bool {
        self != Category::RigidOnly
    }
}

/// A vertex map between two trees, possibly defined only on an initial
/// subtree of its source.
#[derive(Clone, PartialEq, Eq)]
pub struct TreeMap {
    source: Arc<OrderedTree>,
    target: Arc<OrderedTree>,
    map: Vec<VertexId>,
    domain_top: Option<VertexId>,
}

impl Hash for TreeMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.map.hash(state);
        self.domain_top.hash(state);
    }
}

impl fmt::Debug for TreeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.source, self.target, self.map)?;
        if let Some(v) = self.domain_top {
            write!(f, " on ^{v}")?;
        }
        Ok(())
    }
}

impl TreeMap {
    /// A total map.
    pub fn new(
        source: Arc<OrderedTree>,
        target: Arc<OrderedTree>,
        map: Vec<VertexId>,
    ) -> Result<Self, MorphismError> {
        Self::partial(source, target, map, None)
    }

    /// A map defined on `source^top` (or on all of `source` when `top` is
    /// `None`). A top equal to the last vertex is normalised to `None`.
    pub fn partial(
        source: Arc<OrderedTree>,
        target: Arc<OrderedTree>,
        map: Vec<VertexId>,
        top: Option<VertexId>,
    ) -> Result<Self, MorphismError> {
        let top = match top {
            Some(v) => {
                source.check_vertex(v)?;
                (v != source.last()).then_some(v)
            }
            None => None,
        };
        let expected = top.map_or(source.len(), |v| v + 1);
        if map.len() != expected {
            return Err(MorphismError::WrongLength { expected, got: map.len() });
        }
        if let Some((at, &value)) = map.iter().enumerate().find(|(_, &y)| y >= target.len()) {
            return Err(MorphismError::OutOfRange { at, value });
        }
        Ok(Self { source, target, map, domain_top: top })
    }

    pub(crate) fn from_parts(
        source: Arc<OrderedTree>,
        target: Arc<OrderedTree>,
        map: Vec<VertexId>,
        domain_top: Option<VertexId>,
    ) -> Self {
        let domain_top = domain_top.filter(|&v| v != source.last());
        Self { source, target, map, domain_top }
    }

    /// The placeholder half of an `IncInj` or `RigidOnly` morphism.
    pub fn inert(source: Arc<OrderedTree>, target: Arc<OrderedTree>) -> Self {
        Self { source, target, map: Vec::new(), domain_top: None }
    }

    pub fn identity(tree: Arc<OrderedTree>) -> Self {
        let map = tree.vertices().collect();
        Self { source: tree.clone(), target: tree, map, domain_top: None }
    }

    pub fn is_inert(&self) -> bool {
        self.map.is_empty()
    }

    pub fn source(&self) -> &Arc<OrderedTree> {
        &self.source
    }

    pub fn target(&self) -> &Arc<OrderedTree> {
        &self.target
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.map
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.map
    }

    /// `Some(v)` when the map is defined only on `source^v`.
    pub fn domain_top(&self) -> Option<VertexId> {
        self.domain_top
    }

    /// The largest vertex of the domain.
    pub fn top(&self) -> VertexId {
        self.domain_top.unwrap_or(self.source.last())
    }

    pub fn is_total(&self) -> bool {
        self.domain_top.is_none() && !self.is_inert()
    }

    #[inline]
    pub fn apply(&self, x: VertexId) -> VertexId {
        self.map[x]
    }

    /// First vertex of the target that is not hit, if any.
    pub fn first_missing(&self) -> Option<VertexId> {
        let mut hit = vec![false; self.target.len()];
        for &y in &self.map {
            hit[y] = true;
        }
        hit.iter().position(|&h| !h)
    }

    pub fn is_surjective(&self) -> bool {
        !self.is_inert() && self.first_missing().is_none()
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn after(&self, inner: &TreeMap) -> Result<TreeMap, MorphismError> {
        if *inner.target != *self.source {
            return Err(MorphismError::Mismatch("middle trees differ"));
        }
        let mut map = Vec::with_capacity(inner.map.len());
        for &y in &inner.map {
            match self.map.get(y) {
                Some(&z) => map.push(z),
                None => return Err(MorphismError::Mismatch("inner map leaves the outer domain")),
            }
        }
        Ok(TreeMap::from_parts(
            inner.source.clone(),
            self.target.clone(),
            map,
            inner.domain_top,
        ))
    }
}

/// Deuber embedding: root to root, strictly increasing, meet preserving.
pub fn is_embedding(f: &TreeMap) -> bool {
    if !f.is_total() {
        return false;
    }
    let (s, t, m) = (&f.source, &f.target, &f.map);
    if m[0] != 0 {
        return false;
    }
    if m.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    for x in s.vertices() {
        for y in x + 1..s.len() {
            if m[s.meet(x, y)] != t.meet(m[x], m[y]) {
                return false;
            }
        }
    }
    true
}

/// `i_s(x) = ⋀ s⁻¹(x)`, returned only when it is an embedding forming a
/// Galois pair with `s`: `s(i(x)) = x` and `i(s(y)) ⊑ y`.
///
/// `Ok(None)` means `s` is surjective but not rigid.
pub fn induced_embedding(s: &TreeMap) -> Result<Option<TreeMap>, MorphismError> {
    if s.is_inert() {
        return Err(MorphismError::Mismatch("inert map has no induced embedding"));
    }
    if let Some(missing) = s.first_missing() {
        return Err(MorphismError::NotSurjective { missing });
    }
    let big = &s.source;
    let mut meet: Vec<Option<VertexId>> = vec![None; s.target.len()];
    for (y, &x) in s.map.iter().enumerate() {
        meet[x] = Some(match meet[x] {
            None => y,
            Some(m) => big.meet(m, y),
        });
    }
    let map: Vec<VertexId> = meet.into_iter().map(Option::unwrap).collect();
    let candidate = TreeMap {
        source: s.target.clone(),
        target: s.source.clone(),
        map,
        domain_top: None,
    };
    if !galois_pair(s, &candidate) || !is_embedding(&candidate) {
        return Ok(None);
    }
    Ok(Some(candidate))
}

/// Both Galois laws for `(s, i)`: `s(i(x)) = x` for all `x` and
/// `i(s(y)) ⊑ y` for all `y` in the domain of `s`.
pub fn galois_pair(s: &TreeMap, i: &TreeMap) -> bool {
    let top = s.top();
    let left_inverse = i
        .map
        .iter()
        .enumerate()
        .all(|(x, &y)| y <= top && s.map[y] == x);
    left_inverse
        && s.map
            .iter()
            .enumerate()
            .all(|(y, &x)| s.source.is_ancestor(i.map[x], y))
}

pub fn is_rigid_surjection(s: &TreeMap) -> bool {
    matches!(induced_embedding(s), Ok(Some(_)))
}

/// Condition (a) for `(s, i)`: `s(i(x)) = x`, and `s(y) <= x` whenever
/// `y < i(x)`. Equivalent to `(s, i)` being a connection between the linear
/// orders underlying the two trees.
pub fn linear_condition(s: &[VertexId], i: &[VertexId]) -> bool {
    // prefix_max[k] = max of s[0..k]
    let mut prefix_max = Vec::with_capacity(s.len() + 1);
    prefix_max.push(0);
    for &x in s {
        let last = *prefix_max.last().unwrap();
        prefix_max.push(last.max(x));
    }
    i.iter().enumerate().all(|(x, &ix)| {
        ix < s.len() && s[ix] == x && (ix == 0 || prefix_max[ix] <= x)
    })
}

fn strictly_increasing(m: &[VertexId]) -> bool {
    m.windows(2).all(|w| w[0] < w[1])
}

/// Validates `(s, i)` as a morphism of `category`; `s: T -> S`, `i: S -> T`.
pub fn is_connection(s: &TreeMap, i: &TreeMap, category: Category) -> Result<bool, MorphismError> {
    if *s.source != *i.target || *s.target != *i.source {
        return Err(MorphismError::Mismatch("surjection and embedding join different trees"));
    }
    let small = &i.source;
    let big = &i.target;
    Ok(match category {
        Category::IncInj => {
            s.is_inert()
                && i.is_total()
                && strictly_increasing(&i.map)
        }
        Category::RigidOnly => i.is_inert() && s.is_total() && is_rigid_surjection(s),
        Category::ConnT => {
            s.is_total()
                && i.is_total()
                && linear_condition(&s.map, &i.map)
                && is_embedding(i)
                && is_rigid_surjection(s)
        }
        Category::ConnL | Category::ConnLstar => {
            small.is_chain()
                && big.is_chain()
                && s.is_total()
                && i.is_total()
                && linear_condition(&s.map, &i.map)
                && (category == Category::ConnL || i.map[0] == 0)
        }
        Category::Psc => {
            let top = s.top();
            !s.is_inert()
                && i.is_total()
                && i.map[small.last()] == top
                && linear_condition(&s.map, &i.map)
                && is_embedding(i)
                && is_rigid_surjection(s)
        }
    })
}

/// `i_s` sends the largest leaf of `S` to the largest leaf of the domain.
pub fn is_sealed(s: &TreeMap) -> bool {
    match induced_embedding(s) {
        Ok(Some(i)) => i.map[i.source.last()] == s.top(),
        _ => false,
    }
}

/// The embedding sends the largest leaf of `S` to the largest leaf of the
/// domain of the surjection.
pub fn is_strong(c: &Connection) -> bool {
    c.category.has_embedding()
        && c.category.has_surjection()
        && c.emb.map[c.source().last()] == c.surj.top()
}

/// `s^v`: the restriction of `s` to the initial subtree ending at `v`.
pub fn restrict(s: &TreeMap, v: VertexId) -> Result<TreeMap, MorphismError> {
    s.source.check_vertex(v)?;
    if v > s.top() {
        return Err(MorphismError::Mismatch("restriction point lies outside the domain"));
    }
    Ok(TreeMap::from_parts(
        s.source.clone(),
        s.target.clone(),
        s.map[..=v].to_vec(),
        Some(v),
    ))
}

/// A morphism `S -> T` in one of the categories of [`Category`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Connection {
    category: Category,
    surj: TreeMap,
    emb: TreeMap,
}

impl fmt::Debug for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?}[{} -> {}] surj={:?} emb={:?}",
            self.category,
            self.source(),
            self.target(),
            self.surj.map,
            self.emb.map
        )?;
        if let Some(v) = self.surj.domain_top {
            write!(f, " top={v}")?;
        }
        Ok(())
    }
}

impl Connection {
    /// Validates and wraps `(surj, emb)`.
    pub fn new(category: Category, surj: TreeMap, emb: TreeMap) -> Result<Self, MorphismError> {
        if !is_connection(&surj, &emb, category)? {
            return Err(MorphismError::Invalid(category, "conditions do not hold"));
        }
        Ok(Self { category, surj, emb })
    }

    /// Builds from raw index sequences; `source` is `S`, `target` is `T`.
    pub fn from_maps(
        category: Category,
        source: Arc<OrderedTree>,
        target: Arc<OrderedTree>,
        surj: Vec<VertexId>,
        emb: Vec<VertexId>,
        domain_top: Option<VertexId>,
    ) -> Result<Self, MorphismError> {
        let s = if category.has_surjection() {
            TreeMap::partial(target.clone(), source.clone(), surj, domain_top)?
        } else {
            TreeMap::inert(target.clone(), source.clone())
        };
        let i = if category.has_embedding() {
            TreeMap::new(source, target, emb)?
        } else {
            TreeMap::inert(source, target)
        };
        Self::new(category, s, i)
    }

    pub(crate) fn from_parts(category: Category, surj: TreeMap, emb: TreeMap) -> Self {
        Self { category, surj, emb }
    }

    pub fn identity(tree: Arc<OrderedTree>, category: Category) -> Self {
        let id = TreeMap::identity(tree.clone());
        let surj = if category.has_surjection() {
            id.clone()
        } else {
            TreeMap::inert(tree.clone(), tree.clone())
        };
        let emb = if category.has_embedding() { id } else { TreeMap::inert(tree.clone(), tree) };
        Self { category, surj, emb }
    }

    pub fn category(&self) -> Category {
        self.category
    }

    pub fn surj(&self) -> &TreeMap {
        &self.surj
    }

    pub fn emb(&self) -> &TreeMap {
        &self.emb
    }

    /// `S`.
    pub fn source(&self) -> &Arc<OrderedTree> {
        &self.emb.source
    }

    /// `T`.
    pub fn target(&self) -> &Arc<OrderedTree> {
        &self.emb.target
    }

    pub fn domain_top(&self) -> Option<VertexId> {
        self.surj.domain_top
    }

    pub fn is_valid(&self) -> bool {
        is_connection(&self.surj, &self.emb, self.category).unwrap_or(false)
    }

    /// Sort key: lexicographic on (surjection, embedding).
    pub fn sort_key(&self) -> (&[VertexId], &[VertexId]) {
        (&self.surj.map, &self.emb.map)
    }

    pub fn to_record(&self) -> MorphismRecord {
        MorphismRecord {
            category: self.category,
            source: self.source().to_record(),
            target: self.target().to_record(),
            surj: self.surj.map.clone(),
            emb: self.emb.map.clone(),
            domain_top: self.surj.domain_top,
        }
    }

    pub fn from_record(rec: MorphismRecord) -> Result<Self, MorphismError> {
        let source = Arc::new(OrderedTree::try_from(rec.source)?);
        let target = Arc::new(OrderedTree::try_from(rec.target)?);
        Self::from_maps(rec.category, source, target, rec.surj, rec.emb, rec.domain_top)
    }
}

/// On-disk morphism record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismRecord {
    pub category: Category,
    pub source: TreeRecord,
    pub target: TreeRecord,
    pub surj: Vec<VertexId>,
    pub emb: Vec<VertexId>,
    pub domain_top: Option<VertexId>,
}

/// Composes `f: S -> T` with `g: T -> V`, giving `g ∘ f: S -> V`.
///
/// The result is re-validated; a failure there is reported as
/// [`MorphismError::CompositeInvalid`].
pub fn compose(f: &Connection, g: &Connection) -> Result<Connection, MorphismError> {
    let out = compose_unchecked(f, g)?;
    if !out.is_valid() {
        return Err(MorphismError::CompositeInvalid("composite is not a morphism"));
    }
    Ok(out)
}

pub(crate) fn compose_unchecked(f: &Connection, g: &Connection) -> Result<Connection, MorphismError> {
    if f.category != g.category {
        return Err(MorphismError::CategoryMismatch(f.category, g.category));
    }
    if *f.target() != *g.source() {
        return Err(MorphismError::Mismatch("f's target is not g's source"));
    }
    let (s_tree, v_tree) = (f.source().clone(), g.target().clone());
    match f.category {
        Category::Psc => compose_psc_parts(f, g),
        cat => {
            let surj = if cat.has_surjection() {
                f.surj.after(&g.surj)?
            } else {
                TreeMap::inert(v_tree.clone(), s_tree.clone())
            };
            let emb = if cat.has_embedding() {
                g.emb.after(&f.emb)?
            } else {
                TreeMap::inert(s_tree, v_tree)
            };
            Ok(Connection { category: cat, surj, emb })
        }
    }
}

/// `(s, i) ∘ (t, j) = (t ∘ s, i ∘ j)` in `Conn_T`.
pub fn compose_connt(f: &Connection, g: &Connection) -> Result<Connection, MorphismError> {
    if f.category != Category::ConnT || g.category != Category::ConnT {
        return Err(MorphismError::CategoryMismatch(f.category, g.category));
    }
    compose(f, g)
}

// f = (t, j): T^v <-> S and g = (s, i): V^u <-> T give
// (t ∘ s^{i(v)}, i ∘ j) with domain V^{i(v)}.
fn compose_psc_parts(f: &Connection, g: &Connection) -> Result<Connection, MorphismError> {
    let v = f.surj.top();
    let iv = g.emb.map[v];
    let s_restricted = restrict(&g.surj, iv)?;
    let surj = f.surj.after(&s_restricted)?;
    let emb = g.emb.after(&f.emb)?;
    Ok(Connection { category: Category::Psc, surj, emb })
}

/// Composition in the category of partial strong connections.
pub fn compose_psc(f: &PscHom, g: &PscHom) -> Result<PscHom, MorphismError> {
    compose(&f.0, &g.0).map(PscHom)
}

/// A validated partial strong connection `(s, i): T^v <-> S`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PscHom(Connection);

impl fmt::Debug for PscHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl PscHom {
    pub fn identity(tree: Arc<OrderedTree>) -> Self {
        PscHom(Connection::identity(tree, Category::Psc))
    }

    pub fn as_connection(&self) -> &Connection {
        &self.0
    }

    pub fn into_connection(self) -> Connection {
        self.0
    }

    /// The vertex `v` with `s: T^v -> S`.
    pub fn top(&self) -> VertexId {
        self.0.surj.top()
    }

    pub(crate) fn from_connection_unchecked(c: Connection) -> Self {
        debug_assert_eq!(c.category, Category::Psc);
        PscHom(c)
    }
}

impl TryFrom<Connection> for PscHom {
    type Error = MorphismError;

    fn try_from(c: Connection) -> Result<Self, Self::Error> {
        if c.category != Category::Psc {
            return Err(MorphismError::Invalid(c.category, "expected a PSC morphism"));
        }
        if !c.is_valid() {
            return Err(MorphismError::Invalid(Category::Psc, "not a strong partial connection"));
        }
        Ok(PscHom(c))
    }
}

impl std::ops::Deref for PscHom {
    type Target = Connection;

    fn deref(&self) -> &Connection {
        &self.0
    }
}

/// Extends a strong partial connection `T^w <-> S` to a total connection by
/// sending every vertex above `w` to the root of `S`. The embedding is kept.
pub fn complete_strong(p: &PscHom) -> Connection {
    let mut map = p.surj.map.clone();
    map.resize(p.target().len(), 0);
    let surj = TreeMap::from_parts(p.target().clone(), p.source().clone(), map, None);
    let out = Connection { category: Category::ConnT, surj, emb: p.emb.clone() };
    debug_assert!(out.is_valid());
    out
}
