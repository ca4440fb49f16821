//! Exhaustive, deterministic generation of Hom-sets.
//!
//! Every generator backtracks over vertex images in preorder and prunes on
//! the defining conditions as early as they can be decided; the survivors are
//! re-checked with the validity predicates of [`crate::morphism`].

use std::sync::Arc;

use rayon::prelude::*;

use crate::config::Budget;
use crate::error::EnumError;
use crate::morphism::{
    induced_embedding, is_connection, linear_condition, Category, Connection, TreeMap,
};
use crate::tree::{OrderedTree, VertexId};

/// All morphisms `source -> target` of one category, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSet {
    pub category: Category,
    pub source: Arc<OrderedTree>,
    pub target: Arc<OrderedTree>,
    pub morphisms: Vec<Connection>,
}

impl HomSet {
    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Connection> {
        self.morphisms.iter()
    }
}

fn check_size(t: &OrderedTree, budget: &Budget) -> Result<(), EnumError> {
    if t.len() > budget.max_tree_size {
        return Err(EnumError::TreeBudget { size: t.len(), max: budget.max_tree_size });
    }
    Ok(())
}

fn push_checked<T>(out: &mut Vec<T>, item: T, budget: &Budget) -> Result<(), EnumError> {
    if out.len() >= budget.max_hom {
        return Err(EnumError::HomBudget { max: budget.max_hom });
    }
    out.push(item);
    Ok(())
}

/// All Deuber embeddings `small -> big`, as raw image sequences in
/// lexicographic order.
pub fn embedding_maps(
    small: &OrderedTree,
    big: &OrderedTree,
    budget: &Budget,
) -> Result<Vec<Vec<VertexId>>, EnumError> {
    check_size(big, budget)?;
    let mut out = Vec::new();
    if small.len() > big.len() {
        return Ok(out);
    }
    let mut img = vec![0];
    extend_embedding(small, big, &mut img, &mut out, budget)?;
    Ok(out)
}

fn extend_embedding(
    small: &OrderedTree,
    big: &OrderedTree,
    img: &mut Vec<VertexId>,
    out: &mut Vec<Vec<VertexId>>,
    budget: &Budget,
) -> Result<(), EnumError> {
    let x = img.len();
    if x == small.len() {
        return push_checked(out, img.clone(), budget);
    }
    let p = small.parent(x).unwrap();
    let anchor = img[p];
    // images of the remaining vertices need room after the candidate
    let remaining = small.len() - x - 1;
    let lo = img[x - 1] + 1;
    let hi = big.subtree_end(anchor);
    for y in lo..hi {
        if y == anchor || big.len() - y - 1 < remaining {
            continue;
        }
        if (0..x).all(|u| img[small.meet(u, x)] == big.meet(img[u], y)) {
            img.push(y);
            extend_embedding(small, big, img, out, budget)?;
            img.pop();
        }
    }
    Ok(())
}

/// All rigid surjections `big -> small` defined on `big^top` (all of `big`
/// when `top` is `None`), in lexicographic order.
pub fn rigid_surjection_maps(
    big: &OrderedTree,
    small: &OrderedTree,
    top: Option<VertexId>,
    budget: &Budget,
) -> Result<Vec<Vec<VertexId>>, EnumError> {
    check_size(big, budget)?;
    let domain = top.map_or(big.len(), |v| v + 1);
    let mut out = Vec::new();
    if small.len() > domain {
        return Ok(out);
    }
    let mut state = SurjState {
        big,
        small,
        domain,
        map: Vec::with_capacity(domain),
        first: Vec::with_capacity(small.len()),
        upper: None,
    };
    state.extend(&mut out, budget)?;
    Ok(out)
}

// The induced embedding of a rigid surjection sends x to the first (in
// preorder) preimage of x, so new values appear in increasing order, each
// first occurrence must sit above the first occurrence of its parent, and
// every later preimage of x must sit above that first occurrence.
struct SurjState<'a> {
    big: &'a OrderedTree,
    small: &'a OrderedTree,
    domain: usize,
    map: Vec<VertexId>,
    first: Vec<VertexId>,
    // optional per-vertex cap on values, from condition (a)
    upper: Option<&'a [VertexId]>,
}

impl SurjState<'_> {
    fn extend(&mut self, out: &mut Vec<Vec<VertexId>>, budget: &Budget) -> Result<(), EnumError> {
        let y = self.map.len();
        if y == self.domain {
            if self.first.len() == self.small.len() {
                push_checked(out, self.map.clone(), budget)?;
            }
            return Ok(());
        }
        let unhit = self.small.len() - self.first.len();
        if self.domain - y < unhit {
            return Ok(());
        }
        let cap = self.upper.map_or(usize::MAX, |u| u[y]);
        for x in 0..self.first.len().min(cap.saturating_add(1)) {
            if self.big.is_ancestor(self.first[x], y) {
                self.map.push(x);
                self.extend(out, budget)?;
                self.map.pop();
            }
        }
        let x = self.first.len();
        if x < self.small.len() && x <= cap {
            let ok = x == 0
                || self
                    .big
                    .is_ancestor(self.first[self.small.parent(x).unwrap()], y);
            // the very first vertex must be sent to the root of `small`
            if ok && (y > 0 || x == 0) {
                self.first.push(y);
                self.map.push(x);
                self.extend(out, budget)?;
                self.map.pop();
                self.first.pop();
            }
        }
        Ok(())
    }
}

/// Embeddings `s -> t`.
pub fn enumerate_embeddings(
    s: &Arc<OrderedTree>,
    t: &Arc<OrderedTree>,
    budget: &Budget,
) -> Result<Vec<TreeMap>, EnumError> {
    Ok(embedding_maps(s, t, budget)?
        .into_iter()
        .map(|m| TreeMap::from_parts(s.clone(), t.clone(), m, None))
        .filter(crate::morphism::is_embedding)
        .collect())
}

/// Rigid surjections `t -> s`.
pub fn enumerate_rigid_surjections(
    t: &Arc<OrderedTree>,
    s: &Arc<OrderedTree>,
    budget: &Budget,
) -> Result<Vec<TreeMap>, EnumError> {
    Ok(rigid_surjection_maps(t, s, None, budget)?
        .into_iter()
        .map(|m| TreeMap::from_parts(t.clone(), s.clone(), m, None))
        .filter(|m| matches!(induced_embedding(m), Ok(Some(_))))
        .collect())
}

/// Strictly increasing maps `s -> t` with respect to the tree orders.
fn increasing_injections(s: usize, t: usize, budget: &Budget) -> Result<Vec<Vec<VertexId>>, EnumError> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(s);
    fn go(
        s: usize,
        t: usize,
        cur: &mut Vec<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
        budget: &Budget,
    ) -> Result<(), EnumError> {
        if cur.len() == s {
            return push_checked(out, cur.clone(), budget);
        }
        let lo = cur.last().map_or(0, |&y| y + 1);
        for y in lo..=t - (s - cur.len()) {
            cur.push(y);
            go(s, t, cur, out, budget)?;
            cur.pop();
        }
        Ok(())
    }
    if s <= t {
        go(s, t, &mut cur, &mut out, budget)?;
    }
    Ok(out)
}

/// Caps from condition (a): `cap[y] = min { x : y < i(x) }`, or `usize::MAX`.
fn caps_from_embedding(domain: usize, emb: &[VertexId]) -> Vec<VertexId> {
    let mut cap = vec![usize::MAX; domain];
    for (x, &ix) in emb.iter().enumerate().rev() {
        for c in cap.iter_mut().take(ix.min(domain)) {
            *c = x;
        }
    }
    cap
}

/// All morphisms `s -> t` of `category`, sorted by (surjection, embedding).
pub fn enumerate_connections(
    s: &Arc<OrderedTree>,
    t: &Arc<OrderedTree>,
    category: Category,
    budget: &Budget,
) -> Result<HomSet, EnumError> {
    check_size(t, budget)?;
    let mut morphisms = Vec::new();
    match category {
        Category::IncInj => {
            for m in increasing_injections(s.len(), t.len(), budget)? {
                let emb = TreeMap::from_parts(s.clone(), t.clone(), m, None);
                let surj = TreeMap::inert(t.clone(), s.clone());
                push_checked(&mut morphisms, Connection::from_parts(category, surj, emb), budget)?;
            }
        }
        Category::RigidOnly => {
            for surj in enumerate_rigid_surjections(t, s, budget)? {
                let emb = TreeMap::inert(s.clone(), t.clone());
                push_checked(&mut morphisms, Connection::from_parts(category, surj, emb), budget)?;
            }
        }
        Category::Psc => return enumerate_psc(s, t, budget),
        Category::ConnL | Category::ConnLstar => {
            if s.is_chain() && t.is_chain() {
                for emb in increasing_injections(s.len(), t.len(), budget)? {
                    if category == Category::ConnLstar && emb[0] != 0 {
                        continue;
                    }
                    let caps = caps_from_embedding(t.len(), &emb);
                    for surj in linear_surjections_under(t.len(), s.len(), &emb, &caps) {
                        let c = Connection::from_parts(
                            category,
                            TreeMap::from_parts(t.clone(), s.clone(), surj, None),
                            TreeMap::from_parts(s.clone(), t.clone(), emb.clone(), None),
                        );
                        push_checked(&mut morphisms, c, budget)?;
                    }
                }
            }
        }
        Category::ConnT => {
            let embs = embedding_maps(s, t, budget)?;
            let chunks: Vec<Result<Vec<Connection>, EnumError>> = embs
                .par_iter()
                .map(|emb| connections_over(s, t, emb, None, category, budget))
                .collect();
            for chunk in chunks {
                for c in chunk? {
                    push_checked(&mut morphisms, c, budget)?;
                }
            }
        }
    }
    morphisms.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    debug_assert!(morphisms.iter().all(|m| is_connection(m.surj(), m.emb(), category).unwrap_or(false)));
    Ok(HomSet { category, source: s.clone(), target: t.clone(), morphisms })
}

// Surjections of a chain of length `big` onto a chain of length `small`
// satisfying condition (a) for `emb`.
fn linear_surjections_under(
    big: usize,
    small: usize,
    emb: &[VertexId],
    caps: &[VertexId],
) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(big);
    fn go(
        big: usize,
        small: usize,
        emb: &[VertexId],
        caps: &[VertexId],
        cur: &mut Vec<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        let y = cur.len();
        if y == big {
            if linear_condition(cur, emb) {
                out.push(cur.clone());
            }
            return;
        }
        let forced = emb.iter().position(|&e| e == y);
        let hi = caps[y].min(small - 1);
        for x in 0..=hi {
            if forced.is_some_and(|f| f != x) {
                continue;
            }
            cur.push(x);
            go(big, small, emb, caps, cur, out);
            cur.pop();
        }
    }
    go(big, small, emb, caps, &mut cur, &mut out);
    out
}

// Connections with a fixed embedding, optionally with the surjection only
// defined on `t^top`.
fn connections_over(
    s: &Arc<OrderedTree>,
    t: &Arc<OrderedTree>,
    emb: &[VertexId],
    top: Option<VertexId>,
    category: Category,
    budget: &Budget,
) -> Result<Vec<Connection>, EnumError> {
    let domain = top.map_or(t.len(), |v| v + 1);
    let caps = caps_from_embedding(domain, emb);
    let mut maps = Vec::new();
    let mut state = SurjState {
        big: t,
        small: s,
        domain,
        map: Vec::with_capacity(domain),
        first: Vec::with_capacity(s.len()),
        upper: Some(&caps),
    };
    state.extend(&mut maps, budget)?;
    let emb_map = TreeMap::from_parts(s.clone(), t.clone(), emb.to_vec(), None);
    let mut out = Vec::new();
    for m in maps {
        if !linear_condition(&m, emb) {
            continue;
        }
        let surj = TreeMap::from_parts(t.clone(), s.clone(), m, top);
        if matches!(induced_embedding(&surj), Ok(Some(_))) {
            out.push(Connection::from_parts(category, surj, emb_map.clone()));
        }
    }
    Ok(out)
}

/// `Hom_PSC(s, t)`: for each `v`, the strong connections `t^v <-> s`.
pub fn enumerate_psc(
    s: &Arc<OrderedTree>,
    t: &Arc<OrderedTree>,
    budget: &Budget,
) -> Result<HomSet, EnumError> {
    check_size(t, budget)?;
    let mut morphisms = Vec::new();
    for emb in embedding_maps(s, t, budget)? {
        // strongness fixes the domain: v = i(largest leaf of s)
        let v = emb[s.last()];
        for c in connections_over(s, t, &emb, Some(v), Category::Psc, budget)? {
            push_checked(&mut morphisms, c, budget)?;
        }
    }
    morphisms.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(HomSet { category: Category::Psc, source: s.clone(), target: t.clone(), morphisms })
}

/// A class of tree connections `(t, j): T -> V` sharing the induced
/// embedding `e = i_t` and the embedding `j`.
///
/// Given `(e, j)`, the admissible values of `t(y)` are decided vertex by
/// vertex: `t(e(x)) = x`, `t(j(x)) = x`, `e(t(y)) ⊑ y`, and `t(y) <= x`
/// whenever `y < j(x)`. So the class is a product of per-vertex choices and
/// `multiplicity` is the product of their sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    pub e: Vec<VertexId>,
    pub j: Vec<VertexId>,
    pub multiplicity: u128,
    /// The member taking the least admissible value at every vertex.
    pub least: Vec<VertexId>,
    /// The member taking the greatest admissible value at every vertex.
    pub greatest: Vec<VertexId>,
}

impl Skeleton {
    pub fn representative(&self, t: &Arc<OrderedTree>, v: &Arc<OrderedTree>, greatest: bool) -> Connection {
        let surj = if greatest { &self.greatest } else { &self.least };
        Connection::from_parts(
            Category::ConnT,
            TreeMap::from_parts(v.clone(), t.clone(), surj.clone(), None),
            TreeMap::from_parts(t.clone(), v.clone(), self.j.clone(), None),
        )
    }
}

/// `Hom_ConnT(t, v)` grouped into [`Skeleton`]s, ordered by `(e, j)`.
pub fn connection_skeletons(
    t: &Arc<OrderedTree>,
    v: &Arc<OrderedTree>,
    budget: &Budget,
) -> Result<Vec<Skeleton>, EnumError> {
    check_size(v, budget)?;
    let embs = embedding_maps(t, v, budget)?;
    let mut out = Vec::new();
    let mut ancestors: Vec<Vec<VertexId>> = vec![Vec::new(); v.len()];
    let mut forced: Vec<Option<VertexId>> = vec![None; v.len()];
    for e in &embs {
        // ancestors[y] = { x : e(x) ⊑ y }, increasing
        for (y, a) in ancestors.iter_mut().enumerate() {
            a.clear();
            a.extend(t.vertices().filter(|&x| v.is_ancestor(e[x], y)));
        }
        'pairs: for j in &embs {
            forced.iter_mut().for_each(|f| *f = None);
            for x in t.vertices() {
                forced[e[x]] = Some(x);
            }
            for x in t.vertices() {
                match forced[j[x]] {
                    Some(f) if f != x => continue 'pairs,
                    _ => forced[j[x]] = Some(x),
                }
            }
            let caps = caps_from_embedding(v.len(), j);
            let mut multiplicity: u128 = 1;
            let mut least = Vec::with_capacity(v.len());
            let mut greatest = Vec::with_capacity(v.len());
            for y in v.vertices() {
                let admissible = |x: &&VertexId| **x <= caps[y] && forced[y].is_none_or(|f| f == **x);
                let mut it = ancestors[y].iter().filter(admissible);
                let Some(&lo) = it.next() else { continue 'pairs };
                let (hi, count) = it.fold((lo, 1u128), |(_, c), &x| (x, c + 1));
                multiplicity *= count;
                least.push(lo);
                greatest.push(hi);
            }
            push_checked(
                &mut out,
                Skeleton { e: e.clone(), j: j.clone(), multiplicity, least, greatest },
                budget,
            )?;
        }
    }
    Ok(out)
}

/// `|Hom_ConnT(t, v)|`, computed from the skeletons.
pub fn count_connections(t: &Arc<OrderedTree>, v: &Arc<OrderedTree>, budget: &Budget) -> Result<u128, EnumError> {
    Ok(connection_skeletons(t, v, budget)?.iter().map(|s| s.multiplicity).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(k: usize) -> Arc<OrderedTree> {
        Arc::new(OrderedTree::chain(k).unwrap())
    }

    fn tree(s: &str) -> Arc<OrderedTree> {
        Arc::new(OrderedTree::parse(s).unwrap())
    }

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn embedding_examples() {
        let cherry = tree("(()())");
        assert!(enumerate_embeddings(&cherry, &cherry, &b())
            .unwrap()
            .contains(&TreeMap::identity(cherry.clone())));
        let e = enumerate_embeddings(&chain(2), &chain(3), &b()).unwrap();
        let maps: Vec<_> = e.iter().map(|m| m.as_slice().to_vec()).collect();
        assert_eq!(maps, vec![vec![0, 1], vec![0, 2]]);
        let e = enumerate_embeddings(&chain(2), &cherry, &b()).unwrap();
        let maps: Vec<_> = e.iter().map(|m| m.as_slice().to_vec()).collect();
        assert_eq!(maps, vec![vec![0, 1], vec![0, 2]]);
        assert!(enumerate_embeddings(&chain(3), &chain(2), &b()).unwrap().is_empty());
    }

    #[test]
    fn rigid_surjection_examples() {
        let rs = enumerate_rigid_surjections(&chain(3), &chain(2), &b()).unwrap();
        let maps: Vec<_> = rs.iter().map(|m| m.as_slice().to_vec()).collect();
        assert_eq!(maps, vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1]]);
        let rs = enumerate_rigid_surjections(&chain(2), &chain(2), &b()).unwrap();
        assert_eq!(rs, vec![TreeMap::identity(chain(2))]);
    }

    #[test]
    fn connection_examples() {
        let h = enumerate_connections(&chain(2), &chain(3), Category::ConnT, &b()).unwrap();
        let pairs: Vec<_> = h
            .iter()
            .map(|c| (c.surj().as_slice().to_vec(), c.emb().as_slice().to_vec()))
            .collect();
        assert_eq!(
            pairs,
            vec![
                (vec![0, 0, 1], vec![0, 2]),
                (vec![0, 1, 0], vec![0, 1]),
                (vec![0, 1, 1], vec![0, 1]),
                (vec![0, 1, 1], vec![0, 2]),
            ]
        );
        let one = chain(1);
        let cherry = tree("(()())");
        let h = enumerate_connections(&one, &cherry, Category::ConnT, &b()).unwrap();
        assert!(h.iter().all(|c| c.emb().as_slice() == [0]));
        assert_eq!(h.len(), 1);
    }

    #[test]
    fn doubling_of_chain_two_connections() {
        let d = tree("((()()))");
        let h = enumerate_connections(&chain(2), &d, Category::ConnT, &b()).unwrap();
        let has = |s: &[usize], i: &[usize]| h.iter().any(|c| c.surj().as_slice() == s && c.emb().as_slice() == i);
        assert!(has(&[0, 1, 1, 1], &[0, 1]));
        assert!(has(&[0, 1, 1, 1], &[0, 2]));
        assert_eq!(h.len(), 10);
    }

    #[test]
    fn skeletons_match_direct_enumeration() {
        for (t, v) in [(chain(2), tree("((()()))")), (tree("(()())"), tree("((())())")), (chain(3), chain(4))] {
            let direct = enumerate_connections(&t, &v, Category::ConnT, &b()).unwrap();
            let skel = connection_skeletons(&t, &v, &b()).unwrap();
            assert_eq!(skel.iter().map(|s| s.multiplicity).sum::<u128>(), direct.len() as u128);
            for s in &skel {
                for greatest in [false, true] {
                    let c = s.representative(&t, &v, greatest);
                    assert!(c.is_valid());
                    assert_eq!(induced_embedding(c.surj()).unwrap().unwrap().as_slice(), &s.e[..]);
                }
            }
        }
    }

    #[test]
    fn psc_examples() {
        for t in [chain(1), chain(3), tree("(()())"), tree("((())())")] {
            assert_eq!(enumerate_psc(&chain(1), &t, &b()).unwrap().len(), 1);
        }
        let h = enumerate_psc(&chain(2), &chain(3), &b()).unwrap();
        for c in h.iter() {
            assert_eq!(c.emb().apply(1), c.surj().top());
        }
        let tops: Vec<_> = h.iter().map(|c| c.surj().top()).collect();
        assert!(tops.contains(&1) && tops.contains(&2));
        let cherry = tree("(()())");
        let h = enumerate_psc(&cherry, &cherry, &b()).unwrap();
        assert!(h.morphisms.contains(&Connection::identity(cherry.clone(), Category::Psc)));
    }

    #[test]
    fn increasing_injection_counts() {
        let h = enumerate_connections(&chain(2), &chain(5), Category::IncInj, &b()).unwrap();
        assert_eq!(h.len(), 10);
        let h = enumerate_connections(&chain(2), &chain(3), Category::RigidOnly, &b()).unwrap();
        assert_eq!(h.len(), 3);
        let h = enumerate_connections(&chain(3), &chain(2), Category::RigidOnly, &b()).unwrap();
        assert_eq!(h.len(), 0);
    }

    #[test]
    fn conn_lstar_matches_connt_on_chains() {
        for (k, l) in [(1, 3), (2, 3), (2, 4), (3, 5)] {
            let a = enumerate_connections(&chain(k), &chain(l), Category::ConnT, &b()).unwrap();
            let c = enumerate_connections(&chain(k), &chain(l), Category::ConnLstar, &b()).unwrap();
            let key = |h: &HomSet| h.iter().map(|m| (m.surj().as_slice().to_vec(), m.emb().as_slice().to_vec())).collect::<Vec<_>>();
            assert_eq!(key(&a), key(&c));
        }
    }

    #[test]
    fn budgets_are_enforced() {
        let tight = Budget { max_hom: 2, ..Budget::default() };
        assert!(matches!(
            enumerate_connections(&chain(2), &chain(3), Category::ConnT, &tight),
            Err(EnumError::HomBudget { max: 2 })
        ));
        let small = Budget { max_tree_size: 2, ..Budget::default() };
        assert!(matches!(
            enumerate_connections(&chain(2), &chain(3), Category::ConnT, &small),
            Err(EnumError::TreeBudget { size: 3, max: 2 })
        ));
    }
}
