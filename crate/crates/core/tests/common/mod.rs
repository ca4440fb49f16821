//! Brute-force oracles. They share no code with the generators beyond the
//! tree type itself: orders come from `definitional_order`, meets from
//! explicit ancestor lists, and Hom-sets from filtering every raw map.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use treeconn::tree::{OrderedTree, VertexId};

pub fn chain(k: usize) -> Arc<OrderedTree> {
    Arc::new(OrderedTree::chain(k).unwrap())
}

pub fn tree(s: &str) -> Arc<OrderedTree> {
    Arc::new(OrderedTree::parse(s).unwrap())
}

/// All trees with `1..=max` vertices, in the library's order.
pub fn trees_up_to(max: usize) -> Vec<Arc<OrderedTree>> {
    (1..=max)
        .flat_map(|n| treeconn::tree::enumerate_trees(n, 8).unwrap())
        .map(Arc::new)
        .collect()
}

/// Every map `{0..from} -> {0..to}`, lexicographically.
pub fn all_maps(from: usize, to: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..from {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..to).map(move |y| {
                    let mut m = m.clone();
                    m.push(y);
                    m
                })
            })
            .collect();
    }
    out
}

/// Predecessors of `v`, root first, `v` last.
pub fn ancestors(t: &OrderedTree, v: VertexId) -> Vec<VertexId> {
    let mut chain = vec![v];
    let mut cur = v;
    while let Some(p) = t.parent(cur) {
        chain.push(p);
        cur = p;
    }
    chain.reverse();
    chain
}

pub fn below(t: &OrderedTree, u: VertexId, v: VertexId) -> bool {
    ancestors(t, v).contains(&u)
}

pub fn meet(t: &OrderedTree, u: VertexId, v: VertexId) -> VertexId {
    let (a, b) = (ancestors(t, u), ancestors(t, v));
    *a.iter().zip(&b).take_while(|(x, y)| x == y).last().unwrap().0
}

fn lt(t: &OrderedTree, u: VertexId, v: VertexId) -> bool {
    t.definitional_order(u, v) == Ordering::Less
}

pub fn is_embedding(s: &OrderedTree, t: &OrderedTree, i: &[usize]) -> bool {
    if i[0] != 0 {
        return false;
    }
    for x in 0..s.len() {
        for y in 0..s.len() {
            if lt(s, x, y) && !lt(t, i[x], i[y]) {
                return false;
            }
            if i[meet(s, x, y)] != meet(t, i[x], i[y]) {
                return false;
            }
        }
    }
    true
}

pub fn embeddings(s: &OrderedTree, t: &OrderedTree) -> Vec<Vec<usize>> {
    all_maps(s.len(), t.len()).into_iter().filter(|i| is_embedding(s, t, i)).collect()
}

/// Galois laws for `s: big -> small` (on `0..s.len()`) and `i: small -> big`.
pub fn galois(big: &OrderedTree, s: &[usize], i: &[usize]) -> bool {
    i.iter().enumerate().all(|(x, &ix)| ix < s.len() && s[ix] == x)
        && s.iter().enumerate().all(|(y, &x)| below(big, i[x], y))
}

/// Rigid surjections `big^top -> small`, found by searching every embedding
/// for a Galois partner.
pub fn rigid_surjections(big: &OrderedTree, small: &OrderedTree, domain: usize) -> Vec<Vec<usize>> {
    let embs = embeddings(small, big);
    all_maps(domain, small.len())
        .into_iter()
        .filter(|s| (0..small.len()).all(|x| s.contains(&x)))
        .filter(|s| embs.iter().any(|i| galois(big, s, i)))
        .collect()
}

/// `s(i(x)) = x`, and `s(y) <= x` for all `y < i(x)`, with `<` read from the
/// definitional order.
pub fn linear(big: &OrderedTree, small: &OrderedTree, s: &[usize], i: &[usize]) -> bool {
    (0..small.len()).all(|x| {
        i[x] < s.len()
            && s[i[x]] == x
            && (0..s.len()).all(|y| !lt(big, y, i[x]) || !lt(small, x, s[y]))
    })
}

/// `Hom_ConnT(s, t)` as sorted `(surj, emb)` pairs.
pub fn connections(s: &OrderedTree, t: &OrderedTree) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let embs = embeddings(s, t);
    let surjs = rigid_surjections(t, s, t.len());
    let mut out = BTreeSet::new();
    for sj in &surjs {
        for i in &embs {
            if linear(t, s, sj, i) {
                out.insert((sj.clone(), i.clone()));
            }
        }
    }
    out
}

/// `Hom_PSC(s, t)` as `(surj on t^v, emb)` pairs.
pub fn psc(s: &OrderedTree, t: &OrderedTree) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let embs = embeddings(s, t);
    let mut out = BTreeSet::new();
    for v in 0..t.len() {
        let prefix = t.initial_subtree(v).unwrap();
        for sj in rigid_surjections(&prefix, s, v + 1) {
            for i in embs.iter().filter(|i| i[s.len() - 1] == v) {
                if linear(&prefix, s, &sj, i) {
                    out.insert((sj.clone(), i.clone()));
                }
            }
        }
    }
    out
}

/// `max_χ min_copy |χ(copy)|` over all `r^n` colorings.
pub fn naive_degree(n: usize, copies: &[Vec<usize>], r: usize) -> usize {
    let mut best = 0;
    let mut col = vec![0usize; n];
    loop {
        let worst = copies
            .iter()
            .map(|c| c.iter().map(|&k| col[k]).collect::<BTreeSet<_>>().len())
            .min()
            .unwrap();
        best = best.max(worst);
        // odometer
        let mut k = 0;
        while k < n && col[k] == r - 1 {
            col[k] = 0;
            k += 1;
        }
        if k == n {
            return best;
        }
        col[k] += 1;
    }
}

/// Plane trees with `n` vertices, from all increasing parent sequences
/// canonicalised by sorting children by label and renumbering in preorder.
pub fn plane_trees(n: usize) -> BTreeSet<Vec<Option<usize>>> {
    let mut seqs: Vec<Vec<usize>> = vec![vec![]];
    for v in 1..n {
        seqs = seqs
            .into_iter()
            .flat_map(|p| {
                (0..v).map(move |q| {
                    let mut p = p.clone();
                    p.push(q);
                    p
                })
            })
            .collect();
    }
    let mut out = BTreeSet::new();
    for p in seqs {
        let mut children = vec![Vec::new(); n];
        for (v, &q) in p.iter().enumerate() {
            children[q].push(v + 1);
        }
        let mut label = vec![0; n];
        let mut order = Vec::new();
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            label[v] = order.len();
            order.push(v);
            stack.extend(children[v].iter().rev());
        }
        let mut parent = vec![None; n];
        for v in 1..n {
            parent[label[v]] = Some(label[p[v - 1]]);
        }
        out.insert(parent);
    }
    out
}
