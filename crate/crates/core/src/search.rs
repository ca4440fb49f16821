//! Arrow relations and Ramsey degrees at a fixed witness, decided by
//! backtracking over colorings of `Hom(S, V)`.
//!
//! A copy of `T` in `V` is the set `g ∘ Hom(S, T)` for one `g ∈ Hom(T, V)`.
//! `V → (T)^S_r` fails exactly when some `r`-coloring gives every copy at
//! least two colors; the degree at `V` is the largest `m` such that some
//! coloring gives every copy at least `m` colors.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Budget, RunConfig, SearchMode};
use crate::constructions::doubling_tree;
use crate::enumeration::{connection_skeletons, enumerate_connections, HomSet};
use crate::error::{MorphismError, SearchError};
use crate::functors::{induced_or_err, powerset_coloring, two_coloring};
use crate::morphism::{compose, compose_unchecked, Category, Connection, MorphismRecord};
use crate::tree::{OrderedTree, VertexId};

/// `Hom(S, V)` together with the index sets of all copies `g ∘ Hom(S, T)`.
#[derive(Debug, Clone)]
pub struct CopyFamily {
    pub category: Category,
    pub hom_sv: HomSet,
    pub hom_st: HomSet,
    pub hom_tv: HomSet,
    /// `copies[g]`: sorted, deduplicated indices into `hom_sv`.
    pub copies: Vec<Vec<usize>>,
}

pub fn copy_family(
    s: &Arc<OrderedTree>,
    t: &Arc<OrderedTree>,
    v: &Arc<OrderedTree>,
    category: Category,
    budget: &Budget,
) -> Result<CopyFamily, SearchError> {
    let hom_st = enumerate_connections(s, t, category, budget)?;
    if hom_st.is_empty() {
        return Err(SearchError::EmptyHom("S, T"));
    }
    let hom_tv = enumerate_connections(t, v, category, budget)?;
    if hom_tv.is_empty() {
        return Err(SearchError::EmptyHom("T, V"));
    }
    let hom_sv = enumerate_connections(s, v, category, budget)?;
    let index: HashMap<&Connection, usize> = hom_sv.iter().enumerate().map(|(k, c)| (c, k)).collect();
    let copies = hom_tv
        .iter()
        .map(|g| {
            let mut copy = hom_st
                .iter()
                .map(|f| {
                    let c = compose(f, g)?;
                    index
                        .get(&c)
                        .copied()
                        .ok_or(MorphismError::CompositeInvalid("composite missing from Hom(S, V)"))
                })
                .collect::<Result<Vec<usize>, MorphismError>>()?;
            copy.sort_unstable();
            copy.dedup();
            Ok(copy)
        })
        .collect::<Result<Vec<_>, SearchError>>()?;
    Ok(CopyFamily { category, hom_sv, hom_st, hom_tv, copies })
}

impl CopyFamily {
    /// Least number of colors `coloring` puts on a copy.
    pub fn min_colors(&self, coloring: &[usize]) -> usize {
        self.copies
            .iter()
            .map(|copy| distinct(copy.iter().map(|&k| coloring[k])))
            .min()
            .unwrap_or(0)
    }
}

fn distinct(colors: impl Iterator<Item = usize>) -> usize {
    let mut seen: Vec<usize> = colors.collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

/// An assignment of one of `r` colors to every member of a Hom-set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub r: usize,
    pub colors: Vec<usize>,
}

impl Coloring {
    pub fn new(r: usize, colors: Vec<usize>) -> Result<Self, SearchError> {
        if let Some(&c) = colors.iter().find(|&&c| c >= r) {
            return Err(SearchError::Precondition(format!("color {c} is not below r = {r}")));
        }
        Ok(Self { r, colors })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Arrows,
    Fails,
    DegreeAtMostK,
    DegreeExceedsK,
    Unknown,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Arrows | Verdict::DegreeAtMostK => 0,
            Verdict::Fails | Verdict::DegreeExceedsK => 1,
            Verdict::Unknown => 2,
        }
    }
}

/// Outcome of an arrow or degree search.
///
/// For `fails`, `coloring` gives every copy at least two colors. For
/// `degree_exceeds_k` it gives every copy more than `k` colors, and for
/// `degree_at_most_k` (when present) it gives every copy at least `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowCertificate {
    pub verdict: Verdict,
    pub r: usize,
    pub k: Option<usize>,
    pub coloring: Option<Vec<usize>>,
    pub explored: u64,
}

/// Re-checks a certificate against the family by direct counting.
pub fn verify_certificate(family: &CopyFamily, cert: &ArrowCertificate) -> Result<(), String> {
    let need = match (cert.verdict, cert.k) {
        (Verdict::Fails, _) => 2,
        (Verdict::DegreeExceedsK, Some(k)) => k + 1,
        (Verdict::DegreeAtMostK, Some(k)) => k,
        (Verdict::Arrows | Verdict::Unknown, _) => return Ok(()),
        (_, None) => return Err("degree verdict without k".into()),
    };
    let Some(coloring) = &cert.coloring else {
        return if cert.verdict == Verdict::DegreeAtMostK { Ok(()) } else { Err("missing coloring".into()) };
    };
    if coloring.len() != family.hom_sv.len() {
        return Err(format!("coloring has {} entries for {} morphisms", coloring.len(), family.hom_sv.len()));
    }
    if coloring.iter().any(|&c| c >= cert.r) {
        return Err("coloring uses a color outside 0..r".into());
    }
    let got = family.min_colors(coloring);
    if got < need {
        return Err(format!("some copy receives {got} colors, expected at least {need}"));
    }
    Ok(())
}

enum Outcome {
    Found(Vec<usize>),
    Exhausted,
    Aborted,
}

// Finds an r-coloring giving every copy at least `need` distinct colors.
struct Csp<'a> {
    copies: &'a [Vec<usize>],
    occurs: Vec<Vec<usize>>,
    order: Vec<usize>,
    n_vars: usize,
    r: usize,
    need: usize,
}

struct SearchState {
    color: Vec<usize>,
    unassigned: Vec<usize>,
    counts: Vec<u32>,
    distinct: Vec<usize>,
    forbid: Vec<u32>,
    trail: Vec<usize>,
}

struct Limits<'a> {
    explored: &'a AtomicU64,
    stop: &'a AtomicBool,
    max: u64,
    deadline: Option<Instant>,
}

impl Limits<'_> {
    fn tick(&self) -> bool {
        let n = self.explored.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.max {
            self.stop.store(true, Ordering::Relaxed);
        }
        if n.is_multiple_of(4096) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.stop.store(true, Ordering::Relaxed);
        }
        !self.stop.load(Ordering::Relaxed)
    }
}

const NONE: usize = usize::MAX;

impl<'a> Csp<'a> {
    fn new(family: &'a CopyFamily, r: usize, need: usize) -> Self {
        let n_vars = family.hom_sv.len();
        let mut occurs = vec![Vec::new(); n_vars];
        for (g, copy) in family.copies.iter().enumerate() {
            for &k in copy {
                occurs[k].push(g);
            }
        }
        // most constrained first; ties by index
        let mut order: Vec<usize> = (0..n_vars).filter(|&k| !occurs[k].is_empty()).collect();
        order.sort_by_key(|&k| (std::cmp::Reverse(occurs[k].len()), k));
        Self { copies: &family.copies, occurs, order, n_vars, r, need }
    }

    fn fresh_state(&self) -> SearchState {
        SearchState {
            color: vec![NONE; self.n_vars],
            unassigned: self.copies.iter().map(Vec::len).collect(),
            counts: vec![0; self.copies.len() * self.r],
            distinct: vec![0; self.copies.len()],
            forbid: vec![0; self.n_vars * self.r],
            trail: Vec::new(),
        }
    }

    // Assigns and propagates; returns false on a conflict. Always leaves
    // enough on the trail for `unassign` to undo it.
    fn assign(&self, st: &mut SearchState, x: usize, c: usize) -> bool {
        st.color[x] = c;
        let mut ok = true;
        for &g in &self.occurs[x] {
            st.unassigned[g] -= 1;
            let slot = g * self.r + c;
            st.counts[slot] += 1;
            if st.counts[slot] == 1 {
                st.distinct[g] += 1;
            }
            let (d, u) = (st.distinct[g], st.unassigned[g]);
            if d + u < self.need {
                ok = false;
            } else if ok && u == 1 && d + 1 == self.need {
                // the last member must bring a new color
                let last = self.copies[g].iter().copied().find(|&k| st.color[k] == NONE).unwrap();
                for col in 0..self.r {
                    if st.counts[g * self.r + col] > 0 {
                        st.forbid[last * self.r + col] += 1;
                        st.trail.push(last * self.r + col);
                    }
                }
                if (0..self.r).all(|col| st.forbid[last * self.r + col] > 0) {
                    ok = false;
                }
            }
        }
        ok
    }

    fn unassign(&self, st: &mut SearchState, x: usize, trail_mark: usize) {
        let c = st.color[x];
        for &g in &self.occurs[x] {
            st.unassigned[g] += 1;
            let slot = g * self.r + c;
            st.counts[slot] -= 1;
            if st.counts[slot] == 0 {
                st.distinct[g] -= 1;
            }
        }
        for slot in st.trail.drain(trail_mark..) {
            st.forbid[slot] -= 1;
        }
        st.color[x] = NONE;
    }

    // Depth-first search from position `depth` of the variable order;
    // `used` is one more than the largest color used so far.
    fn dfs(&self, st: &mut SearchState, depth: usize, used: usize, limits: &Limits<'_>) -> Outcome {
        if depth == self.order.len() {
            return Outcome::Found(st.color.iter().map(|&c| if c == NONE { 0 } else { c }).collect());
        }
        let x = self.order[depth];
        for c in 0..self.r.min(used + 1) {
            if st.forbid[x * self.r + c] > 0 {
                continue;
            }
            if !limits.tick() {
                return Outcome::Aborted;
            }
            let mark = st.trail.len();
            if self.assign(st, x, c) {
                match self.dfs(st, depth + 1, used.max(c + 1), limits) {
                    Outcome::Exhausted => {}
                    other => {
                        self.unassign(st, x, mark);
                        return other;
                    }
                }
            }
            self.unassign(st, x, mark);
        }
        Outcome::Exhausted
    }

    // Consistent assignments of the first `depth` variables, in search order.
    fn prefixes(&self, depth: usize) -> Vec<Vec<usize>> {
        let depth = depth.min(self.order.len());
        fn go(
            csp: &Csp<'_>,
            st: &mut SearchState,
            depth: usize,
            used: usize,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            let d = cur.len();
            if d == depth {
                out.push(cur.clone());
                return;
            }
            let x = csp.order[d];
            for c in 0..csp.r.min(used + 1) {
                if st.forbid[x * csp.r + c] > 0 {
                    continue;
                }
                let mark = st.trail.len();
                if csp.assign(st, x, c) {
                    cur.push(c);
                    go(csp, st, depth, used.max(c + 1), cur, out);
                    cur.pop();
                }
                csp.unassign(st, x, mark);
            }
        }
        let mut out = Vec::new();
        let mut st = self.fresh_state();
        go(self, &mut st, depth, 0, &mut Vec::new(), &mut out);
        out
    }

    fn solve(&self, mode: SearchMode, budget: &Budget, explored: &AtomicU64) -> Outcome {
        let stop = AtomicBool::new(false);
        let limits = Limits {
            explored,
            stop: &stop,
            max: budget.max_colorings,
            deadline: budget.time_cap().map(|d| Instant::now() + d),
        };
        match mode {
            SearchMode::Canonical => {
                let mut st = self.fresh_state();
                self.dfs(&mut st, 0, 0, &limits)
            }
            SearchMode::Fast => {
                let prefixes = self.prefixes(4);
                let found = prefixes.par_iter().find_map_any(|prefix| {
                    let mut st = self.fresh_state();
                    let mut used = 0;
                    for (d, &c) in prefix.iter().enumerate() {
                        self.assign(&mut st, self.order[d], c);
                        used = used.max(c + 1);
                    }
                    match self.dfs(&mut st, prefix.len(), used, &limits) {
                        Outcome::Found(col) => {
                            stop.store(true, Ordering::Relaxed);
                            Some(col)
                        }
                        _ => None,
                    }
                });
                match found {
                    Some(col) => Outcome::Found(col),
                    None if explored.load(Ordering::Relaxed) > budget.max_colorings || stop.load(Ordering::Relaxed) => {
                        Outcome::Aborted
                    }
                    None => Outcome::Exhausted,
                }
            }
        }
    }
}

/// Decides `V → (T)^S_r` for the family's copies.
pub fn arrow_check(family: &CopyFamily, r: usize, config: &RunConfig) -> Result<ArrowCertificate, SearchError> {
    if r == 0 {
        return Err(SearchError::NoColors);
    }
    let explored = AtomicU64::new(0);
    let csp = Csp::new(family, r, 2);
    let outcome = if r == 1 {
        Outcome::Exhausted
    } else {
        csp.solve(config.mode, &config.budget, &explored)
    };
    let explored = explored.load(Ordering::Relaxed);
    let cert = match outcome {
        Outcome::Found(col) => ArrowCertificate { verdict: Verdict::Fails, r, k: None, coloring: Some(col), explored },
        Outcome::Exhausted => ArrowCertificate { verdict: Verdict::Arrows, r, k: None, coloring: None, explored },
        Outcome::Aborted => ArrowCertificate { verdict: Verdict::Unknown, r, k: None, coloring: None, explored },
    };
    verify_certificate(family, &cert).map_err(SearchError::Precondition)?;
    Ok(cert)
}

/// Builds the copy family and runs [`arrow_check`].
pub fn arrow(
    s: &Arc<OrderedTree>,
    t: &Arc<OrderedTree>,
    v: &Arc<OrderedTree>,
    r: usize,
    category: Category,
    config: &RunConfig,
) -> Result<ArrowCertificate, SearchError> {
    arrow_check(&copy_family(s, t, v, category, &config.budget)?, r, config)
}

/// The degree at the witness: the largest `k` such that some `r`-coloring
/// gives every copy at least `k` colors.
///
/// The certificate carries a coloring attaining `k`; `k` itself is `None`
/// when the search ran out of budget.
pub fn degree_at_witness(family: &CopyFamily, r: usize, config: &RunConfig) -> Result<ArrowCertificate, SearchError> {
    if r == 0 {
        return Err(SearchError::NoColors);
    }
    let explored = AtomicU64::new(0);
    let ceiling = family.copies.iter().map(Vec::len).min().unwrap_or(0).min(r);
    let mut best = vec![0; family.hom_sv.len()];
    let mut k = 1;
    let mut verdict = Verdict::DegreeAtMostK;
    for need in 2..=ceiling {
        match Csp::new(family, r, need).solve(config.mode, &config.budget, &explored) {
            Outcome::Found(col) => {
                best = col;
                k = need;
            }
            Outcome::Exhausted => break,
            Outcome::Aborted => {
                verdict = Verdict::Unknown;
                break;
            }
        }
    }
    let cert = ArrowCertificate {
        verdict,
        r,
        k: (verdict == Verdict::DegreeAtMostK).then_some(k),
        coloring: (verdict == Verdict::DegreeAtMostK).then_some(best),
        explored: explored.load(Ordering::Relaxed),
    };
    verify_certificate(family, &cert).map_err(SearchError::Precondition)?;
    Ok(cert)
}

/// Decides whether the degree at the witness is at most `k`.
pub fn degree_check(family: &CopyFamily, r: usize, k: usize, config: &RunConfig) -> Result<ArrowCertificate, SearchError> {
    if r == 0 {
        return Err(SearchError::NoColors);
    }
    let explored = AtomicU64::new(0);
    let ceiling = family.copies.iter().map(Vec::len).min().unwrap_or(0).min(r);
    let outcome = if k + 1 > ceiling {
        Outcome::Exhausted
    } else {
        Csp::new(family, r, k + 1).solve(config.mode, &config.budget, &explored)
    };
    let explored = explored.load(Ordering::Relaxed);
    let (verdict, coloring) = match outcome {
        Outcome::Found(col) => (Verdict::DegreeExceedsK, Some(col)),
        Outcome::Exhausted => (Verdict::DegreeAtMostK, None),
        Outcome::Aborted => (Verdict::Unknown, None),
    };
    let cert = ArrowCertificate { verdict, r, k: Some(k), coloring, explored };
    verify_certificate(family, &cert).map_err(SearchError::Precondition)?;
    Ok(cert)
}

/// How `Hom_ConnT(T, V)` is traversed by the verifiers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Every connection is enumerated and composed.
    Direct,
    /// Connections are grouped by `(i_t, j)`; two members of each group
    /// are composed and the group size is counted.
    Factored,
    /// Direct when the Hom-set fits the budget, factored otherwise.
    #[default]
    Auto,
}

fn resolve_route(route: Route, t: &Arc<OrderedTree>, v: &Arc<OrderedTree>, budget: &Budget) -> Result<Route, SearchError> {
    Ok(match route {
        Route::Auto => {
            let count = crate::enumeration::count_connections(t, v, budget)?;
            if count <= budget.max_hom as u128 { Route::Direct } else { Route::Factored }
        }
        r => r,
    })
}

// Calls `visit` on each outer connection the route inspects, returning the
// number of connections those stand for.
fn for_each_outer(
    t: &Arc<OrderedTree>,
    v: &Arc<OrderedTree>,
    route: Route,
    budget: &Budget,
    mut visit: impl FnMut(&Connection) -> Result<(), SearchError>,
) -> Result<(u128, usize), SearchError> {
    match route {
        Route::Factored => {
            let skeletons = connection_skeletons(t, v, budget)?;
            let mut covered = 0u128;
            for s in &skeletons {
                visit(&s.representative(t, v, false))?;
                if s.least != s.greatest {
                    visit(&s.representative(t, v, true))?;
                }
                covered += s.multiplicity;
            }
            Ok((covered, skeletons.len()))
        }
        _ => {
            let hom = enumerate_connections(t, v, Category::ConnT, budget)?;
            for g in hom.iter() {
                visit(g)?;
            }
            Ok((hom.len() as u128, hom.len()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBoundViolation {
    pub outer: MorphismRecord,
    pub subset: Vec<VertexId>,
    pub got: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBoundReport {
    pub route: Route,
    /// Size of `Hom_ConnT(T, V)`.
    pub outer_count: u128,
    /// Outer connections (or skeletons) inspected.
    pub inspected: usize,
    pub subsets: usize,
    pub violations: Vec<LowerBoundViolation>,
}

impl LowerBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.outer_count > 0
    }
}

/// With `T = doubling_tree(S)`, checks that every `(t, j) ∈ Hom_ConnT(T, V)`
/// and every `B ⊆ A` give `powerset_coloring((t, j) ∘ (s, i_B)) = B`.
pub fn verify_lower_bound(
    s: &Arc<OrderedTree>,
    v: &Arc<OrderedTree>,
    route: Route,
    budget: &Budget,
) -> Result<LowerBoundReport, SearchError> {
    let d = doubling_tree(s);
    let t = d.tree.clone();
    let witnesses = d.witnesses();
    let route = resolve_route(route, &t, v, budget)?;
    let mut violations = Vec::new();
    let (outer_count, inspected) = for_each_outer(&t, v, route, budget, |g| {
        for (b, w) in &witnesses {
            let c = compose_unchecked(w, g)?;
            let got = powerset_coloring(&c)?.members();
            if got != *b {
                violations.push(LowerBoundViolation { outer: g.to_record(), subset: b.clone(), got });
            }
        }
        Ok(())
    })?;
    if outer_count == 0 {
        return Err(SearchError::EmptyHom("T, V"));
    }
    Ok(LowerBoundReport { route, outer_count, inspected, subsets: witnesses.len(), violations })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoRamseyReport {
    pub route: Route,
    pub outer_count: u128,
    pub inspected: usize,
    /// Outer connections under which the two composites got equal colors.
    pub violations: Vec<MorphismRecord>,
}

impl NoRamseyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.outer_count > 0
    }
}

/// For `(s, i): S -> T` with `i(x) ≠ i_s(x)` and `i_s(x)` having two or more
/// immediate successors, checks that `(u, j) ∘ (s, i_s)` and `(u, j) ∘ (s, i)`
/// get different two-colorings at `x` for every `(u, j) ∈ Hom_ConnT(T, V)`.
pub fn verify_no_ramsey(
    c: &Connection,
    x: VertexId,
    v: &Arc<OrderedTree>,
    route: Route,
    budget: &Budget,
) -> Result<NoRamseyReport, SearchError> {
    if c.category() != Category::ConnT || !c.is_valid() {
        return Err(SearchError::Precondition("(s, i) must be a valid tree connection".into()));
    }
    let (s_tree, t) = (c.source().clone(), c.target().clone());
    s_tree.check_vertex(x).map_err(MorphismError::from)?;
    let i_s = induced_or_err(c)?;
    let ix = c.emb().as_slice()[x];
    let isx = i_s.as_slice()[x];
    if ix == isx {
        return Err(SearchError::Precondition(format!("i({x}) = i_s({x}) = {ix}")));
    }
    if t.children(isx).len() < 2 {
        return Err(SearchError::Precondition(format!(
            "i_s({x}) = {isx} has {} immediate successors, needs at least 2",
            t.children(isx).len()
        )));
    }
    let plain = Connection::new(Category::ConnT, c.surj().clone(), i_s)?;
    let route = resolve_route(route, &t, v, budget)?;
    let mut violations = Vec::new();
    let (outer_count, inspected) = for_each_outer(&t, v, route, budget, |g| {
        let zero = two_coloring(x, &compose_unchecked(&plain, g)?)?;
        let one = two_coloring(x, &compose_unchecked(c, g)?)?;
        if (zero, one) != (0, 1) {
            violations.push(g.to_record());
        }
        Ok(())
    })?;
    if outer_count == 0 {
        return Err(SearchError::EmptyHom("T, V"));
    }
    Ok(NoRamseyReport { route, outer_count, inspected, violations })
}
