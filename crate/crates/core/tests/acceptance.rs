//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::*;
use treeconn::constructions::doubling_tree;
use treeconn::enumeration::{
    connection_skeletons, enumerate_connections, enumerate_embeddings, enumerate_psc, enumerate_rigid_surjections,
};
use treeconn::functors::{
    delta, delta_signature, gamma, invariant_set, partial_functor, powerset_coloring, AnnotatedPscHom,
};
use treeconn::morphism::{complete_strong, compose, compose_psc, induced_embedding, Connection, PscHom};
use treeconn::search::{
    arrow_check, copy_family, degree_at_witness, verify_certificate, verify_lower_bound, verify_no_ramsey, Route,
    Verdict,
};
use treeconn::tree::{enumerate_trees, OrderedTree};
use treeconn::{Budget, Category, RunConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn within(start: Instant, cap: Duration) -> Result<(), String> {
    ensure(start.elapsed() < cap, || format!("took {:.1?}, limit {cap:?}", start.elapsed()))
}

fn keys(h: &[Connection]) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    h.iter().map(|c| (c.surj().as_slice().to_vec(), c.emb().as_slice().to_vec())).collect()
}

fn big_budget() -> Budget {
    Budget { max_tree_size: 64, max_hom: 5_000_000, ..Budget::default() }
}

fn tree_substrate() -> Outcome {
    let start = Instant::now();
    let counts: Vec<usize> = (1..=7).map(|n| enumerate_trees(n, 8).unwrap().len()).collect();
    ensure(counts == [1, 1, 2, 5, 14, 42, 132], || format!("counts {counts:?}"))?;
    for n in 1..=7 {
        let lib: BTreeSet<_> = enumerate_trees(n, 8).unwrap().iter().map(|t| t.parents().to_vec()).collect();
        ensure(lib == plane_trees(n), || format!("tree set differs from oracle at n = {n}"))?;
    }
    let mut pairs = 0;
    for t in trees_up_to(6) {
        for u in t.vertices() {
            for v in t.vertices() {
                ensure(t.definitional_order(u, v) == u.cmp(&v), || format!("{t}: order of {u}, {v}"))?;
                pairs += 1;
            }
        }
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("counts {counts:?}, {pairs} vertex pairs"))
}

fn galois_laws() -> Outcome {
    let start = Instant::now();
    let (mut checked, budget) = (0, Budget::default());
    for s in trees_up_to(3) {
        for t in trees_up_to(5) {
            let oracle_embs = embeddings(&s, &t);
            for surj in enumerate_rigid_surjections(&t, &s, &budget).unwrap() {
                let i_s = induced_embedding(&surj).unwrap().unwrap();
                let (sm, im) = (surj.as_slice(), i_s.as_slice());
                for x in s.vertices() {
                    ensure(sm[im[x]] == x, || format!("s(i_s({x})) != {x} for {sm:?}"))?;
                }
                for y in t.vertices() {
                    ensure(below(&t, im[sm[y]], y), || format!("i_s(s({y})) not below {y} for {sm:?}"))?;
                }
                let partners: Vec<_> = oracle_embs.iter().filter(|i| galois(&t, sm, i)).collect();
                ensure(partners.len() == 1 && partners[0] == im, || {
                    format!("{s} <- {t}: {sm:?} has Galois partners {partners:?}, i_s = {im:?}")
                })?;
                checked += 1;
            }
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{checked} rigid surjections, 0 violations"))
}

fn agreement_at_branchings() -> Outcome {
    let (mut pairs, budget) = (0, Budget::default());
    for s in trees_up_to(3) {
        for t in trees_up_to(5) {
            let embs = enumerate_embeddings(&s, &t, &budget).unwrap();
            for surj in enumerate_rigid_surjections(&t, &s, &budget).unwrap() {
                let i_s = induced_embedding(&surj).unwrap().unwrap();
                for i in &embs {
                    let (sm, im) = (surj.as_slice(), i.as_slice());
                    if (0..s.len()).any(|x| sm[im[x]] != x) {
                        continue;
                    }
                    pairs += 1;
                    for x in s.vertices().filter(|&x| s.children(x).len() >= 2) {
                        ensure(im[x] == i_s.as_slice()[x], || {
                            format!("{s} -> {t}: s = {sm:?}, i = {im:?} differs from i_s at {x}")
                        })?;
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} sections checked, 0 violations"))
}

fn hom_counts() -> Outcome {
    let budget = Budget::default();
    let c = |a, b, cat| enumerate_connections(&chain(a), &chain(b), cat, &budget).unwrap().len();
    let emb = enumerate_embeddings(&chain(2), &chain(3), &budget).unwrap().len();
    let rs = enumerate_rigid_surjections(&chain(3), &chain(2), &budget).unwrap().len();
    let conn = c(2, 3, Category::ConnT);
    ensure((emb, rs, conn) == (2, 3, 4), || format!("got {emb}, {rs}, {conn}"))?;
    for t in trees_up_to(5) {
        let n = enumerate_psc(&chain(1), &t, &budget).unwrap().len();
        ensure(n == 1, || format!("|Hom_PSC(C1, {t})| = {n}"))?;
    }
    let mut instances = 0;
    for s in trees_up_to(3) {
        for t in trees_up_to(6) {
            let raw = t.len().pow(s.len() as u32) * s.len().pow(t.len() as u32);
            if raw > 1_000_000 {
                continue;
            }
            let e: BTreeSet<_> = enumerate_embeddings(&s, &t, &budget).unwrap().iter().map(|m| m.as_slice().to_vec()).collect();
            ensure(e == embeddings(&s, &t).into_iter().collect(), || format!("embeddings {s} -> {t}"))?;
            let r: BTreeSet<_> =
                enumerate_rigid_surjections(&t, &s, &budget).unwrap().iter().map(|m| m.as_slice().to_vec()).collect();
            ensure(r == rigid_surjections(&t, &s, t.len()).into_iter().collect(), || format!("rigid {t} -> {s}"))?;
            let h = enumerate_connections(&s, &t, Category::ConnT, &budget).unwrap();
            ensure(keys(&h.morphisms) == connections(&s, &t), || format!("Conn_T({s}, {t})"))?;
            let p = enumerate_psc(&s, &t, &budget).unwrap();
            ensure(keys(&p.morphisms) == psc(&s, &t), || format!("PSC({s}, {t})"))?;
            let skel: u128 = connection_skeletons(&s, &t, &budget).unwrap().iter().map(|k| k.multiplicity).sum();
            ensure(skel == h.len() as u128, || format!("skeleton count for Conn_T({s}, {t})"))?;
            instances += 1;
        }
    }
    Ok(format!("2 / 3 / 4 / 1, {instances} instances equal to the filter oracle"))
}

fn doubling_lower_bound() -> Outcome {
    let start = Instant::now();
    let budget = big_budget();
    let mut lines = Vec::new();
    let (mut total, mut cross) = (0u128, 0);
    for s in trees_up_to(4) {
        let d = doubling_tree(&s);
        for (b, w) in d.witnesses() {
            ensure(w.is_valid(), || format!("witness {b:?} of {s} invalid"))?;
            let got = invariant_set(&w).map_err(|e| e.to_string())?.members();
            ensure(got == b, || format!("{s}: invariant set {got:?} for B = {b:?}"))?;
        }
        for v in [d.tree.clone(), doubling_tree(&d.tree).tree] {
            let rep = verify_lower_bound(&s, &v, Route::Factored, &budget).map_err(|e| e.to_string())?;
            ensure(rep.passed(), || format!("{s}, |V| = {}: {:?}", v.len(), rep.violations.first()))?;
            total += rep.outer_count * rep.subsets as u128;
            // second route wherever the Hom-set is small enough to list
            if rep.outer_count <= 300_000 {
                let direct = verify_lower_bound(&s, &v, Route::Direct, &budget).map_err(|e| e.to_string())?;
                ensure(direct.passed() && direct.outer_count == rep.outer_count, || {
                    format!("{s}: direct route disagrees ({} vs {})", direct.outer_count, rep.outer_count)
                })?;
                cross += 1;
            }
        }
        lines.push(format!("{s}:{}", 1 << d.doubled.len()));
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!("{} trees, {total} composites, {cross} instances on both routes", lines.len()))
}

fn no_ramsey() -> Outcome {
    let d = doubling_tree(&chain(2));
    let c = d.witness(&[1]);
    ensure(c.emb().as_slice()[1] == d.doubled[0].first, || "i(1) is not a_1".into())?;
    let mut counts = Vec::new();
    for v in [d.tree.clone(), doubling_tree(&d.tree).tree] {
        let a = verify_no_ramsey(&c, 1, &v, Route::Direct, &big_budget()).map_err(|e| e.to_string())?;
        let b = verify_no_ramsey(&c, 1, &v, Route::Factored, &big_budget()).map_err(|e| e.to_string())?;
        ensure(a.passed() && b.passed() && a.outer_count == b.outer_count, || format!("|V| = {}", v.len()))?;
        counts.push(a.outer_count);
    }
    Ok(format!("outer connections {counts:?}, all separated"))
}

fn degree_at_doubling() -> Outcome {
    let d = doubling_tree(&chain(2));
    let family = copy_family(&chain(2), &d.tree, &d.tree, Category::ConnT, &Budget::default()).map_err(|e| e.to_string())?;
    let cert = degree_at_witness(&family, 2, &RunConfig::default()).map_err(|e| e.to_string())?;
    verify_certificate(&family, &cert)?;
    ensure(cert.k == Some(2), || format!("k = {:?}", cert.k))?;
    // lower bound from the explicit coloring by invariant set
    let explicit: Vec<usize> = family
        .hom_sv
        .iter()
        .map(|c| powerset_coloring(c).map(|b| b.as_index() as usize))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(family.min_colors(&explicit) == 2, || "explicit coloring misses a color".into())?;
    let naive = naive_degree(family.hom_sv.len(), &family.copies, 2);
    ensure(naive == 2, || format!("full enumeration gives {naive}"))?;
    Ok(format!("k = 2 over |Hom(S,V)| = {}, {} copies", family.hom_sv.len(), family.copies.len()))
}

fn functor_suite() -> Outcome {
    let budget = Budget::default();
    let small = trees_up_to(3);
    let mid = trees_up_to(5);
    let (mut delta_pairs, mut partial_pairs, mut sigs, mut gammas) = (0u64, 0u64, 0u64, 0u64);
    for t in &mid {
        let id = Connection::identity(t.clone(), Category::ConnT);
        ensure(delta(&id).unwrap() == PscHom::identity(t.clone()), || format!("delta(Id_{t})"))?;
    }
    let conn = |a: &Arc<OrderedTree>, b: &Arc<OrderedTree>| enumerate_connections(a, b, Category::ConnT, &budget).unwrap();
    let pscs = |a: &Arc<OrderedTree>, b: &Arc<OrderedTree>| enumerate_psc(a, b, &budget).unwrap();
    for s in &small {
        for t in &mid {
            let st = conn(s, t);
            // frankness, with complete_strong as a section
            let image: BTreeSet<_> = st.iter().map(|c| delta(c).unwrap()).map(|p| p.into_connection()).collect::<Vec<_>>().into_iter().map(|c| (c.surj().as_slice().to_vec(), c.emb().as_slice().to_vec())).collect();
            let p_st = pscs(s, t);
            ensure(image == keys(&p_st.morphisms), || format!("delta(Hom({s}, {t})) != Hom_PSC"))?;
            for p in p_st.iter() {
                let p = PscHom::try_from(p.clone()).unwrap();
                let full = complete_strong(&p);
                ensure(full.is_valid() && delta(&full).unwrap() == p, || format!("section fails at {p:?}"))?;
                let sig = delta_signature(&p).map_err(|e| e.to_string())?;
                let inv = invariant_set(&p).map_err(|e| e.to_string())?;
                ensure(sig == inv, || format!("signature {sig} != invariant set {inv} at {p:?}"))?;
                sigs += 1;
                if s.len() >= 2 {
                    let q = partial_functor(&AnnotatedPscHom::new(p.clone())).unwrap();
                    if q.bits == [true] {
                        let g = gamma(&p).map_err(|e| e.to_string())?;
                        let bit = partial_functor(&AnnotatedPscHom::new(g)).unwrap().bits;
                        ensure(bit == [false], || format!("gamma keeps bit 1 at {p:?}"))?;
                        gammas += 1;
                    }
                }
            }
            for v in &mid {
                let tv = conn(t, v);
                for f in st.iter() {
                    let df = delta(f).unwrap();
                    for g in tv.iter() {
                        let gf = compose(f, g).map_err(|e| e.to_string())?;
                        let lhs = delta(&gf).unwrap();
                        let rhs = compose_psc(&df, &delta(g).unwrap()).map_err(|e| e.to_string())?;
                        ensure(lhs == rhs, || format!("delta(g . f) != delta g . delta f for {f:?}, {g:?}"))?;
                        delta_pairs += 1;
                    }
                }
                if s.len() < 2 {
                    continue;
                }
                // outer morphisms of PSC_S: (t, i_t)
                let outer: Vec<PscHom> = pscs(t, v)
                    .morphisms
                    .into_iter()
                    .filter(|c| induced_embedding(c.surj()).unwrap().unwrap() == *c.emb())
                    .map(|c| PscHom::try_from(c).unwrap())
                    .collect();
                for p in p_st.iter() {
                    let p = AnnotatedPscHom::new(PscHom::try_from(p.clone()).unwrap());
                    let dp = partial_functor(&p).unwrap();
                    let id = PscHom::identity(t.clone());
                    ensure(partial_functor(&p.then(&id).unwrap()).unwrap() == dp, || "identity".into())?;
                    for h in &outer {
                        let lhs = partial_functor(&p.then(h).unwrap()).unwrap();
                        let rhs = dp.then(h).unwrap();
                        ensure(lhs == rhs, || format!("partial(h . p) != h . partial(p) for {p:?}, {h:?}"))?;
                        partial_pairs += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{delta_pairs} delta composites, {partial_pairs} partial composites, {sigs} signatures, {gammas} gamma images"
    ))
}

fn classical_threshold() -> Outcome {
    let start = Instant::now();
    let cfg = RunConfig::default();
    let budget = Budget::default();
    let mut parts = Vec::new();
    for (v, expect) in [(6, Verdict::Arrows), (5, Verdict::Fails)] {
        let family = copy_family(&chain(2), &chain(3), &chain(v), Category::IncInj, &budget).map_err(|e| e.to_string())?;
        let cert = arrow_check(&family, 2, &cfg).map_err(|e| e.to_string())?;
        ensure(cert.verdict == expect, || format!("chain({v}): {:?}", cert.verdict))?;
        verify_certificate(&family, &cert)?;
        let naive = naive_degree(family.hom_sv.len(), &family.copies, 2);
        ensure((naive >= 2) == (expect == Verdict::Fails), || format!("full enumeration disagrees at chain({v})"))?;
        parts.push(format!("chain({v}) {:?} after {} nodes", cert.verdict, cert.explored));
    }
    within(start, Duration::from_secs(5))?;
    Ok(parts.join(", "))
}

fn linear_reduction() -> Outcome {
    let budget = big_budget();
    let mut equal = 0;
    for k in 1..=3 {
        for l in 1..=5 {
            let (kk, ll) = (chain(k), chain(l));
            let connt = enumerate_connections(&kk, &ll, Category::ConnT, &budget).unwrap();
            let lstar = enumerate_connections(&kk, &ll, Category::ConnLstar, &budget).unwrap();
            ensure(keys(&connt.morphisms) == keys(&lstar.morphisms), || format!("Conn_T != Conn_L* at {k}, {l}"))?;
            equal += 1;
        }
    }
    let c2 = chain(2);
    let d = doubling_tree(&c2);
    let w = d.witness(&[1]);
    let mut checked = 0u64;
    for f in enumerate_connections(&c2, &c2, Category::ConnLstar, &budget).unwrap().iter() {
        let f = Connection::from_maps(
            Category::ConnT,
            c2.clone(),
            c2.clone(),
            f.surj().as_slice().to_vec(),
            f.emb().as_slice().to_vec(),
            None,
        )
        .map_err(|e| e.to_string())?;
        let through = compose(&f, &w).map_err(|e| e.to_string())?;
        for v in [d.tree.clone(), doubling_tree(&d.tree).tree] {
            for g in enumerate_connections(&d.tree, &v, Category::ConnT, &budget).unwrap().iter() {
                let c = compose(&through, g).map_err(|e| e.to_string())?;
                let got = invariant_set(&c).map_err(|e| e.to_string())?.members();
                ensure(got == [1], || format!("invariant set {got:?} for {c:?}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{equal} chain pairs with equal Hom-sets, {checked} composites with invariant set {{1}}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("tree substrate", tree_substrate),
        ("Galois laws", galois_laws),
        ("agreement at branching vertices", agreement_at_branchings),
        ("Hom-set counts vs filter oracle", hom_counts),
        ("doubling witnesses and lower-bound coloring", doubling_lower_bound),
        ("no arrow with two colors", no_ramsey),
        ("degree at the doubling witness", degree_at_doubling),
        ("functor suite", functor_suite),
        ("classical threshold", classical_threshold),
        ("linear-order reduction", linear_reduction),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.2}s): {detail}", n + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.2}s): {why}", n + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
