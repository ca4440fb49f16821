//! Exhaustive coloring searches: the classical threshold for increasing
//! injections and the degree at the doubling witness.

use std::sync::Arc;

use treeconn::constructions::doubling_tree;
use treeconn::search::{arrow_check, copy_family, degree_at_witness, verify_certificate};
use treeconn::tree::OrderedTree;
use treeconn::{Budget, Category, RunConfig, SearchMode};

fn chain(k: usize) -> Arc<OrderedTree> {
    Arc::new(OrderedTree::chain(k).unwrap())
}

fn main() {
    let budget = Budget::default();
    for mode in [SearchMode::Canonical, SearchMode::Fast] {
        let cfg = RunConfig { mode, ..RunConfig::default() };
        for n in 4..=6 {
            let fam = copy_family(&chain(2), &chain(3), &chain(n), Category::IncInj, &budget).unwrap();
            let cert = arrow_check(&fam, 2, &cfg).unwrap();
            verify_certificate(&fam, &cert).unwrap();
            println!("{mode:?} chain({n}): {:?}, coloring {:?}", cert.verdict, cert.coloring);
        }
    }

    let d = doubling_tree(&chain(2));
    let fam = copy_family(&chain(2), &d.tree, &d.tree, Category::ConnT, &budget).unwrap();
    let cert = degree_at_witness(&fam, 2, &RunConfig::default()).unwrap();
    println!("degree at {}: {:?}", d.tree, cert.k);
}
