//! Shows that two colors defeat every witness for S = chain(2): the coloring
//! by "embedding differs from the induced one at x" separates two copies.

use treeconn::constructions::doubling_tree;
use treeconn::search::{verify_lower_bound, verify_no_ramsey, Route};
use treeconn::tree::OrderedTree;
use treeconn::Budget;

fn main() {
    let s = std::sync::Arc::new(OrderedTree::chain(2).unwrap());
    let d = doubling_tree(&s);
    let c = d.witness(&[1]);
    let budget = Budget::default();
    for v in [d.tree.clone(), doubling_tree(&d.tree).tree] {
        let r = verify_no_ramsey(&c, 1, &v, Route::Auto, &budget).unwrap();
        println!("V = {v}: {} outer connections, passed = {}", r.outer_count, r.passed());
        let lb = verify_lower_bound(&s, &v, Route::Factored, &budget).unwrap();
        println!("  lower-bound coloring over {} skeletons: passed = {}", lb.inspected, lb.passed());
    }
}
