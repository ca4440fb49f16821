//! Graphviz output for a tree, a labelled doubling tree and a morphism.

use std::sync::Arc;

use treeconn::constructions::doubling_tree;
use treeconn::export::{morphism_to_dot, tree_from_dot, tree_to_dot};
use treeconn::tree::OrderedTree;

fn main() {
    let t = OrderedTree::parse("(()(()))").unwrap();
    let dot = tree_to_dot(&t, None);
    assert_eq!(tree_from_dot(&dot).unwrap(), t);
    print!("{dot}");

    let d = doubling_tree(&Arc::new(OrderedTree::chain(2).unwrap()));
    print!("{}", tree_to_dot(&d.tree, Some(&d.names())));
    print!("{}", morphism_to_dot(&d.witness(&[1])));
}
