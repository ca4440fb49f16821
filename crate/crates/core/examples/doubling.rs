//! The doubling tree of S and its witness connections, one per subset of
//! the marked set.

use std::sync::Arc;

use treeconn::constructions::doubling_tree;
use treeconn::functors::invariant_set;
use treeconn::tree::OrderedTree;

fn main() {
    let s = Arc::new(OrderedTree::parse("((())())").unwrap());
    let d = doubling_tree(&s);
    println!("S = {s}, marked {:?}", d.marked());
    println!("T = {} with names {:?}", d.tree, d.names());
    println!("s = {:?}", d.surj.as_slice());
    for (b, w) in d.witnesses() {
        println!("B = {b:?}: i_B = {:?}, invariant set {}", w.emb().as_slice(), invariant_set(&w).unwrap());
    }
    println!("{}", serde_json::to_string_pretty(&d.to_table()).unwrap());
}
