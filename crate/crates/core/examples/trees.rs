//! Tree enumeration, parsing and the grafting constructions.

use treeconn::constructions::{add_root, graft, plus_leaf, star_extend};
use treeconn::tree::{enumerate_trees, Forest, OrderedTree};

fn main() {
    for n in 1..=7 {
        println!("{n} vertices: {} trees", enumerate_trees(n, 8).unwrap().len());
    }
    for t in enumerate_trees(4, 8).unwrap() {
        println!("{t}  parents {:?}  marked {:?}", t.parents(), t.marked_set());
    }

    let t = OrderedTree::parse("((()())())").unwrap();
    println!("meet(2, 4) in {t} = {}", t.meet(2, 4));
    println!("T^3 = {}", t.initial_subtree(3).unwrap());
    println!("plus leaf: {}, star: {}", plus_leaf(&t), star_extend(&t));

    let forest = Forest::parse("(())()").unwrap();
    println!("add root to {}: {}", forest.format(), add_root(&forest));
    let g = graft(&t, &[2], &[forest]).unwrap();
    println!("grafted at 2: {} (base vertices now {:?})", g.tree, g.from_base);
}
