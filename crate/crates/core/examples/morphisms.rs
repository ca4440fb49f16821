//! Embeddings, rigid surjections and connections between small trees.

use std::sync::Arc;

use treeconn::enumeration::{enumerate_connections, enumerate_embeddings, enumerate_rigid_surjections};
use treeconn::morphism::{compose, induced_embedding};
use treeconn::tree::OrderedTree;
use treeconn::{Budget, Category};

fn main() {
    let budget = Budget::default();
    let s = Arc::new(OrderedTree::chain(2).unwrap());
    let t = Arc::new(OrderedTree::parse("(()())").unwrap());
    let v = Arc::new(OrderedTree::parse("((())())").unwrap());

    for e in enumerate_embeddings(&s, &v, &budget).unwrap() {
        println!("embedding {s} -> {v}: {:?}", e.as_slice());
    }
    for r in enumerate_rigid_surjections(&v, &t, &budget).unwrap() {
        let i = induced_embedding(&r).unwrap().unwrap();
        println!("rigid {v} -> {t}: {:?}, induced {:?}", r.as_slice(), i.as_slice());
    }

    let st = enumerate_connections(&s, &t, Category::ConnT, &budget).unwrap();
    let tv = enumerate_connections(&t, &v, Category::ConnT, &budget).unwrap();
    println!("|Conn({s}, {t})| = {}, |Conn({t}, {v})| = {}", st.len(), tv.len());
    for (f, g) in st.iter().zip(tv.iter()) {
        println!("{:?} then {:?} = {:?}", f, g, compose(f, g).unwrap());
    }

    for cat in [Category::IncInj, Category::RigidOnly, Category::ConnL, Category::ConnLstar] {
        let n = enumerate_connections(&s, &Arc::new(OrderedTree::chain(4).unwrap()), cat, &budget).unwrap().len();
        println!("{cat:?}: {n} morphisms chain2 -> chain4");
    }
}
