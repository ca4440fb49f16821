//! The functors between tree connections and partial strong connections.

use std::sync::Arc;

use treeconn::enumeration::{enumerate_connections, enumerate_psc};
use treeconn::functors::{delta, delta_signature, gamma, invariant_set, partial_functor, AnnotatedPscHom};
use treeconn::morphism::{complete_strong, PscHom};
use treeconn::tree::OrderedTree;
use treeconn::{Budget, Category};

fn main() {
    let budget = Budget::default();
    let s = Arc::new(OrderedTree::chain(2).unwrap());
    let t = Arc::new(OrderedTree::parse("((()()))").unwrap());

    for c in enumerate_connections(&s, &t, Category::ConnT, &budget).unwrap().iter() {
        println!("{c:?} -> delta {:?}", delta(c).unwrap());
    }
    for p in enumerate_psc(&s, &t, &budget).unwrap().morphisms {
        let p = PscHom::try_from(p).unwrap();
        let q = partial_functor(&AnnotatedPscHom::new(p.clone())).unwrap();
        print!("{p:?}: bits {:?}, signature {}", q.bits, delta_signature(&p).unwrap());
        print!(", invariant set {}", invariant_set(&p).unwrap());
        if q.bits == [true] {
            print!(", gamma {:?}", gamma(&p).unwrap());
        }
        println!("\n  completes to {:?}", complete_strong(&p));
    }
}
