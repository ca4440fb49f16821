//! Graphviz output for trees and morphisms.

use std::fmt::Write;

use crate::error::TreeError;
use crate::morphism::Connection;
use crate::tree::OrderedTree;

/// A tree as a DOT digraph. Edges go from parent to child and are listed in
/// child order, which `ordering=out` renders left to right.
pub fn tree_to_dot(tree: &OrderedTree, labels: Option<&[String]>) -> String {
    let mut out = String::from("digraph tree {\n  ordering=out;\n  node [shape=circle];\n");
    write_tree_body(&mut out, tree, labels, "n", "  ");
    out.push_str("}\n");
    out
}

fn write_tree_body(out: &mut String, tree: &OrderedTree, labels: Option<&[String]>, prefix: &str, indent: &str) {
    for v in tree.vertices() {
        let label = labels.map_or_else(|| v.to_string(), |l| l[v].clone());
        let _ = writeln!(out, "{indent}{prefix}{v} [label=\"{label}\"];");
    }
    for v in tree.vertices() {
        for &c in tree.children(v) {
            let _ = writeln!(out, "{indent}{prefix}{v} -> {prefix}{c};");
        }
    }
}

/// A morphism `S -> T` as two clusters, with the embedding drawn solid from
/// `S` to `T` and the surjection drawn dashed from `T` back to `S`.
pub fn morphism_to_dot(c: &Connection) -> String {
    let mut out = String::from("digraph morphism {\n  ordering=out;\n  node [shape=circle];\n");
    out.push_str("  subgraph cluster_source {\n    label=\"S\";\n");
    write_tree_body(&mut out, c.source(), None, "s", "    ");
    out.push_str("  }\n  subgraph cluster_target {\n    label=\"T\";\n");
    write_tree_body(&mut out, c.target(), None, "t", "    ");
    out.push_str("  }\n");
    for (x, &y) in c.emb().as_slice().iter().enumerate() {
        let _ = writeln!(out, "  s{x} -> t{y} [color=blue, constraint=false];");
    }
    for (y, &x) in c.surj().as_slice().iter().enumerate() {
        let _ = writeln!(out, "  t{y} -> s{x} [color=red, style=dashed, constraint=false];");
    }
    out.push_str("}\n");
    out
}

/// Reads back a tree written by [`tree_to_dot`].
pub fn tree_from_dot(text: &str) -> Result<OrderedTree, TreeError> {
    let mut n = 0;
    let mut parent: Vec<Option<usize>> = Vec::new();
    let bad = |offset| TreeError::Parse { offset, reason: "unrecognised DOT line" };
    let mut offset = 0;
    for line in text.lines() {
        let l = line.trim().trim_end_matches(';');
        if let Some((a, b)) = l.split_once(" -> ") {
            let a: usize = a.trim().trim_start_matches('n').parse().map_err(|_| bad(offset))?;
            let b: usize = b.trim().trim_start_matches('n').parse().map_err(|_| bad(offset))?;
            if b >= parent.len() {
                parent.resize(b + 1, None);
            }
            parent[b] = Some(a);
        } else if let Some((id, _)) = l.strip_prefix('n').and_then(|rest| rest.split_once(" [label=")) {
            let id: usize = id.parse().map_err(|_| bad(offset))?;
            n = n.max(id + 1);
        }
        offset += line.len() + 1;
    }
    parent.resize(n, None);
    OrderedTree::new(parent)
}
