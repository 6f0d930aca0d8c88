//! Graphviz output for forests, Hasse diagrams and percolation schemes.

use std::fmt::Write;

use crate::anodyne::GPoset;
use crate::equivariance::GForest;
use crate::tensor::{Percolation, TensorProduct};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per edge, drawn from root to leaves. Nodes in the same orbit
/// share a color index.
pub fn forest(f: &GForest) -> String {
    let orbits = f.edge_orbits();
    let mut out = String::from("digraph forest {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for e in 0..f.n_edges() {
        let k = orbits.iter().position(|o| o.contains(&e)).unwrap_or(0);
        let _ = writeln!(out, "  n{e} [label={}, colorscheme=set312, fontcolor={}];", quote(f.name(e)), k % 12 + 1);
        if let Some(kids) = f.children(e) {
            if kids.is_empty() {
                let _ = writeln!(out, "  s{e} [shape=point];\n  s{e} -> n{e};");
            }
            for k in kids {
                let _ = writeln!(out, "  n{k} -> n{e};");
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Covering relations of a strict order on `0..n`.
pub fn covers(n: usize, lt: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                out.push((a, b));
            }
        }
    }
    out
}

pub fn hasse(labels: &[String], lt: impl Fn(usize, usize) -> bool) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, l) in labels.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label={}];", quote(l));
    }
    for (a, b) in covers(labels.len(), lt) {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

pub fn poset(p: &GPoset, labels: &[String]) -> String {
    hasse(labels, |a, b| p.lt(a, b))
}

/// Hasse diagram of the maximal subtrees, each labelled by its edges.
pub fn percolation(tp: &TensorProduct, perc: &Percolation) -> String {
    let amb = tp.ambient();
    let labels: Vec<String> = perc
        .trees
        .iter()
        .map(|u| u.edges().iter().map(|&e| amb.name(e)).collect::<Vec<_>>().join(" "))
        .collect();
    poset(&perc.poset, &labels)
}
