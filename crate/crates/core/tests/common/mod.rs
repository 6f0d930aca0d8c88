//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use eqdendro::broadposet::{Edge, Tree};
use eqdendro::equivariance::GForest;
use eqdendro::group::FiniteGroup;
use eqdendro::replay::faces_by_subsets;
use eqdendro::subtree::{subsets, Subtree};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn text(name: &str) -> String {
    std::fs::read_to_string(data(name)).expect("fixture")
}

pub fn forest(name: &str) -> GForest {
    GForest::from_json(&text(name)).expect("forest fixture")
}

pub fn tree(name: &str) -> Tree {
    Tree::from_json(&text(name)).expect("tree fixture")
}

pub fn plain(t: Tree) -> GForest {
    GForest::trivial(FiniteGroup::trivial(), t)
}

/// Nonempty G-stable sets of inner edges.
pub fn stable_inner_sets(f: &GForest) -> Vec<BTreeSet<Edge>> {
    let inner: BTreeSet<Edge> = f.inner_edges().into_iter().collect();
    let orbits: Vec<BTreeSet<Edge>> = f.edge_orbits().into_iter().filter(|o| o.is_subset(&inner)).collect();
    subsets(&orbits)
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.into_iter().flatten().collect())
        .collect()
}

fn close(gens: impl IntoIterator<Item = Subtree>) -> BTreeSet<Subtree> {
    gens.into_iter().flat_map(|g| faces_by_subsets(&g)).collect()
}

fn maximal_proper(w: &Subtree) -> Vec<Subtree> {
    let proper: Vec<Subtree> = faces_by_subsets(w).into_iter().filter(|v| v != w).collect();
    proper
        .iter()
        .filter(|v| !proper.iter().any(|u| u != *v && u.contains_face(v)))
        .cloned()
        .collect()
}

/// The horn as the union of the codimension-one faces other than `T − e`
/// for `e ∈ E`.
pub fn brute_horn(f: &GForest, e: &BTreeSet<Edge>) -> BTreeSet<Subtree> {
    let mut gens = Vec::new();
    for full in f.full_components() {
        for v in maximal_proper(&full) {
            let missing: Vec<Edge> = full.edges().iter().copied().filter(|x| !v.has_edge(*x)).collect();
            let inner_drop = missing.len() == 1 && e.contains(&missing[0]) && v.root() == full.root() && v.leaves() == full.leaves();
            if !inner_drop {
                gens.push(v);
            }
        }
    }
    close(gens)
}

/// The orbital horn from codimension-one faces of the quotient, lifted to
/// G-families of faces.
pub fn brute_orbital_horn(f: &GForest, e: &BTreeSet<Edge>) -> BTreeSet<Subtree> {
    let q = f.quotient();
    let orbit = f.orbit_index();
    let orbits = f.edge_orbits();
    let qid = |x: Edge| q.index(&format!("G{}", f.name(*orbits[orbit[x]].iter().next().unwrap()))).unwrap();
    let project = |v: &Subtree| {
        let vertices: BTreeMap<Edge, Vec<Edge>> = v
            .vertices()
            .iter()
            .map(|(&t, kids)| {
                let mut k: Vec<Edge> = kids.iter().map(|&x| qid(x)).collect();
                k.sort_unstable();
                k.dedup();
                (qid(t), k)
            })
            .collect();
        Subtree::new(qid(v.root()), vertices)
    };
    let all: Vec<Subtree> = f.full_components().iter().flat_map(faces_by_subsets).collect();
    let qfull = Subtree::from_tree(&q, 0);
    let e_orbits: BTreeSet<Edge> = e.iter().map(|&x| qid(x)).collect();
    let mut gens = Vec::new();
    for w in maximal_proper(&qfull) {
        let missing: Vec<Edge> = qfull.edges().iter().copied().filter(|x| !w.has_edge(*x)).collect();
        let inner_drop = missing.len() == 1
            && e_orbits.contains(&missing[0])
            && w.root() == qfull.root()
            && w.leaves() == qfull.leaves();
        if inner_drop {
            continue;
        }
        let pre: BTreeSet<Edge> = (0..f.n_edges()).filter(|&x| w.has_edge(qid(x))).collect();
        // one lift per preimage of the root: everything over `w` above it
        for v in &all {
            let above: BTreeSet<Edge> = pre.iter().copied().filter(|&x| f.le_d(x, v.root())).collect();
            if v.edge_set() == above && project(v) == w {
                gens.push(v.clone());
            }
        }
    }
    close(gens)
}

/// The Segal core from the edges and the vertex corollas.
pub fn brute_segal_core(f: &GForest) -> BTreeSet<Subtree> {
    let mut gens: Vec<Subtree> = (0..f.n_edges()).map(Subtree::eta).collect();
    for t in 0..f.n_edges() {
        if let Some(kids) = f.children(t) {
            gens.push(Subtree::new(t, BTreeMap::from([(t, kids)])));
        }
    }
    close(gens)
}

pub fn names(f: &GForest, v: &Subtree) -> BTreeSet<String> {
    v.edges().iter().map(|&e| f.name(e).to_string()).collect()
}

/// A planar tree read off a preorder code: `0` a leaf, `1` a stump, `k ≥ 2`
/// a vertex with `k − 1` inputs. Past `max` edges everything is a leaf.
pub fn tree_from_code(code: &[u8], max: usize) -> Tree {
    let mut names = Vec::new();
    let mut children: Vec<Option<Vec<usize>>> = Vec::new();
    let mut pos = 0;
    let mut pending = vec![usize::MAX];
    while let Some(parent) = pending.pop() {
        let id = names.len();
        names.push(format!("e{id}"));
        children.push(None);
        if parent != usize::MAX {
            children[parent].as_mut().unwrap().push(id);
        }
        let c = code.get(pos).copied().unwrap_or(0) % 5;
        pos += 1;
        let room = max.saturating_sub(names.len() + pending.len());
        match c {
            0 => {}
            1 => children[id] = Some(Vec::new()),
            k => {
                let k = (k as usize - 1).min(room);
                if k > 0 || room > 0 {
                    children[id] = Some(Vec::new());
                    pending.extend(std::iter::repeat(id).take(k));
                }
            }
        }
    }
    Tree::build(names, children, 0)
}

pub fn sweep() -> &'static [GForest] {
    use std::sync::OnceLock;
    use eqdendro::truncation::{Bounds, Truncation};
    static TREES: OnceLock<Vec<GForest>> = OnceLock::new();
    TREES.get_or_init(|| {
        let b = Bounds::new(3, 3);
        let mut v = Truncation::new(FiniteGroup::trivial(), b).g_trees();
        v.extend(Truncation::new(FiniteGroup::cyclic(2), b).g_trees());
        v
    })
}
