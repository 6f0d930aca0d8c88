//! Sub-broad-posets of an ambient edge set.
//!
//! A [`Subtree`] is a tree whose edges are ambient edge ids and whose vertices
//! are relations of the ambient. Children are kept sorted by id; for a tree
//! ambient numbered in planar preorder this is the planar order.

use std::collections::{BTreeMap, BTreeSet};

use crate::broadposet::{Edge, Tree};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subtree {
    root: Edge,
    vertices: BTreeMap<Edge, Vec<Edge>>,
    edges: Vec<Edge>,
}

/// All subsets of `items`, in binary-counter order.
pub fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    let n = items.len();
    assert!(n < 31, "subset enumeration too large");
    (0u32..(1 << n))
        .map(|mask| (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| items[i].clone()).collect())
        .collect()
}

impl Subtree {
    pub fn new(root: Edge, mut vertices: BTreeMap<Edge, Vec<Edge>>) -> Subtree {
        let mut edges = vec![root];
        for c in vertices.values_mut() {
            c.sort_unstable();
            edges.extend_from_slice(c);
        }
        edges.sort_unstable();
        edges.dedup();
        Subtree { root, vertices, edges }
    }

    pub fn eta(e: Edge) -> Subtree {
        Subtree::new(e, BTreeMap::new())
    }

    /// The whole tree, with ids shifted by `offset`.
    pub fn from_tree(tree: &Tree, offset: usize) -> Subtree {
        let vertices = tree
            .vertices()
            .map(|(e, c)| (e + offset, c.iter().map(|&x| x + offset).collect()))
            .collect();
        Subtree::new(tree.root() + offset, vertices)
    }

    pub fn root(&self) -> Edge {
        self.root
    }
    pub fn vertices(&self) -> &BTreeMap<Edge, Vec<Edge>> {
        &self.vertices
    }
    pub fn children(&self, e: Edge) -> Option<&[Edge]> {
        self.vertices.get(&e).map(|c| c.as_slice())
    }
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
    pub fn leaves(&self) -> Vec<Edge> {
        self.edges.iter().copied().filter(|e| !self.vertices.contains_key(e)).collect()
    }
    pub fn inner_edges(&self) -> Vec<Edge> {
        self.edges
            .iter()
            .copied()
            .filter(|&e| e != self.root && self.vertices.contains_key(&e))
            .collect()
    }
    pub fn degree(&self) -> usize {
        self.vertices.len()
    }
    /// Edges plus vertices; strictly increases along proper face inclusions.
    pub fn size(&self) -> usize {
        self.edges.len() + self.vertices.len()
    }

    pub fn parent_of(&self, e: Edge) -> Option<Edge> {
        self.vertices.iter().find(|(_, c)| c.binary_search(&e).is_ok()).map(|(&p, _)| p)
    }

    /// Edges in the subtree above `t`, including `t`.
    pub fn descendants(&self, t: Edge) -> Vec<Edge> {
        let mut out = Vec::new();
        let mut stack = vec![t];
        while let Some(x) = stack.pop() {
            out.push(x);
            if let Some(c) = self.children(x) {
                stack.extend_from_slice(c);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn le_d(&self, s: Edge, t: Edge) -> bool {
        let mut x = s;
        loop {
            if x == t {
                return true;
            }
            match self.parent_of(x) {
                Some(p) => x = p,
                None => return false,
            }
        }
    }

    /// All `x̲ ≤ t` in this subtree, tuples sorted by id.
    pub fn cuts(&self, t: Edge) -> Vec<Vec<Edge>> {
        let mut out = vec![vec![t]];
        if let Some(c) = self.children(t) {
            let mut acc: Vec<Vec<Edge>> = vec![vec![]];
            for &y in c {
                let ys = self.cuts(y);
                let mut next = Vec::with_capacity(acc.len() * ys.len());
                for a in &acc {
                    for b in &ys {
                        let mut v = a.clone();
                        v.extend_from_slice(b);
                        next.push(v);
                    }
                }
                acc = next;
            }
            for mut v in acc {
                v.sort_unstable();
                out.push(v);
            }
        }
        out
    }

    /// Whether `sources ≤ target` lies in the broad closure of this subtree.
    pub fn is_relation(&self, sources: &[Edge], target: Edge) -> bool {
        if !self.has_edge(target) {
            return false;
        }
        if sources.len() == 1 && sources[0] == target {
            return true;
        }
        let mut found = vec![false; sources.len()];
        let mut stack: Vec<Edge> = match self.children(target) {
            Some(c) => c.to_vec(),
            None => return false,
        };
        while let Some(x) = stack.pop() {
            if let Some(i) = sources.iter().position(|&s| s == x) {
                if found[i] {
                    return false;
                }
                found[i] = true;
                continue;
            }
            match self.children(x) {
                Some(c) => stack.extend_from_slice(c),
                None => return false,
            }
        }
        found.iter().all(|&f| f)
    }

    /// The outer face at `leaves ≤ root`; `leaves` must be a cut of `root`.
    pub fn outer_face(&self, root: Edge, leaves: &[Edge]) -> Subtree {
        let mut vertices = BTreeMap::new();
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            if leaves.contains(&x) {
                continue;
            }
            if let Some(c) = self.children(x) {
                vertices.insert(x, c.to_vec());
                stack.extend_from_slice(c);
            }
        }
        Subtree::new(root, vertices)
    }

    pub fn outer_faces(&self) -> Vec<Subtree> {
        let mut out = Vec::new();
        for &t in &self.edges {
            for c in self.cuts(t) {
                out.push(self.outer_face(t, &c));
            }
        }
        out
    }

    /// Removes inner edges, composing the adjacent vertices.
    pub fn remove_inner(&self, removed: &[Edge]) -> Subtree {
        let mut vertices = self.vertices.clone();
        for &e in removed {
            let kids = vertices.remove(&e).expect("remove_inner: not an inner edge");
            let parent = vertices
                .iter()
                .find(|(_, c)| c.contains(&e))
                .map(|(&p, _)| p)
                .expect("remove_inner: edge has no parent");
            let c = vertices.get_mut(&parent).unwrap();
            c.retain(|&x| x != e);
            c.extend(kids);
            c.sort_unstable();
        }
        Subtree::new(self.root, vertices)
    }

    /// Every face: inner faces of outer faces.
    pub fn faces(&self) -> Vec<Subtree> {
        let mut out = Vec::new();
        for o in self.outer_faces() {
            let inner = o.inner_edges();
            for d in subsets(&inner) {
                out.push(if d.is_empty() { o.clone() } else { o.remove_inner(&d) });
            }
        }
        out
    }

    /// Whether `v` is a face of this subtree (edges included, vertices are
    /// relations here).
    pub fn contains_face(&self, v: &Subtree) -> bool {
        if v.edges.len() > self.edges.len() || !v.edges.iter().all(|&e| self.has_edge(e)) {
            return false;
        }
        v.vertices.iter().all(|(&t, c)| self.is_relation(c, t))
    }

    pub fn outer_closure_of(&self, v: &Subtree) -> Subtree {
        self.outer_face(v.root, &v.leaves())
    }

    pub fn is_outer_in(&self, ambient: &Subtree) -> bool {
        ambient.outer_closure_of(self) == *self
    }

    /// The inner edges of the outer closure that this face removes.
    pub fn removed_in(&self, ambient: &Subtree) -> Vec<Edge> {
        let closure = ambient.outer_closure_of(self);
        closure.edges.iter().copied().filter(|&e| !self.has_edge(e)).collect()
    }

    pub fn map_edges(&self, f: impl Fn(Edge) -> Edge) -> Subtree {
        let vertices = self
            .vertices
            .iter()
            .map(|(&t, c)| (f(t), c.iter().map(|&x| f(x)).collect()))
            .collect();
        Subtree::new(f(self.root), vertices)
    }

    pub fn act(&self, perm: &[Edge]) -> Subtree {
        self.map_edges(|e| perm[e])
    }

    /// The edge set as a set.
    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges.iter().copied().collect()
    }

    /// Standalone tree with the given edge names; the second component maps
    /// tree indices back to ids.
    pub fn to_tree(&self, name: impl Fn(Edge) -> String) -> (Tree, Vec<Edge>) {
        let mut order = Vec::with_capacity(self.edges.len());
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            order.push(x);
            if let Some(c) = self.children(x) {
                stack.extend(c.iter().rev().copied());
            }
        }
        let pos = |e: Edge| order.iter().position(|&x| x == e).unwrap();
        let names = order.iter().map(|&e| name(e)).collect();
        let children = order
            .iter()
            .map(|&e| self.children(e).map(|c| c.iter().map(|&x| pos(x)).collect()))
            .collect();
        (Tree::build(names, children, 0), order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corolla_faces() {
        let t = Subtree::from_tree(&Tree::corolla(2), 0);
        assert_eq!(t.faces().len(), 4);
    }

    #[test]
    fn remove_and_contain() {
        // r -> (x, y), x -> (u)
        let t = Subtree::new(0, BTreeMap::from([(0, vec![1, 3]), (1, vec![2])]));
        let f = t.remove_inner(&[1]);
        assert_eq!(f.children(0).unwrap(), &[2, 3]);
        assert!(t.contains_face(&f));
        assert!(!f.contains_face(&t));
        assert!(t.is_relation(&[2, 3], 0));
        assert!(!t.is_relation(&[3], 0));
    }
}
