//! Planar trees viewed as broad posets.
//!
//! Edges are stored as indices in planar depth-first preorder, so index 0 is
//! the root and the descendants of an edge form a contiguous index range.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Edge = usize;

/// Unvalidated tree data in the interchange format.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTree {
    pub edges: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<String>,
    #[serde(default)]
    pub vertices: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    names: Vec<String>,
    children: Vec<Option<Vec<Edge>>>,
    parent: Vec<Option<Edge>>,
    end: Vec<Edge>,
}

/// `sources ≤ target`; sources are kept in planar (index) order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BroadRelation {
    pub sources: Vec<Edge>,
    pub target: Edge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeClasses {
    pub root: Edge,
    pub leaves: Vec<Edge>,
    pub inner: Vec<Edge>,
    pub nodes: Vec<Edge>,
    pub stumps: Vec<Edge>,
}

/// Result of validation: the tree plus notes on inputs that lean on a
/// convention rather than an axiom.
#[derive(Clone, Debug)]
pub struct Validated {
    pub tree: Tree,
    pub notes: Vec<String>,
}

pub fn validate_tree(raw: &RawTree) -> Result<Tree> {
    validate_tree_noted(raw).map(|v| v.tree)
}

pub fn validate_tree_noted(raw: &RawTree) -> Result<Validated> {
    let mut notes = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, e) in raw.edges.iter().enumerate() {
        if index.insert(e.as_str(), i).is_some() {
            return Err(Error::InvalidInput(format!("edge {e} declared twice")));
        }
    }
    let n = raw.edges.len();
    if n == 0 {
        return Err(Error::InvalidInput("tree has no edges".into()));
    }
    let mut children: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for (v, kids) in &raw.vertices {
        let vi = *index.get(v.as_str()).ok_or_else(|| Error::OrphanEdge(v.clone()))?;
        let mut tuple = Vec::with_capacity(kids.len());
        for k in kids {
            let ki = *index.get(k.as_str()).ok_or_else(|| Error::OrphanEdge(k.clone()))?;
            if parent[ki].is_some() {
                return Err(Error::DuplicateChild(k.clone()));
            }
            parent[ki] = Some(vi);
            tuple.push(ki);
        }
        children[vi] = Some(tuple);
    }
    let roots: Vec<usize> = (0..n).filter(|&i| parent[i].is_none()).collect();
    let root = match roots.len() {
        0 => return Err(Error::CycleDetected(raw.edges.clone())),
        1 => roots[0],
        _ => {
            return Err(Error::MultipleRoots(
                roots.iter().map(|&i| raw.edges[i].clone()).collect(),
            ))
        }
    };
    match &raw.root {
        Some(r) if *r != raw.edges[root] => {
            let given = index.get(r.as_str()).copied();
            return Err(match given {
                None => Error::OrphanEdge(r.clone()),
                Some(_) => Error::RootMismatch(format!(
                    "declared root {r} has a parent; the parentless edge is {}",
                    raw.edges[root]
                )),
            });
        }
        Some(_) => {}
        None => notes.push(format!("root not declared; inferred {}", raw.edges[root])),
    }
    // reachability: anything unreached from the root lies on a parent cycle
    let mut reached = vec![false; n];
    let mut stack = vec![root];
    while let Some(x) = stack.pop() {
        if reached[x] {
            return Err(Error::CycleDetected(vec![raw.edges[x].clone()]));
        }
        reached[x] = true;
        if let Some(c) = &children[x] {
            stack.extend(c.iter().copied());
        }
    }
    let cyc: Vec<String> = (0..n).filter(|&i| !reached[i]).map(|i| raw.edges[i].clone()).collect();
    if !cyc.is_empty() {
        return Err(Error::CycleDetected(cyc));
    }
    Ok(Validated { tree: Tree::build(raw.edges.clone(), children, root), notes })
}

impl Tree {
    /// Builds from arbitrary indexing, renumbering into planar preorder.
    /// The input must already describe a tree.
    pub fn build(names: Vec<String>, children: Vec<Option<Vec<usize>>>, root: usize) -> Tree {
        let n = names.len();
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            order.push(x);
            if let Some(c) = &children[x] {
                stack.extend(c.iter().rev().copied());
            }
        }
        assert_eq!(order.len(), n, "Tree::build on a non-tree");
        let mut new_of = vec![0; n];
        for (i, &x) in order.iter().enumerate() {
            new_of[x] = i;
        }
        let names2: Vec<String> = order.iter().map(|&x| names[x].clone()).collect();
        let children2: Vec<Option<Vec<Edge>>> = order
            .iter()
            .map(|&x| children[x].as_ref().map(|c| c.iter().map(|&y| new_of[y]).collect()))
            .collect();
        let mut parent = vec![None; n];
        for (i, c) in children2.iter().enumerate() {
            if let Some(c) = c {
                for &y in c {
                    parent[y] = Some(i);
                }
            }
        }
        let mut end = vec![0; n];
        for i in (0..n).rev() {
            end[i] = match &children2[i] {
                Some(c) if !c.is_empty() => end[*c.last().unwrap()],
                _ => i + 1,
            };
        }
        Tree { names: names2, children: children2, parent, end }
    }

    pub fn eta(name: &str) -> Tree {
        Tree::build(vec![name.to_string()], vec![None], 0)
    }

    /// Corolla with root `r` and leaves `l1..ln`.
    pub fn corolla(n: usize) -> Tree {
        let mut names = vec!["r".to_string()];
        names.extend((1..=n).map(|i| format!("l{i}")));
        let mut children = vec![Some((1..=n).collect::<Vec<_>>())];
        children.extend((0..n).map(|_| None));
        Tree::build(names, children, 0)
    }

    /// Linear tree `[n]`: edges `e0 ≤ e1 ≤ … ≤ en`, root `en`.
    pub fn linear(n: usize) -> Tree {
        let names: Vec<String> = (0..=n).map(|i| format!("e{i}")).collect();
        let children = (0..=n).map(|i| if i == 0 { None } else { Some(vec![i - 1]) }).collect();
        Tree::build(names, children, n)
    }

    pub fn from_json(s: &str) -> Result<Tree> {
        let raw: RawTree = serde_json::from_str(s)?;
        validate_tree(&raw)
    }

    pub fn to_raw(&self) -> RawTree {
        let mut vertices = BTreeMap::new();
        for (e, c) in self.children.iter().enumerate() {
            if let Some(c) = c {
                vertices.insert(
                    self.names[e].clone(),
                    c.iter().map(|&x| self.names[x].clone()).collect(),
                );
            }
        }
        RawTree { edges: self.names.clone(), root: Some(self.names[0].clone()), vertices }
    }

    pub fn n_edges(&self) -> usize {
        self.names.len()
    }
    pub fn root(&self) -> Edge {
        0
    }
    pub fn name(&self, e: Edge) -> &str {
        &self.names[e]
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn index(&self, name: &str) -> Option<Edge> {
        self.names.iter().position(|x| x == name)
    }
    pub fn edge(&self, name: &str) -> Result<Edge> {
        self.index(name).ok_or_else(|| Error::InvalidInput(format!("unknown edge {name}")))
    }
    pub fn children(&self, e: Edge) -> Option<&[Edge]> {
        self.children[e].as_deref()
    }
    pub fn parent(&self, e: Edge) -> Option<Edge> {
        self.parent[e]
    }
    pub fn is_leaf(&self, e: Edge) -> bool {
        self.children[e].is_none()
    }
    pub fn is_stump(&self, e: Edge) -> bool {
        matches!(&self.children[e], Some(c) if c.is_empty())
    }
    /// `s ≤_d t`: `s` lies in the subtree above `t`.
    pub fn le_d(&self, s: Edge, t: Edge) -> bool {
        t <= s && s < self.end[t]
    }
    /// Exclusive end of the index range of descendants of `t`.
    pub fn subtree_end(&self, t: Edge) -> Edge {
        self.end[t]
    }
    pub fn degree(&self) -> usize {
        self.children.iter().filter(|c| c.is_some()).count()
    }
    pub fn max_arity(&self) -> usize {
        self.children.iter().flatten().map(|c| c.len()).max().unwrap_or(0)
    }
    pub fn leaves(&self) -> Vec<Edge> {
        (0..self.n_edges()).filter(|&e| self.is_leaf(e)).collect()
    }
    pub fn inner_edges(&self) -> Vec<Edge> {
        (1..self.n_edges()).filter(|&e| !self.is_leaf(e)).collect()
    }
    pub fn vertices(&self) -> impl Iterator<Item = (Edge, &[Edge])> {
        self.children.iter().enumerate().filter_map(|(e, c)| c.as_deref().map(|c| (e, c)))
    }
    pub fn is_open(&self) -> bool {
        !(0..self.n_edges()).any(|e| self.is_stump(e))
    }

    pub fn classify_edges(&self) -> EdgeClasses {
        let n = self.n_edges();
        EdgeClasses {
            root: 0,
            leaves: self.leaves(),
            inner: self.inner_edges(),
            nodes: (0..n).filter(|&e| matches!(self.children(e), Some(c) if !c.is_empty())).collect(),
            stumps: (0..n).filter(|&e| self.is_stump(e)).collect(),
        }
    }

    /// All tuples `x̲` with `x̲ ≤ t`, each sorted in planar order.
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
            out.extend(acc);
        }
        out
    }

    /// Every relation of the broad closure: identities, generators, composites.
    pub fn broad_closure(&self) -> BTreeSet<BroadRelation> {
        (0..self.n_edges())
            .flat_map(|t| self.cuts(t).into_iter().map(move |s| BroadRelation { sources: s, target: t }))
            .collect()
    }

    pub fn generators(&self) -> BTreeSet<BroadRelation> {
        self.vertices()
            .map(|(t, c)| BroadRelation { sources: c.to_vec(), target: t })
            .collect()
    }

    /// Closure membership for an unordered tuple.
    pub fn is_relation(&self, sources: &[Edge], target: Edge) -> bool {
        if sources.len() == 1 && sources[0] == target {
            return true;
        }
        for (i, &a) in sources.iter().enumerate() {
            if !self.le_d(a, target) || a == target {
                return false;
            }
            for &b in &sources[i + 1..] {
                if self.le_d(a, b) || self.le_d(b, a) {
                    return false;
                }
            }
        }
        (target..self.end[target])
            .filter(|&l| self.is_leaf(l))
            .all(|l| sources.iter().any(|&s| self.le_d(l, s)))
    }

    /// Non-planar shape code; equal codes iff the trees are isomorphic.
    pub fn shape_code(&self) -> String {
        self.shape_code_at(0)
    }

    fn shape_code_at(&self, e: Edge) -> String {
        match self.children(e) {
            None => "|".to_string(),
            Some(c) => {
                let mut codes: Vec<String> = c.iter().map(|&x| self.shape_code_at(x)).collect();
                codes.sort();
                format!("({})", codes.concat())
            }
        }
    }

    /// Same tree with every edge renamed.
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> Tree {
        let mut t = self.clone();
        t.names = self.names.iter().map(|s| f(s)).collect();
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn first_tree() -> Tree {
        Tree::from_json(
            r#"{"edges":["r","d","e","f","a","b","c"],"root":"r",
                "vertices":{"r":["d","e","f"],"d":["a","b"],"f":["c"],"b":[]}}"#,
        )
        .unwrap()
    }

    #[test]
    fn preorder_numbering() {
        let t = first_tree();
        let names: Vec<&str> = t.names().iter().map(|s| s.as_str()).collect();
        assert_eq!(names, ["r", "d", "a", "b", "e", "f", "c"]);
        assert!(t.le_d(t.index("b").unwrap(), t.index("d").unwrap()));
        assert!(!t.le_d(t.index("e").unwrap(), t.index("d").unwrap()));
    }

    #[test]
    fn cycle_and_duplicates() {
        let raw: RawTree = serde_json::from_str(
            r#"{"edges":["x","y"],"vertices":{"x":["y"],"y":["x"]}}"#,
        )
        .unwrap();
        assert!(matches!(validate_tree(&raw), Err(Error::CycleDetected(_))));
        let raw: RawTree = serde_json::from_str(
            r#"{"edges":["r","a"],"vertices":{"r":["a","a"]}}"#,
        )
        .unwrap();
        assert!(matches!(validate_tree(&raw), Err(Error::DuplicateChild(_))));
        let raw: RawTree =
            serde_json::from_str(r#"{"edges":["r","a","b"],"vertices":{"r":["a"]}}"#).unwrap();
        assert!(matches!(validate_tree(&raw), Err(Error::MultipleRoots(_))));
        let raw: RawTree =
            serde_json::from_str(r#"{"edges":["r"],"vertices":{"r":["z"]}}"#).unwrap();
        assert!(matches!(validate_tree(&raw), Err(Error::OrphanEdge(_))));
        // a cycle hanging off a valid root
        let raw: RawTree = serde_json::from_str(
            r#"{"edges":["r","x","y"],"vertices":{"x":["y"],"y":["x"]}}"#,
        )
        .unwrap();
        assert!(matches!(validate_tree(&raw), Err(Error::CycleDetected(_))));
    }

    #[test]
    fn relation_membership() {
        let t = first_tree();
        let e = |s: &str| t.index(s).unwrap();
        assert!(t.is_relation(&[e("a"), e("e"), e("f")], e("r")));
        assert!(t.is_relation(&[e("a")], e("d")));
        assert!(!t.is_relation(&[e("e"), e("f")], e("r")));
        assert!(t.is_relation(&[], e("b")));
        assert!(!t.is_relation(&[e("a"), e("a")], e("d")));
    }
}
