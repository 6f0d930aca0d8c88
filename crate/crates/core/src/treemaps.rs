use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::broadposet::{BroadRelation, Edge, Tree};
use crate::error::{Error, Result};
use crate::subtree::{subsets, Subtree};

/// A planar face as an inner face of an outer face.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceDescriptor {
    pub root: Edge,
    pub leaves: Vec<Edge>,
    pub removed: Vec<Edge>,
}

/// Serialized face, with edge names relative to a named ambient tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceJson {
    pub root: String,
    pub leaves: Vec<String>,
    pub removed: Vec<String>,
}

impl FaceDescriptor {
    pub fn whole(tree: &Tree) -> FaceDescriptor {
        FaceDescriptor { root: tree.root(), leaves: tree.leaves(), removed: vec![] }
    }

    pub fn outer(root: Edge, leaves: &[Edge]) -> FaceDescriptor {
        let mut leaves = leaves.to_vec();
        leaves.sort_unstable();
        FaceDescriptor { root, leaves, removed: vec![] }
    }

    pub fn validate(&self, tree: &Tree) -> Result<()> {
        if !tree.is_relation(&self.leaves, self.root) {
            return Err(Error::RelationNotInClosure(format!(
                "{:?} <= {}",
                self.leaves.iter().map(|&e| tree.name(e)).collect::<Vec<_>>(),
                tree.name(self.root)
            )));
        }
        let outer = Subtree::from_tree(tree, 0).outer_face(self.root, &self.leaves);
        let inner = outer.inner_edges();
        for &d in &self.removed {
            if !inner.contains(&d) {
                return Err(Error::NotInnerEdge(tree.name(d).to_string()));
            }
        }
        Ok(())
    }

    pub fn to_subtree(&self, tree: &Tree) -> Subtree {
        self.to_subtree_offset(tree, 0)
    }

    /// As a subtree of a forest in which `tree` starts at id `offset`.
    pub fn to_subtree_offset(&self, tree: &Tree, offset: usize) -> Subtree {
        let leaves: Vec<Edge> = self.leaves.iter().map(|&e| e + offset).collect();
        let removed: Vec<Edge> = self.removed.iter().map(|&e| e + offset).collect();
        let outer = Subtree::from_tree(tree, offset).outer_face(self.root + offset, &leaves);
        if removed.is_empty() {
            outer
        } else {
            outer.remove_inner(&removed)
        }
    }

    pub fn from_subtree(tree: &Tree, face: &Subtree) -> FaceDescriptor {
        Self::from_subtree_offset(tree, 0, face)
    }

    pub fn from_subtree_offset(tree: &Tree, offset: usize, face: &Subtree) -> FaceDescriptor {
        let full = Subtree::from_tree(tree, offset);
        let removed = face.removed_in(&full);
        FaceDescriptor {
            root: face.root() - offset,
            leaves: face.leaves().iter().map(|&e| e - offset).collect(),
            removed: removed.iter().map(|&e| e - offset).collect(),
        }
    }

    pub fn is_outer(&self) -> bool {
        self.removed.is_empty()
    }

    pub fn to_json(&self, tree: &Tree) -> FaceJson {
        let n = |v: &[Edge]| v.iter().map(|&e| tree.name(e).to_string()).collect();
        FaceJson { root: tree.name(self.root).to_string(), leaves: n(&self.leaves), removed: n(&self.removed) }
    }

    pub fn from_json(tree: &Tree, f: &FaceJson) -> Result<FaceDescriptor> {
        let idx = |v: &[String]| -> Result<Vec<Edge>> {
            let mut v = v.iter().map(|s| tree.edge(s)).collect::<Result<Vec<_>>>()?;
            v.sort_unstable();
            Ok(v)
        };
        let d = FaceDescriptor { root: tree.edge(&f.root)?, leaves: idx(&f.leaves)?, removed: idx(&f.removed)? };
        d.validate(tree)?;
        Ok(d)
    }
}

pub fn outer_closure(f: &FaceDescriptor) -> FaceDescriptor {
    FaceDescriptor { root: f.root, leaves: f.leaves.clone(), removed: vec![] }
}

/// `T − E`.
pub fn inner_face(tree: &Tree, removed: &[Edge]) -> Result<Tree> {
    let inner = tree.inner_edges();
    for &e in removed {
        if !inner.contains(&e) {
            return Err(Error::NotInnerEdge(tree.name(e).to_string()));
        }
    }
    let face = Subtree::from_tree(tree, 0).remove_inner(removed);
    Ok(face.to_tree(|e| tree.name(e).to_string()).0)
}

/// `T_{t̲ ≤ t}`.
pub fn outer_face(tree: &Tree, rel: &BroadRelation) -> Result<Tree> {
    if !tree.is_relation(&rel.sources, rel.target) {
        return Err(Error::RelationNotInClosure(format!(
            "{:?} <= {}",
            rel.sources.iter().map(|&e| tree.name(e)).collect::<Vec<_>>(),
            tree.name(rel.target)
        )));
    }
    let face = Subtree::from_tree(tree, 0).outer_face(rel.target, &rel.sources);
    Ok(face.to_tree(|e| tree.name(e).to_string()).0)
}

/// Union and intersection of outer faces sharing a root.
pub fn outer_union_intersection(
    tree: &Tree,
    faces: &[FaceDescriptor],
) -> Result<(FaceDescriptor, FaceDescriptor)> {
    let first = faces.first().ok_or_else(|| Error::InvalidInput("no faces given".into()))?;
    for f in faces {
        if f.root != first.root {
            return Err(Error::RootMismatch(format!(
                "{} vs {}",
                tree.name(f.root),
                tree.name(first.root)
            )));
        }
        if !f.is_outer() {
            return Err(Error::InvalidInput("face is not outer".into()));
        }
    }
    let subs: Vec<Subtree> = faces.iter().map(|f| f.to_subtree(tree)).collect();
    let mut vert_union: BTreeSet<Edge> = BTreeSet::new();
    let mut edge_union: BTreeSet<Edge> = BTreeSet::new();
    let mut vert_inter: BTreeSet<Edge> = subs[0].vertices().keys().copied().collect();
    let mut edge_inter: BTreeSet<Edge> = subs[0].edge_set();
    for s in &subs {
        vert_union.extend(s.vertices().keys().copied());
        edge_union.extend(s.edges().iter().copied());
        let vs: BTreeSet<Edge> = s.vertices().keys().copied().collect();
        vert_inter = vert_inter.intersection(&vs).copied().collect();
        edge_inter = edge_inter.intersection(&s.edge_set()).copied().collect();
    }
    let build = |edges: &BTreeSet<Edge>, verts: &BTreeSet<Edge>| -> FaceDescriptor {
        let leaves: Vec<Edge> = edges.iter().copied().filter(|e| !verts.contains(e)).collect();
        FaceDescriptor::outer(first.root, &leaves)
    };
    Ok((build(&edge_union, &vert_union), build(&edge_inter, &vert_inter)))
}

/// Every planar face of `tree`, as (outer relation, removed subset) pairs.
pub fn enumerate_faces(tree: &Tree) -> Vec<FaceDescriptor> {
    let full = Subtree::from_tree(tree, 0);
    let mut out = Vec::new();
    for rel in tree.broad_closure() {
        let outer = full.outer_face(rel.target, &rel.sources);
        for d in subsets(&outer.inner_edges()) {
            out.push(FaceDescriptor { root: rel.target, leaves: rel.sources.clone(), removed: d });
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeMap {
    pub source: Tree,
    pub target: Tree,
    pub edge_fn: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Iso,
    Degeneracy,
    Face,
    InnerFace,
    OuterFace,
    General,
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub degeneracy: TreeMap,
    pub inner: TreeMap,
    pub outer: TreeMap,
}

impl TreeMap {
    pub fn new(source: Tree, target: Tree, edge_fn: Vec<Edge>) -> Result<TreeMap> {
        if edge_fn.len() != source.n_edges() || edge_fn.iter().any(|&e| e >= target.n_edges()) {
            return Err(Error::InvalidInput("edge function has wrong shape".into()));
        }
        let m = TreeMap { source, target, edge_fn };
        m.check_monotone()?;
        Ok(m)
    }

    /// Builds a map from name pairs.
    pub fn from_names(source: Tree, target: Tree, pairs: &BTreeMap<String, String>) -> Result<TreeMap> {
        let mut f = vec![usize::MAX; source.n_edges()];
        for (a, b) in pairs {
            f[source.edge(a)?] = target.edge(b)?;
        }
        if let Some(e) = f.iter().position(|&x| x == usize::MAX) {
            return Err(Error::InvalidInput(format!("no image for edge {}", source.name(e))));
        }
        TreeMap::new(source, target, f)
    }

    pub fn identity(t: &Tree) -> TreeMap {
        TreeMap { source: t.clone(), target: t.clone(), edge_fn: (0..t.n_edges()).collect() }
    }

    pub fn check_monotone(&self) -> Result<()> {
        for (s, c) in self.source.vertices() {
            let img: Vec<Edge> = c.iter().map(|&x| self.edge_fn[x]).collect();
            if !self.target.is_relation(&img, self.edge_fn[s]) {
                return Err(Error::NotMonotone(self.source.name(s).to_string()));
            }
        }
        Ok(())
    }

    pub fn compose(&self, first: &TreeMap) -> TreeMap {
        TreeMap {
            source: first.source.clone(),
            target: self.target.clone(),
            edge_fn: first.edge_fn.iter().map(|&e| self.edge_fn[e]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let s: BTreeSet<Edge> = self.edge_fn.iter().copied().collect();
        s.len() == self.edge_fn.len()
    }

    pub fn is_surjective(&self) -> bool {
        let s: BTreeSet<Edge> = self.edge_fn.iter().copied().collect();
        s.len() == self.target.n_edges()
    }

    /// The image of an injective map as a face descriptor of the target.
    fn image_face(&self) -> Result<FaceDescriptor> {
        let root = self.edge_fn[self.source.root()];
        let mut leaves: Vec<Edge> = self.source.leaves().iter().map(|&l| self.edge_fn[l]).collect();
        leaves.sort_unstable();
        let full = Subtree::from_tree(&self.target, 0);
        let outer = full.outer_face(root, &leaves);
        let image: BTreeSet<Edge> = self.edge_fn.iter().copied().collect();
        let removed: Vec<Edge> = outer.edges().iter().copied().filter(|e| !image.contains(e)).collect();
        let face = FaceDescriptor { root, leaves, removed };
        let sub = face.to_subtree(&self.target);
        if sub.edge_set() != image {
            return Err(Error::NotMonotone("image is not a face".into()));
        }
        Ok(face)
    }

    pub fn classify(&self) -> Result<MapKind> {
        self.check_monotone()?;
        let inj = self.is_injective();
        let surj = self.is_surjective();
        if inj && surj {
            let inv = {
                let mut v = vec![0; self.edge_fn.len()];
                for (i, &e) in self.edge_fn.iter().enumerate() {
                    v[e] = i;
                }
                v
            };
            let back = TreeMap { source: self.target.clone(), target: self.source.clone(), edge_fn: inv };
            if back.check_monotone().is_ok() {
                return Ok(MapKind::Iso);
            }
        }
        if inj {
            let face = self.image_face()?;
            let full_root = face.root == self.target.root();
            let full_leaves = face.leaves == self.target.leaves();
            return Ok(if full_root && full_leaves {
                MapKind::InnerFace
            } else if face.is_outer() {
                MapKind::OuterFace
            } else {
                MapKind::Face
            });
        }
        if surj {
            let mut img: Vec<Edge> = self.source.leaves().iter().map(|&l| self.edge_fn[l]).collect();
            img.sort_unstable();
            if img == self.target.leaves() {
                return Ok(MapKind::Degeneracy);
            }
        }
        Ok(MapKind::General)
    }

    /// Planar (degeneracy, inner face, outer face) factorization.
    pub fn factorize(&self) -> Result<Factorization> {
        self.check_monotone()?;
        let root = self.edge_fn[self.source.root()];
        let mut leaves: Vec<Edge> = self.source.leaves().iter().map(|&l| self.edge_fn[l]).collect();
        leaves.sort_unstable();
        let full = Subtree::from_tree(&self.target, 0);
        let outer = full.outer_face(root, &leaves);
        let image: BTreeSet<Edge> = self.edge_fn.iter().copied().collect();
        let removed: Vec<Edge> = outer.edges().iter().copied().filter(|e| !image.contains(e)).collect();
        let face = outer.remove_inner(&removed);
        if face.edge_set() != image {
            return Err(Error::NotMonotone("image is not a face".into()));
        }
        let name = |e: Edge| self.target.name(e).to_string();
        let (outer_tree, outer_ids) = outer.to_tree(name);
        let (face_tree, face_ids) = face.to_tree(name);
        let pos = |ids: &[Edge], e: Edge| ids.iter().position(|&x| x == e).unwrap();
        let degeneracy = TreeMap {
            source: self.source.clone(),
            target: face_tree.clone(),
            edge_fn: self.edge_fn.iter().map(|&e| pos(&face_ids, e)).collect(),
        };
        let inner = TreeMap {
            source: face_tree,
            target: outer_tree.clone(),
            edge_fn: face_ids.iter().map(|&e| pos(&outer_ids, e)).collect(),
        };
        let outer_map = TreeMap { source: outer_tree, target: self.target.clone(), edge_fn: outer_ids };
        Ok(Factorization { degeneracy, inner, outer: outer_map })
    }
}

/// Every monotone map `source → target`.
pub fn monotone_maps(source: &Tree, target: &Tree) -> Vec<Vec<Edge>> {
    let mut cuts_by_size: Vec<BTreeMap<usize, Vec<Vec<Edge>>>> = Vec::with_capacity(target.n_edges());
    for t in 0..target.n_edges() {
        let mut m: BTreeMap<usize, Vec<Vec<Edge>>> = BTreeMap::new();
        for c in target.cuts(t) {
            m.entry(c.len()).or_default().push(c);
        }
        cuts_by_size.push(m);
    }
    let mut out = Vec::new();
    let mut f = vec![usize::MAX; source.n_edges()];
    for r in 0..target.n_edges() {
        f[0] = r;
        extend_map(source, &cuts_by_size, 0, &mut f, &mut out);
    }
    out
}

fn extend_map(
    source: &Tree,
    cuts: &[BTreeMap<usize, Vec<Vec<Edge>>>],
    next: usize,
    f: &mut Vec<Edge>,
    out: &mut Vec<Vec<Edge>>,
) {
    // find the next vertex in preorder whose target is assigned
    let mut v = next;
    while v < source.n_edges() && source.is_leaf(v) {
        v += 1;
    }
    if v >= source.n_edges() {
        out.push(f.clone());
        return;
    }
    let kids = source.children(v).unwrap().to_vec();
    let t = f[v];
    let options = cuts[t].get(&kids.len()).cloned().unwrap_or_default();
    for cut in options {
        for perm in permutations(&cut) {
            for (i, &k) in kids.iter().enumerate() {
                f[k] = perm[i];
            }
            extend_map(source, cuts, v + 1, f, out);
        }
    }
}

pub fn permutations(v: &[Edge]) -> Vec<Vec<Edge>> {
    if v.len() <= 1 {
        return vec![v.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..v.len() {
        let mut rest = v.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first_tree() -> Tree {
        Tree::from_json(
            r#"{"edges":["r","d","e","f","a","b","c"],"root":"r",
                "vertices":{"r":["d","e","f"],"d":["a","b"],"f":["c"],"b":[]}}"#,
        )
        .unwrap()
    }

    #[test]
    fn corolla_maps() {
        let c2 = Tree::corolla(2);
        assert_eq!(monotone_maps(&c2, &c2).len(), 2);
    }

    #[test]
    fn degeneracy_and_face() {
        let l2 = Tree::linear(2);
        let l1 = Tree::linear(1);
        // e2 -> e1, e1 -> e1, e0 -> e0 (root e2 is index 0)
        let idx = |t: &Tree, s: &str| t.index(s).unwrap();
        let mut f = vec![0; 3];
        f[idx(&l2, "e2")] = idx(&l1, "e1");
        f[idx(&l2, "e1")] = idx(&l1, "e1");
        f[idx(&l2, "e0")] = idx(&l1, "e0");
        let m = TreeMap::new(l2, l1, f).unwrap();
        assert_eq!(m.classify().unwrap(), MapKind::Degeneracy);
    }

    #[test]
    fn outer_face_drops_stump() {
        let t = first_tree();
        let e = |s: &str| t.index(s).unwrap();
        let rel = BroadRelation { sources: vec![e("a"), e("b")], target: e("d") };
        let f = outer_face(&t, &rel).unwrap();
        assert_eq!(f.n_edges(), 3);
        assert_eq!(f.degree(), 1);
        assert!(f.is_leaf(f.index("b").unwrap()));
    }
}
