//! G-forests, orbital faces, quotients and grafting.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::broadposet::{validate_tree, Edge, RawTree, Tree};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, GroupFile, Subgroup};
use crate::subtree::Subtree;
use crate::treemaps::FaceDescriptor;

/// A forest with a G-action by edge permutations. Edge ids are global:
/// component `c` occupies `offsets[c]..offsets[c + 1]` in its own preorder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GForest {
    group: FiniteGroup,
    components: Vec<Tree>,
    offsets: Vec<usize>,
    action: Vec<Vec<Edge>>,
}

/// Either a named group (`trivial`, `Z<n>`, `Q8`) or an explicit table.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Named(String),
    Table(GroupFile),
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        match self {
            GroupSpec::Table(f) => FiniteGroup::from_file(f),
            GroupSpec::Named(n) => named_group(n),
        }
    }
}

pub fn named_group(n: &str) -> Result<FiniteGroup> {
    match n {
        "trivial" | "1" | "e" => Ok(FiniteGroup::trivial()),
        "Q8" | "quaternion" => Ok(FiniteGroup::quaternion()),
        s if s.starts_with('Z') => {
            let k: usize = s.trim_start_matches("Z").trim_start_matches('/').parse().map_err(|_| {
                Error::InvalidInput(format!("unknown group {s}"))
            })?;
            if k == 0 {
                return Err(Error::InvalidInput("Z0 is not finite".into()));
            }
            Ok(FiniteGroup::cyclic(k))
        }
        s => Err(Error::InvalidInput(format!("unknown group {s}"))),
    }
}

/// Interchange format: components plus generator edge permutations.
/// Edges omitted from a generator's map are fixed by it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GForestFile {
    pub group: GroupSpec,
    pub components: Vec<RawTree>,
    #[serde(default)]
    pub action: BTreeMap<String, BTreeMap<String, String>>,
}

/// A G-stable family of planar faces, one per covered component.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrbitalFace(pub BTreeSet<Subtree>);

impl OrbitalFace {
    pub fn faces(&self) -> impl Iterator<Item = &Subtree> {
        self.0.iter()
    }
    pub fn edges(&self) -> BTreeSet<Edge> {
        self.0.iter().flat_map(|f| f.edges().iter().copied()).collect()
    }
    pub fn contains(&self, f: &Subtree) -> bool {
        self.0.contains(f)
    }
}

#[derive(Clone, Debug)]
pub struct OrbitalFactorization {
    /// The planar orbital outer face through which the map factors.
    pub outer: OrbitalFace,
    /// Edges of the outer part removed by the inner part.
    pub removed: Vec<Edge>,
    /// The image faces.
    pub image: OrbitalFace,
}

impl GForest {
    pub fn new(group: FiniteGroup, components: Vec<Tree>, action: Vec<Vec<Edge>>) -> Result<GForest> {
        let mut offsets = vec![0];
        for c in &components {
            offsets.push(offsets.last().unwrap() + c.n_edges());
        }
        let f = GForest { group, components, offsets, action };
        f.check_names()?;
        f.check_action()?;
        Ok(f)
    }

    /// Single tree with trivial action.
    pub fn trivial(group: FiniteGroup, tree: Tree) -> GForest {
        let n = tree.n_edges();
        let action = vec![(0..n).collect(); group.order()];
        GForest { group, components: vec![tree], offsets: vec![0, n], action }
    }

    /// Derives the full action from generator permutations.
    pub fn from_generators(
        group: FiniteGroup,
        components: Vec<Tree>,
        gens: &[(Elem, Vec<Edge>)],
    ) -> Result<GForest> {
        let n: usize = components.iter().map(|c| c.n_edges()).sum();
        let mut action: Vec<Option<Vec<Edge>>> = vec![None; group.order()];
        action[group.identity()] = Some((0..n).collect());
        let mut queue = vec![group.identity()];
        while let Some(x) = queue.pop() {
            for (g, p) in gens {
                if p.len() != n {
                    return Err(Error::NotAnAction("generator permutation has wrong length".into()));
                }
                // (g x)(e) = g(x(e))
                let px = action[x].clone().unwrap();
                let composed: Vec<Edge> = px.iter().map(|&e| p[e]).collect();
                let y = group.mul(*g, x);
                match &action[y] {
                    Some(q) if *q != composed => {
                        return Err(Error::NotAnAction(format!(
                            "generator relations violated at {}",
                            group.name(y)
                        )))
                    }
                    Some(_) => {}
                    None => {
                        action[y] = Some(composed);
                        queue.push(y);
                    }
                }
            }
        }
        if action.iter().any(|a| a.is_none()) {
            return Err(Error::NotAnAction("generators do not generate the group".into()));
        }
        GForest::new(group, components, action.into_iter().map(|a| a.unwrap()).collect())
    }

    pub fn from_file(file: &GForestFile) -> Result<GForest> {
        let group = file.group.build()?;
        let components = file.components.iter().map(validate_tree).collect::<Result<Vec<_>>>()?;
        let mut names: BTreeMap<String, Edge> = BTreeMap::new();
        let mut off = 0;
        for c in &components {
            for (i, s) in c.names().iter().enumerate() {
                if names.insert(s.clone(), off + i).is_some() {
                    return Err(Error::InvalidInput(format!("edge {s} occurs in two components")));
                }
            }
            off += c.n_edges();
        }
        let mut gens = Vec::new();
        for (g, m) in &file.action {
            let gi = group.index_of(g).ok_or_else(|| Error::InvalidInput(format!("unknown element {g}")))?;
            let mut p: Vec<Edge> = (0..off).collect();
            for (a, b) in m {
                let ai = *names.get(a).ok_or_else(|| Error::OrphanEdge(a.clone()))?;
                let bi = *names.get(b).ok_or_else(|| Error::OrphanEdge(b.clone()))?;
                p[ai] = bi;
            }
            gens.push((gi, p));
        }
        GForest::from_generators(group, components, &gens)
    }

    pub fn from_json(s: &str) -> Result<GForest> {
        let f: GForestFile = serde_json::from_str(s)?;
        GForest::from_file(&f)
    }

    pub fn to_file(&self) -> GForestFile {
        let mut action = BTreeMap::new();
        for g in self.group.elements() {
            if g == self.group.identity() {
                continue;
            }
            let m: BTreeMap<String, String> = (0..self.n_edges())
                .filter(|&e| self.act(g, e) != e)
                .map(|e| (self.name(e).to_string(), self.name(self.act(g, e)).to_string()))
                .collect();
            action.insert(self.group.name(g).to_string(), m);
        }
        GForestFile {
            group: GroupSpec::Table(self.group.to_file()),
            components: self.components.iter().map(|c| c.to_raw()).collect(),
            action,
        }
    }

    fn check_names(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for c in &self.components {
            for s in c.names() {
                if !seen.insert(s.clone()) {
                    return Err(Error::InvalidInput(format!("edge {s} occurs twice in the forest")));
                }
            }
        }
        Ok(())
    }

    fn check_action(&self) -> Result<()> {
        let n = self.n_edges();
        let g = &self.group;
        if self.action.len() != g.order() {
            return Err(Error::NotAnAction("one permutation per element required".into()));
        }
        for x in g.elements() {
            let p = &self.action[x];
            let img: BTreeSet<Edge> = p.iter().copied().collect();
            if p.len() != n || img.len() != n || p.iter().any(|&e| e >= n) {
                return Err(Error::NotAnAction(format!("{} is not a permutation", g.name(x))));
            }
            for c in 0..self.components.len() {
                let target = self.component_of(p[self.offsets[c]]);
                if (self.offsets[c]..self.offsets[c + 1]).any(|e| self.component_of(p[e]) != target) {
                    return Err(Error::NotAnAction(format!(
                        "{} splits a component",
                        g.name(x)
                    )));
                }
            }
            for e in 0..n {
                match (self.children(e), self.children(p[e])) {
                    (None, None) => {}
                    (Some(a), Some(b)) => {
                        let mut ga: Vec<Edge> = a.iter().map(|&y| p[y]).collect();
                        ga.sort_unstable();
                        if ga != b {
                            return Err(Error::NotAnAction(format!(
                                "{} does not preserve the vertex at {}",
                                g.name(x),
                                self.name(e)
                            )));
                        }
                    }
                    _ => {
                        return Err(Error::NotAnAction(format!(
                            "{} does not preserve the vertex at {}",
                            g.name(x),
                            self.name(e)
                        )))
                    }
                }
            }
        }
        if self.action[g.identity()].iter().enumerate().any(|(i, &e)| i != e) {
            return Err(Error::NotAnAction("identity acts nontrivially".into()));
        }
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                if (0..n).any(|e| self.action[ab][e] != self.action[a][self.action[b][e]]) {
                    return Err(Error::NotAnAction(format!(
                        "action of {}*{} is not the composite",
                        g.name(a),
                        g.name(b)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
    pub fn components(&self) -> &[Tree] {
        &self.components
    }
    pub fn component(&self, c: usize) -> &Tree {
        &self.components[c]
    }
    pub fn n_components(&self) -> usize {
        self.components.len()
    }
    pub fn offset(&self, c: usize) -> usize {
        self.offsets[c]
    }
    pub fn n_edges(&self) -> usize {
        *self.offsets.last().unwrap()
    }
    pub fn action(&self) -> &[Vec<Edge>] {
        &self.action
    }
    pub fn component_of(&self, e: Edge) -> usize {
        self.offsets.partition_point(|&o| o <= e) - 1
    }
    pub fn local(&self, e: Edge) -> (usize, Edge) {
        let c = self.component_of(e);
        (c, e - self.offsets[c])
    }
    pub fn name(&self, e: Edge) -> &str {
        let (c, l) = self.local(e);
        self.components[c].name(l)
    }
    pub fn names(&self) -> Vec<String> {
        (0..self.n_edges()).map(|e| self.name(e).to_string()).collect()
    }
    pub fn edge(&self, name: &str) -> Result<Edge> {
        for (c, t) in self.components.iter().enumerate() {
            if let Some(i) = t.index(name) {
                return Ok(self.offsets[c] + i);
            }
        }
        Err(Error::InvalidInput(format!("unknown edge {name}")))
    }
    pub fn children(&self, e: Edge) -> Option<Vec<Edge>> {
        let (c, l) = self.local(e);
        let o = self.offsets[c];
        self.components[c].children(l).map(|k| k.iter().map(|&x| x + o).collect())
    }
    pub fn is_leaf(&self, e: Edge) -> bool {
        let (c, l) = self.local(e);
        self.components[c].is_leaf(l)
    }
    pub fn component_root(&self, c: usize) -> Edge {
        self.offsets[c]
    }
    pub fn is_root(&self, e: Edge) -> bool {
        self.offsets[..self.components.len()].contains(&e)
    }
    pub fn inner_edges(&self) -> Vec<Edge> {
        (0..self.n_edges()).filter(|&e| !self.is_root(e) && !self.is_leaf(e)).collect()
    }
    pub fn leaves(&self) -> Vec<Edge> {
        (0..self.n_edges()).filter(|&e| self.is_leaf(e)).collect()
    }
    pub fn is_open(&self) -> bool {
        self.components.iter().all(|t| t.is_open())
    }
    pub fn le_d(&self, s: Edge, t: Edge) -> bool {
        let (cs, ls) = self.local(s);
        let (ct, lt) = self.local(t);
        cs == ct && self.components[cs].le_d(ls, lt)
    }

    pub fn act(&self, g: Elem, e: Edge) -> Edge {
        self.action[g][e]
    }
    pub fn act_subtree(&self, g: Elem, s: &Subtree) -> Subtree {
        s.act(&self.action[g])
    }
    pub fn act_set(&self, g: Elem, s: &BTreeSet<Edge>) -> BTreeSet<Edge> {
        s.iter().map(|&e| self.act(g, e)).collect()
    }

    pub fn orbit(&self, e: Edge) -> BTreeSet<Edge> {
        self.group.elements().map(|g| self.act(g, e)).collect()
    }
    pub fn isotropy(&self, e: Edge) -> Subgroup {
        Subgroup(self.group.elements().filter(|&g| self.act(g, e) == e).collect())
    }
    /// Orbits ordered by least planar representative.
    pub fn edge_orbits(&self) -> Vec<BTreeSet<Edge>> {
        let mut seen = vec![false; self.n_edges()];
        let mut out = Vec::new();
        for e in 0..self.n_edges() {
            if !seen[e] {
                let o = self.orbit(e);
                for &x in &o {
                    seen[x] = true;
                }
                out.push(o);
            }
        }
        out
    }
    pub fn is_g_stable(&self, s: &BTreeSet<Edge>) -> bool {
        self.group.elements().all(|g| s.iter().all(|&e| s.contains(&self.act(g, e))))
    }
    pub fn is_transitive(&self) -> bool {
        let roots: BTreeSet<Edge> = self.orbit(0);
        roots.len() == self.components.len() && roots.iter().all(|&r| self.is_root(r))
    }
    pub fn component_stabilizer(&self, c: usize) -> Subgroup {
        self.isotropy(self.component_root(c))
    }

    pub fn full_component(&self, c: usize) -> Subtree {
        Subtree::from_tree(&self.components[c], self.offsets[c])
    }
    pub fn full_components(&self) -> Vec<Subtree> {
        (0..self.components.len()).map(|c| self.full_component(c)).collect()
    }

    /// Every planar face of every component.
    pub fn faces(&self) -> Vec<Subtree> {
        let mut v: Vec<Subtree> = self.full_components().iter().flat_map(|c| c.faces()).collect();
        v.sort();
        v
    }

    pub fn descriptor(&self, face: &Subtree) -> (usize, FaceDescriptor) {
        let c = self.component_of(face.root());
        (c, FaceDescriptor::from_subtree_offset(&self.components[c], self.offsets[c], face))
    }

    pub fn face_from_descriptor(&self, c: usize, d: &FaceDescriptor) -> Subtree {
        d.to_subtree_offset(&self.components[c], self.offsets[c])
    }

    /// `gU` together with the edge bijection `U ≅ gU`.
    pub fn face_action(&self, g: Elem, u: &Subtree) -> (Subtree, Vec<(Edge, Edge)>) {
        let witness = u.edges().iter().map(|&e| (e, self.act(g, e))).collect();
        (self.act_subtree(g, u), witness)
    }

    /// Isotropy of a planar face as an element of the G-poset of faces.
    pub fn face_isotropy(&self, u: &Subtree) -> Subgroup {
        Subgroup(self.group.elements().filter(|&g| self.act_subtree(g, u) == *u).collect())
    }

    pub fn outer_closure(&self, u: &Subtree) -> Subtree {
        let c = self.component_of(u.root());
        self.full_component(c).outer_closure_of(u)
    }

    /// The smallest planar orbital face containing the planar face `u`.
    pub fn minimal_orbital_face(&self, u: &Subtree) -> OrbitalFace {
        let closure = self.outer_closure(u);
        let stab = self.isotropy(u.root());
        // HŪ: union of the H-translates, all outer faces with root r_U
        let mut verts: BTreeMap<Edge, Vec<Edge>> = BTreeMap::new();
        for &h in stab.elements() {
            let hu = self.act_subtree(h, &closure);
            for (t, c) in hu.vertices() {
                verts.insert(*t, c.clone());
            }
        }
        let h_union = Subtree::new(u.root(), verts);
        let in_u: BTreeSet<Edge> = u.edges().iter().copied().collect();
        let drop: Vec<Edge> = h_union
            .edges()
            .iter()
            .copied()
            .filter(|&e| self.group.elements().all(|g| !in_u.contains(&self.act(g, e))))
            .collect();
        let core = if drop.is_empty() { h_union } else { h_union.remove_inner(&drop) };
        OrbitalFace(self.group.elements().map(|g| self.act_subtree(g, &core)).collect())
    }

    /// Every planar orbital face.
    pub fn orbital_faces(&self) -> Vec<OrbitalFace> {
        let set: BTreeSet<OrbitalFace> = self.faces().iter().map(|u| self.minimal_orbital_face(u)).collect();
        set.into_iter().collect()
    }

    /// Restricts to a G-stable family of faces, yielding a G-forest whose
    /// edges keep their names.
    pub fn restrict(&self, family: &OrbitalFace) -> Result<(GForest, Vec<Edge>)> {
        let mut trees = Vec::new();
        let mut ids: Vec<Edge> = Vec::new();
        for f in family.faces() {
            let (t, order) = f.to_tree(|e| self.name(e).to_string());
            trees.push(t);
            ids.extend(order);
        }
        let pos: BTreeMap<Edge, usize> = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        if pos.len() != ids.len() {
            return Err(Error::NotInjective("faces overlap".into()));
        }
        let mut action = Vec::new();
        for g in self.group.elements() {
            let mut p = Vec::with_capacity(ids.len());
            for &e in &ids {
                let ge = self.act(g, e);
                p.push(*pos.get(&ge).ok_or_else(|| Error::NotGStable("family is not G-stable".into()))?);
            }
            action.push(p);
        }
        Ok((GForest::new(self.group.clone(), trees, action)?, ids))
    }

    /// Factors an edge-injective equivariant map `source → self`.
    pub fn orbital_factorize(&self, source: &GForest, edge_fn: &[Edge]) -> Result<OrbitalFactorization> {
        if edge_fn.len() != source.n_edges() {
            return Err(Error::InvalidInput("edge function has wrong length".into()));
        }
        let img: BTreeSet<Edge> = edge_fn.iter().copied().collect();
        if img.len() != edge_fn.len() {
            return Err(Error::NotInjective("two edges share an image".into()));
        }
        if self.group != source.group {
            return Err(Error::NotEquivariant("groups differ".into()));
        }
        for g in self.group.elements() {
            for e in 0..source.n_edges() {
                if edge_fn[source.act(g, e)] != self.act(g, edge_fn[e]) {
                    return Err(Error::NotEquivariant(format!(
                        "{} at edge {}",
                        self.group.name(g),
                        source.name(e)
                    )));
                }
            }
        }
        let mut outer = BTreeSet::new();
        let mut image = BTreeSet::new();
        let mut removed = BTreeSet::new();
        for c in 0..source.n_components() {
            let comp = source.full_component(c);
            let root = edge_fn[comp.root()];
            let mut leaves: Vec<Edge> = comp.leaves().iter().map(|&l| edge_fn[l]).collect();
            leaves.sort_unstable();
            let tc = self.component_of(root);
            let full = self.full_component(tc);
            for (t, kids) in comp.vertices() {
                let k: Vec<Edge> = kids.iter().map(|&x| edge_fn[x]).collect();
                if !full.is_relation(&k, edge_fn[*t]) {
                    return Err(Error::NotMonotone(source.name(*t).to_string()));
                }
            }
            let o = full.outer_face(root, &leaves);
            let comp_img: BTreeSet<Edge> = comp.edges().iter().map(|&e| edge_fn[e]).collect();
            let rem: Vec<Edge> = o.edges().iter().copied().filter(|e| !comp_img.contains(e)).collect();
            let face = o.remove_inner(&rem);
            if face.edge_set() != comp_img {
                return Err(Error::NotMonotone("component image is not a face".into()));
            }
            removed.extend(rem);
            outer.insert(o);
            image.insert(face);
        }
        Ok(OrbitalFactorization {
            outer: OrbitalFace(outer),
            removed: removed.into_iter().collect(),
            image: OrbitalFace(image),
        })
    }

    /// `T/G` on edge orbits, orbits ordered by least planar representative.
    pub fn quotient(&self) -> Tree {
        let orbits = self.edge_orbits();
        let mut orbit_of = vec![0; self.n_edges()];
        for (i, o) in orbits.iter().enumerate() {
            for &e in o {
                orbit_of[e] = i;
            }
        }
        let names: Vec<String> = orbits
            .iter()
            .map(|o| format!("G{}", self.name(*o.iter().next().unwrap())))
            .collect();
        let children: Vec<Option<Vec<usize>>> = orbits
            .iter()
            .map(|o| {
                let rep = *o.iter().next().unwrap();
                self.children(rep).map(|c| {
                    let s: BTreeSet<usize> = c.iter().map(|&x| orbit_of[x]).collect();
                    s.into_iter().collect()
                })
            })
            .collect();
        let root = orbit_of[0];
        Tree::build(names, children, root)
    }

    /// Orbit index of each edge, matching [`GForest::quotient`]'s naming.
    pub fn orbit_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.n_edges()];
        for (i, o) in self.edge_orbits().iter().enumerate() {
            for &e in o {
                idx[e] = i;
            }
        }
        idx
    }

    /// Grafts `upper` onto a leaf orbit. `matching` sends leaves of `self`
    /// to roots of `upper`; by default edges are matched by name.
    pub fn graft(&self, upper: &GForest, matching: Option<&BTreeMap<String, String>>) -> Result<GForest> {
        if self.group != upper.group {
            return Err(Error::OrbitMismatch("groups differ".into()));
        }
        let upper_roots: Vec<Edge> = (0..upper.n_components()).map(|c| upper.component_root(c)).collect();
        let mut m: BTreeMap<Edge, Edge> = BTreeMap::new();
        match matching {
            Some(mm) => {
                for (a, b) in mm {
                    m.insert(self.edge(a)?, upper.edge(b)?);
                }
            }
            None => {
                for &r in &upper_roots {
                    let leaf = self.edge(upper.name(r)).map_err(|_| {
                        Error::OrbitMismatch(format!("no leaf named {}", upper.name(r)))
                    })?;
                    m.insert(leaf, r);
                }
            }
        }
        let targets: BTreeSet<Edge> = m.values().copied().collect();
        if targets.len() != m.len() || targets != upper_roots.iter().copied().collect() {
            return Err(Error::OrbitMismatch("matching is not a bijection onto the roots".into()));
        }
        for (&a, &b) in &m {
            if !self.is_leaf(a) {
                return Err(Error::OrbitMismatch(format!("{} is not a leaf", self.name(a))));
            }
            for g in self.group.elements() {
                if m.get(&self.act(g, a)) != Some(&upper.act(g, b)) {
                    return Err(Error::OrbitMismatch(format!(
                        "matching not equivariant at {} (isotropy {:?} vs {:?})",
                        self.name(a),
                        self.group.subgroup_names(&self.isotropy(a)),
                        self.group.subgroup_names(&upper.isotropy(b)),
                    )));
                }
            }
        }
        // global ids: self's edges, then upper's non-root edges
        let n0 = self.n_edges();
        let mut upper_id = vec![usize::MAX; upper.n_edges()];
        let mut next = n0;
        for e in 0..upper.n_edges() {
            if !upper.is_root(e) {
                upper_id[e] = next;
                next += 1;
            }
        }
        for (&a, &b) in &m {
            upper_id[b] = a;
        }
        let total = next;
        let mut names: Vec<String> = (0..n0).map(|e| self.name(e).to_string()).collect();
        for e in 0..upper.n_edges() {
            if !upper.is_root(e) {
                names.push(upper.name(e).to_string());
            }
        }
        let uniq: BTreeSet<&String> = names.iter().collect();
        if uniq.len() != names.len() {
            return Err(Error::InvalidInput("edge names collide after grafting".into()));
        }
        let mut children: Vec<Option<Vec<usize>>> = vec![None; total];
        for e in 0..n0 {
            children[e] = self.children(e);
        }
        for e in 0..upper.n_edges() {
            if let Some(c) = upper.children(e) {
                children[upper_id[e]] = Some(c.iter().map(|&x| upper_id[x]).collect());
            }
        }
        let mut action = Vec::new();
        for g in self.group.elements() {
            let mut p = vec![0; total];
            for e in 0..n0 {
                p[e] = self.act(g, e);
            }
            for e in 0..upper.n_edges() {
                p[upper_id[e]] = upper_id[upper.act(g, e)];
            }
            action.push(p);
        }
        forest_from_global(self.group.clone(), names, children, action)
    }
}

/// Builds a G-forest from globally indexed data in any order.
pub fn forest_from_global(
    group: FiniteGroup,
    names: Vec<String>,
    children: Vec<Option<Vec<usize>>>,
    action: Vec<Vec<usize>>,
) -> Result<GForest> {
    let n = names.len();
    let mut has_parent = vec![false; n];
    for c in children.iter().flatten() {
        for &x in c {
            has_parent[x] = true;
        }
    }
    let roots: Vec<usize> = (0..n).filter(|&e| !has_parent[e]).collect();
    let mut trees = Vec::new();
    let mut new_id = vec![0; n];
    let mut off = 0;
    for &r in &roots {
        // collect component in preorder
        let mut order = Vec::new();
        let mut stack = vec![r];
        while let Some(x) = stack.pop() {
            order.push(x);
            if let Some(c) = &children[x] {
                stack.extend(c.iter().rev().copied());
            }
        }
        let pos: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let t_names = order.iter().map(|&e| names[e].clone()).collect();
        let t_children = order
            .iter()
            .map(|&e| children[e].as_ref().map(|c| c.iter().map(|x| pos[x]).collect()))
            .collect();
        trees.push(Tree::build(t_names, t_children, 0));
        for (i, &e) in order.iter().enumerate() {
            new_id[e] = off + i;
        }
        off += order.len();
    }
    if off != n {
        return Err(Error::CycleDetected(vec![]));
    }
    let mut act2 = Vec::new();
    for p in &action {
        let mut q = vec![0; n];
        for e in 0..n {
            q[new_id[e]] = new_id[p[e]];
        }
        act2.push(q);
    }
    GForest::new(group, trees, act2)
}

/// `G ·_H T` for an H-action on `tree` given as one permutation per element
/// of `h` (in the order of `h.elements()`).
pub fn induce(group: &FiniteGroup, h: &Subgroup, tree: &Tree, h_action: &[Vec<Edge>]) -> Result<GForest> {
    if h_action.len() != h.order() {
        return Err(Error::NotAnAction("one permutation per subgroup element required".into()));
    }
    let pos_in_h = |x: Elem| h.elements().iter().position(|&y| y == x);
    // validate the H-action on its own
    for (i, &a) in h.elements().iter().enumerate() {
        for (j, &b) in h.elements().iter().enumerate() {
            let ab = pos_in_h(group.mul(a, b)).ok_or_else(|| Error::NotAnAction("H is not a subgroup".into()))?;
            for e in 0..tree.n_edges() {
                if h_action[ab][e] != h_action[i][h_action[j][e]] {
                    return Err(Error::NotAnAction("H-action is not multiplicative".into()));
                }
            }
        }
    }
    let reps = group.coset_reps(h);
    let n = tree.n_edges();
    let mut comps = Vec::new();
    for &g in &reps {
        if g == group.identity() {
            comps.push(tree.clone());
        } else {
            let gname = group.name(g).to_string();
            comps.push(tree.renamed(|s| format!("{gname}.{s}")));
        }
    }
    let mut action = Vec::new();
    for x in group.elements() {
        let mut p = vec![0; n * reps.len()];
        for (i, &gi) in reps.iter().enumerate() {
            let xg = group.mul(x, gi);
            // xg = g_j h
            let (j, hh) = reps
                .iter()
                .enumerate()
                .find_map(|(j, &gj)| {
                    let hh = group.mul(group.inv(gj), xg);
                    pos_in_h(hh).map(|k| (j, k))
                })
                .unwrap();
            for e in 0..n {
                p[i * n + e] = j * n + h_action[hh][e];
            }
        }
        action.push(p);
    }
    GForest::new(group.clone(), comps, action)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_induction_has_regular_components() {
        let g = FiniteGroup::cyclic(3);
        let t = Tree::corolla(2);
        let f = induce(&g, &g.trivial_subgroup(), &t, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(f.n_components(), 3);
        assert!(f.is_transitive());
        assert_eq!(f.isotropy(0).order(), 1);
    }

    #[test]
    fn swapped_corolla() {
        let g = FiniteGroup::cyclic(2);
        let t = Tree::corolla(2);
        let f = induce(&g, &g.whole(), &t, &[vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        assert_eq!(f.n_components(), 1);
        assert_eq!(f.quotient().n_edges(), 2);
    }

    #[test]
    fn bad_action_rejected() {
        let g = FiniteGroup::cyclic(2);
        // swap a leaf with the root
        let t = Tree::corolla(2);
        assert!(induce(&g, &g.whole(), &t, &[vec![0, 1, 2], vec![1, 0, 2]]).is_err());
    }
}
