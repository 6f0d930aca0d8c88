//! Face-closed G-stable subcomplexes of an ambient broad poset.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::broadposet::Edge;
use crate::equivariance::GForest;
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, GroupFile, Subgroup};
use crate::subtree::{subsets, Subtree};

/// Edge names plus a G-action by edge permutations. Cells of complexes are
/// subtrees whose edges are indices into `names`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambient {
    group: FiniteGroup,
    names: Vec<String>,
    action: Vec<Vec<Edge>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmbientFile {
    pub group: GroupFile,
    pub edges: Vec<String>,
    /// Element name to the images of `edges`, in order.
    pub action: BTreeMap<String, Vec<String>>,
}

/// A cell written with edge names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellJson {
    pub root: String,
    #[serde(default)]
    pub vertices: BTreeMap<String, Vec<String>>,
}

impl Ambient {
    pub fn new(group: FiniteGroup, names: Vec<String>, action: Vec<Vec<Edge>>) -> Result<Ambient> {
        let n = names.len();
        if action.len() != group.order() || action.iter().any(|p| p.len() != n) {
            return Err(Error::NotAnAction("ambient action has wrong shape".into()));
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                if (0..n).any(|e| action[ab][e] != action[a][action[b][e]]) {
                    return Err(Error::NotAnAction("ambient action is not multiplicative".into()));
                }
            }
        }
        Ok(Ambient { group, names, action })
    }

    pub fn of_forest(f: &GForest) -> Ambient {
        Ambient { group: f.group().clone(), names: f.names(), action: f.action().to_vec() }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn name(&self, e: Edge) -> &str {
        &self.names[e]
    }
    pub fn n_edges(&self) -> usize {
        self.names.len()
    }
    pub fn action(&self) -> &[Vec<Edge>] {
        &self.action
    }
    pub fn edge(&self, name: &str) -> Result<Edge> {
        self.names
            .iter()
            .position(|x| x == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown edge {name}")))
    }
    pub fn act_edge(&self, g: Elem, e: Edge) -> Edge {
        self.action[g][e]
    }
    pub fn act(&self, g: Elem, cell: &Subtree) -> Subtree {
        cell.act(&self.action[g])
    }
    pub fn act_set(&self, g: Elem, s: &BTreeSet<Edge>) -> BTreeSet<Edge> {
        s.iter().map(|&e| self.action[g][e]).collect()
    }
    pub fn is_g_stable(&self, s: &BTreeSet<Edge>) -> bool {
        self.group.elements().all(|g| self.act_set(g, s) == *s)
    }
    pub fn isotropy(&self, cell: &Subtree) -> Subgroup {
        Subgroup(self.group.elements().filter(|&g| self.act(g, cell) == *cell).collect())
    }
    pub fn orbit(&self, cell: &Subtree) -> BTreeSet<Subtree> {
        self.group.elements().map(|g| self.act(g, cell)).collect()
    }

    pub fn cell_to_json(&self, c: &Subtree) -> CellJson {
        CellJson {
            root: self.name(c.root()).to_string(),
            vertices: c
                .vertices()
                .iter()
                .map(|(t, k)| (self.name(*t).to_string(), k.iter().map(|&x| self.name(x).to_string()).collect()))
                .collect(),
        }
    }

    pub fn cell_from_json(&self, c: &CellJson) -> Result<Subtree> {
        let root = self.edge(&c.root)?;
        let mut vertices = BTreeMap::new();
        for (t, k) in &c.vertices {
            let kids = k.iter().map(|x| self.edge(x)).collect::<Result<Vec<_>>>()?;
            vertices.insert(self.edge(t)?, kids);
        }
        Ok(Subtree::new(root, vertices))
    }

    pub fn to_file(&self) -> AmbientFile {
        AmbientFile {
            group: self.group.to_file(),
            edges: self.names.clone(),
            action: self
                .group
                .elements()
                .map(|g| {
                    (
                        self.group.name(g).to_string(),
                        self.action[g].iter().map(|&e| self.names[e].clone()).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn from_file(f: &AmbientFile) -> Result<Ambient> {
        let group = FiniteGroup::from_file(&f.group)?;
        let idx: BTreeMap<&str, Edge> = f.edges.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if idx.len() != f.edges.len() {
            return Err(Error::InvalidInput("duplicate ambient edge".into()));
        }
        let mut action = vec![Vec::new(); group.order()];
        for (g, imgs) in &f.action {
            let gi = group.index_of(g).ok_or_else(|| Error::InvalidInput(format!("unknown element {g}")))?;
            action[gi] = imgs
                .iter()
                .map(|s| idx.get(s.as_str()).copied().ok_or_else(|| Error::OrphanEdge(s.clone())))
                .collect::<Result<Vec<_>>>()?;
        }
        Ambient::new(group, f.edges.clone(), action)
    }
}

/// A set of cells closed under faces and the G-action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    ambient: Arc<Ambient>,
    cells: BTreeSet<Subtree>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    pub ambient: AmbientFile,
    pub maximal: Vec<CellJson>,
}

impl Complex {
    pub fn empty(ambient: Arc<Ambient>) -> Complex {
        Complex { ambient, cells: BTreeSet::new() }
    }

    /// Closure of `gens` under faces and the action.
    pub fn generated<'a>(ambient: Arc<Ambient>, gens: impl IntoIterator<Item = &'a Subtree>) -> Complex {
        let mut c = Complex::empty(ambient);
        for g in gens {
            c.add_generated(g);
        }
        c
    }

    /// Wraps a cell set the caller knows to be closed.
    pub fn from_closed(ambient: Arc<Ambient>, cells: BTreeSet<Subtree>) -> Complex {
        Complex { ambient, cells }
    }

    pub fn add_generated(&mut self, gen: &Subtree) {
        if self.cells.contains(gen) {
            return;
        }
        let faces = gen.faces();
        for g in self.ambient.group.elements() {
            for f in &faces {
                self.cells.insert(self.ambient.act(g, f));
            }
        }
    }

    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }
    pub fn cells(&self) -> &BTreeSet<Subtree> {
        &self.cells
    }
    pub fn contains(&self, v: &Subtree) -> bool {
        self.cells.contains(v)
    }
    pub fn len(&self) -> usize {
        self.cells.len()
    }
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
    pub fn is_subset(&self, other: &Complex) -> bool {
        self.cells.is_subset(&other.cells)
    }
    pub fn union(&self, other: &Complex) -> Complex {
        Complex { ambient: self.ambient.clone(), cells: self.cells.union(&other.cells).cloned().collect() }
    }
    pub fn insert_cells(&mut self, cells: impl IntoIterator<Item = Subtree>) {
        self.cells.extend(cells);
    }

    /// Members that are not proper faces of other members.
    pub fn maximal(&self) -> Vec<Subtree> {
        let mut out: Vec<Subtree> = Vec::new();
        let mut by_size: Vec<&Subtree> = self.cells.iter().collect();
        by_size.sort_by(|a, b| b.size().cmp(&a.size()).then(a.cmp(b)));
        for c in by_size {
            if !out.iter().any(|m| m.contains_face(c)) {
                out.push(c.clone());
            }
        }
        out.sort();
        out
    }

    pub fn is_face_closed(&self) -> bool {
        self.cells.iter().all(|c| c.faces().iter().all(|f| self.cells.contains(f)))
    }
    pub fn is_g_stable(&self) -> bool {
        self.ambient
            .group
            .elements()
            .all(|g| self.cells.iter().all(|c| self.cells.contains(&self.ambient.act(g, c))))
    }

    pub fn to_file(&self) -> ComplexFile {
        ComplexFile {
            ambient: self.ambient.to_file(),
            maximal: self.maximal().iter().map(|c| self.ambient.cell_to_json(c)).collect(),
        }
    }

    pub fn from_file(f: &ComplexFile) -> Result<Complex> {
        let amb = Arc::new(Ambient::from_file(&f.ambient)?);
        let gens = f.maximal.iter().map(|c| amb.cell_from_json(c)).collect::<Result<Vec<_>>>()?;
        Ok(Complex::generated(amb, &gens))
    }
}

fn checked_inner_set(f: &GForest, edges: &BTreeSet<Edge>) -> Result<()> {
    if edges.is_empty() {
        return Err(Error::EmptyE);
    }
    let inner: BTreeSet<Edge> = f.inner_edges().into_iter().collect();
    if let Some(e) = edges.iter().find(|e| !inner.contains(e)) {
        return Err(Error::NotInner(f.name(*e).to_string()));
    }
    if !f.is_g_stable(edges) {
        let e = edges
            .iter()
            .find(|&&e| f.group().elements().any(|g| !edges.contains(&f.act(g, e))))
            .unwrap();
        return Err(Error::NotGStable(f.name(*e).to_string()));
    }
    Ok(())
}

/// Whether `v` is an inner face of its whole component removing only edges of `edges`.
fn is_inner_face_within(f: &GForest, v: &Subtree, edges: &BTreeSet<Edge>) -> bool {
    let c = f.component_of(v.root());
    let full = f.full_component(c);
    v.root() == full.root()
        && v.leaves() == full.leaves()
        && full.edges().iter().all(|e| v.has_edge(*e) || edges.contains(e))
}

fn all_faces(f: &GForest) -> Vec<Subtree> {
    f.faces()
}

pub fn representable(f: &GForest) -> Complex {
    Complex::from_closed(Arc::new(Ambient::of_forest(f)), all_faces(f).into_iter().collect())
}

/// Every planar face except the full components.
pub fn boundary(f: &GForest) -> Complex {
    let full: BTreeSet<Subtree> = f.full_components().into_iter().collect();
    let cells = all_faces(f).into_iter().filter(|v| !full.contains(v)).collect();
    Complex::from_closed(Arc::new(Ambient::of_forest(f)), cells)
}

/// The G-inner horn: omits the faces `T_c − D` with `D ⊆ E`.
pub fn horn(f: &GForest, edges: &BTreeSet<Edge>) -> Result<Complex> {
    checked_inner_set(f, edges)?;
    let cells = all_faces(f).into_iter().filter(|v| !is_inner_face_within(f, v, edges)).collect();
    Ok(Complex::from_closed(Arc::new(Ambient::of_forest(f)), cells))
}

/// Whether the minimal orbital face of `v` is an inner face `T − E'` with
/// `E' ⊆ edges`, over the component orbit of `v`.
pub fn orbital_excluded(f: &GForest, v: &Subtree, edges: &BTreeSet<Edge>) -> bool {
    let gv = f.minimal_orbital_face(v);
    let comps: BTreeSet<usize> = f.group().elements().map(|g| f.component_of(f.act(g, v.root()))).collect();
    gv.faces().count() == comps.len() && gv.faces().all(|w| is_inner_face_within(f, w, edges))
}

/// The orbital G-inner horn: faces whose minimal orbital face is not of
/// the form `T − E'`.
pub fn orbital_horn(f: &GForest, edges: &BTreeSet<Edge>) -> Result<Complex> {
    checked_inner_set(f, edges)?;
    let cells = all_faces(f).into_iter().filter(|v| !orbital_excluded(f, v, edges)).collect();
    Ok(Complex::from_closed(Arc::new(Ambient::of_forest(f)), cells))
}

/// Single edges and single-vertex outer faces.
pub fn segal_core(f: &GForest) -> Complex {
    let cells = all_faces(f)
        .into_iter()
        .filter(|v| match v.degree() {
            0 => true,
            1 => f.children(v.root()).as_deref() == v.children(v.root()),
            _ => false,
        })
        .collect();
    Complex::from_closed(Arc::new(Ambient::of_forest(f)), cells)
}

/// One attachment `G ·_K (Λ^Ξ[W] → Ω[W])` with `W` a cell of the ambient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HornStep {
    pub tree: Subtree,
    pub isotropy: Subgroup,
    pub xi: BTreeSet<Edge>,
}

impl HornStep {
    /// Number of new cells the attachment adds.
    pub fn cell_count(&self, group: &FiniteGroup) -> usize {
        (group.order() / self.isotropy.order()) << self.xi.len()
    }

    pub fn is_single_orbit(&self, amb: &Ambient) -> bool {
        let Some(&e) = self.xi.iter().next() else { return false };
        let orbit: BTreeSet<Edge> = self.isotropy.elements().iter().map(|&k| amb.act_edge(k, e)).collect();
        orbit == self.xi
    }
}

/// Attaches a horn step to `a`, checking that it is a pushout: the horn
/// lands in `a`, proper outer faces of `W` are present, and the new cells
/// `g(W − D)` are absent and pairwise distinct across cosets of `K`.
pub fn attach_horn(a: &Complex, step: &HornStep, index: usize) -> Result<Complex> {
    let amb = a.ambient().clone();
    let group = amb.group();
    let fail = |reason: String| Error::NotAPushout { step: index, reason };
    let w = &step.tree;
    if step.xi.is_empty() {
        return Err(fail("empty characteristic set".into()));
    }
    let inner: BTreeSet<Edge> = w.inner_edges().into_iter().collect();
    if !step.xi.is_subset(&inner) {
        return Err(fail("characteristic edges are not inner edges of the attached tree".into()));
    }
    for &k in step.isotropy.elements() {
        if amb.act(k, w) != *w || amb.act_set(k, &step.xi) != step.xi {
            return Err(fail(format!("{} does not fix the attached tree", group.name(k))));
        }
    }
    let xi: Vec<Edge> = step.xi.iter().copied().collect();
    let removable: Vec<BTreeSet<Edge>> = subsets(&xi).into_iter().map(|d| d.into_iter().collect()).collect();
    let reps = group.coset_reps(&step.isotropy);
    let mut new_cells = BTreeSet::new();
    for face in w.faces() {
        let missing: BTreeSet<Edge> = w.edges().iter().copied().filter(|e| !face.has_edge(*e)).collect();
        let is_new = face.root() == w.root() && face.leaves() == w.leaves() && missing.is_subset(&step.xi);
        for &g in &reps {
            let gf = amb.act(g, &face);
            if is_new {
                if a.contains(&gf) {
                    return Err(fail(format!(
                        "inner face removing {:?} already present",
                        missing.iter().map(|&e| amb.name(amb.act_edge(g, e))).collect::<Vec<_>>()
                    )));
                }
                if !new_cells.insert(gf) {
                    return Err(fail("two conjugates attach the same cell".into()));
                }
            } else if !a.contains(&gf) {
                return Err(fail(format!(
                    "horn face rooted at {} is missing from the complex",
                    amb.name(gf.root())
                )));
            }
        }
    }
    debug_assert_eq!(new_cells.len(), reps.len() * removable.len());
    let mut out = a.clone();
    out.insert_cells(new_cells);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::broadposet::Tree;

    #[test]
    fn corolla_boundary() {
        let f = GForest::trivial(FiniteGroup::trivial(), Tree::corolla(2));
        assert_eq!(boundary(&f).len(), 3);
        assert_eq!(segal_core(&f).len(), 4);
    }

    #[test]
    fn stick_boundary_is_empty() {
        let f = GForest::trivial(FiniteGroup::trivial(), Tree::eta("x"));
        assert!(boundary(&f).is_empty());
    }

    #[test]
    fn horn_rejects_leaf() {
        let f = GForest::trivial(FiniteGroup::trivial(), Tree::corolla(2));
        assert!(matches!(horn(&f, &BTreeSet::from([1])), Err(Error::NotInner(_))));
        assert!(matches!(horn(&f, &BTreeSet::new()), Err(Error::EmptyE)));
    }
}
