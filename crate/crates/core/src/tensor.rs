//! Tensor products of G-forests and their maximal subtrees.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::anodyne::{build_filtration, CharCollection, CharReport, Certificate, GPoset};
use crate::broadposet::Edge;
use crate::complexes::{self, Ambient, Complex};
use crate::equivariance::GForest;
use crate::error::{Error, Result};
use crate::subtree::Subtree;

/// Which vertex of an edge `(s, t)` a subtree uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VertexKind {
    S,
    T,
}

/// Order and characteristic-edge convention for `Max(S ⊗ T)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TensorMode {
    /// Both factors open; `Ξ^U` are edges over `Gξ` topped by a T-vertex.
    #[default]
    Standard,
    /// Linear first factor, second factor with stumps: the order is
    /// reversed and `Ξ^U` are edges over `Gξ` sitting directly above a
    /// T-vertex.
    Reversed,
}

#[derive(Clone, Debug)]
pub struct TensorProduct {
    left: GForest,
    right: GForest,
    ambient: Arc<Ambient>,
}

/// The maximal subtrees with their generated order.
#[derive(Clone, Debug)]
pub struct Percolation {
    pub trees: Vec<Subtree>,
    /// Generating relations `(i, j)`: `trees[i] < trees[j]`.
    pub generators: Vec<(usize, usize)>,
    pub poset: GPoset,
}

#[derive(Clone, Debug)]
pub struct TensorReport {
    pub report: CharReport,
    pub percolation: Percolation,
    pub xi: Vec<BTreeSet<Edge>>,
    pub collection: CharCollection,
    pub certificate: Option<Certificate>,
}

impl TensorProduct {
    pub fn new(left: &GForest, right: &GForest) -> Result<TensorProduct> {
        if left.group() != right.group() {
            return Err(Error::InvalidInput("factors carry different groups".into()));
        }
        let nl = left.n_edges();
        let nr = right.n_edges();
        let mut names = Vec::with_capacity(nl * nr);
        for s in 0..nl {
            for t in 0..nr {
                names.push(format!("{}_{}", right.name(t), left.name(s)));
            }
        }
        let action = left
            .group()
            .elements()
            .map(|g| {
                (0..nl * nr)
                    .map(|e| left.act(g, e / nr) * nr + right.act(g, e % nr))
                    .collect()
            })
            .collect();
        let ambient = Arc::new(Ambient::new(left.group().clone(), names, action)?);
        Ok(TensorProduct { left: left.clone(), right: right.clone(), ambient })
    }

    pub fn left(&self) -> &GForest {
        &self.left
    }
    pub fn right(&self) -> &GForest {
        &self.right
    }
    pub fn ambient(&self) -> &Arc<Ambient> {
        &self.ambient
    }
    pub fn id(&self, s: Edge, t: Edge) -> Edge {
        s * self.right.n_edges() + t
    }
    pub fn split(&self, e: Edge) -> (Edge, Edge) {
        (e / self.right.n_edges(), e % self.right.n_edges())
    }
    pub fn n_edges(&self) -> usize {
        self.ambient.n_edges()
    }

    /// Children of the S- or T-vertex at `e`, if that vertex exists.
    pub fn vertex(&self, e: Edge, kind: VertexKind) -> Option<Vec<Edge>> {
        let (s, t) = self.split(e);
        let mut v: Vec<Edge> = match kind {
            VertexKind::S => self.left.children(s)?.into_iter().map(|x| self.id(x, t)).collect(),
            VertexKind::T => self.right.children(t)?.into_iter().map(|x| self.id(s, x)).collect(),
        };
        v.sort_unstable();
        Some(v)
    }

    /// The kind of the vertex a subtree uses at `e`; S wins only when the
    /// two vertices coincide, which happens for `η`-shaped factors.
    pub fn kind_in(&self, u: &Subtree, e: Edge) -> Option<VertexKind> {
        let kids = u.children(e)?;
        if self.vertex(e, VertexKind::S).as_deref() == Some(kids) {
            Some(VertexKind::S)
        } else if self.vertex(e, VertexKind::T).as_deref() == Some(kids) {
            Some(VertexKind::T)
        } else {
            None
        }
    }

    pub fn is_open(&self) -> bool {
        self.left.is_open() && self.right.is_open()
    }

    /// Double roots, one per pair of components.
    pub fn roots(&self) -> Vec<Edge> {
        let mut v = Vec::new();
        for a in 0..self.left.n_components() {
            for b in 0..self.right.n_components() {
                v.push(self.id(self.left.component_root(a), self.right.component_root(b)));
            }
        }
        v
    }

    fn expand(&self, e: Edge, memo: &mut BTreeMap<Edge, Vec<BTreeMap<Edge, Vec<Edge>>>>) -> Vec<BTreeMap<Edge, Vec<Edge>>> {
        if let Some(v) = memo.get(&e) {
            return v.clone();
        }
        let mut out = Vec::new();
        let mut kinds: Vec<Vec<Edge>> = Vec::new();
        for k in [VertexKind::S, VertexKind::T] {
            if let Some(c) = self.vertex(e, k) {
                if !kinds.contains(&c) {
                    kinds.push(c);
                }
            }
        }
        if kinds.is_empty() {
            out.push(BTreeMap::new());
        }
        for kids in kinds {
            let mut acc: Vec<BTreeMap<Edge, Vec<Edge>>> = vec![BTreeMap::from([(e, kids.clone())])];
            for &c in &kids {
                let above = self.expand(c, memo);
                let mut next = Vec::with_capacity(acc.len() * above.len());
                for a in &acc {
                    for b in &above {
                        let mut m = a.clone();
                        m.extend(b.iter().map(|(k, v)| (*k, v.clone())));
                        next.push(m);
                    }
                }
                acc = next;
            }
            out.extend(acc);
        }
        memo.insert(e, out.clone());
        out
    }

    /// All maximal subtrees, sorted.
    pub fn maximal_subtrees(&self) -> Vec<Subtree> {
        let mut memo = BTreeMap::new();
        let mut out: BTreeSet<Subtree> = BTreeSet::new();
        for r in self.roots() {
            for v in self.expand(r, &mut memo) {
                out.insert(Subtree::new(r, v));
            }
        }
        out.into_iter().collect()
    }

    /// `U'` obtained from `u` by the replacement at `e`, if the pattern
    /// (S-vertex at `e`, T-vertices on all of its children) occurs there.
    pub fn swap_at(&self, u: &Subtree, e: Edge) -> Option<Subtree> {
        if self.kind_in(u, e) != Some(VertexKind::S) || self.vertex(e, VertexKind::T).is_none() {
            return None;
        }
        let s_kids = u.children(e)?.to_vec();
        for &c in &s_kids {
            if self.kind_in(u, c) != Some(VertexKind::T) {
                return None;
            }
        }
        let mut verts = u.vertices().clone();
        for &c in &s_kids {
            verts.remove(&c);
        }
        let t_kids = self.vertex(e, VertexKind::T)?;
        verts.insert(e, t_kids.clone());
        for &c in &t_kids {
            verts.insert(c, self.vertex(c, VertexKind::S)?);
        }
        let v = Subtree::new(u.root(), verts);
        (v.edges().len() == v.vertices().len() + v.leaves().len()).then_some(v)
    }

    pub fn percolation(&self, mode: TensorMode) -> Result<Percolation> {
        let trees = self.maximal_subtrees();
        let index: BTreeMap<&Subtree, usize> = trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut generators = BTreeSet::new();
        for (i, u) in trees.iter().enumerate() {
            for &e in u.vertices().keys() {
                if let Some(v) = self.swap_at(u, e) {
                    let j = *index.get(&v).ok_or_else(|| {
                        Error::OrderNotAntisymmetric("replacement is not a maximal subtree".into())
                    })?;
                    if i != j {
                        generators.insert(match mode {
                            TensorMode::Standard => (i, j),
                            TensorMode::Reversed => (j, i),
                        });
                    }
                }
            }
        }
        let generators: Vec<(usize, usize)> = generators.into_iter().collect();
        let group = self.ambient.group();
        let action = group
            .elements()
            .map(|g| trees.iter().map(|u| index[&self.ambient.act(g, u)]).collect())
            .collect();
        let poset = GPoset::from_relations(group, action, trees.len(), &generators).map_err(|e| match e {
            Error::MalformedPoset(m) => Error::OrderNotAntisymmetric(m),
            other => other,
        })?;
        Ok(Percolation { trees, generators, poset })
    }

    /// `Ξ^U` for the edge orbit `orbit` of the right factor.
    pub fn characteristic_edges(&self, u: &Subtree, orbit: &BTreeSet<Edge>, mode: TensorMode) -> BTreeSet<Edge> {
        u.inner_edges()
            .into_iter()
            .filter(|&e| orbit.contains(&self.split(e).1))
            .filter(|&e| match mode {
                TensorMode::Standard => self.kind_in(u, e) == Some(VertexKind::T),
                TensorMode::Reversed => u.parent_of(e).and_then(|p| self.kind_in(u, p)) == Some(VertexKind::T),
            })
            .collect()
    }

    /// Every cell: faces of the maximal subtrees.
    pub fn all_cells(&self) -> Complex {
        let max = self.maximal_subtrees();
        Complex::generated(self.ambient.clone(), &max)
    }

    fn projections(&self, v: &Subtree) -> (BTreeSet<Edge>, BTreeSet<Edge>) {
        v.edges().iter().map(|&e| self.split(e)).unzip()
    }

    /// Cells whose projections lie in one of the given left and right
    /// edge sets respectively.
    pub fn sub_product(&self, cells: &Complex, left: &[BTreeSet<Edge>], right: &[BTreeSet<Edge>]) -> Complex {
        let keep = cells
            .cells()
            .iter()
            .filter(|v| {
                let (ps, pt) = self.projections(v);
                left.iter().any(|l| ps.is_subset(l)) && right.iter().any(|r| pt.is_subset(r))
            })
            .cloned()
            .collect();
        Complex::from_closed(self.ambient.clone(), keep)
    }

    /// `∂Ω[S] ⊗ Ω[T] ∪ Ω[S] ⊗ Λ^{Gξ}[T]`.
    pub fn pushout_product_source(&self, orbit: &BTreeSet<Edge>) -> Result<Complex> {
        let cells = self.all_cells();
        let edge_sets = |c: &Complex| c.maximal().iter().map(|v| v.edge_set()).collect::<Vec<_>>();
        let all_left = edge_sets(&complexes::representable(&self.left));
        let all_right = edge_sets(&complexes::representable(&self.right));
        let bd_left = edge_sets(&complexes::boundary(&self.left));
        let horn_right = edge_sets(&complexes::horn(&self.right, orbit)?);
        let a = self.sub_product(&cells, &bd_left, &all_right);
        let b = self.sub_product(&cells, &all_left, &horn_right);
        Ok(a.union(&b))
    }

    /// Whether `sources ≤ target` holds in `S' ⊗ T'`, the sub-broad-poset
    /// on the edge sets `ls × rs` using only vertices of the faces `sf`, `tf`.
    pub fn relation_in(&self, sf: &Subtree, tf: &Subtree, sources: &[Edge], target: Edge) -> bool {
        let (s, t) = self.split(target);
        if !sf.has_edge(s) || !tf.has_edge(t) {
            return false;
        }
        if sources == [target] {
            return true;
        }
        let mut opts: Vec<Vec<Edge>> = Vec::new();
        if let Some(k) = sf.children(s) {
            opts.push(k.iter().map(|&x| self.id(x, t)).collect());
        }
        if let Some(k) = tf.children(t) {
            opts.push(k.iter().map(|&x| self.id(s, x)).collect());
        }
        for kids in opts {
            // split the sources among the children, each source used once
            if self.distribute(sf, tf, &kids, sources) {
                return true;
            }
        }
        false
    }

    fn distribute(&self, sf: &Subtree, tf: &Subtree, kids: &[Edge], sources: &[Edge]) -> bool {
        let Some((&k, rest)) = kids.split_first() else {
            return sources.is_empty();
        };
        let n = sources.len();
        for mask in 0u32..(1 << n) {
            let mine: Vec<Edge> = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| sources[i]).collect();
            let others: Vec<Edge> = (0..n).filter(|&i| mask & (1 << i) == 0).map(|i| sources[i]).collect();
            if self.relation_in(sf, tf, &mine, k) && self.distribute(sf, tf, rest, &others) {
                return true;
            }
        }
        false
    }

    /// Assembles and verifies the characteristic collection of the tensor
    /// example for the inner edge orbit `orbit` of the right factor.
    pub fn verify_characteristic(&self, orbit: &BTreeSet<Edge>, mode: TensorMode, build: bool) -> Result<TensorReport> {
        if mode == TensorMode::Standard && !self.is_open() {
            return Err(Error::FactorsNotOpen);
        }
        let percolation = self.percolation(mode)?;
        let base = self.pushout_product_source(orbit)?;
        let xi: Vec<BTreeSet<Edge>> = percolation
            .trees
            .iter()
            .map(|u| self.characteristic_edges(u, orbit, mode))
            .collect();
        let collection = CharCollection {
            base,
            poset: percolation.poset.clone(),
            faces: percolation.trees.clone(),
            xi: xi.clone(),
        };
        let report = collection.verify()?;
        let certificate = if build && report.passed() { Some(build_filtration(&collection)?) } else { None };
        Ok(TensorReport { report, percolation, xi, collection, certificate })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::broadposet::Tree;
    use crate::group::FiniteGroup;

    fn lin(n: usize) -> GForest {
        GForest::trivial(FiniteGroup::trivial(), Tree::linear(n))
    }

    #[test]
    fn shuffles_of_one_and_one() {
        let p = TensorProduct::new(&lin(1), &lin(1)).unwrap();
        assert_eq!(p.n_edges(), 4);
        assert_eq!(p.maximal_subtrees().len(), 2);
        let perc = p.percolation(TensorMode::Standard).unwrap();
        assert_eq!(perc.generators.len(), 1);
    }

    #[test]
    fn stick_factor() {
        let t = GForest::trivial(FiniteGroup::trivial(), Tree::corolla(2));
        let eta = GForest::trivial(FiniteGroup::trivial(), Tree::eta("x"));
        let p = TensorProduct::new(&eta, &t).unwrap();
        assert_eq!(p.maximal_subtrees().len(), 1);
    }
}
