//! Weak indexing systems: sieves of G-trees in a truncation that contain
//! the unit stick and satisfy the vertexwise Segal condition.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::broadposet::{Edge, Tree};
use crate::equivariance::{induce, GForest};
use crate::genuine::describe as describe_forest;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::reedy::{check_admissible, AdmissibleReport, EquivariantTreeCategory, FamilyCollection};
use crate::treemaps::monotone_maps;
use crate::truncation::{g_isomorphic, Bounds, Truncation};

/// A membership table over the G-trees of a truncation.
#[derive(Clone, Debug)]
pub struct SieveSpec {
    pub truncation: Truncation,
    pub trees: Vec<GForest>,
    pub members: Vec<bool>,
}

/// The corolla `G ·_{H_v} C_v` spanned by the vertex with output `v`.
pub fn vertex_corolla(t: &GForest, v: Edge) -> GForest {
    let kids = t.children(v).expect("vertex output");
    let h = t.isotropy(v);
    let action: Vec<Vec<Edge>> = h
        .elements()
        .iter()
        .map(|&x| {
            let mut p = vec![0];
            p.extend(kids.iter().map(|&k| 1 + kids.iter().position(|&y| y == t.act(x, k)).unwrap()));
            p
        })
        .collect();
    induce(t.group(), &h, &Tree::corolla(kids.len()), &action).expect("vertex corolla")
}

/// One vertex corolla per orbit of vertices.
pub fn g_vertices(t: &GForest) -> Vec<GForest> {
    t.edge_orbits()
        .iter()
        .filter_map(|o| o.iter().next().copied())
        .filter(|&e| !t.is_leaf(e))
        .map(|e| vertex_corolla(t, e))
        .collect()
}

/// Whether some equivariant map `c → t` exists.
pub fn map_exists(c: &GForest, t: &GForest) -> bool {
    let k = c.component_stabilizer(0);
    let src = c.component(0);
    let o = c.offset(0);
    (0..t.n_components()).any(|j| {
        k.is_subset(&t.component_stabilizer(j))
            && monotone_maps(src, t.component(j)).iter().any(|m| {
                k.elements().iter().all(|&x| {
                    (0..src.n_edges()).all(|e| t.act(x, t.offset(j) + m[e]) == t.offset(j) + m[c.act(x, o + e) - o])
                })
            })
    })
}

/// A G-corolla: the subgroup `H` and its action on the leaves, as
/// permutations of `0..arity` listed by element name.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorollaSignature {
    pub subgroup: Vec<String>,
    pub arity: usize,
    /// Missing elements act trivially.
    #[serde(default)]
    pub action: BTreeMap<String, Vec<usize>>,
}

impl CorollaSignature {
    pub fn build(&self, group: &FiniteGroup) -> Result<GForest> {
        let elems = self
            .subgroup
            .iter()
            .map(|n| group.index_of(n).ok_or_else(|| Error::InvalidInput(format!("unknown element {n}"))))
            .collect::<Result<Vec<_>>>()?;
        let h = group.subgroup(&elems)?;
        let action = h
            .elements()
            .iter()
            .map(|&x| {
                let mut p = vec![0];
                match self.action.get(group.name(x)) {
                    Some(perm) if perm.len() == self.arity => p.extend(perm.iter().map(|&i| i + 1)),
                    Some(_) => return Err(Error::NotAnAction(format!("permutation for {} has the wrong length", group.name(x)))),
                    None => p.extend(1..=self.arity),
                }
                Ok(p)
            })
            .collect::<Result<Vec<_>>>()?;
        induce(group, &h, &Tree::corolla(self.arity), &action)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SieveFile {
    pub group: String,
    pub truncation: Bounds,
    pub corollas: Vec<CorollaSignature>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexingWitness {
    pub axiom: String,
    pub tree: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexingReport {
    pub passed: bool,
    pub sieve: bool,
    pub unit: bool,
    pub segal: bool,
    pub trivial_corollas: Option<bool>,
    pub members: usize,
    pub trees: usize,
    pub witnesses: Vec<IndexingWitness>,
}

impl SieveSpec {
    pub fn from_predicate(truncation: Truncation, f: impl Fn(&GForest) -> bool) -> SieveSpec {
        let trees = truncation.g_trees();
        let members = trees.iter().map(&f).collect();
        SieveSpec { truncation, trees, members }
    }

    pub fn full(truncation: Truncation) -> SieveSpec {
        SieveSpec::from_predicate(truncation, |_| true)
    }

    /// Trees all of whose vertex corollas lie in `corollas`.
    pub fn corolla_closure(truncation: Truncation, corollas: &[GForest]) -> SieveSpec {
        SieveSpec::from_predicate(truncation, |t| {
            g_vertices(t).iter().all(|v| corollas.iter().any(|c| g_isomorphic(c, v)))
        })
    }

    pub fn from_file(f: &SieveFile) -> Result<SieveSpec> {
        let group = crate::equivariance::named_group(&f.group)?;
        let corollas = f.corollas.iter().map(|c| c.build(&group)).collect::<Result<Vec<_>>>()?;
        Ok(SieveSpec::corolla_closure(Truncation::new(group, f.truncation), &corollas))
    }

    pub fn index_of(&self, t: &GForest) -> Option<usize> {
        self.trees.iter().position(|x| g_isomorphic(x, t))
    }

    pub fn contains(&self, t: &GForest) -> Option<bool> {
        self.index_of(t).map(|i| self.members[i])
    }

    /// The unit stick `G/G · η`.
    pub fn unit(&self) -> GForest {
        GForest::trivial(self.truncation.group.clone(), Tree::eta("u"))
    }

    pub fn without(mut self, t: &GForest) -> SieveSpec {
        if let Some(i) = self.index_of(t) {
            self.members[i] = false;
        }
        self
    }

    pub fn member_count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }
}

/// Checks sieve closure, the unit stick and the Segal condition; with
/// `trivial_corollas`, also that every `G/H · C_n` with trivial action is
/// present.
pub fn validate_weak_indexing(s: &SieveSpec, trivial_corollas: bool) -> IndexingReport {
    let n = s.trees.len();
    let mut witnesses = Vec::new();
    let sieve_bad: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .filter(|&t| s.members[t])
        .flat_map_iter(|t| {
            (0..n).filter(move |&c| !s.members[c] && map_exists(&s.trees[c], &s.trees[t])).map(move |c| (c, t))
        })
        .collect();
    if let Some(&(c, t)) = sieve_bad.first() {
        witnesses.push(IndexingWitness {
            axiom: "sieve".into(),
            tree: describe_forest(&s.trees[t]),
            detail: format!("receives a map from the non-member {}", describe_forest(&s.trees[c])),
        });
    }
    let unit = s.contains(&s.unit()).unwrap_or(false);
    if !unit {
        witnesses.push(IndexingWitness {
            axiom: "unit".into(),
            tree: describe_forest(&s.unit()),
            detail: "G/G·η is not a member".into(),
        });
    }
    let segal_bad: Vec<(usize, String)> = (0..n)
        .into_par_iter()
        .filter_map(|t| {
            let vs = g_vertices(&s.trees[t]);
            let mut product = true;
            for v in &vs {
                match s.contains(v) {
                    Some(m) => product &= m,
                    None => return Some((t, format!("vertex corolla {} lies outside the truncation", describe_forest(v)))),
                }
            }
            (product != s.members[t]).then(|| {
                (t, format!("member = {} but the product over {} vertex corollas is {}", s.members[t], vs.len(), product))
            })
        })
        .collect();
    if let Some((t, d)) = segal_bad.first() {
        witnesses.push(IndexingWitness { axiom: "segal".into(), tree: describe_forest(&s.trees[*t]), detail: d.clone() });
    }
    let trivial = trivial_corollas.then(|| {
        let g = &s.truncation.group;
        for h in g.subgroup_classes() {
            for k in 0..=s.truncation.bounds.arity {
                let id: Vec<Edge> = (0..=k).collect();
                let c = induce(g, &h, &Tree::corolla(k), &vec![id; h.order()]).expect("trivial corolla");
                if s.contains(&c) != Some(true) {
                    witnesses.push(IndexingWitness {
                        axiom: "trivial corollas".into(),
                        tree: describe_forest(&c),
                        detail: "corolla with trivial action is missing".into(),
                    });
                    return false;
                }
            }
        }
        true
    });
    let (sieve, segal) = (sieve_bad.is_empty(), segal_bad.is_empty());
    IndexingReport {
        passed: sieve && unit && segal && trivial.unwrap_or(true),
        sieve,
        unit,
        segal,
        trivial_corollas: trivial,
        members: s.member_count(),
        trees: n,
        witnesses,
    }
}

#[derive(Clone, Debug)]
pub struct GraphFamilies {
    pub category: EquivariantTreeCategory,
    pub families: FamilyCollection,
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslationReport {
    pub families_per_shape: Vec<usize>,
    pub admissible: AdmissibleReport,
    pub resynthesized: bool,
}

/// `𝓕_U` = graph subgroups `Γ` with `G ·_H U` a member.
pub fn to_graph_families(s: &SieveSpec) -> Result<GraphFamilies> {
    let category = EquivariantTreeCategory::new(&s.truncation.group, s.truncation.bounds);
    let graphs = category.product.graph_families();
    let mut families = Vec::with_capacity(graphs.families.len());
    for (u, fam) in graphs.families.iter().enumerate() {
        let mut kept = Vec::new();
        for gamma in fam {
            let f = category.induced(u, gamma)?;
            let m = s.contains(&f).ok_or_else(|| Error::TruncationTooSmall(describe_forest(&f)))?;
            if m {
                kept.push(gamma.clone());
            }
        }
        families.push(kept);
    }
    Ok(GraphFamilies { category, families: FamilyCollection { families } })
}

/// Translates, checks admissibility and rebuilds the sieve from the families.
pub fn translate(s: &SieveSpec) -> Result<TranslationReport> {
    let gf = to_graph_families(s)?;
    let admissible = check_admissible(gf.category.reedy(), &gf.families);
    let mut rebuilt = vec![false; s.trees.len()];
    for (u, fam) in gf.families.families.iter().enumerate() {
        for gamma in fam {
            let f = gf.category.induced(u, gamma)?;
            if let Some(i) = s.index_of(&f) {
                rebuilt[i] = true;
            }
        }
    }
    Ok(TranslationReport {
        families_per_shape: gf.families.families.iter().map(Vec::len).collect(),
        admissible,
        resynthesized: rebuilt == s.members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_is_needed() {
        let tr = Truncation::new(FiniteGroup::cyclic(2), Bounds::new(1, 2));
        let full = SieveSpec::full(tr);
        assert!(validate_weak_indexing(&full, true).passed);
        let unit = full.unit();
        let cut = full.without(&unit);
        let rep = validate_weak_indexing(&cut, false);
        assert!(!rep.unit && !rep.passed);
        assert!(rep.witnesses.iter().any(|w| w.axiom == "unit"));
    }
}
