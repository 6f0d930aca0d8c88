//! Characteristic inner edge collections and the cellular filtrations they
//! produce.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::broadposet::Edge;
use crate::complexes::{self, attach_horn, Ambient, AmbientFile, CellJson, Complex, HornStep};
use crate::equivariance::GForest;
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::subtree::{subsets, Subtree};

/// A finite poset with a G-action, stored as a strict order matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPoset {
    action: Vec<Vec<usize>>,
    less: Vec<Vec<bool>>,
}

impl GPoset {
    /// `action[g][i]` is `g·i`; `less[i][j]` means `i < j`.
    pub fn new(group: &FiniteGroup, action: Vec<Vec<usize>>, less: Vec<Vec<bool>>) -> Result<GPoset> {
        let n = less.len();
        let bad = |s: String| Err(Error::MalformedPoset(s));
        if less.iter().any(|r| r.len() != n) {
            return bad("order matrix is not square".into());
        }
        if action.len() != group.order() || action.iter().any(|p| p.len() != n) {
            return bad("action has wrong shape".into());
        }
        for p in &action {
            let img: BTreeSet<usize> = p.iter().copied().collect();
            if img.len() != n || p.iter().any(|&x| x >= n) {
                return bad("action element is not a permutation".into());
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                if (0..n).any(|i| action[ab][i] != action[a][action[b][i]]) {
                    return bad("action is not multiplicative".into());
                }
            }
        }
        for i in 0..n {
            if less[i][i] {
                return bad(format!("element {i} lies below itself"));
            }
            for j in 0..n {
                if less[i][j] {
                    if less[j][i] {
                        return bad(format!("elements {i} and {j} are mutually below"));
                    }
                    for k in 0..n {
                        if less[j][k] && !less[i][k] {
                            return bad(format!("order not transitive at {i} < {j} < {k}"));
                        }
                    }
                    for p in &action {
                        if !less[p[i]][p[j]] {
                            return bad(format!("order not equivariant at {i} < {j}"));
                        }
                    }
                }
            }
        }
        Ok(GPoset { action, less })
    }

    /// Transitive closure of generating relations `(i, j)` meaning `i < j`.
    pub fn from_relations(group: &FiniteGroup, action: Vec<Vec<usize>>, n: usize, rels: &[(usize, usize)]) -> Result<GPoset> {
        let mut less = vec![vec![false; n]; n];
        for &(i, j) in rels {
            less[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if less[i][k] {
                    for j in 0..n {
                        if less[k][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
        }
        GPoset::new(group, action, less)
    }

    pub fn discrete(group: &FiniteGroup, action: Vec<Vec<usize>>) -> Result<GPoset> {
        let n = action.first().map_or(0, |p| p.len());
        GPoset::new(group, action, vec![vec![false; n]; n])
    }

    pub fn len(&self) -> usize {
        self.less.len()
    }
    pub fn is_empty(&self) -> bool {
        self.less.is_empty()
    }
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.less[i][j]
    }
    pub fn act(&self, g: Elem, i: usize) -> usize {
        self.action[g][i]
    }
    pub fn stabilizer(&self, i: usize) -> Subgroup {
        Subgroup((0..self.action.len()).filter(|&g| self.action[g][i] == i).collect())
    }
    pub fn orbit(&self, i: usize) -> BTreeSet<usize> {
        self.action.iter().map(|p| p[i]).collect()
    }

    /// Orbits listed so that every orbit follows the orbits below it.
    pub fn orbits_in_order(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut done = vec![false; n];
        let mut out = Vec::new();
        while out.iter().map(|o: &Vec<usize>| o.len()).sum::<usize>() < n {
            let i = (0..n)
                .find(|&i| !done[i] && (0..n).all(|j| !self.less[j][i] || done[j]))
                .expect("strict order has a minimal element");
            let o: Vec<usize> = self.orbit(i).into_iter().collect();
            for &x in &o {
                done[x] = true;
            }
            out.push(o);
        }
        out
    }
}

/// Data `(A, I, {U_i}, {Ξ^i})` of a characteristic collection. The `U_i`
/// are cells of the ambient of `base`.
#[derive(Clone, Debug)]
pub struct CharCollection {
    pub base: Complex,
    pub poset: GPoset,
    pub faces: Vec<Subtree>,
    pub xi: Vec<BTreeSet<Edge>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub face: Option<CellJson>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub condition: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharReport {
    pub conditions: Vec<ConditionResult>,
}

impl CharReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }
    pub fn condition(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.condition == name)
    }
}

fn xi_of(xi: &BTreeSet<Edge>, v: &Subtree) -> Vec<Edge> {
    v.inner_edges().into_iter().filter(|e| xi.contains(e)).collect()
}

fn minus(v: &Subtree, d: &[Edge]) -> Subtree {
    if d.is_empty() {
        v.clone()
    } else {
        v.remove_inner(d)
    }
}

impl CharCollection {
    pub fn ambient(&self) -> &Arc<Ambient> {
        self.base.ambient()
    }

    /// Membership in `A_{<i}`.
    pub fn below(&self, i: usize, v: &Subtree) -> bool {
        self.base.contains(v) || (0..self.faces.len()).any(|j| self.poset.lt(j, i) && self.faces[j].contains_face(v))
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.poset.len();
        if self.faces.len() != n || self.xi.len() != n {
            return Err(Error::MalformedPoset("index set and face data differ in size".into()));
        }
        Ok(())
    }

    pub fn verify(&self) -> Result<CharReport> {
        self.check_shape()?;
        let amb = self.ambient().clone();
        let group = amb.group().clone();
        let cell = |v: &Subtree| Some(amb.cell_to_json(v));
        let n = self.faces.len();

        let ch0 = (|| {
            if !self.base.is_g_stable() {
                let g = group
                    .elements()
                    .find(|&g| self.base.cells().iter().any(|c| !self.base.contains(&amb.act(g, c))))
                    .unwrap();
                return Some(Witness {
                    index: 0,
                    element: Some(group.name(g).into()),
                    face: None,
                    detail: "base complex is not G-stable".into(),
                });
            }
            for i in 0..n {
                let inner: BTreeSet<Edge> = self.faces[i].inner_edges().into_iter().collect();
                if !self.xi[i].is_subset(&inner) {
                    return Some(Witness {
                        index: i,
                        element: None,
                        face: cell(&self.faces[i]),
                        detail: "characteristic edges are not inner edges of the face".into(),
                    });
                }
                for g in group.elements() {
                    let gi = self.poset.act(g, i);
                    if amb.act(g, &self.faces[i]) != self.faces[gi] || amb.act_set(g, &self.xi[i]) != self.xi[gi] {
                        return Some(Witness {
                            index: i,
                            element: Some(group.name(g).into()),
                            face: cell(&self.faces[i]),
                            detail: "faces or characteristic edges are not equivariant".into(),
                        });
                    }
                    if gi != i && self.faces[gi] == self.faces[i] {
                        return Some(Witness {
                            index: i,
                            element: Some(group.name(g).into()),
                            face: cell(&self.faces[i]),
                            detail: "distinct indices in one orbit share a face".into(),
                        });
                    }
                }
            }
            None
        })();

        let ch1 = (0..n).into_par_iter().find_map_first(|i| {
            self.faces[i]
                .outer_faces()
                .into_iter()
                .find(|v| xi_of(&self.xi[i], v).is_empty() && !self.below(i, v))
                .map(|v| Witness {
                    index: i,
                    element: None,
                    face: cell(&v),
                    detail: "outer face without characteristic edges lies outside A_<i".into(),
                })
        });

        let ch2 = (0..n).into_par_iter().find_map_first(|i| {
            self.faces[i]
                .faces()
                .into_iter()
                .find(|v| {
                    let core = minus(v, &xi_of(&self.xi[i], v));
                    self.base.contains(&core) && !self.below(i, v)
                })
                .map(|v| Witness {
                    index: i,
                    element: None,
                    face: cell(&v),
                    detail: "face whose characteristic core lies in A is outside A_<i".into(),
                })
        });

        let ch3 = (0..n).into_par_iter().find_map_first(|i| {
            let faces = self.faces[i].faces();
            for j in 0..n {
                if j == i || self.poset.lt(i, j) {
                    continue;
                }
                for v in &faces {
                    let core = minus(v, &xi_of(&self.xi[i], v));
                    if self.faces[j].contains_face(&core) && !self.below(i, v) {
                        return Some(Witness {
                            index: i,
                            element: None,
                            face: cell(v),
                            detail: format!("characteristic core lies in face {j} but the face is outside A_<i"),
                        });
                    }
                }
            }
            None
        });

        let res = |name: &str, w: Option<Witness>| ConditionResult {
            condition: name.to_string(),
            passed: w.is_none(),
            witness: w,
        };
        Ok(CharReport { conditions: vec![res("Ch0", ch0), res("Ch1", ch1), res("Ch2", ch2), res("Ch3", ch3)] })
    }

    /// `A ∪ ⋃ Ω[U_i]`.
    pub fn target(&self) -> Complex {
        let mut t = self.base.clone();
        for u in &self.faces {
            t.add_generated(u);
        }
        t
    }
}

/// An ordered list of horn attachments from `source` to `target`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub source: Complex,
    pub target: Complex,
    pub steps: Vec<HornStep>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub g: String,
    pub image: CellJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepJson {
    pub tree: CellJson,
    #[serde(rename = "K")]
    pub isotropy: Vec<String>,
    pub xi: Vec<String>,
    pub embedding: Vec<EmbeddingJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateFile {
    pub ambient: AmbientFile,
    pub source: Vec<CellJson>,
    pub target: Vec<CellJson>,
    pub steps: Vec<StepJson>,
}

impl Certificate {
    pub fn ambient(&self) -> &Arc<Ambient> {
        self.source.ambient()
    }

    pub fn to_file(&self) -> CertificateFile {
        let amb = self.ambient();
        let g = amb.group();
        let steps = self
            .steps
            .iter()
            .map(|s| StepJson {
                tree: amb.cell_to_json(&s.tree),
                isotropy: g.subgroup_names(&s.isotropy),
                xi: s.xi.iter().map(|&e| amb.name(e).to_string()).collect(),
                embedding: g
                    .coset_reps(&s.isotropy)
                    .into_iter()
                    .map(|x| EmbeddingJson { g: g.name(x).to_string(), image: amb.cell_to_json(&amb.act(x, &s.tree)) })
                    .collect(),
            })
            .collect();
        CertificateFile {
            ambient: amb.to_file(),
            source: self.source.maximal().iter().map(|c| amb.cell_to_json(c)).collect(),
            target: self.target.maximal().iter().map(|c| amb.cell_to_json(c)).collect(),
            steps,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("certificate serializes")
    }
}

/// Orders faces of `u` in `Face^lex_Ξ(u)`, least first.
pub fn lex_faces(u: &Subtree, xi: &BTreeSet<Edge>) -> Vec<(Subtree, Subtree)> {
    let mut v: Vec<(Subtree, Subtree)> = u
        .faces()
        .into_iter()
        .filter_map(|f| {
            let closure = u.outer_closure_of(&f);
            let a = xi_of(xi, &f);
            (!a.is_empty() && a == xi_of(xi, &closure)).then_some((closure, f))
        })
        .collect();
    v.sort_by(|(c1, f1), (c2, f2)| {
        (c1.size(), f1.size(), f1).cmp(&(c2.size(), f2.size(), f2))
    });
    v
}

/// Builds the filtration of a collection that passes verification.
pub fn build_filtration(c: &CharCollection) -> Result<Certificate> {
    let report = c.verify()?;
    if !report.passed() {
        let bad = report.conditions.iter().find(|r| !r.passed).unwrap();
        return Err(Error::VerificationFailed(format!(
            "{} fails: {}",
            bad.condition,
            bad.witness.as_ref().map_or("", |w| w.detail.as_str())
        )));
    }
    build_unchecked(c)
}

fn build_unchecked(c: &CharCollection) -> Result<Certificate> {
    let amb = c.ambient().clone();
    let mut current = c.base.clone();
    let mut steps = Vec::new();
    for orbit in c.poset.orbits_in_order() {
        let i = orbit[0];
        let h = c.poset.stabilizer(i);
        let u = &c.faces[i];
        let xi = &c.xi[i];
        let mut seen: BTreeSet<Subtree> = BTreeSet::new();
        for (_, v) in lex_faces(u, xi) {
            if seen.contains(&v) {
                continue;
            }
            let h_orbit: BTreeSet<Subtree> = h.elements().iter().map(|&x| amb.act(x, &v)).collect();
            for w in &h_orbit {
                seen.insert(w.clone());
            }
            for w in h_orbit {
                if current.contains(&w) {
                    continue;
                }
                let k = Subgroup(h.elements().iter().copied().filter(|&x| amb.act(x, &w) == w).collect());
                let xi_w: BTreeSet<Edge> = xi_of(xi, &w).into_iter().collect();
                current.add_generated(&w);
                steps.push(HornStep { tree: w, isotropy: k, xi: xi_w });
            }
        }
        if !current.contains(u) {
            return Err(Error::VerificationFailed(format!("face {i} was never attached")));
        }
    }
    Ok(Certificate { source: c.base.clone(), target: current, steps })
}

/// Replays a certificate through [`attach_horn`], returning the final complex.
pub fn replay_with_attach(cert: &Certificate) -> Result<Complex> {
    let mut cur = cert.source.clone();
    for (n, s) in cert.steps.iter().enumerate() {
        cur = attach_horn(&cur, s, n)?;
    }
    if cur != cert.target {
        return Err(Error::VerificationFailed("replay does not reach the target".into()));
    }
    Ok(cur)
}

fn component_action(f: &GForest) -> Vec<Vec<usize>> {
    let n = f.n_components();
    f.group()
        .elements()
        .map(|g| (0..n).map(|c| f.component_of(f.act(g, f.component_root(c)))).collect())
        .collect()
}

fn edges_in(f: &GForest, c: usize, s: &BTreeSet<Edge>) -> BTreeSet<Edge> {
    s.iter().copied().filter(|&e| f.component_of(e) == c).collect()
}

/// `Sc[T] → Ω[T]`: one index per component, `Ξ` all inner edges.
pub fn segal_core_collection(f: &GForest) -> Result<CharCollection> {
    let poset = GPoset::discrete(f.group(), component_action(f))?;
    let faces = f.full_components();
    let xi = faces.iter().map(|u| u.inner_edges().into_iter().collect()).collect();
    Ok(CharCollection { base: complexes::segal_core(f), poset, faces, xi })
}

/// `Λ_o^E[T] → Ω[T]`.
pub fn orbital_horn_collection(f: &GForest, e: &BTreeSet<Edge>) -> Result<CharCollection> {
    let base = complexes::orbital_horn(f, e)?;
    let poset = GPoset::discrete(f.group(), component_action(f))?;
    let faces = f.full_components();
    let xi = (0..f.n_components()).map(|c| edges_in(f, c, e)).collect();
    Ok(CharCollection { base, poset, faces, xi })
}

/// Which index set to use for `Λ^E[T] → Λ^F[T]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HornVariant {
    /// Nonempty subsets of `E ∖ F`, ordered by reverse inclusion.
    PowerSet,
    /// Edge orbits of `E ∖ F` in a total order; sound for trivial groups.
    Orbits,
}

fn check_f_in_e(f: &GForest, e: &BTreeSet<Edge>, sub: &BTreeSet<Edge>) -> Result<()> {
    if sub.is_empty() {
        return Err(Error::EmptyE);
    }
    if !sub.is_subset(e) {
        return Err(Error::InvalidInput("F is not contained in E".into()));
    }
    if !f.is_g_stable(sub) {
        return Err(Error::NotGStable("F".into()));
    }
    Ok(())
}

/// Indices `(component, orbit)` for the orbit variants, ordered by orbit.
fn orbit_indexed(f: &GForest, rest: &BTreeSet<Edge>) -> (Vec<(usize, BTreeSet<Edge>)>, Vec<(usize, usize)>) {
    let orbits: Vec<BTreeSet<Edge>> = f.edge_orbits().into_iter().filter(|o| o.is_subset(rest)).collect();
    let mut items = Vec::new();
    let mut which = Vec::new();
    for (k, o) in orbits.iter().enumerate() {
        for c in 0..f.n_components() {
            let oc = edges_in(f, c, o);
            if !oc.is_empty() {
                items.push((c, oc));
                which.push(k);
            }
        }
    }
    let mut rels = Vec::new();
    for a in 0..items.len() {
        for b in 0..items.len() {
            if which[a] < which[b] {
                rels.push((a, b));
            }
        }
    }
    (items, rels)
}

fn index_action(f: &GForest, items: &[(usize, BTreeSet<Edge>)]) -> Result<Vec<Vec<usize>>> {
    f.group()
        .elements()
        .map(|g| {
            items
                .iter()
                .map(|(c, s)| {
                    let gc = f.component_of(f.act(g, f.component_root(*c)));
                    let gs = f.act_set(g, s);
                    items
                        .iter()
                        .position(|(c2, s2)| *c2 == gc && *s2 == gs)
                        .ok_or_else(|| Error::MalformedPoset("index set is not G-stable".into()))
                })
                .collect()
        })
        .collect()
}

/// `Λ^E[T] → Λ^F[T]`.
pub fn horn_to_horn_collection(
    f: &GForest,
    e: &BTreeSet<Edge>,
    sub: &BTreeSet<Edge>,
    variant: HornVariant,
) -> Result<CharCollection> {
    let base = complexes::horn(f, e)?;
    check_f_in_e(f, e, sub)?;
    let rest: BTreeSet<Edge> = e.difference(sub).copied().collect();
    let (items, rels) = match variant {
        HornVariant::Orbits => orbit_indexed(f, &rest),
        HornVariant::PowerSet => {
            let mut items = Vec::new();
            for c in 0..f.n_components() {
                let rc: Vec<Edge> = edges_in(f, c, &rest).into_iter().collect();
                for s in subsets(&rc) {
                    if !s.is_empty() {
                        items.push((c, s.into_iter().collect::<BTreeSet<Edge>>()));
                    }
                }
            }
            let mut rels = Vec::new();
            for (a, (ca, sa)) in items.iter().enumerate() {
                for (b, (cb, sb)) in items.iter().enumerate() {
                    if a != b && ca == cb && sb.is_subset(sa) {
                        rels.push((a, b));
                    }
                }
            }
            (items, rels)
        }
    };
    let action = index_action(f, &items)?;
    let poset = GPoset::from_relations(f.group(), action, items.len(), &rels)?;
    let faces = items
        .iter()
        .map(|(c, s)| f.full_component(*c).remove_inner(&s.iter().copied().collect::<Vec<_>>()))
        .collect();
    let xi = items.iter().map(|(c, _)| edges_in(f, *c, sub)).collect();
    Ok(CharCollection { base, poset, faces, xi })
}

/// `Λ_o^E[T] → Λ_o^F[T]`.
pub fn orbital_to_orbital_collection(f: &GForest, e: &BTreeSet<Edge>, sub: &BTreeSet<Edge>) -> Result<CharCollection> {
    let base = complexes::orbital_horn(f, e)?;
    check_f_in_e(f, e, sub)?;
    let rest: BTreeSet<Edge> = e.difference(sub).copied().collect();
    let (items, rels) = orbit_indexed(f, &rest);
    let action = index_action(f, &items)?;
    let poset = GPoset::from_relations(f.group(), action, items.len(), &rels)?;
    let faces = items
        .iter()
        .map(|(c, s)| f.full_component(*c).remove_inner(&s.iter().copied().collect::<Vec<_>>()))
        .collect();
    let xi = items.iter().map(|(c, _)| edges_in(f, *c, sub)).collect();
    Ok(CharCollection { base, poset, faces, xi })
}

/// An inclusion of covers `A ⊆ A'`: outer faces in `A'` ordered by inclusion.
pub fn cover_collection(f: &GForest, source: &Complex, target: &Complex) -> Result<CharCollection> {
    if !source.is_subset(target) {
        return Err(Error::InvalidInput("source is not contained in target".into()));
    }
    let outer: Vec<Subtree> = f
        .full_components()
        .iter()
        .flat_map(|c| c.outer_faces())
        .filter(|v| target.contains(v))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let amb = source.ambient().clone();
    let action = f
        .group()
        .elements()
        .map(|g| {
            outer
                .iter()
                .map(|v| outer.iter().position(|w| *w == amb.act(g, v)).unwrap())
                .collect()
        })
        .collect();
    let mut rels = Vec::new();
    for (a, va) in outer.iter().enumerate() {
        for (b, vb) in outer.iter().enumerate() {
            if a != b && vb.contains_face(va) {
                rels.push((a, b));
            }
        }
    }
    let poset = GPoset::from_relations(f.group(), action, outer.len(), &rels)?;
    let xi = outer.iter().map(|v| v.inner_edges().into_iter().collect()).collect();
    Ok(CharCollection { base: source.clone(), poset, faces: outer, xi })
}

/// Whether every outer closure of a member is a member.
pub fn is_cover(f: &GForest, a: &Complex) -> bool {
    a.cells().iter().all(|v| a.contains(&f.outer_closure(v)))
        && complexes::segal_core(f).is_subset(a)
}

/// Rewrites every step into single-orbit horn attachments.
pub fn generating_reduction(cert: &Certificate) -> Result<Certificate> {
    let steps = reduce_steps(&cert.source, &cert.steps)?;
    Ok(Certificate { source: cert.source.clone(), target: cert.target.clone(), steps })
}

fn reduce_steps(start: &Complex, steps: &[HornStep]) -> Result<Vec<HornStep>> {
    let amb = start.ambient().clone();
    let group = amb.group().clone();
    let mut cur = start.clone();
    let mut out = Vec::new();
    for (n, s) in steps.iter().enumerate() {
        if s.is_single_orbit(&amb) {
            cur = attach_horn(&cur, s, n)?;
            out.push(s.clone());
            continue;
        }
        let first = *s.xi.iter().next().unwrap();
        let orbit: BTreeSet<Edge> = s.isotropy.elements().iter().map(|&k| amb.act_edge(k, first)).collect();
        let rest: Vec<Edge> = s.xi.difference(&orbit).copied().collect();
        let reps = group.coset_reps(&s.isotropy);
        let mut items: Vec<(usize, BTreeSet<Edge>)> = Vec::new();
        for (ri, &g) in reps.iter().enumerate() {
            for d in subsets(&rest) {
                if !d.is_empty() {
                    items.push((ri, d.iter().map(|&e| amb.act_edge(g, e)).collect()));
                }
            }
        }
        let rep_of = |x: Elem| -> usize {
            reps.iter()
                .position(|&r| s.isotropy.contains(group.mul(group.inv(r), x)))
                .unwrap()
        };
        let action: Vec<Vec<usize>> = group
            .elements()
            .map(|x| {
                items
                    .iter()
                    .map(|(ri, d)| {
                        let target = (rep_of(group.mul(x, reps[*ri])), amb.act_set(x, d));
                        items.iter().position(|it| *it == target).unwrap()
                    })
                    .collect()
            })
            .collect();
        let mut rels = Vec::new();
        for (a, (ra, da)) in items.iter().enumerate() {
            for (b, (rb, db)) in items.iter().enumerate() {
                if a != b && ra == rb && db.is_subset(da) {
                    rels.push((a, b));
                }
            }
        }
        let poset = GPoset::from_relations(&group, action, items.len(), &rels)?;
        let faces = items
            .iter()
            .map(|(ri, d)| amb.act(reps[*ri], &s.tree).remove_inner(&d.iter().copied().collect::<Vec<_>>()))
            .collect();
        let xi = items.iter().map(|(ri, _)| amb.act_set(reps[*ri], &orbit)).collect();
        let coll = CharCollection { base: cur.clone(), poset, faces, xi };
        let sub = build_filtration(&coll)?;
        out.extend(reduce_steps(&cur, &sub.steps)?);
        cur = sub.target;
        let last = HornStep { tree: s.tree.clone(), isotropy: s.isotropy.clone(), xi: orbit };
        cur = attach_horn(&cur, &last, n)?;
        out.push(last);
    }
    Ok(out)
}

/// Parameters of the standard instantiations.
#[derive(Clone, Debug)]
pub enum CertifyKind {
    SegalCore,
    OrbitalHornToFull { e: BTreeSet<Edge> },
    HornToHorn { e: BTreeSet<Edge>, f: BTreeSet<Edge>, variant: HornVariant },
    OrbitalToOrbital { e: BTreeSet<Edge>, f: BTreeSet<Edge> },
    CoverInclusion { source: Complex, target: Complex },
}

pub fn collection_for(forest: &GForest, kind: &CertifyKind) -> Result<CharCollection> {
    match kind {
        CertifyKind::SegalCore => segal_core_collection(forest),
        CertifyKind::OrbitalHornToFull { e } => orbital_horn_collection(forest, e),
        CertifyKind::HornToHorn { e, f, variant } => horn_to_horn_collection(forest, e, f, *variant),
        CertifyKind::OrbitalToOrbital { e, f } => orbital_to_orbital_collection(forest, e, f),
        CertifyKind::CoverInclusion { source, target } => {
            if !is_cover(forest, source) || !is_cover(forest, target) {
                return Err(Error::InvalidInput("complexes are not covers".into()));
            }
            cover_collection(forest, source, target)
        }
    }
}

/// Assembles, verifies and filters the instantiation; optionally reduces
/// to single-orbit horns.
pub fn certify(forest: &GForest, kind: &CertifyKind, reduce: bool) -> Result<Certificate> {
    let cert = build_filtration(&collection_for(forest, kind)?)?;
    if reduce {
        generating_reduction(&cert)
    } else {
        Ok(cert)
    }
}

/// Names of edges, for reports.
pub fn edge_names(amb: &Ambient, s: &BTreeSet<Edge>) -> Vec<String> {
    s.iter().map(|&e| amb.name(e).to_string()).collect()
}

/// Resolves a list of edge names or orbit names (`G<name>`) to a G-stable set.
pub fn resolve_edges(f: &GForest, names: &[String]) -> Result<BTreeSet<Edge>> {
    let mut out = BTreeSet::new();
    for n in names {
        match f.edge(n) {
            Ok(e) => {
                out.insert(e);
            }
            Err(_) => {
                let Some(rest) = n.strip_prefix('G') else {
                    return Err(Error::InvalidInput(format!("unknown edge {n}")));
                };
                out.extend(f.orbit(f.edge(rest)?));
            }
        }
    }
    Ok(out)
}

/// Maps a step to its edges by name, for diagnostics.
pub fn describe_step(amb: &Ambient, s: &HornStep) -> BTreeMap<String, Vec<String>> {
    BTreeMap::from([
        ("edges".to_string(), s.tree.edges().iter().map(|&e| amb.name(e).to_string()).collect()),
        ("K".to_string(), amb.group().subgroup_names(&s.isotropy)),
        ("xi".to_string(), edge_names(amb, &s.xi)),
    ])
}
