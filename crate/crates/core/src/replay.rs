//! Stand-alone certificate checker.
//!
//! Faces are enumerated here from edge subsets of each cell, separately from
//! the recursive enumeration used by the builders, so a certificate is only
//! accepted if both agree on every attachment.

use std::collections::{BTreeMap, BTreeSet};

use crate::broadposet::Edge;
use crate::complexes::Ambient;
use crate::error::{Error, Result};
use crate::group::{Elem, Subgroup};
use crate::subtree::Subtree;

use crate::anodyne::CertificateFile;

/// Faces of `w`, enumerated from subsets of its edges.
pub fn faces_by_subsets(w: &Subtree) -> Vec<Subtree> {
    let edges = w.edges().to_vec();
    let n = edges.len();
    assert!(n < 24, "cell too large for subset enumeration");
    let mut parent: BTreeMap<Edge, Edge> = BTreeMap::new();
    for (&t, kids) in w.vertices() {
        for &k in kids {
            parent.insert(k, t);
        }
    }
    let ancestors = |e: Edge| {
        let mut v = Vec::new();
        let mut x = e;
        while let Some(&p) = parent.get(&x) {
            v.push(p);
            x = p;
        }
        v
    };
    let anc: BTreeMap<Edge, Vec<Edge>> = edges.iter().map(|&e| (e, ancestors(e))).collect();
    let w_leaves: Vec<Edge> = edges.iter().copied().filter(|e| w.children(*e).is_none()).collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let x: Vec<Edge> = (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| edges[i]).collect();
        let xs: BTreeSet<Edge> = x.iter().copied().collect();
        let tops: Vec<Edge> = x.iter().copied().filter(|e| anc[e].iter().all(|a| !xs.contains(a))).collect();
        if tops.len() != 1 {
            continue;
        }
        // nearest selected ancestor of each selected edge
        let mut below: BTreeMap<Edge, Vec<Edge>> = BTreeMap::new();
        for &e in &x {
            if let Some(&p) = anc[&e].iter().find(|a| xs.contains(a)) {
                below.entry(p).or_default().push(e);
            }
        }
        let mut ok = true;
        let mut vertices = BTreeMap::new();
        let mut stumps = Vec::new();
        for &e in &x {
            match below.get(&e) {
                Some(kids) => {
                    // every leaf of w under e must pass through a kid
                    let covered = w_leaves
                        .iter()
                        .filter(|l| anc[l].contains(&e))
                        .all(|l| kids.contains(l) || kids.iter().any(|k| anc[l].contains(k)));
                    if !covered {
                        ok = false;
                        break;
                    }
                    vertices.insert(e, kids.clone());
                }
                None => {
                    // a stump once everything above it is contracted away
                    if w.children(e).is_some() && !w_leaves.iter().any(|l| anc[l].contains(&e)) {
                        stumps.push(e);
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        for choice in 0u32..(1 << stumps.len()) {
            let mut v = vertices.clone();
            for (i, &s) in stumps.iter().enumerate() {
                if choice & (1 << i) != 0 {
                    v.insert(s, Vec::new());
                }
            }
            out.push(Subtree::new(tops[0], v));
        }
    }
    out
}

struct Checker<'a> {
    amb: &'a Ambient,
    cells: BTreeSet<Subtree>,
}

impl Checker<'_> {
    fn add(&mut self, gen: &Subtree) {
        for f in faces_by_subsets(gen) {
            for g in self.amb.group().elements() {
                self.cells.insert(self.amb.act(g, &f));
            }
        }
    }
}

fn left_cosets(amb: &Ambient, k: &Subgroup) -> Vec<Vec<Elem>> {
    let g = amb.group();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in g.elements() {
        if seen.contains(&x) {
            continue;
        }
        let c: Vec<Elem> = k.elements().iter().map(|&y| g.mul(x, y)).collect();
        seen.extend(c.iter().copied());
        out.push(c);
    }
    out
}

/// Replays a serialized certificate. Returns the number of cells of the
/// final complex.
pub fn replay_file(file: &CertificateFile) -> Result<usize> {
    let amb = Ambient::from_file(&file.ambient)?;
    let group = amb.group().clone();
    let mut ck = Checker { amb: &amb, cells: BTreeSet::new() };
    for c in &file.source {
        let s = amb.cell_from_json(c)?;
        ck.add(&s);
    }
    for (idx, step) in file.steps.iter().enumerate() {
        let fail = |reason: String| Error::NotAPushout { step: idx, reason };
        let w = amb.cell_from_json(&step.tree)?;
        let k_elems = step
            .isotropy
            .iter()
            .map(|n| group.index_of(n).ok_or_else(|| fail(format!("unknown element {n}"))))
            .collect::<Result<Vec<_>>>()?;
        let k = group.subgroup(&k_elems).map_err(|_| fail("K is not a subgroup".into()))?;
        let xi = step.xi.iter().map(|n| amb.edge(n)).collect::<Result<BTreeSet<_>>>()?;
        if xi.is_empty() {
            return Err(fail("empty characteristic set".into()));
        }
        for &e in &xi {
            let is_inner = e != w.root() && w.children(e).is_some();
            if !is_inner {
                return Err(fail(format!("{} is not an inner edge", amb.name(e))));
            }
        }
        for &x in k.elements() {
            if amb.act(x, &w) != w || amb.act_set(x, &xi) != xi {
                return Err(fail(format!("{} does not fix the tree", group.name(x))));
            }
        }
        let cosets = left_cosets(&amb, &k);
        if step.embedding.len() != cosets.len() {
            return Err(fail("embedding does not list one conjugate per coset".into()));
        }
        for emb in &step.embedding {
            let g = group.index_of(&emb.g).ok_or_else(|| fail(format!("unknown element {}", emb.g)))?;
            if amb.cell_from_json(&emb.image)? != amb.act(g, &w) {
                return Err(fail(format!("embedding at {} is not the translate", emb.g)));
            }
        }
        let w_leaves: Vec<Edge> = w.edges().iter().copied().filter(|e| w.children(*e).is_none()).collect();
        let mut attached = BTreeSet::new();
        for face in faces_by_subsets(&w) {
            let f_leaves: Vec<Edge> =
                face.edges().iter().copied().filter(|e| face.children(*e).is_none()).collect();
            let missing_in_xi = w.edges().iter().all(|e| face.has_edge(*e) || xi.contains(e));
            let is_new = face.root() == w.root() && f_leaves == w_leaves && missing_in_xi;
            for coset in &cosets {
                let gf = amb.act(coset[0], &face);
                if is_new {
                    if ck.cells.contains(&gf) {
                        return Err(fail("an attached cell is already present".into()));
                    }
                    if !attached.insert(gf) {
                        return Err(fail("conjugate attachments collide".into()));
                    }
                } else if !ck.cells.contains(&gf) {
                    return Err(fail("horn is not contained in the complex".into()));
                }
            }
        }
        let expected = cosets.len() << xi.len();
        if attached.len() != expected {
            return Err(fail(format!("attached {} cells, expected {expected}", attached.len())));
        }
        ck.cells.extend(attached);
    }
    let mut target = Checker { amb: &amb, cells: BTreeSet::new() };
    for c in &file.target {
        let s = amb.cell_from_json(c)?;
        target.add(&s);
    }
    if target.cells != ck.cells {
        return Err(Error::VerificationFailed(format!(
            "replay ends with {} cells, target has {}",
            ck.cells.len(),
            target.cells.len()
        )));
    }
    Ok(ck.cells.len())
}
