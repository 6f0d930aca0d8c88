//! Finite windows on the tree categories: shapes up to isomorphism,
//! automorphisms, and G-trees up to equivariant isomorphism.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::broadposet::{Edge, Tree};
use crate::equivariance::{induce, GForest};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Subgroup};

/// Trees with at most `degree` vertices per component, all of arity at
/// most `arity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub degree: usize,
    pub arity: usize,
}

impl std::str::FromStr for Bounds {
    type Err = Error;
    fn from_str(s: &str) -> Result<Bounds> {
        let (d, k) = s
            .split_once(',')
            .ok_or_else(|| Error::InvalidInput(format!("truncation `{s}` is not of the form d,k")))?;
        let parse = |x: &str| {
            x.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad truncation bound `{x}`")))
        };
        Ok(Bounds { degree: parse(d)?, arity: parse(k)? })
    }
}

#[derive(Clone, Debug)]
pub struct Truncation {
    pub group: FiniteGroup,
    pub bounds: Bounds,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Shape {
    Leaf,
    Node(Vec<Shape>),
}

impl Shape {
    fn vertices(&self) -> usize {
        match self {
            Shape::Leaf => 0,
            Shape::Node(c) => 1 + c.iter().map(Shape::vertices).sum::<usize>(),
        }
    }

    fn to_tree(&self) -> Tree {
        let mut names = Vec::new();
        let mut children = Vec::new();
        fn walk(s: &Shape, names: &mut Vec<String>, children: &mut Vec<Option<Vec<usize>>>) -> usize {
            let id = names.len();
            names.push(format!("e{id}"));
            children.push(None);
            if let Shape::Node(c) = s {
                let kids = c.iter().map(|x| walk(x, names, children)).collect();
                children[id] = Some(kids);
            }
            id
        }
        walk(self, &mut names, &mut children);
        Tree::build(names, children, 0)
    }
}

/// Multisets of `n` shapes drawn from `pool[start..]` with `total` vertices.
fn multisets(pool: &[Shape], start: usize, n: usize, total: usize, acc: &mut Vec<Shape>, out: &mut Vec<Vec<Shape>>) {
    if n == 0 {
        if total == 0 {
            out.push(acc.clone());
        }
        return;
    }
    for i in start..pool.len() {
        let v = pool[i].vertices();
        if v > total {
            continue;
        }
        acc.push(pool[i].clone());
        multisets(pool, i, n - 1, total - v, acc, out);
        acc.pop();
    }
}

impl Bounds {
    pub fn new(degree: usize, arity: usize) -> Bounds {
        Bounds { degree, arity }
    }

    /// One tree per isomorphism class, sorted by vertex count.
    pub fn shapes(&self) -> Vec<Tree> {
        let mut by_size: Vec<Vec<Shape>> = vec![vec![Shape::Leaf]];
        for v in 1..=self.degree {
            let pool: Vec<Shape> = by_size.iter().flatten().cloned().collect();
            let mut level = Vec::new();
            for n in 0..=self.arity {
                let mut out = Vec::new();
                multisets(&pool, 0, n, v - 1, &mut Vec::new(), &mut out);
                level.extend(out.into_iter().map(Shape::Node));
            }
            by_size.push(level);
        }
        by_size.iter().flatten().map(Shape::to_tree).collect()
    }

    pub fn admits(&self, t: &Tree) -> bool {
        t.degree() <= self.degree && t.max_arity() <= self.arity
    }
}

/// Isomorphisms `a → b` as edge functions.
pub fn isomorphisms(a: &Tree, b: &Tree) -> Vec<Vec<Edge>> {
    if a.n_edges() != b.n_edges() || a.shape_code() != b.shape_code() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for m in isos_at(a, a.root(), b, b.root()) {
        let mut f = vec![0; a.n_edges()];
        for (x, y) in m {
            f[x] = y;
        }
        out.push(f);
    }
    out
}

fn isos_at(a: &Tree, x: Edge, b: &Tree, y: Edge) -> Vec<Vec<(Edge, Edge)>> {
    match (a.children(x), b.children(y)) {
        (None, None) => vec![vec![(x, y)]],
        (Some(ca), Some(cb)) if ca.len() == cb.len() => {
            let mut acc: Vec<(Vec<(Edge, Edge)>, Vec<bool>)> = vec![(vec![(x, y)], vec![false; cb.len()])];
            for &c in ca {
                let mut next = Vec::new();
                for (m, used) in &acc {
                    for (j, &d) in cb.iter().enumerate() {
                        if used[j] {
                            continue;
                        }
                        for sub in isos_at(a, c, b, d) {
                            let mut m2 = m.clone();
                            m2.extend(sub);
                            let mut u2 = used.clone();
                            u2[j] = true;
                            next.push((m2, u2));
                        }
                    }
                }
                acc = next;
            }
            acc.into_iter().map(|(m, _)| m).collect()
        }
        _ => Vec::new(),
    }
}

pub fn automorphisms(t: &Tree) -> Vec<Vec<Edge>> {
    let mut v = isomorphisms(t, t);
    v.sort();
    v
}

fn compose_perm(p: &[Edge], q: &[Edge]) -> Vec<Edge> {
    q.iter().map(|&x| p[x]).collect()
}

/// Homomorphisms `h → auts`, each given as one permutation per element of
/// `h` in the order of `h.elements()`.
pub fn homomorphisms(group: &FiniteGroup, h: &Subgroup, auts: &[Vec<Edge>]) -> Vec<Vec<Vec<Edge>>> {
    let mut gens: Vec<Elem> = Vec::new();
    for &x in h.elements() {
        if !group.generate(&gens).contains(x) {
            gens.push(x);
        }
    }
    let pos = |x: Elem| h.elements().iter().position(|&y| y == x).unwrap();
    let n_edges = auts.first().map_or(0, |a| a.len());
    let identity: Vec<Edge> = (0..n_edges).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        // extend the generator images over h by breadth-first words
        let mut img: Vec<Option<Vec<Edge>>> = vec![None; h.order()];
        img[pos(group.identity())] = Some(identity.clone());
        let mut queue = vec![group.identity()];
        let mut ok = true;
        while let Some(x) = queue.pop() {
            for (gi, &g) in gens.iter().enumerate() {
                let y = group.mul(x, g);
                let candidate = compose_perm(img[pos(x)].as_ref().unwrap(), &auts[choice[gi]]);
                match &img[pos(y)] {
                    Some(existing) if *existing != candidate => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        img[pos(y)] = Some(candidate);
                        queue.push(y);
                    }
                }
            }
            if !ok {
                break;
            }
        }
        if ok {
            let img: Vec<Vec<Edge>> = img.into_iter().map(Option::unwrap).collect();
            let mult = h.elements().iter().enumerate().all(|(i, &a)| {
                h.elements().iter().enumerate().all(|(j, &b)| img[pos(group.mul(a, b))] == compose_perm(&img[i], &img[j]))
            });
            if mult {
                out.push(img);
            }
        }
        // next choice
        let mut k = 0;
        loop {
            if k == choice.len() {
                out.sort();
                out.dedup();
                return out;
            }
            choice[k] += 1;
            if choice[k] < auts.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Whether two transitive G-forests are equivariantly isomorphic.
pub fn g_isomorphic(a: &GForest, b: &GForest) -> bool {
    if a.group() != b.group() || a.n_edges() != b.n_edges() || a.n_components() != b.n_components() {
        return false;
    }
    let h = a.component_stabilizer(0);
    let ta = a.component(0);
    (0..b.n_components()).any(|j| {
        b.component_stabilizer(j) == h
            && isomorphisms(ta, b.component(j)).iter().any(|phi| {
                h.elements().iter().all(|&x| {
                    (0..ta.n_edges()).all(|e| {
                        let xe = a.act(x, e) - a.offset(0);
                        b.act(x, b.offset(j) + phi[e]) == b.offset(j) + phi[xe]
                    })
                })
            })
    })
}

impl Truncation {
    pub fn new(group: FiniteGroup, bounds: Bounds) -> Truncation {
        Truncation { group, bounds }
    }

    pub fn non_equivariant(bounds: Bounds) -> Truncation {
        Truncation { group: FiniteGroup::trivial(), bounds }
    }

    pub fn shapes(&self) -> Vec<Tree> {
        self.bounds.shapes()
    }

    /// Transitive G-forests `G ·_H U` with `U` in bounds, one per
    /// equivariant isomorphism class.
    pub fn g_trees(&self) -> Vec<GForest> {
        let mut out: Vec<GForest> = Vec::new();
        for u in self.shapes() {
            let auts = automorphisms(&u);
            for h in self.group.subgroup_classes() {
                let mut found: Vec<GForest> = Vec::new();
                for rho in homomorphisms(&self.group, &h, &auts) {
                    let f = induce(&self.group, &h, &u, &rho).expect("induced forest");
                    if !found.iter().any(|x| g_isomorphic(x, &f)) {
                        found.push(f);
                    }
                }
                out.extend(found);
            }
        }
        out
    }

    /// Whether `f` has components inside the bounds.
    pub fn admits(&self, f: &GForest) -> bool {
        f.components().iter().all(|c| self.bounds.admits(c))
    }

    pub fn require(&self, f: &GForest) -> Result<()> {
        if self.admits(f) {
            Ok(())
        } else {
            Err(Error::TruncationTooSmall(format!(
                "a component exceeds degree {} or arity {}",
                self.bounds.degree, self.bounds.arity
            )))
        }
    }
}

/// Counts shapes by vertex number; handy for sanity checks.
pub fn census(bounds: Bounds) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for t in bounds.shapes() {
        *m.entry(t.degree()).or_insert(0) += 1;
    }
    m
}
