//! Presheaves on tree cells, operad nerves, and strict lifting checks.
//!
//! Presheaves are evaluated on concrete cells of a G-forest ambient, so a
//! value over a cell can be compared with values over its faces and
//! translates without choosing skeletal representatives. Ambient ids are in
//! planar preorder, which makes the sorted children of a vertex its planar
//! order; partial composition then lands in that order with no shuffling.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::broadposet::{Edge, Tree};
use crate::complexes;
use crate::equivariance::GForest;
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::subtree::{subsets, Subtree};
use crate::treemaps::monotone_maps;
use crate::truncation::{automorphisms, Bounds, Truncation};

/// An element of a presheaf over one cell, in a presheaf-specific encoding.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dendrex(pub Vec<u32>);

/// One operation with its profile.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Op {
    pub inputs: Vec<usize>,
    pub output: usize,
    pub label: u32,
}

/// Colored symmetric operad with finitely many operations per profile.
pub trait SetOperad: Send + Sync {
    fn name(&self) -> String;
    fn n_colors(&self) -> usize;
    fn color_name(&self, c: usize) -> String {
        c.to_string()
    }
    /// Operations of the given arity with output `out`.
    fn operations_into(&self, out: usize, arity: usize) -> Vec<Op>;
    fn unit(&self, c: usize) -> u32;
    /// `outer ∘_i inner`, if defined.
    fn compose(&self, outer: &Op, i: usize, inner: &Op) -> Option<u32>;
    /// The operation whose `j`-th input is input `tau[j]` of `op`.
    fn permute(&self, op: &Op, _tau: &[usize]) -> u32 {
        op.label
    }
    /// Group acting on colors and operations; `None` for the trivial action.
    fn group(&self) -> Option<&FiniteGroup> {
        None
    }
    fn act_color(&self, _g: Elem, c: usize) -> usize {
        c
    }
    fn act(&self, _g: Elem, op: &Op) -> u32 {
        op.label
    }
}

fn splice(outer: &Op, i: usize, inner: &Op) -> Vec<usize> {
    let mut v = outer.inputs[..i].to_vec();
    v.extend_from_slice(&inner.inputs);
    v.extend_from_slice(&outer.inputs[i + 1..]);
    v
}

fn composite(o: &dyn SetOperad, outer: &Op, i: usize, inner: &Op) -> Result<Op> {
    if outer.inputs.get(i) != Some(&inner.output) {
        return Err(Error::AxiomViolation(format!("color mismatch composing at input {i}")));
    }
    let label = o
        .compose(outer, i, inner)
        .ok_or_else(|| Error::TruncationTooSmall(format!("no composite recorded for input {i}")))?;
    Ok(Op { inputs: splice(outer, i, inner), output: outer.output, label })
}

/// Checks units, both associativity laws and compatibility with the group
/// on all composites of operations of arity at most `max_arity`.
pub fn check_axioms(o: &dyn SetOperad, max_arity: usize) -> Result<()> {
    let mut ops = Vec::new();
    for c in 0..o.n_colors() {
        for n in 0..=max_arity {
            ops.extend(o.operations_into(c, n));
        }
    }
    let fail = |what: &str, f: &Op| Error::AxiomViolation(format!("{what} fails at {f:?} in {}", o.name()));
    let exists = |f: &Op| o.operations_into(f.output, f.inputs.len()).contains(f);
    let by_output = |c: usize| ops.iter().filter(move |g| g.output == c);
    for f in &ops {
        let u = Op { inputs: vec![f.output], output: f.output, label: o.unit(f.output) };
        if composite(o, &u, 0, f)? != *f {
            return Err(fail("left unit", f));
        }
        for (i, &c) in f.inputs.iter().enumerate() {
            let u = Op { inputs: vec![c], output: c, label: o.unit(c) };
            if composite(o, f, i, &u)? != *f {
                return Err(fail("right unit", f));
            }
        }
        for (i, &c) in f.inputs.iter().enumerate() {
            for g in by_output(c) {
                let fg = composite(o, f, i, g)?;
                if !exists(&fg) {
                    return Err(fail("closure", f));
                }
                if let Some(grp) = o.group() {
                    for x in grp.elements() {
                        let gf = Op { inputs: f.inputs.iter().map(|&c| o.act_color(x, c)).collect(), output: o.act_color(x, f.output), label: o.act(x, f) };
                        let gg = Op { inputs: g.inputs.iter().map(|&c| o.act_color(x, c)).collect(), output: o.act_color(x, g.output), label: o.act(x, g) };
                        if composite(o, &gf, i, &gg)?.label != o.act(x, &fg) {
                            return Err(fail("equivariance", f));
                        }
                    }
                }
                // sequential
                for (j, &d) in g.inputs.iter().enumerate() {
                    for h in by_output(d) {
                        let lhs = composite(o, &fg, i + j, h)?;
                        let rhs = composite(o, f, i, &composite(o, g, j, h)?)?;
                        if lhs != rhs {
                            return Err(fail("sequential associativity", f));
                        }
                    }
                }
                // parallel
                for (j, &d) in f.inputs.iter().enumerate().skip(i + 1) {
                    for h in by_output(d) {
                        let lhs = composite(o, &fg, j + g.inputs.len() - 1, h)?;
                        let rhs = composite(o, &composite(o, f, j, h)?, i, g)?;
                        if lhs != rhs {
                            return Err(fail("parallel associativity", f));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// One color, one operation of every arity.
#[derive(Clone, Debug, Default)]
pub struct Terminal;

impl SetOperad for Terminal {
    fn name(&self) -> String {
        "terminal".into()
    }
    fn n_colors(&self) -> usize {
        1
    }
    fn operations_into(&self, _out: usize, arity: usize) -> Vec<Op> {
        vec![Op { inputs: vec![0; arity], output: 0, label: 0 }]
    }
    fn unit(&self, _c: usize) -> u32 {
        0
    }
    fn compose(&self, _outer: &Op, _i: usize, _inner: &Op) -> Option<u32> {
        Some(0)
    }
}

/// One color, `Z/2` worth of operations in every arity, composition adds
/// labels. Nullary operations included.
#[derive(Clone, Debug, Default)]
pub struct Parity;

impl SetOperad for Parity {
    fn name(&self) -> String {
        "parity".into()
    }
    fn n_colors(&self) -> usize {
        1
    }
    fn operations_into(&self, _out: usize, arity: usize) -> Vec<Op> {
        (0..2).map(|label| Op { inputs: vec![0; arity], output: 0, label }).collect()
    }
    fn unit(&self, _c: usize) -> u32 {
        0
    }
    fn compose(&self, outer: &Op, _i: usize, inner: &Op) -> Option<u32> {
        Some((outer.label + inner.label) % 2)
    }
}

/// Colors `x = 0` and `y = 1`; an operation exists iff its output is `y`
/// or all of its inputs are `x`.
#[derive(Clone, Debug, Default)]
pub struct TwoColor;

impl SetOperad for TwoColor {
    fn name(&self) -> String {
        "two-color".into()
    }
    fn n_colors(&self) -> usize {
        2
    }
    fn color_name(&self, c: usize) -> String {
        ["x", "y"][c].into()
    }
    fn operations_into(&self, out: usize, arity: usize) -> Vec<Op> {
        if out == 0 {
            return vec![Op { inputs: vec![0; arity], output: 0, label: 0 }];
        }
        (0u32..(1 << arity))
            .map(|m| Op { inputs: (0..arity).map(|i| ((m >> i) & 1) as usize).collect(), output: 1, label: 0 })
            .collect()
    }
    fn unit(&self, _c: usize) -> u32 {
        0
    }
    fn compose(&self, _outer: &Op, _i: usize, _inner: &Op) -> Option<u32> {
        Some(0)
    }
}

/// The colored operad freely generated by a tree, with the group action of
/// a one-component G-forest permuting colors.
#[derive(Clone, Debug)]
pub struct FreeOnTree {
    forest: GForest,
}

impl FreeOnTree {
    pub fn new(tree: Tree) -> FreeOnTree {
        FreeOnTree { forest: GForest::trivial(FiniteGroup::trivial(), tree) }
    }
    pub fn equivariant(forest: GForest) -> Result<FreeOnTree> {
        if forest.n_components() != 1 {
            return Err(Error::InvalidInput("free operad needs a one-component forest".into()));
        }
        Ok(FreeOnTree { forest })
    }
}

impl SetOperad for FreeOnTree {
    fn name(&self) -> String {
        "free".into()
    }
    fn n_colors(&self) -> usize {
        self.forest.n_edges()
    }
    fn color_name(&self, c: usize) -> String {
        self.forest.name(c).to_string()
    }
    fn operations_into(&self, out: usize, arity: usize) -> Vec<Op> {
        let tree = self.forest.component(0);
        let mut v = Vec::new();
        for cut in tree.cuts(out) {
            if cut.len() != arity {
                continue;
            }
            for p in crate::treemaps::permutations(&cut) {
                v.push(Op { inputs: p, output: out, label: 0 });
            }
        }
        v
    }
    fn unit(&self, _c: usize) -> u32 {
        0
    }
    fn compose(&self, _outer: &Op, _i: usize, _inner: &Op) -> Option<u32> {
        Some(0)
    }
    fn group(&self) -> Option<&FiniteGroup> {
        (!self.forest.group().is_trivial()).then(|| self.forest.group())
    }
    fn act_color(&self, g: Elem, c: usize) -> usize {
        self.forest.act(g, c)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OpEntry {
    pub name: String,
    pub inputs: Vec<String>,
    pub output: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompositionEntry {
    pub outer: String,
    pub position: usize,
    pub inner: String,
    pub result: String,
}

/// Operad file: colors, operations, partial compositions and units.
/// Only non-symmetric data is read; symmetries act trivially.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperadFile {
    pub colors: Vec<String>,
    pub operations: Vec<OpEntry>,
    pub compositions: Vec<CompositionEntry>,
    pub units: BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
pub struct TableOperad {
    colors: Vec<String>,
    ops: Vec<Op>,
    names: Vec<String>,
    table: BTreeMap<(u32, usize, u32), u32>,
    units: Vec<u32>,
}

impl TableOperad {
    pub fn from_file(f: &OperadFile) -> Result<TableOperad> {
        let color = |s: &str| {
            f.colors.iter().position(|c| c == s).ok_or_else(|| Error::InvalidInput(format!("unknown color {s}")))
        };
        let names: Vec<String> = f.operations.iter().map(|o| o.name.clone()).collect();
        let op = |s: &str| {
            names.iter().position(|c| c == s).map(|i| i as u32).ok_or_else(|| Error::InvalidInput(format!("unknown operation {s}")))
        };
        let mut ops = Vec::new();
        for (i, o) in f.operations.iter().enumerate() {
            ops.push(Op {
                inputs: o.inputs.iter().map(|c| color(c)).collect::<Result<_>>()?,
                output: color(&o.output)?,
                label: i as u32,
            });
        }
        let mut table = BTreeMap::new();
        for c in &f.compositions {
            table.insert((op(&c.outer)?, c.position, op(&c.inner)?), op(&c.result)?);
        }
        let units = f
            .colors
            .iter()
            .map(|c| op(f.units.get(c).ok_or_else(|| Error::InvalidInput(format!("no unit for {c}")))?))
            .collect::<Result<_>>()?;
        Ok(TableOperad { colors: f.colors.clone(), ops, names, table, units })
    }

    pub fn from_json(s: &str) -> Result<TableOperad> {
        TableOperad::from_file(&serde_json::from_str(s)?)
    }

    pub fn op_name(&self, label: u32) -> &str {
        &self.names[label as usize]
    }
}

impl SetOperad for TableOperad {
    fn name(&self) -> String {
        "table".into()
    }
    fn n_colors(&self) -> usize {
        self.colors.len()
    }
    fn color_name(&self, c: usize) -> String {
        self.colors[c].clone()
    }
    fn operations_into(&self, out: usize, arity: usize) -> Vec<Op> {
        self.ops.iter().filter(|o| o.output == out && o.inputs.len() == arity).cloned().collect()
    }
    fn unit(&self, c: usize) -> u32 {
        self.units[c]
    }
    fn compose(&self, outer: &Op, i: usize, inner: &Op) -> Option<u32> {
        self.table.get(&(outer.label, i, inner.label)).copied()
    }
}

/// Set-valued presheaf on cells of planar-ordered ambients.
pub trait Presheaf: Send + Sync {
    fn name(&self) -> String;
    fn values(&self, v: &Subtree) -> Result<Vec<Dendrex>>;
    /// Restriction along the face inclusion `face ⊆ v`.
    fn restrict(&self, v: &Subtree, face: &Subtree, x: &Dendrex) -> Result<Dendrex>;
    /// Transport along the isomorphism `map: v → w`, then act by `g`.
    fn transport(&self, v: &Subtree, w: &Subtree, map: &dyn Fn(Edge) -> Edge, g: Elem, x: &Dendrex) -> Dendrex;
    /// Group acting on values, `None` when the action is trivial.
    fn group(&self) -> Option<&FiniteGroup> {
        None
    }
}

/// The dendroidal nerve of a set operad.
pub struct Nerve<O> {
    pub operad: O,
}

impl<O: SetOperad> Nerve<O> {
    /// Checks the operad axioms on small composites first.
    pub fn new(operad: O) -> Result<Nerve<O>> {
        check_axioms(&operad, 2)?;
        Ok(Nerve { operad })
    }

    fn decode(&self, v: &Subtree, x: &Dendrex) -> (BTreeMap<Edge, usize>, BTreeMap<Edge, u32>) {
        let ne = v.edges().len();
        let colors = v.edges().iter().zip(&x.0[..ne]).map(|(&e, &c)| (e, c as usize)).collect();
        let ops = v.vertices().keys().zip(&x.0[ne..]).map(|(&e, &o)| (e, o)).collect();
        (colors, ops)
    }

    fn encode(v: &Subtree, colors: &BTreeMap<Edge, usize>, ops: &BTreeMap<Edge, u32>) -> Dendrex {
        let mut d: Vec<u32> = v.edges().iter().map(|e| colors[e] as u32).collect();
        d.extend(v.vertices().keys().map(|e| ops[e]));
        Dendrex(d)
    }

    fn fill(&self, v: &Subtree, stack: &mut Vec<Edge>, colors: &mut BTreeMap<Edge, usize>, ops: &mut BTreeMap<Edge, u32>, out: &mut Vec<Dendrex>) {
        let Some(e) = stack.pop() else {
            out.push(Self::encode(v, colors, ops));
            return;
        };
        match v.children(e) {
            None => self.fill(v, stack, colors, ops, out),
            Some(kids) => {
                for op in self.operad.operations_into(colors[&e], kids.len()) {
                    for (k, &c) in kids.iter().zip(&op.inputs) {
                        colors.insert(*k, c);
                    }
                    ops.insert(e, op.label);
                    let mut st = stack.clone();
                    st.extend(kids.iter().copied());
                    self.fill(v, &mut st, colors, ops, out);
                }
                ops.remove(&e);
            }
        }
    }

    fn composite_at(&self, v: &Subtree, face: &Subtree, colors: &BTreeMap<Edge, usize>, ops: &BTreeMap<Edge, u32>, w: Edge) -> Result<Op> {
        let kids = v.children(w).expect("vertex");
        let mut acc = Op { inputs: kids.iter().map(|k| colors[k]).collect(), output: colors[&w], label: ops[&w] };
        let mut pos = 0;
        for &c in kids {
            if face.has_edge(c) {
                pos += 1;
            } else {
                let inner = self.composite_at(v, face, colors, ops, c)?;
                let n = inner.inputs.len();
                acc = composite(&self.operad, &acc, pos, &inner)?;
                pos += n;
            }
        }
        Ok(acc)
    }
}

impl<O: SetOperad> Presheaf for Nerve<O> {
    fn name(&self) -> String {
        format!("nerve({})", self.operad.name())
    }
    fn values(&self, v: &Subtree) -> Result<Vec<Dendrex>> {
        let mut out = Vec::new();
        for c in 0..self.operad.n_colors() {
            let mut colors = BTreeMap::from([(v.root(), c)]);
            self.fill(v, &mut vec![v.root()], &mut colors, &mut BTreeMap::new(), &mut out);
        }
        out.sort();
        Ok(out)
    }
    fn restrict(&self, v: &Subtree, face: &Subtree, x: &Dendrex) -> Result<Dendrex> {
        let (colors, ops) = self.decode(v, x);
        let mut fops = BTreeMap::new();
        for &w in face.vertices().keys() {
            fops.insert(w, self.composite_at(v, face, &colors, &ops, w)?.label);
        }
        let fcolors: BTreeMap<Edge, usize> = face.edges().iter().map(|e| (*e, colors[e])).collect();
        Ok(Self::encode(face, &fcolors, &fops))
    }
    fn transport(&self, v: &Subtree, w: &Subtree, map: &dyn Fn(Edge) -> Edge, g: Elem, x: &Dendrex) -> Dendrex {
        let (colors, ops) = self.decode(v, x);
        let act = self.operad.group().is_some();
        let ac = |c: usize| if act { self.operad.act_color(g, c) } else { c };
        let wcolors: BTreeMap<Edge, usize> = colors.iter().map(|(&e, &c)| (map(e), ac(c))).collect();
        let mut wops = BTreeMap::new();
        for (&e, kids) in v.vertices() {
            let op = Op { inputs: kids.iter().map(|k| colors[k]).collect(), output: colors[&e], label: ops[&e] };
            let label = if act { self.operad.act(g, &op) } else { op.label };
            let moved = Op { inputs: op.inputs.iter().map(|&c| ac(c)).collect(), output: ac(op.output), label };
            let wkids = w.children(map(e)).expect("isomorphic cells");
            let tau: Vec<usize> = wkids.iter().map(|d| kids.iter().position(|&k| map(k) == *d).unwrap()).collect();
            wops.insert(map(e), self.operad.permute(&moved, &tau));
        }
        Self::encode(w, &wcolors, &wops)
    }
    fn group(&self) -> Option<&FiniteGroup> {
        self.operad.group()
    }
}

/// Constant presheaf on a finite G-set.
#[derive(Clone, Debug)]
pub struct Constant {
    points: u32,
    action: Option<(FiniteGroup, Vec<Vec<u32>>)>,
}

impl Constant {
    pub fn point() -> Constant {
        Constant { points: 1, action: None }
    }
    pub fn new(points: u32) -> Constant {
        Constant { points, action: None }
    }
    /// `group` acting on `0..points` through `action[g][p]`.
    pub fn with_action(group: FiniteGroup, action: Vec<Vec<u32>>) -> Result<Constant> {
        let points = action.first().map_or(0, |a| a.len()) as u32;
        for a in group.elements() {
            for b in group.elements() {
                for p in 0..points as usize {
                    if action[group.mul(a, b)][p] != action[a][action[b][p] as usize] {
                        return Err(Error::NotAnAction("constant presheaf action".into()));
                    }
                }
            }
        }
        Ok(Constant { points, action: Some((group, action)) })
    }
    /// The G-set `G/K` with `G` acting by left multiplication.
    pub fn cosets(group: &FiniteGroup, k: &crate::group::Subgroup) -> Constant {
        let reps = group.coset_reps(k);
        let coset_of = |x: Elem| reps.iter().position(|&r| k.contains(group.mul(group.inv(r), x))).unwrap() as u32;
        let action = group.elements().map(|g| reps.iter().map(|&r| coset_of(group.mul(g, r))).collect()).collect();
        Constant { points: reps.len() as u32, action: Some((group.clone(), action)) }
    }
}

impl Presheaf for Constant {
    fn name(&self) -> String {
        format!("constant({})", self.points)
    }
    fn values(&self, _v: &Subtree) -> Result<Vec<Dendrex>> {
        Ok((0..self.points).map(|p| Dendrex(vec![p])).collect())
    }
    fn restrict(&self, _v: &Subtree, _face: &Subtree, x: &Dendrex) -> Result<Dendrex> {
        Ok(x.clone())
    }
    fn transport(&self, _v: &Subtree, _w: &Subtree, _map: &dyn Fn(Edge) -> Edge, g: Elem, x: &Dendrex) -> Dendrex {
        match &self.action {
            Some((_, a)) => Dendrex(vec![a[g][x.0[0] as usize]]),
            None => x.clone(),
        }
    }
    fn group(&self) -> Option<&FiniteGroup> {
        self.action.as_ref().map(|(g, _)| g)
    }
}

/// The point, with one extra element over every cell of a given shape. The
/// extra element restricts to the point along every proper face.
#[derive(Clone, Debug)]
pub struct Perturbed {
    pub shape: String,
}

impl Perturbed {
    /// Perturbed over the two-vertex linear tree.
    pub fn standard() -> Perturbed {
        Perturbed { shape: Tree::linear(2).shape_code() }
    }
}

fn shape_of(v: &Subtree) -> String {
    v.to_tree(|e| e.to_string()).0.shape_code()
}

impl Presheaf for Perturbed {
    fn name(&self) -> String {
        format!("perturbed({})", self.shape)
    }
    fn values(&self, v: &Subtree) -> Result<Vec<Dendrex>> {
        let mut out = vec![Dendrex(vec![0])];
        if shape_of(v) == self.shape {
            out.push(Dendrex(vec![1]));
        }
        Ok(out)
    }
    fn restrict(&self, v: &Subtree, face: &Subtree, x: &Dendrex) -> Result<Dendrex> {
        Ok(if face == v { x.clone() } else { Dendrex(vec![0]) })
    }
    fn transport(&self, _v: &Subtree, _w: &Subtree, _map: &dyn Fn(Edge) -> Edge, _g: Elem, x: &Dendrex) -> Dendrex {
        x.clone()
    }
}

/// `Ω[F]` for a G-forest: maps from a cell into some component, with the
/// group acting by postcomposition. With `boundary` set, only maps that
/// miss an edge of their component.
#[derive(Clone, Debug)]
pub struct Representable {
    pub forest: GForest,
    pub boundary: bool,
}

impl Presheaf for Representable {
    fn name(&self) -> String {
        if self.boundary { "boundary".into() } else { "representable".into() }
    }
    fn values(&self, v: &Subtree) -> Result<Vec<Dendrex>> {
        let (vt, order) = v.to_tree(|e| e.to_string());
        let mut out = Vec::new();
        for c in 0..self.forest.n_components() {
            let comp = self.forest.component(c);
            let off = self.forest.offset(c);
            for m in monotone_maps(&vt, comp) {
                if self.boundary && m.iter().collect::<BTreeSet<_>>().len() == comp.n_edges() {
                    continue;
                }
                let mut by_id: Vec<(Edge, u32)> = order.iter().enumerate().map(|(i, &e)| (e, (m[i] + off) as u32)).collect();
                by_id.sort_unstable();
                out.push(Dendrex(by_id.into_iter().map(|(_, x)| x).collect()));
            }
        }
        out.sort();
        Ok(out)
    }
    fn restrict(&self, v: &Subtree, face: &Subtree, x: &Dendrex) -> Result<Dendrex> {
        Ok(Dendrex(face.edges().iter().map(|e| x.0[v.edges().binary_search(e).unwrap()]).collect()))
    }
    fn transport(&self, v: &Subtree, w: &Subtree, map: &dyn Fn(Edge) -> Edge, g: Elem, x: &Dendrex) -> Dendrex {
        let mut out = vec![0; w.edges().len()];
        for (i, &e) in v.edges().iter().enumerate() {
            out[w.edges().binary_search(&map(e)).unwrap()] = self.forest.act(g, x.0[i] as usize) as u32;
        }
        Dendrex(out)
    }
    fn group(&self) -> Option<&FiniteGroup> {
        Some(self.forest.group())
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Empty;

impl Presheaf for Empty {
    fn name(&self) -> String {
        "empty".into()
    }
    fn values(&self, _v: &Subtree) -> Result<Vec<Dendrex>> {
        Ok(Vec::new())
    }
    fn restrict(&self, _v: &Subtree, _face: &Subtree, x: &Dendrex) -> Result<Dendrex> {
        Ok(x.clone())
    }
    fn transport(&self, _v: &Subtree, _w: &Subtree, _map: &dyn Fn(Edge) -> Edge, _g: Elem, x: &Dendrex) -> Dendrex {
        x.clone()
    }
}

/// A compatible equivariant family: one value per maximal cell.
pub type Family = BTreeMap<Subtree, Dendrex>;

fn effective(x: &dyn Presheaf, f: &GForest, g: Elem) -> Result<Elem> {
    match x.group() {
        None => Ok(g),
        Some(grp) if grp == f.group() => Ok(g),
        Some(_) => Err(Error::InvalidInput(format!("{} carries a different group", x.name()))),
    }
}

fn maximal_common_faces(p: &Subtree, q: &Subtree) -> Vec<Subtree> {
    let common: Vec<Subtree> = p.faces().into_iter().filter(|v| q.contains_face(v)).collect();
    common
        .iter()
        .filter(|v| !common.iter().any(|w| w != *v && w.contains_face(v)))
        .cloned()
        .collect()
}

/// All equivariant maps into `x` from the subcomplex generated by the
/// G-stable cell set `cells`, as compatible families on those cells.
pub fn equivariant_maps(x: &dyn Presheaf, f: &GForest, cells: &[Subtree]) -> Result<Vec<Family>> {
    let group = f.group();
    effective(x, f, group.identity())?;
    // orbits and translates
    let mut seen: BTreeSet<Subtree> = BTreeSet::new();
    let mut orbits: Vec<(Subtree, Vec<(Elem, Subtree)>)> = Vec::new();
    for c in cells {
        if seen.contains(c) {
            continue;
        }
        let stab = f.face_isotropy(c);
        let translates: Vec<(Elem, Subtree)> =
            group.coset_reps(&stab).into_iter().map(|g| (g, f.act_subtree(g, c))).collect();
        for (_, t) in &translates {
            if !cells.contains(t) {
                return Err(Error::NotGStable(format!("{} cells, not G-stable", cells.len())));
            }
            seen.insert(t.clone());
        }
        orbits.push((c.clone(), translates));
    }
    let order: Vec<Subtree> = orbits.iter().flat_map(|(_, t)| t.iter().map(|(_, c)| c.clone())).collect();
    let pos: BTreeMap<&Subtree, usize> = order.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut overlaps: Vec<Vec<(usize, Vec<Subtree>)>> = vec![Vec::new(); order.len()];
    for (i, p) in order.iter().enumerate() {
        for (j, q) in order.iter().enumerate().take(i) {
            let m = maximal_common_faces(p, q);
            if !m.is_empty() {
                overlaps[i].push((j, m));
            }
        }
    }
    // candidates per orbit: stabilizer-fixed values
    let mut candidates = Vec::new();
    for (rep, _) in &orbits {
        let stab = f.face_isotropy(rep);
        let vals = x.values(rep)?;
        let fixed: Vec<Dendrex> = vals
            .into_iter()
            .filter(|v| {
                stab.elements().iter().all(|&k| x.transport(rep, rep, &|e| f.act(k, e), k, v) == *v)
            })
            .collect();
        candidates.push(fixed);
    }
    let mut out = Vec::new();
    let mut assigned: Vec<Option<Dendrex>> = vec![None; order.len()];
    search(x, f, &orbits, &candidates, &pos, &overlaps, 0, &mut assigned, &order, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    x: &dyn Presheaf,
    f: &GForest,
    orbits: &[(Subtree, Vec<(Elem, Subtree)>)],
    candidates: &[Vec<Dendrex>],
    pos: &BTreeMap<&Subtree, usize>,
    overlaps: &[Vec<(usize, Vec<Subtree>)>],
    k: usize,
    assigned: &mut Vec<Option<Dendrex>>,
    order: &[Subtree],
    out: &mut Vec<Family>,
) -> Result<()> {
    if k == orbits.len() {
        out.push(order.iter().cloned().zip(assigned.iter().map(|v| v.clone().unwrap())).collect());
        return Ok(());
    }
    let (rep, translates) = &orbits[k];
    'cand: for val in &candidates[k] {
        let idx: Vec<usize> = translates.iter().map(|(_, c)| pos[c]).collect();
        for ((g, c), &i) in translates.iter().zip(&idx) {
            assigned[i] = Some(x.transport(rep, c, &|e| f.act(*g, e), *g, val));
        }
        for &i in &idx {
            for (j, faces) in &overlaps[i] {
                let Some(b) = &assigned[*j] else { continue };
                let a = assigned[i].as_ref().unwrap();
                for face in faces {
                    if x.restrict(&order[i], face, a)? != x.restrict(&order[*j], face, b)? {
                        for &i in &idx {
                            assigned[i] = None;
                        }
                        continue 'cand;
                    }
                }
            }
        }
        search(x, f, orbits, candidates, pos, overlaps, k + 1, assigned, order, out)?;
        for &i in &idx {
            assigned[i] = None;
        }
    }
    Ok(())
}

fn restrict_family(x: &dyn Presheaf, f: &GForest, full: &Family, cells: &[Subtree]) -> Result<Family> {
    let mut out = BTreeMap::new();
    for c in cells {
        let comp = f.component_of(c.root());
        let whole = f.full_component(comp);
        out.insert(c.clone(), x.restrict(&whole, c, &full[&whole])?);
    }
    Ok(out)
}

/// Outcome of one strict lifting problem `A → Ω[F]`.
#[derive(Clone, Debug, Serialize)]
pub struct LiftCheck {
    pub total: usize,
    pub partial: usize,
    pub injective: bool,
    pub surjective: bool,
}

impl LiftCheck {
    pub fn unique(&self) -> bool {
        self.injective && self.surjective
    }
}

/// Whether every equivariant map from the subcomplex with maximal cells
/// `cells` extends uniquely over the whole forest.
pub fn strict_lift(x: &dyn Presheaf, f: &GForest, cells: &[Subtree]) -> Result<LiftCheck> {
    let full = equivariant_maps(x, f, &f.full_components())?;
    let part: BTreeSet<Family> = equivariant_maps(x, f, cells)?.into_iter().collect();
    let mut image = BTreeSet::new();
    for fam in &full {
        image.insert(restrict_family(x, f, fam, cells)?);
    }
    Ok(LiftCheck {
        total: full.len(),
        partial: part.len(),
        injective: image.len() == full.len(),
        surjective: image == part,
    })
}

/// `υ_*X(F) = X(F_*)^H`, computed on the first component.
pub fn upsilon_star(x: &dyn Presheaf, f: &GForest) -> Result<Vec<Dendrex>> {
    let comp = f.full_component(0);
    let h = f.component_stabilizer(0);
    let mut out = Vec::new();
    for v in x.values(&comp)? {
        let mut fixed = true;
        for &k in h.elements() {
            let k2 = effective(x, f, k)?;
            if x.transport(&comp, &comp, &|e| f.act(k, e), k2, &v) != v {
                fixed = false;
                break;
            }
        }
        if fixed {
            out.push(v);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub tree: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SegalReport {
    pub passed: bool,
    pub trees_checked: usize,
    pub witness: Option<Witness>,
}

/// Compact description of a G-tree for witnesses.
pub fn describe(f: &GForest) -> String {
    let h = f.component_stabilizer(0);
    format!(
        "G/{{{}}} acting on {}",
        f.group().subgroup_names(&h).join(","),
        f.component(0).shape_code()
    )
}

/// Strict lifting against the Segal core of every G-tree in the truncation.
pub fn strict_segal_check(x: &dyn Presheaf, tr: &Truncation) -> Result<SegalReport> {
    let trees = tr.g_trees();
    let results: Vec<Result<Option<Witness>>> = trees
        .par_iter()
        .map(|f| {
            let sc = complexes::segal_core(f).maximal();
            let r = strict_lift(x, f, &sc)?;
            Ok((!r.unique()).then(|| Witness {
                tree: describe(f),
                detail: format!("{} extensions of {} Segal-core maps", r.total, r.partial),
            }))
        })
        .collect();
    let mut witness = None;
    for r in results {
        if let Some(w) = r? {
            witness.get_or_insert(w);
        }
    }
    Ok(SegalReport { passed: witness.is_none(), trees_checked: trees.len(), witness })
}

/// The four strict lifting properties, which must agree.
#[derive(Clone, Debug, Serialize)]
pub struct LiftingSuite {
    pub segal_cores: bool,
    pub generating_horns: bool,
    pub all_horns: bool,
    pub orbital_horns: bool,
    pub trees_checked: usize,
    pub witnesses: BTreeMap<String, Witness>,
}

impl LiftingSuite {
    pub fn all_equal(&self) -> bool {
        let v = [self.segal_cores, self.generating_horns, self.all_horns, self.orbital_horns];
        v.iter().all(|&b| b == v[0])
    }
    pub fn all_true(&self) -> bool {
        self.segal_cores && self.generating_horns && self.all_horns && self.orbital_horns
    }
}

fn stable_edge_sets(f: &GForest) -> (Vec<BTreeSet<Edge>>, Vec<BTreeSet<Edge>>) {
    let inner: BTreeSet<Edge> = f.inner_edges().into_iter().collect();
    let orbits: Vec<BTreeSet<Edge>> = f.edge_orbits().into_iter().filter(|o| o.is_subset(&inner)).collect();
    let unions = subsets(&orbits)
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|s| s.into_iter().flatten().collect())
        .collect();
    (orbits, unions)
}

/// Decides strict lifting against Segal cores, single-orbit horns, all
/// G-inner horns and orbital horns over the truncation.
pub fn lifting_equivalence_suite(x: &dyn Presheaf, tr: &Truncation) -> Result<LiftingSuite> {
    if tr.bounds.degree < 2 {
        return Err(Error::TruncationTooSmall("no inner edges below degree 2".into()));
    }
    let trees = tr.g_trees();
    let per_tree: Vec<Result<[Option<Witness>; 4]>> = trees
        .par_iter()
        .map(|f| {
            let mut w: [Option<Witness>; 4] = Default::default();
            let note = |name: &str, r: &LiftCheck| Witness {
                tree: describe(f),
                detail: format!("{name}: {} extensions of {} maps", r.total, r.partial),
            };
            let r = strict_lift(x, f, &complexes::segal_core(f).maximal())?;
            if !r.unique() {
                w[0] = Some(note("Segal core", &r));
            }
            let (orbits, unions) = stable_edge_sets(f);
            for e in &orbits {
                let r = strict_lift(x, f, &complexes::horn(f, e)?.maximal())?;
                if !r.unique() && w[1].is_none() {
                    w[1] = Some(note("single-orbit horn", &r));
                }
            }
            for e in &unions {
                let r = strict_lift(x, f, &complexes::horn(f, e)?.maximal())?;
                if !r.unique() && w[2].is_none() {
                    w[2] = Some(note("horn", &r));
                }
                let r = strict_lift(x, f, &complexes::orbital_horn(f, e)?.maximal())?;
                if !r.unique() && w[3].is_none() {
                    w[3] = Some(note("orbital horn", &r));
                }
            }
            Ok(w)
        })
        .collect();
    let mut first: [Option<Witness>; 4] = Default::default();
    for r in per_tree {
        for (slot, w) in first.iter_mut().zip(r?) {
            if slot.is_none() {
                *slot = w;
            }
        }
    }
    let names = ["segal_cores", "generating_horns", "all_horns", "orbital_horns"];
    let flags: Vec<bool> = first.iter().map(Option::is_none).collect();
    let witnesses = names.iter().zip(first).filter_map(|(n, w)| w.map(|w| (n.to_string(), w))).collect();
    Ok(LiftingSuite {
        segal_cores: flags[0],
        generating_horns: flags[1],
        all_horns: flags[2],
        orbital_horns: flags[3],
        trees_checked: trees.len(),
        witnesses,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalWitness {
    pub tree: String,
    pub value: Dendrex,
    pub stabilizer: usize,
}

/// Whether `Aut(U)` acts freely on `Y(U) ∖ X(U)` for every shape in bounds.
pub fn is_normal(x: &dyn Presheaf, y: &dyn Presheaf, bounds: Bounds) -> Result<Option<NormalWitness>> {
    for u in bounds.shapes() {
        let cell = Subtree::from_tree(&u, 0);
        let inside: BTreeSet<Dendrex> = x.values(&cell)?.into_iter().collect();
        let auts = automorphisms(&u);
        let identity = y.group().map_or(0, |g| g.identity());
        for v in y.values(&cell)? {
            if inside.contains(&v) {
                continue;
            }
            let stab = auts.iter().filter(|a| y.transport(&cell, &cell, &|e| a[e], identity, &v) == v).count();
            if stab > 1 {
                return Ok(Some(NormalWitness { tree: u.shape_code(), value: v, stabilizer: stab }));
            }
        }
    }
    Ok(None)
}

/// The pullback square obtained by cutting a G-tree along an edge orbit.
#[derive(Clone, Debug, Serialize)]
pub struct GraftingIso {
    pub whole: usize,
    pub lower: usize,
    pub upper: usize,
    pub edge: usize,
    pub pullback: usize,
    pub bijective: bool,
}

/// Compares `Z(T)` with `Z(R₁) ×_{Z(G/K·η)} Z(R₂)` for `Z = υ_*X`, where
/// `R₁` lies below the orbit `cut` and `R₂` above it.
pub fn grafting_iso(x: &dyn Presheaf, f: &GForest, cut: &BTreeSet<Edge>) -> Result<GraftingIso> {
    if !f.is_g_stable(cut) || cut.iter().any(|&e| f.is_leaf(e) || f.is_root(e)) {
        return Err(Error::NotInner("cut must be a G-stable set of inner edges".into()));
    }
    let mut lower = Vec::new();
    for c in f.full_components() {
        let leaves: Vec<Edge> = c
            .leaves()
            .into_iter()
            .filter(|&l| !cut.iter().any(|&k| c.has_edge(k) && c.le_d(l, k) && l != k))
            .chain(cut.iter().copied().filter(|&k| c.has_edge(k)))
            .collect();
        let mut leaves = leaves;
        leaves.sort_unstable();
        leaves.dedup();
        lower.push(c.outer_face(c.root(), &leaves));
    }
    let mut upper = Vec::new();
    for &k in cut {
        let c = f.full_component(f.component_of(k));
        let leaves: Vec<Edge> = c.leaves().into_iter().filter(|&l| c.le_d(l, k)).collect();
        upper.push(c.outer_face(k, &leaves));
    }
    let etas: Vec<Subtree> = cut.iter().map(|&k| Subtree::eta(k)).collect();
    let whole = equivariant_maps(x, f, &f.full_components())?;
    let zl = equivariant_maps(x, f, &lower)?;
    let zu = equivariant_maps(x, f, &upper)?;
    let ze = equivariant_maps(x, f, &etas)?;
    let on_etas = |fam: &Family, cells: &[Subtree]| -> Result<Vec<Dendrex>> {
        etas.iter()
            .map(|eta| {
                let owner = cells.iter().find(|c| c.has_edge(eta.root())).unwrap();
                x.restrict(owner, eta, &fam[owner])
            })
            .collect()
    };
    let mut pullback = BTreeSet::new();
    for a in &zl {
        for b in &zu {
            if on_etas(a, &lower)? == on_etas(b, &upper)? {
                pullback.insert((a.clone(), b.clone()));
            }
        }
    }
    let mut image = BTreeSet::new();
    for fam in &whole {
        image.insert((restrict_family(x, f, fam, &lower)?, restrict_family(x, f, fam, &upper)?));
    }
    Ok(GraftingIso {
        whole: whole.len(),
        lower: zl.len(),
        upper: zu.len(),
        edge: ze.len(),
        pullback: pullback.len(),
        bijective: image.len() == whole.len() && image == pullback,
    })
}

/// Built-in operads by name.
pub fn builtin_operad(name: &str) -> Result<Box<dyn Presheaf>> {
    Ok(match name {
        "terminal" | "comm" => Box::new(Nerve::new(Terminal)?),
        "parity" => Box::new(Nerve::new(Parity)?),
        "two-color" => Box::new(Nerve::new(TwoColor)?),
        "point" => Box::new(Constant::point()),
        "perturbed" => Box::new(Perturbed::standard()),
        other => return Err(Error::InvalidInput(format!("unknown built-in presheaf `{other}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(t: &Tree) -> Subtree {
        Subtree::from_tree(t, 0)
    }

    #[test]
    fn nerve_of_terminal_is_a_point() {
        let n = Nerve::new(Terminal).unwrap();
        assert_eq!(n.values(&cell(&Tree::corolla(3))).unwrap().len(), 1);
    }

    #[test]
    fn free_binary_corolla_has_two_dendrices() {
        let c2 = Tree::corolla(2);
        let n = Nerve::new(FreeOnTree::new(c2.clone())).unwrap();
        assert_eq!(n.values(&cell(&c2)).unwrap().len(), 2);
    }

    #[test]
    fn parity_inner_face_adds() {
        let n = Nerve::new(Parity).unwrap();
        let t = cell(&Tree::linear(2));
        let inner = t.remove_inner(&[1]);
        for v in n.values(&t).unwrap() {
            let r = n.restrict(&t, &inner, &v).unwrap();
            let ne = t.edges().len();
            assert_eq!(r.0[2], (v.0[ne] + v.0[ne + 1]) % 2);
        }
    }

    #[test]
    fn symmetric_dendrex_is_not_normal() {
        let n = Nerve::new(Terminal).unwrap();
        assert!(is_normal(&Empty, &n, Bounds::new(1, 2)).unwrap().is_some());
    }

    #[test]
    fn broken_table_is_rejected() {
        let f = OperadFile {
            colors: vec!["c".into()],
            operations: vec![
                OpEntry { name: "id".into(), inputs: vec!["c".into()], output: "c".into() },
                OpEntry { name: "u".into(), inputs: vec!["c".into()], output: "c".into() },
            ],
            compositions: vec![
                CompositionEntry { outer: "id".into(), position: 0, inner: "id".into(), result: "id".into() },
                CompositionEntry { outer: "id".into(), position: 0, inner: "u".into(), result: "u".into() },
                CompositionEntry { outer: "u".into(), position: 0, inner: "id".into(), result: "id".into() },
                CompositionEntry { outer: "u".into(), position: 0, inner: "u".into(), result: "u".into() },
            ],
            units: BTreeMap::from([("c".into(), "id".into())]),
        };
        let t = TableOperad::from_file(&f).unwrap();
        assert!(matches!(check_axioms(&t, 1), Err(Error::AxiomViolation(_))));
    }
}
