use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an element inside a [`FiniteGroup`].
pub type Elem = usize;

/// A finite group given by its Cayley table.
///
/// `table[a][b]` is the product `a * b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<Elem>>,
    identity: Elem,
    inverse: Vec<Elem>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

/// A subgroup, stored as its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Subgroup(pub Vec<Elem>);

impl Subgroup {
    pub fn contains(&self, g: Elem) -> bool {
        self.0.binary_search(&g).is_ok()
    }
    pub fn order(&self) -> usize {
        self.0.len()
    }
    pub fn elements(&self) -> &[Elem] {
        &self.0
    }
    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.0.iter().all(|&g| other.contains(g))
    }
}

impl FiniteGroup {
    pub fn from_table(names: Vec<String>, table: Vec<Vec<Elem>>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty element list".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup("table is not square".into()));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("{} has no inverse", names[a])))?;
        }
        Ok(FiniteGroup { names, table, identity, inverse })
    }

    pub fn from_file(f: &GroupFile) -> Result<Self> {
        let idx = |s: &str| {
            f.elements
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::InvalidGroup(format!("unknown element {s}")))
        };
        let table = f
            .table
            .iter()
            .map(|row| row.iter().map(|s| idx(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(f.elements.clone(), table)
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            elements: self.names.clone(),
            table: self
                .table
                .iter()
                .map(|row| row.iter().map(|&x| self.names[x].clone()).collect())
                .collect(),
        }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z/n with elements named `0..n`, except Z/2 which uses `e` and `-1`.
    pub fn cyclic(n: usize) -> Self {
        let names = if n == 2 {
            vec!["e".to_string(), "-1".to_string()]
        } else if n == 1 {
            vec!["e".to_string()]
        } else {
            (0..n).map(|i| i.to_string()).collect()
        };
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(names, table).expect("cyclic group table")
    }

    /// The quaternion units {±1, ±i, ±j, ±k}.
    pub fn quaternion() -> Self {
        // element = (sign, unit) with unit 0..4 = 1,i,j,k
        let units = ["1", "i", "j", "k"];
        let mut names = Vec::new();
        for s in [false, true] {
            for u in units {
                names.push(if s { format!("-{u}") } else { u.to_string() });
            }
        }
        // unit products: (sign, unit)
        let mul_unit = |a: usize, b: usize| -> (bool, usize) {
            match (a, b) {
                (0, x) | (x, 0) => (false, x),
                (x, y) if x == y => (true, 0),
                (1, 2) => (false, 3),
                (2, 1) => (true, 3),
                (2, 3) => (false, 1),
                (3, 2) => (true, 1),
                (3, 1) => (false, 2),
                (1, 3) => (true, 2),
                _ => unreachable!(),
            }
        };
        let table = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (sa, ua) = (a >= 4, a % 4);
                        let (sb, ub) = (b >= 4, b % 4);
                        let (s, u) = mul_unit(ua, ub);
                        let sign = sa ^ sb ^ s;
                        u + if sign { 4 } else { 0 }
                    })
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("quaternion table")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }
    pub fn identity(&self) -> Elem {
        self.identity
    }
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a][b]
    }
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a]
    }
    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order()
    }
    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|x| x == name)
    }
    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup(self.elements().collect())
    }
    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup(vec![self.identity])
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: &[Elem]) -> Subgroup {
        let mut seen = BTreeSet::from([self.identity]);
        let mut queue: VecDeque<Elem> = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup(seen.into_iter().collect())
    }

    /// Checks that `elems` is a subgroup and wraps it.
    pub fn subgroup(&self, elems: &[Elem]) -> Result<Subgroup> {
        let set: BTreeSet<Elem> = elems.iter().copied().collect();
        if !set.contains(&self.identity) {
            return Err(Error::InvalidGroup("subgroup lacks identity".into()));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&self.mul(a, self.inv(b))) {
                    return Err(Error::InvalidGroup("subset not closed".into()));
                }
            }
        }
        Ok(Subgroup(set.into_iter().collect()))
    }

    /// All subgroups, by saturating joins with cyclic subgroups.
    pub fn subgroups(&self) -> Vec<Subgroup> {
        let mut found: BTreeSet<Subgroup> = BTreeSet::new();
        let mut queue = VecDeque::from([self.trivial_subgroup()]);
        found.insert(self.trivial_subgroup());
        while let Some(h) = queue.pop_front() {
            for g in self.elements() {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.0.clone();
                gens.push(g);
                let k = self.generate(&gens);
                if found.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
        }
        let mut v: Vec<Subgroup> = found.into_iter().collect();
        v.sort_by(|a, b| a.order().cmp(&b.order()).then(a.cmp(b)));
        v
    }

    pub fn conjugate(&self, g: Elem, h: &Subgroup) -> Subgroup {
        let mut v: Vec<Elem> = h.0.iter().map(|&x| self.mul(self.mul(g, x), self.inv(g))).collect();
        v.sort_unstable();
        Subgroup(v)
    }

    /// One representative per conjugacy class of subgroups.
    pub fn subgroup_classes(&self) -> Vec<Subgroup> {
        let mut reps: Vec<Subgroup> = Vec::new();
        for h in self.subgroups() {
            let dup = reps.iter().any(|r| {
                r.order() == h.order() && self.elements().any(|g| self.conjugate(g, r) == h)
            });
            if !dup {
                reps.push(h);
            }
        }
        reps
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        Subgroup(self.elements().filter(|&g| &self.conjugate(g, h) == h).collect())
    }

    /// Left coset representatives of `h`: the identity for `h` itself, then
    /// the least element of each further coset, in increasing order.
    pub fn coset_reps(&self, h: &Subgroup) -> Vec<Elem> {
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        let order = std::iter::once(self.identity).chain(self.elements().filter(|&g| g != self.identity));
        for g in order {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &x in h.elements() {
                covered[self.mul(g, x)] = true;
            }
        }
        reps
    }

    pub fn subgroup_names(&self, h: &Subgroup) -> Vec<String> {
        h.0.iter().map(|&g| self.names[g].clone()).collect()
    }
}
