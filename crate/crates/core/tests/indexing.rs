use std::collections::BTreeMap;

use eqdendro::broadposet::Tree;
use eqdendro::equivariance::{induce, GForest};
use eqdendro::group::FiniteGroup;
use eqdendro::indexing::{
    g_vertices, map_exists, translate, validate_weak_indexing, CorollaSignature, SieveFile, SieveSpec,
};
use eqdendro::truncation::{Bounds, Truncation};

fn corollas(g: &FiniteGroup, arities: std::ops::RangeInclusive<usize>) -> Vec<GForest> {
    let mut out = Vec::new();
    for h in g.subgroup_classes() {
        for k in arities.clone() {
            let id: Vec<usize> = (0..=k).collect();
            out.push(induce(g, &h, &Tree::corolla(k), &vec![id; h.order()]).unwrap());
        }
    }
    out
}

fn truncation() -> Truncation {
    Truncation::new(FiniteGroup::cyclic(2), Bounds::new(2, 3))
}

#[test]
fn sticks_and_units() {
    let z2 = FiniteGroup::cyclic(2);
    let s = SieveSpec::corolla_closure(truncation(), &corollas(&z2, 1..=1));
    let rep = validate_weak_indexing(&s, false);
    assert!(rep.passed);
    assert!(!validate_weak_indexing(&s, true).passed);
    let t = translate(&s).unwrap();
    assert!(t.admissible.passed && t.resynthesized);
}

#[test]
fn dropping_a_corolla_breaks_segal() {
    let full = SieveSpec::full(truncation());
    let z2 = FiniteGroup::cyclic(2);
    let c2 = induce(&z2, &z2.whole(), &Tree::corolla(2), &[vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
    let cut = full.without(&c2);
    let rep = validate_weak_indexing(&cut, false);
    assert!(!rep.passed);
    assert!(!rep.segal || !rep.sieve);
}

#[test]
fn sieve_file_matches_closure() {
    let z2 = FiniteGroup::cyclic(2);
    let file = SieveFile {
        group: "Z2".into(),
        truncation: Bounds::new(2, 3),
        corollas: (0..=3)
            .flat_map(|n| {
                [
                    CorollaSignature { subgroup: vec!["e".into()], arity: n, action: BTreeMap::new() },
                    CorollaSignature { subgroup: z2.names().to_vec(), arity: n, action: BTreeMap::new() },
                ]
            })
            .collect(),
    };
    let json = serde_json::to_string(&file).unwrap();
    let from_file = SieveSpec::from_file(&serde_json::from_str(&json).unwrap()).unwrap();
    let direct = SieveSpec::corolla_closure(truncation(), &corollas(&z2, 0..=3));
    assert_eq!(from_file.members, direct.members);
    assert!(validate_weak_indexing(&from_file, true).passed);
}

#[test]
fn vertices_and_maps() {
    let tr = truncation();
    for t in tr.g_trees() {
        assert!(map_exists(&t, &t));
        let stick = GForest::trivial(tr.group.clone(), Tree::eta("u"));
        assert!(map_exists(&stick, &t) || t.component_stabilizer(0).order() < tr.group.order());
        assert!(g_vertices(&t).len() <= t.component(0).degree());
    }
}
