mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use eqdendro::broadposet::{validate_tree, validate_tree_noted, BroadRelation, RawTree, Tree};
use eqdendro::Error;

fn raw(edges: &[&str], root: Option<&str>, vertices: &[(&str, &[&str])]) -> RawTree {
    RawTree {
        edges: edges.iter().map(|s| s.to_string()).collect(),
        root: root.map(String::from),
        vertices: vertices
            .iter()
            .map(|(t, c)| (t.to_string(), c.iter().map(|s| s.to_string()).collect()))
            .collect::<BTreeMap<_, _>>(),
    }
}

#[test]
fn first_tree_classes() {
    let t = common::tree("first_tree.json");
    let c = t.classify_edges();
    assert_eq!(t.name(c.root), "r");
    assert_eq!(t.degree(), 4);
    assert_eq!(c.leaves.len() + c.inner.len() + 1, t.n_edges());
}

#[test]
fn malformed_inputs_are_rejected() {
    let dup = raw(&["r", "a", "b"], Some("r"), &[("r", &["a", "a"]), ("b", &[])]);
    assert!(matches!(validate_tree(&dup), Err(Error::DuplicateChild(_)) | Err(Error::MultipleRoots(_))));
    let roots = raw(&["r", "s", "a"], None, &[("r", &["a"])]);
    assert!(matches!(validate_tree(&roots), Err(Error::MultipleRoots(_))));
    let orphan = raw(&["r"], Some("r"), &[("r", &["x"])]);
    assert!(matches!(validate_tree(&orphan), Err(Error::OrphanEdge(_))));
    let cycle = raw(&["r", "a", "b"], Some("r"), &[("a", &["b"]), ("b", &["a"])]);
    assert!(validate_tree(&cycle).is_err());
    let wrong_root = raw(&["r", "a"], Some("a"), &[("r", &["a"])]);
    assert!(matches!(validate_tree(&wrong_root), Err(Error::RootMismatch(_))));
}

#[test]
fn stumps_are_not_leaves() {
    let t = validate_tree(&raw(&["r", "s", "l"], Some("r"), &[("r", &["s", "l"]), ("s", &[])])).unwrap();
    let c = t.classify_edges();
    assert_eq!(c.stumps.iter().map(|&e| t.name(e)).collect::<Vec<_>>(), ["s"]);
    assert_eq!(c.leaves.iter().map(|&e| t.name(e)).collect::<Vec<_>>(), ["l"]);
    assert!(!t.is_open());
}

#[test]
fn omitted_root_is_inferred() {
    let v = validate_tree_noted(&raw(&["r", "a"], None, &[("r", &["a"])])).unwrap();
    assert_eq!(v.tree.name(v.tree.root()), "r");
}

#[test]
fn linear_tree_closure_is_the_order() {
    let t = Tree::linear(3);
    // e_i ≤ e_j for i ≤ j, plus nothing broad
    assert_eq!(t.broad_closure().len(), 10);
}

proptest! {
    #[test]
    fn closure_contains_generators_and_identities(code in prop::collection::vec(0u8..5, 1..14)) {
        let t = common::tree_from_code(&code, 12);
        let closure = t.broad_closure();
        prop_assert!(t.generators().is_subset(&closure));
        for e in 0..t.n_edges() {
            let id = BroadRelation { sources: vec![e], target: e };
            prop_assert!(closure.contains(&id));
        }
        for r in &closure {
            prop_assert!(t.is_relation(&r.sources, r.target));
        }
        prop_assert_eq!(t.generators().len(), t.degree());
    }

    #[test]
    fn closure_is_closed_under_substitution(code in prop::collection::vec(0u8..5, 1..10)) {
        let t = common::tree_from_code(&code, 9);
        let closure = t.broad_closure();
        for outer in &closure {
            for inner in &closure {
                if let Some(i) = outer.sources.iter().position(|&s| s == inner.target) {
                    let mut sources = outer.sources.clone();
                    sources.splice(i..=i, inner.sources.iter().copied());
                    sources.sort_unstable();
                    let composite = BroadRelation { sources, target: outer.target };
                    prop_assert!(closure.contains(&composite));
                }
            }
        }
    }

    #[test]
    fn edge_classes_partition(code in prop::collection::vec(0u8..5, 1..16)) {
        let t = common::tree_from_code(&code, 15);
        let c = t.classify_edges();
        let mut all: Vec<usize> = c.leaves.iter().chain(&c.inner).copied().collect();
        if !c.leaves.contains(&c.root) {
            all.push(c.root);
        }
        all.sort_unstable();
        all.dedup();
        prop_assert_eq!(all.len(), t.n_edges());
        prop_assert!(c.stumps.iter().all(|s| t.is_stump(*s)));
    }

    #[test]
    fn json_roundtrip(code in prop::collection::vec(0u8..5, 1..12)) {
        let t = common::tree_from_code(&code, 10);
        let back = validate_tree(&t.to_raw()).unwrap();
        prop_assert_eq!(back.shape_code(), t.shape_code());
        prop_assert_eq!(back.broad_closure().len(), t.broad_closure().len());
    }
}
