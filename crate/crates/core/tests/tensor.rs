mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use eqdendro::broadposet::Tree;
use eqdendro::replay::replay_file;
use eqdendro::subtree::Subtree;
use eqdendro::tensor::{TensorMode, TensorProduct};

use common::plain;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn names(tp: &TensorProduct, u: &Subtree) -> BTreeSet<String> {
    u.edges().iter().map(|&e| tp.ambient().name(e).to_string()).collect()
}

#[test]
fn linear_products_are_shuffles() {
    for m in 1..=3 {
        for n in 1..=3 {
            let tp = TensorProduct::new(&plain(Tree::linear(m)), &plain(Tree::linear(n))).unwrap();
            let p = tp.percolation(TensorMode::Standard).unwrap();
            assert_eq!(p.trees.len(), binomial(m + n, m), "L{m} ⊗ L{n}");
        }
    }
}

#[test]
fn corolla_product_relation_shares_an_inner_face() {
    let tp = TensorProduct::new(&plain(Tree::corolla(2)), &plain(Tree::corolla(3))).unwrap();
    let p = tp.percolation(TensorMode::Standard).unwrap();
    assert_eq!(p.trees.len(), 2);
    let s_first = p.trees.iter().position(|u| names(&tp, u).contains("r_l1")).unwrap();
    let t_first = 1 - s_first;
    assert!(p.poset.lt(s_first, t_first));
    let core = |u: &Subtree| u.remove_inner(&u.inner_edges());
    assert_eq!(core(&p.trees[0]), core(&p.trees[1]));
    assert_eq!(p.trees[s_first].inner_edges().len(), 2);
    assert_eq!(p.trees[t_first].inner_edges().len(), 3);
}

#[test]
fn z2_percolation() {
    let s = common::forest("percolation_s.json");
    let t = common::forest("percolation_t.json");
    let tp = TensorProduct::new(&s, &t).unwrap();
    let orbit = t.orbit(t.edge("xi").unwrap());
    let rep = tp.verify_characteristic(&orbit, TensorMode::Standard, true).unwrap();
    assert_eq!(rep.percolation.trees.len(), 5);
    assert!(rep.report.passed());
    assert!(replay_file(&rep.certificate.unwrap().to_file()).is_ok());
}

#[test]
fn mismatched_groups_are_rejected() {
    let s = common::forest("percolation_s.json");
    assert!(TensorProduct::new(&s, &plain(Tree::corolla(2))).is_err());
}

fn open_tree() -> impl Strategy<Value = Tree> {
    prop::collection::vec(prop::sample::select(vec![0u8, 2, 3]), 1..5).prop_map(|c| common::tree_from_code(&c, 4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn characteristic_conditions_hold(s in open_tree(), t in open_tree()) {
        let (s, t) = (plain(s), plain(t));
        let tp = TensorProduct::new(&s, &t).unwrap();
        let p = tp.percolation(TensorMode::Standard).unwrap();
        for u in &p.trees {
            prop_assert_eq!(u.leaves().len(), s.leaves().len() * t.leaves().len());
        }
        for e in t.inner_edges() {
            let rep = tp.verify_characteristic(&t.orbit(e), TensorMode::Standard, true).unwrap();
            prop_assert!(rep.report.passed());
            prop_assert!(replay_file(&rep.certificate.unwrap().to_file()).is_ok());
        }
    }
}
