mod common;

use proptest::prelude::*;

use eqdendro::broadposet::Tree;
use eqdendro::equivariance::GForest;
use eqdendro::genuine::{
    check_axioms, equivariant_maps, grafting_iso, strict_segal_check, upsilon_star, Constant, Empty, Nerve, Parity,
    Perturbed, Presheaf, Representable, Terminal, TwoColor,
};
use eqdendro::group::FiniteGroup;
use eqdendro::truncation::{Bounds, Truncation};

#[test]
fn builtin_operads_satisfy_axioms() {
    check_axioms(&Terminal, 3).unwrap();
    check_axioms(&Parity, 3).unwrap();
    check_axioms(&TwoColor, 3).unwrap();
}

#[test]
fn quaternion_tree_has_no_fixed_stick() {
    let t = common::forest("quaternion.json");
    let unit = GForest::trivial(FiniteGroup::quaternion(), Tree::eta("u"));
    let rep = Representable { forest: t, boundary: false };
    assert!(upsilon_star(&rep, &unit).unwrap().is_empty());
}

#[test]
fn nerve_is_strictly_segal_and_perturbed_is_not() {
    let tr = Truncation::new(FiniteGroup::cyclic(2), Bounds::new(3, 2));
    assert!(strict_segal_check(&Nerve::new(Terminal).unwrap(), &tr).unwrap().passed);
    let plain = Truncation::non_equivariant(Bounds::new(3, 2));
    let bad = strict_segal_check(&Perturbed::standard(), &plain).unwrap();
    assert!(!bad.passed && bad.witness.is_some());
}

#[test]
fn quaternion_pullback_square() {
    let t = common::forest("quaternion.json");
    let cut = t.orbit(t.edge("c").unwrap());
    let g = t.group();
    for k in g.subgroups() {
        let iso = grafting_iso(&Constant::cosets(g, &k), &t, &cut).unwrap();
        assert!(iso.bijective, "{iso:?}");
    }
    let leaf = t.orbit(t.edge("a").unwrap());
    assert!(grafting_iso(&Constant::point(), &t, &leaf).is_err());
}

#[test]
fn empty_presheaf_has_no_points() {
    let f = common::forest("z2_horn.json");
    assert!(upsilon_star(&Empty, &f).unwrap().is_empty());
}

fn presheaves() -> Vec<Box<dyn Presheaf>> {
    let z2 = FiniteGroup::cyclic(2);
    vec![
        Box::new(Nerve::new(Terminal).unwrap()),
        Box::new(Nerve::new(Parity).unwrap()),
        Box::new(Constant::point()),
        Box::new(Constant::cosets(&z2, &z2.trivial_subgroup())),
        Box::new(Representable { forest: common::forest("z2_horn.json"), boundary: false }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn upsilon_counts_equivariant_maps(i in 0..common::sweep().len(), which in 0usize..5) {
        let f = &common::sweep()[i];
        let x = &presheaves()[which];
        if x.group().is_some_and(|g| g != f.group()) {
            return Ok(());
        }
        let direct = upsilon_star(x.as_ref(), f).unwrap().len();
        let maps = equivariant_maps(x.as_ref(), f, &f.full_components()).unwrap().len();
        prop_assert_eq!(direct, maps);
    }
}
