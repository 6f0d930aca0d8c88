use std::collections::BTreeSet;

use eqdendro::group::FiniteGroup;
use eqdendro::reedy::{
    arrow_category, check_admissible, delta, generator_object, latching, latching_plus, matching, skeleton,
    validate_gen_reedy, CategoryFile, EquivariantTreeCategory, FamilyCollection, GenReedyCat, SetFunctor,
};
use eqdendro::truncation::Bounds;

#[test]
fn latching_two_ways() {
    for n in 1..=3 {
        for r in [delta(n), delta(n).opposite()] {
            for obj in 0..r.cat.n_objects() {
                for x in [SetFunctor::representable(&r.cat, 0), SetFunctor::representable(&r.cat, n), SetFunctor::constant(&r.cat, 2)] {
                    x.check(&r.cat).unwrap();
                    let sk = latching(&r, &x, obj);
                    assert_eq!(sk.len(), latching_plus(&r, &x, obj), "n = {n}, object {obj}");
                }
            }
        }
    }
}

#[test]
fn constant_simplicial_set_is_degenerate_above_zero() {
    let r = delta(3).opposite();
    let x = SetFunctor::constant(&r.cat, 1);
    for obj in 0..4 {
        let l = latching(&r, &x, obj);
        assert_eq!(l.len(), usize::from(obj > 0));
    }
    assert_eq!(skeleton(&r, &x, Some(0)).functor.sizes, vec![1; 4]);
}

#[test]
fn matching_without_degeneracies_is_a_point() {
    let r = arrow_category(&FiniteGroup::cyclic(2), false);
    for obj in 0..r.cat.n_objects() {
        let x = SetFunctor::representable(&r.cat, obj);
        for o in 0..r.cat.n_objects() {
            let (elems, _) = matching(&r, &x, o);
            assert_eq!(elems.len(), 1);
        }
    }
}

#[test]
fn simplex_boundaries() {
    for n in 1..=2 {
        let r = delta(n).opposite();
        let gen = generator_object(&r, n, &BTreeSet::from([r.cat.id(n)]));
        assert!(gen.skeleton_injective);
        // the top simplex is the only missing nondegenerate one
        assert_eq!(gen.target.sizes[n] - gen.source.sizes[n], 1);
    }
}

#[test]
fn factorizations_are_unique_in_delta() {
    let r = delta(3);
    for f in 0..r.cat.n_arrows() {
        assert_eq!(r.factorizations(f).len(), 1);
    }
}

#[test]
fn category_file_roundtrip() {
    let r = delta(2);
    let file: CategoryFile = serde_json::from_str(&serde_json::to_string(&r.to_file()).unwrap()).unwrap();
    let back = GenReedyCat::from_file(&file).unwrap();
    assert_eq!(back.cat.n_arrows(), r.cat.n_arrows());
    assert!(validate_gen_reedy(&back).is_ok());
}

#[test]
fn broken_degree_is_caught() {
    let mut r = delta(2);
    r.degree.swap(0, 2);
    assert!(validate_gen_reedy(&r).is_err());
}

#[test]
fn backwards_arrow_needs_family_containment() {
    let r = arrow_category(&FiniteGroup::cyclic(2), true);
    let mut fam = FamilyCollection::all(&r.cat);
    assert!(check_admissible(&r, &fam).passed);
    fam.families[0] = FamilyCollection::trivial(&r.cat).families[0].clone();
    let rep = check_admissible(&r, &fam);
    assert!(!rep.passed && rep.witness.is_some());
}

#[test]
fn equivariant_tree_category() {
    let e = EquivariantTreeCategory::new(&FiniteGroup::cyclic(2), Bounds::new(2, 2));
    let r = e.reedy();
    validate_gen_reedy(r).unwrap();
    let graphs = e.product.graph_families();
    assert!(check_admissible(r, &graphs).passed);
    for (u, fam) in graphs.families.iter().enumerate() {
        for gamma in fam {
            assert!(e.compare(u, gamma).unwrap().holds(), "shape {u}");
        }
    }
    // all subgroups is not admissible once non-graph subgroups appear
    let all = FamilyCollection::all(&r.cat);
    assert!(all.families.iter().zip(&graphs.families).any(|(a, g)| a.len() > g.len()));
}
