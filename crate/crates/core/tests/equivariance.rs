mod common;

use proptest::prelude::*;

use eqdendro::equivariance::{induce, GForest};
use eqdendro::group::FiniteGroup;
use eqdendro::truncation::g_isomorphic;

#[test]
fn quaternion_orbital_representation() {
    let t = common::forest("quaternion.json");
    assert_eq!(t.group().order(), 8);
    assert_eq!(t.edge_orbits().len(), 4);
    assert_eq!(t.quotient().degree(), 2);
    assert!(t.is_transitive());
}

#[test]
fn quaternion_graft() {
    let t = common::forest("quaternion.json");
    let g = common::forest("quaternion_r1.json").graft(&common::forest("quaternion_r2.json"), None).unwrap();
    assert!(g_isomorphic(&g, &t));
}

#[test]
fn induced_from_isotropy_recovers_component() {
    let t = common::forest("quaternion.json");
    let h = t.component_stabilizer(0);
    let comp = t.component(0).clone();
    let action: Vec<Vec<usize>> = h.elements().iter().map(|&x| (0..comp.n_edges()).map(|e| t.act(x, e)).collect()).collect();
    let back = induce(t.group(), &h, &comp, &action).unwrap();
    assert!(g_isomorphic(&back, &t));
}

#[test]
fn non_action_is_rejected() {
    let t = common::tree("first_tree.json");
    let id: Vec<usize> = (0..t.n_edges()).collect();
    let mut bad = id.clone();
    bad.swap(0, 1);
    assert!(GForest::new(FiniteGroup::cyclic(2), vec![t], vec![id, bad]).is_err());
}

#[test]
fn z2_horn_faces() {
    let f = common::forest("z2_horn.json");
    let faces = f.faces();
    // every face's translate is a face
    for u in &faces {
        for g in f.group().elements() {
            assert!(faces.contains(&f.act_subtree(g, u)));
        }
    }
}

proptest! {
    #[test]
    fn orbit_stabilizer(i in 0..common::sweep().len()) {
        let f = &common::sweep()[i];
        let n = f.group().order();
        for e in 0..f.n_edges() {
            prop_assert_eq!(f.orbit(e).len() * f.isotropy(e).order(), n);
        }
        let covered: usize = f.edge_orbits().iter().map(|o| o.len()).sum();
        prop_assert_eq!(covered, f.n_edges());
    }

    #[test]
    fn quotient_has_one_edge_per_orbit(i in 0..common::sweep().len()) {
        let f = &common::sweep()[i];
        prop_assert_eq!(f.quotient().n_edges(), f.edge_orbits().len());
        prop_assert!(g_isomorphic(f, f));
    }

    #[test]
    fn minimal_orbital_face_is_stable(i in 0..common::sweep().len(), pick in any::<prop::sample::Index>()) {
        let f = &common::sweep()[i];
        let faces = f.faces();
        let u = &faces[pick.index(faces.len())];
        let family = f.minimal_orbital_face(u);
        prop_assert!(family.0.iter().any(|v| v.contains_face(u)));
        for g in f.group().elements() {
            for v in &family.0 {
                let moved = f.act_subtree(g, v);
                prop_assert!(family.0.contains(&moved));
            }
        }
    }
}
