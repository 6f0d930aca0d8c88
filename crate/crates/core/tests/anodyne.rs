mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use eqdendro::anodyne::{
    certify, generating_reduction, orbital_horn_collection, CertifyKind, GPoset, HornVariant,
};
use eqdendro::group::FiniteGroup;
use eqdendro::replay::replay_file;
use eqdendro::Error;

use common::{plain, stable_inner_sets};

fn z2_orbital() -> (eqdendro::equivariance::GForest, BTreeSet<usize>) {
    let f = common::forest("z2_horn.json");
    let e = f.orbit(f.edge("b").unwrap());
    (f, e)
}

#[test]
fn z2_orbital_horn_certificate() {
    let (f, e) = z2_orbital();
    let cert = certify(&f, &CertifyKind::OrbitalHornToFull { e }, false).unwrap();
    assert_eq!(cert.steps.len(), 2);
    assert_eq!(replay_file(&cert.to_file()).unwrap(), 36);
    let reduced = generating_reduction(&cert).unwrap();
    assert!(reduced.steps.iter().all(|s| s.is_single_orbit(reduced.ambient())));
}

#[test]
fn tampered_certificates_are_rejected() {
    let (f, e) = z2_orbital();
    let file = certify(&f, &CertifyKind::OrbitalHornToFull { e }, false).unwrap().to_file();

    let mut swapped = file.clone();
    swapped.steps.swap(0, 1);
    assert!(matches!(replay_file(&swapped), Err(Error::NotAPushout { .. })));

    let mut dropped = file.clone();
    dropped.steps.remove(0);
    assert!(replay_file(&dropped).is_err());

    let mut leaf = file.clone();
    leaf.steps[1].xi = vec!["a".into()];
    assert!(matches!(replay_file(&leaf), Err(Error::NotAPushout { .. })));

    let mut emb = file;
    emb.steps[0].embedding.pop();
    assert!(matches!(replay_file(&emb), Err(Error::NotAPushout { .. })));
}

#[test]
fn broken_collection_fails_verification() {
    let (f, e) = z2_orbital();
    let mut c = orbital_horn_collection(&f, &e).unwrap();
    assert!(c.verify().unwrap().passed());
    c.xi[0] = BTreeSet::new();
    assert!(!c.verify().unwrap().passed());
}

#[test]
fn cyclic_relations_are_not_a_poset() {
    let g = FiniteGroup::trivial();
    let r = GPoset::from_relations(&g, vec![vec![0, 1]], 2, &[(0, 1), (1, 0)]);
    assert!(r.is_err());
    let ok = GPoset::from_relations(&g, vec![vec![0, 1, 2]], 3, &[(0, 1), (1, 2)]).unwrap();
    assert!(ok.lt(0, 2) && !ok.lt(2, 0));
}

#[test]
fn f_must_lie_in_e() {
    let (f, e) = z2_orbital();
    let c = f.orbit(f.edge("c").unwrap());
    let kind = CertifyKind::HornToHorn { e, f: c, variant: HornVariant::PowerSet };
    assert!(certify(&f, &kind, false).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn plain_certificates_replay(code in prop::collection::vec(0u8..5, 1..10), pick in any::<prop::sample::Index>()) {
        let f = plain(common::tree_from_code(&code, 8));
        let core = certify(&f, &CertifyKind::SegalCore, true).unwrap();
        prop_assert!(replay_file(&core.to_file()).is_ok());
        let sets = stable_inner_sets(&f);
        if !sets.is_empty() {
            let e = sets[pick.index(sets.len())].clone();
            let sub: BTreeSet<usize> = e.iter().take(1).copied().collect();
            for variant in [HornVariant::PowerSet, HornVariant::Orbits] {
                let kind = CertifyKind::HornToHorn { e: e.clone(), f: sub.clone(), variant };
                let cert = certify(&f, &kind, true).unwrap();
                prop_assert!(cert.steps.iter().all(|s| s.is_single_orbit(cert.ambient())));
                prop_assert!(replay_file(&cert.to_file()).is_ok());
            }
            let cert = certify(&f, &CertifyKind::OrbitalHornToFull { e }, false).unwrap();
            let n = replay_file(&cert.to_file()).unwrap();
            prop_assert_eq!(n, f.faces().len());
        }
    }

    #[test]
    fn orbital_to_orbital_replays(i in 0..common::sweep().len()) {
        let f = &common::sweep()[i];
        for e in stable_inner_sets(f) {
            for sub in stable_inner_sets(f).into_iter().filter(|s| s.is_subset(&e)) {
                let cert = certify(f, &CertifyKind::OrbitalToOrbital { e: e.clone(), f: sub }, false).unwrap();
                prop_assert!(replay_file(&cert.to_file()).is_ok());
            }
        }
    }
}
