//! Acceptance run: one PASS/FAIL line per criterion, each under its time
//! budget.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use eqdendro::anodyne::{self, CertifyKind, HornVariant};
use eqdendro::broadposet::Edge;
use eqdendro::complexes;
use eqdendro::equivariance::GForest;
use eqdendro::genuine::{self, Constant, FreeOnTree, Nerve, Parity, Perturbed, Presheaf, Terminal, TwoColor};
use eqdendro::group::FiniteGroup;
use eqdendro::indexing::{self, SieveSpec};
use eqdendro::reedy::{self, EquivariantTreeCategory, FamilyCollection};
use eqdendro::replay;
use eqdendro::subtree::Subtree;
use eqdendro::tensor::{TensorMode, TensorProduct};
use eqdendro::truncation::{g_isomorphic, Bounds, Truncation};

use common::{brute_horn, brute_orbital_horn, brute_segal_core, forest, names, stable_inner_sets, sweep, tree};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn crit1() -> Outcome {
    let t = tree("first_tree.json");
    let gens = t.generators();
    let composites: BTreeSet<(BTreeSet<String>, String)> = t
        .broad_closure()
        .into_iter()
        .filter(|r| !gens.contains(r) && !(r.sources.len() == 1 && r.sources[0] == r.target))
        .map(|r| (r.sources.iter().map(|&e| t.name(e).to_string()).collect(), t.name(r.target).to_string()))
        .collect();
    let expected: BTreeSet<(BTreeSet<String>, String)> = [
        ("abef", "r"),
        ("aef", "r"),
        ("dec", "r"),
        ("abec", "r"),
        ("aec", "r"),
        ("a", "d"),
    ]
    .iter()
    .map(|(s, t)| (s.chars().map(String::from).collect(), t.to_string()))
    .collect();
    ensure(composites == expected, || format!("composites {composites:?}"))?;
    Ok(format!("{} composite relations", composites.len()))
}

fn crit2() -> Outcome {
    let f = forest("z2_horn.json");
    let e = anodyne::resolve_edges(&f, &["Gb".to_string()]).map_err(|e| e.to_string())?;
    let all = complexes::representable(&f);
    let horn = complexes::horn(&f, &e).map_err(|e| e.to_string())?;
    let orbital = complexes::orbital_horn(&f, &e).map_err(|e| e.to_string())?;
    let missing = |c: &complexes::Complex| -> Vec<Subtree> { all.cells().difference(c.cells()).cloned().collect() };
    let (mh, mo) = (missing(&horn), missing(&orbital));
    ensure(mh.len() == 4 && mo.len() == 8, || format!("complements {} and {}", mh.len(), mo.len()))?;
    let label: BTreeMap<BTreeSet<String>, &str> = [
        ("T", &["d", "c", "b", "-b", "a", "-a"][..]),
        ("Tb", &["d", "c", "-b", "-a", "a"]),
        ("Tbb", &["d", "c", "b", "a", "-a"]),
        ("Paa", &["d", "c", "-b", "b", "a"]),
        ("Pa", &["d", "c", "-b", "-a", "b"]),
        ("TGb", &["d", "c", "a", "-a"]),
        ("Pab", &["d", "c", "-b", "a"]),
        ("Pabb", &["d", "c", "-a", "b"]),
    ]
    .into_iter()
    .map(|(n, es)| (set(es), n))
    .collect();
    let named = |v: &Subtree| label.get(&names(&f, v)).copied().ok_or_else(|| format!("unexpected face {:?}", names(&f, v)));
    let boxed: BTreeSet<&str> = mh.iter().map(named).collect::<Result<_, _>>()?;
    ensure(boxed == ["T", "Tb", "Tbb", "TGb"].into_iter().collect(), || format!("horn complement {boxed:?}"))?;
    let mut covers = BTreeSet::new();
    for a in &mo {
        for b in &mo {
            let below = |x: &Subtree, y: &Subtree| x != y && y.contains_face(x);
            if below(a, b) && !mo.iter().any(|c| below(a, c) && below(c, b)) {
                covers.insert((named(a)?, named(b)?));
            }
        }
    }
    let expected: BTreeSet<(&str, &str)> = [
        ("Paa", "T"),
        ("Tbb", "T"),
        ("Pa", "T"),
        ("Tb", "T"),
        ("Pab", "Paa"),
        ("Pab", "Tb"),
        ("Pabb", "Tbb"),
        ("Pabb", "Pa"),
        ("TGb", "Tbb"),
        ("TGb", "Tb"),
    ]
    .into_iter()
    .collect();
    ensure(covers == expected, || format!("Hasse edges {covers:?}"))?;
    Ok(format!("complements 4 and 8, {} Hasse edges", covers.len()))
}

fn crit3() -> Outcome {
    let f = forest("z2_horn.json");
    let e = anodyne::resolve_edges(&f, &["Gb".to_string()]).map_err(|e| e.to_string())?;
    let cert = anodyne::certify(&f, &CertifyKind::OrbitalHornToFull { e: e.clone() }, false).map_err(|e| e.to_string())?;
    ensure(cert.steps.len() == 2, || format!("{} steps", cert.steps.len()))?;
    let amb = cert.ambient().clone();
    let edge_names = |s: &Subtree| s.edges().iter().map(|&x| amb.name(x).to_string()).collect::<BTreeSet<_>>();
    let (first, second) = (&cert.steps[0], &cert.steps[1]);
    // S misses -a, its translate misses a
    let s_faces = [set(&["d", "c", "-b", "b", "a"]), set(&["d", "c", "-b", "-a", "b"])];
    ensure(s_faces.contains(&edge_names(&first.tree)), || format!("first step on {:?}", edge_names(&first.tree)))?;
    ensure(first.xi.len() == 1 && first.isotropy.order() == 1, || "first step is not G·Λ^b".into())?;
    ensure(second.tree == f.full_component(0) && second.xi == e, || "second step is not Λ^Gb[T]".into())?;
    let cells = replay::replay_file(&cert.to_file()).map_err(|e| e.to_string())?;
    Ok(format!("2 steps, replay accepted {cells} cells"))
}

fn crit4() -> Outcome {
    let s = forest("percolation_s.json");
    let t = forest("percolation_t.json");
    let tp = TensorProduct::new(&s, &t).map_err(|e| e.to_string())?;
    let orbit = t.orbit(t.edge("xi").map_err(|e| e.to_string())?);
    let rep = tp.verify_characteristic(&orbit, TensorMode::Standard, true).map_err(|e| e.to_string())?;
    let perc = &rep.percolation;
    ensure(perc.trees.len() == 5, || format!("{} maximal subtrees", perc.trees.len()))?;
    let amb = tp.ambient().clone();
    let leaves = ["a_1", "a_-1", "-a_1", "-a_-1"];
    let with_leaves = |v: &[&str]| -> BTreeSet<String> { v.iter().chain(leaves.iter()).map(|s| s.to_string()).collect() };
    let expected = [
        ("U1", with_leaves(&["r_0", "r_1", "r_-1", "xi_1", "-xi_1", "xi_-1", "-xi_-1"])),
        ("U2", with_leaves(&["r_0", "xi_0", "-xi_0", "xi_1", "xi_-1", "-xi_1", "-xi_-1"])),
        ("U3", with_leaves(&["r_0", "xi_0", "-xi_0", "a_0", "-xi_1", "-xi_-1"])),
        ("-U3", with_leaves(&["r_0", "xi_0", "-xi_0", "-a_0", "xi_1", "xi_-1"])),
        ("U4", with_leaves(&["r_0", "xi_0", "-xi_0", "a_0", "-a_0"])),
    ];
    let label: Vec<&str> = perc
        .trees
        .iter()
        .map(|u| {
            let es: BTreeSet<String> = u.edges().iter().map(|&e| amb.name(e).to_string()).collect();
            expected.iter().find(|(_, x)| *x == es).map(|(n, _)| *n).ok_or_else(|| format!("unexpected subtree {es:?}"))
        })
        .collect::<Result<_, _>>()?;
    let idx = |n: &str| label.iter().position(|&l| l == n).unwrap();
    let swap = t.group().index_of("-1").ok_or("no element -1")?;
    let fixed: Vec<&str> = (0..5).filter(|&i| perc.poset.act(swap, i) == i).map(|i| label[i]).collect();
    ensure(fixed.len() == 3 && perc.poset.act(swap, idx("U3")) == idx("-U3"), || format!("fixed {fixed:?}"))?;
    let order = [("U1", "U2"), ("U2", "U3"), ("U2", "-U3"), ("U3", "U4"), ("-U3", "U4"), ("U1", "U3"), ("U1", "-U3"), ("U1", "U4"), ("U2", "U4")];
    for i in 0..5 {
        for j in 0..5 {
            let want = order.contains(&(label[i], label[j]));
            ensure(perc.poset.lt(i, j) == want, || format!("{} < {} should be {want}", label[i], label[j]))?;
        }
    }
    let xi_expected: BTreeMap<&str, BTreeSet<String>> = [
        ("U1", set(&["xi_1", "-xi_1", "xi_-1", "-xi_-1"])),
        ("U2", set(&["xi_1", "xi_-1", "-xi_1", "-xi_-1"])),
        ("U3", set(&["xi_0", "-xi_1", "-xi_-1"])),
        ("-U3", set(&["xi_1", "xi_-1", "-xi_0"])),
        ("U4", set(&["xi_0", "-xi_0"])),
    ]
    .into_iter()
    .collect();
    for (i, x) in rep.xi.iter().enumerate() {
        let got: BTreeSet<String> = anodyne::edge_names(&amb, x).into_iter().collect();
        ensure(got == xi_expected[label[i]], || format!("Ξ of {} is {got:?}", label[i]))?;
    }
    ensure(rep.report.passed(), || format!("conditions {:?}", rep.report.conditions))?;
    let cert = rep.certificate.as_ref().ok_or("no certificate")?;
    let cells = replay::replay_file(&cert.to_file()).map_err(|e| e.to_string())?;
    Ok(format!("5 maximal, 3 fixed, order and Ξ match, {} steps replayed ({cells} cells)", cert.steps.len()))
}

fn crit5() -> Outcome {
    let t = forest("quaternion.json");
    let r1 = forest("quaternion_r1.json");
    let r2 = forest("quaternion_r2.json");
    let orbits = t.edge_orbits().len();
    let vertices = t.quotient().degree();
    ensure(orbits == 4 && vertices == 2, || format!("{orbits} orbits, {vertices} vertices"))?;
    let grafted = r1.graft(&r2, None).map_err(|e| e.to_string())?;
    ensure(g_isomorphic(&grafted, &t), || "graft(R1, R2) is not T".into())?;
    let c = t.edge("c").map_err(|e| e.to_string())?;
    let cut = t.orbit(c);
    let g = t.group();
    let mut sizes = Vec::new();
    let j = g.index_of("j").ok_or("no element j")?;
    for k in [g.whole(), g.generate(&[j]), t.isotropy(c), g.trivial_subgroup()] {
        let iso = genuine::grafting_iso(&Constant::cosets(g, &k), &t, &cut).map_err(|e| e.to_string())?;
        ensure(iso.bijective, || format!("pullback comparison fails for G/K with |K| = {}: {iso:?}", k.order()))?;
        sizes.push(format!("{}={}", g.order() / k.order(), iso.whole));
    }
    Ok(format!("4 orbits, 2 vertices, graft ≅ T, Z(T) sizes by |G/K|: {}", sizes.join(" ")))
}

fn certify_all(f: &GForest) -> Result<usize, String> {
    let mut kinds = vec![CertifyKind::SegalCore];
    for e in stable_inner_sets(f) {
        kinds.push(CertifyKind::OrbitalHornToFull { e: e.clone() });
        for sub in stable_inner_sets(f).into_iter().filter(|s| s.is_subset(&e)) {
            kinds.push(CertifyKind::HornToHorn { e: e.clone(), f: sub.clone(), variant: HornVariant::PowerSet });
            if f.group().is_trivial() {
                kinds.push(CertifyKind::HornToHorn { e: e.clone(), f: sub, variant: HornVariant::Orbits });
            }
        }
    }
    let desc = || genuine::describe(f);
    for kind in &kinds {
        let cert = anodyne::certify(f, kind, false).map_err(|e| format!("{}: {kind:?}: {e}", desc()))?;
        replay::replay_file(&cert.to_file()).map_err(|e| format!("{}: {kind:?}: replay {e}", desc()))?;
        let reduced = anodyne::generating_reduction(&cert).map_err(|e| format!("{}: {kind:?}: reduce {e}", desc()))?;
        ensure(reduced.steps.iter().all(|s| s.is_single_orbit(reduced.ambient())), || format!("{}: {kind:?}: multi-orbit step", desc()))?;
        replay::replay_file(&reduced.to_file()).map_err(|e| format!("{}: {kind:?}: reduced replay {e}", desc()))?;
    }
    Ok(kinds.len())
}

fn crit6() -> Outcome {
    let trees = sweep();
    let counts: Vec<usize> = trees.par_iter().map(certify_all).collect::<Result<_, _>>()?;
    Ok(format!("{} G-trees, {} certificates built, replayed and reduced", trees.len(), counts.iter().sum::<usize>()))
}

fn crit7() -> Outcome {
    let trivial = Truncation::new(FiniteGroup::trivial(), Bounds::new(3, 3));
    let z2 = Truncation::new(FiniteGroup::cyclic(2), Bounds::new(3, 3));
    let free_z2 = FreeOnTree::equivariant(forest("z2_horn.json")).map_err(|e| e.to_string())?;
    let err = |e: eqdendro::Error| e.to_string();
    let nerves: Vec<(Box<dyn Presheaf>, &Truncation)> = vec![
        (Box::new(Nerve::new(Terminal).map_err(err)?), &trivial),
        (Box::new(Nerve::new(FreeOnTree::new(tree("first_tree.json"))).map_err(err)?), &trivial),
        (Box::new(Nerve::new(TwoColor).map_err(err)?), &trivial),
        (Box::new(Nerve::new(Parity).map_err(err)?), &trivial),
        (Box::new(Nerve::new(free_z2).map_err(err)?), &z2),
    ];
    for (x, tr) in &nerves {
        let s = genuine::lifting_equivalence_suite(x.as_ref(), tr).map_err(err)?;
        ensure(s.all_equal() && s.all_true(), || format!("{}: {s:?}", x.name()))?;
    }
    let s = genuine::lifting_equivalence_suite(&Perturbed::standard(), &trivial).map_err(err)?;
    ensure(s.all_equal() && !s.segal_cores, || format!("perturbed: {s:?}"))?;
    Ok(format!("{} nerves all true, perturbed all false", nerves.len()))
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn crit8() -> Outcome {
    for n in 1..=3 {
        let d = reedy::delta(n);
        reedy::validate_gen_reedy(&d).map_err(|w| format!("Δ≤{n}: {w:?}"))?;
        let r = d.opposite();
        reedy::validate_gen_reedy(&r).map_err(|w| format!("Δ≤{n} op: {w:?}"))?;
        ensure(reedy::check_admissible(&r, &FamilyCollection::all(&r.cat)).passed, || format!("Δ≤{n} families"))?;
        if n <= 2 {
            let gen = reedy::generator_object(&r, n, &BTreeSet::from([r.cat.id(n)]));
            // monotone [k] → [n], and the non-surjective ones
            let simplices: Vec<usize> = (0..=n).map(|k| binomial(n + k + 1, k + 1)).collect();
            let boundary: Vec<usize> = (0..=n).map(|k| simplices[k] - binomial(k, n)).collect();
            ensure(gen.target.sizes == simplices && gen.source.sizes == boundary, || {
                format!("n = {n}: {:?} / {:?}", gen.source.sizes, gen.target.sizes)
            })?;
        }
    }
    let z2 = FiniteGroup::cyclic(2);
    let omega = EquivariantTreeCategory::new(&z2, Bounds::new(2, 2));
    let r = omega.reedy();
    reedy::validate_gen_reedy(r).map_err(|w| format!("Z/2 × Ωop: {w:?}"))?;
    let graphs = omega.product.graph_families();
    let adm = reedy::check_admissible(r, &graphs);
    ensure(adm.passed, || format!("graph families: {:?}", adm.witness))?;
    let c2 = (0..omega.trees.trees.len())
        .find(|&u| {
            let t = &omega.trees.trees[u];
            t.degree() == 1 && t.leaves().len() == 2
        })
        .ok_or("no C2 in the truncation")?;
    let mut compared = 0;
    for gamma in &graphs.families[c2] {
        let cmp = omega.compare(c2, gamma).map_err(|e| e.to_string())?;
        ensure(cmp.holds(), || format!("C2 with graph {gamma:?}: {cmp:?}"))?;
        compared += 1;
    }
    let back = reedy::arrow_category(&z2, true);
    reedy::validate_gen_reedy(&back).map_err(|w| format!("0 ← 1: {w:?}"))?;
    let mut fam = FamilyCollection::all(&back.cat);
    fam.families[0] = FamilyCollection::trivial(&back.cat).families[0].clone();
    let rep = reedy::check_admissible(&back, &fam);
    ensure(!rep.passed && rep.witness.is_some(), || "0 ← 1 counterexample was accepted".into())?;
    Ok(format!(
        "Δ and Z/2 × Ωop ({} objects, {} arrows) pass, {compared} C2 generators match ∂, 0 ← 1 rejected: {}",
        r.cat.n_objects(),
        r.cat.n_arrows(),
        rep.witness.unwrap()
    ))
}

fn crit9() -> Outcome {
    let z2 = FiniteGroup::cyclic(2);
    let tr = Truncation::new(z2.clone(), Bounds::new(2, 3));
    let full = SieveSpec::full(tr.clone());
    let mut corollas = Vec::new();
    for h in z2.subgroup_classes() {
        for k in 0..=3 {
            let id: Vec<Edge> = (0..=k).collect();
            corollas.push(eqdendro::equivariance::induce(&z2, &h, &eqdendro::broadposet::Tree::corolla(k), &vec![id; h.order()]).map_err(|e| e.to_string())?);
        }
    }
    let trivial = SieveSpec::corolla_closure(tr, &corollas);
    for (name, s) in [("full", &full), ("trivial-graph", &trivial)] {
        let rep = indexing::validate_weak_indexing(s, true);
        ensure(rep.passed, || format!("{name}: {:?}", rep.witnesses))?;
        let t = indexing::translate(s).map_err(|e| e.to_string())?;
        ensure(t.admissible.passed && t.resynthesized, || format!("{name}: translation {t:?}"))?;
    }
    let unit = full.unit();
    let cut = full.clone().without(&unit);
    let rep = indexing::validate_weak_indexing(&cut, false);
    ensure(!rep.passed && !rep.unit && rep.witnesses.iter().any(|w| w.axiom == "unit"), || format!("{rep:?}"))?;
    Ok(format!("full {}/{} and trivial-graph {}/{} valid and admissible, unit removal rejected", full.member_count(), full.trees.len(), trivial.member_count(), trivial.trees.len()))
}

fn crit10() -> Outcome {
    let trees = sweep();
    let checked: Vec<usize> = trees
        .par_iter()
        .map(|f| {
            let d = genuine::describe(f);
            let core = complexes::segal_core(f);
            ensure(core.cells() == &brute_segal_core(f), || format!("{d}: Segal core"))?;
            let mut n = 1;
            for e in stable_inner_sets(f) {
                let h = complexes::horn(f, &e).map_err(|x| x.to_string())?;
                ensure(h.cells() == &brute_horn(f, &e), || format!("{d}: horn {e:?}"))?;
                let o = complexes::orbital_horn(f, &e).map_err(|x| x.to_string())?;
                ensure(o.cells() == &brute_orbital_horn(f, &e), || format!("{d}: orbital horn {e:?}"))?;
                n += 2;
            }
            Ok(n)
        })
        .collect::<Result<_, String>>()?;
    Ok(format!("{} G-trees, {} complexes agree with the generator unions", trees.len(), checked.iter().sum::<usize>()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 10] = [
        ("1 broad closure", crit1, Duration::from_secs(1)),
        ("2 Z/2 horn complements", crit2, Duration::from_secs(1)),
        ("3 orbital-horn filtration", crit3, Duration::from_secs(1)),
        ("4 percolation", crit4, Duration::from_secs(10)),
        ("5 quaternion suite", crit5, Duration::from_secs(5)),
        ("6 anodyne sweep", crit6, Duration::from_secs(300)),
        ("7 strict lifting", crit7, Duration::from_secs(120)),
        ("8 Reedy categories", crit8, Duration::from_secs(30)),
        ("9 indexing", crit9, Duration::from_secs(10)),
        ("10 oracle equivalence", crit10, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {name}: {} ({detail}) [{:.2}s / {}s]",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
