use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use eqdendro::anodyne::{self, CertificateFile, CertifyKind, HornVariant};
use eqdendro::broadposet::{validate_tree_noted, BroadRelation, RawTree, Tree};
use eqdendro::complexes::{self, Ambient, CellJson, Complex};
use eqdendro::equivariance::{named_group, GForest, GForestFile};
use eqdendro::genuine::{self, Nerve, Presheaf, TableOperad};
use eqdendro::group::FiniteGroup;
use eqdendro::indexing::{self, SieveFile, SieveSpec};
use eqdendro::reedy::{self, CategoryFile, EquivariantTreeCategory, FamilyCollection, GenReedyCat};
use eqdendro::subtree::Subtree;
use eqdendro::tensor::{TensorMode, TensorProduct};
use eqdendro::treemaps::TreeMap;
use eqdendro::truncation::{Bounds, Truncation};
use eqdendro::{dot, replay, Error};

#[derive(Parser)]
#[command(name = "eqdendro", version, about = "Equivariant dendroidal combinatorics")]
struct Cli {
    /// Worker threads for parallel checks.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Render a plain-text summary instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Tree or G-forest file.
    file: PathBuf,
    /// Group for plain tree files (trivial action); `trivial`, `Z<n>`, `Q8`.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Args, Clone)]
struct EdgeArgs {
    /// Edge names; `G<name>` stands for the orbit of `<name>`.
    #[arg(long, value_delimiter = ',', required = true)]
    edges: Vec<String>,
}

#[derive(Args, Clone)]
struct PresheafArgs {
    /// Built-in name (terminal, parity, two-color, point, perturbed),
    /// `free:<tree file>`, or an operad file.
    #[arg(long)]
    operad: String,
    #[arg(long, default_value = "trivial")]
    group: String,
    #[arg(long, default_value = "3,3")]
    truncation: Bounds,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    SegalCore,
    OrbitalHorn,
    HornToHorn,
    OrbitalToOrbital,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    PowerSet,
    Orbits,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Standard,
    Reversed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Families {
    Trivial,
    All,
    Graph,
}

#[derive(Clone, Copy, ValueEnum)]
enum DotKind {
    Tree,
    Faces,
    Percolation,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a tree or G-forest and report its broad closure.
    Validate(Input),
    /// List the faces of a G-forest.
    Faces(Input),
    /// The boundary subcomplex.
    Boundary {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        complement: bool,
    },
    /// The inner horn for a G-stable edge set.
    Horn {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        edges: EdgeArgs,
        /// List the faces missing from the horn instead.
        #[arg(long)]
        complement: bool,
    },
    /// The orbital horn for a G-stable edge set.
    OrbitalHorn {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        edges: EdgeArgs,
        #[arg(long)]
        complement: bool,
    },
    /// The Segal core.
    SegalCore {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        complement: bool,
    },
    /// Degeneracy-inner-outer factorization of a tree map.
    Factorize {
        source: PathBuf,
        target: PathBuf,
        /// Edge assignments `a=b,...`.
        #[arg(long, value_delimiter = ',', required = true)]
        map: Vec<String>,
    },
    /// Minimal orbital face generated by a face.
    Gu {
        #[command(flatten)]
        input: Input,
        /// The face as JSON `{"root": .., "vertices": {..}}`.
        #[arg(long)]
        face: String,
    },
    /// The orbital representation.
    Quotient(Input),
    /// Graft an upper G-forest onto the leaves of a lower one.
    Graft {
        lower: PathBuf,
        upper: PathBuf,
        /// Leaf-to-root matching `leaf=root,...`; by name if omitted.
        #[arg(long, value_delimiter = ',')]
        matching: Vec<String>,
    },
    /// Maximal subtrees of a tensor product and their order.
    TensorMax {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value = "standard")]
        mode: Mode,
        /// Verify the characteristic collection for every inner edge orbit
        /// of the right factor.
        #[arg(long)]
        verify: bool,
    },
    /// Build a horn-filtration certificate.
    Certify {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_delimiter = ',')]
        edges: Vec<String>,
        /// The smaller edge set for horn-to-horn inclusions.
        #[arg(long, value_delimiter = ',')]
        sub: Vec<String>,
        #[arg(long, value_enum, default_value = "power-set")]
        variant: Variant,
        /// Reduce to single-orbit horn attachments.
        #[arg(long)]
        reduce: bool,
        /// Write the certificate here instead of embedding it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a certificate with the independent checker.
    Replay { certificate: PathBuf },
    /// Strict Segal lifting for a presheaf over a truncation.
    GenuineCheck(PresheafArgs),
    /// The four strict lifting classes compared.
    LiftingSuite(PresheafArgs),
    /// Validate a generalized Reedy category and a family collection.
    ReedyCheck {
        /// `delta:<n>`, `omega`, `arrow`, `arrow-back`, or a category file.
        category: String,
        #[arg(long, default_value = "trivial")]
        group: String,
        #[arg(long, default_value = "2,2")]
        truncation: Bounds,
        #[arg(long, value_enum, default_value = "trivial")]
        families: Families,
    },
    /// Validate a weak indexing system.
    IndexingValidate {
        /// A sieve file, or `full`, `trivial-graph`, `sticks-units`.
        sieve: String,
        #[arg(long, default_value = "Z2")]
        group: String,
        #[arg(long, default_value = "2,3")]
        truncation: Bounds,
        /// Also require every corolla with trivial action.
        #[arg(long)]
        trivial_corollas: bool,
        /// Translate to graph families and check admissibility.
        #[arg(long)]
        families: bool,
    },
    /// Graphviz output.
    ExportDot {
        #[arg(value_enum)]
        kind: DotKind,
        files: Vec<PathBuf>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, value_enum, default_value = "standard")]
        mode: Mode,
    },
}

struct Outcome {
    passed: bool,
    result: Value,
    witnesses: Vec<Value>,
    /// Raw text output (DOT) bypassing the report.
    raw: Option<String>,
}

impl Outcome {
    fn pass(result: Value) -> Outcome {
        Outcome { passed: true, result, witnesses: Vec::new(), raw: None }
    }
    fn check(passed: bool, result: Value, witnesses: Vec<Value>) -> Outcome {
        Outcome { passed, result, witnesses, raw: None }
    }
}

fn read(path: &Path) -> eqdendro::Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

/// Reads a G-forest file, or a plain tree file with a trivial action.
fn load_forest(path: &Path, group: Option<&str>) -> eqdendro::Result<(GForest, Vec<String>)> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text)?;
    if value.get("components").is_some() {
        let file: GForestFile = serde_json::from_value(value)?;
        return Ok((GForest::from_file(&file)?, Vec::new()));
    }
    let raw: RawTree = serde_json::from_value(value)?;
    let v = validate_tree_noted(&raw)?;
    let g = group.map(named_group).transpose()?.unwrap_or_else(FiniteGroup::trivial);
    Ok((GForest::trivial(g, v.tree), v.notes))
}

fn load_tree(path: &Path) -> eqdendro::Result<Tree> {
    let raw: RawTree = serde_json::from_str(&read(path)?)?;
    Ok(validate_tree_noted(&raw)?.tree)
}

fn cells_json(amb: &Ambient, cells: impl IntoIterator<Item = Subtree>) -> Vec<CellJson> {
    cells.into_iter().map(|c| amb.cell_to_json(&c)).collect()
}

fn relation_json(t: &Tree, r: &BroadRelation) -> String {
    let s: Vec<&str> = r.sources.iter().map(|&e| t.name(e)).collect();
    format!("{} <= {}", s.join(""), t.name(r.target))
}

fn pairs(items: &[String]) -> eqdendro::Result<BTreeMap<String, String>> {
    items
        .iter()
        .map(|p| {
            p.split_once('=')
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .ok_or_else(|| Error::InvalidInput(format!("`{p}` is not of the form a=b")))
        })
        .collect()
}

fn complex_report(f: &GForest, c: &Complex, complement: bool) -> Outcome {
    let amb = c.ambient().clone();
    if complement {
        let all = complexes::representable(f);
        let missing: Vec<Subtree> = all.cells().difference(c.cells()).cloned().collect();
        Outcome::pass(json!({ "missing": missing.len(), "faces": cells_json(&amb, missing) }))
    } else {
        let max = c.maximal();
        Outcome::pass(json!({ "cells": c.len(), "maximal": cells_json(&amb, max) }))
    }
}

fn presheaf(spec: &str) -> eqdendro::Result<Box<dyn Presheaf>> {
    if let Some(path) = spec.strip_prefix("free:") {
        let (f, _) = load_forest(Path::new(path), None)?;
        let free = if f.group().is_trivial() {
            genuine::FreeOnTree::new(f.component(0).clone())
        } else {
            genuine::FreeOnTree::equivariant(f)?
        };
        return Ok(Box::new(Nerve::new(free)?));
    }
    if Path::new(spec).exists() {
        return Ok(Box::new(Nerve::new(TableOperad::from_json(&read(Path::new(spec))?)?)?));
    }
    genuine::builtin_operad(spec)
}

fn tensor_mode(m: Mode) -> TensorMode {
    match m {
        Mode::Standard => TensorMode::Standard,
        Mode::Reversed => TensorMode::Reversed,
    }
}

fn run(cmd: Command) -> eqdendro::Result<Outcome> {
    match cmd {
        Command::Validate(input) => {
            let (f, notes) = load_forest(&input.file, input.group.as_deref())?;
            let components: Vec<Value> = f
                .components()
                .iter()
                .map(|t| {
                    let gens = t.generators();
                    let closure = t.broad_closure();
                    let composites: Vec<String> = closure
                        .iter()
                        .filter(|r| !gens.contains(r) && !(r.sources.len() == 1 && r.sources[0] == r.target))
                        .map(|r| relation_json(t, r))
                        .collect();
                    let classes = t.classify_edges();
                    let names = |v: &[usize]| v.iter().map(|&e| t.name(e).to_string()).collect::<Vec<_>>();
                    json!({
                        "degree": t.degree(),
                        "edges": t.n_edges(),
                        "root": t.name(classes.root),
                        "leaves": names(&classes.leaves),
                        "inner": names(&classes.inner),
                        "stumps": names(&classes.stumps),
                        "relations": closure.len(),
                        "composites": composites,
                    })
                })
                .collect();
            Ok(Outcome::pass(json!({
                "group_order": f.group().order(),
                "components": f.n_components(),
                "degree": f.component(0).degree(),
                "trees": components,
                "notes": notes,
            })))
        }
        Command::Faces(input) => {
            let (f, _) = load_forest(&input.file, input.group.as_deref())?;
            let amb = Ambient::of_forest(&f);
            let faces = f.faces();
            Ok(Outcome::pass(json!({ "count": faces.len(), "faces": cells_json(&amb, faces) })))
        }
        Command::Boundary { input, complement } => {
            let (f, _) = load_forest(&input.file, input.group.as_deref())?;
            Ok(complex_report(&f, &complexes::boundary(&f), complement))
        }
        Command::Horn { input, edges, complement } => {
            let (f, _) = load_forest(&input.file, input.group.as_deref())?;
            let e = anodyne::resolve_edges(&f, &edges.edges)?;
            Ok(complex_report(&f, &complexes::horn(&f, &e)?, complement))
        }
        Command::OrbitalHorn { input, edges, complement } => {
            let (f, _) = load_forest(&input.file, input.group.as_deref())?;
            let e = anodyne::resolve_edges(&f, &edges.edges)?;
            Ok(complex_report(&f, &complexes::orbital_horn(&f, &e)?, complement))
        }
        Command::SegalCore { input, complement } => {
            let (f, _) = load_forest(&input.file, input.group.as_deref())?;
            Ok(complex_report(&f, &complexes::segal_core(&f), complement))
        }
        Command::Factorize { source, target, map } => {
            let m = TreeMap::from_names(load_tree(&source)?, load_tree(&target)?, &pairs(&map)?)?;
            let kind = m.classify()?;
            let fac = m.factorize()?;
            let show = |t: &TreeMap| -> Value {
                json!({
                    "source": t.source.to_raw(),
                    "target": t.target.to_raw(),
                    "map": (0..t.source.n_edges())
                        .map(|e| (t.source.name(e).to_string(), t.target.name(t.edge_fn[e]).to_string()))
                        .collect::<BTreeMap<_, _>>(),
                })
            };
            Ok(Outcome::pass(json!({
                "kind": kind,
                "degeneracy": show(&fac.degeneracy),
                "inner": show(&fac.inner),
                "outer": show(&fac.outer),
            })))
        }
        Command::Gu { input, face } => {
            let (f, _) = load_forest(&input.file, input.group.as_deref())?;
            let amb = Ambient::of_forest(&f);
            let cell: CellJson = serde_json::from_str(&face)?;
            let u = amb.cell_from_json(&cell)?;
            if !f.faces().contains(&u) {
                return Err(Error::InvalidInput("not a face of the forest".into()));
            }
            let gu = f.minimal_orbital_face(&u);
            let (restricted, _) = f.restrict(&gu)?;
            Ok(Outcome::pass(json!({
                "faces": cells_json(&amb, gu.0.iter().cloned()),
                "isotropy": f.group().subgroup_names(&f.face_isotropy(&u)),
                "forest": restricted.to_file(),
            })))
        }
        Command::Quotient(input) => {
            let (f, _) = load_forest(&input.file, input.group.as_deref())?;
            let q = f.quotient();
            let orbits: Vec<Value> = f
                .edge_orbits()
                .iter()
                .map(|o| {
                    let e = *o.iter().next().unwrap();
                    json!({
                        "edges": o.iter().map(|&x| f.name(x)).collect::<Vec<_>>(),
                        "isotropy": f.group().subgroup_names(&f.isotropy(e)),
                    })
                })
                .collect();
            Ok(Outcome::pass(json!({
                "orbits": orbits.len(),
                "vertices": q.degree(),
                "quotient": q.to_raw(),
                "edge_orbits": orbits,
            })))
        }
        Command::Graft { lower, upper, matching } => {
            let (lo, _) = load_forest(&lower, None)?;
            let (up, _) = load_forest(&upper, None)?;
            let m = if matching.is_empty() { None } else { Some(pairs(&matching)?) };
            let g = lo.graft(&up, m.as_ref())?;
            Ok(Outcome::pass(json!({ "forest": g.to_file() })))
        }
        Command::TensorMax { left, right, mode, verify } => {
            let (s, _) = load_forest(&left, None)?;
            let (t, _) = load_forest(&right, None)?;
            let tp = TensorProduct::new(&s, &t)?;
            let mode = tensor_mode(mode);
            let perc = tp.percolation(mode)?;
            let amb = tp.ambient().clone();
            let names = |i: usize| perc.trees[i].edges().iter().map(|&e| amb.name(e).to_string()).collect::<Vec<_>>();
            let mut result = json!({
                "maximal": perc.trees.len(),
                "trees": (0..perc.trees.len()).map(names).collect::<Vec<_>>(),
                "generators": perc.generators,
                "orbits": perc.poset.orbits_in_order(),
            });
            let mut passed = true;
            let mut witnesses = Vec::new();
            if verify {
                let mut checks = Vec::new();
                for orbit in t.edge_orbits() {
                    let e = *orbit.iter().next().unwrap();
                    if t.is_root(e) || t.is_leaf(e) {
                        continue;
                    }
                    let rep = tp.verify_characteristic(&orbit, mode, true)?;
                    let replayed = match &rep.certificate {
                        Some(c) => replay::replay_file(&c.to_file()).map(Some)?,
                        None => None,
                    };
                    passed &= rep.report.passed() && replayed.is_some();
                    for c in rep.report.conditions.iter().filter(|c| !c.passed) {
                        witnesses.push(serde_json::to_value(c)?);
                    }
                    checks.push(json!({
                        "orbit": orbit.iter().map(|&x| t.name(x)).collect::<Vec<_>>(),
                        "conditions": rep.report.conditions,
                        "xi": rep.xi.iter().map(|x| anodyne::edge_names(&amb, x)).collect::<Vec<_>>(),
                        "steps": rep.certificate.as_ref().map(|c| c.steps.len()),
                        "replayed_cells": replayed,
                    }));
                }
                result["characteristic"] = Value::Array(checks);
            }
            Ok(Outcome::check(passed, result, witnesses))
        }
        Command::Certify { input, kind, edges, sub, variant, reduce, out } => {
            let (f, _) = load_forest(&input.file, input.group.as_deref())?;
            let e = anodyne::resolve_edges(&f, &edges)?;
            let fs = anodyne::resolve_edges(&f, &sub)?;
            let variant = match variant {
                Variant::PowerSet => HornVariant::PowerSet,
                Variant::Orbits => HornVariant::Orbits,
            };
            let kind = match kind {
                Kind::SegalCore => CertifyKind::SegalCore,
                Kind::OrbitalHorn => CertifyKind::OrbitalHornToFull { e },
                Kind::HornToHorn => CertifyKind::HornToHorn { e, f: fs, variant },
                Kind::OrbitalToOrbital => CertifyKind::OrbitalToOrbital { e, f: fs },
            };
            let cert = anodyne::certify(&f, &kind, reduce)?;
            let file = cert.to_file();
            let cells = replay::replay_file(&file)?;
            let mut result = json!({
                "steps": cert.steps.len(),
                "single_orbit": cert.steps.iter().all(|s| s.is_single_orbit(cert.ambient())),
                "replayed_cells": cells,
            });
            match out {
                Some(p) => {
                    std::fs::write(&p, cert.to_json()).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))?;
                    result["written"] = json!(p.display().to_string());
                }
                None => result["certificate"] = serde_json::to_value(&file)?,
            }
            Ok(Outcome::pass(result))
        }
        Command::Replay { certificate } => {
            let file: CertificateFile = serde_json::from_str(&read(&certificate)?)?;
            let cells = replay::replay_file(&file)?;
            Ok(Outcome::pass(json!({ "steps": file.steps.len(), "cells": cells })))
        }
        Command::GenuineCheck(p) => {
            let group = named_group(&p.group)?;
            let x = presheaf(&p.operad)?;
            let tr = Truncation::new(group, p.truncation);
            let rep = genuine::strict_segal_check(x.as_ref(), &tr)?;
            let witnesses = rep.witness.iter().map(serde_json::to_value).collect::<Result<_, _>>()?;
            Ok(Outcome::check(rep.passed, json!({ "presheaf": x.name(), "trees_checked": rep.trees_checked }), witnesses))
        }
        Command::LiftingSuite(p) => {
            let group = named_group(&p.group)?;
            let x = presheaf(&p.operad)?;
            let tr = Truncation::new(group, p.truncation);
            let s = genuine::lifting_equivalence_suite(x.as_ref(), &tr)?;
            let witnesses = s.witnesses.iter().map(serde_json::to_value).collect::<Result<_, _>>()?;
            Ok(Outcome::check(
                s.all_equal(),
                json!({
                    "presheaf": x.name(),
                    "segal_cores": s.segal_cores,
                    "generating_horns": s.generating_horns,
                    "all_horns": s.all_horns,
                    "orbital_horns": s.orbital_horns,
                    "all_true": s.all_true(),
                    "trees_checked": s.trees_checked,
                }),
                witnesses,
            ))
        }
        Command::ReedyCheck { category, group, truncation, families } => {
            let g = named_group(&group)?;
            let mut omega: Option<EquivariantTreeCategory> = None;
            let r: GenReedyCat = if let Some(n) = category.strip_prefix("delta:") {
                let n = n.parse().map_err(|_| Error::InvalidInput(format!("bad size {n}")))?;
                reedy::delta(n)
            } else {
                match category.as_str() {
                    "omega" => {
                        let e = EquivariantTreeCategory::new(&g, truncation);
                        let r = e.reedy().clone();
                        omega = Some(e);
                        r
                    }
                    "arrow" => reedy::arrow_category(&g, false),
                    "arrow-back" => reedy::arrow_category(&g, true),
                    path => {
                        let file: CategoryFile = serde_json::from_str(&read(Path::new(path))?)?;
                        GenReedyCat::from_file(&file)?
                    }
                }
            };
            let valid = reedy::validate_gen_reedy(&r);
            let fam = match families {
                Families::Trivial => FamilyCollection::trivial(&r.cat),
                Families::All => FamilyCollection::all(&r.cat),
                Families::Graph => match &omega {
                    Some(e) => e.product.graph_families(),
                    None => return Err(Error::InvalidInput("graph families need the omega category".into())),
                },
            };
            let adm = reedy::check_admissible(&r, &fam);
            let mut witnesses = Vec::new();
            if let Err(w) = &valid {
                witnesses.push(serde_json::to_value(w)?);
            }
            if let Some(w) = &adm.witness {
                witnesses.push(json!({ "admissible": w }));
            }
            Ok(Outcome::check(
                valid.is_ok() && adm.passed,
                json!({
                    "objects": r.cat.n_objects(),
                    "arrows": r.cat.n_arrows(),
                    "reedy": valid.is_ok(),
                    "admissible": adm.passed,
                    "family_sizes": fam.families.iter().map(Vec::len).collect::<Vec<_>>(),
                }),
                witnesses,
            ))
        }
        Command::IndexingValidate { sieve, group, truncation, trivial_corollas, families } => {
            let s = match sieve.as_str() {
                "full" | "trivial-graph" | "sticks-units" => {
                    let g = named_group(&group)?;
                    let tr = Truncation::new(g.clone(), truncation);
                    match sieve.as_str() {
                        "full" => SieveSpec::full(tr),
                        "trivial-graph" => SieveSpec::corolla_closure(tr, &trivial_corollas_upto(&g, truncation.arity)?),
                        _ => SieveSpec::corolla_closure(tr, &trivial_corollas_of_arity(&g, 1)?),
                    }
                }
                path => {
                    let file: SieveFile = serde_json::from_str(&read(Path::new(path))?)?;
                    SieveSpec::from_file(&file)?
                }
            };
            let rep = indexing::validate_weak_indexing(&s, trivial_corollas);
            let mut passed = rep.passed;
            let witnesses = rep.witnesses.iter().map(serde_json::to_value).collect::<Result<_, _>>()?;
            let mut result = serde_json::to_value(&rep)?;
            if let Some(obj) = result.as_object_mut() {
                obj.remove("witnesses");
            }
            if families && rep.passed {
                let t = indexing::translate(&s)?;
                passed &= t.admissible.passed && t.resynthesized;
                result["families"] = serde_json::to_value(&t)?;
            }
            Ok(Outcome::check(passed, result, witnesses))
        }
        Command::ExportDot { kind, files, group, mode } => {
            let need = if matches!(kind, DotKind::Percolation) { 2 } else { 1 };
            if files.len() != need {
                return Err(Error::InvalidInput(format!("expected {need} input file(s)")));
            }
            let text = match kind {
                DotKind::Tree => dot::forest(&load_forest(&files[0], group.as_deref())?.0),
                DotKind::Faces => {
                    let (f, _) = load_forest(&files[0], group.as_deref())?;
                    let amb = Ambient::of_forest(&f);
                    let faces = f.faces();
                    let labels: Vec<String> = faces
                        .iter()
                        .map(|u| u.edges().iter().map(|&e| amb.name(e)).collect::<Vec<_>>().join(" "))
                        .collect();
                    dot::hasse(&labels, |a, b| a != b && faces[b].contains_face(&faces[a]))
                }
                DotKind::Percolation => {
                    let (s, _) = load_forest(&files[0], group.as_deref())?;
                    let (t, _) = load_forest(&files[1], group.as_deref())?;
                    let tp = TensorProduct::new(&s, &t)?;
                    let perc = tp.percolation(tensor_mode(mode))?;
                    dot::percolation(&tp, &perc)
                }
            };
            Ok(Outcome { passed: true, result: Value::Null, witnesses: Vec::new(), raw: Some(text) })
        }
    }
}

fn trivial_corollas_of_arity(g: &FiniteGroup, n: usize) -> eqdendro::Result<Vec<GForest>> {
    g.subgroup_classes()
        .iter()
        .map(|h| {
            let id: Vec<usize> = (0..=n).collect();
            eqdendro::equivariance::induce(g, h, &Tree::corolla(n), &vec![id; h.order()])
        })
        .collect()
}

fn trivial_corollas_upto(g: &FiniteGroup, k: usize) -> eqdendro::Result<Vec<GForest>> {
    let mut out = Vec::new();
    for n in 0..=k {
        out.extend(trivial_corollas_of_arity(g, n)?);
    }
    Ok(out)
}

fn human(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match x {
                    Value::Object(_) | Value::Array(_) if !x.to_string().is_empty() && x.to_string().len() > 60 => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        human(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {x}\n")),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match x {
                    Value::Object(_) | Value::Array(_) if x.to_string().len() > 60 => {
                        out.push_str(&format!("{pad}-\n"));
                        human(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {x}\n")),
                }
            }
        }
        other => out.push_str(&format!("{pad}{other}\n")),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let command = argv.get(1..).unwrap_or_default().to_vec();
    match run(cli.command) {
        Ok(Outcome { raw: Some(text), .. }) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(o) => {
            let report = json!({
                "command": command,
                "passed": o.passed,
                "result": o.result,
                "witnesses": o.witnesses,
            });
            if cli.human {
                let mut s = String::new();
                human(&report, 0, &mut s);
                print!("{s}");
            } else {
                println!("{}", serde_json::to_string_pretty(&report).expect("report"));
            }
            if o.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) if e.is_check_failure() => {
            let report = json!({
                "command": command,
                "passed": false,
                "result": Value::Null,
                "witnesses": [ { "error": e.to_string() } ],
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("report"));
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
