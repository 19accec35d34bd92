//! Acceptance gate: one test per shipped guarantee, each ending with a PASS
//! line. Every oracle is recomputed here from first principles rather than
//! trusted from unit tests, so these tests double as executable contracts.

use std::collections::BTreeSet;
use std::time::Instant;

use toposcalc_core::checks::run_suite;
use toposcalc_core::corpus;
use toposcalc_core::fincat::{connected_components, is_right_ore, Category, ObjectId};
use toposcalc_core::gsets::{
    automorphisms, group_category, gset_as_presheaf, orbits_on_tuples, subgroup_conjugacy_classes,
    transitive_gsets,
};
use toposcalc_core::modelkit::{
    back_and_forth, cardinality_sequents, exhaustive_isomorphism, extend_to_isomorphism,
    homogeneity_witness, is_homogeneous, is_partial_iso, same_type, satisfies_sequent, ElementId,
};
use toposcalc_core::sheafkit::{
    all_nat_trans, constant_presheaf, enumerate_atoms, generated_subsheaf, is_epi, is_sheaf,
    is_zero, sheafify, subsheaves, terminal_decomposition, yoneda, Presheaf, Site,
};
use toposcalc_core::sitecore::{
    atomic_topology, enumerate_sieves, enumerate_topologies, induced_topology, is_topology,
    reduce_to_dense, saturate, sieve_is_connected, Sieve,
};

fn value_set(k: usize) -> BTreeSet<String> {
    (0..k).map(|i| format!("v{i}")).collect()
}

/// Empty set, growing prefixes of the nonempty sieves, then all of them.
fn generator_samples(cat: &Category) -> Vec<Vec<Sieve>> {
    let mut nonempty = Vec::new();
    for c in cat.objects() {
        for s in enumerate_sieves(cat, c).expect("corpus object") {
            if !s.is_empty() {
                nonempty.push(s);
            }
        }
    }
    let mut samples = vec![Vec::new()];
    let mut prefix = Vec::new();
    for s in nonempty.iter().take(8) {
        prefix.push(s.clone());
        samples.push(prefix.clone());
    }
    samples.push(nonempty);
    samples
}

fn reduced_site(cat: &Category) -> Site {
    let (sub, top) = reduce_to_dense(cat);
    Site::new(sub, top).expect("reduction yields a valid site")
}

fn sample_presheaves(cat: &Category) -> Vec<(String, Presheaf)> {
    let mut out: Vec<(String, Presheaf)> = cat
        .objects()
        .iter()
        .map(|c| (format!("y({c})"), yoneda(cat, c).expect("corpus object")))
        .collect();
    for k in 0..=2 {
        out.push((format!("constant{k}"), constant_presheaf(cat, &value_set(k))));
    }
    out
}

#[test]
fn criterion_01_topology_laws() {
    let corpus = corpus::builtin();
    for (name, cat) in &corpus.categories {
        let start = Instant::now();
        let enumerated = if cat.morphism_count() <= 6 {
            Some(enumerate_topologies(cat).expect("small category"))
        } else {
            None
        };
        for generators in generator_samples(cat) {
            let sat = saturate(cat, &generators);
            assert!(
                is_topology(cat, &sat).is_ok(),
                "{name}: saturation breaks a topology axiom"
            );
            if let Some(all) = &enumerated {
                let containing: Vec<_> = all
                    .iter()
                    .filter(|t| generators.iter().all(|s| t.is_covering(s)))
                    .collect();
                assert!(
                    containing.iter().any(|t| **t == sat),
                    "{name}: saturation is missing from the enumerated topologies"
                );
                for t in containing {
                    assert!(
                        sat.leq(t),
                        "{name}: a strictly smaller topology also contains the generators"
                    );
                }
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        assert!(elapsed < 10.0, "{name}: took {elapsed:.1}s, budget is 10s");
    }
    println!("ACCEPTANCE 01 (topology-laws): PASS");
}

#[test]
fn criterion_02_square_completion_vs_atomic_covers() {
    let corpus = corpus::builtin();
    for (name, cat) in &corpus.categories {
        let top = atomic_topology(cat);
        if is_right_ore(cat) {
            for c in cat.objects() {
                let expected: BTreeSet<Sieve> = enumerate_sieves(cat, c)
                    .expect("corpus object")
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect();
                let actual: BTreeSet<Sieve> = top.covers(c).cloned().collect();
                assert_eq!(expected, actual, "{name}: covers of {c}");
            }
        }
    }
    // The cospan without a completion degenerates: every sieve covers, and
    // the dense reduction drops everything.
    let v = corpus.category("v");
    assert!(!is_right_ore(v));
    let top = atomic_topology(v);
    for c in v.objects() {
        for s in enumerate_sieves(v, c).expect("corpus object") {
            assert!(top.is_covering(&s), "v: sieve {s} should cover in the degenerate topology");
        }
    }
    let (sub, _) = reduce_to_dense(v);
    assert!(sub.objects().is_empty(), "v: reduction kept objects");
    println!("ACCEPTANCE 02 (square-completion-vs-atomic-covers): PASS");
}

#[test]
fn criterion_03_dense_reduction_pipeline() {
    let corpus = corpus::builtin();
    for (name, cat) in &corpus.categories {
        let (sub, top) = reduce_to_dense(cat);
        assert!(is_right_ore(&sub), "{name}: reduced category fails square completion");
        assert_eq!(
            top,
            atomic_topology(&sub),
            "{name}: reduced topology is not the nonempty-sieve topology"
        );
        assert_eq!(
            top,
            induced_topology(cat, &atomic_topology(cat), &sub).expect("reduced subcategory"),
            "{name}: reduced topology disagrees with the induced one"
        );
        let kept: BTreeSet<ObjectId> = sub.objects().iter().cloned().collect();
        for component in connected_components(cat) {
            let inside = component.iter().filter(|o| kept.contains(*o)).count();
            assert!(
                inside == 0 || inside == component.len(),
                "{name}: reduction split a connected component"
            );
        }
    }
    println!("ACCEPTANCE 03 (dense-reduction-pipeline): PASS");
}

#[test]
fn criterion_04_sheafification() {
    let corpus = corpus::builtin();
    for (name, cat) in &corpus.categories {
        for (label, site) in [("atomic", Site::atomic(cat)), ("trivial", Site::trivial(cat))] {
            for (pname, f) in sample_presheaves(cat) {
                let sh = sheafify(&site, &f);
                assert!(
                    is_sheaf(&site, &sh.sheaf),
                    "{name}/{label}/{pname}: result fails the sheaf condition"
                );
                assert_eq!(
                    sh.unit.is_natural_iso(),
                    is_sheaf(&site, &f),
                    "{name}/{label}/{pname}: unit invertibility must mark exactly the sheaves"
                );
                assert!(
                    sheafify(&site, &sh.sheaf).unit.is_natural_iso(),
                    "{name}/{label}/{pname}: second application changed the sheaf"
                );
            }
        }
    }
    println!("ACCEPTANCE 04 (sheafification): PASS");
}

#[test]
fn criterion_05_atom_characterizations() {
    let corpus = corpus::builtin();
    for (name, original) in &corpus.categories {
        let site = reduced_site(original);
        let cat = site.category.clone();
        let generators: Vec<Presheaf> = cat
            .objects()
            .iter()
            .map(|c| sheafify(&site, &yoneda(&cat, c).expect("reduced object")).sheaf)
            .collect();
        let mut pool: Vec<Presheaf> = generators.clone();
        for k in 0..=2 {
            pool.push(sheafify(&site, &constant_presheaf(&cat, &value_set(k))).sheaf);
        }
        pool.extend(enumerate_atoms(&site).expect("bounded site"));
        for f in &pool {
            let via_subobject_count = subsheaves(&site, f).expect("bounded sheaf").len() == 2;
            let nonzero = !is_zero(&site, f);
            let via_generator = nonzero
                && f.elements().any(|(c, x)| {
                    generated_subsheaf(&site, f, c, x)
                        .expect("element of the sheaf")
                        .is_full()
                });
            let via_epi = nonzero
                && generators.iter().any(|g| {
                    all_nat_trans(&cat, g, f).iter().any(|nt| is_epi(&site, nt))
                });
            assert_eq!(
                via_subobject_count, via_generator,
                "{name}: subobject-count and generating-element verdicts disagree"
            );
            assert_eq!(
                via_subobject_count, via_epi,
                "{name}: subobject-count and epimorphic-image verdicts disagree"
            );
        }
    }
    println!("ACCEPTANCE 05 (atom-characterizations): PASS");
}

#[test]
fn criterion_06_local_connectedness() {
    let corpus = corpus::builtin();
    for (name, cat) in &corpus.categories {
        let site = Site::atomic(cat);
        let constants_are_sheaves =
            (0..=3).all(|k| is_sheaf(&site, &constant_presheaf(cat, &value_set(k))));
        let generators_connected = cat.objects().iter().all(|c| {
            let a = sheafify(&site, &yoneda(cat, c).expect("corpus object")).sheaf;
            toposcalc_core::sheafkit::is_connected_object(&site, &a).unwrap_or(false)
        });
        assert_eq!(
            constants_are_sheaves, generators_connected,
            "{name}: the two sides of the criterion disagree"
        );
        // Cover-level restatement, computed without sheaves at all.
        let mut covers_fine = true;
        for c in cat.objects() {
            for s in site.topology.covers(c) {
                if s.is_empty() || !sieve_is_connected(cat, s) {
                    covers_fine = false;
                }
            }
        }
        assert_eq!(
            constants_are_sheaves, covers_fine,
            "{name}: cover-level restatement disagrees"
        );
    }
    println!("ACCEPTANCE 06 (local-connectedness): PASS");
}

#[test]
fn criterion_07_atom_transport() {
    let corpus = corpus::builtin();
    let mut moved = 0usize;
    for (name, cat) in &corpus.categories {
        if cat.morphism_count() > 6 {
            continue;
        }
        let topologies = enumerate_topologies(cat).expect("small category");
        let sites: Vec<Site> = topologies
            .iter()
            .map(|t| Site::new(cat.clone(), t.clone()).expect("enumerated topology"))
            .collect();
        for (i, fine) in sites.iter().enumerate() {
            let atoms = enumerate_atoms(fine).expect("bounded site");
            for (j, coarse) in sites.iter().enumerate() {
                if i == j || !topologies[i].leq(&topologies[j]) {
                    continue;
                }
                for atom in &atoms {
                    let image = sheafify(coarse, atom).sheaf;
                    assert!(
                        is_zero(coarse, &image) || toposcalc_core::sheafkit::is_atom(coarse, &image),
                        "{name}: transported atom is proper but not an atom"
                    );
                    moved += 1;
                }
            }
        }
    }
    assert!(moved > 0, "no comparable topology pairs were exercised");
    println!("ACCEPTANCE 07 (atom-transport): PASS ({moved} transports)");
}

#[test]
fn criterion_08_completion_counts() {
    let corpus = corpus::builtin();
    for (name, cat) in &corpus.categories {
        let site = reduced_site(cat);
        let expected = connected_components(&site.category).len();
        let td = terminal_decomposition(&site).expect("reduced sites decompose");
        assert_eq!(td.atoms.len(), expected, "{name}: summand count");
        if *name == "discrete2" {
            assert_eq!(td.atoms.len(), 2);
        }
        if is_right_ore(cat) && connected_components(cat).len() == 1 {
            assert_eq!(td.atoms.len(), 1, "{name}: connected case must give one summand");
        }
    }
    println!("ACCEPTANCE 08 (completion-counts): PASS");
}

#[test]
fn criterion_09_back_and_forth_oracle() {
    let corpus = corpus::builtin();
    let start = Instant::now();
    let mut pairs = 0usize;
    for (mname, m) in &corpus.structures {
        for (nname, n) in &corpus.structures {
            if m.signature != n.signature || m.size() > 6 || n.size() > 6 {
                continue;
            }
            let fast = back_and_forth(m, n).expect("signatures agree");
            let slow = exhaustive_isomorphism(m, n).expect("signatures agree");
            assert_eq!(
                fast.is_some(),
                slow.is_some(),
                "{mname}/{nname}: search disagrees with enumeration"
            );
            pairs += 1;
        }
    }
    assert!(pairs >= 50, "only {pairs} pairs were compared");
    assert!(
        back_and_forth(corpus.structure("c3"), corpus.structure("p3"))
            .expect("same signature")
            .is_none(),
        "the 3-cycle must not match the 3-path"
    );
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "took {elapsed:.1}s, budget is 5s");
    println!("ACCEPTANCE 09 (back-and-forth-oracle): PASS ({pairs} pairs)");
}

#[test]
fn criterion_10_cardinality_sequents() {
    let corpus = corpus::builtin();
    for (name, m) in &corpus.structures {
        for n in 1..=5usize {
            let (lower, upper) = cardinality_sequents(n, &m.signature);
            let holds = satisfies_sequent(m, &lower).expect("closed sequent").holds
                && satisfies_sequent(m, &upper).expect("closed sequent").holds;
            assert_eq!(holds, m.size() == n, "{name}: size-{n} verdict");
        }
    }
    println!("ACCEPTANCE 10 (cardinality-sequents): PASS");
}

#[test]
fn criterion_11_homogeneity_and_orbits() {
    let corpus = corpus::builtin();
    for (name, m) in &corpus.structures {
        if !is_homogeneous(m).expect("small structure") {
            continue;
        }
        let g = automorphisms(m);
        for k in 1..=2usize {
            let orbits = orbits_on_tuples(&g, k).expect("small group");
            let tuples: Vec<Vec<ElementId>> = {
                let mut acc: Vec<Vec<ElementId>> = vec![Vec::new()];
                for _ in 0..k {
                    acc = acc
                        .into_iter()
                        .flat_map(|t| {
                            m.universe.iter().map(move |e| {
                                let mut t2 = t.clone();
                                t2.push(e.clone());
                                t2
                            })
                        })
                        .collect();
                }
                acc
            };
            for t1 in &tuples {
                for t2 in &tuples {
                    let same_orbit = orbits.iter().any(|o| o.contains(t1) && o.contains(t2));
                    let same_ty = same_type(m, t1, m, t2).expect("tuples from the universe");
                    assert_eq!(same_orbit, same_ty, "{name}: k={k} tuples {t1:?} vs {t2:?}");
                }
            }
        }
    }
    for name in ["lin2", "lin3", "lin4"] {
        let m = corpus.structure(name);
        let witness = homogeneity_witness(m)
            .expect("small structure")
            .unwrap_or_else(|| panic!("{name}: expected a non-extendable partial map"));
        assert!(
            is_partial_iso(m, m, &witness).expect("witness uses universe elements"),
            "{name}: witness must be a genuine partial isomorphism"
        );
        assert!(
            extend_to_isomorphism(m, m, &witness)
                .expect("witness uses universe elements")
                .is_none(),
            "{name}: witness unexpectedly extends"
        );
    }
    println!("ACCEPTANCE 11 (homogeneity-and-orbits): PASS");
}

#[test]
fn criterion_12_group_action_atom_counts() {
    let corpus = corpus::builtin();
    let expected = [("trivial", 1usize), ("z2", 2), ("z3", 2), ("z2x2", 5), ("s3", 4)];
    for (name, want) in expected {
        let g = corpus.group(name);
        // The subgroup oracle must reproduce the count before it is trusted.
        let classes = subgroup_conjugacy_classes(g, 24).expect("small group");
        assert_eq!(classes.len(), want, "{name}: subgroup class count");
        let cat = group_category(g);
        let site = Site::atomic(&cat);
        let atoms = enumerate_atoms(&site).expect("bounded site");
        assert_eq!(atoms.len(), want, "{name}: enumerated atom count");
        for a in &atoms {
            assert_eq!(
                subsheaves(&site, a).expect("bounded sheaf").len(),
                2,
                "{name}: an enumerated atom has extra subobjects"
            );
        }
        let actions = transitive_gsets(g, 24).expect("small group");
        assert_eq!(actions.len(), want, "{name}: one transitive action per class");
        for x in &actions {
            let (gc, p) = gset_as_presheaf(x);
            assert!(is_sheaf(&Site::atomic(&gc), &p), "{name}: action fails the sheaf condition");
        }
    }
    println!("ACCEPTANCE 12 (group-action-atom-counts): PASS");
}

#[test]
fn criterion_13_determinism() {
    let corpus = corpus::builtin();
    let first: Vec<(String, bool, String)> = run_suite(&corpus, 24)
        .into_iter()
        .map(|r| (r.name, r.passed, r.detail))
        .collect();
    let second: Vec<(String, bool, String)> = run_suite(&corpus, 24)
        .into_iter()
        .map(|r| (r.name, r.passed, r.detail))
        .collect();
    assert_eq!(first, second, "suite output changed between runs");
    for (name, passed, detail) in &first {
        assert!(passed, "{name}: {detail}");
    }
    println!("ACCEPTANCE 13 (determinism): PASS");
}
