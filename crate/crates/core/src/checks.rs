//! Cross-module invariant suite.
//!
//! Every check quantifies over whatever the corpus provides and reports one
//! pass/fail line. Exhaustive oracles (topology enumeration, bijection
//! search, subgroup listing) are bounded by the size limits below; items
//! beyond a limit are skipped by the affected check, never silently trusted.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::corpus::Corpus;
use crate::fincat::{
    connected_components, full_subcategory, is_right_ore, validate_category, Category, ObjectId,
    RawCategory, RawMorphism,
};
use crate::gsets::{
    automorphisms, gset_as_presheaf, orbits_on_tuples, stabilizer, subgroup_conjugacy_classes,
    transitive_gsets,
};
use crate::modelkit::{
    back_and_forth, cardinality_sequents, enumerate_partial_isos, exhaustive_isomorphism,
    extend_to_isomorphism, is_homogeneous, is_isomorphism, same_type, satisfies_sequent, ElementId,
};
use crate::sheafkit::{
    all_nat_trans, closure, constant_presheaf, enumerate_atoms, generated_subsheaf, is_atom,
    is_connected_object, is_epi, is_sheaf, is_zero, presheaves_isomorphic, sheafify, subsheaves,
    terminal_decomposition, yoneda, zero_subsheaf, Presheaf, Site, Subpresheaf,
};
use crate::sitecore::{
    atomic_topology, enumerate_ideals, enumerate_sieves, enumerate_topologies, reduce_to_dense,
    saturate, sieve_is_connected, Sieve,
};

/// Sieve listings grow exponentially in the arrows into an object; this caps
/// the categories on which sieve-exhaustive checks run.
const SIEVE_LIMIT: usize = 12;
/// Brute-force topology enumeration cap, in morphisms.
const TOPOLOGY_LIMIT: usize = 6;
/// Full-subcategory sweeps and ideal listings cap, in objects.
const OBJECT_LIMIT: usize = 12;
/// Exhaustive bijection search cap, in structure elements.
const PAIR_LIMIT: usize = 6;
/// Tuple-type matrix cap, in structure elements.
const TYPE_LIMIT: usize = 5;

/// Outcome of a single named invariant check.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    /// Scope summary when passing, counterexample references when failing.
    pub detail: String,
}

fn report(name: &str, checked: String, mut failures: Vec<String>) -> CheckReport {
    let passed = failures.is_empty();
    let detail = if passed {
        checked
    } else {
        if failures.len() > 4 {
            let extra = failures.len() - 4;
            failures.truncate(4);
            failures.push(format!("... and {extra} more"));
        }
        failures.join("; ")
    };
    CheckReport {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn value_set(k: usize) -> BTreeSet<String> {
    (0..k).map(|i| format!("v{i}")).collect()
}

/// Representables plus small constant presheaves, the standing sample family.
fn presheaf_samples(cat: &Category) -> Vec<(String, Presheaf)> {
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

/// A chain of generator sets: empty, growing prefixes of the nonempty
/// sieves, then all of them. Consecutive entries are nested by construction.
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

fn check_category_round_trip(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    for (name, cat) in &corpus.categories {
        match validate_category(&cat.to_raw()) {
            Ok(back) if &back == cat => {}
            Ok(_) => failures.push(format!("{name}: reload differs from the original")),
            Err(violations) => failures.push(format!("{name}: reload rejected: {}", violations[0])),
        }
    }
    report(
        "category-round-trip",
        format!("{} categories", corpus.categories.len()),
        failures,
    )
}

fn check_component_refinement(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, cat) in &corpus.categories {
        if cat.objects().len() > PAIR_LIMIT {
            continue;
        }
        let ambient = connected_components(cat);
        for subset in cat.objects().iter().cloned().powerset() {
            let objects: BTreeSet<ObjectId> = subset.into_iter().collect();
            let sub = full_subcategory(cat, &objects).expect("subset of corpus objects");
            for comp in connected_components(&sub) {
                let hits = ambient
                    .iter()
                    .filter(|a| comp.iter().all(|o| a.contains(o)))
                    .count();
                if hits != 1 {
                    failures.push(format!(
                        "{name}: subcategory component {{{}}} meets {hits} ambient components",
                        comp.join(", ")
                    ));
                }
            }
            checked += 1;
        }
    }
    report(
        "component-refinement",
        format!("{checked} full subcategories"),
        failures,
    )
}

/// Prefixing each id with its last character perturbs the sort order while
/// keeping ids distinct.
fn scrambled(raw: &RawCategory) -> RawCategory {
    let rename = |s: &str| format!("{}_{s}", s.chars().last().unwrap_or('x'));
    RawCategory {
        objects: raw.objects.iter().map(|o| rename(o)).collect(),
        morphisms: raw
            .morphisms
            .iter()
            .map(|m| RawMorphism {
                id: rename(&m.id),
                dom: rename(&m.dom),
                cod: rename(&m.cod),
            })
            .collect(),
        identities: raw
            .identities
            .iter()
            .map(|(o, m)| (rename(o), rename(m)))
            .collect(),
        composition: raw
            .composition
            .iter()
            .map(|(g, f, r)| (rename(g), rename(f), rename(r)))
            .collect(),
    }
}

fn check_ore_renaming_invariance(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    for (name, cat) in &corpus.categories {
        match validate_category(&scrambled(&cat.to_raw())) {
            Ok(renamed) => {
                if is_right_ore(cat) != is_right_ore(&renamed) {
                    failures.push(format!("{name}: verdict changed under renaming"));
                }
            }
            Err(violations) => {
                failures.push(format!("{name}: renamed copy rejected: {}", violations[0]))
            }
        }
    }
    report(
        "ore-renaming-invariance",
        format!("{} categories", corpus.categories.len()),
        failures,
    )
}

fn check_saturate_idempotent(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, cat) in &corpus.categories {
        if cat.morphism_count() > SIEVE_LIMIT {
            continue;
        }
        for generators in generator_samples(cat) {
            let once = saturate(cat, &generators);
            let twice = saturate(cat, &once.all_sieves());
            if once != twice {
                failures.push(format!("{name}: resaturating a saturation changed it"));
            }
            checked += 1;
        }
    }
    report(
        "saturate-idempotent",
        format!("{checked} generator sets"),
        failures,
    )
}

fn check_saturate_monotone(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, cat) in &corpus.categories {
        if cat.morphism_count() > SIEVE_LIMIT {
            continue;
        }
        let saturations: Vec<_> = generator_samples(cat)
            .iter()
            .map(|g| saturate(cat, g))
            .collect();
        for pair in saturations.windows(2) {
            if !pair[0].leq(&pair[1]) {
                failures.push(format!("{name}: larger generator set produced a smaller topology"));
            }
            checked += 1;
        }
    }
    report(
        "saturate-monotone",
        format!("{checked} nested generator pairs"),
        failures,
    )
}

fn check_saturate_minimal(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, cat) in &corpus.categories {
        if cat.morphism_count() > TOPOLOGY_LIMIT {
            continue;
        }
        let topologies = match enumerate_topologies(cat) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("{name}: enumeration failed: {e}"));
                continue;
            }
        };
        for generators in generator_samples(cat) {
            let sat = saturate(cat, &generators);
            if !topologies.contains(&sat) {
                failures.push(format!("{name}: saturation is not a topology"));
            }
            for candidate in &topologies {
                let contains_generators = generators.iter().all(|s| candidate.is_covering(s));
                if contains_generators && !sat.leq(candidate) {
                    failures.push(format!(
                        "{name}: a strictly smaller topology also contains the generators"
                    ));
                }
            }
            checked += 1;
        }
    }
    report(
        "saturate-minimal",
        format!("{checked} generator sets against enumerated topologies"),
        failures,
    )
}

fn check_atomic_covers_on_ore(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, cat) in &corpus.categories {
        if !is_right_ore(cat) || cat.morphism_count() > SIEVE_LIMIT {
            continue;
        }
        let top = atomic_topology(cat);
        for c in cat.objects() {
            let expected: BTreeSet<Sieve> = enumerate_sieves(cat, c)
                .expect("corpus object")
                .into_iter()
                .filter(|s| !s.is_empty())
                .collect();
            let actual: BTreeSet<Sieve> = top.covers(c).cloned().collect();
            if expected != actual {
                failures.push(format!("{name}: covers of {c} are not the nonempty sieves"));
            }
        }
        checked += 1;
    }
    report(
        "atomic-covers-on-ore",
        format!("{checked} square-completable categories"),
        failures,
    )
}

fn check_connected_non_ore_collapses(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, cat) in &corpus.categories {
        if is_right_ore(cat) || connected_components(cat).len() != 1 {
            continue;
        }
        let (sub, _) = reduce_to_dense(cat);
        if !sub.objects().is_empty() {
            failures.push(format!("{name}: reduction kept {} objects", sub.objects().len()));
        }
        checked += 1;
    }
    report(
        "connected-non-ore-collapses",
        format!("{checked} categories"),
        failures,
    )
}

fn check_reduce_postconditions(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    for (name, cat) in &corpus.categories {
        let (sub, top) = reduce_to_dense(cat);
        if !is_right_ore(&sub) {
            failures.push(format!("{name}: reduced category fails square completion"));
        }
        if sub.morphism_count() <= SIEVE_LIMIT && top != atomic_topology(&sub) {
            failures.push(format!(
                "{name}: reduced topology differs from the nonempty-sieve topology"
            ));
        }
        if cat.objects().len() <= OBJECT_LIMIT {
            let kept: BTreeSet<ObjectId> = sub.objects().iter().cloned().collect();
            if !enumerate_ideals(cat).contains(&kept) {
                failures.push(format!("{name}: kept objects do not form an ideal"));
            }
        }
    }
    report(
        "reduce-postconditions",
        format!("{} categories", corpus.categories.len()),
        failures,
    )
}

fn check_ideals_are_component_unions(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, cat) in &corpus.categories {
        if cat.objects().len() > OBJECT_LIMIT {
            continue;
        }
        let components: Vec<BTreeSet<ObjectId>> = connected_components(cat)
            .into_iter()
            .map(|c| c.into_iter().collect())
            .collect();
        let expected: BTreeSet<BTreeSet<ObjectId>> = components
            .iter()
            .powerset()
            .map(|choice| choice.into_iter().flatten().cloned().collect())
            .collect();
        let actual: BTreeSet<BTreeSet<ObjectId>> = enumerate_ideals(cat).into_iter().collect();
        if expected != actual {
            failures.push(format!("{name}: ideals differ from component unions"));
        }
        checked += 1;
    }
    report(
        "ideals-are-component-unions",
        format!("{checked} categories"),
        failures,
    )
}

fn sheafify_reports(corpus: &Corpus) -> Vec<CheckReport> {
    let mut sound = Vec::new();
    let mut unit_iff = Vec::new();
    let mut idempotent = Vec::new();
    let mut pairs = 0usize;
    for (name, cat) in &corpus.categories {
        if cat.morphism_count() > SIEVE_LIMIT {
            continue;
        }
        for (label, site) in [("atomic", Site::atomic(cat)), ("trivial", Site::trivial(cat))] {
            for (pname, f) in presheaf_samples(cat) {
                let sh = sheafify(&site, &f);
                pairs += 1;
                if !is_sheaf(&site, &sh.sheaf) {
                    sound.push(format!("{name}/{label}/{pname}: result fails the sheaf condition"));
                }
                if sh.unit.is_natural_iso() != is_sheaf(&site, &f) {
                    unit_iff.push(format!(
                        "{name}/{label}/{pname}: unit invertibility disagrees with the sheaf test"
                    ));
                }
                if !sheafify(&site, &sh.sheaf).unit.is_natural_iso() {
                    idempotent.push(format!(
                        "{name}/{label}/{pname}: second application changed the sheaf"
                    ));
                }
            }
        }
    }
    let scope = format!("{pairs} site/presheaf pairs");
    vec![
        report("sheafify-soundness", scope.clone(), sound),
        report("sheafify-unit-iso-iff-sheaf", scope.clone(), unit_iff),
        report("sheafify-idempotent", scope, idempotent),
    ]
}

fn check_atom_transport(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut moved = 0usize;
    for (name, cat) in &corpus.categories {
        if cat.morphism_count() > TOPOLOGY_LIMIT {
            continue;
        }
        let topologies = match enumerate_topologies(cat) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("{name}: enumeration failed: {e}"));
                continue;
            }
        };
        let sites: Vec<Site> = match topologies
            .iter()
            .map(|t| Site::new(cat.clone(), t.clone()))
            .collect::<Result<_, _>>()
        {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{name}: enumerated topology rejected: {e}"));
                continue;
            }
        };
        let mut atom_cache: Vec<Option<Vec<Presheaf>>> = vec![None; sites.len()];
        for i in 0..sites.len() {
            for j in 0..sites.len() {
                if i == j || !topologies[i].leq(&topologies[j]) {
                    continue;
                }
                if atom_cache[i].is_none() {
                    atom_cache[i] = match enumerate_atoms(&sites[i]) {
                        Ok(atoms) => Some(atoms),
                        Err(e) => {
                            failures.push(format!("{name}: atom listing failed: {e}"));
                            Some(Vec::new())
                        }
                    };
                }
                for atom in atom_cache[i].as_ref().expect("just filled") {
                    let image = sheafify(&sites[j], atom).sheaf;
                    if !(is_zero(&sites[j], &image) || is_atom(&sites[j], &image)) {
                        failures.push(format!(
                            "{name}: refining the topology sent an atom to a proper non-atom"
                        ));
                    }
                    moved += 1;
                }
            }
        }
    }
    report(
        "atom-transport",
        format!("{moved} atom/topology-pair combinations"),
        failures,
    )
}

fn check_atom_characterizations(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut candidates = 0usize;
    for (name, original) in &corpus.categories {
        if original.morphism_count() > SIEVE_LIMIT {
            continue;
        }
        let (sub, top) = reduce_to_dense(original);
        let site = match Site::new(sub, top) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{name}: reduced site rejected: {e}"));
                continue;
            }
        };
        let cat = site.category.clone();
        let generators: Vec<Presheaf> = cat
            .objects()
            .iter()
            .map(|c| sheafify(&site, &yoneda(&cat, c).expect("reduced object")).sheaf)
            .collect();
        let mut pool: Vec<(String, Presheaf)> = generators
            .iter()
            .enumerate()
            .map(|(i, g)| (format!("generator{i}"), g.clone()))
            .collect();
        for k in 0..=2 {
            pool.push((
                format!("constant{k}"),
                sheafify(&site, &constant_presheaf(&cat, &value_set(k))).sheaf,
            ));
        }
        match enumerate_atoms(&site) {
            Ok(atoms) => {
                for (i, a) in atoms.into_iter().enumerate() {
                    pool.push((format!("atom{i}"), a));
                }
            }
            Err(e) => failures.push(format!("{name}: atom listing failed: {e}")),
        }
        for (pname, f) in &pool {
            let via_subobjects = is_atom(&site, f);
            let nonzero = !is_zero(&site, f);
            let via_generator = nonzero
                && f.elements().any(|(c, x)| {
                    generated_subsheaf(&site, f, c, x)
                        .map(|s| s.is_full())
                        .unwrap_or(false)
                });
            let via_epi = nonzero
                && generators.iter().any(|g| {
                    all_nat_trans(&cat, g, f)
                        .iter()
                        .any(|nt| is_epi(&site, nt))
                });
            if via_subobjects != via_generator || via_subobjects != via_epi {
                failures.push(format!(
                    "{name}/{pname}: characterizations disagree \
                     (subobjects={via_subobjects}, generator={via_generator}, epi={via_epi})"
                ));
            }
            candidates += 1;
        }
    }
    report(
        "atom-characterizations",
        format!("{candidates} candidate sheaves"),
        failures,
    )
}

fn check_local_connectedness_criterion(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, cat) in &corpus.categories {
        if cat.morphism_count() > SIEVE_LIMIT {
            continue;
        }
        let site = Site::atomic(cat);
        let constants_are_sheaves =
            (0..=3).all(|k| is_sheaf(&site, &constant_presheaf(cat, &value_set(k))));
        let generators_connected = cat.objects().iter().all(|c| {
            let a = sheafify(&site, &yoneda(cat, c).expect("corpus object")).sheaf;
            is_connected_object(&site, &a).unwrap_or(false)
        });
        if constants_are_sheaves != generators_connected {
            failures.push(format!(
                "{name}: constants-are-sheaves is {constants_are_sheaves} but \
                 generators-connected is {generators_connected}"
            ));
        }
        checked += 1;
    }
    report(
        "local-connectedness-criterion",
        format!("{checked} sites"),
        failures,
    )
}

fn check_constant_sheaf_remark(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, cat) in &corpus.categories {
        if cat.morphism_count() > SIEVE_LIMIT {
            continue;
        }
        let site = Site::atomic(cat);
        let mut has_empty_cover = false;
        let mut covers_empty_or_connected = true;
        for c in cat.objects() {
            for s in site.topology.covers(c) {
                if s.is_empty() {
                    has_empty_cover = true;
                } else if !sieve_is_connected(cat, s) {
                    covers_empty_or_connected = false;
                }
            }
        }
        let empty_constant_is_sheaf = is_sheaf(&site, &constant_presheaf(cat, &BTreeSet::new()));
        if empty_constant_is_sheaf != !has_empty_cover {
            failures.push(format!("{name}: empty-constant verdict disagrees with empty covers"));
        }
        let nonempty_constants_are_sheaves =
            (1..=3).all(|k| is_sheaf(&site, &constant_presheaf(cat, &value_set(k))));
        if nonempty_constants_are_sheaves != covers_empty_or_connected {
            failures.push(format!(
                "{name}: constant-sheaf verdict disagrees with cover connectivity"
            ));
        }
        checked += 1;
    }
    report(
        "constant-sheaf-remark",
        format!("{checked} sites"),
        failures,
    )
}

fn meet_sub(cat: &Category, parent: &Presheaf, a: &Subpresheaf, b: &Subpresheaf) -> Subpresheaf {
    let subsets: BTreeMap<ObjectId, BTreeSet<String>> = a
        .subsets
        .iter()
        .map(|(c, s)| (c.clone(), s.intersection(&b.subsets[c]).cloned().collect()))
        .collect();
    Subpresheaf::new(cat, parent, subsets).expect("closed subsets meet to closed subsets")
}

fn join_sub(site: &Site, parent: &Presheaf, a: &Subpresheaf, b: &Subpresheaf) -> Subpresheaf {
    let subsets: BTreeMap<ObjectId, BTreeSet<String>> = a
        .subsets
        .iter()
        .map(|(c, s)| (c.clone(), s.union(&b.subsets[c]).cloned().collect()))
        .collect();
    let union = Subpresheaf::new(&site.category, parent, subsets)
        .expect("closed subsets union to an action-closed subset");
    closure(site, &union)
}

fn check_boolean_subsheaf_lattices(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut lattices = 0usize;
    for (name, original) in &corpus.categories {
        if original.morphism_count() > SIEVE_LIMIT {
            continue;
        }
        let (sub, top) = reduce_to_dense(original);
        let site = match Site::new(sub, top) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{name}: reduced site rejected: {e}"));
                continue;
            }
        };
        let cat = site.category.clone();
        let mut sheaves: Vec<(String, Presheaf)> = cat
            .objects()
            .iter()
            .map(|c| {
                (
                    format!("generator({c})"),
                    sheafify(&site, &yoneda(&cat, c).expect("reduced object")).sheaf,
                )
            })
            .collect();
        sheaves.push((
            "constant2".to_string(),
            sheafify(&site, &constant_presheaf(&cat, &value_set(2))).sheaf,
        ));
        for (pname, f) in &sheaves {
            if f.total_size() > OBJECT_LIMIT {
                continue;
            }
            let subs = match subsheaves(&site, f) {
                Ok(s) => s,
                Err(e) => {
                    failures.push(format!("{name}/{pname}: listing failed: {e}"));
                    continue;
                }
            };
            let zero = zero_subsheaf(&site, f);
            for (a, b) in subs.iter().tuple_combinations() {
                if !subs.contains(&meet_sub(&cat, f, a, b)) {
                    failures.push(format!("{name}/{pname}: meet escapes the lattice"));
                }
                if !subs.contains(&join_sub(&site, f, a, b)) {
                    failures.push(format!("{name}/{pname}: join escapes the lattice"));
                }
            }
            for a in &subs {
                let complemented = subs.iter().any(|b| {
                    meet_sub(&cat, f, a, b) == zero && join_sub(&site, f, a, b).is_full()
                });
                if !complemented {
                    failures.push(format!("{name}/{pname}: an element has no complement"));
                }
            }
            // Fully qualified: the derived lexicographic `Ord` would otherwise
            // shadow the subset order behind the double references.
            let minimal: Vec<&Subpresheaf> = subs
                .iter()
                .filter(|a| {
                    **a != zero
                        && !subs
                            .iter()
                            .any(|b| *b != zero && b != *a && Subpresheaf::le(b, a))
                })
                .collect();
            for a in &subs {
                if *a != zero && !minimal.iter().any(|m| Subpresheaf::le(m, a)) {
                    failures.push(format!(
                        "{name}/{pname}: a nonzero element dominates no minimal one"
                    ));
                }
            }
            lattices += 1;
        }
    }
    report(
        "boolean-subsheaf-lattices",
        format!("{lattices} subobject lattices"),
        failures,
    )
}

fn check_completion_counts(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    for (name, cat) in &corpus.categories {
        let (sub, top) = reduce_to_dense(cat);
        let expected = connected_components(&sub).len();
        let site = match Site::new(sub, top) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{name}: reduced site rejected: {e}"));
                continue;
            }
        };
        match terminal_decomposition(&site) {
            Ok(td) => {
                if td.atoms.len() != expected {
                    failures.push(format!(
                        "{name}: {} summands against {expected} components",
                        td.atoms.len()
                    ));
                }
            }
            Err(e) => failures.push(format!("{name}: decomposition rejected: {e}")),
        }
    }
    report(
        "completion-counts",
        format!("{} categories", corpus.categories.len()),
        failures,
    )
}

fn check_back_and_forth_oracle(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut pairs = 0usize;
    for (mname, m) in &corpus.structures {
        for (nname, n) in &corpus.structures {
            if m.signature != n.signature || m.size() > PAIR_LIMIT || n.size() > PAIR_LIMIT {
                continue;
            }
            let fast = match back_and_forth(m, n) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(format!("{mname}/{nname}: search failed: {e}"));
                    continue;
                }
            };
            let slow = exhaustive_isomorphism(m, n).expect("signatures agree");
            if fast.is_some() != slow.is_some() {
                failures.push(format!(
                    "{mname}/{nname}: search says {} but enumeration says {}",
                    fast.is_some(),
                    slow.is_some()
                ));
            }
            if let Some(map) = &fast {
                if !is_isomorphism(m, n, map) {
                    failures.push(format!("{mname}/{nname}: returned map is not an isomorphism"));
                }
            }
            pairs += 1;
        }
    }
    report(
        "back-and-forth-oracle",
        format!("{pairs} structure pairs"),
        failures,
    )
}

fn check_self_isomorphism(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    for (name, m) in &corpus.structures {
        match back_and_forth(m, m) {
            Ok(Some(_)) => {}
            Ok(None) => failures.push(format!("{name}: no isomorphism to itself")),
            Err(e) => failures.push(format!("{name}: search failed: {e}")),
        }
    }
    report(
        "self-isomorphism",
        format!("{} structures", corpus.structures.len()),
        failures,
    )
}

fn all_tuples(universe: &[ElementId], k: usize) -> Vec<Vec<ElementId>> {
    (0..k)
        .map(|_| universe.iter().cloned())
        .multi_cartesian_product()
        .collect()
}

fn check_type_equivalence(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut matrices = 0usize;
    for (name, m) in &corpus.structures {
        if m.size() > TYPE_LIMIT {
            continue;
        }
        for k in 1..=2 {
            let tuples = all_tuples(&m.universe, k);
            let n = tuples.len();
            let mut related = vec![vec![false; n]; n];
            for i in 0..n {
                for j in 0..n {
                    related[i][j] =
                        same_type(m, &tuples[i], m, &tuples[j]).expect("tuples from the universe");
                }
            }
            for i in 0..n {
                if !related[i][i] {
                    failures.push(format!("{name}: k={k} relation is not reflexive"));
                }
                for j in 0..n {
                    if related[i][j] != related[j][i] {
                        failures.push(format!("{name}: k={k} relation is not symmetric"));
                    }
                    for l in 0..n {
                        if related[i][j] && related[j][l] && !related[i][l] {
                            failures.push(format!("{name}: k={k} relation is not transitive"));
                        }
                    }
                }
            }
            matrices += 1;
        }
    }
    report(
        "type-equality-is-equivalence",
        format!("{matrices} tuple matrices"),
        failures,
    )
}

fn check_cardinality_sequents(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, m) in &corpus.structures {
        for n in 1..=5usize {
            let (lower, upper) = cardinality_sequents(n, &m.signature);
            let holds = satisfies_sequent(m, &lower).expect("closed sequent").holds
                && satisfies_sequent(m, &upper).expect("closed sequent").holds;
            if holds != (m.size() == n) {
                failures.push(format!("{name}: verdict for size {n} is {holds}"));
            }
            checked += 1;
        }
    }
    report(
        "cardinality-sequents-iff",
        format!("{checked} structure/size pairs"),
        failures,
    )
}

fn check_homogeneous_extension(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut extended = 0usize;
    let homogeneous: Vec<_> = corpus
        .structures
        .iter()
        .filter(|(_, m)| m.size() <= PAIR_LIMIT && is_homogeneous(m).unwrap_or(false))
        .collect();
    for (mname, m) in &homogeneous {
        for (nname, n) in &homogeneous {
            if m.signature != n.signature
                || back_and_forth(m, n).expect("signatures agree").is_none()
            {
                continue;
            }
            for p in enumerate_partial_isos(m, n).expect("signatures agree") {
                if extend_to_isomorphism(m, n, &p)
                    .expect("enumerated maps are partial isomorphisms")
                    .is_none()
                {
                    failures.push(format!("{mname}/{nname}: a partial map fails to extend"));
                    break;
                }
                extended += 1;
            }
        }
    }
    report(
        "homogeneous-pairs-extend",
        format!("{extended} partial maps"),
        failures,
    )
}

fn check_transitive_atom_counts(corpus: &Corpus, bound: usize) -> CheckReport {
    let mut failures = Vec::new();
    for (name, g) in &corpus.groups {
        let classes = match subgroup_conjugacy_classes(g, bound) {
            Ok(c) => c.len(),
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        let gsets = match transitive_gsets(g, bound) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        let presheaves: Vec<_> = gsets.iter().map(gset_as_presheaf).collect();
        let atoms = presheaves
            .iter()
            .filter(|(cat, p)| is_atom(&Site::atomic(cat), p))
            .count();
        if atoms != classes {
            failures.push(format!("{name}: {atoms} atoms against {classes} subgroup classes"));
        }
        for ((cat, p), (_, q)) in presheaves.iter().tuple_combinations() {
            if presheaves_isomorphic(cat, p, q).is_some() {
                failures.push(format!("{name}: two coset actions are isomorphic"));
            }
        }
    }
    report(
        "atom-count-matches-subgroup-classes",
        format!("{} groups", corpus.groups.len()),
        failures,
    )
}

fn check_gset_presheaves_are_sheaves(corpus: &Corpus, bound: usize) -> CheckReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, g) in &corpus.groups {
        let gsets = match transitive_gsets(g, bound) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        for x in &gsets {
            let (cat, p) = gset_as_presheaf(x);
            if !is_sheaf(&Site::atomic(&cat), &p) {
                failures.push(format!("{name}: a coset action fails the sheaf condition"));
            }
            checked += 1;
        }
    }
    report(
        "group-actions-are-sheaves",
        format!("{checked} coset actions"),
        failures,
    )
}

fn check_orbits_match_types(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut compared = 0usize;
    for (name, m) in &corpus.structures {
        if m.size() > TYPE_LIMIT || !is_homogeneous(m).unwrap_or(false) {
            continue;
        }
        let g = automorphisms(m);
        for k in 1..=2 {
            let orbits = match orbits_on_tuples(&g, k) {
                Ok(o) => o,
                Err(e) => {
                    failures.push(format!("{name}: orbit listing failed: {e}"));
                    continue;
                }
            };
            let class_of = |t: &Vec<ElementId>| orbits.iter().position(|o| o.contains(t));
            let tuples = all_tuples(&m.universe, k);
            for (t1, t2) in tuples.iter().tuple_combinations() {
                let same_orbit = class_of(t1) == class_of(t2);
                let same_ty = same_type(m, t1, m, t2).expect("tuples from the universe");
                if same_orbit != same_ty {
                    failures.push(format!(
                        "{name}: k={k} orbit verdict {same_orbit} against type verdict {same_ty}"
                    ));
                }
                compared += 1;
            }
        }
    }
    report(
        "orbits-match-types",
        format!("{compared} tuple pairs"),
        failures,
    )
}

fn check_stabilizer_filtration(corpus: &Corpus) -> CheckReport {
    let mut failures = Vec::new();
    let mut checked = 0usize;
    for (name, g) in &corpus.groups {
        for p in g.points() {
            let outer = match stabilizer(g, std::slice::from_ref(p)) {
                Ok(h) => h,
                Err(e) => {
                    failures.push(format!("{name}: {e}"));
                    continue;
                }
            };
            for q in g.points() {
                let inner = match stabilizer(g, &[p.clone(), q.clone()]) {
                    Ok(h) => h,
                    Err(e) => {
                        failures.push(format!("{name}: {e}"));
                        continue;
                    }
                };
                for perm in inner.elements() {
                    if outer.index_of(perm).is_none() {
                        failures.push(format!(
                            "{name}: stabilizer of ({p}, {q}) is not inside stabilizer of ({p})"
                        ));
                    }
                }
                checked += 1;
            }
        }
    }
    report(
        "stabilizer-filtration",
        format!("{checked} tuple extensions"),
        failures,
    )
}

fn determinism_snapshot(corpus: &Corpus, bound: usize) -> String {
    let mut pieces = Vec::new();
    for (name, cat) in &corpus.categories {
        if cat.morphism_count() > SIEVE_LIMIT {
            continue;
        }
        let top = atomic_topology(cat);
        pieces.push(format!(
            "{name}:{}",
            serde_json::to_string(&top.to_raw()).expect("serializable")
        ));
        if let Some(c) = cat.objects().first() {
            let site = Site::atomic(cat);
            let sh = sheafify(&site, &yoneda(cat, c).expect("corpus object"));
            pieces.push(serde_json::to_string(&sh.sheaf.to_raw(cat)).expect("serializable"));
        }
    }
    for (name, g) in &corpus.groups {
        if let Ok(gsets) = transitive_gsets(g, bound) {
            for x in gsets {
                pieces.push(format!(
                    "{name}:{}",
                    serde_json::to_string(&x.to_raw()).expect("serializable")
                ));
            }
        }
    }
    pieces.join("\n")
}

fn check_deterministic_serialization(corpus: &Corpus, bound: usize) -> CheckReport {
    let first = determinism_snapshot(corpus, bound);
    let second = determinism_snapshot(corpus, bound);
    let failures = if first == second {
        Vec::new()
    } else {
        vec!["repeated runs produced different bytes".to_string()]
    };
    report(
        "deterministic-serialization",
        format!("{} bytes, two runs", first.len()),
        failures,
    )
}

/// Runs every invariant check over the corpus. `bound` caps exhaustive group
/// enumerations; checks whose oracles would exceed their size limits skip
/// the offending corpus entries.
pub fn run_suite(corpus: &Corpus, bound: usize) -> Vec<CheckReport> {
    let mut reports = vec![
        check_category_round_trip(corpus),
        check_component_refinement(corpus),
        check_ore_renaming_invariance(corpus),
        check_saturate_idempotent(corpus),
        check_saturate_monotone(corpus),
        check_saturate_minimal(corpus),
        check_atomic_covers_on_ore(corpus),
        check_connected_non_ore_collapses(corpus),
        check_reduce_postconditions(corpus),
        check_ideals_are_component_unions(corpus),
    ];
    reports.extend(sheafify_reports(corpus));
    reports.extend([
        check_atom_transport(corpus),
        check_atom_characterizations(corpus),
        check_local_connectedness_criterion(corpus),
        check_constant_sheaf_remark(corpus),
        check_boolean_subsheaf_lattices(corpus),
        check_completion_counts(corpus),
        check_back_and_forth_oracle(corpus),
        check_self_isomorphism(corpus),
        check_type_equivalence(corpus),
        check_cardinality_sequents(corpus),
        check_homogeneous_extension(corpus),
        check_transitive_atom_counts(corpus, bound),
        check_gset_presheaves_are_sheaves(corpus, bound),
        check_orbits_match_types(corpus),
        check_stabilizer_filtration(corpus),
        check_deterministic_serialization(corpus, bound),
    ]);
    reports
}
