//! Presheaves of finite sets on a finite category, natural transformations,
//! subpresheaves, sites, and the sheaf condition.
//!
//! A presheaf stores one finite element set per object and one total map per
//! morphism, contravariantly: action(g∘f) = action(f)∘action(g). The sheaf
//! condition is checked literally: every matching family over every covering
//! sieve must have exactly one amalgamation. Everything downstream
//! (sheafification, subobject lattices, atoms, the restricted canonical
//! topology) lives in the submodules and is re-exported here.

mod canon;
mod plus;
mod sub;

pub use canon::{all_nat_trans, presheaves_isomorphic, restricted_canonical_topology, CanonicalSite};
pub use plus::{plus, sheafify, Sheafification};
pub use sub::{
    closure, enumerate_atoms, generated_subsheaf, image_subpresheaf, is_atom, is_connected_object,
    is_epi, is_zero, presheaf_congruences, quotient_presheaf, sheaf_components, subsheaves,
    terminal_decomposition, zero_subsheaf, Congruence, TerminalDecomposition,
};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{validate_category, Category, MorphId, ObjectId, RawCategory};
use crate::sitecore::{is_topology, RawTopology, Sieve, Topology};

#[derive(Debug, Error)]
pub enum SheafError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("malformed presheaf: {0}")]
    Presheaf(String),
    #[error("naturality failure: {0}")]
    Naturality(String),
    #[error("site is not locally connected: {0}")]
    SiteNotLocallyConnected(String),
    #[error("site is not atomic: {0}")]
    NotAtomicSite(String),
    #[error("not an atom: `{0}`")]
    NotAnAtom(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// On-disk form: element sets per object, actions per morphism as maps from
/// elements over the codomain to elements over the domain. Identity actions
/// and actions out of empty sets may be omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPresheaf {
    pub sets: BTreeMap<String, BTreeSet<String>>,
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, String>>,
}

/// A finite-set-valued presheaf with total, functorial actions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Presheaf {
    sets: BTreeMap<ObjectId, BTreeSet<String>>,
    actions: BTreeMap<MorphId, BTreeMap<String, String>>,
}

impl Presheaf {
    /// Validates element sets, action totality, and functoriality; missing
    /// objects get empty sets, missing identity actions are filled in.
    pub fn from_raw(cat: &Category, raw: &RawPresheaf) -> Result<Presheaf, SheafError> {
        for obj in raw.sets.keys() {
            if !cat.has_object(obj) {
                return Err(SheafError::UnknownObject(obj.clone()));
            }
        }
        let sets: BTreeMap<ObjectId, BTreeSet<String>> = cat
            .objects()
            .iter()
            .map(|c| (c.clone(), raw.sets.get(c).cloned().unwrap_or_default()))
            .collect();
        for f in raw.actions.keys() {
            if !cat.has_morphism(f) {
                return Err(SheafError::Presheaf(format!("action for unknown morphism `{f}`")));
            }
        }
        let mut actions: BTreeMap<MorphId, BTreeMap<String, String>> = BTreeMap::new();
        for f in cat.morphisms() {
            let source = &sets[cat.cod(f)];
            let target = &sets[cat.dom(f)];
            let map = match raw.actions.get(f) {
                Some(map) => {
                    for (x, y) in map {
                        if !source.contains(x) {
                            return Err(SheafError::Presheaf(format!(
                                "action of `{f}` defined on `{x}`, which is not over its codomain"
                            )));
                        }
                        if !target.contains(y) {
                            return Err(SheafError::Presheaf(format!(
                                "action of `{f}` sends `{x}` to `{y}`, which is not over its domain"
                            )));
                        }
                    }
                    for x in source {
                        if !map.contains_key(x) {
                            return Err(SheafError::Presheaf(format!(
                                "action of `{f}` is missing `{x}`"
                            )));
                        }
                    }
                    map.clone()
                }
                None => {
                    if cat.is_identity(f) || source.is_empty() {
                        source.iter().map(|x| (x.clone(), x.clone())).collect()
                    } else {
                        return Err(SheafError::Presheaf(format!("no action for `{f}`")));
                    }
                }
            };
            if cat.is_identity(f) && map.iter().any(|(x, y)| x != y) {
                return Err(SheafError::Presheaf(format!(
                    "identity `{f}` must act as the identity"
                )));
            }
            actions.insert(f.clone(), map);
        }
        let presheaf = Presheaf { sets, actions };
        for g in cat.morphisms() {
            for f in cat.morphisms() {
                if let Some(h) = cat.compose(g, f) {
                    for x in presheaf.set(cat.cod(g)) {
                        if presheaf.apply(h, x) != presheaf.apply(f, presheaf.apply(g, x)) {
                            return Err(SheafError::Presheaf(format!(
                                "actions of `{g}` then `{f}` disagree with `{h}` at `{x}`"
                            )));
                        }
                    }
                }
            }
        }
        Ok(presheaf)
    }

    pub fn to_raw(&self, cat: &Category) -> RawPresheaf {
        RawPresheaf {
            sets: self.sets.clone(),
            actions: self
                .actions
                .iter()
                .filter(|(f, map)| !cat.is_identity(f) && !map.is_empty())
                .map(|(f, map)| (f.clone(), map.clone()))
                .collect(),
        }
    }

    pub fn set(&self, c: &str) -> &BTreeSet<String> {
        self.sets.get(c).expect("object of the site category")
    }

    pub fn apply<'a>(&'a self, f: &str, x: &str) -> &'a String {
        self.actions
            .get(f)
            .expect("morphism of the site category")
            .get(x)
            .expect("element over the codomain")
    }

    pub fn action<'a>(&'a self, f: &str) -> &'a BTreeMap<String, String> {
        self.actions.get(f).expect("morphism of the site category")
    }

    /// All (object, element) pairs in sorted order.
    pub fn elements(&self) -> impl Iterator<Item = (&ObjectId, &String)> {
        self.sets.iter().flat_map(|(c, set)| set.iter().map(move |x| (c, x)))
    }

    pub fn total_size(&self) -> usize {
        self.sets.values().map(|s| s.len()).sum()
    }

    pub fn objects(&self) -> impl Iterator<Item = &ObjectId> {
        self.sets.keys()
    }
}

/// hom(-, c): elements over d are the morphisms d → c, actions precompose.
pub fn yoneda(cat: &Category, c: &str) -> Result<Presheaf, SheafError> {
    if !cat.has_object(c) {
        return Err(SheafError::UnknownObject(c.to_string()));
    }
    let sets: BTreeMap<ObjectId, BTreeSet<String>> = cat
        .objects()
        .iter()
        .map(|d| (d.clone(), cat.hom(d, c).into_iter().collect()))
        .collect();
    let actions: BTreeMap<MorphId, BTreeMap<String, String>> = cat
        .morphisms()
        .map(|f| {
            let map = sets[cat.cod(f)]
                .iter()
                .map(|g| {
                    let composed = cat.compose(g, f).expect("g precomposable with f").clone();
                    (g.clone(), composed)
                })
                .collect();
            (f.clone(), map)
        })
        .collect();
    Ok(Presheaf { sets, actions })
}

/// Δ L: the same set over every object, all actions the identity.
pub fn constant_presheaf(cat: &Category, values: &BTreeSet<String>) -> Presheaf {
    let sets: BTreeMap<ObjectId, BTreeSet<String>> = cat
        .objects()
        .iter()
        .map(|c| (c.clone(), values.clone()))
        .collect();
    let actions = cat
        .morphisms()
        .map(|f| {
            (
                f.clone(),
                values.iter().map(|x| (x.clone(), x.clone())).collect(),
            )
        })
        .collect();
    Presheaf { sets, actions }
}

/// A componentwise map between presheaves whose squares commute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    pub source: Presheaf,
    pub target: Presheaf,
    pub components: BTreeMap<ObjectId, BTreeMap<String, String>>,
}

impl NatTrans {
    /// Validates totality and every naturality square.
    pub fn new(
        cat: &Category,
        source: Presheaf,
        target: Presheaf,
        components: BTreeMap<ObjectId, BTreeMap<String, String>>,
    ) -> Result<NatTrans, SheafError> {
        for c in components.keys() {
            if !cat.has_object(c) {
                return Err(SheafError::UnknownObject(c.clone()));
            }
        }
        let mut full = components;
        for c in cat.objects() {
            let map = full.entry(c.clone()).or_default();
            for x in source.set(c) {
                match map.get(x) {
                    None => {
                        return Err(SheafError::Naturality(format!(
                            "no component value at `{c}` for `{x}`"
                        )))
                    }
                    Some(y) if !target.set(c).contains(y) => {
                        return Err(SheafError::Naturality(format!(
                            "component at `{c}` sends `{x}` outside the target"
                        )))
                    }
                    _ => {}
                }
            }
            for x in map.keys() {
                if !source.set(c).contains(x) {
                    return Err(SheafError::Naturality(format!(
                        "component at `{c}` defined on foreign element `{x}`"
                    )));
                }
            }
        }
        let nt = NatTrans {
            source,
            target,
            components: full,
        };
        for f in cat.morphisms() {
            let (d, c) = (cat.dom(f), cat.cod(f));
            for x in nt.source.set(c) {
                let around = nt.target.apply(f, &nt.components[c][x]);
                let across = &nt.components[d][nt.source.apply(f, x)];
                if around != across {
                    return Err(SheafError::Naturality(format!(
                        "square for `{f}` fails at `{x}`: {around} vs {across}"
                    )));
                }
            }
        }
        Ok(nt)
    }

    pub fn identity(f: &Presheaf) -> NatTrans {
        NatTrans {
            source: f.clone(),
            target: f.clone(),
            components: f
                .sets
                .iter()
                .map(|(c, set)| (c.clone(), set.iter().map(|x| (x.clone(), x.clone())).collect()))
                .collect(),
        }
    }

    /// second ∘ first.
    pub fn compose(cat: &Category, second: &NatTrans, first: &NatTrans) -> Result<NatTrans, SheafError> {
        if first.target != second.source {
            return Err(SheafError::InvalidInput(
                "transformations are not composable".to_string(),
            ));
        }
        let components = first
            .components
            .iter()
            .map(|(c, map)| {
                (
                    c.clone(),
                    map.iter()
                        .map(|(x, y)| (x.clone(), second.components[c][y].clone()))
                        .collect(),
                )
            })
            .collect();
        NatTrans::new(cat, first.source.clone(), second.target.clone(), components)
    }

    /// Objectwise bijectivity; for a natural transformation this makes the
    /// inverse natural as well, so it is exactly invertibility.
    pub fn is_natural_iso(&self) -> bool {
        self.components.iter().all(|(c, map)| {
            let values: BTreeSet<&String> = map.values().collect();
            values.len() == map.len() && values.len() == self.target.set(c).len()
        })
    }

    pub fn apply<'a>(&'a self, c: &str, x: &str) -> &'a String {
        &self.components[c][x]
    }
}

/// An object-indexed family of subsets closed under the parent's actions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Subpresheaf {
    pub parent: Presheaf,
    pub subsets: BTreeMap<ObjectId, BTreeSet<String>>,
}

impl Subpresheaf {
    pub fn new(
        cat: &Category,
        parent: &Presheaf,
        subsets: BTreeMap<ObjectId, BTreeSet<String>>,
    ) -> Result<Subpresheaf, SheafError> {
        let mut full = subsets;
        for c in full.keys() {
            if !cat.has_object(c) {
                return Err(SheafError::UnknownObject(c.clone()));
            }
        }
        for c in cat.objects() {
            full.entry(c.clone()).or_default();
        }
        for (c, subset) in &full {
            for x in subset {
                if !parent.set(c).contains(x) {
                    return Err(SheafError::UnknownElement(format!("{x} over {c}")));
                }
            }
        }
        for f in cat.morphisms() {
            for x in &full[cat.cod(f)] {
                if !full[cat.dom(f)].contains(parent.apply(f, x)) {
                    return Err(SheafError::Presheaf(format!(
                        "subsets are not closed under the action of `{f}` at `{x}`"
                    )));
                }
            }
        }
        Ok(Subpresheaf {
            parent: parent.clone(),
            subsets: full,
        })
    }

    pub fn empty(cat: &Category, parent: &Presheaf) -> Subpresheaf {
        Subpresheaf {
            parent: parent.clone(),
            subsets: cat.objects().iter().map(|c| (c.clone(), BTreeSet::new())).collect(),
        }
    }

    pub fn full(parent: &Presheaf) -> Subpresheaf {
        Subpresheaf {
            parent: parent.clone(),
            subsets: parent.sets.clone(),
        }
    }

    pub fn contains(&self, c: &str, x: &str) -> bool {
        self.subsets.get(c).is_some_and(|s| s.contains(x))
    }

    pub fn le(&self, other: &Subpresheaf) -> bool {
        self.subsets
            .iter()
            .all(|(c, s)| s.is_subset(other.subsets.get(c).map_or(&BTreeSet::new(), |v| v)))
    }

    pub fn is_full(&self) -> bool {
        self.subsets == self.parent.sets
    }

    pub fn total_size(&self) -> usize {
        self.subsets.values().map(|s| s.len()).sum()
    }

    /// The restriction of the parent to the subsets, as a presheaf.
    pub fn as_presheaf(&self, cat: &Category) -> Presheaf {
        let actions = cat
            .morphisms()
            .map(|f| {
                let map = self.subsets[cat.cod(f)]
                    .iter()
                    .map(|x| (x.clone(), self.parent.apply(f, x).clone()))
                    .collect();
                (f.clone(), map)
            })
            .collect();
        Presheaf {
            sets: self.subsets.clone(),
            actions,
        }
    }
}

/// On-disk form of a site: a category file plus a topology file, embedded.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawSite {
    pub category: RawCategory,
    pub topology: RawTopology,
}

/// A category together with a verified Grothendieck topology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Site {
    pub category: Category,
    pub topology: Topology,
}

impl Site {
    pub fn new(category: Category, topology: Topology) -> Result<Site, SheafError> {
        is_topology(&category, &topology)
            .map_err(|v| SheafError::InvalidInput(format!("not a topology: {v}")))?;
        Ok(Site { category, topology })
    }

    pub fn from_raw(raw: &RawSite) -> Result<Site, SheafError> {
        let category = validate_category(&raw.category).map_err(|violations| {
            SheafError::InvalidInput(format!(
                "category laws fail: {}",
                violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            ))
        })?;
        let topology = Topology::from_raw(&category, &raw.topology)
            .map_err(|e| SheafError::InvalidInput(e.to_string()))?;
        Site::new(category, topology)
    }

    pub fn to_raw(&self) -> RawSite {
        RawSite {
            category: self.category.to_raw(),
            topology: self.topology.to_raw(),
        }
    }

    /// The category with its atomic topology.
    pub fn atomic(cat: &Category) -> Site {
        Site {
            category: cat.clone(),
            topology: crate::sitecore::atomic_topology(cat),
        }
    }

    /// The category with only maximal sieves covering.
    pub fn trivial(cat: &Category) -> Site {
        Site {
            category: cat.clone(),
            topology: Topology::trivial(cat),
        }
    }
}

/// All families (x_f ∈ F(dom f))_{f ∈ S} with x_{f∘g} = F(g)(x_f), in
/// lexicographic order of assignments along the sorted arrows of the sieve.
pub fn matching_families(
    cat: &Category,
    f: &Presheaf,
    sieve: &Sieve,
) -> Vec<BTreeMap<MorphId, String>> {
    let arrows: Vec<&MorphId> = sieve.arrows().iter().collect();
    let index: BTreeMap<&str, usize> = arrows.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    // Compatibility constraints p∘g = q within the sieve, checked as soon as
    // both endpoints are assigned.
    let mut constraints: Vec<(usize, MorphId, usize)> = Vec::new();
    for (pi, p) in arrows.iter().enumerate() {
        for g in cat.arrows_into(cat.dom(p)) {
            let q = cat.compose(p, &g).expect("composable");
            let qi = index[q.as_str()];
            constraints.push((pi, g, qi));
        }
    }
    let mut found = Vec::new();
    let mut chosen: Vec<Option<String>> = vec![None; arrows.len()];
    fn recurse(
        cat: &Category,
        f: &Presheaf,
        arrows: &[&MorphId],
        constraints: &[(usize, MorphId, usize)],
        chosen: &mut Vec<Option<String>>,
        depth: usize,
        found: &mut Vec<BTreeMap<MorphId, String>>,
    ) {
        if depth == arrows.len() {
            found.push(
                arrows
                    .iter()
                    .zip(chosen.iter())
                    .map(|(a, x)| ((*a).clone(), x.clone().expect("assigned")))
                    .collect(),
            );
            return;
        }
        let candidates: Vec<String> = f.set(cat.dom(arrows[depth])).iter().cloned().collect();
        for x in candidates {
            chosen[depth] = Some(x);
            let ok = constraints.iter().all(|(pi, g, qi)| {
                match (&chosen[*pi], &chosen[*qi]) {
                    (Some(xp), Some(xq)) => f.apply(g, xp) == xq,
                    _ => true,
                }
            });
            if ok {
                recurse(cat, f, arrows, constraints, chosen, depth + 1, found);
            }
        }
        chosen[depth] = None;
    }
    recurse(cat, f, &arrows, &constraints, &mut chosen, 0, &mut found);
    found
}

/// A covering sieve and matching family with no unique amalgamation.
#[derive(Debug, Clone)]
pub struct SheafFailure {
    pub object: ObjectId,
    pub sieve: Sieve,
    pub family: BTreeMap<MorphId, String>,
    pub amalgamations: Vec<String>,
}

/// First failure of the sheaf condition in deterministic order, if any.
pub fn sheaf_witness(site: &Site, f: &Presheaf) -> Option<SheafFailure> {
    let cat = &site.category;
    for c in cat.objects() {
        for sieve in site.topology.covers(c) {
            for family in matching_families(cat, f, sieve) {
                let amalgamations: Vec<String> = f
                    .set(c)
                    .iter()
                    .filter(|y| sieve.arrows().iter().all(|a| f.apply(a, y) == &family[a]))
                    .cloned()
                    .collect();
                if amalgamations.len() != 1 {
                    return Some(SheafFailure {
                        object: c.clone(),
                        sieve: sieve.clone(),
                        family,
                        amalgamations,
                    });
                }
            }
        }
    }
    None
}

pub fn is_sheaf(site: &Site, f: &Presheaf) -> bool {
    sheaf_witness(site, f).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn raw_presheaf(
        sets: &[(&str, &[&str])],
        actions: &[(&str, &[(&str, &str)])],
    ) -> RawPresheaf {
        RawPresheaf {
            sets: sets
                .iter()
                .map(|(c, elems)| (c.to_string(), elems.iter().map(|e| e.to_string()).collect()))
                .collect(),
            actions: actions
                .iter()
                .map(|(f, pairs)| {
                    (
                        f.to_string(),
                        pairs.iter().map(|(x, y)| (x.to_string(), y.to_string())).collect(),
                    )
                })
                .collect(),
        }
    }

    #[test]
    fn yoneda_shapes() {
        let corpus = corpus::builtin();
        let terminal = corpus.category("terminal");
        let y = yoneda(terminal, "*").unwrap();
        assert_eq!(y.set("*").len(), 1);

        let arrow = corpus.category("arrow");
        let y1 = yoneda(arrow, "1").unwrap();
        assert_eq!(y1.set("1"), &BTreeSet::from(["id1".to_string()]));
        assert_eq!(y1.set("0"), &BTreeSet::from(["u".to_string()]));
        assert_eq!(y1.apply("u", "id1"), "u");

        let z2 = corpus.category("z2");
        let yg = yoneda(z2, "*").unwrap();
        assert_eq!(yg.set("*").len(), 2);
        assert_eq!(yg.apply("g", "e"), "g");
        assert_eq!(yg.apply("g", "g"), "e");

        assert!(matches!(yoneda(arrow, "9"), Err(SheafError::UnknownObject(_))));
    }

    #[test]
    fn presheaf_validation_catches_broken_functoriality() {
        let corpus = corpus::builtin();
        let z3 = corpus.category("z3");
        // g acts as a transposition; then g∘g = g2 must act as its square,
        // but the file claims g2 acts as the identity's partner map.
        let raw = raw_presheaf(
            &[("*", &["a", "b"])],
            &[("g", &[("a", "b"), ("b", "a")]), ("g2", &[("a", "b"), ("b", "a")])],
        );
        let err = Presheaf::from_raw(z3, &raw).unwrap_err();
        assert!(matches!(err, SheafError::Presheaf(_)));
        let fixed = raw_presheaf(
            &[("*", &["a", "b"])],
            &[("g", &[("a", "b"), ("b", "a")]), ("g2", &[("a", "a"), ("b", "b")])],
        );
        // Not functorial either: g2∘g = e would have to swap. A consistent
        // assignment needs g to act with order dividing 3.
        assert!(Presheaf::from_raw(z3, &fixed).is_err());
        let honest = raw_presheaf(&[("*", &["a", "b"])], &[]);
        assert!(matches!(
            Presheaf::from_raw(z3, &honest),
            Err(SheafError::Presheaf(msg)) if msg.contains("no action")
        ));
    }

    #[test]
    fn raw_round_trip() {
        let corpus = corpus::builtin();
        let arrow = corpus.category("arrow");
        let raw = raw_presheaf(&[("1", &["p", "q"]), ("0", &["r"])], &[("u", &[("p", "r"), ("q", "r")])]);
        let p = Presheaf::from_raw(arrow, &raw).unwrap();
        assert_eq!(p.to_raw(arrow), raw);
    }

    #[test]
    fn constant_presheaves_and_trivial_topology() {
        let corpus = corpus::builtin();
        for (_, cat) in &corpus.categories {
            let site = Site::trivial(cat);
            let two: BTreeSet<String> = ["0".to_string(), "1".to_string()].into();
            assert!(is_sheaf(&site, &constant_presheaf(cat, &two)));
            assert!(is_sheaf(&site, &constant_presheaf(cat, &BTreeSet::new())));
            let y_each = cat
                .objects()
                .iter()
                .map(|c| yoneda(cat, c).unwrap())
                .all(|y| is_sheaf(&site, &y));
            assert!(y_each);
        }
    }

    #[test]
    fn constant_two_over_arrow_atomic_site_is_a_sheaf() {
        let corpus = corpus::builtin();
        let arrow = corpus.category("arrow");
        let site = Site::atomic(arrow);
        let two: BTreeSet<String> = ["0".to_string(), "1".to_string()].into();
        assert!(is_sheaf(&site, &constant_presheaf(arrow, &two)));
    }

    #[test]
    fn empty_cover_rejects_constant_two() {
        let corpus = corpus::builtin();
        let v = corpus.category("v");
        let site = Site::atomic(v);
        let two: BTreeSet<String> = ["0".to_string(), "1".to_string()].into();
        let witness = sheaf_witness(&site, &constant_presheaf(v, &two)).unwrap();
        // The empty family over an empty covering sieve has two amalgamations.
        assert!(witness.sieve.is_empty());
        assert_eq!(witness.amalgamations.len(), 2);
    }

    #[test]
    fn group_actions_are_sheaves_for_the_atomic_topology() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let site = Site::atomic(z2);
        let regular = Presheaf::from_raw(
            z2,
            &raw_presheaf(&[("*", &["a", "b"])], &[("g", &[("a", "b"), ("b", "a")])]),
        )
        .unwrap();
        assert!(is_sheaf(&site, &regular));
        let two_fixed = Presheaf::from_raw(
            z2,
            &raw_presheaf(&[("*", &["a", "b"])], &[("g", &[("a", "a"), ("b", "b")])]),
        )
        .unwrap();
        assert!(is_sheaf(&site, &two_fixed));
    }

    #[test]
    fn matching_family_counts_on_the_arrow_site() {
        let corpus = corpus::builtin();
        let arrow = corpus.category("arrow");
        let f = Presheaf::from_raw(
            arrow,
            &raw_presheaf(&[("1", &["p", "q"]), ("0", &["r"])], &[("u", &[("p", "r"), ("q", "r")])]),
        )
        .unwrap();
        let single = Sieve::generated(arrow, "1", &["u".to_string()]).unwrap();
        assert_eq!(matching_families(arrow, &f, &single).len(), 1);
        let max = Sieve::maximal(arrow, "1");
        assert_eq!(matching_families(arrow, &f, &max).len(), 2);
        assert_eq!(matching_families(arrow, &f, &Sieve::empty("1")).len(), 1);
    }

    #[test]
    fn naturality_is_enforced() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let regular = Presheaf::from_raw(
            z2,
            &raw_presheaf(&[("*", &["a", "b"])], &[("g", &[("a", "b"), ("b", "a")])]),
        )
        .unwrap();
        let swap = BTreeMap::from([(
            "*".to_string(),
            BTreeMap::from([("a".to_string(), "b".to_string()), ("b".to_string(), "a".to_string())]),
        )]);
        let nt = NatTrans::new(z2, regular.clone(), regular.clone(), swap).unwrap();
        assert!(nt.is_natural_iso());
        let collapse = BTreeMap::from([(
            "*".to_string(),
            BTreeMap::from([("a".to_string(), "a".to_string()), ("b".to_string(), "a".to_string())]),
        )]);
        assert!(matches!(
            NatTrans::new(z2, regular.clone(), regular, collapse),
            Err(SheafError::Naturality(_))
        ));
    }

    #[test]
    fn subpresheaf_closure_under_actions_is_enforced() {
        let corpus = corpus::builtin();
        let arrow = corpus.category("arrow");
        let y1 = yoneda(arrow, "1").unwrap();
        let good = Subpresheaf::new(
            arrow,
            &y1,
            BTreeMap::from([("0".to_string(), BTreeSet::from(["u".to_string()]))]),
        )
        .unwrap();
        assert!(good.contains("0", "u"));
        assert!(!good.is_full());
        let bad = Subpresheaf::new(
            arrow,
            &y1,
            BTreeMap::from([("1".to_string(), BTreeSet::from(["id1".to_string()]))]),
        );
        assert!(matches!(bad, Err(SheafError::Presheaf(_))));
    }

    #[test]
    fn site_construction_rejects_non_topologies() {
        let corpus = corpus::builtin();
        let v = corpus.category("v");
        let raw = RawSite {
            category: corpus::v_raw(),
            topology: RawTopology {
                covers: BTreeMap::from([
                    ("x".to_string(), vec![vec!["idx".to_string()]]),
                    ("y".to_string(), vec![vec!["idy".to_string()], vec!["f".to_string()]]),
                    ("z".to_string(), vec![vec!["idz".to_string()]]),
                ]),
            },
        };
        assert!(matches!(Site::from_raw(&raw), Err(SheafError::InvalidInput(_))));
        let atomic = Site::atomic(v);
        assert!(Site::new(atomic.category.clone(), atomic.topology.clone()).is_ok());
    }
}
