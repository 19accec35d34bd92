//! Sieves and Grothendieck topologies on finite categories.
//!
//! Sieves are stored as explicit arrow sets closed under precomposition.
//! Topologies are finite families of covering sieves per object; the three
//! axioms (maximality, stability under pullback, transitivity) are checked
//! exhaustively, and [`saturate`] computes the least topology containing a
//! set of generators by alternating full stability and transitivity passes
//! over the finite powerset until nothing changes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{self, Category, MorphId, ObjectId};

/// On-disk form of a topology or of a generator family. Each inner list is a
/// set of generating arrows into the object; lists are closed into sieves on
/// load. Emitted topologies are fully expanded, arrows sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTopology {
    pub covers: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Debug, Error)]
pub enum SitecoreError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("arrow `{arrow}` has codomain `{actual}`, expected sieve base `{base}`")]
    BaseMismatch {
        base: ObjectId,
        arrow: MorphId,
        actual: ObjectId,
    },
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("`{0}` is not a full subcategory: {1}")]
    NotFullSubcategory(String, String),
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),
}

/// A set of arrows into `base`, closed under precomposition with arbitrary
/// morphisms of the category.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Sieve {
    base: ObjectId,
    arrows: BTreeSet<MorphId>,
}

impl Sieve {
    pub fn empty(base: &str) -> Sieve {
        Sieve {
            base: base.to_string(),
            arrows: BTreeSet::new(),
        }
    }

    /// The maximal sieve: every arrow into `base`.
    pub fn maximal(cat: &Category, base: &str) -> Sieve {
        Sieve {
            base: base.to_string(),
            arrows: cat.arrows_into(base).into_iter().collect(),
        }
    }

    /// Closes a generator set under precomposition.
    pub fn generated(cat: &Category, base: &str, generators: &[MorphId]) -> Result<Sieve, SitecoreError> {
        if !cat.has_object(base) {
            return Err(SitecoreError::UnknownObject(base.to_string()));
        }
        let mut arrows: BTreeSet<MorphId> = BTreeSet::new();
        let mut frontier: Vec<MorphId> = Vec::new();
        for g in generators {
            if !cat.has_morphism(g) {
                return Err(SitecoreError::UnknownMorphism(g.clone()));
            }
            if cat.cod(g) != base {
                return Err(SitecoreError::BaseMismatch {
                    base: base.to_string(),
                    arrow: g.clone(),
                    actual: cat.cod(g).clone(),
                });
            }
            if arrows.insert(g.clone()) {
                frontier.push(g.clone());
            }
        }
        while let Some(f) = frontier.pop() {
            for h in cat.arrows_into(cat.dom(&f)) {
                let composed = cat.compose(&f, &h).expect("composable by construction").clone();
                if arrows.insert(composed.clone()) {
                    frontier.push(composed);
                }
            }
        }
        Ok(Sieve {
            base: base.to_string(),
            arrows,
        })
    }

    pub fn base(&self) -> &ObjectId {
        &self.base
    }

    pub fn arrows(&self) -> &BTreeSet<MorphId> {
        &self.arrows
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn contains(&self, f: &str) -> bool {
        self.arrows.contains(f)
    }

    pub fn is_subset(&self, other: &Sieve) -> bool {
        self.base == other.base && self.arrows.is_subset(&other.arrows)
    }

    pub fn intersection(&self, other: &Sieve) -> Sieve {
        Sieve {
            base: self.base.clone(),
            arrows: self.arrows.intersection(&other.arrows).cloned().collect(),
        }
    }
}

impl fmt::Display for Sieve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}} on {}", self.arrows.iter().cloned().collect::<Vec<_>>().join(", "), self.base)
    }
}

/// An assignment of covering sieves to every object.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Topology {
    covers: BTreeMap<ObjectId, BTreeSet<Sieve>>,
}

impl Topology {
    /// The topology whose only covers are the maximal sieves.
    pub fn trivial(cat: &Category) -> Topology {
        Topology {
            covers: cat
                .objects()
                .iter()
                .map(|c| (c.clone(), BTreeSet::from([Sieve::maximal(cat, c)])))
                .collect(),
        }
    }

    pub fn covers(&self, c: &str) -> impl Iterator<Item = &Sieve> {
        self.covers.get(c).into_iter().flatten()
    }

    pub fn cover_count(&self, c: &str) -> usize {
        self.covers.get(c).map_or(0, |s| s.len())
    }

    pub fn objects(&self) -> impl Iterator<Item = &ObjectId> {
        self.covers.keys()
    }

    pub fn is_covering(&self, s: &Sieve) -> bool {
        self.covers.get(s.base()).is_some_and(|set| set.contains(s))
    }

    pub fn insert(&mut self, s: Sieve) -> bool {
        self.covers.entry(s.base().clone()).or_default().insert(s)
    }

    /// Pointwise containment of cover families.
    pub fn leq(&self, other: &Topology) -> bool {
        self.covers.iter().all(|(c, sieves)| {
            sieves
                .iter()
                .all(|s| other.covers.get(c).is_some_and(|o| o.contains(s)))
        })
    }

    /// Objects covered by the empty sieve. A topology degenerate at an object
    /// forces every sheaf to be a singleton there; degenerate at every object
    /// means the sheaf topos is trivial.
    pub fn empty_covered_objects(&self) -> Vec<ObjectId> {
        self.covers
            .iter()
            .filter(|(_, sieves)| sieves.iter().any(|s| s.is_empty()))
            .map(|(c, _)| c.clone())
            .collect()
    }

    pub fn all_sieves(&self) -> Vec<Sieve> {
        self.covers.values().flatten().cloned().collect()
    }

    /// Reads a cover file, closing each generator list into a sieve. Objects
    /// missing from the file get an empty cover family.
    pub fn from_raw(cat: &Category, raw: &RawTopology) -> Result<Topology, SitecoreError> {
        let mut covers: BTreeMap<ObjectId, BTreeSet<Sieve>> = cat
            .objects()
            .iter()
            .map(|c| (c.clone(), BTreeSet::new()))
            .collect();
        for (obj, families) in &raw.covers {
            if !cat.has_object(obj) {
                return Err(SitecoreError::UnknownObject(obj.clone()));
            }
            for gens in families {
                let sieve = Sieve::generated(cat, obj, gens)?;
                covers.get_mut(obj).expect("object present").insert(sieve);
            }
        }
        Ok(Topology { covers })
    }

    pub fn to_raw(&self) -> RawTopology {
        RawTopology {
            covers: self
                .covers
                .iter()
                .map(|(c, sieves)| {
                    (
                        c.clone(),
                        sieves
                            .iter()
                            .map(|s| s.arrows().iter().cloned().collect())
                            .collect(),
                    )
                })
                .collect(),
        }
    }
}

/// A broken topology axiom together with the witnessing data.
#[derive(Debug, Clone)]
pub enum TopologyViolation {
    UnknownObject(ObjectId),
    ForeignSieve { object: ObjectId, detail: String },
    Maximality { object: ObjectId },
    Stability { sieve: Sieve, arrow: MorphId },
    Transitivity { evidence: Sieve, forced: Sieve },
}

impl fmt::Display for TopologyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopologyViolation::UnknownObject(c) => write!(f, "covers assigned to unknown object `{c}`"),
            TopologyViolation::ForeignSieve { object, detail } => {
                write!(f, "cover family of `{object}` contains a non-sieve: {detail}")
            }
            TopologyViolation::Maximality { object } => {
                write!(f, "maximal sieve on `{object}` is not covering")
            }
            TopologyViolation::Stability { sieve, arrow } => {
                write!(f, "pullback of covering sieve {sieve} along `{arrow}` is not covering")
            }
            TopologyViolation::Transitivity { evidence, forced } => {
                write!(f, "sieve {forced} is locally covering via {evidence} but not covering")
            }
        }
    }
}

/// All sieves on `c`, deterministically ordered. Every sieve is a union of
/// principal sieves, so the family is generated by closing the singleton
/// `{empty}` under union with each principal sieve.
pub fn enumerate_sieves(cat: &Category, c: &str) -> Result<Vec<Sieve>, SitecoreError> {
    if !cat.has_object(c) {
        return Err(SitecoreError::UnknownObject(c.to_string()));
    }
    let principals: Vec<Sieve> = cat
        .arrows_into(c)
        .iter()
        .map(|a| Sieve::generated(cat, c, std::slice::from_ref(a)).expect("arrow into c"))
        .collect();
    let mut sieves: BTreeSet<Sieve> = BTreeSet::from([Sieve::empty(c)]);
    loop {
        let mut fresh: Vec<Sieve> = Vec::new();
        for s in &sieves {
            for p in &principals {
                let mut union = s.clone();
                union.arrows.extend(p.arrows.iter().cloned());
                if !sieves.contains(&union) {
                    fresh.push(union);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        sieves.extend(fresh);
    }
    Ok(sieves.into_iter().collect())
}

/// `h^*(s)`: the arrows whose postcomposition with `h` lands in `s`. Requires
/// `cod(h) = base(s)`; the result is a sieve on `dom(h)`.
pub fn pullback_sieve(cat: &Category, s: &Sieve, h: &str) -> Result<Sieve, SitecoreError> {
    if !cat.has_morphism(h) {
        return Err(SitecoreError::UnknownMorphism(h.to_string()));
    }
    if cat.cod(h) != s.base() {
        return Err(SitecoreError::BaseMismatch {
            base: s.base().clone(),
            arrow: h.to_string(),
            actual: cat.cod(h).clone(),
        });
    }
    let d = cat.dom(h);
    let arrows = cat
        .arrows_into(d)
        .into_iter()
        .filter(|g| s.contains(cat.compose(h, g).expect("composable")))
        .collect();
    Ok(Sieve {
        base: d.clone(),
        arrows,
    })
}

/// Checks the three topology axioms, returning the first violation found in
/// deterministic order.
pub fn is_topology(cat: &Category, top: &Topology) -> Result<(), TopologyViolation> {
    for c in top.objects() {
        if !cat.has_object(c) {
            return Err(TopologyViolation::UnknownObject(c.clone()));
        }
    }
    for c in cat.objects() {
        for s in top.covers(c) {
            if s.base() != c {
                return Err(TopologyViolation::ForeignSieve {
                    object: c.clone(),
                    detail: format!("sieve based at `{}`", s.base()),
                });
            }
            for a in s.arrows() {
                if !cat.has_morphism(a) || cat.cod(a) != c {
                    return Err(TopologyViolation::ForeignSieve {
                        object: c.clone(),
                        detail: format!("arrow `{a}` does not target `{c}`"),
                    });
                }
            }
            let closed = Sieve::generated(cat, c, &s.arrows().iter().cloned().collect::<Vec<_>>())
                .expect("arrows verified");
            if &closed != s {
                return Err(TopologyViolation::ForeignSieve {
                    object: c.clone(),
                    detail: format!("{s} is not closed under precomposition"),
                });
            }
        }
    }
    for c in cat.objects() {
        let max = Sieve::maximal(cat, c);
        if !top.is_covering(&max) {
            return Err(TopologyViolation::Maximality { object: c.clone() });
        }
    }
    for c in cat.objects() {
        for s in top.covers(c) {
            for h in cat.arrows_into(c) {
                let pulled = pullback_sieve(cat, s, &h).expect("arrow into c");
                if !top.is_covering(&pulled) {
                    return Err(TopologyViolation::Stability {
                        sieve: s.clone(),
                        arrow: h.clone(),
                    });
                }
            }
        }
    }
    for c in cat.objects() {
        let all = enumerate_sieves(cat, c).expect("object exists");
        for r in &all {
            if top.is_covering(r) {
                continue;
            }
            for s in top.covers(c) {
                let locally = s.arrows().iter().all(|f| {
                    let pulled = pullback_sieve(cat, r, f).expect("arrow into c");
                    top.is_covering(&pulled)
                });
                if locally {
                    return Err(TopologyViolation::Transitivity {
                        evidence: s.clone(),
                        forced: r.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Least topology whose covers include `generators`, computed as a fixpoint:
/// start from the maximal sieves plus the generators, then alternate a full
/// stability pass (add every pullback of a cover) and a full transitivity
/// pass (add every sieve that is locally covering relative to a cover) until
/// neither adds anything.
pub fn saturate(cat: &Category, generators: &[Sieve]) -> Topology {
    let all_sieves: BTreeMap<ObjectId, Vec<Sieve>> = cat
        .objects()
        .iter()
        .map(|c| (c.clone(), enumerate_sieves(cat, c).expect("object exists")))
        .collect();
    let mut top = Topology::trivial(cat);
    for s in generators {
        assert!(cat.has_object(s.base()), "generator based at unknown object");
        top.insert(s.clone());
    }
    loop {
        let mut changed = false;
        // Stability pass.
        loop {
            let mut fresh: Vec<Sieve> = Vec::new();
            for c in cat.objects() {
                for s in top.covers(c) {
                    for h in cat.arrows_into(c) {
                        let pulled = pullback_sieve(cat, s, &h).expect("arrow into c");
                        if !top.is_covering(&pulled) {
                            fresh.push(pulled);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            changed = true;
            for s in fresh {
                top.insert(s);
            }
        }
        // Transitivity pass.
        loop {
            let mut fresh: Vec<Sieve> = Vec::new();
            for c in cat.objects() {
                for r in &all_sieves[c] {
                    if top.is_covering(r) {
                        continue;
                    }
                    let forced = top.covers(c).any(|s| {
                        s.arrows().iter().all(|f| {
                            let pulled = pullback_sieve(cat, r, f).expect("arrow into c");
                            top.is_covering(&pulled)
                        })
                    });
                    if forced {
                        fresh.push(r.clone());
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            changed = true;
            for s in fresh {
                top.insert(s);
            }
        }
        if !changed {
            break;
        }
    }
    top
}

/// The least topology in which every non-empty sieve covers.
pub fn atomic_topology(cat: &Category) -> Topology {
    let mut generators = Vec::new();
    for c in cat.objects() {
        for s in enumerate_sieves(cat, c).expect("object exists") {
            if !s.is_empty() {
                generators.push(s);
            }
        }
    }
    saturate(cat, &generators)
}

fn check_full_subcategory(cat: &Category, sub: &Category) -> Result<(), SitecoreError> {
    let fail = |detail: String| {
        SitecoreError::NotFullSubcategory(
            format!("[{}]", sub.objects().join(", ")),
            detail,
        )
    };
    for obj in sub.objects() {
        if !cat.has_object(obj) {
            return Err(fail(format!("object `{obj}` is not in the ambient category")));
        }
    }
    for a in sub.objects() {
        for b in sub.objects() {
            if cat.hom(a, b) != sub.hom(a, b) {
                return Err(fail(format!("hom({a}, {b}) differs from the ambient category")));
            }
        }
    }
    for obj in sub.objects() {
        if sub.identity(obj) != cat.identity(obj) {
            return Err(fail(format!("identity of `{obj}` differs")));
        }
    }
    for g in sub.morphisms() {
        for f in sub.morphisms() {
            if cat.compose(g, f) != sub.compose(g, f) {
                return Err(fail(format!("composition of ({g}, {f}) differs")));
            }
        }
    }
    Ok(())
}

/// Topology induced on a full subcategory: a sieve of the subcategory covers
/// exactly when the sieve it generates in the ambient category is covering.
pub fn induced_topology(cat: &Category, top: &Topology, sub: &Category) -> Result<Topology, SitecoreError> {
    check_full_subcategory(cat, sub)?;
    let mut covers: BTreeMap<ObjectId, BTreeSet<Sieve>> = BTreeMap::new();
    for c in sub.objects() {
        let mut family = BTreeSet::new();
        for r in enumerate_sieves(sub, c).expect("object exists") {
            let gens: Vec<MorphId> = r.arrows().iter().cloned().collect();
            let generated = Sieve::generated(cat, c, &gens).expect("sub-arrows are ambient arrows");
            if top.is_covering(&generated) {
                family.insert(r);
            }
        }
        covers.insert(c.clone(), family);
    }
    Ok(Topology { covers })
}

/// Cuts a category down to its dense part for the atomic topology: objects
/// not covered by the empty sieve, as a full subcategory, carrying the
/// induced topology.
pub fn reduce_to_dense(cat: &Category) -> (Category, Topology) {
    let j = atomic_topology(cat);
    let degenerate: BTreeSet<ObjectId> = j.empty_covered_objects().into_iter().collect();
    let keep: BTreeSet<ObjectId> = cat
        .objects()
        .iter()
        .filter(|c| !degenerate.contains(*c))
        .cloned()
        .collect();
    let sub = fincat::full_subcategory(cat, &keep).expect("objects of cat");
    let induced = induced_topology(cat, &j, &sub).expect("full by construction");
    (sub, induced)
}

/// All object sets closed in both directions along arrows: for every arrow,
/// the source lies in the set exactly when the target does. Checked directly
/// against every object subset; equivalently these are the unions of
/// connected components.
pub fn enumerate_ideals(cat: &Category) -> Vec<BTreeSet<ObjectId>> {
    let objects = cat.objects();
    let n = objects.len();
    assert!(n <= 24, "ideal enumeration is exponential in object count");
    let mut ideals = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let subset: BTreeSet<ObjectId> = objects
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, o)| o.clone())
            .collect();
        let closed = cat.morphisms().all(|f| {
            subset.contains(cat.dom(f)) == subset.contains(cat.cod(f))
        });
        if closed {
            ideals.push(subset);
        }
    }
    ideals.sort();
    ideals
}

/// Non-empty and zig-zag connected: two arrows of the sieve are adjacent
/// when one factors through the other over the base.
pub fn sieve_is_connected(cat: &Category, s: &Sieve) -> bool {
    if s.is_empty() {
        return false;
    }
    let arrows: Vec<&MorphId> = s.arrows().iter().collect();
    let index: BTreeMap<&str, usize> = arrows.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    let mut uf = fincat::UnionFind::new(arrows.len());
    for (i, f) in arrows.iter().enumerate() {
        for m in cat.arrows_into(cat.dom(f)) {
            let composed = cat.compose(f, &m).expect("composable");
            if let Some(&j) = index.get(composed.as_str()) {
                uf.union(i, j);
            }
        }
    }
    let root = uf.find(0);
    (1..arrows.len()).all(|i| uf.find(i) == root)
}

/// Every topology on the category, by filtering all cover assignments that
/// contain the maximal sieves. Exponential; intended as the ground-truth
/// oracle for [`saturate`] on small categories.
pub fn enumerate_topologies(cat: &Category) -> Result<Vec<Topology>, SitecoreError> {
    let per_object: Vec<(ObjectId, Vec<Sieve>)> = cat
        .objects()
        .iter()
        .map(|c| {
            let max = Sieve::maximal(cat, c);
            let optional: Vec<Sieve> = enumerate_sieves(cat, c)
                .expect("object exists")
                .into_iter()
                .filter(|s| *s != max)
                .collect();
            (c.clone(), optional)
        })
        .collect();
    let mut total: u64 = 1;
    for (_, optional) in &per_object {
        if optional.len() >= 20 {
            return Err(SitecoreError::EnumerationTooLarge(format!(
                "{} optional sieves on one object",
                optional.len()
            )));
        }
        total = total.saturating_mul(1 << optional.len());
        if total > (1 << 20) {
            return Err(SitecoreError::EnumerationTooLarge(format!(
                "more than {} candidate cover assignments",
                1 << 20
            )));
        }
    }
    let mut result = Vec::new();
    let mut choice: Vec<u32> = vec![0; per_object.len()];
    loop {
        let mut top = Topology::trivial(cat);
        for (idx, (_, optional)) in per_object.iter().enumerate() {
            for (bit, sieve) in optional.iter().enumerate() {
                if choice[idx] & (1 << bit) != 0 {
                    top.insert(sieve.clone());
                }
            }
        }
        if is_topology(cat, &top).is_ok() {
            result.push(top);
        }
        // Odometer increment over the per-object subset choices.
        let mut pos = 0;
        loop {
            if pos == per_object.len() {
                result.sort();
                return Ok(result);
            }
            choice[pos] += 1;
            if choice[pos] < (1 << per_object[pos].1.len()) {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn sieve_arrow_sets(sieves: &[Sieve]) -> Vec<Vec<String>> {
        sieves
            .iter()
            .map(|s| s.arrows().iter().cloned().collect())
            .collect()
    }

    #[test]
    fn sieves_on_v_cospan_apex() {
        let corpus = corpus::builtin();
        let v = corpus.category("v");
        let sieves = enumerate_sieves(v, "y").unwrap();
        assert_eq!(
            sieve_arrow_sets(&sieves),
            vec![
                vec![],
                vec!["f".to_string()],
                vec!["f".to_string(), "g".to_string()],
                vec!["f".to_string(), "g".to_string(), "idy".to_string()],
                vec!["g".to_string()],
            ]
        );
    }

    #[test]
    fn sieves_on_group_object_are_empty_and_maximal() {
        let corpus = corpus::builtin();
        for name in ["z2", "z3", "s3"] {
            let cat = corpus.category(name);
            let sieves = enumerate_sieves(cat, "*").unwrap();
            assert_eq!(sieves.len(), 2, "{name}");
            assert!(sieves[0].is_empty());
            assert_eq!(sieves[1], Sieve::maximal(cat, "*"));
        }
    }

    #[test]
    fn diamond_top_object_has_six_sieves() {
        let corpus = corpus::builtin();
        let sieves = enumerate_sieves(corpus.category("diamond"), "1").unwrap();
        assert_eq!(sieves.len(), 6);
    }

    #[test]
    fn pullback_of_one_leg_along_other_is_empty() {
        let corpus = corpus::builtin();
        let v = corpus.category("v");
        let s = Sieve::generated(v, "y", &["f".to_string()]).unwrap();
        let pulled = pullback_sieve(v, &s, "g").unwrap();
        assert!(pulled.is_empty());
        assert_eq!(pulled.base(), "z");
        assert!(matches!(
            pullback_sieve(v, &s, "idx"),
            Err(SitecoreError::BaseMismatch { .. })
        ));
    }

    #[test]
    fn saturating_v_legs_degenerates() {
        let corpus = corpus::builtin();
        let v = corpus.category("v");
        let top = atomic_topology(v);
        for c in v.objects() {
            let all = enumerate_sieves(v, c).unwrap();
            assert_eq!(top.covers(c).count(), all.len(), "all sieves cover {c}");
        }
        assert_eq!(top.empty_covered_objects(), vec!["x", "y", "z"]);
    }

    #[test]
    fn z2_has_exactly_two_topologies() {
        let corpus = corpus::builtin();
        let tops = enumerate_topologies(corpus.category("z2")).unwrap();
        assert_eq!(tops.len(), 2);
        assert!(tops.iter().any(|t| t.cover_count("*") == 1));
        assert!(tops.iter().any(|t| t.cover_count("*") == 2));
    }

    #[test]
    fn atomic_topology_on_arrow() {
        let corpus = corpus::builtin();
        let arrow = corpus.category("arrow");
        let top = atomic_topology(arrow);
        let on1: Vec<Vec<String>> = top.covers("1").map(|s| s.arrows().iter().cloned().collect()).collect();
        assert_eq!(on1, vec![vec!["id1".to_string(), "u".to_string()], vec!["u".to_string()]]);
        let on0: Vec<Vec<String>> = top.covers("0").map(|s| s.arrows().iter().cloned().collect()).collect();
        assert_eq!(on0, vec![vec!["id0".to_string()]]);
        assert!(is_topology(arrow, &top).is_ok());
    }

    #[test]
    fn saturate_on_group_keeps_maximal_only() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let top = saturate(z2, &[]);
        assert_eq!(top.cover_count("*"), 1);
        assert!(is_topology(z2, &top).is_ok());
    }

    #[test]
    fn induced_topology_on_arrow_source() {
        let corpus = corpus::builtin();
        let arrow = corpus.category("arrow");
        let j = atomic_topology(arrow);
        let sub = fincat::full_subcategory(arrow, &["0".to_string()].into()).unwrap();
        let induced = induced_topology(arrow, &j, &sub).unwrap();
        assert_eq!(induced.cover_count("0"), 1);
        assert!(induced.covers("0").next().unwrap().contains("id0"));
    }

    #[test]
    fn reduce_drops_everything_on_connected_non_ore() {
        let corpus = corpus::builtin();
        let (sub, _) = reduce_to_dense(corpus.category("v"));
        assert!(sub.objects().is_empty());
    }

    #[test]
    fn reduce_keeps_terminal_component() {
        let corpus = corpus::builtin();
        let (sub, top) = reduce_to_dense(corpus.category("v_plus_terminal"));
        assert_eq!(sub.objects(), &["t".to_string()]);
        assert_eq!(top.cover_count("t"), 1);
    }

    #[test]
    fn ideal_counts() {
        let corpus = corpus::builtin();
        assert_eq!(enumerate_ideals(corpus.category("discrete2")).len(), 4);
        assert_eq!(enumerate_ideals(corpus.category("v")).len(), 2);
        assert_eq!(enumerate_ideals(corpus.category("v_plus_terminal")).len(), 4);
    }

    #[test]
    fn sieve_connectivity() {
        let corpus = corpus::builtin();
        let v = corpus.category("v");
        let legs = Sieve::generated(v, "y", &["f".to_string(), "g".to_string()]).unwrap();
        assert!(!sieve_is_connected(v, &legs));
        assert!(sieve_is_connected(v, &Sieve::maximal(v, "y")));
        assert!(!sieve_is_connected(v, &Sieve::empty("y")));
        let diamond = corpus.category("diamond");
        let both = Sieve::generated(diamond, "1", &["fa1".to_string(), "fb1".to_string()]).unwrap();
        assert!(sieve_is_connected(diamond, &both));
    }

    #[test]
    fn topology_axiom_violations_are_detected() {
        let corpus = corpus::builtin();
        let arrow = corpus.category("arrow");
        // Missing maximal sieve.
        let top = Topology { covers: BTreeMap::new() };
        assert!(matches!(is_topology(arrow, &top), Err(TopologyViolation::Maximality { .. })));
        // {u} covering without stability is fine, but a cover on 1 whose
        // pullback to 0 is missing breaks stability: use the V category.
        let v = corpus.category("v");
        let mut top = Topology::trivial(v);
        top.insert(Sieve::generated(v, "y", &["f".to_string()]).unwrap());
        assert!(matches!(is_topology(v, &top), Err(TopologyViolation::Stability { .. })));
        // Transitivity: empty sieve locally covers once its pullbacks cover.
        let mut top = Topology::trivial(v);
        top.insert(Sieve::empty("x"));
        top.insert(Sieve::empty("z"));
        top.insert(Sieve::generated(v, "y", &["f".to_string(), "g".to_string()]).unwrap());
        // Pullback of {f,g} along f is maximal on x, fine; but the empty
        // sieve on y is locally covering via {f,g}.
        assert!(matches!(is_topology(v, &top), Err(TopologyViolation::Transitivity { .. })));
    }

    #[test]
    fn saturate_is_monotone_and_idempotent_on_v() {
        let corpus = corpus::builtin();
        let v = corpus.category("v");
        let single = saturate(v, &[Sieve::generated(v, "y", &["f".to_string()]).unwrap()]);
        let all = atomic_topology(v);
        assert!(single.leq(&all));
        let again = saturate(v, &single.all_sieves());
        assert_eq!(single, again);
    }
}
