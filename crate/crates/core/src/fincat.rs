//! Finite categories presented by explicit composition tables.
//!
//! A category here is a finite set of object ids, a finite set of morphism
//! ids with domain and codomain, a chosen identity per object, and a total
//! composition table on composable pairs. Nothing is generated or inferred
//! beyond identity rows of the table; every law is checked exhaustively.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type ObjectId = String;
pub type MorphId = String;

/// One morphism row of a category file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

/// On-disk form of a category. `identities` maps each object to its identity
/// morphism. `composition` rows are `[g, f, r]` meaning "g after f is r";
/// rows forced by the identity laws may be omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    #[serde(default)]
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub composition: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    Malformed,
    Totality,
    Identity,
    Associativity,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Law::Malformed => "malformed input",
            Law::Totality => "totality",
            Law::Identity => "identity",
            Law::Associativity => "associativity",
        };
        f.write_str(s)
    }
}

/// A single validation failure, naming the law broken and the morphisms
/// involved.
#[derive(Debug, Clone)]
pub struct Violation {
    pub law: Law,
    pub morphisms: Vec<MorphId>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.morphisms.is_empty() {
            write!(f, "{}: {}", self.law, self.message)
        } else {
            write!(f, "{}: {} [{}]", self.law, self.message, self.morphisms.join(", "))
        }
    }
}

#[derive(Debug, Error)]
pub enum FincatError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
}

/// A cospan `left: a -> target`, `right: b -> target` that admits no
/// commutative completion to a square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CospanWitness {
    pub target: ObjectId,
    pub left: MorphId,
    pub right: MorphId,
}

/// A validated finite category. Construction goes through [`validate_category`],
/// so every value of this type satisfies the identity, totality and
/// associativity laws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Category {
    objects: Vec<ObjectId>,
    morphisms: BTreeMap<MorphId, (ObjectId, ObjectId)>,
    identities: BTreeMap<ObjectId, MorphId>,
    composition: BTreeMap<(MorphId, MorphId), MorphId>,
}

impl Category {
    /// Objects in sorted id order.
    pub fn objects(&self) -> &[ObjectId] {
        &self.objects
    }

    /// Morphism ids in sorted order.
    pub fn morphisms(&self) -> impl Iterator<Item = &MorphId> {
        self.morphisms.keys()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn has_object(&self, c: &str) -> bool {
        self.objects.binary_search_by(|o| o.as_str().cmp(c)).is_ok()
    }

    pub fn has_morphism(&self, f: &str) -> bool {
        self.morphisms.contains_key(f)
    }

    pub fn dom(&self, f: &str) -> &ObjectId {
        &self.morphisms[f].0
    }

    pub fn cod(&self, f: &str) -> &ObjectId {
        &self.morphisms[f].1
    }

    pub fn identity(&self, c: &str) -> &MorphId {
        &self.identities[c]
    }

    pub fn is_identity(&self, f: &str) -> bool {
        self.identities.values().any(|id| id == f)
    }

    /// `g` after `f`, or None when the pair is not composable.
    pub fn compose(&self, g: &str, f: &str) -> Option<&MorphId> {
        self.composition.get(&(g.to_string(), f.to_string()))
    }

    /// Morphisms with codomain `c`, sorted.
    pub fn arrows_into(&self, c: &str) -> Vec<MorphId> {
        self.morphisms
            .iter()
            .filter(|(_, (_, cod))| cod == c)
            .map(|(id, _)| id.clone())
            .collect()
    }

    /// Morphisms with domain `c`, sorted.
    pub fn arrows_from(&self, c: &str) -> Vec<MorphId> {
        self.morphisms
            .iter()
            .filter(|(_, (dom, _))| dom == c)
            .map(|(id, _)| id.clone())
            .collect()
    }

    /// Morphisms `a -> b`, sorted.
    pub fn hom(&self, a: &str, b: &str) -> Vec<MorphId> {
        self.morphisms
            .iter()
            .filter(|(_, (dom, cod))| dom == a && cod == b)
            .map(|(id, _)| id.clone())
            .collect()
    }

    pub fn to_raw(&self) -> RawCategory {
        RawCategory {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|(id, (dom, cod))| RawMorphism {
                    id: id.clone(),
                    dom: dom.clone(),
                    cod: cod.clone(),
                })
                .collect(),
            identities: self.identities.clone(),
            composition: self
                .composition
                .iter()
                .map(|((g, f), r)| (g.clone(), f.clone(), r.clone()))
                .collect(),
        }
    }
}

/// Checks a raw table against the category laws. On success the table is
/// promoted to a [`Category`]; otherwise every violation found is returned,
/// each naming the law and the offending morphisms.
pub fn validate_category(raw: &RawCategory) -> Result<Category, Vec<Violation>> {
    let mut violations = Vec::new();
    let malformed = |msg: String, morphs: Vec<MorphId>| Violation {
        law: Law::Malformed,
        morphisms: morphs,
        message: msg,
    };

    let mut objects: Vec<ObjectId> = raw.objects.clone();
    objects.sort();
    for w in objects.windows(2) {
        if w[0] == w[1] {
            violations.push(malformed(format!("duplicate object id `{}`", w[0]), vec![]));
        }
    }
    objects.dedup();
    let object_set: BTreeSet<&str> = objects.iter().map(|s| s.as_str()).collect();

    let mut morphisms: BTreeMap<MorphId, (ObjectId, ObjectId)> = BTreeMap::new();
    for m in &raw.morphisms {
        if morphisms.contains_key(&m.id) {
            violations.push(malformed(format!("duplicate morphism id `{}`", m.id), vec![m.id.clone()]));
            continue;
        }
        if !object_set.contains(m.dom.as_str()) {
            violations.push(malformed(
                format!("morphism `{}` has unknown domain `{}`", m.id, m.dom),
                vec![m.id.clone()],
            ));
        }
        if !object_set.contains(m.cod.as_str()) {
            violations.push(malformed(
                format!("morphism `{}` has unknown codomain `{}`", m.id, m.cod),
                vec![m.id.clone()],
            ));
        }
        morphisms.insert(m.id.clone(), (m.dom.clone(), m.cod.clone()));
    }

    let mut identities: BTreeMap<ObjectId, MorphId> = BTreeMap::new();
    for (obj, id) in &raw.identities {
        if !object_set.contains(obj.as_str()) {
            violations.push(malformed(format!("identity declared for unknown object `{obj}`"), vec![]));
            continue;
        }
        match morphisms.get(id) {
            None => violations.push(malformed(
                format!("identity of `{obj}` names unknown morphism `{id}`"),
                vec![id.clone()],
            )),
            Some((dom, cod)) => {
                if dom != obj || cod != obj {
                    violations.push(Violation {
                        law: Law::Identity,
                        morphisms: vec![id.clone()],
                        message: format!("identity of `{obj}` must be an endomorphism of it"),
                    });
                } else {
                    identities.insert(obj.clone(), id.clone());
                }
            }
        }
    }
    for obj in &objects {
        if !identities.contains_key(obj) {
            violations.push(malformed(format!("object `{obj}` has no identity"), vec![]));
        }
    }

    if !violations.is_empty() {
        return Err(violations);
    }

    let mut composition: BTreeMap<(MorphId, MorphId), MorphId> = BTreeMap::new();
    for (g, f, r) in &raw.composition {
        for id in [g, f, r] {
            if !morphisms.contains_key(id) {
                violations.push(malformed(
                    format!("composition row ({g}, {f}) -> {r} names unknown morphism `{id}`"),
                    vec![id.clone()],
                ));
            }
        }
        if !(morphisms.contains_key(g) && morphisms.contains_key(f) && morphisms.contains_key(r)) {
            continue;
        }
        if morphisms[f].1 != morphisms[g].0 {
            violations.push(Violation {
                law: Law::Totality,
                morphisms: vec![g.clone(), f.clone()],
                message: format!("({g}, {f}) declared composable but cod({f}) != dom({g})"),
            });
            continue;
        }
        if morphisms[r].0 != morphisms[f].0 || morphisms[r].1 != morphisms[g].1 {
            violations.push(Violation {
                law: Law::Totality,
                morphisms: vec![g.clone(), f.clone(), r.clone()],
                message: format!("composite of ({g}, {f}) must run dom({f}) -> cod({g}), `{r}` does not"),
            });
            continue;
        }
        let key = (g.clone(), f.clone());
        if let Some(prev) = composition.get(&key) {
            if prev != r {
                violations.push(malformed(
                    format!("contradictory rows for ({g}, {f}): `{prev}` and `{r}`"),
                    vec![g.clone(), f.clone()],
                ));
            }
        } else {
            composition.insert(key, r.clone());
        }
    }

    // Identity rows may be omitted from the file; fill them in, flagging
    // any explicit row that disagrees.
    for (f, (dom, cod)) in &morphisms {
        let id_d = identities[dom].clone();
        let id_c = identities[cod].clone();
        for (key, expected) in [
            ((f.clone(), id_d), f.clone()),
            ((id_c, f.clone()), f.clone()),
        ] {
            match composition.get(&key) {
                None => {
                    composition.insert(key, expected);
                }
                Some(r) if *r != expected => violations.push(Violation {
                    law: Law::Identity,
                    morphisms: vec![key.0.clone(), key.1.clone(), r.clone()],
                    message: format!("identity law fails: ({}, {}) -> {r}, expected {expected}", key.0, key.1),
                }),
                Some(_) => {}
            }
        }
    }

    // Totality: exactly the composable pairs are in the table.
    for (g, (gd, _)) in &morphisms {
        for (f, (_, fc)) in &morphisms {
            let key = (g.clone(), f.clone());
            if fc == gd {
                if !composition.contains_key(&key) {
                    violations.push(Violation {
                        law: Law::Totality,
                        morphisms: vec![g.clone(), f.clone()],
                        message: format!("no composite declared for composable pair ({g}, {f})"),
                    });
                }
            } else if composition.contains_key(&key) {
                violations.push(Violation {
                    law: Law::Totality,
                    morphisms: vec![g.clone(), f.clone()],
                    message: format!("({g}, {f}) is not composable but has a table row"),
                });
            }
        }
    }

    // Associativity over all composable triples.
    for (h, (hd, _)) in &morphisms {
        for (g, (gd, gc)) in &morphisms {
            if gc != hd {
                continue;
            }
            for (f, (_, fc)) in &morphisms {
                if fc != gd {
                    continue;
                }
                let hg = composition.get(&(h.clone(), g.clone()));
                let gf = composition.get(&(g.clone(), f.clone()));
                let (Some(hg), Some(gf)) = (hg, gf) else { continue };
                let left = composition.get(&(hg.clone(), f.clone()));
                let right = composition.get(&(h.clone(), gf.clone()));
                if let (Some(l), Some(r)) = (left, right) {
                    if l != r {
                        violations.push(Violation {
                            law: Law::Associativity,
                            morphisms: vec![h.clone(), g.clone(), f.clone()],
                            message: format!("({h} . {g}) . {f} = {l} but {h} . ({g} . {f}) = {r}"),
                        });
                    }
                }
            }
        }
    }

    if violations.is_empty() {
        Ok(Category {
            objects,
            morphisms,
            identities,
            composition,
        })
    } else {
        Err(violations)
    }
}

/// Partition of the objects into zig-zag connected components, each sorted,
/// components ordered by least object.
pub fn connected_components(cat: &Category) -> Vec<Vec<ObjectId>> {
    let objects = cat.objects();
    let index: BTreeMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (o.as_str(), i)).collect();
    let mut uf = UnionFind::new(objects.len());
    for f in cat.morphisms() {
        uf.union(index[cat.dom(f).as_str()], index[cat.cod(f).as_str()]);
    }
    let mut groups: BTreeMap<usize, Vec<ObjectId>> = BTreeMap::new();
    for (i, obj) in objects.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(obj.clone());
    }
    let mut components: Vec<Vec<ObjectId>> = groups.into_values().collect();
    components.sort();
    components
}

/// Searches every cospan for a commutative completion; the first cospan
/// (in sorted morphism order) with none is returned.
pub fn right_ore_witness(cat: &Category) -> Option<CospanWitness> {
    let morphs: Vec<&MorphId> = cat.morphisms().collect();
    for f in &morphs {
        for g in &morphs {
            if cat.cod(f) != cat.cod(g) {
                continue;
            }
            let into_a = cat.arrows_into(cat.dom(f));
            let into_b = cat.arrows_into(cat.dom(g));
            let mut completed = false;
            'search: for p in &into_a {
                for q in &into_b {
                    if cat.dom(p) != cat.dom(q) {
                        continue;
                    }
                    if cat.compose(f, p) == cat.compose(g, q) {
                        completed = true;
                        break 'search;
                    }
                }
            }
            if !completed {
                return Some(CospanWitness {
                    target: cat.cod(f).clone(),
                    left: (*f).clone(),
                    right: (*g).clone(),
                });
            }
        }
    }
    None
}

pub fn is_right_ore(cat: &Category) -> bool {
    right_ore_witness(cat).is_none()
}

/// The full subcategory on `objects`: all morphisms of `cat` between them,
/// with composition inherited.
pub fn full_subcategory(cat: &Category, objects: &BTreeSet<ObjectId>) -> Result<Category, FincatError> {
    for obj in objects {
        if !cat.has_object(obj) {
            return Err(FincatError::UnknownObject(obj.clone()));
        }
    }
    let keep: BTreeSet<MorphId> = cat
        .morphisms()
        .filter(|f| objects.contains(cat.dom(f)) && objects.contains(cat.cod(f)))
        .cloned()
        .collect();
    Ok(Category {
        objects: objects.iter().cloned().collect(),
        morphisms: keep
            .iter()
            .map(|f| (f.clone(), (cat.dom(f).clone(), cat.cod(f).clone())))
            .collect(),
        identities: objects.iter().map(|o| (o.clone(), cat.identity(o).clone())).collect(),
        composition: cat
            .composition
            .iter()
            .filter(|((g, f), _)| keep.contains(g) && keep.contains(f))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
    })
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        // Rooting at the smaller index keeps results deterministic.
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn corpus_categories_validate() {
        for (name, cat) in corpus::builtin().categories {
            let raw = cat.to_raw();
            let back = validate_category(&raw).unwrap_or_else(|v| panic!("{name}: {v:?}"));
            assert_eq!(back, cat, "{name} round-trip");
        }
    }

    #[test]
    fn missing_composite_is_totality_violation() {
        let mut raw = corpus::diamond_raw();
        raw.composition.retain(|(g, f, _)| !(g == "fa1" && f == "f0a"));
        let errs = validate_category(&raw).unwrap_err();
        assert!(errs.iter().any(|v| v.law == Law::Totality && v.morphisms == vec!["fa1".to_string(), "f0a".to_string()]));
    }

    #[test]
    fn non_composable_row_is_totality_violation() {
        let mut raw = corpus::v_raw();
        raw.composition.push(("f".into(), "g".into(), "f".into()));
        let errs = validate_category(&raw).unwrap_err();
        assert!(errs.iter().any(|v| v.law == Law::Totality));
    }

    #[test]
    fn broken_associativity_is_reported() {
        // Z3 with one row redirected: g2 . g = g instead of e.
        let mut raw = corpus::z3_raw();
        for row in &mut raw.composition {
            if row.0 == "g2" && row.1 == "g" {
                row.2 = "g".into();
            }
        }
        let errs = validate_category(&raw).unwrap_err();
        assert!(errs.iter().any(|v| v.law == Law::Associativity), "{errs:?}");
    }

    #[test]
    fn components_of_disjoint_union() {
        let corpus = corpus::builtin();
        let vt = corpus.category("v_plus_terminal");
        assert_eq!(
            connected_components(vt),
            vec![vec!["t".to_string()], vec!["x".to_string(), "y".to_string(), "z".to_string()]]
        );
        let v = corpus.category("v");
        assert_eq!(connected_components(v).len(), 1);
    }

    #[test]
    fn ore_verdicts_on_corpus() {
        let corpus = corpus::builtin();
        assert!(is_right_ore(corpus.category("z2")));
        assert!(is_right_ore(corpus.category("diamond")));
        assert!(is_right_ore(corpus.category("terminal")));
        assert!(is_right_ore(corpus.category("discrete2")));
        let w = right_ore_witness(corpus.category("v")).unwrap();
        assert_eq!(
            w,
            CospanWitness {
                target: "y".into(),
                left: "f".into(),
                right: "g".into()
            }
        );
        assert!(!is_right_ore(corpus.category("v_plus_terminal")));
    }

    #[test]
    fn full_subcategory_of_diamond_is_arrow() {
        let corpus = corpus::builtin();
        let diamond = corpus.category("diamond");
        let objs: BTreeSet<String> = ["0".to_string(), "1".to_string()].into();
        let sub = full_subcategory(diamond, &objs).unwrap();
        assert_eq!(sub.objects(), &["0".to_string(), "1".to_string()]);
        let morphs: Vec<&String> = sub.morphisms().collect();
        assert_eq!(morphs, vec!["f01", "id0", "id1"]);
        assert!(full_subcategory(diamond, &["0".to_string(), "q".to_string()].into()).is_err());
    }
}
