//! Permutation groups stored as exhaustive element lists, their subgroups,
//! orbits, and finite right actions, plus the translation of an action into
//! a presheaf on the one-object category of the group.
//!
//! Elements are kept sorted by image vector, which puts the identity first;
//! every constructor re-verifies the group axioms by brute force. Actions
//! are stored contravariantly (act(g∘f) = act(f)∘act(g)), so a GSet is
//! literally the data of a presheaf on the group's one-object category.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{validate_category, Category, RawCategory, RawMorphism};
use crate::modelkit::{is_isomorphism, Structure};
use crate::sheafkit::{Presheaf, RawPresheaf};

/// Default ceiling for subgroup enumeration.
pub const DEFAULT_GROUP_BOUND: usize = 24;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("malformed group: {0}")]
    Malformed(String),
    #[error("malformed action: {0}")]
    MalformedAction(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("group of order {order} exceeds the bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),
}

/// A permutation of 0..degree by image vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Perm, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(GroupError::Malformed(format!("not a permutation: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// self ∘ other: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            images: (0..self.images.len()).map(|i| self.images[other.images[i]]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// On-disk form: the permuted set, then each element as a point map. Action
/// indices elsewhere refer to positions in this `elements` array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGroup {
    pub degree: Vec<String>,
    pub elements: Vec<BTreeMap<String, String>>,
}

/// A verified permutation group on a named finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    points: Vec<String>,
    elements: Vec<Perm>,
}

impl PermGroup {
    /// Verifies distinctness, identity, closure, and inverses exhaustively.
    pub fn new(points: Vec<String>, mut elements: Vec<Perm>) -> Result<PermGroup, GroupError> {
        let distinct: BTreeSet<&String> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(GroupError::Malformed("duplicate point".to_string()));
        }
        if elements.is_empty() {
            return Err(GroupError::Malformed("no elements".to_string()));
        }
        for p in &elements {
            if p.degree() != points.len() {
                return Err(GroupError::Malformed("permutation degree mismatch".to_string()));
            }
        }
        elements.sort();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(GroupError::Malformed("duplicate element".to_string()));
        }
        let group = PermGroup { points, elements };
        if !group.elements[0].is_identity() {
            return Err(GroupError::Malformed("identity missing".to_string()));
        }
        for p in &group.elements {
            if group.index_of(&p.inverse()).is_none() {
                return Err(GroupError::Malformed("inverse missing".to_string()));
            }
            for q in &group.elements {
                if group.index_of(&p.compose(q)).is_none() {
                    return Err(GroupError::Malformed("not closed under composition".to_string()));
                }
            }
        }
        Ok(group)
    }

    pub fn from_raw(raw: &RawGroup) -> Result<PermGroup, GroupError> {
        let index: BTreeMap<&String, usize> =
            raw.degree.iter().enumerate().map(|(i, p)| (p, i)).collect();
        if index.len() != raw.degree.len() {
            return Err(GroupError::Malformed("duplicate point".to_string()));
        }
        let mut elements = Vec::new();
        for map in &raw.elements {
            let mut images = vec![usize::MAX; raw.degree.len()];
            for (from, to) in map {
                let i = *index
                    .get(from)
                    .ok_or_else(|| GroupError::UnknownElement(from.clone()))?;
                let j = *index
                    .get(to)
                    .ok_or_else(|| GroupError::UnknownElement(to.clone()))?;
                images[i] = j;
            }
            if images.contains(&usize::MAX) {
                return Err(GroupError::Malformed("element map is not total".to_string()));
            }
            elements.push(Perm::from_images(images)?);
        }
        PermGroup::new(raw.degree.clone(), elements)
    }

    pub fn to_raw(&self) -> RawGroup {
        RawGroup {
            degree: self.points.clone(),
            elements: self.elements.iter().map(|p| self.perm_as_map(p)).collect(),
        }
    }

    pub fn perm_as_map(&self, p: &Perm) -> BTreeMap<String, String> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), self.points[p.apply(i)].clone()))
            .collect()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }

    pub fn point_index(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }
}

/// All bijections of the universe preserving and reflecting every relation
/// and constant, as a verified group on the universe.
pub fn automorphisms(m: &Structure) -> PermGroup {
    let n = m.universe.len();
    let mut elements = Vec::new();
    let mut images: Vec<usize> = (0..n).collect();
    loop {
        let map: BTreeMap<String, String> = m
            .universe
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), m.universe[images[i]].clone()))
            .collect();
        if is_isomorphism(m, m, &map) {
            elements.push(Perm {
                images: images.clone(),
            });
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    PermGroup::new(m.universe.clone(), elements).expect("automorphisms form a group")
}

/// Lexicographic successor in place; false once the last permutation passed.
fn next_permutation(images: &mut [usize]) -> bool {
    if images.len() < 2 {
        return false;
    }
    let mut i = images.len() - 1;
    while i > 0 && images[i - 1] >= images[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = images.len() - 1;
    while images[j] <= images[i - 1] {
        j -= 1;
    }
    images.swap(i - 1, j);
    images[i..].reverse();
    true
}

/// Subgroup fixing every entry of the tuple pointwise; the empty tuple gives
/// back the whole group.
pub fn stabilizer(g: &PermGroup, tuple: &[String]) -> Result<PermGroup, GroupError> {
    let mut fixed = Vec::new();
    for name in tuple {
        fixed.push(
            g.point_index(name)
                .ok_or_else(|| GroupError::UnknownElement(name.clone()))?,
        );
    }
    let elements: Vec<Perm> = g
        .elements
        .iter()
        .filter(|p| fixed.iter().all(|&i| p.apply(i) == i))
        .cloned()
        .collect();
    Ok(PermGroup::new(g.points.clone(), elements).expect("stabilizers are subgroups"))
}

/// Orbits of the diagonal action on k-tuples, each orbit a sorted tuple set,
/// orbits ordered by least member.
pub fn orbits_on_tuples(g: &PermGroup, k: usize) -> Result<Vec<BTreeSet<Vec<String>>>, GroupError> {
    let n = g.points.len();
    let count = (n as u64).checked_pow(k as u32);
    if count.is_none_or(|c| c > 100_000) {
        return Err(GroupError::EnumerationTooLarge(format!(
            "{n}^{k} tuples"
        )));
    }
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut orbits = Vec::new();
    let mut tuple = vec![0usize; k];
    loop {
        if !seen.contains(&tuple) {
            let mut orbit: BTreeSet<Vec<usize>> = BTreeSet::new();
            for p in &g.elements {
                orbit.insert(tuple.iter().map(|&i| p.apply(i)).collect());
            }
            seen.extend(orbit.iter().cloned());
            orbits.push(
                orbit
                    .into_iter()
                    .map(|t| t.into_iter().map(|i| g.points[i].clone()).collect())
                    .collect(),
            );
        }
        // Lexicographic odometer over point indices.
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(orbits);
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

fn closure_of(g: &PermGroup, seed: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut members = seed.clone();
    members.insert(0);
    loop {
        let mut fresh = BTreeSet::new();
        for &a in &members {
            let inv = g.index_of(&g.elements[a].inverse()).expect("group closed");
            if !members.contains(&inv) {
                fresh.insert(inv);
            }
            for &b in &members {
                let ab = g
                    .index_of(&g.elements[a].compose(&g.elements[b]))
                    .expect("group closed");
                if !members.contains(&ab) {
                    fresh.insert(ab);
                }
            }
        }
        if fresh.is_empty() {
            return members;
        }
        members.extend(fresh);
    }
}

/// Every subgroup as an index set, found by repeatedly adjoining single
/// generators and closing; sorted.
fn all_subgroups(g: &PermGroup) -> Vec<BTreeSet<usize>> {
    let trivial: BTreeSet<usize> = BTreeSet::from([0]);
    let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::from([trivial.clone()]);
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for x in 0..g.order() {
            if h.contains(&x) {
                continue;
            }
            let mut seed = h.clone();
            seed.insert(x);
            let bigger = closure_of(g, &seed);
            if found.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }
    found.into_iter().collect()
}

fn conjugate(g: &PermGroup, h: &BTreeSet<usize>, a: usize) -> BTreeSet<usize> {
    let inv = g.elements[a].inverse();
    h.iter()
        .map(|&x| {
            g.index_of(&g.elements[a].compose(&g.elements[x]).compose(&inv))
                .expect("group closed")
        })
        .collect()
}

fn subgroup_index_classes(g: &PermGroup, bound: usize) -> Result<Vec<Vec<BTreeSet<usize>>>, GroupError> {
    if g.order() > bound {
        return Err(GroupError::GroupTooLarge {
            order: g.order(),
            bound,
        });
    }
    let mut remaining: BTreeSet<BTreeSet<usize>> = all_subgroups(g).into_iter().collect();
    let mut classes: Vec<Vec<BTreeSet<usize>>> = Vec::new();
    while let Some(h) = remaining.iter().next().cloned() {
        let class: BTreeSet<BTreeSet<usize>> = (0..g.order()).map(|a| conjugate(g, &h, a)).collect();
        for member in &class {
            remaining.remove(member);
        }
        classes.push(class.into_iter().collect());
    }
    classes.sort_by_key(|class| (class[0].len(), class[0].clone()));
    Ok(classes)
}

fn subgroup_from_indices(g: &PermGroup, indices: &BTreeSet<usize>) -> PermGroup {
    PermGroup::new(
        g.points.clone(),
        indices.iter().map(|&i| g.elements[i].clone()).collect(),
    )
    .expect("closed index sets are subgroups")
}

/// All subgroups grouped into conjugacy classes, classes ordered by
/// (subgroup order, least member), members sorted.
pub fn subgroup_conjugacy_classes(
    g: &PermGroup,
    bound: usize,
) -> Result<Vec<Vec<PermGroup>>, GroupError> {
    Ok(subgroup_index_classes(g, bound)?
        .into_iter()
        .map(|class| class.iter().map(|h| subgroup_from_indices(g, h)).collect())
        .collect())
}

/// A finite right action of a group: carrier labels plus, per group element,
/// the index map it induces. The composition law is contravariant,
/// `act(g∘f) = act(f)∘act(g)`, matching presheaf actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSet {
    group: PermGroup,
    carrier: Vec<String>,
    action: Vec<Vec<usize>>,
}

/// On-disk form. Action keys are decimal indices into this file's `group`
/// elements array; the identity row may be omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawGSet {
    pub group: RawGroup,
    pub carrier: Vec<String>,
    pub action: BTreeMap<String, BTreeMap<String, String>>,
}

impl GSet {
    pub fn new(group: PermGroup, carrier: Vec<String>, action: Vec<Vec<usize>>) -> Result<GSet, GroupError> {
        let distinct: BTreeSet<&String> = carrier.iter().collect();
        if distinct.len() != carrier.len() {
            return Err(GroupError::MalformedAction("duplicate carrier element".to_string()));
        }
        if action.len() != group.order() {
            return Err(GroupError::MalformedAction("one action row per group element required".to_string()));
        }
        for row in &action {
            if row.len() != carrier.len() || row.iter().any(|&i| i >= carrier.len()) {
                return Err(GroupError::MalformedAction("action row is not a carrier map".to_string()));
            }
        }
        if action[0] != (0..carrier.len()).collect::<Vec<_>>() {
            return Err(GroupError::MalformedAction("identity must act trivially".to_string()));
        }
        for (gi, gp) in group.elements.iter().enumerate() {
            for (fi, fp) in group.elements.iter().enumerate() {
                let gf = group.index_of(&gp.compose(fp)).expect("group closed");
                for x in 0..carrier.len() {
                    if action[gf][x] != action[fi][action[gi][x]] {
                        return Err(GroupError::MalformedAction(
                            "action does not respect composition".to_string(),
                        ));
                    }
                }
            }
        }
        Ok(GSet {
            group,
            carrier,
            action,
        })
    }

    pub fn from_raw(raw: &RawGSet) -> Result<GSet, GroupError> {
        let group = PermGroup::from_raw(&raw.group)?;
        // Permutations in file order, so action keys can index the file's
        // own elements array regardless of canonical sorting.
        let point_index: BTreeMap<&String, usize> =
            raw.group.degree.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let raw_perms: Vec<Perm> = raw
            .group
            .elements
            .iter()
            .map(|map| Perm {
                images: raw.group.degree.iter().map(|p| point_index[&map[p]]).collect(),
            })
            .collect();
        let carrier_index: BTreeMap<&String, usize> =
            raw.carrier.iter().enumerate().map(|(i, e)| (e, i)).collect();
        if carrier_index.len() != raw.carrier.len() {
            return Err(GroupError::MalformedAction("duplicate carrier element".to_string()));
        }
        let mut action: Vec<Option<Vec<usize>>> = vec![None; group.order()];
        for (key, row) in &raw.action {
            let file_idx: usize = key
                .parse()
                .map_err(|_| GroupError::MalformedAction(format!("bad element index `{key}`")))?;
            let perm = raw_perms
                .get(file_idx)
                .ok_or_else(|| GroupError::MalformedAction(format!("element index {file_idx} out of range")))?;
            let canonical = group.index_of(perm).expect("raw element is in the group");
            let mut images = vec![usize::MAX; raw.carrier.len()];
            for (from, to) in row {
                let i = *carrier_index
                    .get(from)
                    .ok_or_else(|| GroupError::UnknownElement(from.clone()))?;
                let j = *carrier_index
                    .get(to)
                    .ok_or_else(|| GroupError::UnknownElement(to.clone()))?;
                images[i] = j;
            }
            if images.contains(&usize::MAX) {
                return Err(GroupError::MalformedAction("action row is not total".to_string()));
            }
            if action[canonical].replace(images).is_some() {
                return Err(GroupError::MalformedAction("duplicate action row".to_string()));
            }
        }
        if action[0].is_none() {
            action[0] = Some((0..raw.carrier.len()).collect());
        }
        let action: Vec<Vec<usize>> = action
            .into_iter()
            .enumerate()
            .map(|(i, row)| row.ok_or(i))
            .collect::<Result<_, _>>()
            .map_err(|i| GroupError::MalformedAction(format!("no action row for element {i}")))?;
        GSet::new(group, raw.carrier.clone(), action)
    }

    pub fn to_raw(&self) -> RawGSet {
        RawGSet {
            group: self.group.to_raw(),
            carrier: self.carrier.clone(),
            action: self
                .action
                .iter()
                .enumerate()
                .filter(|(gi, _)| *gi != 0)
                .map(|(gi, row)| {
                    (
                        gi.to_string(),
                        row.iter()
                            .enumerate()
                            .map(|(x, &y)| (self.carrier[x].clone(), self.carrier[y].clone()))
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn act(&self, element: usize, x: usize) -> usize {
        self.action[element][x]
    }

    pub fn orbit_count(&self) -> usize {
        let mut uf = crate::fincat::UnionFind::new(self.carrier.len());
        for row in &self.action {
            for (x, &y) in row.iter().enumerate() {
                uf.union(x, y);
            }
        }
        (0..self.carrier.len())
            .map(|i| uf.find(i))
            .collect::<BTreeSet<_>>()
            .len()
    }
}

/// One coset action per subgroup conjugacy class, each transitive. Cosets
/// are labeled `c{i}` by their least member's index.
pub fn transitive_gsets(g: &PermGroup, bound: usize) -> Result<Vec<GSet>, GroupError> {
    let mut out = Vec::new();
    for class in subgroup_index_classes(g, bound)? {
        let h = &class[0];
        // Partition into right cosets Hx; x ~ y iff x∘y⁻¹ ∈ H.
        let mut coset_of: Vec<Option<usize>> = vec![None; g.order()];
        let mut coset_least: Vec<usize> = Vec::new();
        for x in 0..g.order() {
            if coset_of[x].is_some() {
                continue;
            }
            let id = coset_least.len();
            for y in x..g.order() {
                if coset_of[y].is_none() {
                    let xy = g
                        .index_of(&g.elements[x].compose(&g.elements[y].inverse()))
                        .expect("group closed");
                    if h.contains(&xy) {
                        coset_of[y] = Some(id);
                    }
                }
            }
            coset_least.push(x);
        }
        let carrier: Vec<String> = coset_least.iter().map(|&x| format!("c{x}")).collect();
        let action: Vec<Vec<usize>> = (0..g.order())
            .map(|a| {
                coset_least
                    .iter()
                    .map(|&x| {
                        let xa = g
                            .index_of(&g.elements[x].compose(&g.elements[a]))
                            .expect("group closed");
                        coset_of[xa].expect("cosets partition the group")
                    })
                    .collect()
            })
            .collect();
        out.push(GSet::new(g.clone(), carrier, action).expect("coset actions are lawful"));
    }
    Ok(out)
}

fn morphism_name(order: usize, i: usize) -> String {
    let width = ((order.max(2) - 1).to_string().len()).max(2);
    format!("g{i:0width$}")
}

/// The one-object category whose morphisms are the group elements, named
/// `g00`, `g01`, … in element order (so `g00` is the identity).
pub fn group_category(g: &PermGroup) -> Category {
    let order = g.order();
    let raw = RawCategory {
        objects: vec!["*".to_string()],
        morphisms: (0..order)
            .map(|i| RawMorphism {
                id: morphism_name(order, i),
                dom: "*".to_string(),
                cod: "*".to_string(),
            })
            .collect(),
        identities: BTreeMap::from([("*".to_string(), morphism_name(order, 0))]),
        composition: (0..order)
            .flat_map(|i| {
                (0..order).map(move |j| (i, j))
            })
            .map(|(i, j)| {
                let k = g
                    .index_of(&g.elements[i].compose(&g.elements[j]))
                    .expect("group closed");
                (
                    morphism_name(order, i),
                    morphism_name(order, j),
                    morphism_name(order, k),
                )
            })
            .collect(),
    };
    validate_category(&raw).expect("group categories satisfy the laws")
}

/// The group's one-object category together with the action as a presheaf
/// on it. The result is a sheaf for the atomic topology of that category.
pub fn gset_as_presheaf(x: &GSet) -> (Category, Presheaf) {
    let cat = group_category(&x.group);
    let order = x.group.order();
    let raw = RawPresheaf {
        sets: BTreeMap::from([(
            "*".to_string(),
            x.carrier.iter().cloned().collect::<BTreeSet<String>>(),
        )]),
        actions: (1..order)
            .map(|gi| {
                (
                    morphism_name(order, gi),
                    x.carrier
                        .iter()
                        .enumerate()
                        .map(|(ci, name)| (name.clone(), x.carrier[x.action[gi][ci]].clone()))
                        .collect(),
                )
            })
            .collect(),
    };
    let presheaf = Presheaf::from_raw(&cat, &raw).expect("group actions are functorial");
    (cat, presheaf)
}
