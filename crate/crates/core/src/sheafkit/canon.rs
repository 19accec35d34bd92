//! Transformation search between presheaves and the canonical topology
//! restricted to a chosen family of atoms.
//!
//! The restricted site has the named atoms as objects and every sheaf map
//! between them as a morphism; a sieve covers when the images of its arrows
//! are jointly dense in the base. For a family of atoms over an atomic site
//! every arrow is an epimorphism, so the covers come out as exactly the
//! nonempty sieves.

use std::collections::{BTreeMap, BTreeSet};

use crate::fincat::{validate_category, Category, MorphId, ObjectId, RawCategory, RawMorphism};
use crate::sitecore::{enumerate_sieves, Topology};

use super::sub::{closure, is_atom};
use super::{is_sheaf, NatTrans, Presheaf, SheafError, Site, Subpresheaf};

/// All natural transformations `f ⇒ g`, in lexicographic order of component
/// assignments along the sorted elements of `f`.
pub fn all_nat_trans(cat: &Category, f: &Presheaf, g: &Presheaf) -> Vec<NatTrans> {
    let elements: Vec<(ObjectId, String)> = f.elements().map(|(c, x)| (c.clone(), x.clone())).collect();
    let index: BTreeMap<(ObjectId, String), usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    // Naturality as constraints between assignment slots: the value at x
    // must be carried by g's action onto the value at f's action on x.
    let mut edges: Vec<(usize, MorphId, usize)> = Vec::new();
    for m in cat.morphisms() {
        for x in f.set(cat.cod(m)) {
            let i = index[&(cat.cod(m).clone(), x.clone())];
            let j = index[&(cat.dom(m).clone(), f.apply(m, x).clone())];
            edges.push((i, m.clone(), j));
        }
    }
    fn recurse(
        g: &Presheaf,
        elements: &[(ObjectId, String)],
        edges: &[(usize, MorphId, usize)],
        chosen: &mut Vec<Option<String>>,
        depth: usize,
        found: &mut Vec<Vec<String>>,
    ) {
        if depth == elements.len() {
            found.push(chosen.iter().map(|v| v.clone().expect("assigned")).collect());
            return;
        }
        let candidates: Vec<String> = g.set(&elements[depth].0).iter().cloned().collect();
        for y in candidates {
            chosen[depth] = Some(y);
            let ok = edges.iter().all(|(i, m, j)| match (&chosen[*i], &chosen[*j]) {
                (Some(vi), Some(vj)) => g.apply(m, vi) == vj,
                _ => true,
            });
            if ok {
                recurse(g, elements, edges, chosen, depth + 1, found);
            }
        }
        chosen[depth] = None;
    }
    let mut assignments: Vec<Vec<String>> = Vec::new();
    let mut chosen: Vec<Option<String>> = vec![None; elements.len()];
    recurse(g, &elements, &edges, &mut chosen, 0, &mut assignments);
    assignments
        .into_iter()
        .map(|values| {
            let mut components: BTreeMap<ObjectId, BTreeMap<String, String>> = cat
                .objects()
                .iter()
                .map(|c| (c.clone(), BTreeMap::new()))
                .collect();
            for (k, (c, x)) in elements.iter().enumerate() {
                components
                    .get_mut(c)
                    .expect("object present")
                    .insert(x.clone(), values[k].clone());
            }
            NatTrans::new(cat, f.clone(), g.clone(), components).expect("constraints enforce naturality")
        })
        .collect()
}

/// First isomorphism between the presheaves in search order, if any.
pub fn presheaves_isomorphic(cat: &Category, f: &Presheaf, g: &Presheaf) -> Option<NatTrans> {
    if cat.objects().iter().any(|c| f.set(c).len() != g.set(c).len()) {
        return None;
    }
    all_nat_trans(cat, f, g).into_iter().find(NatTrans::is_natural_iso)
}

/// A site whose objects are named sheaves, with the transformation behind
/// every morphism id.
#[derive(Debug, Clone)]
pub struct CanonicalSite {
    pub site: Site,
    pub transformations: BTreeMap<MorphId, NatTrans>,
}

/// Builds the category of the named atoms and all maps between them, with
/// the topology in which a sieve covers exactly when its arrows' images are
/// jointly dense. Morphism ids are `src|tgt|k` with `k` the index of the
/// transformation in search order.
pub fn restricted_canonical_topology(
    site: &Site,
    atoms: &[(String, Presheaf)],
) -> Result<CanonicalSite, SheafError> {
    let cat = &site.category;
    let mut names: BTreeSet<&str> = BTreeSet::new();
    for (name, sheaf) in atoms {
        if !names.insert(name) {
            return Err(SheafError::InvalidInput(format!("duplicate atom name `{name}`")));
        }
        if !is_sheaf(site, sheaf) {
            return Err(SheafError::NotAnAtom(format!("{name} is not a sheaf")));
        }
        if !is_atom(site, sheaf) {
            return Err(SheafError::NotAnAtom(name.clone()));
        }
    }
    let by_name: BTreeMap<&str, &Presheaf> = atoms.iter().map(|(n, p)| (n.as_str(), p)).collect();

    let mut morphisms: Vec<RawMorphism> = Vec::new();
    let mut transformations: BTreeMap<MorphId, NatTrans> = BTreeMap::new();
    let mut identities: BTreeMap<String, String> = BTreeMap::new();
    for (src, f) in &by_name {
        for (tgt, g) in &by_name {
            for (k, nt) in all_nat_trans(cat, f, g).into_iter().enumerate() {
                let id = format!("{src}|{tgt}|{k}");
                if src == tgt && nt == NatTrans::identity(f) {
                    identities.insert(src.to_string(), id.clone());
                }
                morphisms.push(RawMorphism {
                    id: id.clone(),
                    dom: src.to_string(),
                    cod: tgt.to_string(),
                });
                transformations.insert(id, nt);
            }
        }
    }

    // Composition by composing the underlying transformations and looking
    // the result up among the enumerated maps.
    let mut composition: Vec<(String, String, String)> = Vec::new();
    for g_row in &morphisms {
        for f_row in &morphisms {
            if f_row.cod != g_row.dom {
                continue;
            }
            let composed = NatTrans::compose(cat, &transformations[&g_row.id], &transformations[&f_row.id])?;
            let result = morphisms
                .iter()
                .find(|m| {
                    m.dom == f_row.dom && m.cod == g_row.cod && transformations[&m.id] == composed
                })
                .expect("composite is among the enumerated transformations");
            composition.push((g_row.id.clone(), f_row.id.clone(), result.id.clone()));
        }
    }

    let raw = RawCategory {
        objects: atoms.iter().map(|(n, _)| n.clone()).collect(),
        morphisms,
        identities,
        composition,
    };
    let atom_cat = validate_category(&raw).map_err(|violations| {
        SheafError::InvalidInput(format!(
            "atom category fails the laws: {}",
            violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        ))
    })?;

    let mut topology = Topology::trivial(&atom_cat);
    for name in atom_cat.objects() {
        let base = by_name[name.as_str()];
        for sieve in enumerate_sieves(&atom_cat, name).expect("object exists") {
            let mut union: BTreeMap<ObjectId, BTreeSet<String>> = BTreeMap::new();
            for arrow in sieve.arrows() {
                for (c, map) in &transformations[arrow].components {
                    union.entry(c.clone()).or_default().extend(map.values().cloned());
                }
            }
            let image = Subpresheaf::new(cat, base, union).expect("images are action-closed");
            if closure(site, &image).is_full() {
                topology.insert(sieve);
            }
        }
    }

    let atom_site = Site::new(atom_cat, topology)?;
    Ok(CanonicalSite {
        site: atom_site,
        transformations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::sheafkit::{constant_presheaf, is_epi, yoneda};
    use crate::sitecore::atomic_topology;

    fn z2_atoms(cat: &Category) -> (Presheaf, Presheaf) {
        let regular = yoneda(cat, "*").unwrap();
        let point: BTreeSet<String> = ["p".to_string()].into();
        (constant_presheaf(cat, &point), regular)
    }

    #[test]
    fn transformation_counts_between_group_actions() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let (point, regular) = z2_atoms(z2);
        assert_eq!(all_nat_trans(z2, &regular, &regular).len(), 2);
        assert_eq!(all_nat_trans(z2, &regular, &point).len(), 1);
        assert_eq!(all_nat_trans(z2, &point, &regular).len(), 0);
        assert_eq!(all_nat_trans(z2, &point, &point).len(), 1);
    }

    #[test]
    fn isomorphism_detection() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let regular = yoneda(z2, "*").unwrap();
        let relabeled = {
            let mut raw = regular.to_raw(z2);
            let rename = |s: &str| format!("{s}'");
            raw.sets = raw
                .sets
                .iter()
                .map(|(c, set)| (c.clone(), set.iter().map(|x| rename(x)).collect()))
                .collect();
            raw.actions = raw
                .actions
                .iter()
                .map(|(m, map)| {
                    (
                        m.clone(),
                        map.iter().map(|(x, y)| (rename(x), rename(y))).collect(),
                    )
                })
                .collect();
            Presheaf::from_raw(z2, &raw).unwrap()
        };
        assert!(presheaves_isomorphic(z2, &regular, &relabeled).is_some());
        let two: BTreeSet<String> = ["a".to_string(), "b".to_string()].into();
        let fixed = constant_presheaf(z2, &two);
        // Same sizes, incompatible actions.
        assert!(presheaves_isomorphic(z2, &regular, &fixed).is_none());
    }

    #[test]
    fn canonical_site_of_both_z2_atoms() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let site = Site::atomic(z2);
        let (point, regular) = z2_atoms(z2);
        let canonical = restricted_canonical_topology(
            &site,
            &[("point".to_string(), point), ("regular".to_string(), regular)],
        )
        .unwrap();
        let cat = &canonical.site.category;
        assert_eq!(cat.objects(), &["point".to_string(), "regular".to_string()]);
        assert_eq!(cat.morphism_count(), 4);
        // Covers are exactly the nonempty sieves.
        assert_eq!(canonical.site.topology, atomic_topology(cat));
        // Every map between atoms over an atomic site is an epimorphism.
        for nt in canonical.transformations.values() {
            assert!(is_epi(&site, nt));
        }
    }

    #[test]
    fn canonical_site_of_a_single_point_atom_is_terminal() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let site = Site::atomic(z2);
        let (point, _) = z2_atoms(z2);
        let canonical =
            restricted_canonical_topology(&site, &[("pt".to_string(), point)]).unwrap();
        assert_eq!(canonical.site.category.morphism_count(), 1);
        assert_eq!(canonical.site.topology.cover_count("pt"), 1);
    }

    #[test]
    fn canonical_site_rejects_non_atoms_and_duplicates() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let site = Site::atomic(z2);
        let (point, regular) = z2_atoms(z2);
        let two: BTreeSet<String> = ["a".to_string(), "b".to_string()].into();
        let fixed = constant_presheaf(z2, &two);
        assert!(matches!(
            restricted_canonical_topology(&site, &[("bad".to_string(), fixed)]),
            Err(SheafError::NotAnAtom(_))
        ));
        assert!(matches!(
            restricted_canonical_topology(
                &site,
                &[("a".to_string(), point.clone()), ("a".to_string(), regular.clone())]
            ),
            Err(SheafError::InvalidInput(_))
        ));
        let empty = restricted_canonical_topology(&site, &[]).unwrap();
        assert!(empty.site.category.objects().is_empty());
    }
}
