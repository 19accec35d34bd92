//! Closed subpresheaves, subobject lattices, atoms, and decompositions.
//!
//! Over a site, the subobjects of a sheaf are its subpresheaves fixed by the
//! closure operator. Atoms are the sheaves whose subobject lattice is exactly
//! {zero, whole}; every atom is generated by any single element outside its
//! zero part, which is what [`is_atom`] checks. [`enumerate_atoms`] searches
//! quotients of sheafified representables, which is exhaustive because each
//! atom is an epimorphic image of one of them.

use std::collections::{BTreeMap, BTreeSet};

use crate::fincat::{right_ore_witness, Category, MorphId, ObjectId, UnionFind};
use crate::sitecore::{enumerate_sieves, sieve_is_connected, Sieve};

use super::canon::presheaves_isomorphic;
use super::plus::sheafify;
use super::{constant_presheaf, yoneda, NatTrans, Presheaf, SheafError, Site, Subpresheaf};

/// Least closed subpresheaf containing `sub`: an element joins when the
/// arrows pulling it into `sub` form a covering sieve.
pub fn closure(site: &Site, sub: &Subpresheaf) -> Subpresheaf {
    let cat = &site.category;
    let f = &sub.parent;
    let mut subsets: BTreeMap<ObjectId, BTreeSet<String>> = BTreeMap::new();
    for c in cat.objects() {
        let mut grown = BTreeSet::new();
        for x in f.set(c) {
            let gens: Vec<MorphId> = cat
                .arrows_into(c)
                .into_iter()
                .filter(|a| sub.contains(cat.dom(a), f.apply(a, x)))
                .collect();
            // Action-closure of `sub` makes this arrow set a sieve already.
            let sieve = Sieve::generated(cat, c, &gens).expect("arrows into c");
            if site.topology.is_covering(&sieve) {
                grown.insert(x.clone());
            }
        }
        subsets.insert(c.clone(), grown);
    }
    Subpresheaf::new(cat, f, subsets).expect("closure is action-closed")
}

pub fn zero_subsheaf(site: &Site, f: &Presheaf) -> Subpresheaf {
    closure(site, &Subpresheaf::empty(&site.category, f))
}

/// Zero means the closure of the empty subpresheaf is everything. Over a
/// topology with empty covers this can hold with nonempty element sets.
pub fn is_zero(site: &Site, f: &Presheaf) -> bool {
    zero_subsheaf(site, f).is_full()
}

/// All closure-fixed subpresheaves, sorted. Exhaustive over element subsets,
/// so the total element count is capped at 20.
pub fn subsheaves(site: &Site, f: &Presheaf) -> Result<Vec<Subpresheaf>, SheafError> {
    let cat = &site.category;
    let elements: Vec<(ObjectId, String)> = f.elements().map(|(c, x)| (c.clone(), x.clone())).collect();
    let n = elements.len();
    if n > 20 {
        return Err(SheafError::InvalidInput(format!(
            "subobject enumeration over {n} elements exceeds the supported bound of 20"
        )));
    }
    let index: BTreeMap<(ObjectId, String), usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    // Action closure as implications between element indices.
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for m in cat.morphisms() {
        for x in f.set(cat.cod(m)) {
            let i = index[&(cat.cod(m).clone(), x.clone())];
            let j = index[&(cat.dom(m).clone(), f.apply(m, x).clone())];
            edges.push((i, j));
        }
    }
    // Per element, the arrows that could witness membership in a closure,
    // with the index of the element each one reaches.
    let reach: Vec<Vec<(MorphId, usize)>> = elements
        .iter()
        .map(|(c, x)| {
            cat.arrows_into(c)
                .into_iter()
                .map(|a| {
                    let target = index[&(cat.dom(&a).clone(), f.apply(&a, x).clone())];
                    (a, target)
                })
                .collect()
        })
        .collect();
    let covering_sets: BTreeMap<ObjectId, BTreeSet<BTreeSet<MorphId>>> = cat
        .objects()
        .iter()
        .map(|c| {
            (
                c.clone(),
                site.topology.covers(c).map(|s| s.arrows().clone()).collect(),
            )
        })
        .collect();

    let mut result = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let has = |i: usize| mask & (1 << i) != 0;
        if !edges.iter().all(|(i, j)| !has(*i) || has(*j)) {
            continue;
        }
        // Closure-fixed: no outside element sees a covering arrow set.
        let fixed = (0..n).filter(|i| !has(*i)).all(|i| {
            let witness: BTreeSet<MorphId> = reach[i]
                .iter()
                .filter(|(_, target)| has(*target))
                .map(|(a, _)| a.clone())
                .collect();
            !covering_sets[&elements[i].0].contains(&witness)
        });
        if !fixed {
            continue;
        }
        let mut subsets: BTreeMap<ObjectId, BTreeSet<String>> = cat
            .objects()
            .iter()
            .map(|c| (c.clone(), BTreeSet::new()))
            .collect();
        for (i, (c, x)) in elements.iter().enumerate() {
            if has(i) {
                subsets.get_mut(c).expect("object present").insert(x.clone());
            }
        }
        result.push(Subpresheaf {
            parent: f.clone(),
            subsets,
        });
    }
    result.sort();
    Ok(result)
}

/// Least closed subpresheaf containing the element `x` over `c`: the closure
/// of its action orbit.
pub fn generated_subsheaf(site: &Site, f: &Presheaf, c: &str, x: &str) -> Result<Subpresheaf, SheafError> {
    let cat = &site.category;
    if !cat.has_object(c) {
        return Err(SheafError::UnknownObject(c.to_string()));
    }
    if !f.set(c).contains(x) {
        return Err(SheafError::UnknownElement(format!("{x} over {c}")));
    }
    let mut subsets: BTreeMap<ObjectId, BTreeSet<String>> = cat
        .objects()
        .iter()
        .map(|o| (o.clone(), BTreeSet::new()))
        .collect();
    subsets.get_mut(c).expect("object present").insert(x.to_string());
    let mut frontier = vec![(c.to_string(), x.to_string())];
    while let Some((d, y)) = frontier.pop() {
        for a in cat.arrows_into(&d) {
            let next = (cat.dom(&a).clone(), f.apply(&a, &y).clone());
            if subsets.get_mut(&next.0).expect("object present").insert(next.1.clone()) {
                frontier.push(next);
            }
        }
    }
    let orbit = Subpresheaf::new(cat, f, subsets).expect("orbit is action-closed");
    Ok(closure(site, &orbit))
}

/// Atom test: nonzero, and every element outside the zero part generates the
/// whole sheaf. Equivalent to the subobject lattice being exactly two-point.
pub fn is_atom(site: &Site, f: &Presheaf) -> bool {
    let zero = zero_subsheaf(site, f);
    if zero.is_full() {
        return false;
    }
    f.elements().all(|(c, x)| {
        zero.contains(c, x)
            || generated_subsheaf(site, f, c, x)
                .expect("element of f")
                .is_full()
    })
}

/// The pointwise image of a transformation, as a subpresheaf of its target.
pub fn image_subpresheaf(cat: &Category, nt: &NatTrans) -> Subpresheaf {
    let subsets = nt
        .components
        .iter()
        .map(|(c, map)| (c.clone(), map.values().cloned().collect()))
        .collect();
    Subpresheaf::new(cat, &nt.target, subsets).expect("images are action-closed")
}

/// A sheaf map is an epimorphism exactly when its image is dense.
pub fn is_epi(site: &Site, nt: &NatTrans) -> bool {
    closure(site, &image_subpresheaf(&site.category, nt)).is_full()
}

/// Splits a sheaf into its connected summands. Requires every covering sieve
/// to be nonempty and connected; that makes each piece a closed subpresheaf.
pub fn sheaf_components(site: &Site, f: &Presheaf) -> Result<Vec<Subpresheaf>, SheafError> {
    let cat = &site.category;
    for c in cat.objects() {
        for s in site.topology.covers(c) {
            if !sieve_is_connected(cat, s) {
                return Err(SheafError::SiteNotLocallyConnected(format!(
                    "covering sieve {s} is not connected"
                )));
            }
        }
    }
    let elements: Vec<(ObjectId, String)> = f.elements().map(|(c, x)| (c.clone(), x.clone())).collect();
    let index: BTreeMap<(ObjectId, String), usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let mut uf = UnionFind::new(elements.len());
    for m in cat.morphisms() {
        for x in f.set(cat.cod(m)) {
            let i = index[&(cat.cod(m).clone(), x.clone())];
            let j = index[&(cat.dom(m).clone(), f.apply(m, x).clone())];
            uf.union(i, j);
        }
    }
    let mut groups: BTreeMap<usize, BTreeMap<ObjectId, BTreeSet<String>>> = BTreeMap::new();
    for (i, (c, x)) in elements.iter().enumerate() {
        groups
            .entry(uf.find(i))
            .or_default()
            .entry(c.clone())
            .or_default()
            .insert(x.clone());
    }
    let mut components: Vec<Subpresheaf> = groups
        .into_values()
        .map(|subsets| Subpresheaf::new(cat, f, subsets).expect("summands are action-closed"))
        .collect();
    components.sort();
    Ok(components)
}

pub fn is_connected_object(site: &Site, f: &Presheaf) -> Result<bool, SheafError> {
    Ok(sheaf_components(site, f)?.len() == 1)
}

/// The terminal sheaf of an atomic site and the atoms of its subobject
/// lattice, one per connected component of the underlying category.
#[derive(Debug, Clone)]
pub struct TerminalDecomposition {
    pub terminal: Presheaf,
    pub atoms: Vec<Subpresheaf>,
}

/// The site must be atomic: right-Ore category, covers exactly the nonempty
/// sieves.
fn check_atomic_site(site: &Site) -> Result<(), SheafError> {
    let cat = &site.category;
    if let Some(w) = right_ore_witness(cat) {
        return Err(SheafError::NotAtomicSite(format!(
            "cospan ({}, {}) into `{}` has no completion",
            w.left, w.right, w.target
        )));
    }
    for c in cat.objects() {
        let nonempty: BTreeSet<Sieve> = enumerate_sieves(cat, c)
            .expect("object exists")
            .into_iter()
            .filter(|s| !s.is_empty())
            .collect();
        let covering: BTreeSet<Sieve> = site.topology.covers(c).cloned().collect();
        if nonempty != covering {
            return Err(SheafError::NotAtomicSite(format!(
                "covers of `{c}` are not exactly the nonempty sieves"
            )));
        }
    }
    Ok(())
}

pub fn terminal_decomposition(site: &Site) -> Result<TerminalDecomposition, SheafError> {
    check_atomic_site(site)?;
    let one: BTreeSet<String> = BTreeSet::from(["*".to_string()]);
    let terminal = sheafify(site, &constant_presheaf(&site.category, &one)).sheaf;
    let subs = subsheaves(site, &terminal)?;
    let zero = zero_subsheaf(site, &terminal);
    let mut atoms = Vec::new();
    for s in &subs {
        if *s == zero {
            continue;
        }
        let minimal = subs.iter().all(|t| t == s || *t == zero || !t.le(s));
        if minimal {
            atoms.push(s.clone());
        }
    }
    Ok(TerminalDecomposition { terminal, atoms })
}

/// Element classes per object, each element mapped to the least member of
/// its class.
pub type Congruence = BTreeMap<ObjectId, BTreeMap<String, String>>;

/// Restricted growth strings: block index per item, first item in block 0.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn recurse(rgs: &mut Vec<usize>, pos: usize, maxval: usize, result: &mut Vec<Vec<usize>>) {
        if pos == rgs.len() {
            result.push(rgs.clone());
            return;
        }
        for b in 0..=maxval + 1 {
            rgs[pos] = b;
            recurse(rgs, pos + 1, maxval.max(b), result);
        }
    }
    let mut result = Vec::new();
    if n == 0 {
        result.push(Vec::new());
        return result;
    }
    let mut rgs = vec![0usize; n];
    recurse(&mut rgs, 1, 0, &mut result);
    result
}

/// Every action-compatible system of equivalence relations on the element
/// sets, sorted. The candidate space is the product of set partitions per
/// object, capped at one million.
pub fn presheaf_congruences(cat: &Category, f: &Presheaf) -> Result<Vec<Congruence>, SheafError> {
    let per_object: Vec<(ObjectId, Vec<String>, Vec<Vec<usize>>)> = cat
        .objects()
        .iter()
        .map(|c| {
            let elems: Vec<String> = f.set(c).iter().cloned().collect();
            let parts = set_partitions(elems.len());
            (c.clone(), elems, parts)
        })
        .collect();
    let mut total: u64 = 1;
    for (_, _, parts) in &per_object {
        total = total.saturating_mul(parts.len() as u64);
        if total > 1_000_000 {
            return Err(SheafError::InvalidInput(
                "congruence enumeration over these element sets is too large".to_string(),
            ));
        }
    }
    let mut result: Vec<Congruence> = Vec::new();
    let mut choice: Vec<usize> = vec![0; per_object.len()];
    loop {
        // Least member of each block, exploiting first-occurrence block order.
        let mut cong: Congruence = BTreeMap::new();
        for (idx, (c, elems, parts)) in per_object.iter().enumerate() {
            let rgs = &parts[choice[idx]];
            let mut least: Vec<&String> = Vec::new();
            let mut map = BTreeMap::new();
            for (i, e) in elems.iter().enumerate() {
                if rgs[i] == least.len() {
                    least.push(e);
                }
                map.insert(e.clone(), least[rgs[i]].clone());
            }
            cong.insert(c.clone(), map);
        }
        let compatible = cat.morphisms().all(|m| {
            let (d, c) = (cat.dom(m), cat.cod(m));
            let over_c = &cong[c];
            let over_d = &cong[d];
            f.set(c).iter().all(|x| {
                f.set(c)
                    .iter()
                    .filter(|y| over_c[*y] == over_c[x])
                    .all(|y| over_d[f.apply(m, y)] == over_d[f.apply(m, x)])
            })
        });
        if compatible {
            result.push(cong);
        }
        let mut pos = 0;
        loop {
            if pos == per_object.len() {
                result.sort();
                return Ok(result);
            }
            choice[pos] += 1;
            if choice[pos] < per_object[pos].2.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Collapses each congruence class to its least member.
pub fn quotient_presheaf(cat: &Category, f: &Presheaf, cong: &Congruence) -> Presheaf {
    let sets: BTreeMap<ObjectId, BTreeSet<String>> = cong
        .iter()
        .map(|(c, map)| (c.clone(), map.values().cloned().collect()))
        .collect();
    let actions = cat
        .morphisms()
        .map(|m| {
            let map = sets[cat.cod(m)]
                .iter()
                .map(|x| (x.clone(), cong[cat.dom(m)][f.apply(m, x)].clone()))
                .collect();
            (m.clone(), map)
        })
        .collect();
    Presheaf { sets, actions }
}

/// Every atom of the sheaf topos over the site, up to isomorphism.
///
/// Each atom is generated by a single element over some object, hence an
/// epimorphic image of a sheafified representable, hence the sheafification
/// of a quotient of one. Searching all congruence quotients of each
/// generator is therefore exhaustive; the atom test winnows the candidates
/// and isomorphic duplicates are dropped.
pub fn enumerate_atoms(site: &Site) -> Result<Vec<Presheaf>, SheafError> {
    let cat = &site.category;
    let mut atoms: Vec<Presheaf> = Vec::new();
    for c in cat.objects() {
        let generator = sheafify(site, &yoneda(cat, c).expect("object of cat")).sheaf;
        for cong in presheaf_congruences(cat, &generator)? {
            let candidate = sheafify(site, &quotient_presheaf(cat, &generator, &cong)).sheaf;
            if !is_atom(site, &candidate) {
                continue;
            }
            if atoms.iter().any(|a| presheaves_isomorphic(cat, a, &candidate).is_some()) {
                continue;
            }
            atoms.push(candidate);
        }
    }
    Ok(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::sitecore::saturate;

    fn regular_z2(cat: &Category) -> Presheaf {
        yoneda(cat, "*").unwrap()
    }

    fn trivial2(cat: &Category) -> Presheaf {
        let two: BTreeSet<String> = ["a".to_string(), "b".to_string()].into();
        constant_presheaf(cat, &two)
    }

    #[test]
    fn closure_of_dense_point_is_full() {
        let corpus = corpus::builtin();
        let arrow = corpus.category("arrow");
        let site = Site::atomic(arrow);
        let y1 = yoneda(arrow, "1").unwrap();
        let sub = Subpresheaf::new(
            arrow,
            &y1,
            BTreeMap::from([("0".to_string(), BTreeSet::from(["u".to_string()]))]),
        )
        .unwrap();
        assert!(closure(&site, &sub).is_full());
        let empty = Subpresheaf::empty(arrow, &y1);
        assert_eq!(closure(&site, &empty), empty);
    }

    #[test]
    fn subsheaf_counts_and_atoms() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let site = Site::atomic(z2);
        let regular = regular_z2(z2);
        assert_eq!(subsheaves(&site, &regular).unwrap().len(), 2);
        assert!(is_atom(&site, &regular));
        let fixed = trivial2(z2);
        assert_eq!(subsheaves(&site, &fixed).unwrap().len(), 4);
        assert!(!is_atom(&site, &fixed));
        let point: BTreeSet<String> = ["p".to_string()].into();
        assert!(is_atom(&site, &constant_presheaf(z2, &point)));
    }

    #[test]
    fn atom_test_agrees_with_subobject_count() {
        let corpus = corpus::builtin();
        for name in ["arrow", "z2", "z3", "discrete2"] {
            let cat = corpus.category(name);
            let site = Site::atomic(cat);
            for c in cat.objects() {
                let sheaf = sheafify(&site, &yoneda(cat, c).unwrap()).sheaf;
                let count = subsheaves(&site, &sheaf).unwrap().len();
                assert_eq!(is_atom(&site, &sheaf), count == 2, "{name}/{c}");
            }
            let two: BTreeSet<String> = ["a".to_string(), "b".to_string()].into();
            let sheaf = sheafify(&site, &constant_presheaf(cat, &two)).sheaf;
            let count = subsheaves(&site, &sheaf).unwrap().len();
            assert_eq!(is_atom(&site, &sheaf), count == 2, "{name}/constant");
        }
    }

    #[test]
    fn zero_detection() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let degenerate = Site::new(z2.clone(), saturate(z2, &[Sieve::empty("*")])).unwrap();
        let regular = regular_z2(z2);
        assert!(is_zero(&degenerate, &regular));
        assert!(!is_atom(&degenerate, &regular));
        let site = Site::atomic(z2);
        assert!(!is_zero(&site, &regular));
        assert!(is_zero(&site, &constant_presheaf(z2, &BTreeSet::new())));
    }

    #[test]
    fn image_and_epi() {
        let corpus = corpus::builtin();
        let arrow = corpus.category("arrow");
        let site = Site::atomic(arrow);
        let y0 = yoneda(arrow, "0").unwrap();
        let y1 = yoneda(arrow, "1").unwrap();
        let nt = NatTrans::new(
            arrow,
            y0,
            y1.clone(),
            BTreeMap::from([(
                "0".to_string(),
                BTreeMap::from([("id0".to_string(), "u".to_string())]),
            )]),
        )
        .unwrap();
        let image = image_subpresheaf(arrow, &nt);
        assert!(!image.is_full());
        assert!(is_epi(&site, &nt));

        let discrete2 = corpus.category("discrete2");
        let dsite = Site::atomic(discrete2);
        let ya = yoneda(discrete2, "a").unwrap();
        let two: BTreeSet<String> = ["s".to_string(), "t".to_string()].into();
        let target = constant_presheaf(discrete2, &two);
        let partial = NatTrans::new(
            discrete2,
            ya,
            target,
            BTreeMap::from([(
                "a".to_string(),
                BTreeMap::from([("ida".to_string(), "s".to_string())]),
            )]),
        )
        .unwrap();
        assert!(!is_epi(&dsite, &partial));
    }

    #[test]
    fn components_and_connectivity() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let site = Site::atomic(z2);
        assert_eq!(sheaf_components(&site, &regular_z2(z2)).unwrap().len(), 1);
        assert!(is_connected_object(&site, &regular_z2(z2)).unwrap());
        let comps = sheaf_components(&site, &trivial2(z2)).unwrap();
        assert_eq!(comps.len(), 2);
        assert!(comps[0].contains("*", "a"));
        assert!(comps[1].contains("*", "b"));

        let v = corpus.category("v");
        let vsite = Site::atomic(v);
        let err = sheaf_components(&vsite, &constant_presheaf(v, &BTreeSet::new())).unwrap_err();
        assert!(matches!(err, SheafError::SiteNotLocallyConnected(_)));
    }

    #[test]
    fn terminal_decomposition_counts() {
        let corpus = corpus::builtin();
        let d2 = terminal_decomposition(&Site::atomic(corpus.category("discrete2"))).unwrap();
        assert_eq!(d2.atoms.len(), 2);
        assert_eq!(d2.terminal.total_size(), 2);
        let z2 = terminal_decomposition(&Site::atomic(corpus.category("z2"))).unwrap();
        assert_eq!(z2.atoms.len(), 1);

        let not_ore = terminal_decomposition(&Site::atomic(corpus.category("v"))).unwrap_err();
        assert!(matches!(not_ore, SheafError::NotAtomicSite(_)));
        let arrow = corpus.category("arrow");
        let too_few_covers = terminal_decomposition(&Site::trivial(arrow)).unwrap_err();
        assert!(matches!(too_few_covers, SheafError::NotAtomicSite(_)));
    }

    #[test]
    fn reduced_site_decomposes_by_components() {
        let corpus = corpus::builtin();
        let (sub, top) = crate::sitecore::reduce_to_dense(corpus.category("v_plus_terminal"));
        let site = Site::new(sub, top).unwrap();
        let decomp = terminal_decomposition(&site).unwrap();
        assert_eq!(decomp.atoms.len(), 1);

        let (empty_cat, empty_top) = crate::sitecore::reduce_to_dense(corpus.category("v"));
        let empty_site = Site::new(empty_cat, empty_top).unwrap();
        assert_eq!(terminal_decomposition(&empty_site).unwrap().atoms.len(), 0);
    }

    #[test]
    fn congruences_and_quotients() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let congs = presheaf_congruences(z2, &regular_z2(z2)).unwrap();
        assert_eq!(congs.len(), 2);
        // The collapsing congruence sorts first; its quotient is the point.
        let q = quotient_presheaf(z2, &regular_z2(z2), &congs[0]);
        assert_eq!(q.total_size(), 1);
        let identity = quotient_presheaf(z2, &regular_z2(z2), &congs[1]);
        assert_eq!(identity, regular_z2(z2));

        let z3 = corpus.category("z3");
        let congs3 = presheaf_congruences(z3, &yoneda(z3, "*").unwrap()).unwrap();
        // Only the discrete and the full relation respect a 3-cycle.
        assert_eq!(congs3.len(), 2);
    }

    #[test]
    fn atom_enumeration_on_small_sites() {
        let corpus = corpus::builtin();
        assert_eq!(enumerate_atoms(&Site::atomic(corpus.category("arrow"))).unwrap().len(), 1);
        assert_eq!(enumerate_atoms(&Site::atomic(corpus.category("z2"))).unwrap().len(), 2);
        assert_eq!(enumerate_atoms(&Site::atomic(corpus.category("discrete2"))).unwrap().len(), 2);
        assert_eq!(enumerate_atoms(&Site::atomic(corpus.category("z3"))).unwrap().len(), 2);
    }

    #[test]
    fn generated_subsheaf_rejects_foreign_input() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let site = Site::atomic(z2);
        let regular = regular_z2(z2);
        assert!(matches!(
            generated_subsheaf(&site, &regular, "nope", "e"),
            Err(SheafError::UnknownObject(_))
        ));
        assert!(matches!(
            generated_subsheaf(&site, &regular, "*", "nope"),
            Err(SheafError::UnknownElement(_))
        ));
        assert!(generated_subsheaf(&site, &regular, "*", "e").unwrap().is_full());
    }
}
