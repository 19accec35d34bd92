//! The plus construction and sheafification.
//!
//! An element of `F⁺` over `c` is a matching family over a covering sieve of
//! `c`, taken up to agreement on a common covering refinement. Applying the
//! construction once yields a separated presheaf, twice a sheaf, and the
//! composite comparison map is an isomorphism exactly when the input already
//! was a sheaf.

use std::collections::{BTreeMap, BTreeSet};

use crate::fincat::{MorphId, ObjectId, UnionFind};
use crate::sitecore::{pullback_sieve, Sieve};

use super::{matching_families, NatTrans, Presheaf, Site};

type Family = BTreeMap<MorphId, String>;

/// Canonical element id for a class: its least representative's family,
/// rendered as `{f:x;g:y}` in arrow order.
fn encode_family(family: &Family) -> String {
    let inner = family
        .iter()
        .map(|(f, x)| format!("{f}:{x}"))
        .collect::<Vec<_>>()
        .join(";");
    format!("{{{inner}}}")
}

/// Two pairs at the same object are identified when some covering sieve
/// inside both of their domains sees equal values.
fn locally_agree(site: &Site, c: &str, a: &(Sieve, Family), b: &(Sieve, Family)) -> bool {
    site.topology.covers(c).any(|w| {
        w.arrows()
            .iter()
            .all(|g| a.0.contains(g) && b.0.contains(g) && a.1[g] == b.1[g])
    })
}

/// One application of the plus construction, with its comparison map.
///
/// Actions pull a representative pair back along the morphism; the
/// comparison map sends `x` to the class of the family it induces over the
/// maximal sieve. A verified topology lists every covering sieve explicitly,
/// so both lookups stay inside the enumerated pairs.
pub fn plus(site: &Site, f: &Presheaf) -> (Presheaf, NatTrans) {
    let cat = &site.category;
    let mut sets: BTreeMap<ObjectId, BTreeSet<String>> = BTreeMap::new();
    let mut pairs_at: BTreeMap<ObjectId, Vec<(Sieve, Family)>> = BTreeMap::new();
    let mut ids_at: BTreeMap<ObjectId, Vec<String>> = BTreeMap::new();
    for c in cat.objects() {
        let mut pairs: Vec<(Sieve, Family)> = Vec::new();
        for sieve in site.topology.covers(c) {
            for family in matching_families(cat, f, sieve) {
                pairs.push((sieve.clone(), family));
            }
        }
        let mut uf = UnionFind::new(pairs.len());
        for i in 0..pairs.len() {
            for j in (i + 1)..pairs.len() {
                if locally_agree(site, c, &pairs[i], &pairs[j]) {
                    uf.union(i, j);
                }
            }
        }
        // Pairs are generated in ascending (sieve, family) order, so the
        // least index of a class is its least representative.
        let mut rep: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..pairs.len() {
            let root = uf.find(i);
            rep.entry(root).or_insert(i);
        }
        let ids: Vec<String> = (0..pairs.len())
            .map(|i| encode_family(&pairs[rep[&uf.find(i)]].1))
            .collect();
        sets.insert(c.clone(), ids.iter().cloned().collect());
        pairs_at.insert(c.clone(), pairs);
        ids_at.insert(c.clone(), ids);
    }

    let mut actions: BTreeMap<MorphId, BTreeMap<String, String>> = BTreeMap::new();
    for h in cat.morphisms() {
        let (d, c) = (cat.dom(h), cat.cod(h));
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (i, (sieve, family)) in pairs_at[c].iter().enumerate() {
            let id = &ids_at[c][i];
            if map.contains_key(id) {
                continue;
            }
            let pulled = pullback_sieve(cat, sieve, h).expect("h lands at c");
            let pulled_family: Family = pulled
                .arrows()
                .iter()
                .map(|g| {
                    let hg = cat.compose(h, g).expect("composable");
                    (g.clone(), family[hg].clone())
                })
                .collect();
            let j = pairs_at[d]
                .iter()
                .position(|p| p.0 == pulled && p.1 == pulled_family)
                .expect("pullback of a covering pair is a covering pair");
            map.insert(id.clone(), ids_at[d][j].clone());
        }
        actions.insert(h.clone(), map);
    }

    let mut unit_components: BTreeMap<ObjectId, BTreeMap<String, String>> = BTreeMap::new();
    for c in cat.objects() {
        let max = Sieve::maximal(cat, c);
        let mut comp = BTreeMap::new();
        for x in f.set(c) {
            let family: Family = max
                .arrows()
                .iter()
                .map(|a| (a.clone(), f.apply(a, x).clone()))
                .collect();
            let i = pairs_at[c]
                .iter()
                .position(|p| p.0 == max && p.1 == family)
                .expect("maximal-sieve families are enumerated");
            comp.insert(x.clone(), ids_at[c][i].clone());
        }
        unit_components.insert(c.clone(), comp);
    }

    let result = Presheaf { sets, actions };
    let unit = NatTrans::new(cat, f.clone(), result.clone(), unit_components)
        .expect("comparison map is natural");
    (result, unit)
}

/// A sheaf together with the comparison map from the original presheaf.
#[derive(Debug, Clone)]
pub struct Sheafification {
    pub sheaf: Presheaf,
    pub unit: NatTrans,
}

/// Two applications of the plus construction.
pub fn sheafify(site: &Site, f: &Presheaf) -> Sheafification {
    let (once, first) = plus(site, f);
    let (twice, second) = plus(site, &once);
    let unit = NatTrans::compose(&site.category, &second, &first).expect("units compose");
    Sheafification { sheaf: twice, unit }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::sheafkit::{constant_presheaf, is_sheaf, yoneda, RawPresheaf};
    use crate::sitecore::saturate;

    fn two_to_one(cat: &crate::fincat::Category) -> Presheaf {
        let raw = RawPresheaf {
            sets: BTreeMap::from([
                ("1".to_string(), BTreeSet::from(["p".to_string(), "q".to_string()])),
                ("0".to_string(), BTreeSet::from(["r".to_string()])),
            ]),
            actions: BTreeMap::from([(
                "u".to_string(),
                BTreeMap::from([
                    ("p".to_string(), "r".to_string()),
                    ("q".to_string(), "r".to_string()),
                ]),
            )]),
        };
        Presheaf::from_raw(cat, &raw).unwrap()
    }

    #[test]
    fn collapsing_presheaf_plus_once() {
        let corpus = corpus::builtin();
        let arrow = corpus.category("arrow");
        let site = Site::atomic(arrow);
        let f = two_to_one(arrow);
        let (p, unit) = plus(&site, &f);
        assert_eq!(p.set("1"), &BTreeSet::from(["{id1:p;u:r}".to_string()]));
        assert_eq!(p.set("0"), &BTreeSet::from(["{id0:r}".to_string()]));
        assert_eq!(p.apply("u", "{id1:p;u:r}"), "{id0:r}");
        assert_eq!(unit.apply("1", "p"), "{id1:p;u:r}");
        assert_eq!(unit.apply("1", "q"), "{id1:p;u:r}");
        assert_eq!(unit.apply("0", "r"), "{id0:r}");
        assert!(!unit.is_natural_iso());
        assert!(is_sheaf(&site, &p));
    }

    #[test]
    fn sheafified_presheaves_satisfy_the_sheaf_condition() {
        let corpus = corpus::builtin();
        for name in ["arrow", "diamond", "z2", "z3", "discrete2"] {
            let cat = corpus.category(name);
            let site = Site::atomic(cat);
            for c in cat.objects() {
                let y = yoneda(cat, c).unwrap();
                let result = sheafify(&site, &y);
                assert!(is_sheaf(&site, &result.sheaf), "{name}/{c}");
                // A second pass changes nothing but names.
                let again = plus(&site, &result.sheaf);
                assert!(again.1.is_natural_iso(), "{name}/{c}");
            }
        }
    }

    #[test]
    fn unit_is_iso_exactly_for_sheaves() {
        let corpus = corpus::builtin();
        let arrow = corpus.category("arrow");
        let site = Site::atomic(arrow);
        let two: BTreeSet<String> = ["s".to_string(), "t".to_string()].into();
        let constant = constant_presheaf(arrow, &two);
        assert!(is_sheaf(&site, &constant));
        assert!(sheafify(&site, &constant).unit.is_natural_iso());
        let collapsing = two_to_one(arrow);
        assert!(!is_sheaf(&site, &collapsing));
        assert!(!sheafify(&site, &collapsing).unit.is_natural_iso());
    }

    #[test]
    fn empty_representable_fills_in() {
        let corpus = corpus::builtin();
        let arrow = corpus.category("arrow");
        let site = Site::atomic(arrow);
        let y0 = yoneda(arrow, "0").unwrap();
        assert!(y0.set("1").is_empty());
        assert!(!is_sheaf(&site, &y0));
        let result = sheafify(&site, &y0).sheaf;
        assert_eq!(result.set("1").len(), 1);
        assert_eq!(result.set("0").len(), 1);
        assert!(is_sheaf(&site, &result));
    }

    #[test]
    fn degenerate_topology_collapses_everything() {
        let corpus = corpus::builtin();
        let z2 = corpus.category("z2");
        let top = saturate(z2, &[Sieve::empty("*")]);
        let site = Site::new(z2.clone(), top).unwrap();
        let regular = yoneda(z2, "*").unwrap();
        let (p, _) = plus(&site, &regular);
        assert_eq!(p.set("*"), &BTreeSet::from(["{}".to_string()]));
        let result = sheafify(&site, &regular).sheaf;
        assert_eq!(result.total_size(), 1);
        assert!(is_sheaf(&site, &result));
    }
}
