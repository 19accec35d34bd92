//! The built-in example corpus: small categories, relational structures,
//! and permutation groups exercised by every test suite and shipped as JSON
//! by the command-line tool.
//!
//! Categories are given in raw form with identity composition rows omitted;
//! loading fills them in. All binary-relation structures share the single
//! relation name `r` so that any two of them are comparable by isomorphism
//! search.

use std::collections::{BTreeMap, BTreeSet};

use crate::fincat::{validate_category, Category, RawCategory, RawMorphism};
use crate::gsets::{PermGroup, RawGroup};
use crate::modelkit::{Signature, Structure};

pub struct Corpus {
    pub categories: Vec<(String, Category)>,
    pub structures: Vec<(String, Structure)>,
    pub groups: Vec<(String, PermGroup)>,
}

impl Corpus {
    /// Panics on a name outside the corpus; corpus names are fixed.
    pub fn category(&self, name: &str) -> &Category {
        &self
            .categories
            .iter()
            .find(|(n, _)| n == name)
            .unwrap_or_else(|| panic!("no corpus category `{name}`"))
            .1
    }

    pub fn structure(&self, name: &str) -> &Structure {
        &self
            .structures
            .iter()
            .find(|(n, _)| n == name)
            .unwrap_or_else(|| panic!("no corpus structure `{name}`"))
            .1
    }

    pub fn group(&self, name: &str) -> &PermGroup {
        &self
            .groups
            .iter()
            .find(|(n, _)| n == name)
            .unwrap_or_else(|| panic!("no corpus group `{name}`"))
            .1
    }
}

fn raw(
    objects: &[&str],
    morphisms: &[(&str, &str, &str)],
    identities: &[(&str, &str)],
    composition: &[(&str, &str, &str)],
) -> RawCategory {
    RawCategory {
        objects: objects.iter().map(|o| o.to_string()).collect(),
        morphisms: morphisms
            .iter()
            .map(|(id, dom, cod)| RawMorphism {
                id: id.to_string(),
                dom: dom.to_string(),
                cod: cod.to_string(),
            })
            .collect(),
        identities: identities
            .iter()
            .map(|(o, m)| (o.to_string(), m.to_string()))
            .collect(),
        composition: composition
            .iter()
            .map(|(g, f, r)| (g.to_string(), f.to_string(), r.to_string()))
            .collect(),
    }
}

/// One object, one identity.
pub fn terminal_raw() -> RawCategory {
    raw(&["*"], &[("id", "*", "*")], &[("*", "id")], &[])
}

/// Two objects joined by a single arrow 0 → 1.
pub fn arrow_raw() -> RawCategory {
    raw(
        &["0", "1"],
        &[("id0", "0", "0"), ("id1", "1", "1"), ("u", "0", "1")],
        &[("0", "id0"), ("1", "id1")],
        &[],
    )
}

/// The cospan x → y ← z.
pub fn v_raw() -> RawCategory {
    raw(
        &["x", "y", "z"],
        &[
            ("idx", "x", "x"),
            ("idy", "y", "y"),
            ("idz", "z", "z"),
            ("f", "x", "y"),
            ("g", "z", "y"),
        ],
        &[("x", "idx"), ("y", "idy"), ("z", "idz")],
        &[],
    )
}

/// The poset 0 < a, b < 1 with both squares commuting through f01.
pub fn diamond_raw() -> RawCategory {
    raw(
        &["0", "1", "a", "b"],
        &[
            ("id0", "0", "0"),
            ("id1", "1", "1"),
            ("ida", "a", "a"),
            ("idb", "b", "b"),
            ("f0a", "0", "a"),
            ("f0b", "0", "b"),
            ("fa1", "a", "1"),
            ("fb1", "b", "1"),
            ("f01", "0", "1"),
        ],
        &[("0", "id0"), ("1", "id1"), ("a", "ida"), ("b", "idb")],
        &[("fa1", "f0a", "f01"), ("fb1", "f0b", "f01")],
    )
}

/// Two objects, no arrows between them.
pub fn discrete2_raw() -> RawCategory {
    raw(
        &["a", "b"],
        &[("ida", "a", "a"), ("idb", "b", "b")],
        &[("a", "ida"), ("b", "idb")],
        &[],
    )
}

/// One object with the cyclic group of order 2 as endomorphisms.
pub fn z2_raw() -> RawCategory {
    raw(
        &["*"],
        &[("e", "*", "*"), ("g", "*", "*")],
        &[("*", "e")],
        &[("g", "g", "e")],
    )
}

/// One object with the cyclic group of order 3 as endomorphisms.
pub fn z3_raw() -> RawCategory {
    raw(
        &["*"],
        &[("e", "*", "*"), ("g", "*", "*"), ("g2", "*", "*")],
        &[("*", "e")],
        &[
            ("g", "g", "g2"),
            ("g", "g2", "e"),
            ("g2", "g", "e"),
            ("g2", "g2", "g"),
        ],
    )
}

/// One object with the symmetric group on three letters as endomorphisms;
/// r is the 3-cycle, s a transposition, and the table is computed from the
/// underlying permutations.
pub fn s3_raw() -> RawCategory {
    let perms: [(&str, [usize; 3]); 6] = [
        ("e", [0, 1, 2]),
        ("r", [1, 2, 0]),
        ("r2", [2, 0, 1]),
        ("s", [1, 0, 2]),
        ("rs", [2, 1, 0]),
        ("r2s", [0, 2, 1]),
    ];
    let name_of = |p: &[usize; 3]| {
        perms
            .iter()
            .find(|(_, q)| q == p)
            .expect("products stay in the group")
            .0
    };
    let mut composition = Vec::new();
    for (gn, g) in &perms {
        for (fname, f) in &perms {
            if *gn == "e" || *fname == "e" {
                continue;
            }
            let product = [g[f[0]], g[f[1]], g[f[2]]];
            composition.push((gn.to_string(), fname.to_string(), name_of(&product).to_string()));
        }
    }
    RawCategory {
        objects: vec!["*".to_string()],
        morphisms: perms
            .iter()
            .map(|(name, _)| RawMorphism {
                id: name.to_string(),
                dom: "*".to_string(),
                cod: "*".to_string(),
            })
            .collect(),
        identities: BTreeMap::from([("*".to_string(), "e".to_string())]),
        composition,
    }
}

/// The cospan with a disjoint extra point; two connected components, only
/// one of which survives dense-part reduction.
pub fn v_plus_terminal_raw() -> RawCategory {
    raw(
        &["t", "x", "y", "z"],
        &[
            ("idt", "t", "t"),
            ("idx", "x", "x"),
            ("idy", "y", "y"),
            ("idz", "z", "z"),
            ("f", "x", "y"),
            ("g", "z", "y"),
        ],
        &[("t", "idt"), ("x", "idx"), ("y", "idy"), ("z", "idz")],
        &[],
    )
}

pub fn raw_categories() -> Vec<(String, RawCategory)> {
    vec![
        ("terminal".to_string(), terminal_raw()),
        ("arrow".to_string(), arrow_raw()),
        ("v".to_string(), v_raw()),
        ("diamond".to_string(), diamond_raw()),
        ("discrete2".to_string(), discrete2_raw()),
        ("z2".to_string(), z2_raw()),
        ("z3".to_string(), z3_raw()),
        ("s3".to_string(), s3_raw()),
        ("v_plus_terminal".to_string(), v_plus_terminal_raw()),
    ]
}

fn pure(n: usize) -> Structure {
    Structure {
        signature: Signature::default(),
        universe: (0..n).map(|i| i.to_string()).collect(),
        relations: BTreeMap::new(),
        constants: BTreeMap::new(),
    }
}

fn digraph(universe: &[&str], edges: &[(&str, &str)]) -> Structure {
    Structure {
        signature: Signature {
            relations: BTreeMap::from([("r".to_string(), 2)]),
            constants: Vec::new(),
        },
        universe: universe.iter().map(|e| e.to_string()).collect(),
        relations: BTreeMap::from([(
            "r".to_string(),
            edges
                .iter()
                .map(|(a, b)| vec![a.to_string(), b.to_string()])
                .collect::<BTreeSet<_>>(),
        )]),
        constants: BTreeMap::new(),
    }
}

pub fn structures() -> Vec<(String, Structure)> {
    vec![
        ("pure1".to_string(), pure(1)),
        ("pure2".to_string(), pure(2)),
        ("pure3".to_string(), pure(3)),
        ("pure4".to_string(), pure(4)),
        (
            "c3".to_string(),
            digraph(&["0", "1", "2"], &[("0", "1"), ("1", "2"), ("2", "0")]),
        ),
        (
            "c3r".to_string(),
            digraph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")]),
        ),
        (
            "p3".to_string(),
            digraph(&["0", "1", "2"], &[("0", "1"), ("1", "2")]),
        ),
        (
            "k3".to_string(),
            digraph(
                &["0", "1", "2"],
                &[
                    ("0", "1"),
                    ("0", "2"),
                    ("1", "0"),
                    ("1", "2"),
                    ("2", "0"),
                    ("2", "1"),
                ],
            ),
        ),
        ("lin2".to_string(), digraph(&["0", "1"], &[("0", "1")])),
        (
            "lin3".to_string(),
            digraph(&["0", "1", "2"], &[("0", "1"), ("0", "2"), ("1", "2")]),
        ),
        (
            "lin4".to_string(),
            digraph(
                &["0", "1", "2", "3"],
                &[
                    ("0", "1"),
                    ("0", "2"),
                    ("0", "3"),
                    ("1", "2"),
                    ("1", "3"),
                    ("2", "3"),
                ],
            ),
        ),
    ]
}

fn raw_group(degree: &[&str], elements: &[&[usize]]) -> RawGroup {
    RawGroup {
        degree: degree.iter().map(|p| p.to_string()).collect(),
        elements: elements
            .iter()
            .map(|images| {
                images
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (degree[i].to_string(), degree[j].to_string()))
                    .collect()
            })
            .collect(),
    }
}

pub fn raw_groups() -> Vec<(String, RawGroup)> {
    vec![
        ("trivial".to_string(), raw_group(&["0"], &[&[0]])),
        ("z2".to_string(), raw_group(&["0", "1"], &[&[0, 1], &[1, 0]])),
        (
            "z3".to_string(),
            raw_group(&["0", "1", "2"], &[&[0, 1, 2], &[1, 2, 0], &[2, 0, 1]]),
        ),
        (
            "z2x2".to_string(),
            raw_group(
                &["0", "1", "2", "3"],
                &[&[0, 1, 2, 3], &[1, 0, 2, 3], &[0, 1, 3, 2], &[1, 0, 3, 2]],
            ),
        ),
        (
            "s3".to_string(),
            raw_group(
                &["0", "1", "2"],
                &[
                    &[0, 1, 2],
                    &[1, 2, 0],
                    &[2, 0, 1],
                    &[1, 0, 2],
                    &[2, 1, 0],
                    &[0, 2, 1],
                ],
            ),
        ),
    ]
}

/// Builds and validates the whole corpus. Panics on an internal defect; the
/// corpus is fixed data, so failure here is a bug, not an input error.
pub fn builtin() -> Corpus {
    let categories = raw_categories()
        .into_iter()
        .map(|(name, raw)| {
            let cat = validate_category(&raw)
                .unwrap_or_else(|v| panic!("corpus category `{name}` invalid: {v:?}"));
            (name, cat)
        })
        .collect();
    let structures = structures()
        .into_iter()
        .inspect(|(name, m)| {
            m.validate()
                .unwrap_or_else(|e| panic!("corpus structure `{name}` invalid: {e}"));
        })
        .collect();
    let groups = raw_groups()
        .into_iter()
        .map(|(name, raw)| {
            let g = PermGroup::from_raw(&raw)
                .unwrap_or_else(|e| panic!("corpus group `{name}` invalid: {e}"));
            (name, g)
        })
        .collect();
    Corpus {
        categories,
        structures,
        groups,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_inventory() {
        let corpus = builtin();
        assert_eq!(corpus.categories.len(), 9);
        assert_eq!(corpus.structures.len(), 11);
        assert_eq!(corpus.groups.len(), 5);
        assert_eq!(corpus.group("s3").order(), 6);
        assert_eq!(corpus.group("z2x2").order(), 4);
        assert_eq!(corpus.structure("lin4").size(), 4);
        assert_eq!(corpus.category("diamond").morphism_count(), 9);
    }

    #[test]
    fn comparable_structure_pairs_cover_the_oracle_requirement() {
        let corpus = builtin();
        let mut comparable = 0;
        for (_, m) in &corpus.structures {
            for (_, n) in &corpus.structures {
                if m.signature == n.signature {
                    comparable += 1;
                }
            }
        }
        assert!(comparable >= 50, "only {comparable} same-signature pairs");
    }
}
