//! Finite relational structures and a finite geometric formula fragment.
//!
//! Structures are one-sorted, with named relations and constants over a
//! finite universe of string element-ids. Formulas are built from truth
//! constants, equalities and inequalities, relation atoms, finite conjunction and
//! disjunction, and existential quantification; evaluation is exhaustive.
//! Isomorphism search extends partial maps back and forth between the two
//! universes; homogeneity asks the same question of every partial
//! isomorphism of a structure into itself.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type ElementId = String;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed structure: {0}")]
    Malformed(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("relation `{relation}` has arity {expected}, got {actual} arguments")]
    ArityMismatch {
        relation: String,
        expected: usize,
        actual: usize,
    },
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("tuple lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
}

/// Relation names with arities, plus constant names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    #[serde(default)]
    pub relations: BTreeMap<String, usize>,
    #[serde(default)]
    pub constants: Vec<String>,
}

impl Signature {
    pub fn validate(&self) -> Result<(), ModelError> {
        for (name, arity) in &self.relations {
            if *arity == 0 {
                return Err(ModelError::Malformed(format!("relation `{name}` has arity 0")));
            }
        }
        let distinct: BTreeSet<&String> = self.constants.iter().collect();
        if distinct.len() != self.constants.len() {
            return Err(ModelError::Malformed("duplicate constant name".to_string()));
        }
        Ok(())
    }
}

/// A finite model: universe, relation tables, constant values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub signature: Signature,
    pub universe: Vec<ElementId>,
    #[serde(default)]
    pub relations: BTreeMap<String, BTreeSet<Vec<ElementId>>>,
    #[serde(default)]
    pub constants: BTreeMap<String, ElementId>,
}

impl Structure {
    pub fn validate(&self) -> Result<(), ModelError> {
        self.signature.validate()?;
        let elems: BTreeSet<&ElementId> = self.universe.iter().collect();
        if elems.len() != self.universe.len() {
            return Err(ModelError::Malformed("duplicate universe element".to_string()));
        }
        for (name, table) in &self.relations {
            let arity = *self
                .signature
                .relations
                .get(name)
                .ok_or_else(|| ModelError::UnknownRelation(name.clone()))?;
            for tuple in table {
                if tuple.len() != arity {
                    return Err(ModelError::ArityMismatch {
                        relation: name.clone(),
                        expected: arity,
                        actual: tuple.len(),
                    });
                }
                for e in tuple {
                    if !elems.contains(e) {
                        return Err(ModelError::UnknownElement(e.clone()));
                    }
                }
            }
        }
        for name in &self.signature.constants {
            let value = self
                .constants
                .get(name)
                .ok_or_else(|| ModelError::Malformed(format!("constant `{name}` has no value")))?;
            if !elems.contains(value) {
                return Err(ModelError::UnknownElement(value.clone()));
            }
        }
        for name in self.constants.keys() {
            if !self.signature.constants.contains(name) {
                return Err(ModelError::Malformed(format!("undeclared constant `{name}`")));
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn has_element(&self, e: &str) -> bool {
        self.universe.iter().any(|u| u == e)
    }

    /// Relation membership; a relation with no table is empty.
    pub fn holds(&self, relation: &str, tuple: &[ElementId]) -> bool {
        self.relations
            .get(relation)
            .is_some_and(|table| table.contains(tuple))
    }
}

/// Formula syntax. Terms are strings resolved against the current variable
/// assignment first, then against the structure's constants. Negated
/// equality is primitive so that cardinality sequents stay inside the
/// fragment; no operation introduces it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Formula {
    True,
    False,
    Eq { left: String, right: String },
    Neq { left: String, right: String },
    Rel { name: String, args: Vec<String> },
    And { args: Vec<Formula> },
    Or { args: Vec<Formula> },
    Exists { var: String, body: Box<Formula> },
}

/// An entailment lhs ⊢ rhs over a shared variable context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequent {
    pub context: Vec<String>,
    pub lhs: Formula,
    pub rhs: Formula,
}

pub type Assignment = BTreeMap<String, ElementId>;

fn resolve(m: &Structure, assignment: &Assignment, term: &str) -> Result<ElementId, ModelError> {
    if let Some(v) = assignment.get(term) {
        return Ok(v.clone());
    }
    if let Some(v) = m.constants.get(term) {
        return Ok(v.clone());
    }
    Err(ModelError::UnboundVariable(term.to_string()))
}

/// Satisfaction over the finite universe; existentials search exhaustively.
/// Connectives are evaluated strictly so malformed subformulas always error.
pub fn eval(m: &Structure, phi: &Formula, assignment: &Assignment) -> Result<bool, ModelError> {
    match phi {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Eq { left, right } => {
            Ok(resolve(m, assignment, left)? == resolve(m, assignment, right)?)
        }
        Formula::Neq { left, right } => {
            Ok(resolve(m, assignment, left)? != resolve(m, assignment, right)?)
        }
        Formula::Rel { name, args } => {
            let arity = *m
                .signature
                .relations
                .get(name)
                .ok_or_else(|| ModelError::UnknownRelation(name.clone()))?;
            if args.len() != arity {
                return Err(ModelError::ArityMismatch {
                    relation: name.clone(),
                    expected: arity,
                    actual: args.len(),
                });
            }
            let tuple: Vec<ElementId> = args
                .iter()
                .map(|t| resolve(m, assignment, t))
                .collect::<Result<_, _>>()?;
            Ok(m.holds(name, &tuple))
        }
        Formula::And { args } => {
            let mut result = true;
            for arg in args {
                result &= eval(m, arg, assignment)?;
            }
            Ok(result)
        }
        Formula::Or { args } => {
            let mut result = false;
            for arg in args {
                result |= eval(m, arg, assignment)?;
            }
            Ok(result)
        }
        Formula::Exists { var, body } => {
            let mut result = false;
            for u in &m.universe {
                let mut inner = assignment.clone();
                inner.insert(var.clone(), u.clone());
                result |= eval(m, body, &inner)?;
            }
            Ok(result)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SequentVerdict {
    pub holds: bool,
    /// First context assignment (in universe order, leftmost variable
    /// varying slowest) making lhs true and rhs false.
    pub counterexample: Option<Assignment>,
}

pub fn satisfies_sequent(m: &Structure, sequent: &Sequent) -> Result<SequentVerdict, ModelError> {
    let vars = &sequent.context;
    let distinct: BTreeSet<&String> = vars.iter().collect();
    if distinct.len() != vars.len() {
        return Err(ModelError::Malformed("duplicate context variable".to_string()));
    }
    let n = m.universe.len();
    let mut odometer = vec![0usize; vars.len()];
    loop {
        if vars.is_empty() || n > 0 {
            let assignment: Assignment = vars
                .iter()
                .zip(&odometer)
                .map(|(v, &i)| (v.clone(), m.universe[i].clone()))
                .collect();
            if eval(m, &sequent.lhs, &assignment)? && !eval(m, &sequent.rhs, &assignment)? {
                return Ok(SequentVerdict {
                    holds: false,
                    counterexample: Some(assignment),
                });
            }
        }
        // Advance the rightmost slot first so assignments enumerate in
        // lexicographic context order.
        let mut pos = vars.len();
        loop {
            if pos == 0 {
                return Ok(SequentVerdict {
                    holds: true,
                    counterexample: None,
                });
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < n {
                break;
            }
            odometer[pos] = 0;
        }
    }
}

/// The pair of sequents that pin the universe size to exactly `n`: the first
/// asserts n pairwise distinct elements exist, the second that any n
/// pairwise distinct elements exhaust the universe. Variable names are kept
/// clear of the signature's constants.
pub fn cardinality_sequents(n: usize, signature: &Signature) -> (Sequent, Sequent) {
    assert!(n >= 1, "cardinality sequents need n >= 1");
    let taken: BTreeSet<&String> = signature.constants.iter().collect();
    let fresh = |base: String| {
        let mut name = base;
        while taken.contains(&name) {
            name.push('_');
        }
        name
    };
    let vars: Vec<String> = (1..=n).map(|i| fresh(format!("x{i}"))).collect();
    let y = fresh("y".to_string());
    let mut distinct = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            distinct.push(Formula::Neq {
                left: vars[i].clone(),
                right: vars[j].clone(),
            });
        }
    }
    let mut body = Formula::And {
        args: distinct.clone(),
    };
    for v in vars.iter().rev() {
        body = Formula::Exists {
            var: v.clone(),
            body: Box::new(body),
        };
    }
    let exists_n = Sequent {
        context: Vec::new(),
        lhs: Formula::True,
        rhs: body,
    };
    let mut context = vars.clone();
    context.push(y.clone());
    let at_most_n = Sequent {
        context,
        lhs: Formula::And { args: distinct },
        rhs: Formula::Or {
            args: vars
                .iter()
                .map(|v| Formula::Eq {
                    left: y.clone(),
                    right: v.clone(),
                })
                .collect(),
        },
    };
    (exists_n, at_most_n)
}

/// A finite partial map between two structures, expected to be injective
/// both ways and to preserve and reflect relation atoms and constants on its
/// domain.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialIso {
    pub pairs: Vec<(ElementId, ElementId)>,
}

/// Whether `pairs` is a well-formed partial isomorphism from `m` to `n`.
/// Unknown elements are errors; broken injectivity or atom preservation is
/// an honest `false`.
pub fn is_partial_iso(m: &Structure, n: &Structure, p: &PartialIso) -> Result<bool, ModelError> {
    if m.signature != n.signature {
        return Err(ModelError::SignatureMismatch);
    }
    for (a, b) in &p.pairs {
        if !m.has_element(a) {
            return Err(ModelError::UnknownElement(a.clone()));
        }
        if !n.has_element(b) {
            return Err(ModelError::UnknownElement(b.clone()));
        }
    }
    let mut forward: BTreeMap<&ElementId, &ElementId> = BTreeMap::new();
    let mut backward: BTreeMap<&ElementId, &ElementId> = BTreeMap::new();
    for (a, b) in &p.pairs {
        if *forward.entry(a).or_insert(b) != b || *backward.entry(b).or_insert(a) != a {
            return Ok(false);
        }
    }
    for (name, arity) in &m.signature.relations {
        for tuple in all_tuples(&forward.keys().map(|k| (*k).clone()).collect::<Vec<_>>(), *arity) {
            let image: Vec<ElementId> = tuple.iter().map(|e| forward[e].clone()).collect();
            if m.holds(name, &tuple) != n.holds(name, &image) {
                return Ok(false);
            }
        }
    }
    for c in &m.signature.constants {
        let cm = &m.constants[c];
        let cn = &n.constants[c];
        if let Some(image) = forward.get(cm) {
            if *image != cn {
                return Ok(false);
            }
        }
        if let Some(preimage) = backward.get(cn) {
            if *preimage != cm {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn all_tuples(pool: &[ElementId], k: usize) -> Vec<Vec<ElementId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                pool.iter().map(move |e| {
                    let mut t2 = t.clone();
                    t2.push(e.clone());
                    t2
                })
            })
            .collect();
    }
    out
}

/// Whether `map` is a total bijection preserving and reflecting every
/// relation and constant.
pub fn is_isomorphism(m: &Structure, n: &Structure, map: &BTreeMap<ElementId, ElementId>) -> bool {
    if map.len() != m.universe.len() || m.universe.len() != n.universe.len() {
        return false;
    }
    let targets: BTreeSet<&ElementId> = map.values().collect();
    if targets.len() != map.len() || !m.universe.iter().all(|e| map.contains_key(e)) {
        return false;
    }
    for (name, arity) in &m.signature.relations {
        for tuple in all_tuples(&m.universe, *arity) {
            let image: Vec<ElementId> = tuple.iter().map(|e| map[e].clone()).collect();
            if m.holds(name, &tuple) != n.holds(name, &image) {
                return false;
            }
        }
    }
    m.signature
        .constants
        .iter()
        .all(|c| map[&m.constants[c]] == n.constants[c])
}

fn pairs_valid(m: &Structure, n: &Structure, pairs: &[(ElementId, ElementId)]) -> bool {
    is_partial_iso(
        m,
        n,
        &PartialIso {
            pairs: pairs.to_vec(),
        },
    )
    .expect("elements drawn from the universes")
}

fn extend_search(
    m: &Structure,
    n: &Structure,
    pairs: &mut Vec<(ElementId, ElementId)>,
    alternate: bool,
) -> bool {
    if pairs.len() == m.universe.len() {
        return true;
    }
    let from_m = !alternate || pairs.len() % 2 == 0;
    if from_m {
        let matched: BTreeSet<&ElementId> = pairs.iter().map(|(a, _)| a).collect();
        let a = m
            .universe
            .iter()
            .find(|e| !matched.contains(e))
            .expect("unmatched element exists")
            .clone();
        let used: BTreeSet<&ElementId> = pairs.iter().map(|(_, b)| b).collect();
        let candidates: Vec<ElementId> = n.universe.iter().filter(|e| !used.contains(e)).cloned().collect();
        for b in candidates {
            pairs.push((a.clone(), b));
            if pairs_valid(m, n, pairs) && extend_search(m, n, pairs, alternate) {
                return true;
            }
            pairs.pop();
        }
    } else {
        let matched: BTreeSet<&ElementId> = pairs.iter().map(|(_, b)| b).collect();
        let b = n
            .universe
            .iter()
            .find(|e| !matched.contains(e))
            .expect("unmatched element exists")
            .clone();
        let used: BTreeSet<&ElementId> = pairs.iter().map(|(a, _)| a).collect();
        let candidates: Vec<ElementId> = m.universe.iter().filter(|e| !used.contains(e)).cloned().collect();
        for a in candidates {
            pairs.push((a, b.clone()));
            if pairs_valid(m, n, pairs) && extend_search(m, n, pairs, alternate) {
                return true;
            }
            pairs.pop();
        }
    }
    false
}

/// Backtracking isomorphism search that alternately matches the least
/// unmatched element of `m`, then of `n`, trying partners in universe order.
/// The first full extension found is returned, so the result is
/// deterministic; `None` means the structures are not isomorphic.
pub fn back_and_forth(
    m: &Structure,
    n: &Structure,
) -> Result<Option<BTreeMap<ElementId, ElementId>>, ModelError> {
    if m.signature != n.signature {
        return Err(ModelError::SignatureMismatch);
    }
    if m.universe.len() != n.universe.len() {
        return Ok(None);
    }
    let mut pairs = Vec::new();
    if extend_search(m, n, &mut pairs, true) {
        Ok(Some(pairs.into_iter().collect()))
    } else {
        Ok(None)
    }
}

/// Ground-truth isomorphism test: try every bijection in lexicographic
/// order. Exponential; used to cross-check [`back_and_forth`].
pub fn exhaustive_isomorphism(
    m: &Structure,
    n: &Structure,
) -> Result<Option<BTreeMap<ElementId, ElementId>>, ModelError> {
    if m.signature != n.signature {
        return Err(ModelError::SignatureMismatch);
    }
    if m.universe.len() != n.universe.len() {
        return Ok(None);
    }
    for image in n.universe.iter().permutations(n.universe.len()) {
        let map: BTreeMap<ElementId, ElementId> = m
            .universe
            .iter()
            .zip(image)
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        if is_isomorphism(m, n, &map) {
            return Ok(Some(map));
        }
    }
    Ok(None)
}

/// Completes a partial isomorphism to a full one if possible, matching the
/// remaining elements of `m` in universe order.
pub fn extend_to_isomorphism(
    m: &Structure,
    n: &Structure,
    p: &PartialIso,
) -> Result<Option<BTreeMap<ElementId, ElementId>>, ModelError> {
    if !is_partial_iso(m, n, p)? {
        return Ok(None);
    }
    if m.universe.len() != n.universe.len() {
        return Ok(None);
    }
    let mut pairs: Vec<(ElementId, ElementId)> = Vec::new();
    for (a, b) in &p.pairs {
        if !pairs.contains(&(a.clone(), b.clone())) {
            pairs.push((a.clone(), b.clone()));
        }
    }
    if extend_search(m, n, &mut pairs, false) {
        Ok(Some(pairs.into_iter().collect()))
    } else {
        Ok(None)
    }
}

/// Whether some isomorphism `m` → `n` carries `a` to `b` pointwise. Over
/// finite structures this is exactly "the two tuples satisfy the same
/// geometric formulas".
pub fn same_type(
    m: &Structure,
    a: &[ElementId],
    n: &Structure,
    b: &[ElementId],
) -> Result<bool, ModelError> {
    if m.signature != n.signature {
        return Err(ModelError::SignatureMismatch);
    }
    if a.len() != b.len() {
        return Err(ModelError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    for e in a {
        if !m.has_element(e) {
            return Err(ModelError::UnknownElement(e.clone()));
        }
    }
    for e in b {
        if !n.has_element(e) {
            return Err(ModelError::UnknownElement(e.clone()));
        }
    }
    let seed = PartialIso {
        pairs: a.iter().cloned().zip(b.iter().cloned()).collect(),
    };
    Ok(extend_to_isomorphism(m, n, &seed)?.is_some())
}

/// All partial isomorphisms from `m` to `n`, ordered by domain size, then by
/// domain (in universe order), then by image tuple.
pub fn enumerate_partial_isos(m: &Structure, n: &Structure) -> Result<Vec<PartialIso>, ModelError> {
    if m.signature != n.signature {
        return Err(ModelError::SignatureMismatch);
    }
    assert!(
        m.universe.len() <= 8 && n.universe.len() <= 8,
        "partial-map enumeration is exponential in universe size"
    );
    let mut out = Vec::new();
    for k in 0..=m.universe.len().min(n.universe.len()) {
        for domain in m.universe.iter().combinations(k) {
            for image in n.universe.iter().permutations(k) {
                let p = PartialIso {
                    pairs: domain
                        .iter()
                        .zip(&image)
                        .map(|(a, b)| ((*a).clone(), (*b).clone()))
                        .collect(),
                };
                if is_partial_iso(m, n, &p)? {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// The first partial isomorphism of `m` into itself that extends to no
/// automorphism, or `None` when `m` is homogeneous.
pub fn homogeneity_witness(m: &Structure) -> Result<Option<PartialIso>, ModelError> {
    for p in enumerate_partial_isos(m, m)? {
        if extend_to_isomorphism(m, m, &p)?.is_none() {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

pub fn is_homogeneous(m: &Structure) -> Result<bool, ModelError> {
    Ok(homogeneity_witness(m)?.is_none())
}
