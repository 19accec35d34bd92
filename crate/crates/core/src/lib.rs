//! toposcalc-core: exhaustive, deterministic computations on finite sites,
//! sheaves of finite sets, finite relational structures, and permutation
//! groups.
//!
//! Everything here is desk scale: constructions are materialized as explicit
//! finite data (composition tables, sieve sets, element maps) and verified by
//! brute force where a cheaper algorithm would need trust. All collections
//! are ordered, so identical inputs produce identical outputs byte for byte.
//!
//! Module map:
//! - [`fincat`]: finite categories as composition tables, law validation,
//!   connected components, the right Ore condition, full subcategories.
//! - [`sitecore`]: sieves, Grothendieck topologies, saturation of generator
//!   families, the atomic topology, dense-part reduction, ideals.
//! - [`sheafkit`]: presheaves of finite sets, sheaf checking, sheafification
//!   by the double plus-construction, closed subpresheaves, atoms, connected
//!   components, terminal decomposition, the restricted canonical topology.
//! - [`modelkit`]: finite relational structures, a finite geometric formula
//!   fragment, sequents, back-and-forth isomorphism search, homogeneity.
//! - [`gsets`]: permutation groups, stabilizers, orbits, subgroup conjugacy
//!   classes, transitive actions, and the bridge from group actions to
//!   presheaves on a one-object category.
//! - [`corpus`]: the built-in example categories, structures, and groups
//!   used by the test suite and the command-line tools.
//! - [`checks`]: the cross-module property suite run over a corpus.

pub mod checks;
pub mod corpus;
pub mod fincat;
pub mod gsets;
pub mod modelkit;
pub mod sheafkit;
pub mod sitecore;
