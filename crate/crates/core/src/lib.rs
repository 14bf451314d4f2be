//! Finite ordered groupoids viewed as double categories, finite
//! left-cancellative categories, and the machinery relating them: the
//! functors `L` and `G`, the units `η` and `κ`, topologies on both sides,
//! sheaf checks and morphisms of sites.
//!
//! Everything here is finite and exhaustive. Structures are validated once on
//! construction and are immutable afterwards; checks return verdicts that
//! carry counterexample witnesses.

pub mod bridge;
pub mod error;
pub mod fincat;
pub mod fixtures;
pub mod format;
pub mod id;
pub mod ogpd;
pub mod sheaves;
pub mod sites;
pub mod topology;
mod util;

pub use error::{Error, Result};
pub use fincat::{
    check_weak_equivalence, find_natural_isomorphism, validate_category, ArrIx, FiniteCategory, Functor,
    NaturalTransformation, ObjIx, RawCategory, SubobjectClass, WeakEquivalenceVerdict,
};
pub use id::Id;
pub use sheaves::{DoublePresheaf, Presheaf};
pub use topology::{EhresmannTopology, GrothendieckTopology, Sieve, VerticalSieve};
pub use ogpd::{
    check_double_weak_equivalence, hom_ordered_groupoid, validate_ordered_groupoid, DoubleFunctor,
    HorizontalTransformation, LambdaTransformation, MaxObjectStructure, OrderedGroupoid, RawOrderedGroupoid,
};


