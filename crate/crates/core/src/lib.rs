//! Exact, finite-scale order theory.
//!
//! Finite preorders and posets over dense indices, finite topologies and
//! bitopological preordered spaces, Dedekind-MacNeille completions, and
//! Richter-Peleg (multi-)utility families. Function-valued code is generic
//! over [`Scalar`]; the aliases below fix the usual choices.

pub mod completion;
pub mod error;
pub mod order;
pub mod representation;
pub mod scalar;
pub mod subset;
pub mod topology;
pub mod valuation;

pub use completion::{macneille, CutLattice, FrinkEmpty, WayBelowMode};
pub use error::{Error, Result};
pub use order::{FinitePoset, FinitePreorder, QuotientMap};
pub use representation::Family;
pub use scalar::Scalar;
pub use subset::{SubsetMask, MAX_ELEMENTS};
pub use topology::{BitopPreorderedSpace, FiniteTopology};
pub use valuation::Valuation;

/// Exact rational used throughout the verification suites.
pub type Rational = num_rational::Ratio<i64>;

/// Arbitrary-precision rational, for deep dyadic constructions.
pub type BigRational = num_rational::BigRational;

pub type QFunction = Valuation<Rational>;
pub type UtilityFamily = Family<Rational>;

pub type BigQFunction = Valuation<BigRational>;
pub type BigUtilityFamily = Family<BigRational>;

pub type FloatFunction = Valuation<f64>;
pub type FloatFamily = Family<f64>;
