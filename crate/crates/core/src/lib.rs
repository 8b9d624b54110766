//! Fluxing-object semantics.
//!
//! Objects are finite partial functions of observer and time into the
//! universe of a classical structure. Where an object is undefined, atoms
//! about it are neither supported nor refuted, which yields a three-valued
//! logic that coincides with strong Kleene logic. Interrupted watching of an
//! imperceptibly changing object is what lets an observer change their view:
//! see [`analysis::verify_prop33`].

#![forbid(unsafe_code)]

pub mod analysis;
pub mod cli;
pub mod formula;
pub mod interval;
pub mod semantics;
pub mod structure;

pub use formula::{bind, enumerate_formulas, parse, BoundFormula, Formula};
pub use interval::{
    canonical_analysis, has_watching_gap, locate_gaps, CanonicalAnalysis, GapReport, Interval,
};
pub use semantics::{compose_valuation, supports, valuation, Context, TruthValue};
pub use structure::{validate, FluxingStructure, StructureDoc, TimePoint, ValidationReport};
