//! Invariant de Rham cohomology of nilmanifolds over exact rationals.
//!
//! The crate turns the structure constants of a rational nilpotent Lie
//! algebra into the cochain complex of invariant forms, and computes — all in
//! exact arithmetic — Betti numbers, cup products and the top-degree pairing,
//! symplectic validation, the Koszul codifferential and symplectic star
//! operator, symplectically harmonic cohomology dimensions, Lefschetz ranks
//! and Hard Lefschetz verdicts, triple Massey products with full
//! indeterminacy, and a pencil scan that detects varying harmonic dimensions
//! across a family of symplectic forms.
//!
//! The `nilcohom` binary exposes all of this on the command line with a
//! built-in catalog of example algebras; see the crate README.

pub mod algebra;
pub mod catalog;
pub mod ce;
pub mod exterior;
pub mod linalg;
pub mod massey;
pub mod parse;
pub mod profile;
pub mod rational;
pub mod report;
pub mod symplectic;

pub use algebra::{AlgebraReport, StructureConstants};
pub use ce::{CohClass, CohomologyBasis, Differential};
pub use exterior::{Form, Monomial};
pub use parse::{parse_algebra, parse_form, ParseError};
pub use rational::Rational;
pub use symplectic::SymplecticData;
