//! Exact symbolic verification of Courant algebroid identities.
//!
//! The crate instantiates Courant algebroids (quadratic Lie algebras,
//! Drinfeld doubles, bialgebroid doubles, the standard bracket on
//! `TM + T*M` with polynomial coefficients), checks the five Courant axioms
//! as exact polynomial identities, and builds and verifies the strongly
//! homotopy Lie algebra structure carried by the three-term resolution
//! `ker D -> C(M) -> Sections(E)`.
//!
//! Everything is computed over multivariate polynomials with arbitrary
//! precision rational coefficients, so every check is an exact zero test.

pub mod algebroid;
pub mod cartan;
pub mod courant;
pub mod dirac;
pub mod exact_poly;
pub mod gen;
pub mod graded;
pub mod linfty;
pub mod plan;
pub mod rational;
pub mod runner;

pub use exact_poly::{Poly, Rational};
