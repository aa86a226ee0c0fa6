//! Etale cohomology rings of rings of integers of totally imaginary number
//! fields, computed through Artin-Verdier duality, together with explicit
//! cup products and the vanishing criterion for Kim's arithmetic
//! Chern-Simons invariant.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`], [`matz`], [`poly`], [`fpoly`] — exact integer, matrix and
//!   polynomial arithmetic (HNF/SNF, resultants, factorization mod p).
//! * [`nf`] — number fields: integral bases, maximal orders, norms,
//!   signatures, roots of unity.
//! * [`ideal`] — fractional ideals in Hermite normal form, prime
//!   splitting, valuations, divisors.
//! * [`classunit`] — class groups, principality testing, unit groups.
//! * [`ext`] — cyclic extensions L|K, Kummer theory, Artin symbols,
//!   Hilbert 90 witnesses.
//! * [`cohomology`] — the duality description of H^i(X, Z/n) and the two
//!   cup product formulas.
//! * [`kim`] — the Chern-Simons vanishing criterion and batch scans.

pub mod arith;
pub mod error;
pub mod ext;
pub mod fpoly;
pub mod classunit;
pub mod cohomology;
pub mod embed;
pub mod ideal;
pub mod kim;
pub mod lll;
pub mod matz;
pub mod nf;
pub mod parse;
pub mod poly;

pub use error::{Error, Result};
