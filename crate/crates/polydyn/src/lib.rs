//! Exact-arithmetic toolkit for polynomial dynamics over cyclotomic rational
//! fields: functional decomposition, semiconjugacy certificates, symmetry
//! groups of Julia-set type, Chebyshev normal forms, and periodic graph
//! curves of product endomorphisms.
//!
//! All arithmetic is exact (arbitrary-precision rationals over power bases of
//! roots of unity); there is no floating point anywhere in the crate.

pub mod algebra;
pub mod cert;
pub mod cli;
pub mod decompose;
pub mod dynamics;
pub mod normalform;
pub mod semiconj;

mod error;

pub use cli::run;
pub use error::{Error, Result};
