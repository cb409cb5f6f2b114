//! Exact-arithmetic toolkit for multivariate stable polynomials.
//!
//! A polynomial is *stable* if it never vanishes when all of its variables
//! lie in the open upper half-plane, and *real stable* if in addition its
//! coefficients are real. This crate decides and certifies such properties
//! exactly over the Gaussian rationals: univariate stability through Sturm
//! sequences and Hermite-Biehler decompositions, multivariate stability
//! through exact line restrictions and sections (refutations are
//! certificates, acceptances are labeled sampled), linear-operator symbols
//! and preserver certification, polarization to multi-affine polynomials,
//! transport between products of circular domains, Lee-Yang classes, and
//! Szasz-type growth bounds.

pub mod domains;
pub mod error;
pub mod gen;
pub mod growth;
pub mod mpoly;
pub mod multi;
pub mod multiindex;
pub mod operator;
pub mod parse;
pub mod polarization;
pub mod roots;
pub mod scalar;
pub mod sturm;
pub mod uni;
pub mod upoly;

pub use error::{Error, Result};
pub use mpoly::{MPoly, VarNames};
pub use multiindex::ExpVec;
pub use scalar::{Rat, Scalar};
pub use upoly::UPoly;
