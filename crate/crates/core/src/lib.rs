//! Norm attainment of dual truncated Toeplitz operators.
//!
//! The crate has two layers. The symbolic layer ([`inner`], [`theory`]) works
//! with finite Blaschke products and decides norm attainment of
//! `D_φ = (I - P_{K_u}) M_φ` on `K_u^⊥ = uH² ⊕ H²₋` from inner-function
//! factorizations of the symbol. The numeric layer ([`fourier`],
//! [`operators`]) models every operator as a finite Fourier section and is
//! used as evidence and as an independent check of the symbolic verdicts.
//! [`harness`] runs seeded identity suites and the worked examples over both
//! layers.

pub mod error;
pub mod fourier;
pub mod harness;
pub mod inner;
pub mod operators;
pub mod par;
pub mod theory;

pub use error::{Error, Result};
pub use fourier::{ArcSet, FourierVector, FrequencyBand};
pub use inner::{BlaschkeProduct, InnerOuterPair, Poly, RationalFunction};
pub use operators::{BasisTag, ExtremalSubspace, OperatorMatrix};
pub use par::Execution;
pub use theory::{NAReport, SymbolSpec, Verdict};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
