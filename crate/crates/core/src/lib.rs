//! Row reduction of skew polynomial matrices to weak Popov form, and an
//! interleaved Gabidulin decoder built on top of it.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: `F_{q^m}` with constant-time Frobenius powers.
//! - [`poly`]: the skew polynomial ring `F[x; σ]`.
//! - [`matrix`]: vectors and matrices over the ring, simple transformations
//!   and the base-case reducer.
//! - [`reduce`]: the iterated and divide-&-conquer reducers.
//! - [`gabidulin`]: encoding, a rank-error channel and decoding.
//! - [`io`]: JSON file formats.
//! - [`sample`]: seeded random inputs.
//!
//! With `ℓ = 1` the decoder is an alternative to the linearized extended
//! Euclidean algorithm of the same complexity; the two differ only in how a
//! simple transformation is carried out.

pub mod error;
pub mod field;
pub mod gabidulin;
pub mod io;
pub mod matrix;
pub mod poly;
pub mod reduce;
pub mod sample;

pub use error::{Error, Result};
pub use field::{Backend, FieldContext, FieldElement, FieldSpec};
pub use gabidulin::{
    CodeParams, DecodeOutcome, DecodeReport, DecodingInstance, ErrorPattern, FailureReason,
};
pub use matrix::{Factor, ReductionStats, SkewMatrix, SkewVector, TransformRecord};
pub use poly::{MulStrategy, Side, SkewPoly};
pub use reduce::{
    reduce_dc, reduce_iterated, reduce_to_wpf, DefectHint, ReduceOptions, WpfReduction,
};
