//! Exact-arithmetic norms on combinatorial Banach spaces.
//!
//! The crate computes norms of finitely supported rational vectors in a
//! family of sequence spaces: the implicitly defined space `T` and its
//! dual `T*`, James-type spaces `J[base]` built over a pluggable base
//! norm, and the `l1`/`l2`/`linf` baselines. On top of the norm engines
//! it provides the combinatorics of k-subsets under the Hamming and
//! Johnson metrics, finite Lipschitz maps with their moduli, and
//! subset-search experiments that measure how far the image of a map
//! can be concentrated.
//!
//! All norm values on the primary path are exact: plain rationals, or
//! square roots of rationals for the Euclidean norm. No floating point
//! is used anywhere in the value-producing code.

pub mod combinatorics;
pub mod concentration;
pub mod dualnorm;
pub mod engine;
pub mod error;
pub mod james;
pub mod lipmaps;
pub mod scalar;
pub mod simplex;
pub mod tsirelson;
pub mod value;
pub mod vector;

pub use engine::{engine_by_name, EngineOptions, NormEngine};
pub use error::Error;
pub use scalar::Scalar;
pub use value::NormValue;
pub use vector::FiniteVector;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
