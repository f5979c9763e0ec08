//! Exact generation and verification of dividing formulas `n | Q(n)`.
//!
//! `Q(n)` comes from inclusion–exclusion over the prime divisors of `n`
//! ([`arith::phi1`], [`arith::phi2`]) applied to a sequence counting the
//! solutions of `f^n(x) = x` or `g^n(x) = -x`. Three independent routes
//! compute those counts for the maps `g_j`:
//!
//! * closed-form recurrences ([`sequences`]),
//! * exact iteration of the piecewise-linear map ([`interval_map`]),
//! * symbolic edge-count tensors ([`symbolic`]).
//!
//! The numeric kernels are generic over the scalar type; the aliases below
//! fix the exact instantiations used throughout.

pub mod arith;
pub mod error;
pub mod expr;
pub mod interval_map;
pub mod report;
pub mod scalar;
pub mod sequences;
pub mod symbolic;

pub use arith::{divisibility_check, factorize, phi1, phi2, Divisibility, Factorization};
pub use error::{Error, Result};
pub use interval_map::{build_gj, count_antifixed, count_fixed, Equation, PieceCap, PlMap};
pub use sequences::{Guarantees, Sequence, SequenceKind};
pub use symbolic::{expand_word, EdgeLabel, EdgeTensor, PositionBucket};

/// Arbitrary-precision signed integer used for sequence values.
pub type Int = num_bigint::BigInt;

/// Exact rational coordinate.
pub type Rational = num_rational::BigRational;

/// Piecewise-linear map with exact rational nodes.
pub type IntervalMap = PlMap<Rational>;

/// Edge-count tensor with arbitrary-precision entries.
pub type BigEdgeTensor = EdgeTensor<num_bigint::BigUint>;

/// Default cap on the word length in [`expand_word`].
pub const DEFAULT_SYMBOL_CAP: usize = 1_000_000;
