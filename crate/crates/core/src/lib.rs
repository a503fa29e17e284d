//! Computational tools for the spin mapping class group of a closed surface.
//!
//! The crate evaluates Dehn-twist words under the symplectic representations
//! over `Z` and `Z/2`, works with quadratic forms and their Arf invariants,
//! reduces and factors transvections, rewrites conjugated squares of chain
//! twists into named generators, and carries out the genus-2
//! Reidemeister–Schreier computation.
//!
//! Homology classes use the interleaved basis `x1, y1, ..., xg, yg`;
//! matrices act on column vectors; in a word the rightmost letter acts first.

pub mod calculus;
pub mod curves;
pub mod error;
pub mod relations;
pub mod repr;
pub mod rewriter;
pub mod scalar;
pub mod schreier;
pub mod symplectic;
pub mod words;

use num_bigint::BigInt;

pub use curves::CurveClassTable;
pub use error::{Error, Result};
pub use rewriter::{check_rewrite, rewrite_square_conjugate, GToken, RewriteCert};
pub use scalar::IntScalar;
pub use symplectic::{
    arf, enumerate_forms, intersection_int, intersection_mod2, preserves_form, quad_eval, square_transvection,
    transvection_mod2, Genus, Matrix, QuadForm, Vector, Z2Matrix, Z2Vec,
};
pub use words::{parse_word, GenWord, Letter, NamedElement};

/// Integral homology class with checked 64-bit entries.
pub type IntVec = Vector<i64>;
/// Integral symplectic matrix with checked 64-bit entries.
pub type IntMatrix = Matrix<i64>;
pub type BigVec = Vector<BigInt>;
pub type BigMatrix = Matrix<BigInt>;
