//! c-differential (c-DDT) and c-boomerang (c-BCT) tables of monomials x^d over
//! F_{p^n}, computed by exhaustive counting and by character sums.

pub mod bct_char;
pub mod characters;
pub mod error;
pub mod field;
pub mod scalar;
pub mod tables;
pub mod weil;

pub use error::{Error, Result};
pub use field::{Fe, FieldCtx, FieldSpec, LinMap};
pub use scalar::Scalar;

/// Working precision for every pinned tolerance.
pub type Real = f64;
pub type Cx = num_complex::Complex<Real>;
