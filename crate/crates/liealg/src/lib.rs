//! Exact-arithmetic computational Lie theory.
//!
//! The crate builds Chevalley Lie algebras from root data over the rationals,
//! classifies distinguished parabolic subalgebras and the nilpotent orbits
//! they induce, attaches integral sl2-triples to distinguished orbits, and
//! reduces the resulting one-parameter subgroups modulo good primes, where
//! they are realized as explicit matrix groups via truncated exponentials.
//! Every computation is exact: scalars are arbitrary-precision rationals or
//! finite-field elements, never floats.

pub mod chevalley;
pub mod error;
pub mod expmod;
pub mod rootdata;
pub mod matrix;
pub mod orbits;
pub mod parabolic;
pub mod scalar;
pub mod sl2;
pub mod springer;

pub use error::{LieError, Result};
pub use matrix::Mat;
pub use scalar::{Fq, Rat};

/// Matrix over the rationals, the default exact scalar type.
pub type MatQ = Mat<Rat>;
/// Matrix over a finite field.
pub type MatF = Mat<Fq>;
/// Matrix over the integers.
pub type MatZ = Mat<num_bigint::BigInt>;
