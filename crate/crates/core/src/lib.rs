//! Lifted affine-invariant codes over finite-field towers.

pub mod analysis;
pub mod codes;
pub mod degrees;
pub mod error;
pub mod gf;
pub mod local;
pub mod space;

pub use error::{Error, Result};
pub use gf::{Elem, Field, FieldElement};
