//! Exact-arithmetic toolkit for finite-dimensional Lie algebras presented
//! as codifferentials on a purely odd space: cohomology, miniversal
//! deformations with base relations, diagonal contractions, and the
//! 3- and 4-dimensional moduli-space catalogs as machine-checked data.

pub mod basis;
pub mod laurent;
pub mod poly;
pub mod catalog;
pub mod cli;
pub mod cochain;
pub mod cohomology;
pub mod codifferential;
pub mod error;
pub mod linalg;
pub mod contraction;
pub mod miniversal;
pub mod multiindex;
pub mod roots;
pub mod ring;
pub mod scalar;

pub use basis::BasisChange;
pub use cochain::{bracket, circle, Cochain};
pub use codifferential::Codifferential;
pub use error::{CatalogError, ContractionError, CoreError, MiniversalError};
pub use scalar::{Field, Scalar};
pub use cli::run_cli;
