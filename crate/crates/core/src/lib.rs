//! Algebra over finite fields for semi-local polynomial systems.

pub mod error;
pub mod batch;
pub mod closure;
pub mod cryptosystem;
pub mod field;
pub mod groebner;
pub mod instances;
pub mod jacobian;
pub mod linear;
pub mod poly;
pub mod semilocal;
pub mod system;
pub mod text;
pub mod unipoly;
pub mod weil;

pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldSpec};
pub use linear::LinearMap;
pub use poly::{Monomial, Polynomial};
pub use system::PolySystem;
pub use unipoly::UniPoly;
