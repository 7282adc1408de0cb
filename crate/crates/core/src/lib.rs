//! Exact computer algebra for the Itô Hopf algebra over a finite-dimensional
//! associative algebra, directed double product integrals, Yang-Baxter checks
//! and the resulting deformation of the coproduct.
//!
//! All arithmetic is over the rationals and exact.

pub mod algebra;
pub mod error;
pub mod fixtures;
pub mod hseries;
pub mod linalg;
pub mod linear;
pub mod par;
pub mod prodint;
pub mod quantise;
pub mod random;
pub mod scalar;
pub mod tensor;
pub mod ybe;

pub use algebra::{AlgebraDef, AlgebraElt, LegTensor, Slot, UnitalElt};
pub use error::{Error, Result};
pub use hseries::HSeries;
pub use linear::LinearSpace;
pub use scalar::Scalar;
pub use tensor::{MultiTensorElt, TensorElt, Word};
