//! Exact computations with unrolled quantum `sl_2` at a root of unity, viewed as a
//! ribbon Hopf `G`-coalgebra with `G = C/2Z`: universal invariants of colored links
//! and the Hennings-type invariants of 3-manifolds built from them.

mod coef;
pub mod checks;
pub mod cli;
pub mod cyclotomic;
pub mod diagrams;
pub mod error;
pub mod gauss;
pub mod integrals;
pub mod linalg;
pub mod manifolds;
mod memo;
pub mod pbw;
pub mod repeval;
pub mod ribbon;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};
pub use gauss::GaussQ;
pub use pbw::{AlgElem, Color, Monomial, TensorElem, Uq};
pub use scalar::{Backend, RootData, Scalar};
