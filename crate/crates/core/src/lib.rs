//! Truncated Fock-space simulation of a binary coherent-state receiver built
//! from elementary continuous-variable gates.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below name the double-precision instantiation used by the CLI.

pub mod decomposition;
pub mod error;
pub mod fock;
pub mod gates;
pub mod information;
pub mod noise;
pub mod optimize;
pub mod generator;
pub mod receivers;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Operator64 = fock::Operator<f64>;
pub type StateVector64 = fock::StateVector<f64>;
pub type DensityMatrix64 = fock::DensityMatrix<f64>;

pub type Operator32 = fock::Operator<f32>;
pub type StateVector32 = fock::StateVector<f32>;
pub type DensityMatrix32 = fock::DensityMatrix<f32>;
