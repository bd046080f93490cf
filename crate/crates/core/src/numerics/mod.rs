//! Scalar-generic numerical kernels shared by the front construction stages.

pub mod eigen;
pub mod interp;
pub mod ode;
pub mod optimize;
pub mod quad;
mod scalar;
pub mod stats;
pub mod tridiag;

pub use interp::{CubicHermite, Jet};
pub use ode::{Dopri5Options, DenseStep, Flow};
pub use scalar::Scalar;
pub use tridiag::{MonotoneFactor, Tridiagonal};
