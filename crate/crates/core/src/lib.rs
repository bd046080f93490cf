pub mod error;
pub mod linearized;
pub mod numerics;
pub mod pde;
pub mod pipeline;
pub mod profile;
pub mod reaction;
pub mod scenario;
pub mod spectral;
pub mod verify;

/// Scalar type of the front-construction pipeline.
pub type Real = f64;
