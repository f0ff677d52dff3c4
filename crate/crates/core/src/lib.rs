//! Open quantum cat maps on the quantized torus.
//!
//! A hyperbolic `M in SL(2, Z)` is quantized through its generator
//! factorization, multiplied by the quantization of a smooth cutoff `chi`, and
//! the spectrum of the resulting non-normal operator is computed with a
//! self-contained complex QR eigensolver.

pub mod catmap;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod experiments;
pub mod hn;
pub mod matrix;
pub mod metaplectic;
pub mod quantizer;

pub use error::{Error, Result};
