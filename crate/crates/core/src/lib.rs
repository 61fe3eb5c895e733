//! Orthogonal Ramanujan sequences, the orthogonal Ramanujan periodic
//! transform (ORPT) and q-band wavelet filter banks derived from it.
//!
//! - [`number_theory`]: factorization, totient, divisors.
//! - [`ors`]: Ramanujan sums and orthogonal Ramanujan sequences.
//! - [`orpt`]: the `R_N` basis, forward/inverse transforms, period detection.
//! - [`filterbank`]: samplers, circular convolution, q-band analysis and
//!   synthesis, multi-stage cascades and their single-filter equivalents.
//! - [`image2d`]: separable 2-D transform, cumulative energy, top-k coding.
//! - [`io`]: PGM, CSV and plain-text signal files.

pub mod error;
pub mod filterbank;
pub mod image2d;
pub mod io;
pub mod number_theory;
pub mod orpt;
pub mod ors;

pub use error::{Error, Result};
