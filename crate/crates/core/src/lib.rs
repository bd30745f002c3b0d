//! Numerical laboratory for a family of uniformly bounded spherical harmonics
//! on the 3-sphere built from Rudin-Shapiro sign sequences.
//!
//! The library covers the full experimental pipeline:
//!
//! * [`rudin_shapiro`]: the sign sequences themselves and their
//!   autocorrelation growth, measured with an FFT spectrum.
//! * [`hopf`]: Hopf coordinates on S3, the round cometric, Clifford tori,
//!   and the reference measures.
//! * [`harmonics`]: evaluation of the basis functions, sup-norm scans,
//!   orthonormality checks, and ambient harmonicity diagnostics.
//! * [`semiclassical`]: matrix elements of monomial phase-space symbols in
//!   closed form, the Clifford-torus limit, and convergence studies.
//! * [`quadrature`]: an independent brute-force integration path on S3 used
//!   to certify the closed-form engine at small degree.
//! * [`verify`]: the named verification checks grouped into runnable suites.

pub mod error;
pub mod harmonics;
pub mod hopf;
pub mod numerics;
pub mod quadrature;
pub mod rudin_shapiro;
pub mod semiclassical;
pub mod verify;

pub use error::{Error, Result};
