//! Numerical toolkit for twisted modular L-functions at desk scale.
//!
//! The crate realizes, end to end, the explicit-formula layer of the
//! fourth-moment analysis for L(s, f×χ) with f a weight-2 newform of prime
//! level q and χ a primitive character of odd prime modulus p: Dirichlet
//! characters and Gauss sums, Kloosterman sums and their exact identities,
//! Bessel kernels and the Kuznetsov-side transforms, twisted Voronoi
//! summation, the Petersson trace formula, approximate functional
//! equations, and a moment harness that reports the fourth moment
//! Σ_f |L(½, f×χ)|⁴ against its expected growth shape.

pub mod arith;
pub mod characters;
pub mod error;
pub mod expsums;
pub mod lfunc;
pub mod newforms;
pub mod quadrature;
pub mod report;
pub mod specfun;
pub mod transforms;
pub mod windows;

pub use error::{Error, Result};
pub use report::VerificationReport;

pub type C64 = num_complex::Complex64;
