//! Fourier multiplier operators `M_mu^t` for probability measures whose
//! symbol deficit satisfies the two-sided bound
//! `|1 - mu^(xi)| ~ min{1, |xi|^(2 sigma)}`, together with the numerical
//! experiments that measure the bound's constants and exercise the growth,
//! Riemann-Lebesgue, integrability and sharpness estimates they imply —
//! on exact finite Fourier sums on the torus and on radial functions on R^n.
//!
//! Modules:
//! - [`special`]: spherical Bessel functions, Mehler deficit integrals,
//!   quadrature, geometric constants.
//! - [`multiplier`]: the catalog of closed-form symbols (sphere, ball, cube,
//!   Gaussian, wave, polytope), compositions, and equivalence-constant scans.
//! - [`torus`]: band-limited spectra on T^n, exact frequency-domain operator
//!   application, L^p norms, moduli of smoothness and spectral sums.
//! - [`radial`]: radial profiles on R^n, the spherical mean by quadrature,
//!   radial Fourier transforms and the sharpness example.
//! - [`harness`]: experiment runners, reports, CSV/JSON serialization.

pub mod error;
pub mod harness;
pub mod multiplier;
pub mod radial;
pub mod special;
pub mod torus;

pub use error::{Error, Result};
