//! Arithmetic-progression sections of real polynomials and entire functions.
//!
//! Given `P(z) = Σ a_j z^j` and a progression `(m, r)`, the section
//! `P_r(z) = Σ_{j ≡ r (mod m)} a_j z^j` keeps every m-th coefficient. When the
//! zeros of a real `P` sit in the sector `2π/3 < |Arg z| ≤ π` (m = 3) or in the
//! open left half-plane (m = 4), every zero of every section lies on the `m`
//! radial rays `Im z^m = 0, Re z^m ≤ 0`. This crate computes the sections,
//! locates their zeros with an independent simultaneous-iteration solver, and
//! certifies ray membership. It also reproduces the constructive bracketing of
//! the positive zeros of the rotated section and extends the check to
//! truncated Weierstrass products.
//!
//! Module map:
//!
//! - [`poly`]: complex polynomials, Horner evaluation, Descartes sign changes
//! - [`multisection`]: sections, the rotated section `H`, orbit expansion
//! - [`rootfind`]: Aberth–Ehrlich oracle with residual certification
//! - [`rays`]: regions, ray families, q-products, the Θ-map and bracketing
//! - [`entire`]: Weierstrass-form specs, truncation, stabilized section zeros
//! - [`io`], [`svg`], [`fuzz`], [`fixtures`]: the command-line surface

pub mod entire;
pub mod error;
pub mod fixtures;
pub mod fuzz;
pub mod io;
pub mod matching;
pub mod multisection;
pub mod poly;
pub mod rays;
pub mod rootfind;
pub mod svg;

pub use error::{Error, Result};
pub use multisection::SectionParams;
pub use num_complex::Complex64;
pub use poly::Polynomial;

/// Shorthand for a complex number from its parts.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
