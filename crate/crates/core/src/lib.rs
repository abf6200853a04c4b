//! Spectral calculus for the Jacobi trigonometric system on `(0, pi)`.
//!
//! The crate is organized around a small set of value types:
//!
//! * [`JacobiParams`] — the parameter pair `(alpha, beta)` with `alpha, beta >= -1/2`;
//! * [`SpectralFunction`] — a finite expansion `sum c_n phi_n` in the orthonormal
//!   eigenfunctions `phi_n` of the Jacobi operator, the exact-arithmetic backbone
//!   of every identity test;
//! * [`Quadrature`] / [`GridFunction`] — a composite Gauss–Legendre grid on `(0, pi)`
//!   and sampled values on it;
//! * [`ExponentFunction`] — a variable exponent `p(.)` with the Luxemburg norm
//!   machinery built on top.
//!
//! On top of these sit the heat and Poisson semigroups ([`semigroup`]), spectral
//! multipliers, fractional powers and Riesz transforms ([`multiplier`]), dyadic
//! blocks and square functions ([`paley`]), the four norms and the
//! norm-equivalence harness ([`spaces`]), and a self-check suite ([`selfcheck`]).

// negated comparisons like `!(t > 0.0)` are deliberate NaN-rejecting guards;
// long float literals are frozen oracle digits
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod jacobi;
pub mod multiplier;
pub mod paley;
pub mod quad;
pub mod selfcheck;
pub mod semigroup;
pub mod smooth;
pub mod spaces;
pub mod vexp;

pub use error::{Error, Result};
pub use jacobi::{JacobiParams, SpectralFunction, SpectralMode};
pub use quad::{GridFunction, Quadrature};
pub use vexp::{ExponentFunction, Weight};
