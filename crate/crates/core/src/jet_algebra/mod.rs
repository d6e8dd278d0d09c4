//! Polynomials in ξ-jets of the field times Fourier modes of `aφ`, with
//! Laurent-in-`a` rational coefficients.

mod coeff;
mod expr;
mod format;
mod monomial;

pub use coeff::{inverse_factorial, Laurent};
pub(crate) use coeff::rational_pow;
pub use expr::{Expr, Homogeneity};
pub use monomial::{JetMonomial, TrigKind, TrigMode};
