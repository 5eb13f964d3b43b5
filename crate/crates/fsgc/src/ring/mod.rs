//! Exact arithmetic: residues mod p^alpha, Laurent polynomials, Y-fractions,
//! truncated power series, integer polynomials and p-adic helpers.

pub mod intpoly;
pub mod laurent;
pub mod modular;
pub mod padic;
pub mod series;
pub mod yfrac;

pub use intpoly::IntPoly;
pub use laurent::LaurentPoly;
pub use modular::{binomial, divisors, is_prime, totient, ModScalar, PrimePower};
pub use padic::{FactorialTable, PadicNum};
pub use series::{Scalar, TruncatedSeries};
pub use yfrac::{YFraction, YPoly};
