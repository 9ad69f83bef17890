//! Regularized Euler products for the Riemann zeta function and their
//! relatives: truncated sums and products, the window ratio `f_n(z)`, the
//! prime zeta function, Bernoulli-number polynomials, Stieltjes constants and
//! zero sums, elliptic-curve L-function truncations, and an exact check of a
//! character-sum identity for generalized Bernoulli numbers.

pub mod bernoulli;
pub mod char_identity;
pub mod elliptic;
pub mod error;
pub mod numerics;
pub mod prime_zeta;
pub mod primes;
pub mod report;
pub mod zeros_stieltjes;
pub mod zeta_core;

pub use bernoulli::{DirichletCharacter, RationalPolynomial};
pub use elliptic::{EllipticCurve, LocalData};
pub use error::{Error, Result};
pub use num::BigRational;
pub use numerics::{c64, format_complex, parse_complex, ComplexValue};
pub use primes::PrimeTable;
pub use report::{ConvergenceRow, ConvergenceTable};
pub use zeros_stieltjes::{StieltjesSet, ZeroTable};
