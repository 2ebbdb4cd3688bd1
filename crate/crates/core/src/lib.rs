//! Logarithmic Mahler measures of the hyperelliptic family `Q_k` and the
//! elliptic families `P_λ`, `R_λ`, computed by independent methods, together
//! with a harness that checks the identities relating them.
//!
//! All numerics are generic over a [`Real`] scalar. `f64` is the working
//! precision; [`Extended`] (double-double) is available when more headroom is
//! needed. Polynomials carry exact rational coefficients.

pub mod dd;
pub mod error;
pub mod identities;
pub mod mahler;
pub mod poly;
pub mod quadrature;
pub mod roots;
pub mod scalar;
pub mod specfun;

pub use error::{Error, Result};
pub use scalar::Real;

/// Double-double scalar used for the extended precision mode.
pub type Extended = dd::DoubleDouble;

/// Complex numbers at working precision.
pub type Complex64 = num_complex::Complex<f64>;

/// Polynomials with exact rational coefficients, as produced by the family
/// constructors.
pub type RationalPolynomial = poly::LaurentPolynomial<num_rational::BigRational>;

pub type QuadratureResult64 = quadrature::QuadratureResult<f64>;

pub type BranchPair64 = roots::BranchPair<f64>;

pub type MeasureValue64 = mahler::MeasureValue<f64>;

pub type SingularityProfile64 = specfun::SingularityProfile<f64>;

pub type MuParameter64 = specfun::MuParameter<f64>;
