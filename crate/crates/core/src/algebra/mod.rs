//! Exact rational arithmetic and sparse multivariate polynomials.
//!
//! Every polynomial lives over a shared [`VarTable`], a list of variable
//! names partitioned into blocks. The only term order is [`TermOrder`]'s
//! block-lexicographic order, which ranks earlier blocks above later ones and
//! compares lexicographically by declaration position inside a block.

pub(crate) mod division;
mod monomial;
mod order;
mod poly;
mod text;
mod univariate;
pub(crate) mod vars;

use num_bigint::BigInt;
use thiserror::Error;

pub use division::{divide_reduce, reduce, s_polynomial, Division};
pub use monomial::Monomial;
pub use order::TermOrder;
pub use poly::Polynomial;
pub use univariate::UniPoly;
pub use vars::VarTable;

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` as a reduced [`Rational`]. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("polynomials are defined over different variable tables")]
    VarTableMismatch,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("operation is undefined for the zero polynomial")]
    ZeroInput,
    #[error("invalid variable table: {0}")]
    InvalidVarTable(String),
    #[error("variable `{0}` is not in the variable table")]
    UnknownVariable(String),
    #[error("polynomial uses variable `{0}`, which has no counterpart in the target table")]
    VariableNotRepresentable(String),
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
}
