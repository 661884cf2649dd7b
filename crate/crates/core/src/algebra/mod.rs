//! Exact symbolic arithmetic over the rationals.

mod gcd;
mod integrate;
mod poly;
mod print;
mod rational_function;
mod roots;
mod symbol;

pub use gcd::{content, gcd, lcm, pseudo_remainder};
pub use integrate::{antiderivative, UniPoly};
pub use poly::{Monomial, Polynomial};
pub use print::{integer_parts, rf_factor_string, rf_to_string};
pub use rational_function::RationalFunction;
pub use roots::{nth_root, rational_nth_root};
pub use symbol::Symbol;

pub type Q = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("not a perfect {0}-th power")]
    NotAPerfectPower(u32),
    #[error("antiderivative needs a logarithmic term")]
    LogTermRequired,
    #[error("pole at evaluation point")]
    PoleAtPoint,
    #[error("symbol `{0}` has no value")]
    UnboundSymbol(String),
}
