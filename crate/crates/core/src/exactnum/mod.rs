//! Exact arithmetic: rationals, cyclotomic fields `Q(ζ_N)`, and small dense
//! linear algebra over either.

mod cyclotomic;
pub mod linalg;
mod poly;
pub(crate) mod rational;
mod roots;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, lcm, Cyclotomic};
pub use linalg::Scalar;
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use roots::{branch_sqrt, sqrt_rational};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("m = {m} is not coprime to n + 1 = {order}")]
    InvalidRoot { order: u64, m: i64 },
    #[error("index {k} is outside 1..={n}")]
    IndexOutOfRange { k: i64, n: u64 },
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("malformed number {0:?}")]
    Parse(String),
}
