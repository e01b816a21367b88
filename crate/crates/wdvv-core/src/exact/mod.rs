//! Canonical exact arithmetic: arbitrary-precision rationals, sparse
//! multivariate polynomials with a fixed graded-lex order, and reduced
//! rational functions with decidable equality to zero.

pub mod expr;
pub mod gcd;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod vars;

pub use expr::{equals_zero, Expr};
pub use gcd::gcd;
pub use parse::{parse, print, to_json, ParseError};
pub use poly::{q, q2, Monomial, Poly, Scalar};
pub use rational::Rx;
pub use vars::{parse_var, Family, Var};
