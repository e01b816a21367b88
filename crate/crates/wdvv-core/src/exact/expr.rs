//! Raw expression trees and canonicalization into `Rx`.

use num_rational::BigRational;

use super::poly::Scalar;
use super::rational::Rx;
use super::vars::Var;

/// An unevaluated expression tree, as produced by the parser or by callers
/// assembling formulas programmatically.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Scalar),
    Var(Var),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(BigRational::from(num_bigint::BigInt::from(n)))
    }

    /// Evaluate the tree into canonical form. Two trees canonicalize to the
    /// same `Rx` exactly when their difference is the zero rational function.
    pub fn canonicalize(&self) -> Rx {
        match self {
            Expr::Const(c) => Rx::constant(c.clone()),
            Expr::Var(v) => Rx::var(*v),
            Expr::Add(xs) => xs
                .iter()
                .fold(Rx::zero(), |acc, x| &acc + &x.canonicalize()),
            Expr::Mul(xs) => xs
                .iter()
                .fold(Rx::one(), |acc, x| &acc * &x.canonicalize()),
            Expr::Sub(a, b) => &a.canonicalize() - &b.canonicalize(),
            Expr::Div(a, b) => &a.canonicalize() / &b.canonicalize(),
            Expr::Neg(a) => -&a.canonicalize(),
            Expr::Pow(a, k) => a.canonicalize().pow(*k),
        }
    }
}

/// True iff `e` is the zero rational function. Exact, no tolerance.
pub fn equals_zero(e: &Rx) -> bool {
    e.is_zero()
}
