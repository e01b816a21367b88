//! Canonical rational functions: reduced fraction of polynomials with a monic
//! denominator. Structural equality of canonical forms is a correct zero test.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::gcd::gcd;
use super::poly::{q, q2, Poly, Scalar};
use super::vars::Var;

/// A rational function in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct Rx {
    num: Poly,
    den: Poly,
}

impl Rx {
    /// Build the canonical form of `num/den`. Panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Rx {
        assert!(!den.is_zero(), "division by the zero polynomial");
        if num.is_zero() {
            return Rx {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (mut num, mut den) = if let Some(c) = g.constant_value() {
            debug_assert!(c == q(1));
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc != q(1) {
            let inv = q(1) / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Rx { num, den }
    }

    pub fn from_poly(p: Poly) -> Rx {
        Rx {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Rx {
        Rx::from_poly(Poly::zero())
    }

    pub fn one() -> Rx {
        Rx::from_poly(Poly::one())
    }

    pub fn constant(c: Scalar) -> Rx {
        Rx::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Rx {
        Rx::constant(q(n))
    }

    pub fn frac(n: i64, d: i64) -> Rx {
        Rx::constant(q2(n, d))
    }

    pub fn var(v: Var) -> Rx {
        Rx::from_poly(Poly::var(v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.constant_value() == Some(q(1)) && self.num.constant_value() == Some(q(1))
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_constant() {
            Some(self.num.constant_value()? / self.den.constant_value()?)
        } else {
            None
        }
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.constant_value() == Some(q(1)) {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    pub fn inv(&self) -> Rx {
        Rx::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i32) -> Rx {
        if k < 0 {
            return self.inv().pow(-k);
        }
        Rx {
            num: self.num.pow(k as u32),
            den: self.den.pow(k as u32),
        }
        .renormalize()
    }

    fn renormalize(self) -> Rx {
        // num/den already coprime up to leading-coefficient scaling
        let lc = self.den.leading_coeff();
        if lc == q(1) {
            self
        } else {
            let inv = q(1) / lc;
            Rx {
                num: self.num.scale(&inv),
                den: self.den.scale(&inv),
            }
        }
    }

    /// Quotient-rule derivative with respect to one variable.
    pub fn derivative(&self, v: Var) -> Rx {
        if self.den.constant_value() == Some(q(1)) {
            return Rx::from_poly(self.num.derivative(v));
        }
        if !self.num.contains_var(v) && !self.den.contains_var(v) {
            return Rx::zero();
        }
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Rx::new(dn, self.den.clone());
        }
        // divide the repeated part s = gcd(Q, dQ) out of the quotient rule up
        // front; the remaining reduction is almost always trivial
        let s = super::gcd::gcd(&self.den, &dd);
        let q1 = self.den.exact_div(&s).expect("gcd divides");
        let t = dd.exact_div(&s).expect("gcd divides");
        let num = &(&dn * &q1) - &(&self.num * &t);
        Rx::new(num, &self.den * &q1)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs = self.num.vars();
        vs.extend(self.den.vars());
        vs.sort();
        vs.dedup();
        vs
    }

    /// Substitute variables by rational functions; variables not in the map
    /// are kept.
    pub fn substitute(&self, map: &dyn Fn(Var) -> Option<Rx>) -> Rx {
        let sub_poly = |p: &Poly| -> Rx {
            let mut out = Rx::zero();
            for (m, c) in &p.terms {
                let mut term = Rx::constant(c.clone());
                let mut plain = Poly::one();
                for &(v, e) in &m.0 {
                    match map(v) {
                        Some(r) => term = &term * &r.pow(e as i32),
                        None => plain = &plain * &Poly::var(v).pow(e),
                    }
                }
                out = &out + &(&term * &Rx::from_poly(plain));
            }
            out
        };
        let n = sub_poly(&self.num);
        let d = sub_poly(&self.den);
        &n / &d
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, val: &dyn Fn(Var) -> Scalar) -> Option<Scalar> {
        use num_traits::Zero;
        let d = self.den.eval(val);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(val) / d)
    }
}

impl Add for &Rx {
    type Output = Rx;
    fn add(self, rhs: &Rx) -> Rx {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return Rx::new(&self.num + &rhs.num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        if g.constant_value() == Some(q(1)) {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            let den = &self.den * &rhs.den;
            // denominators coprime: only leading normalization needed
            return Rx { num, den }.renormalize();
        }
        let d1 = self.den.exact_div(&g).unwrap();
        let d2 = rhs.den.exact_div(&g).unwrap();
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        let den = &self.den * &d2;
        // d1 and d2 are coprime to each other and to the numerators, so any
        // residual common factor divides g
        let g2 = gcd(&num, &g);
        if g2.constant_value() == Some(q(1)) {
            Rx { num, den }.renormalize()
        } else {
            Rx {
                num: num.exact_div(&g2).unwrap(),
                den: den.exact_div(&g2).unwrap(),
            }
            .renormalize()
        }
    }
}

impl Sub for &Rx {
    type Output = Rx;
    fn sub(self, rhs: &Rx) -> Rx {
        self + &(-rhs)
    }
}

impl Neg for &Rx {
    type Output = Rx;
    fn neg(self) -> Rx {
        Rx {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &Rx {
    type Output = Rx;
    fn mul(self, rhs: &Rx) -> Rx {
        if self.is_zero() || rhs.is_zero() {
            return Rx::zero();
        }
        // cross-reduce before multiplying to keep intermediates small
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = rhs.den.exact_div(&g1).unwrap();
        let n2 = rhs.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        Rx {
            num: &n1 * &n2,
            den: &d1 * &d2,
        }
        .renormalize()
    }
}

impl Div for &Rx {
    type Output = Rx;
    fn div(self, rhs: &Rx) -> Rx {
        assert!(!rhs.is_zero(), "division by zero rational function");
        self * &rhs.inv()
    }
}

impl fmt::Display for Rx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.constant_value() == Some(q(1)) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
