//! Sparse multivariate polynomials over arbitrary-precision rationals, with a
//! fixed graded lexicographic monomial order. Representations are unique: no
//! zero coefficients, no zero exponents.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::vars::Var;

pub type Scalar = BigRational;

pub fn q(n: i64) -> Scalar {
    BigRational::from(BigInt::from(n))
}

pub fn q2(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Monomial: sorted exponent list, no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0, self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Componentwise min of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for &(v, e) in &self.0 {
            let f = other.exponent(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Exact division; `None` when some exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut j = 0;
        for &(v, e) in &self.0 {
            while j < other.0.len() && other.0[j].0 < v {
                return None; // divisor has a variable we lack
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((v, e - f));
                }
                j += 1;
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }
}

/// Graded lexicographic order: total degree first, then lexicographic with the
/// greatest variable compared first.
impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Walk both exponent lists from the greatest variable down.
        let (mut i, mut j) = (self.0.len(), other.0.len());
        loop {
            if i == 0 && j == 0 {
                return Ordering::Equal;
            }
            if i == 0 {
                // other still has variables below everything we had
                return Ordering::Greater;
            }
            if j == 0 {
                return Ordering::Less;
            }
            let (va, ea) = self.0[i - 1];
            let (vb, eb) = other.0[j - 1];
            match va.cmp(&vb) {
                Ordering::Greater => return Ordering::Greater, // we have a higher var with positive exp
                Ordering::Less => return Ordering::Less,
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Equal => {
                        i -= 1;
                        j -= 1;
                    }
                    ord => return ord,
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(v, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse polynomial: monomial -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(q(1))
    }

    pub fn constant(c: Scalar) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), q(1));
        Poly { terms }
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<Scalar> {
        if self.is_zero() {
            Some(q(0))
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Leading (greatest) monomial in the fixed order.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Scalar {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(|| q(0))
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn max_var(&self) -> Option<Var> {
        self.terms.keys().flat_map(|m| m.vars()).max()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.vars()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to one variable.
    pub fn derivative(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let lowered = m.div(&Monomial::var(v)).unwrap();
            out.add_term(lowered, c * q(e as i64));
        }
        out
    }

    /// Greatest common monomial factor of all terms (1 for the zero poly).
    pub fn content_monomial(&self) -> Monomial {
        let mut it = self.terms.keys();
        let mut acc = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        for m in it {
            acc = acc.gcd(m);
            if acc.is_one() {
                break;
            }
        }
        acc
    }

    pub fn div_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.div(m).expect("monomial does not divide"), c.clone()))
                .collect(),
        }
    }

    /// Exact multivariate division. Returns `None` if `d` does not divide.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&(q(1) / c)));
        }
        let (dm, dc) = d.leading().unwrap();
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        loop {
            let (qm, qc) = match rem.leading() {
                None => break,
                Some((rm, rc)) => (rm.div(&dm)?, rc / &dc),
            };
            // subtract (qm, qc) * d in place; the leading term cancels exactly
            for (m, c) in &d.terms {
                rem.add_term(qm.mul(m), -(&qc * c));
            }
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Divide all coefficients so the leading coefficient becomes 1.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading_coeff();
        self.scale(&(q(1) / lc))
    }

    /// Substitute every variable listed in `map` by the paired polynomial.
    pub fn substitute(&self, map: &dyn Fn(Var) -> Option<Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            let mut plain = Monomial::one();
            for &(v, e) in &m.0 {
                match map(v) {
                    Some(p) => term = &term * &p.pow(e),
                    None => plain = plain.mul(&Monomial::var(v).pow(e)),
                }
            }
            out = &out + &term.mul_monomial(&plain, &q(1));
        }
        out
    }

    /// Evaluate with rational values for every variable.
    pub fn eval(&self, val: &dyn Fn(Var) -> Scalar) -> Scalar {
        let mut acc = q(0);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.0 {
                let x = val(v);
                for _ in 0..e {
                    t *= &x;
                }
            }
            acc += t;
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let ac = c.abs();
            if m.is_one() {
                write!(f, "{ac}")?;
            } else if ac.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{ac}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::vars::Family;

    fn a(i: u16) -> Poly {
        Poly::var(Var::jet(Family::A, i, 0))
    }

    #[test]
    fn grlex_order() {
        let x = Monomial::var(Var::jet(Family::A, 1, 0));
        let y = Monomial::var(Var::jet(Family::A, 2, 0));
        assert!(y > x);
        assert!(x.pow(2) > y); // degree dominates
        assert!(y.mul(&x) > x.pow(2));
    }

    #[test]
    fn exact_div_works() {
        let p = &(&a(1) + &a(2)) * &(&a(1) - &a(2));
        let d = &a(1) - &a(2);
        let quot = p.exact_div(&d).unwrap();
        assert_eq!(quot, &a(1) + &a(2));
        assert!(p.exact_div(&(&a(1) + &Poly::one())).is_none());
    }

    #[test]
    fn derivative_product_rule() {
        let v = Var::jet(Family::A, 1, 0);
        let p = &a(1) * &a(2);
        let dp = p.derivative(v);
        assert_eq!(dp, a(2));
    }
}
