//! Jet-space calculus: total x-derivative, Euler (variational) derivative,
//! triviality of conservation-law densities, and the potential substitution
//! a^i = b_x^i.

use crate::exact::vars::{Family, Var};
use crate::exact::{Poly, Rx};

/// Total x-derivative of a polynomial: every jet variable's order is raised
/// by the chain rule; plain symbols are constants.
fn total_derivative_poly(p: &Poly) -> Poly {
    let mut out = Poly::zero();
    for v in p.vars() {
        if !v.is_jet() {
            continue;
        }
        let d = p.derivative(v);
        if !d.is_zero() {
            out = &out + &(&d * &Poly::var(v.raise(1)));
        }
    }
    out
}

/// Total x-derivative: every jet variable's order is raised by the chain
/// rule; plain symbols are constants. Computed at the polynomial level over
/// the common denominator, so only one rational reduction happens.
pub fn total_derivative(e: &Rx) -> Rx {
    let dp = total_derivative_poly(e.num());
    let dq = total_derivative_poly(e.den());
    if dq.is_zero() {
        return Rx::new(dp, e.den().clone());
    }
    // quotient rule with the repeated part of the denominator s = gcd(Q, Q')
    // divided out up front: (P' (Q/s) - P (Q'/s)) / (Q Q/s). The leftover
    // reduction is almost always trivial, which the gcd probe proves cheaply.
    let s = crate::exact::gcd(e.den(), &dq);
    let q1 = e.den().exact_div(&s).expect("gcd divides");
    let t = dq.exact_div(&s).expect("gcd divides");
    let num = &(&dp * &q1) - &(e.num() * &t);
    Rx::new(num, e.den() * &q1)
}

/// k-fold total derivative.
pub fn dx_n(e: &Rx, k: usize) -> Rx {
    let mut out = e.clone();
    for _ in 0..k {
        out = total_derivative(&out);
    }
    out
}

/// Highest derivative order of the given component appearing in `e`.
pub fn max_order(e: &Rx, family: Family, component: u16) -> Option<u16> {
    e.vars()
        .into_iter()
        .filter(|v| v.is_jet() && v.family() == family && v.component() == component)
        .map(|v| v.order())
        .max()
}

/// All (family, component) pairs of jet variables appearing in `e`.
pub fn jet_components(e: &Rx) -> Vec<(Family, u16)> {
    let mut out: Vec<(Family, u16)> = e
        .vars()
        .into_iter()
        .filter(|v| v.is_jet())
        .map(|v| (v.family(), v.component()))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Euler operator E_i(h) = sum_k (-D_x)^k dh/d(fam[i,k]).
pub fn variational_derivative(h: &Rx, family: Family, component: u16) -> Rx {
    let Some(top) = max_order(h, family, component) else {
        return Rx::zero();
    };
    let mut out = Rx::zero();
    let mut sign = 1i64;
    for k in 0..=top {
        let partial = h.derivative(Var::jet(family, component, k));
        if !partial.is_zero() {
            let term = dx_n(&partial, k as usize);
            out = if sign > 0 { &out + &term } else { &out - &term };
        }
        sign = -sign;
    }
    out
}

/// A density is trivial (an exact total x-derivative up to an additive
/// constant) iff every variational derivative vanishes.
pub fn is_trivial_density(h: &Rx) -> bool {
    jet_components(h)
        .into_iter()
        .all(|(fam, comp)| variational_derivative(h, fam, comp).is_zero())
}

/// Two densities define the same functional iff their difference is trivial.
pub fn densities_equal(h1: &Rx, h2: &Rx) -> bool {
    is_trivial_density(&(h1 - h2))
}

/// Potential substitution a^i = b_x^i: every a-jet of order k becomes the
/// b-jet of order k+1. Other families are untouched.
pub fn potential_substitution(e: &Rx) -> Rx {
    e.substitute(&|v: Var| {
        if v.is_jet() && v.family() == Family::A {
            Some(Rx::var(Var::jet(Family::B, v.component(), v.order() + 1)))
        } else {
            None
        }
    })
}

/// Substitute order-0 variables of one family by given expressions and push
/// the substitution through to all higher jet orders by the chain rule:
/// fam[i,k] is replaced by D_x^k applied to the image of fam[i,0].
pub fn substitute_family(e: &Rx, family: Family, images: &[Rx]) -> Rx {
    let mut top = 0u16;
    for v in e.vars() {
        if v.is_jet() && v.family() == family {
            top = top.max(v.order());
        }
    }
    // precompute D_x^k of each image
    let n = images.len();
    let mut table: Vec<Vec<Rx>> = Vec::with_capacity(n);
    for img in images {
        let mut chain = vec![img.clone()];
        for k in 1..=top as usize {
            let next = total_derivative(&chain[k - 1]);
            chain.push(next);
        }
        table.push(chain);
    }
    e.substitute(&|v: Var| {
        if v.is_jet() && v.family() == family {
            let i = v.component() as usize;
            assert!(
                (1..=n).contains(&i),
                "component {i} outside substitution range 1..={n}"
            );
            Some(table[i - 1][v.order() as usize].clone())
        } else {
            None
        }
    })
}

/// Evolutionary (time) derivative along the flow fam[k]_t = t_images[k-1]:
/// D_t e = sum over jet vars fam[k, s] of de/d(fam[k,s]) * D_x^s(t_images[k]).
/// Jet variables of other families are treated as constants in time.
pub fn time_derivative(e: &Rx, family: Family, t_images: &[Rx]) -> Rx {
    let n = t_images.len();
    let mut out = Rx::zero();
    for v in e.vars() {
        if !v.is_jet() || v.family() != family {
            continue;
        }
        let de = e.derivative(v);
        if de.is_zero() {
            continue;
        }
        let k = v.component() as usize;
        assert!((1..=n).contains(&k), "component out of range");
        out = &out + &(&de * &dx_n(&t_images[k - 1], v.order() as usize));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn jv(fam: Family, c: u16, k: u16) -> Rx {
        Rx::var(Var::jet(fam, c, k))
    }

    #[test]
    fn leibniz() {
        let a1 = jv(Family::A, 1, 0);
        let a2 = jv(Family::A, 2, 0);
        let d = total_derivative(&(&a1 * &a2));
        let expect = &(&jv(Family::A, 1, 1) * &a2) + &(&a1 * &jv(Family::A, 2, 1));
        assert_eq!(d, expect);
        assert!(total_derivative(&Rx::int(5)).is_zero());
    }

    #[test]
    fn euler_kills_total_derivatives() {
        let u = jv(Family::U, 1, 0);
        let ux = jv(Family::U, 1, 1);
        // E(u_x^2) = -2 u_xx
        let h = &ux * &ux;
        let e = variational_derivative(&h, Family::U, 1);
        let expect = &Rx::constant(q(-2)) * &jv(Family::U, 1, 2);
        assert_eq!(e, expect);
        // E(D_x f) = 0
        let f = &(&u * &u) * &ux;
        assert!(is_trivial_density(&total_derivative(&f)));
        assert!(!is_trivial_density(&h));
    }

    #[test]
    fn potential_substitution_shifts_orders() {
        let a1 = jv(Family::A, 1, 0);
        let a1x = jv(Family::A, 1, 1);
        let e = &a1 * &a1x;
        let s = potential_substitution(&e);
        let expect = &jv(Family::B, 1, 1) * &jv(Family::B, 1, 2);
        assert_eq!(s, expect);
    }

    #[test]
    fn substitute_family_chains_derivatives() {
        // a1 := u1*u2, then a1_x must become u1_x u2 + u1 u2_x
        let images = vec![&jv(Family::U, 1, 0) * &jv(Family::U, 2, 0)];
        let e = jv(Family::A, 1, 1);
        let s = substitute_family(&e, Family::A, &images);
        let expect = &(&jv(Family::U, 1, 1) * &jv(Family::U, 2, 0))
            + &(&jv(Family::U, 1, 0) * &jv(Family::U, 2, 1));
        assert_eq!(s, expect);
    }
}
