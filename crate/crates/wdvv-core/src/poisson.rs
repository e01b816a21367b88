//! Hamiltonian-property checks: skew-adjointness, vanishing Schouten bracket
//! (via the trivector criterion), the first-order Dubrovin-Novikov criterion,
//! the Monge condition, and the Potemin system.

use crate::diffop::LocalOperator;
use crate::exact::vars::{Family, Var};
use crate::exact::Rx;
use crate::geometry::{christoffel, curvature};
use crate::jet::{dx_n, is_trivial_density, max_order};
use crate::linalg::{inverse, Mat};

fn partial(e: &Rx, family: Family, idx0: usize) -> Rx {
    e.derivative(Var::jet(family, (idx0 + 1) as u16, 0))
}

pub fn is_skew_adjoint(a: &LocalOperator) -> bool {
    a.adjoint().add(a).is_zero()
}

/// Monge condition: g_{mk,s} + g_{ks,m} + g_{ms,k} = 0 for all triples.
pub fn check_monge(g: &Mat, family: Family) -> bool {
    let n = g.len();
    for m in 0..n {
        for k in 0..n {
            for s in 0..n {
                let sum = &(&partial(&g[m][k], family, s) + &partial(&g[k][s], family, m))
                    + &partial(&g[m][s], family, k);
                if !sum.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// Potemin system:
/// g_{mk,sl} - g_{ms,kl} = -1/3 g^{pq} (g_{pl,m} - g_{pm,l}) (g_{qk,s} - g_{qs,k}).
pub fn check_potemin(g: &Mat, family: Family) -> bool {
    let n = g.len();
    let ginv = inverse(g);
    let third = Rx::frac(1, 3);
    // first derivatives cached: d1[i][j][k] = g_{ij,k}
    let mut d1 = vec![vec![vec![Rx::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                d1[i][j][k] = partial(&g[i][j], family, k);
            }
        }
    }
    for m in 0..n {
        for k in 0..n {
            for s in 0..n {
                for l in 0..n {
                    let lhs = &partial(&d1[m][k][s], family, l) - &partial(&d1[m][s][k], family, l);
                    let mut rhs = Rx::zero();
                    for p in 0..n {
                        for q_ in 0..n {
                            if ginv[p][q_].is_zero() {
                                continue;
                            }
                            let f1 = &d1[p][l][m] - &d1[p][m][l];
                            let f2 = &d1[q_][k][s] - &d1[q_][s][k];
                            if f1.is_zero() || f2.is_zero() {
                                continue;
                            }
                            rhs = &rhs + &(&ginv[p][q_] * &(&f1 * &f2));
                        }
                    }
                    if !(&lhs + &(&third * &rhs)).is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// First-order DN criterion for g1^{ij} dx + b1_k^{ij} x_k': the connection
/// Gamma^i_{jk} = -g1_{js} b1_k^{si} must be the Levi-Civita connection of the
/// covariant metric g1_{ij}, and that metric must be flat.
pub fn check_first_order_dn(g_upper: &Mat, b: &[Vec<Vec<Rx>>], family: Family) -> bool {
    let n = g_upper.len();
    let g_lower = inverse(g_upper);
    // Gamma^i_{jk} = -g1_{js} b1_k^{si}
    let mut gamma = vec![vec![vec![Rx::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut acc = Rx::zero();
                for s in 0..n {
                    if g_lower[j][s].is_zero() || b[s][i][k].is_zero() {
                        continue;
                    }
                    acc = &acc - &(&g_lower[j][s] * &b[s][i][k]);
                }
                gamma[i][j][k] = acc;
            }
        }
    }
    // must coincide with the Levi-Civita connection...
    let lc = christoffel(&g_lower, family);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if gamma[i][j][k] != lc[i][j][k] {
                    return false;
                }
            }
        }
    }
    // ...of a flat metric
    curvature(&g_lower, family).riemann_is_zero()
}

fn covector(family: Family, n: usize) -> Vec<Rx> {
    (1..=n as u16)
        .map(|i| Rx::var(Var::jet(family, i, 0)))
        .collect()
}

/// Linearization of field -> A(field) p in the direction v:
/// (L_{A,p} v)^i = sum over field jets w = fam[k, s] of d(Ap)^i/dw * D_x^s v^k.
fn linearize(ap: &[Rx], field: Family, v: &[Rx]) -> Vec<Rx> {
    let n = ap.len();
    let mut out = Vec::with_capacity(n);
    for e in ap {
        let mut acc = Rx::zero();
        for k in 0..n {
            let top = match max_order(e, field, (k + 1) as u16) {
                Some(t) => t,
                None => continue,
            };
            for s in 0..=top {
                let de = e.derivative(Var::jet(field, (k + 1) as u16, s));
                if de.is_zero() {
                    continue;
                }
                acc = &acc + &(&de * &dx_n(&v[k], s as usize));
            }
        }
        out.push(acc);
    }
    out
}

/// The Schouten-bracket trivector of a pair of skew-adjoint operators:
/// T(p,q,r) = sum over cyclic permutations of (p,q,r) of
/// <L_{A,p}(B q), r> + <L_{B,p}(A q), r>.
pub fn schouten_trivector(a: &LocalOperator, b: &LocalOperator, field: Family) -> Rx {
    let n = a.dim();
    assert_eq!(n, b.dim(), "dimension mismatch");
    let p = covector(Family::P, n);
    let q = covector(Family::Q, n);
    let r = covector(Family::R, n);
    let mut t = Rx::zero();
    for (x, y, z) in [(&p, &q, &r), (&q, &r, &p), (&r, &p, &q)] {
        let ax = a.apply(x);
        let bx = b.apply(x);
        let by = b.apply(y);
        let ay = a.apply(y);
        let la = linearize(&ax, field, &by);
        let lb = linearize(&bx, field, &ay);
        for i in 0..n {
            t = &t + &(&(&la[i] + &lb[i]) * &z[i]);
        }
    }
    t
}

/// The Schouten bracket [A, B] vanishes iff the trivector is a total
/// x-derivative for all covectors, i.e. all its Euler derivatives vanish.
pub fn schouten_bracket_vanishes(a: &LocalOperator, b: &LocalOperator, field: Family) -> bool {
    assert!(is_skew_adjoint(a), "first operator is not skew-adjoint");
    assert!(is_skew_adjoint(b), "second operator is not skew-adjoint");
    is_trivial_density(&schouten_trivector(a, b, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::build_third_order_canonical;
    use crate::linalg::identity;

    fn av(i: u16) -> Rx {
        Rx::var(Var::jet(Family::A, i, 0))
    }

    #[test]
    fn constant_first_order_is_hamiltonian() {
        let k: Mat = vec![
            vec![Rx::zero(), Rx::one()],
            vec![Rx::one(), Rx::zero()],
        ];
        let op = LocalOperator::first_order(&k);
        assert!(is_skew_adjoint(&op));
        assert!(schouten_bracket_vanishes(&op, &op, Family::U));
    }

    #[test]
    fn nonsymmetric_first_order_is_not_skew() {
        let g: Mat = vec![
            vec![Rx::one(), Rx::one()],
            vec![Rx::zero(), Rx::one()],
        ];
        assert!(!is_skew_adjoint(&LocalOperator::first_order(&g)));
    }

    #[test]
    fn monge_examples() {
        assert!(check_monge(&identity(3), Family::A));
        let mut g = identity(3);
        g[0][0] = &(&av(1) * &av(1)) * &av(1);
        assert!(!check_monge(&g, Family::A));
        assert!(check_potemin(&identity(3), Family::A));
    }

    #[test]
    fn dn_criterion_examples() {
        // constant symmetric metric with b = 0: flat, Levi-Civita trivially
        let k = identity(2);
        let b = vec![vec![vec![Rx::zero(); 2]; 2]; 2];
        assert!(check_first_order_dn(&k, &b, Family::A));
        // non-constant metric with zero connection: not Levi-Civita
        let mut g = identity(2);
        g[0][0] = av(1);
        assert!(!check_first_order_dn(&g, &b, Family::A));
    }

    #[test]
    fn canonical_third_order_constant_metric_is_hamiltonian() {
        let g = identity(2);
        let op = build_third_order_canonical(&g, Family::A);
        assert!(is_skew_adjoint(&op));
        assert!(schouten_bracket_vanishes(&op, &op, Family::A));
    }
}
