//! Matrix differential operators in d/dx with rational-function jet
//! coefficients: composition, formal adjoint, application, and the standard
//! constructors (first-order Dubrovin-Novikov form, canonical third-order
//! form, factorized third-order form, first-order reduction in potentials).

use std::collections::BTreeMap;
use std::fmt;

use crate::exact::vars::{Family, Var};
use crate::exact::{q, Rx, Scalar};
use crate::jet::{dx_n, potential_substitution};
use crate::linalg::{inverse, Mat};

/// Scalar differential operator sum_k c_k d^k/dx^k, stored as order -> c_k.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ScalarOp {
    pub terms: BTreeMap<u16, Rx>,
}

fn binomial(k: u16, j: u16) -> Scalar {
    let mut acc = q(1);
    for t in 0..j {
        acc = acc * q((k - t) as i64) / q((t + 1) as i64);
    }
    acc
}

impl ScalarOp {
    pub fn zero() -> ScalarOp {
        ScalarOp::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Pure multiplication operator.
    pub fn mult(c: Rx) -> ScalarOp {
        ScalarOp::term(0, c)
    }

    /// c * d^k/dx^k.
    pub fn term(order: u16, c: Rx) -> ScalarOp {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(order, c);
        }
        ScalarOp { terms }
    }

    /// d/dx.
    pub fn dx() -> ScalarOp {
        ScalarOp::term(1, Rx::one())
    }

    pub fn order(&self) -> u16 {
        self.terms.keys().next_back().copied().unwrap_or(0)
    }

    pub fn coeff(&self, order: u16) -> Rx {
        self.terms.get(&order).cloned().unwrap_or_else(Rx::zero)
    }

    pub fn add_term(&mut self, order: u16, c: &Rx) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(order).or_insert_with(Rx::zero);
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.remove(&order);
        }
    }

    pub fn add(&self, other: &ScalarOp) -> ScalarOp {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn neg(&self) -> ScalarOp {
        ScalarOp {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rx) -> ScalarOp {
        let mut out = ScalarOp::zero();
        for (&k, a) in &self.terms {
            out.add_term(k, &(a * c));
        }
        out
    }

    /// Composition self o other, expanded by the non-commutative Leibniz rule
    /// d^k o f = sum_j C(k,j) (D_x^j f) d^{k-j}.
    pub fn compose(&self, other: &ScalarOp) -> ScalarOp {
        let mut out = ScalarOp::zero();
        for (&k, c) in &self.terms {
            for (&l, f) in &other.terms {
                for j in 0..=k {
                    let df = dx_n(f, j as usize);
                    if df.is_zero() {
                        continue;
                    }
                    let coeff = &(c * &df) * &Rx::constant(binomial(k, j));
                    out.add_term(k - j + l, &coeff);
                }
            }
        }
        out
    }

    /// Formal adjoint: sum_k (-d)^k o c_k.
    pub fn adjoint(&self) -> ScalarOp {
        let mut out = ScalarOp::zero();
        for (&k, c) in &self.terms {
            let sign = if k % 2 == 0 { q(1) } else { q(-1) };
            for j in 0..=k {
                let dc = dx_n(c, j as usize);
                if dc.is_zero() {
                    continue;
                }
                let coeff = &dc * &Rx::constant(&sign * binomial(k, j));
                out.add_term(k - j, &coeff);
            }
        }
        out
    }

    /// Apply to an expression: sum_k c_k D_x^k(v).
    pub fn apply(&self, v: &Rx) -> Rx {
        let mut out = Rx::zero();
        for (&k, c) in &self.terms {
            let dv = dx_n(v, k as usize);
            if !dv.is_zero() {
                out = &out + &(c * &dv);
            }
        }
        out
    }

    /// Apply a map to every coefficient.
    pub fn map_coeffs(&self, f: &dyn Fn(&Rx) -> Rx) -> ScalarOp {
        let mut out = ScalarOp::zero();
        for (&k, c) in &self.terms {
            out.add_term(k, &f(c));
        }
        out
    }
}

impl fmt::Display for ScalarOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "dx^{k}")?;
            } else {
                write!(f, "({c})*dx^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ScalarOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Matrix of scalar differential operators.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalOperator {
    pub entries: Vec<Vec<ScalarOp>>,
}

impl LocalOperator {
    pub fn zero(n: usize) -> LocalOperator {
        LocalOperator {
            entries: vec![vec![ScalarOp::zero(); n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_zero())
    }

    pub fn order(&self) -> u16 {
        self.entries
            .iter()
            .flatten()
            .map(|e| e.order())
            .max()
            .unwrap_or(0)
    }

    /// Identity multiplication operator.
    pub fn identity(n: usize) -> LocalOperator {
        let mut op = LocalOperator::zero(n);
        for i in 0..n {
            op.entries[i][i] = ScalarOp::mult(Rx::one());
        }
        op
    }

    /// g * d/dx for a constant or jet-coefficient matrix g.
    pub fn first_order(g: &Mat) -> LocalOperator {
        let n = g.len();
        let mut op = LocalOperator::zero(n);
        for i in 0..n {
            for j in 0..n {
                op.entries[i][j] = ScalarOp::term(1, g[i][j].clone());
            }
        }
        op
    }

    pub fn add(&self, other: &LocalOperator) -> LocalOperator {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        LocalOperator {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| a.add(b)).collect())
                .collect(),
        }
    }

    pub fn neg(&self) -> LocalOperator {
        LocalOperator {
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e.neg()).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &LocalOperator) -> LocalOperator {
        self.add(&other.neg())
    }

    pub fn compose(&self, other: &LocalOperator) -> LocalOperator {
        let n = self.dim();
        assert_eq!(n, other.dim(), "dimension mismatch");
        let mut out = LocalOperator::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ScalarOp::zero();
                for k in 0..n {
                    if self.entries[i][k].is_zero() || other.entries[k][j].is_zero() {
                        continue;
                    }
                    acc = acc.add(&self.entries[i][k].compose(&other.entries[k][j]));
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    /// Formal adjoint: (A*)_{ji} = sum_k (-d)^k o c_k^{ij}.
    pub fn adjoint(&self) -> LocalOperator {
        let n = self.dim();
        let mut out = LocalOperator::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j][i] = self.entries[i][j].adjoint();
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rx]) -> Vec<Rx> {
        assert_eq!(self.dim(), v.len(), "dimension mismatch");
        self.entries
            .iter()
            .map(|row| {
                let mut acc = Rx::zero();
                for (e, x) in row.iter().zip(v) {
                    acc = &acc + &e.apply(x);
                }
                acc
            })
            .collect()
    }

    pub fn map_coeffs(&self, f: &dyn Fn(&Rx) -> Rx) -> LocalOperator {
        LocalOperator {
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|e| e.map_coeffs(f)).collect())
                .collect(),
        }
    }
}

impl fmt::Display for LocalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " | ")?;
                }
                write!(f, "{e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LocalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// First-order Dubrovin-Novikov operator g^{ij} d/dx + b_k^{ij} fam[k]_x,
/// where `b[i][j][k]` is b_k^{ij} and the coordinate family is `family`.
pub fn build_first_order_dn(g: &Mat, b: &[Vec<Vec<Rx>>], family: Family) -> LocalOperator {
    let n = g.len();
    let mut op = LocalOperator::first_order(g);
    for i in 0..n {
        for j in 0..n {
            let mut c = Rx::zero();
            for (k, bk) in b[i][j].iter().enumerate() {
                if !bk.is_zero() {
                    c = &c + &(bk * &Rx::var(Var::jet(family, (k + 1) as u16, 1)));
                }
            }
            op.entries[i][j].add_term(0, &c);
        }
    }
    op
}

/// Lowered canonical coefficients c_{skm} = (g_{sm,k} - g_{sk,m}) / 3 of a
/// covariant order-0 metric in the given family.
pub fn canonical_c_lower(g: &Mat, family: Family) -> Vec<Vec<Vec<Rx>>> {
    let n = g.len();
    let third = Rx::frac(1, 3);
    let mut c = vec![vec![vec![Rx::zero(); n]; n]; n];
    for s in 0..n {
        for k in 0..n {
            for m in 0..n {
                let d1 = partial(&g[s][m], family, k);
                let d2 = partial(&g[s][k], family, m);
                c[s][k][m] = &third * &(&d1 - &d2);
            }
        }
    }
    c
}

fn partial(e: &Rx, family: Family, index0: usize) -> Rx {
    e.derivative(Var::jet(family, (index0 + 1) as u16, 0))
}

/// Canonical third-order operator d ( g^{ij} d + c_k^{ij} fam[k]_x ) d from a
/// covariant order-0 metric. Panics if the metric is singular.
pub fn build_third_order_canonical(g: &Mat, family: Family) -> LocalOperator {
    let n = g.len();
    let ginv = inverse(g);
    let lower = canonical_c_lower(g, family);
    let dx = LocalOperator::first_order(&crate::linalg::identity(n));
    let mut middle = LocalOperator::zero(n);
    for i in 0..n {
        for j in 0..n {
            // raise indices: c_k^{ij} = g^{jq} g^{ip} c_{qpk}
            let mut c = Rx::zero();
            for k in 0..n {
                let mut raised = Rx::zero();
                for q_ in 0..n {
                    for p in 0..n {
                        if ginv[j][q_].is_zero() || ginv[i][p].is_zero() {
                            continue;
                        }
                        raised = &raised + &(&(&ginv[j][q_] * &ginv[i][p]) * &lower[q_][p][k]);
                    }
                }
                if !raised.is_zero() {
                    c = &c + &(&raised * &Rx::var(Var::jet(family, (k + 1) as u16, 1)));
                }
            }
            middle.entries[i][j] = ScalarOp::term(1, ginv[i][j].clone());
            middle.entries[i][j].add_term(0, &c);
        }
    }
    dx.compose(&middle).compose(&dx)
}

/// Factorized third-order operator phi^{bg} d psi_b^i d psi_g^j d, given the
/// covariant data: `psi` with rows i and columns gamma (entries psi_i^gamma,
/// linear in the coordinates), and the constant symmetric matrix `phi`.
pub fn build_factorized(psi: &Mat, phi: &Mat) -> LocalOperator {
    let n = psi.len();
    let psi_inv = inverse(psi); // psi_inv[gamma][i] = psi_gamma^i
    let phi_inv = inverse(phi); // phi_inv[beta][gamma] = phi^{beta gamma}
    let mut out = LocalOperator::zero(n);
    let dx = ScalarOp::dx();
    for i in 0..n {
        for j in 0..n {
            let mut acc = ScalarOp::zero();
            for b in 0..n {
                for g in 0..n {
                    if phi_inv[b][g].is_zero() {
                        continue;
                    }
                    let c = &phi_inv[b][g] * &psi_inv[b][i];
                    if c.is_zero() {
                        continue;
                    }
                    let chain = ScalarOp::mult(c)
                        .compose(&dx)
                        .compose(&ScalarOp::mult(psi_inv[g][j].clone()))
                        .compose(&dx);
                    acc = acc.add(&dx.compose(&chain));
                }
            }
            out.entries[i][j] = acc;
        }
    }
    out
}

/// First-order reduction in the potentials: -phi^{bg} psi_b^i d psi_g^s with
/// every a-jet replaced by the corresponding b-jet.
pub fn reduce_to_first_order_in_b(psi: &Mat, phi: &Mat) -> LocalOperator {
    let n = psi.len();
    let psi_inv = inverse(psi);
    let phi_inv = inverse(phi);
    let dx = ScalarOp::dx();
    let mut out = LocalOperator::zero(n);
    for i in 0..n {
        for s in 0..n {
            let mut acc = ScalarOp::zero();
            for b in 0..n {
                for g in 0..n {
                    if phi_inv[b][g].is_zero() {
                        continue;
                    }
                    let c = &phi_inv[b][g] * &psi_inv[b][i];
                    if c.is_zero() {
                        continue;
                    }
                    let chain = ScalarOp::mult(c)
                        .compose(&dx)
                        .compose(&ScalarOp::mult(psi_inv[g][s].clone()));
                    acc = acc.add(&chain);
                }
            }
            out.entries[i][s] = acc.neg().map_coeffs(&potential_substitution);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;

    fn a(i: u16) -> Rx {
        Rx::var(Var::jet(Family::A, i, 0))
    }

    fn ax(i: u16) -> Rx {
        Rx::var(Var::jet(Family::A, i, 1))
    }

    #[test]
    fn leibniz_composition() {
        // d o a = a d + a_x
        let d = ScalarOp::dx();
        let m = ScalarOp::mult(a(1));
        let c = d.compose(&m);
        assert_eq!(c.coeff(1), a(1));
        assert_eq!(c.coeff(0), ax(1));
    }

    #[test]
    fn adjoint_basics() {
        let d = ScalarOp::dx();
        assert_eq!(d.adjoint(), d.neg());
        let d3 = d.compose(&d).compose(&d);
        assert_eq!(d3.adjoint(), d3.neg());
        // adjoint is an involution on a mixed operator
        let mixed = ScalarOp::term(2, a(1)).add(&ScalarOp::mult(a(2)));
        assert_eq!(mixed.adjoint().adjoint(), mixed);
    }

    #[test]
    fn matrix_identity_compose() {
        let id = LocalOperator::identity(2);
        let g = identity(2);
        let op = LocalOperator::first_order(&g);
        assert_eq!(id.compose(&op), op);
        assert_eq!(op.compose(&id), op);
    }

    #[test]
    fn apply_first_order() {
        let g = identity(2);
        let op = LocalOperator::first_order(&g);
        let v = vec![a(1), a(2)];
        let out = op.apply(&v);
        assert_eq!(out, vec![ax(1), ax(2)]);
    }

    #[test]
    fn factorized_identity_collapses() {
        // psi = identity, phi = identity: A^{ij} = delta^{ij} d^3
        let op = build_factorized(&identity(2), &identity(2));
        let d3 = ScalarOp::term(3, Rx::one());
        assert_eq!(op.entries[0][0], d3);
        assert_eq!(op.entries[0][1], ScalarOp::zero());
        // and the b-reduction is -d
        let red = reduce_to_first_order_in_b(&identity(2), &identity(2));
        assert_eq!(red.entries[0][0], ScalarOp::dx().neg());
    }
}
