//! Decomposition of a Potemin metric into parallel linear covectors and the
//! closed formulas built on top of it: nonlocal Casimirs, the momentum
//! density, the constant eta matrices of hydrodynamic flows, and the
//! Hamiltonian densities those flows admit in potential coordinates.

use num_traits::Zero;

use crate::exact::vars::{Family, Var};
use crate::exact::{Rx, Scalar};
use crate::jet::potential_substitution;
use crate::linalg::{det, inverse, zero_mat, Mat};

/// A basis of n parallel covectors of the connection of a Potemin metric.
/// Each covector is linear: psi_k^g = psi_lin[g][k][m] a^m + omega[g][k],
/// with psi_lin[g] skew-symmetric.
#[derive(Debug, Clone)]
pub struct ParallelSolution {
    pub family: Family,
    pub psi_lin: Vec<Vec<Vec<Scalar>>>,
    pub omega: Vec<Vec<Scalar>>,
}

fn coord(family: Family, i: usize) -> Var {
    Var::jet(family, (i + 1) as u16, 0)
}

impl ParallelSolution {
    pub fn dim(&self) -> usize {
        self.omega.len()
    }

    /// The affine matrix psi_i^g (rows i, columns g) as expressions in the
    /// coordinate family.
    pub fn psi_matrix(&self) -> Mat {
        let n = self.dim();
        let mut out = zero_mat(n, n);
        for g in 0..n {
            for k in 0..n {
                let mut e = Rx::constant(self.omega[g][k].clone());
                for m in 0..n {
                    let c = &self.psi_lin[g][k][m];
                    if !c.is_zero() {
                        e = &e
                            + &(&Rx::constant(c.clone()) * &Rx::var(coord(self.family, m)));
                    }
                }
                out[k][g] = e;
            }
        }
        out
    }

    /// Parse an affine covector matrix (rows i, columns g) into constant
    /// data, checking linearity and skew-symmetry of the linear parts.
    pub fn from_affine(psi: &Mat, family: Family) -> Result<ParallelSolution, String> {
        let n = psi.len();
        let mut psi_lin = vec![vec![vec![Scalar::zero(); n]; n]; n];
        let mut omega = vec![vec![Scalar::zero(); n]; n];
        for g in 0..n {
            for k in 0..n {
                let e = &psi[k][g];
                let mut affine = e.clone();
                for m in 0..n {
                    let c = e.derivative(coord(family, m));
                    let c = c
                        .constant_value()
                        .ok_or_else(|| format!("entry ({k},{g}) is not affine"))?;
                    affine = &affine
                        - &(&Rx::constant(c.clone()) * &Rx::var(coord(family, m)));
                    psi_lin[g][k][m] = c;
                }
                omega[g][k] = affine
                    .constant_value()
                    .ok_or_else(|| format!("entry ({k},{g}) is not affine"))?;
            }
        }
        for g in 0..n {
            for k in 0..n {
                for m in 0..n {
                    if psi_lin[g][k][m] != -psi_lin[g][m][k].clone() {
                        return Err(format!(
                            "linear part of covector {g} is not skew at ({k},{m})"
                        ));
                    }
                }
            }
        }
        Ok(ParallelSolution {
            family,
            psi_lin,
            omega,
        })
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Scalar::from_integer(1.into()) / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for cc in 0..ncols {
                    let delta = f.clone() * rows[r][cc].clone();
                    rows[i][cc] = rows[i][cc].clone() - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Nullspace basis of a rational matrix, one vector per free column.
fn nullspace(mut rows: Vec<Vec<Scalar>>, ncols: usize) -> Vec<Vec<Scalar>> {
    let pivots = rref(&mut rows);
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Scalar::zero(); ncols];
        v[free] = Scalar::from_integer(1.into());
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve the parallel-covector system psi_{j,k} = 1/3 psi_p g^{pq}
/// (g_{qj,k} - g_{qk,j}) by the linear ansatz psi_k = psi_{km} a^m + omega_k
/// with constant skew psi_{km}: the identity in the coordinates becomes a
/// homogeneous linear system for the constants, solved by exact elimination.
/// Errors unless the solution space has dimension exactly n.
pub fn solve_parallel_system(g: &Mat, family: Family) -> Result<ParallelSolution, String> {
    let n = g.len();
    let ginv = inverse(g);
    let dg = det(g);
    // t[p][j][k] = 1/3 g^{pq} (g_{qj,k} - g_{qk,j}), cleared of denominators
    // by det(g) so that residuals are polynomial
    let third = Rx::frac(1, 3);
    let mut t = vec![vec![vec![Rx::zero(); n]; n]; n];
    for p in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = Rx::zero();
                for q in 0..n {
                    if ginv[p][q].is_zero() {
                        continue;
                    }
                    let d1 = g[q][j].derivative(coord(family, k));
                    let d2 = g[q][k].derivative(coord(family, j));
                    s = &s + &(&ginv[p][q] * &(&d1 - &d2));
                }
                t[p][j][k] = &(&third * &s) * &dg;
            }
        }
    }
    // unknowns: skew pairs (k < m) then the constants omega_k
    let npairs = n * (n - 1) / 2;
    let nunk = npairs + n;
    let pair_index = |k: usize, m: usize| -> (usize, i64) {
        // returns (pair slot, sign of psi_{km})
        if k < m {
            (k * (2 * n - k - 1) / 2 + (m - k - 1), 1)
        } else {
            (m * (2 * n - m - 1) / 2 + (k - m - 1), -1)
        }
    };
    // residual of equation (j,k) at the unit vector of unknown t_idx,
    // multiplied by det(g): psi_{jk} det(g) - psi_p t[p][j][k]
    let mut columns: Vec<std::collections::BTreeMap<(usize, usize, crate::exact::Monomial), Scalar>> =
        Vec::with_capacity(nunk);
    for unk in 0..nunk {
        let mut col = std::collections::BTreeMap::new();
        for j in 0..n {
            for k in 0..n {
                let mut res = Rx::zero();
                if unk < npairs {
                    // psi_lin unit: psi_{km} = 1 on this pair (skew completion)
                    if j != k {
                        let (slot, sign) = pair_index(j, k);
                        if slot == unk {
                            res = &res + &(&Rx::int(sign) * &dg);
                        }
                    }
                    // psi_p = sum_m psi_{pm} a^m
                    for p in 0..n {
                        for m in 0..n {
                            if p == m {
                                continue;
                            }
                            let (slot, sign) = pair_index(p, m);
                            if slot != unk {
                                continue;
                            }
                            let term =
                                &Rx::var(coord(family, m)) * &t[p][j][k];
                            res = if sign > 0 { &res - &term } else { &res + &term };
                        }
                    }
                } else {
                    let p = unk - npairs;
                    res = &res - &t[p][j][k];
                }
                if res.is_zero() {
                    continue;
                }
                let poly = res
                    .as_poly()
                    .ok_or("residual unexpectedly non-polynomial")?;
                for (mono, c) in &poly.terms {
                    let key = (j, k, mono.clone());
                    let entry = col.entry(key).or_insert_with(Scalar::zero);
                    *entry = entry.clone() + c.clone();
                }
            }
        }
        columns.push(col);
    }
    // assemble the row set over all monomial keys
    let mut keys: std::collections::BTreeSet<_> = std::collections::BTreeSet::new();
    for col in &columns {
        keys.extend(col.keys().cloned());
    }
    let rows: Vec<Vec<Scalar>> = keys
        .iter()
        .map(|key| {
            columns
                .iter()
                .map(|col| col.get(key).cloned().unwrap_or_else(Scalar::zero))
                .collect()
        })
        .collect();
    let basis = nullspace(rows, nunk);
    if basis.len() != n {
        return Err(format!(
            "parallel system has solution dimension {} instead of {n}",
            basis.len()
        ));
    }
    let mut psi_lin = vec![vec![vec![Scalar::zero(); n]; n]; n];
    let mut omega = vec![vec![Scalar::zero(); n]; n];
    for (g_idx, v) in basis.iter().enumerate() {
        for k in 0..n {
            for m in 0..n {
                if k == m {
                    continue;
                }
                let (slot, sign) = pair_index(k, m);
                let c = v[slot].clone();
                psi_lin[g_idx][k][m] = if sign > 0 { c } else { -c };
            }
            omega[g_idx][k] = v[npairs + k].clone();
        }
    }
    let sol = ParallelSolution {
        family,
        psi_lin,
        omega,
    };
    if det(&sol.psi_matrix()).is_zero() {
        return Err("parallel basis is degenerate".into());
    }
    Ok(sol)
}

/// The constant symmetric pairing phi with g = psi . phi . psi^T. Errors
/// when the result is non-constant (wrong basis) or asymmetric.
pub fn compute_phi(g: &Mat, sol: &ParallelSolution) -> Result<Mat, String> {
    let n = g.len();
    let psi = sol.psi_matrix();
    let pinv = inverse(&psi);
    let pinv_t = crate::linalg::transpose(&pinv);
    let phi = crate::linalg::mat_mul(&pinv, &crate::linalg::mat_mul(g, &pinv_t));
    for i in 0..n {
        for j in 0..n {
            if !phi[i][j].is_constant() {
                return Err(format!("phi entry ({i},{j}) is not constant"));
            }
            if phi[i][j] != phi[j][i] {
                return Err("phi is not symmetric".into());
            }
        }
    }
    Ok(phi)
}

fn phi_scalar(phi: &Mat) -> Vec<Vec<Scalar>> {
    phi.iter()
        .map(|row| {
            row.iter()
                .map(|e| e.constant_value().expect("phi must be constant"))
                .collect()
        })
        .collect()
}

fn bvar(i: usize, order: u16) -> Rx {
    Rx::var(Var::jet(Family::B, (i + 1) as u16, order))
}

/// Nonlocal Casimir densities s^g = (1/2 psi_{mk}^g b_x^k + omega_m^g) b^m
/// in potential coordinates, one per basis covector.
pub fn casimirs(sol: &ParallelSolution) -> Vec<Rx> {
    let n = sol.dim();
    let half = Rx::frac(1, 2);
    (0..n)
        .map(|g| {
            let mut s = Rx::zero();
            for m in 0..n {
                let mut inner = Rx::constant(sol.omega[g][m].clone());
                for k in 0..n {
                    let c = &sol.psi_lin[g][m][k];
                    if !c.is_zero() {
                        inner = &inner + &(&(&half * &Rx::constant(c.clone())) * &bvar(k, 1));
                    }
                }
                s = &s + &(&inner * &bvar(m, 0));
            }
            s
        })
        .collect()
}

/// Momentum density P = -(1/3 phi_bg omega_q^b psi_{pm}^g b_x^m
/// + 1/2 phi_bg omega_p^b omega_q^g) b^p b^q.
pub fn momentum(sol: &ParallelSolution, phi: &Mat) -> Rx {
    let n = sol.dim();
    let phis = phi_scalar(phi);
    let mut total = Rx::zero();
    for p in 0..n {
        for q in 0..n {
            let mut c = Rx::zero();
            for be in 0..n {
                for ga in 0..n {
                    if phis[be][ga].is_zero() {
                        continue;
                    }
                    let phi_c = Rx::constant(phis[be][ga].clone());
                    // 1/3 phi_bg omega_q^b psi_{pm}^g b_x^m
                    for m in 0..n {
                        let lin = &sol.psi_lin[ga][p][m];
                        if lin.is_zero() || sol.omega[be][q].is_zero() {
                            continue;
                        }
                        let k = &(&phi_c * &Rx::constant(sol.omega[be][q].clone()))
                            * &Rx::constant(lin.clone());
                        c = &c + &(&(&Rx::frac(1, 3) * &k) * &bvar(m, 1));
                    }
                    // 1/2 phi_bg omega_p^b omega_q^g
                    if !sol.omega[be][p].is_zero() && !sol.omega[ga][q].is_zero() {
                        let k = &(&phi_c * &Rx::constant(sol.omega[be][p].clone()))
                            * &Rx::constant(sol.omega[ga][q].clone());
                        c = &c + &(&Rx::frac(1, 2) * &k);
                    }
                }
            }
            if !c.is_zero() {
                total = &total + &(&(&c * &bvar(p, 0)) * &bvar(q, 0));
            }
        }
    }
    -&total
}

/// The constant matrix eta (rows m, columns gamma, the covector-matrix
/// layout) with psi_m^g v^m(b_x) = eta_m^g b_x^m; errors when the
/// contraction is not linear homogeneous in the first derivatives.
pub fn eta_matrix(sol: &ParallelSolution, fluxes: &[Rx]) -> Result<Mat, String> {
    let n = sol.dim();
    assert_eq!(fluxes.len(), n, "one flux per component");
    let psi = sol.psi_matrix();
    let mut eta = zero_mat(n, n);
    for g in 0..n {
        // w^g = psi_m^g v^m with the potential substitution a -> b_x
        let mut w = Rx::zero();
        for m in 0..n {
            if psi[m][g].is_zero() || fluxes[m].is_zero() {
                continue;
            }
            w = &w + &(&psi[m][g] * &fluxes[m]);
        }
        let mut w = potential_substitution(&w);
        for m in 0..n {
            let c = w.derivative(Var::jet(Family::B, (m + 1) as u16, 1));
            let Some(cv) = c.constant_value() else {
                return Err(format!("psi.v is not linear in b_x for covector {g}"));
            };
            eta[m][g] = Rx::constant(cv.clone());
            w = &w - &(&Rx::constant(cv) * &bvar(m, 1));
        }
        if !w.is_zero() {
            return Err(format!("psi.v has a non-linear remainder for covector {g}"));
        }
    }
    Ok(eta)
}

/// The skew-cycle constraints on the linear parts and constants: the
/// phi-weighted cyclic sums over the basis vanish.
pub fn check_psi_constraints(sol: &ParallelSolution, phi: &Mat) -> bool {
    let n = sol.dim();
    let phis = phi_scalar(phi);
    // sum phi_bg (psi_{is}^b psi_{jk}^g + psi_{js}^b psi_{ki}^g
    //             + psi_{ks}^b psi_{ij}^g) = 0
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for s in 0..n {
                    let mut acc = Scalar::zero();
                    for be in 0..n {
                        for ga in 0..n {
                            if phis[be][ga].is_zero() {
                                continue;
                            }
                            let c = phis[be][ga].clone();
                            acc = acc
                                + c.clone() * sol.psi_lin[be][i][s].clone()
                                    * sol.psi_lin[ga][j][k].clone()
                                + c.clone() * sol.psi_lin[be][j][s].clone()
                                    * sol.psi_lin[ga][k][i].clone()
                                + c * sol.psi_lin[be][k][s].clone()
                                    * sol.psi_lin[ga][i][j].clone();
                        }
                    }
                    if !acc.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    // sum phi_bg (omega_i^b psi_{jk}^g + omega_j^b psi_{ki}^g
    //             + omega_k^b psi_{ij}^g) = 0
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut acc = Scalar::zero();
                for be in 0..n {
                    for ga in 0..n {
                        if phis[be][ga].is_zero() {
                            continue;
                        }
                        let c = phis[be][ga].clone();
                        acc = acc
                            + c.clone() * sol.omega[be][i].clone()
                                * sol.psi_lin[ga][j][k].clone()
                            + c.clone() * sol.omega[be][j].clone()
                                * sol.psi_lin[ga][k][i].clone()
                            + c * sol.omega[be][k].clone() * sol.psi_lin[ga][i][j].clone();
                    }
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

/// The eta constraints of the Hamiltonian theorem: the phi-weighted cyclic
/// sum with eta vanishes and the omega-eta pairing is symmetric.
pub fn check_eta_constraints(sol: &ParallelSolution, phi: &Mat, eta: &Mat) -> bool {
    let n = sol.dim();
    let phis = phi_scalar(phi);
    let etas: Vec<Vec<Scalar>> = eta
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.constant_value().expect("eta must be constant"))
                .collect()
        })
        .collect();
    for k in 0..n {
        for p in 0..n {
            for q in 0..n {
                let mut acc = Scalar::zero();
                for be in 0..n {
                    for ga in 0..n {
                        if phis[be][ga].is_zero() {
                            continue;
                        }
                        let c = phis[be][ga].clone();
                        acc = acc
                            + c.clone() * sol.psi_lin[be][q][p].clone() * etas[k][ga].clone()
                            + c.clone() * sol.psi_lin[be][k][q].clone() * etas[p][ga].clone()
                            + c * sol.psi_lin[be][p][k].clone() * etas[q][ga].clone();
                    }
                }
                if !acc.is_zero() {
                    return false;
                }
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            let mut acc = Scalar::zero();
            for be in 0..n {
                for ga in 0..n {
                    if phis[be][ga].is_zero() {
                        continue;
                    }
                    let c = phis[be][ga].clone();
                    acc = acc + c.clone() * sol.omega[be][p].clone() * etas[q][ga].clone()
                        - c * sol.omega[be][q].clone() * etas[p][ga].clone();
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Normalization of the zeta constants entering the Hamiltonian density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZetaMode {
    /// zeta_{pqm} = 1/3 phi_bg (psi_{pq}^b eta_m^g + 2 psi_{mp}^b eta_q^g)
    Canonical,
    /// The reduced normalization that removes the terms absorbed by a total
    /// derivative: zeta vanishes when the first two indices coincide, and
    /// slots repeating the third index collapse to a single pairing.
    Reduced,
}

fn zeta_tensor(sol: &ParallelSolution, phi: &Mat, eta: &Mat, mode: ZetaMode) -> Vec<Vec<Vec<Scalar>>> {
    let n = sol.dim();
    let phis = phi_scalar(phi);
    let etas: Vec<Vec<Scalar>> = eta
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.constant_value().expect("eta must be constant"))
                .collect()
        })
        .collect();
    let pair = |bexpr: &dyn Fn(usize, usize) -> Scalar| -> Scalar {
        let mut acc = Scalar::zero();
        for be in 0..n {
            for ga in 0..n {
                if phis[be][ga].is_zero() {
                    continue;
                }
                acc = acc + phis[be][ga].clone() * bexpr(be, ga);
            }
        }
        acc
    };
    let third = Scalar::new(1.into(), 3.into());
    let two = Scalar::from_integer(2.into());
    let mut z = vec![vec![vec![Scalar::zero(); n]; n]; n];
    for p in 0..n {
        for q in 0..n {
            for m in 0..n {
                z[p][q][m] = match mode {
                    ZetaMode::Canonical => {
                        third.clone()
                            * pair(&|be, ga| {
                                sol.psi_lin[be][p][q].clone() * etas[m][ga].clone()
                                    + two.clone()
                                        * sol.psi_lin[be][m][p].clone()
                                        * etas[q][ga].clone()
                            })
                    }
                    ZetaMode::Reduced => {
                        if p == q {
                            Scalar::zero()
                        } else if m == p {
                            pair(&|be, ga| {
                                sol.psi_lin[be][p][q].clone() * etas[p][ga].clone()
                            })
                        } else if m == q {
                            pair(&|be, ga| {
                                sol.psi_lin[be][q][p].clone() * etas[q][ga].clone()
                            })
                        } else {
                            third.clone()
                                * pair(&|be, ga| {
                                    sol.psi_lin[be][m][q].clone() * etas[p][ga].clone()
                                        - sol.psi_lin[be][p][m].clone() * etas[q][ga].clone()
                                })
                        }
                    }
                };
            }
        }
    }
    z
}

/// Hamiltonian density h = 1/2 (zeta_{pqm} b_x^m - phi_bg omega_p^b
/// eta_q^g) b^p b^q of a flow with constant eta matrix. The eta constraints
/// are verified first.
pub fn hamiltonian_density(
    sol: &ParallelSolution,
    phi: &Mat,
    eta: &Mat,
    mode: ZetaMode,
) -> Result<Rx, String> {
    if !check_eta_constraints(sol, phi, eta) {
        return Err("eta constraints violated: the flow is not Hamiltonian".into());
    }
    let n = sol.dim();
    let phis = phi_scalar(phi);
    let etas: Vec<Vec<Scalar>> = eta
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.constant_value().expect("eta must be constant"))
                .collect()
        })
        .collect();
    let z = zeta_tensor(sol, phi, eta, mode);
    if mode == ZetaMode::Canonical {
        for p in 0..n {
            for q in 0..n {
                for m in 0..n {
                    if z[p][q][m] != z[q][p][m] {
                        return Err("zeta is not symmetric in its first two indices".into());
                    }
                }
            }
        }
    }
    let mut h = Rx::zero();
    for p in 0..n {
        for q in 0..n {
            let mut c = Rx::zero();
            for m in 0..n {
                if !z[p][q][m].is_zero() {
                    c = &c + &(&Rx::constant(z[p][q][m].clone()) * &bvar(m, 1));
                }
            }
            let mut pairing = Scalar::zero();
            for be in 0..n {
                for ga in 0..n {
                    if phis[be][ga].is_zero() {
                        continue;
                    }
                    pairing = pairing
                        + phis[be][ga].clone() * sol.omega[be][p].clone() * etas[q][ga].clone();
                }
            }
            c = &c - &Rx::constant(pairing);
            if !c.is_zero() {
                h = &h + &(&(&c * &bvar(p, 0)) * &bvar(q, 0));
            }
        }
    }
    Ok(&Rx::frac(1, 2) * &h)
}

/// Check that the covector matrix solves the parallel-transport system
/// psi_{j,k} = 1/3 psi_p g^{pq} (g_{qj,k} - g_{qk,j}) entrywise.
pub fn is_parallel(psi: &Mat, g: &Mat, family: Family) -> bool {
    let n = g.len();
    let ginv = inverse(g);
    for ga in 0..n {
        for j in 0..n {
            for k in 0..n {
                let lhs = psi[j][ga].derivative(coord(family, k));
                let mut rhs = Rx::zero();
                for p in 0..n {
                    if psi[p][ga].is_zero() {
                        continue;
                    }
                    for q in 0..n {
                        if ginv[p][q].is_zero() {
                            continue;
                        }
                        let d1 = g[q][j].derivative(coord(family, k));
                        let d2 = g[q][k].derivative(coord(family, j));
                        rhs = &rhs + &(&(&psi[p][ga] * &ginv[p][q]) * &(&d1 - &d2));
                    }
                }
                if lhs != &Rx::frac(1, 3) * &rhs {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{build_factorized, reduce_to_first_order_in_b};
    use crate::jet::{densities_equal, variational_derivative};
    use crate::wdvv::{
        a2_n3, casimir_densities_published, eta1, eta2, g6, h_tilde_1, h_tilde_2,
        momentum_density_published, monge_metric_n3, n3_fluxes, n4_fluxes_y, n4_fluxes_z,
        phi6, psi6,
    };

    fn published_solution() -> ParallelSolution {
        ParallelSolution::from_affine(&psi6(), Family::A).unwrap()
    }

    fn gradient(h: &Rx, n: u16) -> Vec<Rx> {
        (1..=n)
            .map(|i| variational_derivative(h, Family::B, i))
            .collect()
    }

    #[test]
    fn constant_metric_has_constant_covectors() {
        let sol = solve_parallel_system(&phi6(), Family::A).unwrap();
        for g in 0..6 {
            for k in 0..6 {
                for m in 0..6 {
                    assert!(sol.psi_lin[g][k][m].is_zero());
                }
            }
        }
        assert_eq!(sol.dim(), 6);
    }

    #[test]
    fn published_psi_solves_parallel_system() {
        assert!(is_parallel(&psi6(), &g6(), Family::A));
    }

    #[test]
    fn published_psi_roundtrip_and_phi() {
        let sol = published_solution();
        assert_eq!(sol.psi_matrix(), psi6());
        let phi = compute_phi(&g6(), &sol).unwrap();
        assert_eq!(phi, phi6());
        // determinant identities
        let a1 = crate::wdvv::a(1);
        assert!(det(&phi).is_one());
        assert_eq!(det(&psi6()), -&(&a1 * &a1));
        assert_eq!(det(&g6()), (&a1 * &a1).pow(2));
    }

    #[test]
    fn solved_basis_reproduces_g6() {
        let g = g6();
        let sol = solve_parallel_system(&g, Family::A).unwrap();
        assert_eq!(sol.dim(), 6);
        let phi = compute_phi(&g, &sol).unwrap();
        let psi = sol.psi_matrix();
        let rebuilt = crate::linalg::mat_mul(
            &psi,
            &crate::linalg::mat_mul(&phi, &crate::linalg::transpose(&psi)),
        );
        assert_eq!(rebuilt, g);
        assert!(check_psi_constraints(&sol, &phi));
    }

    #[test]
    fn casimirs_generate_zero_flows() {
        let sol = published_solution();
        let op = reduce_to_first_order_in_b(&psi6(), &phi6());
        let mut all = casimirs(&sol);
        all.extend(casimir_densities_published());
        for s in &all {
            let flow = op.apply(&gradient(s, 6));
            assert!(flow.iter().all(Rx::is_zero), "nonzero flow from a Casimir");
        }
    }

    #[test]
    fn momentum_matches_published_and_translates() {
        let sol = published_solution();
        let p = momentum(&sol, &phi6());
        assert!(densities_equal(&p, &momentum_density_published()));
        let op = reduce_to_first_order_in_b(&psi6(), &phi6());
        let flow = op.apply(&gradient(&p, 6));
        for (i, f) in flow.iter().enumerate() {
            assert_eq!(f, &bvar(i, 1), "momentum must generate the translation");
        }
    }

    #[test]
    fn eta_matrices_match_published() {
        let sol = published_solution();
        assert_eq!(eta_matrix(&sol, &n4_fluxes_y()).unwrap(), eta1());
        assert_eq!(eta_matrix(&sol, &n4_fluxes_z()).unwrap(), eta2());
        let zero = vec![Rx::zero(); 6];
        assert_eq!(eta_matrix(&sol, &zero).unwrap(), zero_mat(6, 6));
    }

    #[test]
    fn constraints_hold_for_published_data() {
        let sol = published_solution();
        assert!(check_psi_constraints(&sol, &phi6()));
        assert!(check_eta_constraints(&sol, &phi6(), &eta1()));
        assert!(check_eta_constraints(&sol, &phi6(), &eta2()));
    }

    #[test]
    fn hamiltonian_densities_match_published() {
        let sol = published_solution();
        let op = reduce_to_first_order_in_b(&psi6(), &phi6());
        for (eta, flux, published) in [
            (eta1(), n4_fluxes_y(), h_tilde_1()),
            (eta2(), n4_fluxes_z(), h_tilde_2()),
        ] {
            let h = hamiltonian_density(&sol, &phi6(), &eta, ZetaMode::Canonical).unwrap();
            assert!(densities_equal(&h, &published));
            let flow = op.apply(&gradient(&h, 6));
            for (i, f) in flow.iter().enumerate() {
                assert_eq!(f, &potential_substitution(&flux[i]), "flow component {i}");
            }
            let reduced = hamiltonian_density(&sol, &phi6(), &eta, ZetaMode::Reduced).unwrap();
            assert!(densities_equal(&reduced, &h));
        }
    }

    #[test]
    fn n3_flow_from_potential_density() {
        let g = monge_metric_n3();
        let sol = solve_parallel_system(&g, Family::A).unwrap();
        let phi = compute_phi(&g, &sol).unwrap();
        let psi = sol.psi_matrix();
        assert_eq!(build_factorized(&psi, &phi), a2_n3());
        // h1 in potential coordinates: -1/2 b1_x (b2)^2 - b2 b3
        let h1 = &(&Rx::frac(-1, 2) * &(&bvar(0, 1) * &(&bvar(1, 0) * &bvar(1, 0))))
            - &(&bvar(1, 0) * &bvar(2, 0));
        let op = reduce_to_first_order_in_b(&psi, &phi);
        let flow = op.apply(&gradient(&h1, 3));
        for (i, flux) in n3_fluxes().iter().enumerate() {
            assert_eq!(flow[i], potential_substitution(flux), "flow component {i}");
        }
    }
}
