//! Exact pseudo-Riemannian tensor calculus: Christoffel symbols, Riemann,
//! Ricci, scalar and Weyl curvature, and metric transport under coordinate
//! changes. All metrics are order-0 matrices in a declared jet family.

use crate::exact::vars::{Family, Var};
use crate::exact::Rx;
use crate::linalg::{inverse, Mat};

fn partial(e: &Rx, family: Family, idx0: usize) -> Rx {
    e.derivative(Var::jet(family, (idx0 + 1) as u16, 0))
}

/// Coordinate change: the `to` coordinates written as order-0 expressions in
/// the `from` coordinates.
#[derive(Clone)]
pub struct CoordinateMap {
    pub from: Family,
    pub to: Family,
    pub images: Vec<Rx>,
}

impl CoordinateMap {
    pub fn new(from: Family, to: Family, images: Vec<Rx>) -> CoordinateMap {
        CoordinateMap { from, to, images }
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    /// Jacobian J[i][m] = d(to^i)/d(from^m), in `from` coordinates.
    pub fn jacobian(&self) -> Mat {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|m| partial(&self.images[i], self.from, m)).collect())
            .collect()
    }

    /// Substitute the `to` coordinates by their images in an expression.
    pub fn substitute(&self, e: &Rx) -> Rx {
        let to = self.to;
        let n = self.dim();
        e.substitute(&|v: Var| {
            if v.is_jet() && v.family() == to {
                assert_eq!(v.order(), 0, "only order-0 substitution supported");
                let i = v.component() as usize;
                assert!((1..=n).contains(&i), "component out of range");
                Some(self.images[i - 1].clone())
            } else {
                None
            }
        })
    }

    /// Composite map: apply `self` first, then `other` (so `other.from` must
    /// equal `self.to`); the result maps `self.from` to `other.to`.
    pub fn then(&self, other: &CoordinateMap) -> CoordinateMap {
        assert_eq!(self.to, other.from, "family mismatch in composition");
        CoordinateMap {
            from: self.from,
            to: other.to,
            images: other.images.iter().map(|e| self.substitute(e)).collect(),
        }
    }
}

/// Covariant metric written in `map.to` coordinates, pulled back to `map.from`
/// coordinates: (J^T (g o map) J).
pub fn pullback_metric(g_to: &Mat, map: &CoordinateMap) -> Mat {
    let n = g_to.len();
    let j = map.jacobian();
    let mut g_sub = vec![vec![Rx::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            g_sub[a][b] = map.substitute(&g_to[a][b]);
        }
    }
    let jt = crate::linalg::transpose(&j);
    crate::linalg::mat_mul(&jt, &crate::linalg::mat_mul(&g_sub, &j))
}

/// Covariant metric in `map.from` coordinates, pushed forward along the map.
/// The result is still expressed in `from` coordinates (the inverse map is
/// not needed for comparisons: push the candidate and substitute the target).
pub fn pushforward_metric(g_from: &Mat, map: &CoordinateMap) -> Mat {
    let j = map.jacobian();
    let jinv = inverse(&j);
    let jinv_t = crate::linalg::transpose(&jinv);
    crate::linalg::mat_mul(&jinv_t, &crate::linalg::mat_mul(g_from, &jinv))
}

/// Full curvature data of the Levi-Civita connection of a covariant metric.
pub struct CurvatureReport {
    /// Gamma^i_{jk}
    pub christoffel: Vec<Vec<Vec<Rx>>>,
    /// R_{ijkl} (all indices lowered)
    pub riemann: Vec<Vec<Vec<Vec<Rx>>>>,
    /// Ricci R_{jl}
    pub ricci: Mat,
    /// Scalar curvature
    pub scalar: Rx,
    /// Weyl tensor C_{ijkl}; `None` for n < 4 where it vanishes identically
    pub weyl: Option<Vec<Vec<Vec<Vec<Rx>>>>>,
}

impl CurvatureReport {
    pub fn riemann_is_zero(&self) -> bool {
        tensor4_is_zero(&self.riemann)
    }

    pub fn weyl_is_zero(&self) -> bool {
        self.weyl.as_ref().map(tensor4_is_zero).unwrap_or(true)
    }
}

fn tensor4_is_zero(t: &Vec<Vec<Vec<Vec<Rx>>>>) -> bool {
    t.iter()
        .flatten()
        .flatten()
        .flatten()
        .all(|e| e.is_zero())
}

/// Christoffel symbols Gamma^i_{jk} of the Levi-Civita connection.
pub fn christoffel(g: &Mat, family: Family) -> Vec<Vec<Vec<Rx>>> {
    let n = g.len();
    let ginv = inverse(g);
    let half = Rx::frac(1, 2);
    let mut gamma = vec![vec![vec![Rx::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut acc = Rx::zero();
                for l in 0..n {
                    if ginv[i][l].is_zero() {
                        continue;
                    }
                    let term = &(&partial(&g[l][j], family, k) + &partial(&g[l][k], family, j))
                        - &partial(&g[j][k], family, l);
                    acc = &acc + &(&ginv[i][l] * &term);
                }
                gamma[i][j][k] = &half * &acc;
            }
        }
    }
    gamma
}

/// Exact curvature report for the metric.
pub fn curvature(g: &Mat, family: Family) -> CurvatureReport {
    let n = g.len();
    let ginv = inverse(g);
    let gamma = christoffel(g, family);

    // R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj}
    //           + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj}
    let mut riem_up = vec![vec![vec![vec![Rx::zero(); n]; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = &partial(&gamma[i][l][j], family, k)
                        - &partial(&gamma[i][k][j], family, l);
                    for m in 0..n {
                        if !gamma[i][k][m].is_zero() && !gamma[m][l][j].is_zero() {
                            acc = &acc + &(&gamma[i][k][m] * &gamma[m][l][j]);
                        }
                        if !gamma[i][l][m].is_zero() && !gamma[m][k][j].is_zero() {
                            acc = &acc - &(&gamma[i][l][m] * &gamma[m][k][j]);
                        }
                    }
                    riem_up[i][j][k][l] = acc;
                }
            }
        }
    }

    // lower the first index
    let mut riemann = vec![vec![vec![vec![Rx::zero(); n]; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut acc = Rx::zero();
                    for m in 0..n {
                        if !g[i][m].is_zero() && !riem_up[m][j][k][l].is_zero() {
                            acc = &acc + &(&g[i][m] * &riem_up[m][j][k][l]);
                        }
                    }
                    riemann[i][j][k][l] = acc;
                }
            }
        }
    }

    // Ricci R_{jl} = R^k_{jkl}
    let mut ricci = vec![vec![Rx::zero(); n]; n];
    for j in 0..n {
        for l in 0..n {
            let mut acc = Rx::zero();
            for k in 0..n {
                acc = &acc + &riem_up[k][j][k][l];
            }
            ricci[j][l] = acc;
        }
    }

    // scalar curvature
    let mut scalar = Rx::zero();
    for j in 0..n {
        for l in 0..n {
            if !ginv[j][l].is_zero() && !ricci[j][l].is_zero() {
                scalar = &scalar + &(&ginv[j][l] * &ricci[j][l]);
            }
        }
    }

    // Weyl tensor (n >= 4):
    // C_{ijkl} = R_{ijkl}
    //          - (g_{ik}R_{jl} - g_{il}R_{jk} - g_{jk}R_{il} + g_{jl}R_{ik}) / (n-2)
    //          + R (g_{ik}g_{jl} - g_{il}g_{jk}) / ((n-1)(n-2))
    let weyl = if n >= 4 {
        let c1 = Rx::frac(1, (n as i64) - 2);
        let c2 = Rx::frac(1, ((n as i64) - 1) * ((n as i64) - 2));
        let mut w = vec![vec![vec![vec![Rx::zero(); n]; n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let ricci_part = &(&(&g[i][k] * &ricci[j][l]) - &(&g[i][l] * &ricci[j][k]))
                            - &(&(&g[j][k] * &ricci[i][l]) - &(&g[j][l] * &ricci[i][k]));
                        let scalar_part =
                            &(&g[i][k] * &g[j][l]) - &(&g[i][l] * &g[j][k]);
                        w[i][j][k][l] = &(&riemann[i][j][k][l] - &(&c1 * &ricci_part))
                            + &(&(&c2 * &scalar) * &scalar_part);
                    }
                }
            }
        }
        Some(w)
    } else {
        None
    };

    CurvatureReport {
        christoffel: gamma,
        riemann,
        ricci,
        scalar,
        weyl,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;

    fn av(i: u16) -> Rx {
        Rx::var(Var::jet(Family::A, i, 0))
    }

    #[test]
    fn constant_metric_is_flat() {
        let g = identity(3);
        let rep = curvature(&g, Family::A);
        assert!(rep.riemann_is_zero());
        assert!(rep.scalar.is_zero());
    }

    #[test]
    fn riemann_symmetries_on_curved_metric() {
        // diag(1, (a1)^2) -- generically curved in a different setting, here
        // actually flat (polar-type), but the symmetries must hold regardless
        let g: Mat = vec![
            vec![Rx::one(), Rx::zero()],
            vec![Rx::zero(), &av(1) * &av(1)],
        ];
        let rep = curvature(&g, Family::A);
        let n = 2;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        assert_eq!(rep.riemann[i][j][k][l], -&rep.riemann[j][i][k][l]);
                        assert_eq!(rep.riemann[i][j][k][l], -&rep.riemann[i][j][l][k]);
                    }
                }
            }
        }
    }

    #[test]
    fn pullback_linear_map_is_congruence() {
        // to = M * from with constant M: pullback of constant g is M^T g M
        let m_rows = [[1i64, 2], [0, 1]];
        let images: Vec<Rx> = (0..2)
            .map(|i| {
                let mut acc = Rx::zero();
                for (m, &c) in m_rows[i].iter().enumerate() {
                    acc = &acc + &(&Rx::int(c) * &Rx::var(Var::jet(Family::U, (m + 1) as u16, 0)));
                }
                acc
            })
            .collect();
        let map = CoordinateMap::new(Family::U, Family::A, images);
        let g = identity(2);
        let pulled = pullback_metric(&g, &map);
        // M^T M for M = [[1,2],[0,1]] is [[1,2],[2,5]]
        assert_eq!(pulled[0][0], Rx::int(1));
        assert_eq!(pulled[0][1], Rx::int(2));
        assert_eq!(pulled[1][1], Rx::int(5));
        // pushforward inverts the pullback
        let back = pushforward_metric(&pulled, &map);
        assert!(crate::linalg::mat_eq(&back, &g));
    }
}
