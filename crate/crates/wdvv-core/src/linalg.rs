//! Exact linear algebra: square matrices of rational functions (Gaussian
//! elimination for inverse and determinant) and nullspace computation for
//! homogeneous linear systems over the rationals.

use num_traits::Zero;

use crate::exact::{Poly, Rx, Scalar};

/// Dense matrix of rational functions, row major.
pub type Mat = Vec<Vec<Rx>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rx::one() } else { Rx::zero() })
                .collect()
        })
        .collect()
}

pub fn zero_mat(rows: usize, cols: usize) -> Mat {
    vec![vec![Rx::zero(); cols]; rows]
}

pub fn transpose(m: &Mat) -> Mat {
    let rows = m.len();
    let cols = m[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect()
}

pub fn mat_add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn mat_sub(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = b.len();
    let m = b[0].len();
    assert!(a.iter().all(|r| r.len() == k), "dimension mismatch");
    let mut out = zero_mat(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[l][j].is_zero() {
                    continue;
                }
                out[i][j] = &out[i][j] + &(&a[i][l] * &b[l][j]);
            }
        }
    }
    out
}

pub fn mat_vec(a: &Mat, v: &[Rx]) -> Vec<Rx> {
    a.iter()
        .map(|row| {
            let mut acc = Rx::zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc = &acc + &(x * y);
                }
            }
            acc
        })
        .collect()
}

pub fn mat_eq(a: &Mat, b: &Mat) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(ra, rb)| ra.len() == rb.len() && ra.iter().zip(rb).all(|(x, y)| x == y))
}

/// Determinant by Gaussian elimination over the rational-function field.
pub fn det(m: &Mat) -> Rx {
    let n = m.len();
    let mut a: Mat = m.to_vec();
    let mut result = Rx::one();
    for col in 0..n {
        // pick the structurally simplest nonzero pivot in this column
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].num_terms());
        let pivot = match pivot {
            Some(p) => p,
            None => return Rx::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            result = &result * &Rx::int(-1);
        }
        let p = a[col][col].clone();
        result = &result * &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &delta;
            }
        }
    }
    result
}

/// Exact inverse by Gauss-Jordan elimination. Panics on a singular matrix.
pub fn inverse(m: &Mat) -> Mat {
    let n = m.len();
    let mut a: Mat = m.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| a[r][col].num_terms())
            .expect("singular matrix");
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col].clone();
        let pinv = p.inv();
        for c in 0..n {
            a[col][c] = &a[col][c] * &pinv;
            inv[col][c] = &inv[col][c] * &pinv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let d1 = &factor * &a[col][c];
                a[r][c] = &a[r][c] - &d1;
                let d2 = &factor * &inv[col][c];
                inv[r][c] = &inv[r][c] - &d2;
            }
        }
    }
    inv
}

pub fn mat_from_polys(entries: Vec<Vec<Poly>>) -> Mat {
    entries
        .into_iter()
        .map(|row| row.into_iter().map(Rx::from_poly).collect())
        .collect()
}

pub fn is_symmetric(m: &Mat) -> bool {
    let n = m.len();
    (0..n).all(|i| (0..n).all(|j| m[i][j] == m[j][i]))
}

/// Reduced row echelon form of a rational matrix, in place. Returns the pivot
/// column of each pivot row.
pub fn rref(a: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(p, row);
        let inv = a[row][col].recip();
        for c in col..cols {
            let v = &a[row][c] * &inv;
            a[row][c] = v;
        }
        for r in 0..rows {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..cols {
                let v = &a[r][c] - &(&f * &a[row][c]);
                a[r][c] = v;
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    pivots
}

/// Basis of the nullspace of a homogeneous system (rows are equations).
pub fn nullspace(mut a: Vec<Vec<Scalar>>, unknowns: usize) -> Vec<Vec<Scalar>> {
    use num_traits::One;
    if a.is_empty() {
        a.push(vec![Scalar::zero(); unknowns]);
    }
    let pivots = rref(&mut a);
    let mut basis = Vec::new();
    let mut pivot_of_col = vec![None; unknowns];
    for (r, &c) in pivots.iter().enumerate() {
        pivot_of_col[c] = Some(r);
    }
    for free in 0..unknowns {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Scalar::zero(); unknowns];
        v[free] = Scalar::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -a[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::vars::{Family, Var};
    use crate::exact::q;

    fn v(i: u16) -> Rx {
        Rx::var(Var::jet(Family::A, i, 0))
    }

    #[test]
    fn inverse_roundtrip() {
        // [[0, 0, 1], [0, 1, -a], [1, -a, x]] style symbolic matrix
        let a = v(1);
        let m: Mat = vec![
            vec![Rx::zero(), Rx::zero(), Rx::one()],
            vec![Rx::zero(), Rx::one(), &Rx::zero() - &a],
            vec![Rx::one(), &Rx::zero() - &a, v(2)],
        ];
        let inv = inverse(&m);
        assert!(mat_eq(&mat_mul(&m, &inv), &identity(3)));
    }

    #[test]
    fn det_diagonal_and_singular() {
        let m: Mat = vec![
            vec![v(1), Rx::zero()],
            vec![Rx::zero(), v(2)],
        ];
        assert_eq!(det(&m), &v(1) * &v(2));
        let s: Mat = vec![vec![v(1), v(1)], vec![v(1), v(1)]];
        assert!(det(&s).is_zero());
    }

    #[test]
    fn nullspace_small() {
        // x + y = 0 over two unknowns -> one basis vector (-1, 1)
        let rows = vec![vec![q(1), q(1)]];
        let ns = nullspace(rows, 2);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0][0], -ns[0][1].clone());
    }
}
