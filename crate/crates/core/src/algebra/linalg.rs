//! Exact dense linear algebra over a field (Gaussian elimination).

use crate::algebra::scalar::Field;

pub type Matrix<F> = Vec<Vec<F>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for j in c..cols {
            m[r][j] = m[r][j].mul_ref(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul_ref(&m[r][j]);
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Solution of `a·x = b`: a particular solution (free variables set to zero)
/// and the nullity, or `None` when inconsistent.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<(Vec<F>, usize)> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Matrix<F> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![F::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Some((x, cols - pivots.len()))
}

pub fn determinant<F: Field>(m: &Matrix<F>) -> F {
    let n = m.len();
    let mut a = m.clone();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = det.mul_ref(&a[c][c]);
        let inv = a[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul_ref(&inv);
            for j in c..n {
                let t = f.mul_ref(&a[c][j]);
                a[i][j] -= t;
            }
        }
    }
    det
}

pub fn inverse<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    let n = m.len();
    let mut aug: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Basis of the right kernel of `m` (`m·v = 0`).
pub fn kernel<F: Field>(m: &Matrix<F>, cols: usize) -> Vec<Vec<F>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -a[i][f].clone();
            }
            v
        })
        .collect()
}

/// Coordinates of `v` in the basis given by the rows of `basis`, if it lies in their span.
pub fn coordinates<F: Field>(basis: &[Vec<F>], v: &[F]) -> Option<Vec<F>> {
    if basis.is_empty() {
        return v.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let dim = v.len();
    let a: Matrix<F> = (0..dim)
        .map(|i| basis.iter().map(|b| b[i].clone()).collect())
        .collect();
    solve(&a, v).map(|(x, _)| x)
}
