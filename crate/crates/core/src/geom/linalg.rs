//! Exact Gaussian elimination over the rationals.

use num_traits::{One, Zero};

use super::rat::Rat;
use super::vector::RVec;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rat>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                *x *= &inv;
            }
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (pivot_row, other) = if i < r {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = rows.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (x, y) in other.iter_mut().zip(pivot_row.iter()).skip(c) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(vectors: &[RVec]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut rows: Vec<Vec<Rat>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
    rref(&mut rows).len()
}

/// Dimension of the affine hull of `points` (-1 encoded as `None` for an empty set).
pub fn affine_dim(points: &[RVec]) -> Option<usize> {
    let (first, rest) = points.split_first()?;
    let diffs: Vec<RVec> = rest.iter().map(|p| p - first).collect();
    Some(rank(&diffs))
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    if n == 0 || b.len() != n || a.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.last() == Some(&n) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Basis of `{x : rows * x = 0}`.
pub fn nullspace(rows: &[Vec<Rat>], ncols: usize) -> Vec<RVec> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            RVec::new(v).expect("ncols >= 1")
        })
        .collect()
}

pub fn det(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            let (lo, hi) = m.split_at_mut(i);
            for (x, y) in hi[0].iter_mut().zip(lo[c].iter()).skip(c) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Gram-Schmidt without normalisation; drops dependent vectors.
pub fn orthogonalize(vectors: &[RVec]) -> Vec<RVec> {
    let mut out: Vec<RVec> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for u in &out {
            let coef = w.dot(u) / u.norm_sq();
            w = w.add_scaled(&-coef, u);
        }
        if !w.is_zero() {
            out.push(w);
        }
    }
    out
}

/// Rows of the matrix whose columns are `cols`.
pub fn columns_to_rows(cols: &[&RVec]) -> Vec<Vec<Rat>> {
    let d = cols.first().map_or(0, |c| c.dim());
    (0..d)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}
