//! Small dense exact linear algebra over [`Rat`].
//!
//! Everything here is desk-scale (dimensions in the tens), so plain
//! fraction-based Gaussian elimination is the right tool.

use crate::rat::Rat;

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn scale(v: &[Rat], c: &Rat) -> Vec<Rat> {
    v.iter().map(|x| x * c).collect()
}

pub fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|x| -x).collect()
}

pub fn zeros(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Rat::is_zero)
}

/// `y = A x` for a row-major matrix.
pub fn mat_vec(rows: &[Vec<Rat>], x: &[Rat]) -> Vec<Rat> {
    rows.iter().map(|r| dot(r, x)).collect()
}

/// Solves the square system `A x = b` by Gaussian elimination with exact
/// pivoting. Returns `None` when `A` is singular.
pub fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for j in col..=n {
            m[col][j] = &m[col][j] * &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for j in col..=n {
                    let delta = &factor * &m[col][j];
                    m[r][j] = &m[r][j] - &delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Result of reducing a matrix to row echelon form.
#[derive(Debug)]
pub struct Rref {
    /// Reduced rows, zero rows removed.
    pub rows: Vec<Vec<Rat>>,
    /// Pivot column of each reduced row, strictly increasing.
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form with exact arithmetic.
pub fn rref(rows_in: &[Vec<Rat>]) -> Rref {
    let mut rows: Vec<Vec<Rat>> = rows_in.to_vec();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..ncols {
        let Some(pivot) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, pivot);
        let inv = rows[next_row][col].recip();
        for j in col..ncols {
            rows[next_row][j] = &rows[next_row][j] * &inv;
        }
        for r in 0..rows.len() {
            if r != next_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for j in col..ncols {
                    let delta = &factor * &rows[next_row][j];
                    rows[r][j] = &rows[r][j] - &delta;
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    rows.truncate(next_row);
    Rref { rows, pivots }
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    rref(rows).rows.len()
}

/// A linear map `R^dim -> R^(dim-k)` whose kernel is the row span of the
/// input. Coordinates of the image are the non-pivot coordinates after
/// reducing modulo the span.
#[derive(Debug)]
pub struct QuotientMap {
    pub dim: usize,
    reduced: Rref,
    free_cols: Vec<usize>,
}

impl QuotientMap {
    /// Builds the quotient map for the span of `basis` inside `R^dim`.
    pub fn new(dim: usize, basis: &[Vec<Rat>]) -> Self {
        assert!(basis.iter().all(|v| v.len() == dim));
        let reduced = rref(basis);
        let free_cols = (0..dim)
            .filter(|c| !reduced.pivots.contains(c))
            .collect();
        QuotientMap {
            dim,
            reduced,
            free_cols,
        }
    }

    pub fn codim(&self) -> usize {
        self.free_cols.len()
    }

    pub fn subspace_rank(&self) -> usize {
        self.reduced.pivots.len()
    }

    /// Image coordinates of `v` modulo the subspace.
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (row, &p) in self.reduced.rows.iter().zip(&self.reduced.pivots) {
            if !w[p].is_zero() {
                let factor = w[p].clone();
                for j in 0..self.dim {
                    let delta = &factor * &row[j];
                    w[j] = &w[j] - &delta;
                }
            }
        }
        self.free_cols.iter().map(|&c| w[c].clone()).collect()
    }
}
