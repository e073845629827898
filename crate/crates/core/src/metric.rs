//! Finite pointed metric spaces with exact rational distances.
//!
//! The base point is always index 0. Validation checks the three metric
//! axioms and reports a witness for the first violation it finds.

use serde::{Deserialize, Serialize};

use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("distance matrix is not square")]
    NotSquare,
    #[error("need at least 2 points")]
    TooFewPoints,
    #[error("matrix is asymmetric at ({0}, {1})")]
    AsymmetricMatrix(usize, usize),
    #[error("negative distance at ({0}, {1})")]
    NegativeDistance(usize, usize),
    #[error("nonzero diagonal entry at {0}")]
    NonzeroDiagonal(usize),
    #[error("zero distance between distinct points {0} and {1}")]
    ZeroOffDiagonal(usize, usize),
    #[error("triangle inequality fails on ({0}, {1}, {2}): d({0},{2}) > d({0},{1}) + d({1},{2})")]
    TriangleViolation(usize, usize, usize),
}

/// A finite metric space with base point 0 and exact distances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    d: Vec<Vec<Rat>>,
}

impl FiniteMetricSpace {
    /// Validates a distance matrix and wraps it. Points are labelled
    /// `p0, p1, ...` by default.
    pub fn validate_metric(d: Vec<Vec<Rat>>) -> Result<Self, MetricError> {
        let labels = (0..d.len()).map(|i| format!("p{i}")).collect();
        Self::with_labels(labels, d)
    }

    pub fn with_labels(labels: Vec<String>, d: Vec<Vec<Rat>>) -> Result<Self, MetricError> {
        let n = d.len();
        if n < 2 {
            return Err(MetricError::TooFewPoints);
        }
        if d.iter().any(|row| row.len() != n) || labels.len() != n {
            return Err(MetricError::NotSquare);
        }
        for i in 0..n {
            if !d[i][i].is_zero() {
                return Err(MetricError::NonzeroDiagonal(i));
            }
            for j in 0..n {
                if d[i][j] != d[j][i] {
                    return Err(MetricError::AsymmetricMatrix(i, j));
                }
                if d[i][j].is_negative() {
                    return Err(MetricError::NegativeDistance(i, j));
                }
                if i != j && d[i][j].is_zero() {
                    return Err(MetricError::ZeroOffDiagonal(i, j));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if d[i][k] > &d[i][j] + &d[j][k] {
                        return Err(MetricError::TriangleViolation(i, j, k));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { labels, d })
    }

    pub fn n_points(&self) -> usize {
        self.d.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rat {
        &self.d[i][j]
    }

    pub fn matrix(&self) -> &Vec<Vec<Rat>> {
        &self.d
    }

    /// All unordered pairs `(i, j)` with `i < j`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n_points();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                out.push((i, j));
            }
        }
        out
    }

    /// The metric subspace on `points`, which must contain the base point 0
    /// (it becomes index 0 of the subspace). Point order is preserved.
    pub fn subspace(&self, points: &[usize]) -> Result<FiniteMetricSpace, MetricError> {
        if points.first() != Some(&0) {
            return Err(MetricError::TooFewPoints);
        }
        if points.len() < 2 {
            return Err(MetricError::TooFewPoints);
        }
        let labels = points.iter().map(|&i| self.labels[i].clone()).collect();
        let d = points
            .iter()
            .map(|&i| points.iter().map(|&j| self.d[i][j].clone()).collect())
            .collect();
        Ok(FiniteMetricSpace { labels, d })
    }

    /// A stable key for memo tables, derived from the exact distances.
    pub fn memo_key(&self) -> String {
        let mut s = String::new();
        for row in &self.d {
            for v in row {
                s.push_str(&v.to_string());
                s.push(',');
            }
            s.push(';');
        }
        s
    }
}

/// Shortest-path closure of a symmetric positive weight matrix: the result
/// always satisfies the triangle inequality.
pub fn shortest_path_closure(mut w: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    let n = w.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &w[i][k] + &w[k][j];
                if via < w[i][j] {
                    w[i][j] = via;
                }
            }
        }
    }
    w
}
