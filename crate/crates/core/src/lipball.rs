//! Vertex enumeration of the Lipschitz unit ball of a finite pointed
//! metric space.
//!
//! The ball lives in the coordinates `g(1), ..., g(n-1)` (with `g(0) = 0`
//! fixed) and is cut out by the pair constraints
//! `|g(x) - g(y)| <= d(x, y)`. Its vertex set is the finite witness set
//! behind every supremum over the unit ball of scalar Lipschitz functions:
//! any convex objective attains its sup on these vertices.
//!
//! Vertex sets are memoized per distance matrix because every norm routine
//! re-uses them; the table supports concurrent insert-if-absent.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::metric::FiniteMetricSpace;
use crate::operator::LipFunctional;
use crate::polytope::{enumerate_vertices, Halfspace};
use crate::rat::Rat;

/// Default cap on the point count; vertex counts explode beyond this.
pub const DEFAULT_POINT_CAP: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LipBallError {
    #[error("point count {0} exceeds the cap {1}")]
    CapExceeded(usize, usize),
}

type VertexTable = RwLock<HashMap<String, Arc<Vec<Vec<Rat>>>>>;

fn memo() -> &'static VertexTable {
    static TABLE: OnceLock<VertexTable> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Exact vertex list of the Lipschitz unit ball as full value tables
/// (index 0 carries the fixed zero).
pub fn lip_ball_vertices(
    x: &FiniteMetricSpace,
    cap: usize,
) -> Result<Arc<Vec<Vec<Rat>>>, LipBallError> {
    let n = x.n_points();
    if n > cap {
        return Err(LipBallError::CapExceeded(n, cap));
    }
    let key = x.memo_key();
    if let Some(hit) = memo().read().expect("memo lock").get(&key) {
        return Ok(hit.clone());
    }

    let dim = n - 1;
    let mut halfspaces = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            // coordinates are g(1..n-1); g(0) contributes nothing
            let mut pos = vec![Rat::zero(); dim];
            if i != 0 {
                pos[i - 1] = Rat::one();
            }
            if j != 0 {
                pos[j - 1] = -Rat::one();
            }
            let neg: Vec<Rat> = pos.iter().map(|v| -v).collect();
            halfspaces.push(Halfspace::new(pos, x.dist(i, j).clone()));
            halfspaces.push(Halfspace::new(neg, x.dist(i, j).clone()));
        }
    }
    let raw = enumerate_vertices(dim, &halfspaces)
        .expect("Lipschitz ball is bounded and nonempty");
    let full: Vec<Vec<Rat>> = raw
        .into_iter()
        .map(|mut v| {
            let mut t = Vec::with_capacity(n);
            t.push(Rat::zero());
            t.append(&mut v);
            t
        })
        .collect();
    let arc = Arc::new(full);
    memo()
        .write()
        .expect("memo lock")
        .entry(key)
        .or_insert_with(|| arc.clone());
    Ok(arc)
}

/// The vertices wrapped as functionals over the given space.
pub fn lip_ball_functionals(
    x: &Arc<FiniteMetricSpace>,
    cap: usize,
) -> Result<Vec<LipFunctional>, LipBallError> {
    let verts = lip_ball_vertices(x, cap)?;
    Ok(verts
        .iter()
        .map(|v| LipFunctional::new(x.clone(), v.clone()).expect("vertex fixes base point"))
        .collect())
}

/// `sup |g(x) - g(y)|` over the unit ball equals the distance; the vertex
/// set must witness it for every pair. Used as a sanity check in tests.
pub fn witnesses_all_distances(x: &FiniteMetricSpace, vertices: &[Vec<Rat>]) -> bool {
    for i in 0..x.n_points() {
        for j in (i + 1)..x.n_points() {
            let best = vertices
                .iter()
                .map(|g| (&g[i] - &g[j]).abs())
                .max()
                .unwrap_or_else(Rat::zero);
            if best != *x.dist(i, j) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    #[test]
    fn two_point_ball() {
        let x = FiniteMetricSpace::validate_metric(vec![
            vec![r(0), r(1)],
            vec![r(1), r(0)],
        ])
        .unwrap();
        let vs = lip_ball_vertices(&x, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(vs.as_slice(), &[vec![r(0), -r(1)], vec![r(0), r(1)]]);
    }

    #[test]
    fn path_space_ball() {
        // d(0,a) = 1, d(a,b) = 1, d(0,b) = 2
        let x = FiniteMetricSpace::validate_metric(vec![
            vec![r(0), r(1), r(2)],
            vec![r(1), r(0), r(1)],
            vec![r(2), r(1), r(0)],
        ])
        .unwrap();
        let vs = lip_ball_vertices(&x, DEFAULT_POINT_CAP).unwrap();
        let as_pairs: Vec<(Rat, Rat)> = vs.iter().map(|v| (v[1].clone(), v[2].clone())).collect();
        assert_eq!(vs.len(), 4);
        for expect in [
            (r(1), r(2)),
            (r(1), r(0)),
            (-r(1), r(0)),
            (-r(1), -r(2)),
        ] {
            assert!(as_pairs.contains(&expect), "missing vertex {expect:?}");
        }
        assert!(witnesses_all_distances(&x, &vs));
    }

    #[test]
    fn equilateral_ball_symmetric_and_tight() {
        let x = FiniteMetricSpace::validate_metric(vec![
            vec![r(0), r(1), r(1)],
            vec![r(1), r(0), r(1)],
            vec![r(1), r(1), r(0)],
        ])
        .unwrap();
        let vs = lip_ball_vertices(&x, DEFAULT_POINT_CAP).unwrap();
        // hexagon
        assert_eq!(vs.len(), 6);
        for v in vs.iter() {
            let neg: Vec<Rat> = v.iter().map(|t| -t).collect();
            assert!(vs.contains(&neg), "vertex set must be symmetric");
        }
        assert!(witnesses_all_distances(&x, &vs));
    }

    #[test]
    fn cap_is_enforced() {
        let x = FiniteMetricSpace::validate_metric(vec![
            vec![r(0), r(1), r(1)],
            vec![r(1), r(0), r(1)],
            vec![r(1), r(1), r(0)],
        ])
        .unwrap();
        assert_eq!(
            lip_ball_vertices(&x, 2).unwrap_err(),
            LipBallError::CapExceeded(3, 2)
        );
    }

    #[test]
    fn memo_returns_same_allocation() {
        let x = FiniteMetricSpace::validate_metric(vec![
            vec![r(0), r(3)],
            vec![r(3), r(0)],
        ])
        .unwrap();
        let a = lip_ball_vertices(&x, DEFAULT_POINT_CAP).unwrap();
        let b = lip_ball_vertices(&x, DEFAULT_POINT_CAP).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
