//! Exact vertex enumeration for bounded polyhedra given by halfspaces.
//!
//! Incremental double description: start from a bounding box strictly
//! containing the feasible region (found by exact LP), insert the input
//! halfspaces one at a time, and cut the current vertex set. Adjacency of a
//! kept/cut vertex pair is decided by the combinatorial test on exact tight
//! sets, so no tolerance enters anywhere. Tight sets are recomputed from the
//! constraint data for every vertex created, which keeps them exact even on
//! degenerate inputs.
//!
//! Intended for desk-scale polytopes (dimension <= 7, at most ~120
//! constraints); output-sensitive large-scale enumeration is a non-goal.

use crate::linalg::dot;
use crate::lp::{lp_solve, LpProblem, LpStatus, Relation, Sense};
use crate::rat::{cmp_vecs, Rat};

/// The halfspace `normal . x <= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<Rat>,
    pub offset: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<Rat>, offset: Rat) -> Self {
        Halfspace { normal, offset }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolytopeError {
    #[error("feasible region is unbounded")]
    Unbounded,
    #[error("feasible region is empty")]
    Empty,
    #[error("constraint system too large: {0} constraints exceed the supported 128")]
    TooManyConstraints(usize),
    #[error("halfspace dimension mismatch")]
    DimensionMismatch,
}

struct Vert {
    x: Vec<Rat>,
    tight: u128,
}

/// Enumerates the vertices of `{x : h.normal . x <= h.offset for all h}`.
///
/// The region must be bounded and nonempty. Output is sorted
/// lexicographically and duplicate-free.
pub fn enumerate_vertices(
    dim: usize,
    halfspaces: &[Halfspace],
) -> Result<Vec<Vec<Rat>>, PolytopeError> {
    if halfspaces.iter().any(|h| h.normal.len() != dim) {
        return Err(PolytopeError::DimensionMismatch);
    }
    let total = 2 * dim + halfspaces.len();
    if total > 128 {
        return Err(PolytopeError::TooManyConstraints(total));
    }

    // Strictly enlarged bounding box so that box facets are never tight at a
    // vertex of the true region.
    let mut lo = Vec::with_capacity(dim);
    let mut hi = Vec::with_capacity(dim);
    for coord in 0..dim {
        let mut obj = vec![Rat::zero(); dim];
        obj[coord] = Rat::one();
        for sense in [Sense::Maximize, Sense::Minimize] {
            let mut p = LpProblem::new(sense, obj.clone());
            for h in halfspaces {
                p.add_constraint(h.normal.clone(), Relation::Le, h.offset.clone());
            }
            let s = lp_solve(&p).expect("well-formed box LP");
            match s.status {
                LpStatus::Optimal => match sense {
                    Sense::Maximize => hi.push(&s.objective + &Rat::one()),
                    Sense::Minimize => lo.push(&s.objective - &Rat::one()),
                },
                LpStatus::Unbounded => return Err(PolytopeError::Unbounded),
                LpStatus::Infeasible => return Err(PolytopeError::Empty),
            }
        }
    }

    // Full constraint list: box first (ids 0..2*dim), then the inputs.
    let mut cons: Vec<Halfspace> = Vec::with_capacity(total);
    for coord in 0..dim {
        let mut n = vec![Rat::zero(); dim];
        n[coord] = Rat::one();
        cons.push(Halfspace::new(n.clone(), hi[coord].clone()));
        for v in n.iter_mut() {
            *v = -&*v;
        }
        cons.push(Halfspace::new(n, -&lo[coord]));
    }
    let input_base = cons.len();
    cons.extend(halfspaces.iter().cloned());

    let tight_at = |x: &[Rat], upto: usize| -> u128 {
        let mut t = 0u128;
        for (id, h) in cons[..upto].iter().enumerate() {
            if dot(&h.normal, x) == h.offset {
                t |= 1u128 << id;
            }
        }
        t
    };

    // Box corners.
    let mut verts: Vec<Vert> = Vec::with_capacity(1 << dim);
    for mask in 0..(1usize << dim) {
        let x: Vec<Rat> = (0..dim)
            .map(|c| {
                if mask >> c & 1 == 1 {
                    hi[c].clone()
                } else {
                    lo[c].clone()
                }
            })
            .collect();
        let tight = tight_at(&x, input_base);
        verts.push(Vert { x, tight });
    }

    for (k, h) in halfspaces.iter().enumerate() {
        let id = input_base + k;
        let upto = id + 1;
        let margins: Vec<Rat> = verts.iter().map(|v| &h.offset - &dot(&h.normal, &v.x)).collect();
        if margins.iter().all(|m| !m.is_negative()) {
            // Nothing cut; record new tightness.
            for (v, m) in verts.iter_mut().zip(&margins) {
                if m.is_zero() {
                    v.tight |= 1u128 << id;
                }
            }
            continue;
        }
        let inside: Vec<usize> = (0..verts.len())
            .filter(|&i| margins[i].is_positive())
            .collect();
        let outside: Vec<usize> = (0..verts.len())
            .filter(|&i| margins[i].is_negative())
            .collect();

        let mut created: Vec<Vert> = Vec::new();
        for &u in &inside {
            for &w in &outside {
                let common = verts[u].tight & verts[w].tight;
                if (common.count_ones() as usize) < dim.saturating_sub(1) {
                    continue;
                }
                // Combinatorial adjacency: no third vertex is tight on the
                // whole common set.
                let adjacent = verts
                    .iter()
                    .enumerate()
                    .all(|(z, vz)| z == u || z == w || common & !vz.tight != 0);
                if !adjacent {
                    continue;
                }
                // Crossing point of the edge with the new hyperplane.
                let t = &margins[u] / &(&margins[u] - &margins[w]);
                let x: Vec<Rat> = verts[u]
                    .x
                    .iter()
                    .zip(&verts[w].x)
                    .map(|(a, b)| a + &(&t * &(b - a)))
                    .collect();
                let tight = tight_at(&x, upto);
                created.push(Vert { x, tight });
            }
        }

        let mut next: Vec<Vert> = Vec::new();
        for (i, v) in verts.drain(..).enumerate() {
            if !margins[i].is_negative() {
                let mut v = v;
                if margins[i].is_zero() {
                    v.tight |= 1u128 << id;
                }
                next.push(v);
            }
        }
        created.sort_by(|a, b| cmp_vecs(&a.x, &b.x));
        created.dedup_by(|a, b| a.x == b.x);
        next.extend(created);
        verts = next;
        if verts.is_empty() {
            return Err(PolytopeError::Empty);
        }
    }

    debug_assert!(
        verts
            .iter()
            .all(|v| v.tight & ((1u128 << input_base) - 1) == 0),
        "bounding box must not touch the final region"
    );

    let mut out: Vec<Vec<Rat>> = verts.into_iter().map(|v| v.x).collect();
    out.sort_by(|a, b| cmp_vecs(a, b));
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn hs(n: &[i64], b: i64) -> Halfspace {
        Halfspace::new(n.iter().map(|&x| r(x)).collect(), r(b))
    }

    #[test]
    fn unit_square() {
        let vs = enumerate_vertices(
            2,
            &[hs(&[1, 0], 1), hs(&[-1, 0], 0), hs(&[0, 1], 1), hs(&[0, -1], 0)],
        )
        .unwrap();
        assert_eq!(vs.len(), 4);
        assert!(vs.contains(&vec![r(0), r(0)]));
        assert!(vs.contains(&vec![r(1), r(1)]));
    }

    #[test]
    fn cross_polytope_from_sign_facets() {
        // |x| + |y| <= 1 via the four sign-pattern facets
        let vs = enumerate_vertices(
            2,
            &[hs(&[1, 1], 1), hs(&[1, -1], 1), hs(&[-1, 1], 1), hs(&[-1, -1], 1)],
        )
        .unwrap();
        assert_eq!(vs.len(), 4);
        assert!(vs.contains(&vec![r(1), r(0)]));
        assert!(vs.contains(&vec![r(0), r(-1)]));
    }

    #[test]
    fn redundant_constraints_ignored() {
        let vs = enumerate_vertices(
            2,
            &[
                hs(&[1, 0], 1),
                hs(&[-1, 0], 1),
                hs(&[0, 1], 1),
                hs(&[0, -1], 1),
                hs(&[1, 1], 5),
            ],
        )
        .unwrap();
        assert_eq!(vs.len(), 4);
    }

    #[test]
    fn degenerate_apex_handled() {
        // pyramid-like: square cut to a point at the top
        let vs = enumerate_vertices(
            3,
            &[
                hs(&[1, 0, 0], 1),
                hs(&[-1, 0, 0], 1),
                hs(&[0, 1, 0], 1),
                hs(&[0, -1, 0], 1),
                hs(&[0, 0, -1], 0),
                hs(&[1, 0, 1], 1),
                hs(&[-1, 0, 1], 1),
                hs(&[0, 1, 1], 1),
                hs(&[0, -1, 1], 1),
            ],
        )
        .unwrap();
        // base square at z=0 plus apex (0,0,1); apex is tight on 4 planes
        assert_eq!(vs.len(), 5);
        assert!(vs.contains(&vec![r(0), r(0), r(1)]));
    }

    #[test]
    fn unbounded_rejected() {
        let err = enumerate_vertices(2, &[hs(&[1, 0], 1)]).unwrap_err();
        assert_eq!(err, PolytopeError::Unbounded);
    }

    #[test]
    fn empty_rejected() {
        let err = enumerate_vertices(1, &[hs(&[1], 0), hs(&[-1], -1)]).unwrap_err();
        assert_eq!(err, PolytopeError::Empty);
    }
}
