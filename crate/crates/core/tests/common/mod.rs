//! Independent oracles for the integration and acceptance tests.
//!
//! Nothing here reuses the library's double-description enumerator or its
//! simplex pivoting: vertices come from brute-force basis enumeration with
//! a local Gaussian elimination, and LP optima from enumerating feasible
//! basic points of boxed programs. These are the reference answers the
//! production paths are checked against.

#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use liptensor::lp::{LpProblem, Relation, Sense};
use liptensor::operator::LipOperator;
use liptensor::rat::cmp_vecs;
use liptensor::{FiniteMetricSpace, Rat};

/// Plain Gaussian elimination, local to the oracle.
pub fn gauss_solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = b.len();
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
                let f = m[r][col].clone();
                for j in col..=n {
                    let d = &f * &m[col][j];
                    m[r][j] = &m[r][j] - &d;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Brute-force vertex enumeration of `{x : a_i . x <= b_i}`: solve every
/// `dim`-subset of constraints as equalities, keep the feasible solutions.
pub fn oracle_vertices(dim: usize, halfspaces: &[(Vec<Rat>, Rat)]) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for subset in subsets_of_size(halfspaces.len(), dim) {
        let a: Vec<Vec<Rat>> = subset.iter().map(|&i| halfspaces[i].0.clone()).collect();
        let b: Vec<Rat> = subset.iter().map(|&i| halfspaces[i].1.clone()).collect();
        let Some(x) = gauss_solve(&a, &b) else {
            continue;
        };
        let feasible = halfspaces
            .iter()
            .all(|(n, c)| liptensor::linalg::dot(n, &x) <= *c);
        if feasible {
            out.push(x);
        }
    }
    out.sort_by(|a, b| cmp_vecs(a, b));
    out.dedup();
    out
}

/// Halfspace description of the Lipschitz unit ball in the coordinates
/// `g(1), ..., g(n-1)`.
pub fn lip_ball_halfspaces(x: &FiniteMetricSpace) -> Vec<(Vec<Rat>, Rat)> {
    let n = x.n_points();
    let dim = n - 1;
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut pos = vec![Rat::zero(); dim];
            if i != 0 {
                pos[i - 1] = Rat::one();
            }
            if j != 0 {
                pos[j - 1] = -Rat::one();
            }
            let neg: Vec<Rat> = pos.iter().map(|v| -v).collect();
            out.push((pos, x.dist(i, j).clone()));
            out.push((neg, x.dist(i, j).clone()));
        }
    }
    out
}

/// Oracle verdict on a linear program.
#[derive(Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Optimal(Rat),
    Infeasible,
}

/// Brute-force LP solve for programs whose variables are all boxed (so the
/// feasible region is a polytope and every nonempty region has a vertex):
/// enumerate all basic points from constraint/bound subsets, keep the
/// feasible ones, and take the best objective.
pub fn oracle_lp_solve(p: &LpProblem) -> OracleVerdict {
    let n = p.n_vars;
    assert!(
        (0..n).all(|j| p.lower[j].is_some() && p.upper[j].is_some()),
        "oracle needs boxed variables"
    );
    // candidate active sets: rows as equalities plus bound equalities
    let mut planes: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for c in &p.constraints {
        planes.push((c.coeffs.clone(), c.rhs.clone()));
    }
    for j in 0..n {
        let mut e = vec![Rat::zero(); n];
        e[j] = Rat::one();
        planes.push((e.clone(), p.lower[j].clone().unwrap()));
        planes.push((e, p.upper[j].clone().unwrap()));
    }
    let feasible = |x: &[Rat]| -> bool {
        for c in &p.constraints {
            let lhs = liptensor::linalg::dot(&c.coeffs, x);
            let ok = match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Eq => lhs == c.rhs,
                Relation::Ge => lhs >= c.rhs,
            };
            if !ok {
                return false;
            }
        }
        (0..n).all(|j| {
            &x[j] >= p.lower[j].as_ref().unwrap() && &x[j] <= p.upper[j].as_ref().unwrap()
        })
    };
    let mut best: Option<Rat> = None;
    for subset in subsets_of_size(planes.len(), n) {
        let a: Vec<Vec<Rat>> = subset.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<Rat> = subset.iter().map(|&i| planes[i].1.clone()).collect();
        let Some(x) = gauss_solve(&a, &b) else {
            continue;
        };
        if !feasible(&x) {
            continue;
        }
        let obj = liptensor::linalg::dot(&p.objective, &x);
        best = Some(match (best, p.sense) {
            (None, _) => obj,
            (Some(b), Sense::Maximize) => b.max(obj),
            (Some(b), Sense::Minimize) => b.min(obj),
        });
    }
    match best {
        Some(v) => OracleVerdict::Optimal(v),
        None => OracleVerdict::Infeasible,
    }
}

/// The p-th power of the best definitional family ratio with integer
/// multiplicities up to `max_mult`: `sum m ||f(x)-f(y)||^p` against the
/// sup over the Lipschitz ball of `sum m |g(x)-g(y)|^p` (the sup of a
/// convex function, taken over the oracle's own vertex list).
pub fn oracle_summing_pow(f: &LipOperator, p: u32, max_mult: usize) -> Rat {
    let inst = f.instance();
    let metric = &inst.metric;
    let verts = oracle_vertices(metric.n_points() - 1, &lip_ball_halfspaces(metric));
    let full = |g: &[Rat]| -> Vec<Rat> {
        let mut t = vec![Rat::zero()];
        t.extend_from_slice(g);
        t
    };
    let vert_tables: Vec<Vec<Rat>> = verts.iter().map(|g| full(g)).collect();

    let pairs = metric.pairs();
    let numer_unit: Vec<Rat> = pairs
        .iter()
        .map(|&(i, j)| {
            inst.space
                .dual_norm(&liptensor::linalg::sub(f.value(i), f.value(j)))
                .pow(p as i32)
        })
        .collect();

    let mut best = Rat::zero();
    let mut mults = vec![0usize; pairs.len()];
    loop {
        // advance the odometer
        let mut k = 0;
        loop {
            if k == mults.len() {
                return best;
            }
            if mults[k] < max_mult {
                mults[k] += 1;
                break;
            }
            mults[k] = 0;
            k += 1;
        }
        let numer: Rat = numer_unit
            .iter()
            .zip(&mults)
            .map(|(v, &m)| v * &Rat::from_int(m as i64))
            .sum();
        if numer.is_zero() {
            continue;
        }
        let denom = vert_tables
            .iter()
            .map(|g| {
                pairs
                    .iter()
                    .zip(&mults)
                    .map(|(&(i, j), &m)| {
                        (&g[i] - &g[j]).abs().pow(p as i32) * Rat::from_int(m as i64)
                    })
                    .sum::<Rat>()
            })
            .max()
            .expect("ball has vertices");
        if denom.is_zero() {
            continue;
        }
        let ratio = numer / denom;
        if ratio > best {
            best = ratio;
        }
    }
}
