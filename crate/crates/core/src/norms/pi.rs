//! The projective cross-norm.
//!
//! Primal side: the cheapest way to write the molecule as a sum of
//! elementary tensors, `inf sum d(x_i, y_i) ||e_i||`. One vector per
//! unordered pair suffices (merging terms on a pair never increases the
//! cost), which turns the infimum into a finite LP. Dual side: the best
//! pairing value over operators with Lipschitz norm at most one, again an
//! LP. Both are solved and their exact equality is asserted; the solutions
//! become the primal representation and the dual witness.

use crate::cert::{DualWitness, LpCertificate, NormResult, NormValue, PrimalWitness};
use crate::linalg;
use crate::lp::{lp_check_certificate, lp_solve, LpProblem, LpStatus, Relation, Sense};
use crate::molecule::{FormalRepresentation, Molecule, RepTerm};
use crate::norms::NormError;
use crate::rat::Rat;

/// Builds the primal LP: variables are one vector `e` per unordered pair
/// plus its norm epigraph `t`, minimizing `sum d * t` subject to the facet
/// inequalities `<facet, e> <= t` and the canonical-coordinate equalities.
fn primal_problem(u: &Molecule) -> (LpProblem, Vec<(usize, usize)>) {
    let inst = u.instance();
    let pairs = inst.metric.pairs();
    let dim = inst.dim();
    let np = pairs.len();
    let e_col = |k: usize, c: usize| k * dim + c;
    let t_col = |k: usize| np * dim + k;
    let n_vars = np * dim + np;

    let mut objective = vec![Rat::zero(); n_vars];
    for (k, (i, j)) in pairs.iter().enumerate() {
        objective[t_col(k)] = inst.metric.dist(*i, *j).clone();
    }
    let mut p = LpProblem::new(Sense::Minimize, objective);
    for k in 0..np {
        p.set_lower(t_col(k), Rat::zero());
    }
    // norm epigraph: <facet, e_k> - t_k <= 0
    for k in 0..np {
        for facet in inst.space.facets() {
            let mut row = vec![Rat::zero(); n_vars];
            for c in 0..dim {
                row[e_col(k, c)] = facet[c].clone();
            }
            row[t_col(k)] = -Rat::one();
            p.add_constraint(row, Relation::Le, Rat::zero());
        }
    }
    // canonical coordinates: sum of incident vectors matches the molecule
    for z in 1..inst.n_points() {
        let m_z = u.coeff(z);
        for c in 0..dim {
            let mut row = vec![Rat::zero(); n_vars];
            for (k, (i, j)) in pairs.iter().enumerate() {
                if *i == z {
                    row[e_col(k, c)] = Rat::one();
                } else if *j == z {
                    row[e_col(k, c)] = -Rat::one();
                }
            }
            p.add_constraint(row, Relation::Eq, m_z[c].clone());
        }
    }
    (p, pairs)
}

/// Builds the dual LP: variables are the operator values `f(z)` in dual
/// coordinates, maximizing the pairing subject to the Lipschitz conditions
/// `<v, f(x) - f(y)> <= d(x, y)` for every ball vertex `v`.
fn dual_problem(u: &Molecule) -> LpProblem {
    let inst = u.instance();
    let dim = inst.dim();
    let n = inst.n_points();
    let col = |z: usize, c: usize| (z - 1) * dim + c;
    let n_vars = (n - 1) * dim;

    let mut objective = vec![Rat::zero(); n_vars];
    for z in 1..n {
        let m_z = u.coeff(z);
        for c in 0..dim {
            objective[col(z, c)] = m_z[c].clone();
        }
    }
    let mut p = LpProblem::new(Sense::Maximize, objective);
    for i in 0..n {
        for j in (i + 1)..n {
            for v in inst.space.vertices() {
                let mut row = vec![Rat::zero(); n_vars];
                for c in 0..dim {
                    if i != 0 {
                        row[col(i, c)] = v[c].clone();
                    }
                    if j != 0 {
                        row[col(j, c)] = &row[col(j, c)] - &v[c];
                    }
                }
                p.add_constraint(row, Relation::Le, inst.metric.dist(i, j).clone());
            }
        }
    }
    p
}

/// Exact projective norm with matching primal representation and dual
/// witness. The two LP values must agree as identical rationals; a gap is
/// a solver bug and is reported as such.
pub fn pi_norm(u: &Molecule) -> Result<NormResult, NormError> {
    let inst = u.instance();
    let dim = inst.dim();

    let (primal_lp, pairs) = primal_problem(u);
    let primal_sol = lp_solve(&primal_lp)?;
    debug_assert_eq!(primal_sol.status, LpStatus::Optimal);
    debug_assert!(lp_check_certificate(&primal_lp, &primal_sol)?);

    let dual_lp = dual_problem(u);
    let dual_sol = lp_solve(&dual_lp)?;
    debug_assert_eq!(dual_sol.status, LpStatus::Optimal);
    debug_assert!(lp_check_certificate(&dual_lp, &dual_sol)?);

    if primal_sol.objective != dual_sol.objective {
        return Err(NormError::InternalDualityGap {
            primal: primal_sol.objective.to_string(),
            dual: dual_sol.objective.to_string(),
        });
    }
    let value = primal_sol.objective.clone();

    // Primal witness: the nonzero pair vectors.
    let mut terms = Vec::new();
    for (k, (i, j)) in pairs.iter().enumerate() {
        let e: Vec<Rat> = (0..dim)
            .map(|c| primal_sol.primal[k * dim + c].clone())
            .collect();
        if !linalg::is_zero_vec(&e) {
            terms.push(RepTerm { x: *i, y: *j, e });
        }
    }
    let rep = FormalRepresentation::new(terms);
    debug_assert_eq!(rep.projective_cost(inst), value);

    // Dual witness: the operator read off the dual LP's solution.
    let n = inst.n_points();
    let mut values = vec![linalg::zeros(dim)];
    for z in 1..n {
        values.push(
            (0..dim)
                .map(|c| dual_sol.primal[(z - 1) * dim + c].clone())
                .collect(),
        );
    }

    Ok(NormResult {
        value: NormValue::Exact(value.clone()),
        method: "pi: primal and dual LP with exact equality".into(),
        p: None,
        primal_witness: Some(PrimalWitness {
            terms: rep.terms,
            weights: None,
            cost: value.clone(),
        }),
        dual_witness: Some(DualWitness {
            values,
            bound: Rat::one(),
            attained: value,
        }),
        lp_certificates: vec![
            LpCertificate {
                label: "pi-primal".into(),
                problem: primal_lp,
                solution: primal_sol,
            },
            LpCertificate {
                label: "pi-dual".into(),
                problem: dual_lp,
                solution: dual_sol,
            },
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;
    use crate::molecule::Instance;
    use crate::operator::LipOperator;
    use crate::space::{NormSpec, PolyhedralSpace};

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn p3_line() -> Instance {
        let m = FiniteMetricSpace::validate_metric(vec![
            vec![r(0), r(1), r(2)],
            vec![r(1), r(0), r(1)],
            vec![r(2), r(1), r(0)],
        ])
        .unwrap();
        let e = PolyhedralSpace::build_space(1, &NormSpec::LInf).unwrap();
        Instance::new(m, e)
    }

    #[test]
    fn elementary_tensor_value() {
        let inst = p3_line();
        let u = Molecule::elementary(inst.clone(), 2, 0, vec![Rat::new(3, 2)]).unwrap();
        let res = pi_norm(&u).unwrap();
        // d(0, b) * |3/2| = 3
        assert_eq!(res.value, NormValue::Exact(r(3)));
    }

    #[test]
    fn hand_lp_example() {
        let inst = p3_line();
        let u = Molecule::from_coeffs(
            inst.clone(),
            [(1, vec![r(1)]), (2, vec![r(1)])].into_iter().collect(),
        )
        .unwrap();
        let res = pi_norm(&u).unwrap();
        assert_eq!(res.value, NormValue::Exact(r(3)));
        // dual witness attains the value with Lipschitz norm one
        let w = res.dual_witness.unwrap();
        let f = LipOperator::new(inst.clone(), w.values).unwrap();
        assert_eq!(f.lip_norm(), r(1));
        assert_eq!(u.pairing(&f).unwrap(), r(3));
        // primal witness costs exactly the value
        let pw = res.primal_witness.unwrap();
        assert_eq!(pw.cost, r(3));
    }

    #[test]
    fn zero_molecule() {
        let inst = p3_line();
        let u = Molecule::zero(inst);
        let res = pi_norm(&u).unwrap();
        assert_eq!(res.value, NormValue::Exact(r(0)));
    }
}
