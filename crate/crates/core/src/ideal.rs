//! Operator-side norms and the duality machinery.
//!
//! The functional norm of an operator against a cross-norm: for the
//! projective norm it is the plain Lipschitz norm; for the injective norm
//! it is computed by the cheapest decomposition into rank-one generators
//! (the polar description of the injective unit ball). The p-summing norm
//! is a single LP over pair weights, with the sup over the Lipschitz unit
//! ball evaluated on its vertex set. Extremal functionals realize the
//! pairing bound with equality and are read off LP dual solutions.

use crate::cert::{Alpha, Exponent, LpCertificate, NormResult};
use crate::linalg;
use crate::lipball::lip_ball_vertices;
use crate::lp::{lp_check_certificate, lp_solve, LpProblem, LpStatus, Relation, Sense};
use crate::molecule::{Instance, Molecule};
use crate::norms::{eps_attaining_pair, pi_norm, NormConfig, NormError};
use crate::operator::{LipFunctional, LipOperator};
use crate::rat::Rat;

/// Witness data for a p-summing norm value.
///
/// For finite `p` the LP computes `value^p` (kept exact in `value_pow`);
/// `weights` is the attaining pair family (the packing side) and
/// `dominators` the multipliers over ball vertices (the covering side).
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct PSummingCertificate {
    pub p: Exponent,
    /// `value^p` for finite `p`; the value itself for `p = infinity`.
    pub value_pow: Rat,
    /// `(x, y, w)` triples with positive weight.
    pub weights: Vec<(usize, usize, Rat)>,
    /// `(vertex value table, multiplier)` pairs with positive multiplier.
    pub dominators: Vec<(Vec<Rat>, Rat)>,
    pub lp: Option<LpCertificate>,
}

impl PSummingCertificate {
    /// The norm value when it is itself rational (`p` in `{1, inf}` or the
    /// LP optimum happens to be a perfect p-th power).
    pub fn exact_value(&self) -> Option<Rat> {
        match self.p {
            Exponent::Infinity | Exponent::Finite(1) => Some(self.value_pow.clone()),
            Exponent::Finite(p) => self.value_pow.exact_nth_root(p),
        }
    }

    /// Outward rational enclosure of the norm value.
    pub fn value_bounds(&self, digits: u32) -> (Rat, Rat) {
        match self.p {
            Exponent::Infinity | Exponent::Finite(1) => {
                (self.value_pow.clone(), self.value_pow.clone())
            }
            Exponent::Finite(p) => (
                self.value_pow.nth_root_floor(p, digits),
                self.value_pow.nth_root_ceil(p, digits),
            ),
        }
    }

    pub fn value_f64(&self) -> f64 {
        match self.p {
            Exponent::Infinity | Exponent::Finite(1) => self.value_pow.to_f64(),
            Exponent::Finite(p) => self.value_pow.to_f64().powf(1.0 / p as f64),
        }
    }
}

/// The functional norm of `f` against the cross-norm `alpha`.
///
/// For `pi` this is the Lipschitz norm. For `eps` it is the optimum of the
/// decomposition LP `min sum c_j` over nonnegative combinations of the
/// rank-one generators `g . phi` (vertex pairs of the two balls) that
/// reproduce `f`'s value table; the generators span, so the LP is always
/// feasible.
pub fn lip_alpha_norm(f: &LipOperator, alpha: Alpha, cfg: &NormConfig) -> Result<Rat, NormError> {
    match alpha {
        Alpha::Pi => Ok(f.lip_norm()),
        Alpha::Eps => Ok(eps_dual_decomposition(f, cfg)?.0),
    }
}

/// The decomposition LP behind `lip_alpha_norm(.., Eps)`; also returns the
/// solved program for re-checking.
pub fn eps_dual_decomposition(
    f: &LipOperator,
    cfg: &NormConfig,
) -> Result<(Rat, LpCertificate), NormError> {
    let inst = f.instance();
    let n = inst.n_points();
    let dim = inst.dim();
    let g_vertices = lip_ball_vertices(&inst.metric, cfg.point_cap)?;
    let phi_vertices = inst.space.facets();

    let n_rows = (n - 1) * dim;
    let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(g_vertices.len() * phi_vertices.len());
    for g in g_vertices.iter() {
        for phi in phi_vertices {
            let mut col = Vec::with_capacity(n_rows);
            for z in 1..n {
                for c in 0..dim {
                    col.push(&g[z] * &phi[c]);
                }
            }
            columns.push(col);
        }
    }

    let n_vars = columns.len();
    let mut p = LpProblem::new(Sense::Minimize, vec![Rat::one(); n_vars]);
    for j in 0..n_vars {
        p.set_lower(j, Rat::zero());
    }
    for row_idx in 0..n_rows {
        let row: Vec<Rat> = columns.iter().map(|col| col[row_idx].clone()).collect();
        let z = row_idx / dim + 1;
        let c = row_idx % dim;
        p.add_constraint(row, Relation::Eq, f.value(z)[c].clone());
    }
    let sol = lp_solve(&p)?;
    debug_assert_eq!(sol.status, LpStatus::Optimal);
    debug_assert!(lp_check_certificate(&p, &sol)?);
    let value = sol.objective.clone();
    Ok((
        value,
        LpCertificate {
            label: "eps-dual-decomposition".into(),
            problem: p,
            solution: sol,
        },
    ))
}

/// The Lipschitz p-summing norm by LP.
///
/// For finite `p`, `value^p` is the optimum of the covering program
/// `min sum y_g` subject to `sum_g y_g |g(x_i) - g(y_i)|^p >= ||f(x_i) -
/// f(y_i)||^p` per pair; its dual multipliers are the attaining weighted
/// pair family of the packing form. For `p = infinity` the value is the
/// Lipschitz norm.
pub fn p_summing_norm(
    f: &LipOperator,
    p: Exponent,
    cfg: &NormConfig,
) -> Result<PSummingCertificate, NormError> {
    let inst = f.instance();
    match p {
        Exponent::Infinity => {
            let value = f.lip_norm();
            let mut weights = Vec::new();
            if !value.is_zero() {
                // argmax pair as the one-element attaining family
                let metric = &inst.metric;
                let mut best: Option<((usize, usize), Rat)> = None;
                for (i, j) in metric.pairs() {
                    let ratio = inst.space.dual_norm(&linalg::sub(f.value(i), f.value(j)))
                        / metric.dist(i, j);
                    if best.as_ref().is_none_or(|(_, b)| ratio > *b) {
                        best = Some(((i, j), ratio));
                    }
                }
                let ((i, j), _) = best.expect("at least one pair");
                weights.push((i, j, Rat::one()));
            }
            Ok(PSummingCertificate {
                p,
                value_pow: value,
                weights,
                dominators: Vec::new(),
                lp: None,
            })
        }
        Exponent::Finite(pv) => {
            if pv < 1 {
                return Err(NormError::UnsupportedExponent(p));
            }
            let g_vertices = lip_ball_vertices(&inst.metric, cfg.point_cap)?;
            let pairs = inst.metric.pairs();
            let rhs: Vec<Rat> = pairs
                .iter()
                .map(|&(i, j)| {
                    inst.space
                        .dual_norm(&linalg::sub(f.value(i), f.value(j)))
                        .pow(pv as i32)
                })
                .collect();

            // a vertex and its negation give the same column; dedup
            let mut columns: Vec<(Vec<Rat>, &Vec<Rat>)> = g_vertices
                .iter()
                .map(|g| {
                    let col: Vec<Rat> = pairs
                        .iter()
                        .map(|&(i, j)| (&g[i] - &g[j]).abs().pow(pv as i32))
                        .collect();
                    (col, g)
                })
                .collect();
            columns.sort_by(|a, b| crate::rat::cmp_vecs(&a.0, &b.0));
            columns.dedup_by(|a, b| a.0 == b.0);

            let n_vars = columns.len();
            let mut prob = LpProblem::new(Sense::Minimize, vec![Rat::one(); n_vars]);
            for j in 0..n_vars {
                prob.set_lower(j, Rat::zero());
            }
            for (k, _) in pairs.iter().enumerate() {
                let row: Vec<Rat> = columns.iter().map(|(col, _)| col[k].clone()).collect();
                prob.add_constraint(row, Relation::Ge, rhs[k].clone());
            }
            let sol = lp_solve(&prob)?;
            debug_assert_eq!(sol.status, LpStatus::Optimal);
            debug_assert!(lp_check_certificate(&prob, &sol)?);

            let weights: Vec<(usize, usize, Rat)> = pairs
                .iter()
                .zip(&sol.dual)
                .filter(|(_, w)| !w.is_zero())
                .map(|(&(i, j), w)| (i, j, w.clone()))
                .collect();
            let dominators: Vec<(Vec<Rat>, Rat)> = columns
                .iter()
                .zip(&sol.primal)
                .filter(|(_, y)| !y.is_zero())
                .map(|((_, g), y)| ((*g).clone(), y.clone()))
                .collect();
            let value_pow = sol.objective.clone();
            Ok(PSummingCertificate {
                p,
                value_pow,
                weights,
                dominators,
                lp: Some(LpCertificate {
                    label: format!("p-summing p={pv}"),
                    problem: prob,
                    solution: sol,
                }),
            })
        }
    }
}

/// The operator norm dual to the mixed `d_p` norm, computed through the
/// conjugate p-summing norm. Only exponents with an integer conjugate
/// (`1`, `2`, `infinity`) are supported exactly.
pub fn d_p_operator_norm(
    f: &LipOperator,
    p: Exponent,
    cfg: &NormConfig,
) -> Result<PSummingCertificate, NormError> {
    let conj = p.conjugate().ok_or(NormError::UnsupportedExponent(p))?;
    p_summing_norm(f, conj, cfg)
}

/// A functional with `lip_alpha_norm = 1` whose pairing with `u` equals
/// the norm exactly.
pub fn extremal_functional(
    u: &Molecule,
    alpha: Alpha,
    cfg: &NormConfig,
) -> Result<LipOperator, NormError> {
    if u.is_zero() {
        return Err(NormError::ZeroMolecule);
    }
    let inst = u.instance();
    match alpha {
        Alpha::Pi => {
            let res: NormResult = pi_norm(u)?;
            let w = res.dual_witness.expect("nonzero molecule has a witness");
            Ok(LipOperator::new(inst.clone(), w.values)?)
        }
        Alpha::Eps => {
            let (g, phi, signed) = eps_attaining_pair(u, cfg)?.expect("nonzero molecule");
            debug_assert!(!signed.is_zero());
            let g_fun = LipFunctional::new(inst.metric.clone(), g)?;
            let phi_oriented: Vec<Rat> = if signed.is_negative() {
                phi.iter().map(|v| -v).collect()
            } else {
                phi
            };
            Ok(LipOperator::rank_one(inst.clone(), &g_fun, &phi_oriented)?)
        }
    }
}

/// Assembles `sum g_j . phi_j` and returns its functional norm: the norm
/// on the associated product of finite-rank operators.
pub fn alpha_prime_norm(
    instance: &Instance,
    terms: &[(LipFunctional, Vec<Rat>)],
    alpha: Alpha,
    cfg: &NormConfig,
) -> Result<Rat, NormError> {
    let mut f = LipOperator::zero(instance.clone());
    for (g, phi) in terms {
        let rank_one = LipOperator::rank_one(instance.clone(), g, phi)?;
        f = f.add(&rank_one)?;
    }
    lip_alpha_norm(&f, alpha, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetricSpace;
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
    fn pi_functional_norm_is_lipschitz_norm() {
        let inst = p3_line();
        let f = LipOperator::new(inst, vec![vec![r(0)], vec![r(1)], vec![r(2)]]).unwrap();
        let cfg = NormConfig::default();
        assert_eq!(lip_alpha_norm(&f, Alpha::Pi, &cfg).unwrap(), r(1));
    }

    #[test]
    fn eps_functional_norm_of_rank_one() {
        let inst = p3_line();
        let g = LipFunctional::new(inst.metric.clone(), vec![r(0), r(1), r(2)]).unwrap();
        let f = LipOperator::rank_one(inst, &g, &[r(3)]).unwrap();
        let cfg = NormConfig::default();
        // Lip(g) ||phi|| = 1 * 3 for both norms
        assert_eq!(lip_alpha_norm(&f, Alpha::Eps, &cfg).unwrap(), r(3));
        assert_eq!(lip_alpha_norm(&f, Alpha::Pi, &cfg).unwrap(), r(3));
    }

    #[test]
    fn eps_functional_norm_dominates_lipschitz_norm() {
        let inst = p3_line();
        let cfg = NormConfig::default();
        let f = LipOperator::new(inst, vec![vec![r(0)], vec![r(1)], vec![-r(1)]]).unwrap();
        let eps = lip_alpha_norm(&f, Alpha::Eps, &cfg).unwrap();
        assert!(eps >= f.lip_norm());
    }

    #[test]
    fn infinity_summing_is_lipschitz_norm() {
        let inst = p3_line();
        let f = LipOperator::new(inst, vec![vec![r(0)], vec![r(1)], vec![r(2)]]).unwrap();
        let cfg = NormConfig::default();
        let cert = p_summing_norm(&f, Exponent::Infinity, &cfg).unwrap();
        assert_eq!(cert.value_pow, r(1));
        assert_eq!(cert.exact_value(), Some(r(1)));
    }

    #[test]
    fn summing_norm_dominates_lipschitz_norm_via_single_pair() {
        let inst = p3_line();
        let f = LipOperator::new(inst, vec![vec![r(0)], vec![r(2)], vec![r(1)]]).unwrap();
        let cfg = NormConfig::default();
        for p in [Exponent::Finite(1), Exponent::Finite(2)] {
            let cert = p_summing_norm(&f, p, &cfg).unwrap();
            let lip = f.lip_norm();
            let pv = match p {
                Exponent::Finite(v) => v,
                _ => unreachable!(),
            };
            assert!(cert.value_pow >= lip.pow(pv as i32));
        }
    }

    #[test]
    fn zero_operator_summing_norm() {
        let inst = p3_line();
        let f = LipOperator::zero(inst);
        let cfg = NormConfig::default();
        let cert = p_summing_norm(&f, Exponent::Finite(2), &cfg).unwrap();
        assert_eq!(cert.value_pow, r(0));
    }

    #[test]
    fn extremal_functional_attains_pi() {
        let inst = p3_line();
        let u = Molecule::elementary(inst.clone(), 2, 0, vec![r(1)]).unwrap();
        let cfg = NormConfig::default();
        let f = extremal_functional(&u, Alpha::Pi, &cfg).unwrap();
        assert_eq!(u.pairing(&f).unwrap(), r(2));
        assert_eq!(f.lip_norm(), r(1));
    }

    #[test]
    fn extremal_functional_attains_eps() {
        let inst = p3_line();
        let u = Molecule::elementary(inst.clone(), 1, 2, vec![r(1)]).unwrap();
        let cfg = NormConfig::default();
        let f = extremal_functional(&u, Alpha::Eps, &cfg).unwrap();
        let eps = crate::norms::eps_norm(&u, &cfg).unwrap();
        assert_eq!(u.pairing(&f).unwrap(), *eps.value.lower());
        assert_eq!(lip_alpha_norm(&f, Alpha::Eps, &cfg).unwrap(), r(1));
    }

    #[test]
    fn zero_molecule_has_no_extremal() {
        let inst = p3_line();
        let u = Molecule::zero(inst);
        let cfg = NormConfig::default();
        assert!(matches!(
            extremal_functional(&u, Alpha::Pi, &cfg),
            Err(NormError::ZeroMolecule)
        ));
    }

    #[test]
    fn unsupported_exponents_rejected() {
        let inst = p3_line();
        let f = LipOperator::zero(inst);
        let cfg = NormConfig::default();
        assert!(matches!(
            d_p_operator_norm(&f, Exponent::Finite(3), &cfg),
            Err(NormError::UnsupportedExponent(_))
        ));
        assert!(matches!(
            p_summing_norm(&f, Exponent::Finite(0), &cfg),
            Err(NormError::UnsupportedExponent(_))
        ));
    }

    #[test]
    fn cancelling_rank_one_terms() {
        let inst = p3_line();
        let g = LipFunctional::new(inst.metric.clone(), vec![r(0), r(1), r(2)]).unwrap();
        let cfg = NormConfig::default();
        let value = alpha_prime_norm(
            &inst,
            &[(g.clone(), vec![r(2)]), (g, vec![-r(2)])],
            Alpha::Pi,
            &cfg,
        )
        .unwrap();
        assert_eq!(value, r(0));
    }
}
