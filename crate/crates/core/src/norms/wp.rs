//! The domination-based cross-norm `w_p` and the pair-family domination
//! check behind it.
//!
//! One weighted pair family dominates another when a matrix of operator
//! norm at most one maps the one system of elementary scalar molecules
//! onto the other; for conjugate exponents 1 and infinity the norm bound
//! is linear (column sums / row sums), so feasibility is an exact LP with
//! a Farkas certificate on failure.
//!
//! The norm itself is an infimum over representations together with
//! dominating families; the upper bound searches representations drawn
//! from the projective-optimal and star forms with norm-balanced scalar
//! weights (these pin the bound at or below the projective norm), plus an
//! LP-optimized dominating family over all pairs. The lower bound is the
//! injective norm, which every dominated representation must dominate.

use crate::cert::{Exponent, LpCertificate, NormResult, NormValue, PrimalWitness};
use crate::lp::{lp_solve, LpProblem, LpStatus, Relation, Sense};
use crate::metric::FiniteMetricSpace;
use crate::molecule::{Molecule, RepTerm};
use crate::norms::{eps_norm, pi_norm, NormConfig, NormError};
use crate::rat::Rat;

/// A weighted pair family `(scale, x, y)` standing for `scale * delta_(x, y)`.
pub type PairFamily = Vec<(Rat, usize, usize)>;

/// The matrix certifying one family dominates another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationWitness {
    pub p_prime: Exponent,
    /// Rows indexed by the dominated family, columns by the dominating one.
    pub matrix: Vec<Vec<Rat>>,
}

#[derive(Debug)]
pub enum PrecResult {
    Feasible(DominationWitness),
    /// The LP (with its exact Farkas certificate) proving infeasibility.
    Infeasible(Box<LpCertificate>),
}

/// Canonical scalar-molecule coordinates of `scale * delta_(x, y)` over
/// the non-base points.
fn pair_coords(n: usize, scale: &Rat, x: usize, y: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n - 1];
    if x != 0 {
        v[x - 1] = scale.clone();
    }
    if y != 0 {
        v[y - 1] = &v[y - 1] - scale;
    }
    v
}

fn validate_family(metric: &FiniteMetricSpace, fam: &PairFamily) -> Result<(), NormError> {
    let n = metric.n_points();
    for (idx, (_, x, y)) in fam.iter().enumerate() {
        if *x >= n || *y >= n {
            return Err(crate::molecule::MoleculeError::IndexOutOfRange(idx).into());
        }
        if x == y {
            return Err(crate::molecule::MoleculeError::DegeneratePair(idx).into());
        }
    }
    Ok(())
}

/// Exact verification that `matrix` witnesses `lam` dominated by `mu`:
/// the molecule identities hold and the operator norm bound is satisfied.
pub fn verify_domination(
    metric: &FiniteMetricSpace,
    p_prime: Exponent,
    lam: &PairFamily,
    mu: &PairFamily,
    matrix: &[Vec<Rat>],
) -> Result<(), String> {
    let n = metric.n_points();
    if matrix.len() != lam.len() || matrix.iter().any(|r| r.len() != mu.len()) {
        return Err("matrix shape mismatch".into());
    }
    for (i, (li, xi, yi)) in lam.iter().enumerate() {
        let target = pair_coords(n, li, *xi, *yi);
        let mut got = vec![Rat::zero(); n - 1];
        for (j, (mj, xj, yj)) in mu.iter().enumerate() {
            if matrix[i][j].is_zero() {
                continue;
            }
            let col = pair_coords(n, mj, *xj, *yj);
            for z in 0..n - 1 {
                got[z] += &matrix[i][j] * &col[z];
            }
        }
        if got != target {
            return Err(format!("molecule identity fails on row {i}"));
        }
    }
    let one = Rat::one();
    match p_prime {
        Exponent::Finite(1) => {
            for j in 0..mu.len() {
                let col_sum: Rat = matrix.iter().map(|row| row[j].abs()).sum();
                if col_sum > one {
                    return Err(format!("column {j} sum exceeds one"));
                }
            }
        }
        Exponent::Infinity => {
            for (i, row) in matrix.iter().enumerate() {
                let row_sum: Rat = row.iter().map(|v| v.abs()).sum();
                if row_sum > one {
                    return Err(format!("row {i} sum exceeds one"));
                }
            }
        }
        other => return Err(format!("unsupported exponent {other}")),
    }
    Ok(())
}

/// Decides whether `lam` is dominated by `mu` at exponent `p_prime`
/// (1 or infinity): exact LP feasibility for the witnessing matrix.
pub fn prec_check(
    metric: &FiniteMetricSpace,
    p_prime: Exponent,
    lam: &PairFamily,
    mu: &PairFamily,
) -> Result<PrecResult, NormError> {
    if !matches!(p_prime, Exponent::Finite(1) | Exponent::Infinity) {
        return Err(NormError::UnsupportedExponent(p_prime));
    }
    validate_family(metric, lam)?;
    validate_family(metric, mu)?;
    let n = metric.n_points();
    let (nl, nm) = (lam.len(), mu.len());

    // variables: a+_ij, a-_ij
    let col = |i: usize, j: usize, neg: bool| 2 * (i * nm + j) + usize::from(neg);
    let n_vars = 2 * nl * nm;
    let mut p = LpProblem::new(Sense::Minimize, vec![Rat::one(); n_vars]);
    for v in 0..n_vars {
        p.set_lower(v, Rat::zero());
    }
    let mu_coords: Vec<Vec<Rat>> = mu
        .iter()
        .map(|(m, x, y)| pair_coords(n, m, *x, *y))
        .collect();
    for (i, (li, xi, yi)) in lam.iter().enumerate() {
        let target = pair_coords(n, li, *xi, *yi);
        for (z, t) in target.iter().enumerate() {
            let mut row = vec![Rat::zero(); n_vars];
            for j in 0..nm {
                row[col(i, j, false)] = mu_coords[j][z].clone();
                row[col(i, j, true)] = -&mu_coords[j][z];
            }
            p.add_constraint(row, Relation::Eq, t.clone());
        }
    }
    match p_prime {
        Exponent::Finite(1) => {
            for j in 0..nm {
                let mut row = vec![Rat::zero(); n_vars];
                for i in 0..nl {
                    row[col(i, j, false)] = Rat::one();
                    row[col(i, j, true)] = Rat::one();
                }
                p.add_constraint(row, Relation::Le, Rat::one());
            }
        }
        Exponent::Infinity => {
            for i in 0..nl {
                let mut row = vec![Rat::zero(); n_vars];
                for j in 0..nm {
                    row[col(i, j, false)] = Rat::one();
                    row[col(i, j, true)] = Rat::one();
                }
                p.add_constraint(row, Relation::Le, Rat::one());
            }
        }
        _ => unreachable!(),
    }

    let sol = lp_solve(&p)?;
    match sol.status {
        LpStatus::Optimal => {
            let matrix: Vec<Vec<Rat>> = (0..nl)
                .map(|i| {
                    (0..nm)
                        .map(|j| &sol.primal[col(i, j, false)] - &sol.primal[col(i, j, true)])
                        .collect()
                })
                .collect();
            debug_assert_eq!(
                verify_domination(metric, p_prime, lam, mu, &matrix),
                Ok(())
            );
            Ok(PrecResult::Feasible(DominationWitness { p_prime, matrix }))
        }
        LpStatus::Infeasible => Ok(PrecResult::Infeasible(Box::new(LpCertificate {
            label: "prec-infeasible".into(),
            problem: p,
            solution: sol,
        }))),
        LpStatus::Unbounded => unreachable!("feasibility program with bounded objective"),
    }
}

struct WpCandidate {
    terms: Vec<RepTerm>,
    lam: Vec<Rat>,
    mu: PairFamily,
    score: Rat,
    how: &'static str,
    lp: Option<LpCertificate>,
}

/// Score of a candidate: strong p-sum of the scaled vectors times the
/// p'-sum of the dominating family costs.
fn wp_score(
    u: &Molecule,
    p: Exponent,
    terms: &[RepTerm],
    lam: &[Rat],
    mu: &PairFamily,
) -> Rat {
    let inst = u.instance();
    if terms.is_empty() {
        return Rat::zero();
    }
    // vectors carried by the scalar family: e_i / lam_i
    let strong = match p {
        Exponent::Infinity => terms
            .iter()
            .zip(lam)
            .map(|(t, l)| inst.space.norm(&t.e) / l)
            .max()
            .unwrap(),
        Exponent::Finite(1) => terms
            .iter()
            .zip(lam)
            .map(|(t, l)| inst.space.norm(&t.e) / l)
            .sum(),
        _ => unreachable!("guarded by the caller"),
    };
    let weak = match p {
        // p = inf means p' = 1 and vice versa
        Exponent::Infinity => mu
            .iter()
            .map(|(m, x, y)| m.abs() * inst.metric.dist(*x, *y))
            .sum(),
        Exponent::Finite(1) => mu
            .iter()
            .map(|(m, x, y)| m.abs() * inst.metric.dist(*x, *y))
            .max()
            .unwrap_or_else(Rat::zero),
        _ => unreachable!(),
    };
    strong * weak
}

/// Balanced scalar weights making the self-dominating candidate cost
/// exactly the representation's projective cost.
fn balanced_lambda(u: &Molecule, p: Exponent, terms: &[RepTerm]) -> Vec<Rat> {
    let inst = u.instance();
    terms
        .iter()
        .map(|t| match p {
            Exponent::Infinity => inst.space.norm(&t.e),
            Exponent::Finite(1) => inst.metric.dist(t.x, t.y).recip(),
            _ => unreachable!(),
        })
        .collect()
}

type DominationData = (PairFamily, Vec<Vec<Rat>>, LpCertificate);

/// LP-optimized dominating family over all pairs for a fixed scalar family.
fn optimized_domination(
    u: &Molecule,
    p_prime: Exponent,
    terms: &[RepTerm],
    lam: &[Rat],
) -> Result<Option<DominationData>, NormError> {
    let inst = u.instance();
    let metric = &inst.metric;
    let n = metric.n_points();
    let pairs = metric.pairs();
    let nl = terms.len();
    let nm = pairs.len();
    if nl == 0 {
        return Ok(None);
    }
    let pair_cols: Vec<Vec<Rat>> = pairs
        .iter()
        .map(|&(x, y)| pair_coords(n, &Rat::one(), x, y))
        .collect();

    // variables: b+_ij, b-_ij (plus t for the max form)
    let col = |i: usize, j: usize, neg: bool| 2 * (i * nm + j) + usize::from(neg);
    let n_b = 2 * nl * nm;
    let (n_vars, objective) = match p_prime {
        Exponent::Finite(1) => {
            // minimize sum_j d_j sum_i |b_ij|
            let mut obj = vec![Rat::zero(); n_b];
            for i in 0..nl {
                for (j, &(x, y)) in pairs.iter().enumerate() {
                    obj[col(i, j, false)] = metric.dist(x, y).clone();
                    obj[col(i, j, true)] = metric.dist(x, y).clone();
                }
            }
            (n_b, obj)
        }
        Exponent::Infinity => {
            // minimize t with sum_j |b_ij| d_j <= t per row
            let mut obj = vec![Rat::zero(); n_b + 1];
            obj[n_b] = Rat::one();
            (n_b + 1, obj)
        }
        _ => unreachable!(),
    };
    let mut p = LpProblem::new(Sense::Minimize, objective);
    for v in 0..n_b {
        p.set_lower(v, Rat::zero());
    }
    if n_vars > n_b {
        p.set_lower(n_b, Rat::zero());
    }
    for (i, t) in terms.iter().enumerate() {
        let target = pair_coords(n, &lam[i], t.x, t.y);
        for (z, tv) in target.iter().enumerate() {
            let mut row = vec![Rat::zero(); n_vars];
            for j in 0..nm {
                row[col(i, j, false)] = pair_cols[j][z].clone();
                row[col(i, j, true)] = -&pair_cols[j][z];
            }
            p.add_constraint(row, Relation::Eq, tv.clone());
        }
    }
    if p_prime == Exponent::Infinity {
        for i in 0..nl {
            let mut row = vec![Rat::zero(); n_vars];
            for (j, &(x, y)) in pairs.iter().enumerate() {
                row[col(i, j, false)] = metric.dist(x, y).clone();
                row[col(i, j, true)] = metric.dist(x, y).clone();
            }
            row[n_b] = -Rat::one();
            p.add_constraint(row, Relation::Le, Rat::zero());
        }
    }
    let sol = lp_solve(&p)?;
    if sol.status != LpStatus::Optimal {
        return Ok(None);
    }
    let b = |i: usize, j: usize| &sol.primal[col(i, j, false)] - &sol.primal[col(i, j, true)];

    // recover the dominating family and the normalized matrix
    let mut mu: PairFamily = Vec::new();
    let mut cols_kept: Vec<usize> = Vec::new();
    let mut mu_scale: Vec<Rat> = Vec::new();
    match p_prime {
        Exponent::Finite(1) => {
            for (j, &(x, y)) in pairs.iter().enumerate() {
                let s: Rat = (0..nl).map(|i| b(i, j).abs()).sum();
                if s.is_positive() {
                    mu.push((s.clone(), x, y));
                    cols_kept.push(j);
                    mu_scale.push(s);
                }
            }
        }
        Exponent::Infinity => {
            let t = sol.primal[n_b].clone();
            if !t.is_positive() {
                return Ok(None);
            }
            for (j, &(x, y)) in pairs.iter().enumerate() {
                let used = (0..nl).any(|i| !b(i, j).is_zero());
                if used {
                    let m = &t / metric.dist(x, y);
                    mu.push((m.clone(), x, y));
                    cols_kept.push(j);
                    mu_scale.push(m);
                }
            }
        }
        _ => unreachable!(),
    }
    if mu.is_empty() {
        return Ok(None);
    }
    let matrix: Vec<Vec<Rat>> = (0..nl)
        .map(|i| {
            cols_kept
                .iter()
                .zip(&mu_scale)
                .map(|(&j, s)| b(i, j) / s)
                .collect()
        })
        .collect();
    Ok(Some((
        mu,
        matrix,
        LpCertificate {
            label: format!("wp-domination p'={p_prime}"),
            problem: p,
            solution: sol,
        },
    )))
}

/// Certified interval for the domination norm: lower bound the injective
/// norm, upper bound the best verified (representation, dominating family)
/// pair. Supported for `p` with conjugate exponent 1 or infinity.
pub fn w_p_upper(u: &Molecule, p: Exponent, cfg: &NormConfig) -> Result<NormResult, NormError> {
    let p_prime = match p {
        Exponent::Infinity => Exponent::Finite(1),
        Exponent::Finite(1) => Exponent::Infinity,
        other => return Err(NormError::UnsupportedExponent(other)),
    };
    let inst = u.instance();
    let eps_res = eps_norm(u, cfg)?;
    let lower = eps_res.exact_value().expect("injective norm is exact").clone();

    if u.is_zero() {
        let mut res = NormResult::exact(Rat::zero(), "w_p: zero molecule");
        res.p = Some(p);
        return Ok(res);
    }

    let mut reps: Vec<Vec<RepTerm>> = vec![u.star_representation().terms];
    let pi_res = pi_norm(u)?;
    if let Some(w) = &pi_res.primal_witness {
        if !reps.contains(&w.terms) {
            reps.push(w.terms.clone());
        }
    }

    let mut best: Option<WpCandidate> = None;
    let mut consider = |cand: WpCandidate| {
        if best.as_ref().is_none_or(|b| cand.score < b.score) {
            best = Some(cand);
        }
    };
    for terms in &reps {
        if terms.is_empty() {
            continue;
        }
        let lam = balanced_lambda(u, p, terms);
        let lam_fam: PairFamily = terms
            .iter()
            .zip(&lam)
            .map(|(t, l)| (l.clone(), t.x, t.y))
            .collect();
        // self-domination with the identity matrix
        let identity: Vec<Vec<Rat>> = (0..terms.len())
            .map(|i| {
                (0..terms.len())
                    .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                    .collect()
            })
            .collect();
        debug_assert_eq!(
            verify_domination(&inst.metric, p_prime, &lam_fam, &lam_fam, &identity),
            Ok(())
        );
        let score = wp_score(u, p, terms, &lam, &lam_fam);
        consider(WpCandidate {
            terms: terms.clone(),
            lam: lam.clone(),
            mu: lam_fam.clone(),
            score,
            how: "self-domination by the identity matrix",
            lp: None,
        });
        // LP-optimized dominating family
        if let Some((mu, matrix, cert)) = optimized_domination(u, p_prime, terms, &lam)? {
            if verify_domination(&inst.metric, p_prime, &lam_fam, &mu, &matrix).is_ok() {
                let score = wp_score(u, p, terms, &lam, &mu);
                consider(WpCandidate {
                    terms: terms.clone(),
                    lam: lam.clone(),
                    mu,
                    score,
                    how: "LP-optimized dominating family",
                    lp: Some(cert),
                });
            }
        }
    }

    let best = best.expect("nonzero molecule has a self-dominating candidate");
    debug_assert!(lower <= best.score);

    let upper = best.score.clone();
    Ok(NormResult {
        value: NormValue::Interval { lower, upper: upper.clone() },
        method: format!(
            "w_{p}: upper from a verified dominating family ({}; {} terms over {} pairs), \
             lower from the injective norm",
            best.how,
            best.terms.len(),
            best.mu.len()
        ),
        p: Some(p),
        primal_witness: Some(PrimalWitness {
            terms: best.terms,
            weights: Some(best.lam),
            cost: upper,
        }),
        dual_witness: eps_res.dual_witness,
        lp_certificates: best.lp.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molecule::Instance;
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
    fn identical_families_self_dominate() {
        let inst = p3_line();
        let fam: PairFamily = vec![(r(1), 1, 0)];
        let res = prec_check(&inst.metric, Exponent::Finite(1), &fam, &fam).unwrap();
        match res {
            PrecResult::Feasible(w) => assert_eq!(w.matrix, vec![vec![r(1)]]),
            PrecResult::Infeasible(_) => panic!("identity must be feasible"),
        }
    }

    #[test]
    fn scale_two_not_dominated_by_one() {
        let inst = p3_line();
        let lam: PairFamily = vec![(r(2), 1, 0)];
        let mu: PairFamily = vec![(r(1), 1, 0)];
        for p_prime in [Exponent::Finite(1), Exponent::Infinity] {
            let res = prec_check(&inst.metric, p_prime, &lam, &mu).unwrap();
            assert!(matches!(res, PrecResult::Infeasible(_)));
        }
    }

    #[test]
    fn chain_domination_depends_on_exponent() {
        // the long pair against the two short ones: forced matrix (1, 1)
        let inst = p3_line();
        let lam: PairFamily = vec![(r(1), 0, 2)];
        let mu: PairFamily = vec![(r(1), 0, 1), (r(1), 1, 2)];
        let feasible = prec_check(&inst.metric, Exponent::Finite(1), &lam, &mu).unwrap();
        match feasible {
            PrecResult::Feasible(w) => {
                assert_eq!(w.matrix[0][0].abs(), r(1));
                assert_eq!(w.matrix[0][1].abs(), r(1));
            }
            PrecResult::Infeasible(_) => panic!("column sums are one"),
        }
        // row sum two exceeds the bound
        let infeasible = prec_check(&inst.metric, Exponent::Infinity, &lam, &mu).unwrap();
        assert!(matches!(infeasible, PrecResult::Infeasible(_)));
    }

    #[test]
    fn unsupported_exponent_rejected() {
        let inst = p3_line();
        let fam: PairFamily = vec![(r(1), 1, 0)];
        assert!(matches!(
            prec_check(&inst.metric, Exponent::Finite(2), &fam, &fam),
            Err(NormError::UnsupportedExponent(_))
        ));
        let u = Molecule::elementary(inst, 1, 0, vec![r(1)]).unwrap();
        assert!(matches!(
            w_p_upper(&u, Exponent::Finite(2), &NormConfig::default()),
            Err(NormError::UnsupportedExponent(_))
        ));
    }

    #[test]
    fn elementary_tensor_upper_matches_cross_norm() {
        let inst = p3_line();
        let cfg = NormConfig::default();
        let u = Molecule::elementary(inst, 2, 0, vec![Rat::new(3, 2)]).unwrap();
        for p in [Exponent::Finite(1), Exponent::Infinity] {
            let res = w_p_upper(&u, p, &cfg).unwrap();
            assert_eq!(*res.value.upper(), r(3), "p = {p}");
            assert_eq!(*res.value.lower(), r(3), "p = {p}");
        }
    }

    #[test]
    fn zero_molecule_interval() {
        let inst = p3_line();
        let cfg = NormConfig::default();
        let u = Molecule::zero(inst);
        let res = w_p_upper(&u, Exponent::Finite(1), &cfg).unwrap();
        assert_eq!(*res.value.lower(), r(0));
        assert_eq!(*res.value.upper(), r(0));
    }

    #[test]
    fn interval_sits_between_injective_and_projective() {
        let inst = p3_line();
        let cfg = NormConfig::default();
        let u = Molecule::from_coeffs(
            inst.clone(),
            [(1, vec![r(1)]), (2, vec![r(1)])].into_iter().collect(),
        )
        .unwrap();
        let pi_v = pi_norm(&u).unwrap().exact_value().unwrap().clone();
        let eps_v = eps_norm(&u, &cfg).unwrap().exact_value().unwrap().clone();
        for p in [Exponent::Finite(1), Exponent::Infinity] {
            let res = w_p_upper(&u, p, &cfg).unwrap();
            assert!(*res.value.lower() >= eps_v, "p = {p}");
            assert!(*res.value.upper() <= pi_v, "p = {p}");
        }
    }
}
