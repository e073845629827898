//! The mixed nuclear-style norm `d_p`: certified intervals.
//!
//! The value is an infimum over all representations of a product of a
//! weak-type sup over the Lipschitz unit ball and a strong p-sum of vector
//! norms. The representation set is infinite, so the upper bound comes
//! from a finite search and the lower bound from duality against
//! p-summing operators; the output is an honest interval. For `p = 1` the
//! norm coincides with the projective norm and the value is exact.
//!
//! Search candidates are weighted representations: a term `(x, y, e)` with
//! weight `w > 0` stands for `k w` equal parts `e / (k w)` for any integer
//! `k` clearing denominators. All scores here are invariant in `k`, so a
//! weighted candidate's score is an exactly attained representation cost.

use crate::cert::{Alpha, DualWitness, Exponent, NormResult, NormValue, PrimalWitness};
use crate::gen;
use crate::ideal::{extremal_functional, p_summing_norm};
use crate::lipball::lip_ball_vertices;
use crate::molecule::{Molecule, RepTerm};
use crate::norms::{pi_norm, NormConfig, NormError};
use crate::operator::LipOperator;
use crate::rat::Rat;

/// A representation with optional per-term weights and its exact score
/// data under the `d_p` cost.
#[derive(Clone, Debug)]
pub struct ScoredCandidate {
    pub terms: Vec<RepTerm>,
    pub weights: Option<Vec<Rat>>,
    /// `cost` for p in {1, inf}; `cost^2` for p = 2 (kept exact).
    pub cost_pow: Rat,
    /// Power of `cost_pow` relative to the cost itself.
    pub pow: u32,
}

impl ScoredCandidate {
    /// Reported cost: exact when `pow = 1`, rounded outward otherwise.
    pub fn cost_upper(&self, digits: u32) -> Rat {
        if self.pow == 1 {
            self.cost_pow.clone()
        } else {
            self.cost_pow.nth_root_ceil(self.pow, digits)
        }
    }
}

fn conjugate_checked(p: Exponent) -> Result<Exponent, NormError> {
    match p {
        Exponent::Finite(1) | Exponent::Finite(2) | Exponent::Infinity => {
            Ok(p.conjugate().expect("conjugate exists"))
        }
        other => Err(NormError::UnsupportedExponent(other)),
    }
}

/// Exact score of a weighted representation under the `d_p` cost.
///
/// Returns `(cost_pow, pow)`: the cost itself for `p` in `{1, inf}`, the
/// squared cost for `p = 2`. The sup over the Lipschitz ball is convex in
/// the functional, hence evaluated on ball vertices.
fn score(
    u: &Molecule,
    p: Exponent,
    terms: &[RepTerm],
    weights: Option<&[Rat]>,
    cfg: &NormConfig,
) -> Result<(Rat, u32), NormError> {
    let inst = u.instance();
    if terms.is_empty() {
        return Ok((Rat::zero(), 1));
    }
    let norms: Vec<Rat> = terms.iter().map(|t| inst.space.norm(&t.e)).collect();
    match p {
        // weak part degrades to max_i |g(x_i) - g(y_i)| whose sup is the
        // distance itself; weights cancel entirely
        Exponent::Finite(1) => {
            let weak: Rat = terms
                .iter()
                .map(|t| inst.metric.dist(t.x, t.y).clone())
                .max()
                .unwrap();
            let strong: Rat = norms.iter().sum();
            Ok((weak * strong, 1))
        }
        Exponent::Infinity => {
            let w: Vec<Rat> = match weights {
                Some(w) => w.to_vec(),
                None => vec![Rat::one(); terms.len()],
            };
            let verts = lip_ball_vertices(&inst.metric, cfg.point_cap)?;
            let weak = verts
                .iter()
                .map(|g| {
                    terms
                        .iter()
                        .zip(&w)
                        .map(|(t, wi)| wi * &(&g[t.x] - &g[t.y]).abs())
                        .sum::<Rat>()
                })
                .max()
                .unwrap();
            let strong = norms
                .iter()
                .zip(&w)
                .map(|(n, wi)| n / wi)
                .max()
                .unwrap();
            Ok((weak * strong, 1))
        }
        Exponent::Finite(2) => {
            let w: Vec<Rat> = match weights {
                Some(w) => w.to_vec(),
                None => vec![Rat::one(); terms.len()],
            };
            let verts = lip_ball_vertices(&inst.metric, cfg.point_cap)?;
            let weak = verts
                .iter()
                .map(|g| {
                    terms
                        .iter()
                        .zip(&w)
                        .map(|(t, wi)| wi * &(&g[t.x] - &g[t.y]).pow(2))
                        .sum::<Rat>()
                })
                .max()
                .unwrap();
            let strong: Rat = norms.iter().zip(&w).map(|(n, wi)| n.pow(2) / wi).sum();
            Ok((weak * strong, 2))
        }
        other => Err(NormError::UnsupportedExponent(other)),
    }
}

/// Chain splits of a representation: each term re-routed through one
/// intermediate point, subject to the per-pair multiplicity cap.
fn chain_splits(terms: &[RepTerm], n_points: usize, multiplicity_cap: usize) -> Vec<Vec<RepTerm>> {
    let mut out = Vec::new();
    let count_pair = |ts: &[RepTerm], a: usize, b: usize| {
        ts.iter()
            .filter(|t| (t.x.min(t.y), t.x.max(t.y)) == (a.min(b), a.max(b)))
            .count()
    };
    for (k, t) in terms.iter().enumerate() {
        for z in 0..n_points {
            if z == t.x || z == t.y {
                continue;
            }
            let mut split = terms.to_vec();
            split.remove(k);
            split.push(RepTerm {
                x: t.x,
                y: z,
                e: t.e.clone(),
            });
            split.push(RepTerm {
                x: z,
                y: t.y,
                e: t.e.clone(),
            });
            let ok = split
                .iter()
                .all(|s| count_pair(&split, s.x, s.y) <= multiplicity_cap);
            if ok {
                out.push(split);
            }
        }
    }
    out
}

/// The searched upper-bound candidates, scored exactly. Always includes
/// the star representation, the projective-optimal representation, their
/// norm-balanced weightings, and one round of chain splits.
pub fn d_p_search_candidates(
    u: &Molecule,
    p: Exponent,
    cfg: &NormConfig,
) -> Result<Vec<ScoredCandidate>, NormError> {
    let pi_res = pi_norm(u)?;
    search_candidates_with(u, p, cfg, &pi_res)
}

fn search_candidates_with(
    u: &Molecule,
    p: Exponent,
    cfg: &NormConfig,
    pi_res: &NormResult,
) -> Result<Vec<ScoredCandidate>, NormError> {
    conjugate_checked(p)?;
    let inst = u.instance();
    let mut reps: Vec<Vec<RepTerm>> = Vec::new();
    reps.push(u.star_representation().terms);
    if let Some(w) = &pi_res.primal_witness {
        if !reps.contains(&w.terms) {
            reps.push(w.terms.clone());
        }
    }
    let base: Vec<Vec<RepTerm>> = reps.clone();
    for rep in &base {
        for split in chain_splits(rep, inst.n_points(), cfg.rep_multiplicity) {
            if reps.len() >= 48 {
                break;
            }
            if !reps.contains(&split) {
                reps.push(split);
            }
        }
    }

    let mut out = Vec::new();
    for terms in reps {
        let (cost_pow, pow) = score(u, p, &terms, None, cfg)?;
        out.push(ScoredCandidate {
            terms: terms.clone(),
            weights: None,
            cost_pow,
            pow,
        });
        if p != Exponent::Finite(1) {
            // norm-balanced weights: for the projective-optimal terms this
            // pins the score at or below the projective norm
            let w: Vec<Rat> = terms.iter().map(|t| inst.space.norm(&t.e)).collect();
            if w.iter().all(|x| x.is_positive()) {
                let (cost_pow, pow) = score(u, p, &terms, Some(&w), cfg)?;
                out.push(ScoredCandidate {
                    terms,
                    weights: Some(w),
                    cost_pow,
                    pow,
                });
            }
        }
    }
    Ok(out)
}

/// Dual witness family: extremal functionals for both cross-norms,
/// rank-one operators on ball vertices, and seeded random operators. Each
/// is rescaled by its exact conjugate p-summing norm.
fn dual_lower_bound(
    u: &Molecule,
    p_conj: Exponent,
    cfg: &NormConfig,
    pi_res: &NormResult,
) -> Result<(Rat, Option<DualWitness>), NormError> {
    let inst = u.instance();
    let mut witnesses: Vec<LipOperator> = Vec::new();
    if !u.is_zero() {
        if let Some(w) = &pi_res.dual_witness {
            witnesses.push(LipOperator::new(inst.clone(), w.values.clone())?);
        }
        witnesses.push(extremal_functional(u, Alpha::Eps, cfg)?);
    }
    // a few rank-one operators from ball vertices and dual ball vertices
    let verts = lip_ball_vertices(&inst.metric, cfg.point_cap)?;
    for g in verts.iter().take(2) {
        let g_fun =
            crate::operator::LipFunctional::new(inst.metric.clone(), g.clone())?;
        for phi in inst.space.facets().iter().take(1) {
            witnesses.push(LipOperator::rank_one(inst.clone(), &g_fun, phi)?);
        }
    }
    let mut rng = gen::rng_for(cfg.witness_seed);
    for _ in 0..cfg.random_witnesses {
        witnesses.push(gen::rand_operator(&mut rng, inst));
    }

    // lower = max |u(f)| / pi_{p'}(f); compared via p'-th powers so that
    // everything stays rational, then rounded downward only at the end.
    let mut best: Option<(Rat, u32, DualWitness)> = None;
    for f in witnesses {
        let attained = u.pairing(&f)?.abs();
        if attained.is_zero() {
            continue;
        }
        let cert = p_summing_norm(&f, p_conj, cfg)?;
        if cert.value_pow.is_zero() {
            continue;
        }
        let (ratio_pow, pow) = match p_conj {
            Exponent::Infinity | Exponent::Finite(1) => (&attained / &cert.value_pow, 1),
            Exponent::Finite(q) => (attained.pow(q as i32) / &cert.value_pow, q),
        };
        let better = match &best {
            None => true,
            Some((b, bp, _)) => {
                debug_assert_eq!(*bp, pow);
                ratio_pow > *b
            }
        };
        if better {
            let bound = match p_conj {
                Exponent::Infinity | Exponent::Finite(1) => cert.value_pow.clone(),
                Exponent::Finite(q) => cert.value_pow.nth_root_ceil(q, cfg.root_digits),
            };
            best = Some((
                ratio_pow,
                pow,
                DualWitness {
                    values: f.values().to_vec(),
                    bound,
                    attained,
                },
            ));
        }
    }
    match best {
        None => Ok((Rat::zero(), None)),
        Some((ratio_pow, pow, w)) => {
            let lower = if pow == 1 {
                ratio_pow
            } else {
                ratio_pow.nth_root_floor(pow, cfg.root_digits)
            };
            Ok((lower, Some(w)))
        }
    }
}

/// Certified bounds for the mixed norm. Exact for `p = 1`; a rational
/// interval `[dual lower, searched upper]` otherwise. Supported exponents:
/// `1`, `2`, `infinity`.
pub fn d_p_bounds(u: &Molecule, p: Exponent, cfg: &NormConfig) -> Result<NormResult, NormError> {
    let p_conj = conjugate_checked(p)?;

    if u.is_zero() {
        let mut res = NormResult::exact(Rat::zero(), "d_p: zero molecule");
        res.p = Some(p);
        return Ok(res);
    }

    let pi_res = pi_norm(u)?;
    let candidates = search_candidates_with(u, p, cfg, &pi_res)?;
    let best = candidates
        .iter()
        .min_by(|a, b| {
            debug_assert_eq!(a.pow, b.pow);
            a.cost_pow.cmp(&b.cost_pow)
        })
        .expect("nonzero molecule has candidates");
    let upper = best.cost_upper(cfg.root_digits);
    let primal = PrimalWitness {
        terms: best.terms.clone(),
        weights: best.weights.clone(),
        cost: upper.clone(),
    };

    if p.is_one() {
        // identical to the projective norm: dual attainment pins the value
        let value = pi_res.exact_value().expect("projective norm is exact").clone();
        let dual = pi_res.dual_witness.clone();
        debug_assert!(upper >= value);
        return Ok(NormResult {
            value: NormValue::Exact(value),
            method: "d_1 = pi: dual attainment collapses the interval; searched \
                     representations witness the upper side"
                .into(),
            p: Some(p),
            primal_witness: Some(primal),
            dual_witness: dual,
            lp_certificates: pi_res.lp_certificates,
        });
    }

    let (lower, dual_witness) = dual_lower_bound(u, p_conj, cfg, &pi_res)?;
    debug_assert!(lower <= upper, "bounds crossed: {lower} > {upper}");
    Ok(NormResult {
        value: NormValue::Interval { lower, upper },
        method: format!(
            "d_{p}: upper from weighted representation search, lower from \
             duality against {p_conj}-summing operators"
        ),
        p: Some(p),
        primal_witness: Some(primal),
        dual_witness,
        lp_certificates: Vec::new(),
    })
}
