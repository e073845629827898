//! Restrictions, quotients, and the two hull constructions built from
//! them: the supremum of restricted/quotiented ideal norms over finite
//! sub-data, and the infimum of cross-norms over sub-spaces carrying the
//! molecule. Both are finite shadows of limits over all sub-data; at this
//! scale the point subsets are enumerated exhaustively and the quotients
//! sampled, and the theory pins where the extremum is attained (the full
//! space, the zero subspace), which the law suite asserts.

use crate::cert::{Alpha, Exponent};
use crate::ideal::p_summing_norm;
use crate::linalg::QuotientMap;
use crate::molecule::{Instance, Molecule, MoleculeError};
use crate::norms::{eps_norm, pi_norm, NormConfig, NormError};
use crate::operator::LipOperator;
use crate::rat::Rat;
use crate::space::{NormSpec, PolyhedralSpace, SpaceError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HullError {
    #[error("subset must contain the base point 0")]
    BasePointMissing,
    #[error("subset must keep at least 2 points")]
    MinSize,
    #[error("subspace must be proper")]
    FullSubspace,
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Molecule(#[from] MoleculeError),
    #[error(transparent)]
    Norm(#[from] NormError),
}

/// A polyhedral space quotiented by a subspace: the quotient ball is the
/// image of the parent ball, rebuilt canonically from the projected
/// vertices.
#[derive(Debug)]
pub struct QuotientSpace {
    pub map: QuotientMap,
    pub quotient: PolyhedralSpace,
}

impl QuotientSpace {
    /// Quotient of `parent` by the span of `basis`. The span must be a
    /// proper subspace (possibly zero, in which case the quotient is the
    /// parent itself up to canonical coordinates).
    pub fn new(parent: &PolyhedralSpace, basis: &[Vec<Rat>]) -> Result<Self, HullError> {
        let map = QuotientMap::new(parent.dim(), basis);
        if map.codim() == 0 {
            return Err(HullError::FullSubspace);
        }
        // image of the ball: convex hull of the projected vertices; its
        // facets are the vertices of the polar of that hull
        let projected: Vec<Vec<Rat>> = parent
            .vertices()
            .iter()
            .map(|v| map.apply(v))
            .collect();
        let polar_cuts: Vec<crate::polytope::Halfspace> = projected
            .iter()
            .filter(|w| !crate::linalg::is_zero_vec(w))
            .map(|w| crate::polytope::Halfspace::new(w.clone(), Rat::one()))
            .collect();
        let facets = crate::polytope::enumerate_vertices(map.codim(), &polar_cuts)
            .expect("polar of a full-dimensional symmetric image ball");
        let quotient = PolyhedralSpace::build_space(map.codim(), &NormSpec::Facets(facets))?;
        Ok(QuotientSpace { map, quotient })
    }

    /// Quotient-map norm bound: `||Q e|| <= ||e||` on all ball vertices,
    /// with equality attained on at least one.
    pub fn contraction_verified(&self, parent: &PolyhedralSpace) -> bool {
        let mut attained = false;
        for v in parent.vertices() {
            let norm = self.quotient.norm(&self.map.apply(v));
            if norm > Rat::one() {
                return false;
            }
            if norm == Rat::one() {
                attained = true;
            }
        }
        attained
    }
}

/// Restriction of an operator to a subset of points containing the base
/// point: the metric subspace inherits the distances.
pub fn restrict_operator(f: &LipOperator, points: &[usize]) -> Result<LipOperator, HullError> {
    if points.first() != Some(&0) {
        return Err(HullError::BasePointMissing);
    }
    if points.len() < 2 {
        return Err(HullError::MinSize);
    }
    let inst = f.instance();
    let metric = inst
        .metric
        .subspace(points)
        .map_err(|_| HullError::MinSize)?;
    let sub = Instance::new(metric, (*inst.space).clone());
    let values = points.iter().map(|&x| f.value(x).to_vec()).collect();
    Ok(LipOperator::new(sub, values)?)
}

/// Composition with the quotient map of the dual space by `basis`: the
/// codomain becomes the quotient, realized as the dual of its own polar so
/// the operator type stays uniform.
pub fn quotient_operator(f: &LipOperator, basis: &[Vec<Rat>]) -> Result<LipOperator, HullError> {
    let inst = f.instance();
    let dual = inst.space.dual_space();
    let q = QuotientSpace::new(&dual, basis)?;
    let new_space = q.quotient.dual_space();
    let new_inst = Instance {
        metric: inst.metric.clone(),
        space: std::sync::Arc::new(new_space),
    };
    let values = f.values().iter().map(|v| q.map.apply(v)).collect();
    Ok(LipOperator::new(new_inst, values)?)
}

/// Which operator ideal a hull computation measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealKind {
    Lip,
    PSumming(Exponent),
}

impl IdealKind {
    /// The ideal norm on a comparable scale: the plain value for `Lip` and
    /// infinite exponent, `value^p` for finite summing exponents.
    pub fn norm_pow(&self, f: &LipOperator, cfg: &NormConfig) -> Result<Rat, NormError> {
        match self {
            IdealKind::Lip => Ok(f.lip_norm()),
            IdealKind::PSumming(p) => Ok(p_summing_norm(f, *p, cfg)?.value_pow),
        }
    }
}

/// One sampled term of the maximal-hull supremum.
#[derive(Clone, Debug)]
pub struct HullSample {
    pub points: Vec<usize>,
    pub subspace: Vec<Vec<Rat>>,
    pub value_pow: Rat,
}

/// The supremum of `ideal(Q o f o I_Y)` over all point subsets `Y`
/// (exhaustive) and the given dual-subspace samples. Returns every sampled
/// term; the maximum is the hull lower bound and the theory says it is
/// attained at the full subset with the zero subspace.
pub fn a_max_samples(
    f: &LipOperator,
    ideal: IdealKind,
    subspace_samples: &[Vec<Vec<Rat>>],
    cfg: &NormConfig,
) -> Result<Vec<HullSample>, HullError> {
    let n = f.instance().n_points();
    let mut out = Vec::new();
    for mask in 0..(1u32 << (n - 1)) {
        let mut points = vec![0usize];
        for b in 0..(n - 1) {
            if mask >> b & 1 == 1 {
                points.push(b + 1);
            }
        }
        if points.len() < 2 {
            continue;
        }
        let restricted = restrict_operator(f, &points)?;
        for sub in subspace_samples {
            let g = if sub.is_empty() {
                restricted.clone()
            } else {
                match quotient_operator(&restricted, sub) {
                    Ok(g) => g,
                    Err(HullError::FullSubspace) => continue,
                    Err(e) => return Err(e),
                }
            };
            out.push(HullSample {
                points: points.clone(),
                subspace: sub.clone(),
                value_pow: ideal.norm_pow(&g, cfg)?,
            });
        }
    }
    Ok(out)
}

/// The maximal-hull lower bound: the best sampled term and its data.
pub fn a_max_lower_bound(
    f: &LipOperator,
    ideal: IdealKind,
    subspace_samples: &[Vec<Vec<Rat>>],
    cfg: &NormConfig,
) -> Result<HullSample, HullError> {
    let samples = a_max_samples(f, ideal, subspace_samples, cfg)?;
    Ok(samples
        .into_iter()
        .max_by(|a, b| a.value_pow.cmp(&b.value_pow))
        .expect("the full subset is always sampled"))
}

/// Default dual-subspace samples: the zero subspace, coordinate lines,
/// and lines spanned by dual ball vertices.
pub fn default_subspace_samples(space: &PolyhedralSpace) -> Vec<Vec<Vec<Rat>>> {
    let dim = space.dim();
    let mut out: Vec<Vec<Vec<Rat>>> = vec![Vec::new()];
    if dim < 2 {
        return out;
    }
    for c in 0..dim {
        let mut v = vec![Rat::zero(); dim];
        v[c] = Rat::one();
        out.push(vec![v]);
    }
    // dual ball vertex directions are the facet normals of the space
    for facet in space.facets().iter().take(2) {
        out.push(vec![facet.clone()]);
    }
    out
}

/// Outcome of the finitely-generated-hull computation for a molecule.
#[derive(Clone, Debug)]
pub struct ThetaOutcome {
    /// Minimum of the cross-norm over admissible point subsets.
    pub value: Rat,
    /// The cross-norm on the full space.
    pub full: Rat,
    /// A subset attaining the minimum.
    pub attaining: Vec<usize>,
}

/// The infimum of the cross-norm over all point subsets containing the
/// base point and the molecule's support (exhaustive), which coincides
/// with the full-space value.
pub fn theta_norm(u: &Molecule, alpha: Alpha, cfg: &NormConfig) -> Result<ThetaOutcome, HullError> {
    let inst = u.instance();
    let n = inst.n_points();
    let support = u.support();
    let alpha_of = |v: &Molecule| -> Result<Rat, NormError> {
        Ok(match alpha {
            Alpha::Pi => pi_norm(v)?.exact_value().expect("exact").clone(),
            Alpha::Eps => eps_norm(v, cfg)?.exact_value().expect("exact").clone(),
        })
    };
    let full = alpha_of(u)?;

    let mut best: Option<(Rat, Vec<usize>)> = None;
    for mask in 0..(1u32 << (n - 1)) {
        let mut points = vec![0usize];
        for b in 0..(n - 1) {
            if mask >> b & 1 == 1 {
                points.push(b + 1);
            }
        }
        if points.len() < 2 || !support.iter().all(|s| points.contains(s)) {
            continue;
        }
        let metric = inst.metric.subspace(&points).map_err(|_| HullError::MinSize)?;
        let sub_inst = Instance::new(metric, (*inst.space).clone());
        let coeffs = support
            .iter()
            .map(|&s| {
                let new_idx = points.iter().position(|&p| p == s).expect("support kept");
                (new_idx, u.coeff(s))
            })
            .collect();
        let v = Molecule::from_coeffs(sub_inst, coeffs)?;
        let value = alpha_of(&v)?;
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, points));
        }
    }
    let (value, attaining) = best.expect("the full point set qualifies");
    debug_assert_eq!(value, full);
    Ok(ThetaOutcome {
        value,
        full,
        attaining,
    })
}
