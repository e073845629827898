//! The injective cross-norm.
//!
//! The value is the sup of `|sum_z g(z) <phi, m(z)>|` over the unit balls
//! of scalar Lipschitz functions and dual vectors. The objective is
//! bilinear, so the sup over the product of two polytopes is attained at a
//! vertex pair: enumerate both vertex sets and take the exact maximum.

use crate::cert::{DualWitness, NormResult, NormValue};
use crate::lipball::lip_ball_vertices;
use crate::linalg::dot;
use crate::molecule::Molecule;
use crate::norms::{NormConfig, NormError};
use crate::operator::{LipFunctional, LipOperator};
use crate::rat::Rat;

/// The attaining data: a ball vertex `g`, a dual ball vertex `phi`, and
/// the signed value `sum_z g(z) <phi, m(z)>` (maximal in absolute value).
pub type AttainingPair = (Vec<Rat>, Vec<Rat>, Rat);

pub fn eps_attaining_pair(
    u: &Molecule,
    cfg: &NormConfig,
) -> Result<Option<AttainingPair>, NormError> {
    let inst = u.instance();
    let g_vertices = lip_ball_vertices(&inst.metric, cfg.point_cap)?;
    let phi_vertices = inst.space.facets(); // vertices of the dual ball

    let mut best: Option<(Vec<Rat>, Vec<Rat>, Rat)> = None;
    for phi in phi_vertices {
        // <phi, m(z)> per support point, then optimize over g
        let support: Vec<(usize, Rat)> = u
            .coeffs()
            .iter()
            .map(|(&z, m)| (z, dot(phi, m)))
            .collect();
        for g in g_vertices.iter() {
            let val: Rat = support.iter().map(|(z, w)| &g[*z] * w).sum();
            let better = match &best {
                None => true,
                Some((_, _, b)) => val.abs() > b.abs(),
            };
            if better {
                best = Some((g.clone(), phi.clone(), val));
            }
        }
    }
    Ok(best)
}

/// Exact injective norm with the attaining rank-one operator as witness.
pub fn eps_norm(u: &Molecule, cfg: &NormConfig) -> Result<NormResult, NormError> {
    let inst = u.instance();
    let best = eps_attaining_pair(u, cfg)?;
    let (value, witness) = match best {
        None => (Rat::zero(), None),
        Some((g, phi, signed)) => {
            let value = signed.abs();
            if value.is_zero() {
                (value, None)
            } else {
                // orient so the pairing is positive
                let g_fun = LipFunctional::new(inst.metric.clone(), g)
                    .expect("ball vertex fixes the base point");
                let phi_oriented: Vec<Rat> = if signed.is_negative() {
                    phi.iter().map(|v| -v).collect()
                } else {
                    phi
                };
                let f = LipOperator::rank_one(inst.clone(), &g_fun, &phi_oriented)
                    .expect("rank-one data is consistent");
                debug_assert_eq!(u.pairing(&f).unwrap(), value);
                (
                    value.clone(),
                    Some(DualWitness {
                        values: f.values().to_vec(),
                        bound: Rat::one(),
                        attained: value,
                    }),
                )
            }
        }
    };
    Ok(NormResult {
        value: NormValue::Exact(value),
        method: "eps: exact max over vertex pairs of both unit balls".into(),
        p: None,
        primal_witness: None,
        dual_witness: witness,
        lp_certificates: Vec::new(),
    })
}
