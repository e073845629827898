//! Cross-norms on molecules.
//!
//! * [`pi_norm`] — projective norm, exact, via a primal/dual LP pair whose
//!   values must coincide as identical rationals.
//! * [`eps_norm`] — injective norm, exact, as a max over vertex pairs of
//!   the two unit balls.
//! * [`d_p_bounds`] — nuclear-style mixed norm, certified interval
//!   (exact for `p = 1` where it coincides with `pi`).
//! * [`w_p_upper`] — the domination-based norm, certified interval for
//!   conjugate exponents 1 and infinity.
//! * [`prec_check`] — exact feasibility test for the pair-family
//!   domination relation.

pub mod dp;
pub mod eps;
pub mod pi;
pub mod wp;

pub use dp::{d_p_bounds, d_p_search_candidates};
pub use eps::{eps_attaining_pair, eps_norm};
pub use pi::pi_norm;
pub use wp::{prec_check, w_p_upper, DominationWitness, PrecResult};

use crate::cert::Exponent;
use crate::lipball::LipBallError;
use crate::lp::LpError;
use crate::molecule::MoleculeError;

/// Shared configuration for the capped / searched norm computations.
#[derive(Clone, Debug)]
pub struct NormConfig {
    /// Cap on the point count for Lipschitz-ball vertex enumeration.
    pub point_cap: usize,
    /// Per-pair multiplicity bound for representation search.
    pub rep_multiplicity: usize,
    /// Number of seeded random operators in the dual witness family.
    pub random_witnesses: usize,
    /// Seed for the random witness family.
    pub witness_seed: u64,
    /// Decimal digits for outward rounding of irrational roots.
    pub root_digits: u32,
}

impl Default for NormConfig {
    fn default() -> Self {
        NormConfig {
            point_cap: crate::lipball::DEFAULT_POINT_CAP,
            rep_multiplicity: 2,
            random_witnesses: 4,
            witness_seed: 0xD0C5,
            root_digits: 30,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormError {
    #[error(transparent)]
    CapExceeded(#[from] LipBallError),
    #[error("unsupported exponent {0}: the exact path needs an integer conjugate pair")]
    UnsupportedExponent(Exponent),
    #[error("primal value {primal} differs from dual value {dual}: solver bug")]
    InternalDualityGap { primal: String, dual: String },
    #[error("the zero molecule has no extremal functional")]
    ZeroMolecule,
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Molecule(#[from] MoleculeError),
}
