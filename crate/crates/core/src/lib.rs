//! Exact arithmetic for Lipschitz tensor-product cross-norms and
//! operator-ideal norms on finite pointed metric spaces.
//!
//! Everything here is computed over arbitrary-precision rationals: metric
//! spaces carry exact distances, normed spaces are polyhedral (given by
//! symmetric facet descriptions), and every norm value is either an exact
//! rational or a certified rational interval. Norms that reduce to linear
//! programs (the projective norm `pi`, the injective norm `eps`, the
//! Lipschitz p-summing norm) ship with primal/dual witness pairs whose
//! equality can be re-checked independently of the solver.
//!
//! The main entry points:
//!
//! * [`FiniteMetricSpace`] / [`PolyhedralSpace`] — the two kinds of spaces.
//! * [`Molecule`] — canonical coordinates of a tensor-product element.
//! * [`norms`] — `pi_norm`, `eps_norm`, `d_p_bounds`, `w_p_upper`.
//! * [`ideal`] — operator-side norms: `lip_alpha_norm`, `p_summing_norm`,
//!   `extremal_functional`.
//! * [`laws`] — randomized suite checking the duality/ideal laws on
//!   generated instances.

// index-style loops mirror the matrix arithmetic throughout
#![allow(clippy::needless_range_loop)]

pub mod cert;
pub mod gen;
pub mod hulls;
pub mod ideal;
pub mod io;
pub mod laws;
pub mod linalg;
pub mod lipball;
pub mod lp;
pub mod metric;
pub mod molecule;
pub mod norms;
pub mod operator;
pub mod polytope;
pub mod rat;
pub mod space;

pub use cert::{NormResult, NormValue};
pub use metric::{FiniteMetricSpace, MetricError};
pub use molecule::{FormalRepresentation, Molecule, MoleculeError, PointMap};
pub use operator::{LipFunctional, LipOperator};
pub use rat::Rat;
pub use space::{NormSpec, PolyhedralSpace, SpaceError};
