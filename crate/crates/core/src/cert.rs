//! Norm results and their certificates.
//!
//! Every norm computation reports either an exact rational value or a
//! certified interval, together with the witnesses that prove the bounds:
//! a representation (with its cost) on the primal side and an operator
//! (with its certified bound) on the dual side. LP-backed computations also
//! carry the solved programs so the whole chain can be re-checked.

use serde::{Deserialize, Serialize};

use crate::lp::{LpProblem, LpSolution};
use crate::molecule::RepTerm;
use crate::rat::Rat;

/// Which cross-norm a computation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alpha {
    Pi,
    Eps,
}

impl Alpha {
    pub fn name(self) -> &'static str {
        match self {
            Alpha::Pi => "pi",
            Alpha::Eps => "eps",
        }
    }
}

/// An exponent in `[1, infinity]`. Only integer finite values are
/// representable: fractional powers of rationals leave the rationals, so
/// the exact paths reject them at the API instead of rounding silently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Exponent {
    Finite(u32),
    Infinity,
}

impl Exponent {
    /// The conjugate exponent (`1/p + 1/p' = 1`) when it is again an
    /// integer or infinity: `1 <-> inf`, `2 <-> 2`, and nothing else.
    pub fn conjugate(self) -> Option<Exponent> {
        match self {
            Exponent::Finite(1) => Some(Exponent::Infinity),
            Exponent::Finite(2) => Some(Exponent::Finite(2)),
            Exponent::Infinity => Some(Exponent::Finite(1)),
            Exponent::Finite(_) => None,
        }
    }

    pub fn is_one(self) -> bool {
        self == Exponent::Finite(1)
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormValue {
    #[serde(rename = "value")]
    Exact(Rat),
    #[serde(rename = "interval")]
    Interval { lower: Rat, upper: Rat },
}

impl NormValue {
    pub fn lower(&self) -> &Rat {
        match self {
            NormValue::Exact(v) => v,
            NormValue::Interval { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &Rat {
        match self {
            NormValue::Exact(v) => v,
            NormValue::Interval { upper, .. } => upper,
        }
    }
}

/// A representation achieving the reported upper bound.
///
/// `weights[i] > 0` is the repetition density of term `i`: the witness
/// stands for the plain representation obtained by picking any integer `k`
/// clearing all denominators and replacing term `i` by `k * w_i` copies of
/// `(x_i, y_i, e_i / (k w_i))`; all scored norms here are invariant in `k`.
/// A missing weight vector means all weights are 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimalWitness {
    pub terms: Vec<RepTerm>,
    pub weights: Option<Vec<Rat>>,
    pub cost: Rat,
}

/// An operator certifying the reported lower bound: `attained = |u(f)|`
/// while `bound` dominates the relevant dual norm of `f`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualWitness {
    pub values: Vec<Vec<Rat>>,
    pub bound: Rat,
    pub attained: Rat,
}

/// A solved linear program kept for independent re-checking.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpCertificate {
    pub label: String,
    pub problem: LpProblem,
    pub solution: LpSolution,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormResult {
    /// Serialized at the top level as `"value"` or `"interval"`.
    #[serde(flatten)]
    pub value: NormValue,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Exponent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primal_witness: Option<PrimalWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_witness: Option<DualWitness>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lp_certificates: Vec<LpCertificate>,
}

impl NormResult {
    pub fn exact(value: Rat, method: impl Into<String>) -> Self {
        NormResult {
            value: NormValue::Exact(value),
            method: method.into(),
            p: None,
            primal_witness: None,
            dual_witness: None,
            lp_certificates: Vec::new(),
        }
    }

    pub fn exact_value(&self) -> Option<&Rat> {
        match &self.value {
            NormValue::Exact(v) => Some(v),
            NormValue::Interval { .. } => None,
        }
    }
}
