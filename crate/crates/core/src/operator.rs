//! Base-point-preserving operators into the dual space, and scalar
//! Lipschitz functionals.

use std::sync::Arc;

use crate::linalg;
use crate::metric::FiniteMetricSpace;
use crate::molecule::{Instance, MoleculeError, PointMap};
use crate::rat::Rat;

/// A scalar function on the points with `g(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LipFunctional {
    metric: Arc<FiniteMetricSpace>,
    values: Vec<Rat>,
}

impl LipFunctional {
    pub fn new(metric: Arc<FiniteMetricSpace>, values: Vec<Rat>) -> Result<Self, MoleculeError> {
        if values.len() != metric.n_points() {
            return Err(MoleculeError::VectorDimension(0));
        }
        if !values[0].is_zero() {
            return Err(MoleculeError::BasePointNotFixed);
        }
        Ok(LipFunctional { metric, values })
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &Rat {
        &self.values[x]
    }

    pub fn metric(&self) -> &Arc<FiniteMetricSpace> {
        &self.metric
    }

    /// `max |g(x) - g(y)| / d(x, y)` over all pairs, exact.
    pub fn lip_constant(&self) -> Rat {
        let x = &self.metric;
        let mut best = Rat::zero();
        for i in 0..x.n_points() {
            for j in (i + 1)..x.n_points() {
                let ratio = (&self.values[i] - &self.values[j]).abs() / x.dist(i, j);
                if ratio > best {
                    best = ratio;
                }
            }
        }
        best
    }

    /// Membership in the unit ball: every increment bounded by the distance.
    pub fn in_unit_ball(&self) -> bool {
        let x = &self.metric;
        for i in 0..x.n_points() {
            for j in (i + 1)..x.n_points() {
                if (&self.values[i] - &self.values[j]).abs() > *x.dist(i, j) {
                    return false;
                }
            }
        }
        true
    }
}

/// A base-point-preserving map from the points into the dual space,
/// stored as a value table in dual coordinates.
#[derive(Clone, Debug)]
pub struct LipOperator {
    instance: Instance,
    /// `values[x]` is `f(x)` in dual coordinates; `values[0] = 0`.
    values: Vec<Vec<Rat>>,
}

impl LipOperator {
    pub fn new(instance: Instance, values: Vec<Vec<Rat>>) -> Result<Self, MoleculeError> {
        if values.len() != instance.n_points() {
            return Err(MoleculeError::VectorDimension(0));
        }
        for (i, v) in values.iter().enumerate() {
            if v.len() != instance.dim() {
                return Err(MoleculeError::VectorDimension(i));
            }
        }
        if !linalg::is_zero_vec(&values[0]) {
            return Err(MoleculeError::BasePointNotFixed);
        }
        Ok(LipOperator { instance, values })
    }

    pub fn zero(instance: Instance) -> Self {
        let n = instance.n_points();
        let dim = instance.dim();
        LipOperator {
            instance,
            values: vec![linalg::zeros(dim); n],
        }
    }

    /// The rank-one operator `x -> g(x) * phi`.
    pub fn rank_one(
        instance: Instance,
        g: &LipFunctional,
        phi: &[Rat],
    ) -> Result<Self, MoleculeError> {
        if g.values().len() != instance.n_points() {
            return Err(MoleculeError::SpaceMismatch);
        }
        if phi.len() != instance.dim() {
            return Err(MoleculeError::VectorDimension(0));
        }
        let values = g
            .values()
            .iter()
            .map(|gx| linalg::scale(phi, gx))
            .collect();
        Ok(LipOperator {
            instance,
            values,
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn value(&self, x: usize) -> &[Rat] {
        &self.values[x]
    }

    pub fn values(&self) -> &[Vec<Rat>] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| linalg::is_zero_vec(v))
    }

    /// `max ||f(x) - f(y)||_dual / d(x, y)` over all pairs, exact. The dual
    /// norm is evaluated against the ball vertices of the underlying space.
    pub fn lip_norm(&self) -> Rat {
        let x = &self.instance.metric;
        let mut best = Rat::zero();
        for i in 0..x.n_points() {
            for j in (i + 1)..x.n_points() {
                let diff = linalg::sub(&self.values[i], &self.values[j]);
                let ratio = self.instance.space.dual_norm(&diff) / x.dist(i, j);
                if ratio > best {
                    best = ratio;
                }
            }
        }
        best
    }

    pub fn add(&self, other: &LipOperator) -> Result<LipOperator, MoleculeError> {
        if !self.instance.same_as(&other.instance) {
            return Err(MoleculeError::SpaceMismatch);
        }
        Ok(LipOperator {
            instance: self.instance.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| linalg::add(a, b))
                .collect(),
        })
    }

    pub fn scaled(&self, c: &Rat) -> LipOperator {
        LipOperator {
            instance: self.instance.clone(),
            values: self.values.iter().map(|v| linalg::scale(v, c)).collect(),
        }
    }

    /// The composition `S o f o h` for a linear map `s` on dual coordinates
    /// (rows) and a base-point-preserving point map `h`.
    pub fn compose(&self, s: &[Vec<Rat>], h: &PointMap) -> Result<LipOperator, MoleculeError> {
        let n = self.instance.n_points();
        let dim = self.instance.dim();
        if h.images.len() != n || h.images.iter().any(|&i| i >= n) {
            return Err(MoleculeError::IndexOutOfRange(0));
        }
        if h.apply(0) != 0 {
            return Err(MoleculeError::BasePointNotFixed);
        }
        if s.len() != dim || s.iter().any(|row| row.len() != dim) {
            return Err(MoleculeError::MatrixShape);
        }
        let values = (0..n)
            .map(|x| linalg::mat_vec(s, &self.values[h.apply(x)]))
            .collect();
        Ok(LipOperator {
            instance: self.instance.clone(),
            values,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn lip_constant_of_distance_function() {
        let inst = p3_line();
        // g(z) = d(z, 0)
        let g = LipFunctional::new(inst.metric.clone(), vec![r(0), r(1), r(2)]).unwrap();
        assert_eq!(g.lip_constant(), r(1));
        assert!(g.in_unit_ball());
    }

    #[test]
    fn lip_norm_hand_example() {
        let inst = p3_line();
        let f = LipOperator::new(inst, vec![vec![r(0)], vec![r(1)], vec![r(2)]]).unwrap();
        // ratios are 1, 1, 1
        assert_eq!(f.lip_norm(), r(1));
    }

    #[test]
    fn rank_one_values() {
        let inst = p3_line();
        let g = LipFunctional::new(inst.metric.clone(), vec![r(0), r(1), r(2)]).unwrap();
        let f = LipOperator::rank_one(inst, &g, &[r(3)]).unwrap();
        assert_eq!(f.value(2), &[r(6)]);
        assert_eq!(f.lip_norm(), r(3));
    }

    #[test]
    fn zero_operator_norm() {
        let inst = p3_line();
        assert_eq!(LipOperator::zero(inst).lip_norm(), r(0));
    }

    #[test]
    fn base_point_must_vanish() {
        let inst = p3_line();
        let bad = LipOperator::new(
            inst.clone(),
            vec![vec![r(1)], vec![r(0)], vec![r(0)]],
        );
        assert_eq!(bad.unwrap_err(), MoleculeError::BasePointNotFixed);
        let bad_g = LipFunctional::new(inst.metric.clone(), vec![r(1), r(0), r(0)]);
        assert_eq!(bad_g.unwrap_err(), MoleculeError::BasePointNotFixed);
    }
}
