//! Molecules: canonical coordinates of tensor-product elements.
//!
//! A formal sum of terms `(x, y, e)` acts on base-point-preserving operators
//! `f` by `sum <f(x) - f(y), e>`. Two formal sums act identically exactly
//! when their telescoped coordinates agree, so a molecule stores the
//! canonical form: one vector `m(x)` per non-base point, with
//! `m(0) = -sum m(x)` implied. Formal sums are kept only as representation
//! witnesses.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::metric::FiniteMetricSpace;
use crate::operator::LipOperator;
use crate::rat::Rat;
use crate::space::PolyhedralSpace;

/// A metric space paired with a polyhedral normed space; the shared context
/// for molecules and operators.
#[derive(Clone, Debug)]
pub struct Instance {
    pub metric: Arc<FiniteMetricSpace>,
    pub space: Arc<PolyhedralSpace>,
}

impl Instance {
    pub fn new(metric: FiniteMetricSpace, space: PolyhedralSpace) -> Self {
        Instance {
            metric: Arc::new(metric),
            space: Arc::new(space),
        }
    }

    pub fn same_as(&self, other: &Instance) -> bool {
        self.metric == other.metric && self.space == other.space
    }

    pub fn n_points(&self) -> usize {
        self.metric.n_points()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoleculeError {
    #[error("term {0}: point index out of range")]
    IndexOutOfRange(usize),
    #[error("term {0}: degenerate pair (x = y)")]
    DegeneratePair(usize),
    #[error("term {0}: vector has wrong dimension")]
    VectorDimension(usize),
    #[error("molecule and operator live over different spaces")]
    SpaceMismatch,
    #[error("point map must fix the base point")]
    BasePointNotFixed,
    #[error("matrix has wrong shape")]
    MatrixShape,
}

/// One term `delta_(x,y) (x) e` of a formal representation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepTerm {
    pub x: usize,
    pub y: usize,
    pub e: Vec<Rat>,
}

/// A formal sum of terms; a witness for how a molecule can be written.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FormalRepresentation {
    pub terms: Vec<RepTerm>,
}

impl FormalRepresentation {
    pub fn new(terms: Vec<RepTerm>) -> Self {
        FormalRepresentation { terms }
    }

    /// Cost under the projective scoring: `sum d(x, y) * norm(e)`.
    pub fn projective_cost(&self, instance: &Instance) -> Rat {
        self.terms
            .iter()
            .map(|t| instance.metric.dist(t.x, t.y) * &instance.space.norm(&t.e))
            .sum()
    }
}

/// Canonical coordinates of an element of the tensor product.
#[derive(Clone, Debug)]
pub struct Molecule {
    instance: Instance,
    /// Nonzero coefficient vectors keyed by point index (never 0).
    coeffs: BTreeMap<usize, Vec<Rat>>,
}

/// A base-point-preserving self-map of the point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointMap {
    pub images: Vec<usize>,
}

impl PointMap {
    pub fn identity(n: usize) -> Self {
        PointMap {
            images: (0..n).collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// Lipschitz constant as a self-map of `x`; maps collapsing everything
    /// to the base point have constant 0.
    pub fn lip_constant(&self, x: &FiniteMetricSpace) -> Rat {
        let mut best = Rat::zero();
        for i in 0..x.n_points() {
            for j in (i + 1)..x.n_points() {
                let num = x.dist(self.images[i], self.images[j]);
                let ratio = num / x.dist(i, j);
                if ratio > best {
                    best = ratio;
                }
            }
        }
        best
    }
}

impl Molecule {
    pub fn zero(instance: Instance) -> Self {
        Molecule {
            instance,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds from explicit canonical coordinates; zero vectors are dropped.
    pub fn from_coeffs(
        instance: Instance,
        coeffs: BTreeMap<usize, Vec<Rat>>,
    ) -> Result<Self, MoleculeError> {
        let n = instance.n_points();
        let dim = instance.dim();
        let mut clean = BTreeMap::new();
        for (x, v) in coeffs {
            if x == 0 || x >= n {
                return Err(MoleculeError::IndexOutOfRange(x));
            }
            if v.len() != dim {
                return Err(MoleculeError::VectorDimension(x));
            }
            if !linalg::is_zero_vec(&v) {
                clean.insert(x, v);
            }
        }
        Ok(Molecule {
            instance,
            coeffs: clean,
        })
    }

    /// Telescopes a formal sum into canonical coordinates.
    pub fn from_representation(
        instance: Instance,
        rep: &FormalRepresentation,
    ) -> Result<Self, MoleculeError> {
        let n = instance.n_points();
        let dim = instance.dim();
        let mut acc: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
        for (i, t) in rep.terms.iter().enumerate() {
            if t.x >= n || t.y >= n {
                return Err(MoleculeError::IndexOutOfRange(i));
            }
            if t.x == t.y {
                return Err(MoleculeError::DegeneratePair(i));
            }
            if t.e.len() != dim {
                return Err(MoleculeError::VectorDimension(i));
            }
            if t.x != 0 {
                let entry = acc.entry(t.x).or_insert_with(|| linalg::zeros(dim));
                *entry = linalg::add(entry, &t.e);
            }
            if t.y != 0 {
                let entry = acc.entry(t.y).or_insert_with(|| linalg::zeros(dim));
                *entry = linalg::sub(entry, &t.e);
            }
        }
        acc.retain(|_, v| !linalg::is_zero_vec(v));
        Ok(Molecule {
            instance,
            coeffs: acc,
        })
    }

    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Vec<Rat>> {
        &self.coeffs
    }

    pub fn coeff(&self, x: usize) -> Vec<Rat> {
        self.coeffs
            .get(&x)
            .cloned()
            .unwrap_or_else(|| linalg::zeros(self.instance.dim()))
    }

    /// Non-base points with nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Two molecules agree exactly when their canonical coordinates agree.
    pub fn same_element(&self, other: &Molecule) -> bool {
        self.instance.same_as(&other.instance) && self.coeffs == other.coeffs
    }

    /// The star representation `sum delta_(x, 0) (x) m(x)`.
    pub fn star_representation(&self) -> FormalRepresentation {
        FormalRepresentation::new(
            self.coeffs
                .iter()
                .map(|(&x, e)| RepTerm {
                    x,
                    y: 0,
                    e: e.clone(),
                })
                .collect(),
        )
    }

    /// Evaluates the molecule on an operator:
    /// `sum_x <f(x), m(x)>`, which is representation independent.
    pub fn pairing(&self, f: &LipOperator) -> Result<Rat, MoleculeError> {
        if !self.instance.same_as(f.instance()) {
            return Err(MoleculeError::SpaceMismatch);
        }
        Ok(self
            .coeffs
            .iter()
            .map(|(&x, m)| linalg::dot(f.value(x), m))
            .sum())
    }

    /// Image under a base-point-preserving point map and a linear map on
    /// the vector side: canonical form of `sum delta_(h x, h y) (x) T e`.
    pub fn pushforward(&self, h: &PointMap, t: &[Vec<Rat>]) -> Result<Molecule, MoleculeError> {
        let n = self.instance.n_points();
        let dim = self.instance.dim();
        if h.images.len() != n || h.images.iter().any(|&i| i >= n) {
            return Err(MoleculeError::IndexOutOfRange(0));
        }
        if h.apply(0) != 0 {
            return Err(MoleculeError::BasePointNotFixed);
        }
        if t.len() != dim || t.iter().any(|row| row.len() != dim) {
            return Err(MoleculeError::MatrixShape);
        }
        let mut acc: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
        for (&x, m) in &self.coeffs {
            let hx = h.apply(x);
            if hx == 0 {
                continue;
            }
            let tm = linalg::mat_vec(t, m);
            let entry = acc.entry(hx).or_insert_with(|| linalg::zeros(dim));
            *entry = linalg::add(entry, &tm);
        }
        acc.retain(|_, v| !linalg::is_zero_vec(v));
        Ok(Molecule {
            instance: self.instance.clone(),
            coeffs: acc,
        })
    }

    pub fn scaled(&self, c: &Rat) -> Molecule {
        if c.is_zero() {
            return Molecule::zero(self.instance.clone());
        }
        Molecule {
            instance: self.instance.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(&x, v)| (x, linalg::scale(v, c)))
                .collect(),
        }
    }

    /// An elementary tensor `delta_(x,y) (x) e` in canonical form.
    pub fn elementary(
        instance: Instance,
        x: usize,
        y: usize,
        e: Vec<Rat>,
    ) -> Result<Molecule, MoleculeError> {
        Molecule::from_representation(
            instance,
            &FormalRepresentation::new(vec![RepTerm { x, y, e }]),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::NormSpec;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn p3_line() -> Instance {
        // 0 - a - b on a line: d(0,a) = 1, d(a,b) = 1, d(0,b) = 2
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
    fn single_term_canonical_form() {
        let inst = p3_line();
        let u = Molecule::elementary(inst, 1, 0, vec![r(1)]).unwrap();
        assert_eq!(u.coeff(1), vec![r(1)]);
        assert_eq!(u.coeff(2), vec![r(0)]);
    }

    #[test]
    fn telescoping_identity() {
        let inst = p3_line();
        let two_terms = Molecule::from_representation(
            inst.clone(),
            &FormalRepresentation::new(vec![
                RepTerm { x: 1, y: 0, e: vec![r(1)] },
                RepTerm { x: 0, y: 2, e: vec![r(1)] },
            ]),
        )
        .unwrap();
        let direct = Molecule::elementary(inst, 1, 2, vec![r(1)]).unwrap();
        assert!(two_terms.same_element(&direct));
        assert_eq!(two_terms.coeff(1), vec![r(1)]);
        assert_eq!(two_terms.coeff(2), vec![-r(1)]);
    }

    #[test]
    fn cancellation_gives_zero() {
        let inst = p3_line();
        let u = Molecule::from_representation(
            inst,
            &FormalRepresentation::new(vec![
                RepTerm { x: 1, y: 2, e: vec![r(5)] },
                RepTerm { x: 2, y: 1, e: vec![r(5)] },
            ]),
        )
        .unwrap();
        assert!(u.is_zero());
    }

    #[test]
    fn representation_errors() {
        let inst = p3_line();
        let bad_index = Molecule::from_representation(
            inst.clone(),
            &FormalRepresentation::new(vec![RepTerm { x: 7, y: 0, e: vec![r(1)] }]),
        );
        assert_eq!(bad_index.unwrap_err(), MoleculeError::IndexOutOfRange(0));
        let degenerate = Molecule::from_representation(
            inst,
            &FormalRepresentation::new(vec![RepTerm { x: 1, y: 1, e: vec![r(1)] }]),
        );
        assert_eq!(degenerate.unwrap_err(), MoleculeError::DegeneratePair(0));
    }

    #[test]
    fn pushforward_basics() {
        let inst = p3_line();
        let u = Molecule::from_coeffs(
            inst.clone(),
            [(1, vec![r(1)]), (2, vec![r(1)])].into_iter().collect(),
        )
        .unwrap();
        // doubling map on vectors, identity on points
        let id = PointMap::identity(3);
        let double = vec![vec![r(2)]];
        let v = u.pushforward(&id, &double).unwrap();
        assert_eq!(v.coeff(1), vec![r(2)]);
        assert_eq!(v.coeff(2), vec![r(2)]);
        // collapsing map gives zero
        let collapse = PointMap { images: vec![0, 0, 0] };
        let z = u.pushforward(&collapse, &double).unwrap();
        assert!(z.is_zero());
        // base point must stay fixed
        let bad = PointMap { images: vec![1, 0, 2] };
        assert_eq!(
            u.pushforward(&bad, &double).unwrap_err(),
            MoleculeError::BasePointNotFixed
        );
    }
}
