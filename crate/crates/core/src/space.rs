//! Finite-dimensional polyhedral normed spaces.
//!
//! A space is stored canonically by two polar descriptions of its unit
//! ball: the essential facet normals (so `norm(e) = max <facet, e>`) and
//! the extreme points. Polarity then swaps the two lists, which makes
//! duality an exact involution.

use serde::{Deserialize, Serialize};

use crate::linalg::dot;
use crate::polytope::{enumerate_vertices, Halfspace, PolytopeError};
use crate::rat::{cmp_vecs, Rat};

/// How to build a space's unit ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormSpec {
    L1,
    LInf,
    /// Explicit symmetric facet normals: ball = `{e : <f, e> <= 1 for all f}`.
    Facets(Vec<Vec<Rat>>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("dimension must be at least 1")]
    BadDimension,
    #[error("facet {0} has wrong dimension")]
    FacetDimension(usize),
    #[error("facet list is not symmetric: missing negation of facet {0}")]
    AsymmetricFacets(usize),
    #[error("zero facet normal at {0}")]
    ZeroFacet(usize),
    #[error("unit ball is unbounded: facets do not positively span")]
    UnboundedBall,
    #[error("facet system too large")]
    TooManyFacets,
}

/// A normed space with a polyhedral unit ball, closed under duality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedralSpace {
    dim: usize,
    /// Essential facet normals of the unit ball; symmetric, sorted.
    facets: Vec<Vec<Rat>>,
    /// Extreme points of the unit ball; symmetric, sorted.
    vertices: Vec<Vec<Rat>>,
}

impl PolyhedralSpace {
    /// Builds a space from a norm specification, computing and caching both
    /// ball descriptions by exact halfspace-intersection enumeration.
    pub fn build_space(dim: usize, spec: &NormSpec) -> Result<Self, SpaceError> {
        if dim == 0 {
            return Err(SpaceError::BadDimension);
        }
        match spec {
            NormSpec::L1 => {
                // Ball sum |e_i| <= 1: facets are all sign patterns, extreme
                // points the signed standard basis.
                let mut facets = Vec::with_capacity(1 << dim);
                for mask in 0..(1usize << dim) {
                    facets.push(
                        (0..dim)
                            .map(|c| {
                                if mask >> c & 1 == 1 {
                                    Rat::one()
                                } else {
                                    -Rat::one()
                                }
                            })
                            .collect::<Vec<_>>(),
                    );
                }
                let mut vertices = Vec::with_capacity(2 * dim);
                for c in 0..dim {
                    let mut v = vec![Rat::zero(); dim];
                    v[c] = Rat::one();
                    vertices.push(v.clone());
                    v[c] = -Rat::one();
                    vertices.push(v);
                }
                facets.sort_by(|a, b| cmp_vecs(a, b));
                vertices.sort_by(|a, b| cmp_vecs(a, b));
                Ok(PolyhedralSpace {
                    dim,
                    facets,
                    vertices,
                })
            }
            NormSpec::LInf => {
                let l1 = Self::build_space(dim, &NormSpec::L1)?;
                Ok(l1.dual_space())
            }
            NormSpec::Facets(facets) => Self::from_facets(dim, facets),
        }
    }

    fn from_facets(dim: usize, facets: &[Vec<Rat>]) -> Result<Self, SpaceError> {
        for (i, f) in facets.iter().enumerate() {
            if f.len() != dim {
                return Err(SpaceError::FacetDimension(i));
            }
            if f.iter().all(Rat::is_zero) {
                return Err(SpaceError::ZeroFacet(i));
            }
        }
        for (i, f) in facets.iter().enumerate() {
            let neg: Vec<Rat> = f.iter().map(|x| -x).collect();
            if !facets.contains(&neg) {
                return Err(SpaceError::AsymmetricFacets(i));
            }
        }
        let ball: Vec<Halfspace> = facets
            .iter()
            .map(|f| Halfspace::new(f.clone(), Rat::one()))
            .collect();
        let vertices = match enumerate_vertices(dim, &ball) {
            Ok(v) => v,
            Err(PolytopeError::Unbounded) => return Err(SpaceError::UnboundedBall),
            Err(PolytopeError::TooManyConstraints(_)) => return Err(SpaceError::TooManyFacets),
            Err(e) => unreachable!("symmetric facet ball: {e}"),
        };
        // Essential facets are the extreme points of the polar ball.
        let polar: Vec<Halfspace> = vertices
            .iter()
            .map(|v| Halfspace::new(v.clone(), Rat::one()))
            .collect();
        let essential = match enumerate_vertices(dim, &polar) {
            Ok(f) => f,
            Err(PolytopeError::TooManyConstraints(_)) => return Err(SpaceError::TooManyFacets),
            Err(e) => unreachable!("polar of a bounded symmetric ball: {e}"),
        };
        Ok(PolyhedralSpace {
            dim,
            facets: essential,
            vertices,
        })
    }

    /// The dual space: polarity swaps ball vertices and facet normals, so
    /// applying this twice returns the original space exactly.
    pub fn dual_space(&self) -> PolyhedralSpace {
        PolyhedralSpace {
            dim: self.dim,
            facets: self.vertices.clone(),
            vertices: self.facets.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Vec<Rat>] {
        &self.facets
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    /// `max_f <f, e>` over the facet normals: the norm of `e`.
    pub fn norm(&self, e: &[Rat]) -> Rat {
        assert_eq!(e.len(), self.dim, "vector dimension mismatch");
        self.facets
            .iter()
            .map(|f| dot(f, e))
            .max()
            .expect("nonempty facet list")
    }

    /// Norm in the dual space: `max_v <v, x>` over ball vertices.
    pub fn dual_norm(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.dim, "vector dimension mismatch");
        self.vertices
            .iter()
            .map(|v| dot(v, x))
            .max()
            .expect("nonempty vertex list")
    }

    /// A facet normal attaining the norm of `e`.
    pub fn norming_facet(&self, e: &[Rat]) -> &Vec<Rat> {
        self.facets
            .iter()
            .max_by(|a, b| dot(a, e).cmp(&dot(b, e)))
            .expect("nonempty facet list")
    }

    /// Operator norm of the matrix `t` (rows) as a map from this space to
    /// `target`: the max of `target.norm(t v)` over ball vertices `v`.
    pub fn operator_norm(&self, t: &[Vec<Rat>], target: &PolyhedralSpace) -> Rat {
        self.vertices
            .iter()
            .map(|v| target.norm(&crate::linalg::mat_vec(t, v)))
            .max()
            .expect("nonempty vertex list")
    }

    /// A stable key for memo tables.
    pub fn memo_key(&self) -> String {
        let mut s = format!("{}:", self.dim);
        for f in &self.facets {
            for v in f {
                s.push_str(&v.to_string());
                s.push(',');
            }
            s.push(';');
        }
        s
    }
}
