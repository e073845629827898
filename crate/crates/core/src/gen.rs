//! Seeded random instance generation.
//!
//! Metrics come from the shortest-path closure of random positive rational
//! edge weights, so they always validate. Every generator is deterministic
//! for a fixed seed.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::metric::{shortest_path_closure, FiniteMetricSpace};
use crate::molecule::{Instance, Molecule, PointMap};
use crate::operator::{LipFunctional, LipOperator};
use crate::rat::Rat;
use crate::space::{NormSpec, PolyhedralSpace};

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform small rational: numerator in `[-max_num, max_num]`, denominator
/// in `{1, 2}`.
pub fn rand_rat(rng: &mut ChaCha8Rng, max_num: i64) -> Rat {
    let num = rng.random_range(-max_num..=max_num);
    let den = if rng.random_bool(0.3) { 2 } else { 1 };
    Rat::new(num, den)
}

fn rand_positive_weight(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.random_range(1..=4i64);
    let den = if rng.random_bool(0.25) { 2 } else { 1 };
    Rat::new(num, den)
}

/// A valid metric on `n` points: closure of random positive edge weights.
pub fn rand_metric(rng: &mut ChaCha8Rng, n: usize) -> FiniteMetricSpace {
    assert!(n >= 2);
    loop {
        let mut w = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = rand_positive_weight(rng);
                w[i][j] = d.clone();
                w[j][i] = d;
            }
        }
        let d = shortest_path_closure(w);
        if let Ok(x) = FiniteMetricSpace::validate_metric(d) {
            return x;
        }
    }
}

/// A norm specification: the two named balls or a random symmetric
/// polytope whose facets always include scaled coordinate facets (keeping
/// the ball bounded).
pub fn rand_norm_spec(rng: &mut ChaCha8Rng, dim: usize) -> NormSpec {
    match rng.random_range(0..4u8) {
        0 => NormSpec::L1,
        1 => NormSpec::LInf,
        _ => {
            let mut facets: Vec<Vec<Rat>> = Vec::new();
            for c in 0..dim {
                let scale = Rat::new(1, rng.random_range(1..=2i64));
                let mut f = vec![Rat::zero(); dim];
                f[c] = scale.clone();
                facets.push(f.clone());
                f[c] = -scale;
                facets.push(f);
            }
            let extra = rng.random_range(0..=2usize);
            for _ in 0..extra {
                let f: Vec<Rat> = (0..dim)
                    .map(|_| Rat::new(rng.random_range(-2..=2i64), 2))
                    .collect();
                if f.iter().all(Rat::is_zero) {
                    continue;
                }
                facets.push(f.iter().map(|v| -v).collect());
                facets.push(f);
            }
            NormSpec::Facets(facets)
        }
    }
}

pub fn rand_space(rng: &mut ChaCha8Rng, dim: usize) -> PolyhedralSpace {
    let spec = rand_norm_spec(rng, dim);
    PolyhedralSpace::build_space(dim, &spec).expect("generated spec is valid")
}

/// A reproducible `(metric, space)` pair within the caps. `n_points` and
/// `dim` are drawn uniformly from `[2, n_cap]` and `[1, dim_cap]`.
pub fn rand_instance(seed: u64, n_cap: usize, dim_cap: usize) -> Instance {
    let mut rng = rng_for(seed);
    rand_instance_with(&mut rng, n_cap, dim_cap)
}

pub fn rand_instance_with(rng: &mut ChaCha8Rng, n_cap: usize, dim_cap: usize) -> Instance {
    let n = rng.random_range(2..=n_cap.max(2));
    let dim = rng.random_range(1..=dim_cap.max(1));
    let metric = rand_metric(rng, n);
    let space = rand_space(rng, dim);
    Instance::new(metric, space)
}

/// A molecule with random small coefficients; roughly one point in three
/// is left at zero.
pub fn rand_molecule(rng: &mut ChaCha8Rng, instance: &Instance) -> Molecule {
    let mut coeffs = BTreeMap::new();
    for x in 1..instance.n_points() {
        if rng.random_bool(0.3) {
            continue;
        }
        let v: Vec<Rat> = (0..instance.dim()).map(|_| rand_rat(rng, 2)).collect();
        coeffs.insert(x, v);
    }
    Molecule::from_coeffs(instance.clone(), coeffs).expect("generated coefficients are valid")
}

/// A molecule guaranteed nonzero.
pub fn rand_nonzero_molecule(rng: &mut ChaCha8Rng, instance: &Instance) -> Molecule {
    loop {
        let u = rand_molecule(rng, instance);
        if !u.is_zero() {
            return u;
        }
    }
}

/// A random elementary tensor with nonzero vector and distinct points.
pub fn rand_elementary(rng: &mut ChaCha8Rng, instance: &Instance) -> Molecule {
    let n = instance.n_points();
    loop {
        let x = rng.random_range(0..n);
        let y = rng.random_range(0..n);
        if x == y {
            continue;
        }
        let e: Vec<Rat> = (0..instance.dim()).map(|_| rand_rat(rng, 2)).collect();
        if e.iter().all(Rat::is_zero) {
            continue;
        }
        return Molecule::elementary(instance.clone(), x, y, e).expect("valid elementary tensor");
    }
}

/// A random operator into the dual space with small rational values.
pub fn rand_operator(rng: &mut ChaCha8Rng, instance: &Instance) -> LipOperator {
    let mut values = vec![vec![Rat::zero(); instance.dim()]];
    for _ in 1..instance.n_points() {
        values.push((0..instance.dim()).map(|_| rand_rat(rng, 2)).collect());
    }
    LipOperator::new(instance.clone(), values).expect("generated table is valid")
}

pub fn rand_nonzero_operator(rng: &mut ChaCha8Rng, instance: &Instance) -> LipOperator {
    loop {
        let f = rand_operator(rng, instance);
        if !f.is_zero() {
            return f;
        }
    }
}

/// A random scalar functional with `g(0) = 0`.
pub fn rand_functional(rng: &mut ChaCha8Rng, instance: &Instance) -> LipFunctional {
    let mut values = vec![Rat::zero()];
    for _ in 1..instance.n_points() {
        values.push(rand_rat(rng, 2));
    }
    LipFunctional::new(instance.metric.clone(), values).expect("generated values are valid")
}

/// A random base-point-preserving self-map of the points.
pub fn rand_point_map(rng: &mut ChaCha8Rng, instance: &Instance) -> PointMap {
    let n = instance.n_points();
    let mut images = vec![0usize];
    for _ in 1..n {
        images.push(rng.random_range(0..n));
    }
    PointMap { images }
}

/// A random square matrix with small rational entries.
pub fn rand_matrix(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Vec<Rat>> {
    (0..dim)
        .map(|_| (0..dim).map(|_| rand_rat(rng, 2)).collect())
        .collect()
}
