//! Benchmark-only crate; see `benches/kernels.rs`.
//!
//! Shared fixture builders live here so the benchmarks stay terse.

use liptensor::gen;
use liptensor::molecule::{Instance, Molecule};

/// A mid-sized reproducible instance: 5 points, 2 dimensions.
pub fn fixture_instance(seed: u64) -> Instance {
    let mut rng = gen::rng_for(seed);
    let metric = gen::rand_metric(&mut rng, 5);
    let space = gen::rand_space(&mut rng, 2);
    Instance::new(metric, space)
}

pub fn fixture_molecule(seed: u64, instance: &Instance) -> Molecule {
    let mut rng = gen::rng_for(seed);
    gen::rand_nonzero_molecule(&mut rng, instance)
}
