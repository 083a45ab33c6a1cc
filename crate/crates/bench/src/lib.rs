//! Shared fixtures for the benchmarks.

use curvesum::random::{random_instance, InstanceKind, RandomSpec};
use curvesum::Instance;

pub const SEED: u64 = 20240611;

/// A fixed batch of mixed instances with at most `d_max` self-crossings per piece.
pub fn fixtures(d_max: usize, count: u64) -> Vec<Instance> {
    let spec = RandomSpec {
        seed: SEED,
        d_max,
        g_max: 3,
        x_max: 6,
    };
    (0..count)
        .map(|i| random_instance(&spec, InstanceKind::Mixed, i).expect("fixture"))
        .collect()
}
