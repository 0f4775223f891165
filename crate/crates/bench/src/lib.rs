//! Fixtures shared by the criterion benchmarks.

use rsr_core::harness::{generate, sample_instances, GenKind, GenSpec, Instance};
use rsr_core::{decompose, Connectivity, Decomposition, GridMap};

/// A seeded rooms map of side `size` with its decomposition and `queries`
/// sampled instances.
pub fn rooms_fixture(size: u32, conn: Connectivity, queries: usize) -> (GridMap, Decomposition, Vec<Instance>) {
    let spec = GenSpec::new(size, size, GenKind::Rooms { room: 7, door_p: 0.5 })
        .seed(1)
        .conn(conn);
    let map = generate(&spec).expect("valid generator spec");
    let decomp = decompose(&map);
    let instances = sample_instances(&map, queries, 2);
    (map, decomp, instances)
}
