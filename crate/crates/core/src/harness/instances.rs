//! Random solvable start/goal pairs.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{metric_distance, Cell, GridMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Instance {
    pub start: Cell,
    pub goal: Cell,
}

/// Connected-component label per cell (`u32::MAX` for blocked cells) and
/// the number of components.
pub fn components(map: &GridMap) -> (Vec<u32>, u32) {
    let mut label = vec![u32::MAX; map.len()];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for i in 0..map.len() {
        if label[i] != u32::MAX || !map.is_free(map.cell(i)) {
            continue;
        }
        label[i] = next;
        queue.push_back(i);
        while let Some(u) = queue.pop_front() {
            map.for_each_neighbour(map.cell(u), |t, _| {
                let v = map.index(t);
                if label[v] == u32::MAX {
                    label[v] = next;
                    queue.push_back(v);
                }
            });
        }
        next += 1;
    }
    (label, next)
}

/// Up to `count` pairs of distinct free cells in the same component, at
/// least a tenth of the map diagonal apart. Fewer pairs are returned when
/// the map cannot supply them within a bounded number of draws.
pub fn sample_instances(map: &GridMap, count: usize, seed: u64) -> Vec<Instance> {
    sample_instances_with(map, count, seed, 0.1)
}

/// As [`sample_instances`] with an explicit minimum separation, given as a
/// fraction of the map diagonal.
pub fn sample_instances_with(map: &GridMap, count: usize, seed: u64, min_frac: f64) -> Vec<Instance> {
    let free: Vec<Cell> = map.free_cells().collect();
    if free.len() < 2 {
        return Vec::new();
    }
    let (label, _) = components(map);
    let (w, h) = (map.width() as f64, map.height() as f64);
    let min_sep = min_frac * (w * w + h * h).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let max_draws = count.saturating_mul(1000).max(1000);
    for _ in 0..max_draws {
        if out.len() == count {
            break;
        }
        let s = free[rng.gen_range(0..free.len())];
        let g = free[rng.gen_range(0..free.len())];
        if s == g || label[map.index(s)] != label[map.index(g)] {
            continue;
        }
        if metric_distance(map.conn(), s, g) < min_sep {
            continue;
        }
        out.push(Instance { start: s, goal: g });
    }
    out
}
