//! Cross-checks reduced search against exact grid distances.

use std::fmt;

use crate::decomposition::{Decomposition, Violation};
use crate::error::Result;
use crate::grid::{Cell, Cost, GridMap};
use crate::harness::instances::Instance;
use crate::search::{astar_plain_with, astar_rsr_with, dijkstra_plain, refine_path, SearchContext, SearchOptions};
use crate::COST_EPS;

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub start: Cell,
    pub goal: Cell,
    pub opts: SearchOptions,
    pub expected: Option<Cost>,
    pub found: Option<Cost>,
    /// Set when the macro path could not be expanded into legal grid steps.
    pub bad_refinement: bool,
    /// Set when the search itself failed.
    pub error: Option<String>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |v: Option<Cost>| v.map_or("unreachable".to_string(), |v| format!("{v:.6}"));
        write!(
            f,
            "{} -> {} pr={} op={}: expected {}, found {}{}",
            self.start,
            self.goal,
            self.opts.perimeter_reduction,
            self.opts.online_pruning,
            c(self.expected),
            c(self.found),
            if self.bad_refinement { " (bad refinement)" } else { "" }
        )?;
        match &self.error {
            Some(e) => write!(f, " (search failed: {e})"),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub structure: Option<Violation>,
    /// Queries run, counting each flag combination separately.
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
    /// Instances where plain A* disagreed with Dijkstra.
    pub oracle_disagreements: Vec<Instance>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.structure.is_none() && self.mismatches.is_empty() && self.oracle_disagreements.is_empty()
    }
}

/// How often plain A* is itself checked against Dijkstra.
const DIJKSTRA_EVERY: usize = 10;

/// Validates `decomp` and compares every instance under every option set
/// against plain A*, which is spot-checked against Dijkstra.
pub fn verify(
    map: &GridMap,
    decomp: &Decomposition,
    instances: &[Instance],
    option_sets: &[SearchOptions],
) -> Result<VerifyReport> {
    let mut report = VerifyReport {
        structure: decomp.validate(map).err(),
        ..Default::default()
    };
    let mut ctx = SearchContext::new();
    let mut plain_ctx = SearchContext::new();
    for (k, inst) in instances.iter().enumerate() {
        let expected = astar_plain_with(&mut plain_ctx, map, inst.start, inst.goal)?.map(|p| p.cost);
        if k % DIJKSTRA_EVERY == 0 {
            let truth = dijkstra_plain(map, inst.start)?.get(inst.goal);
            let agree = match (truth, expected) {
                (Some(a), Some(b)) => (a - b).abs() <= COST_EPS,
                (None, None) => true,
                _ => false,
            };
            if !agree {
                report.oracle_disagreements.push(*inst);
            }
        }
        for &opts in option_sets {
            report.checked += 1;
            let path = astar_rsr_with(&mut ctx, map, decomp, inst.start, inst.goal, opts);
            let mut error = None;
            let (found, bad_refinement) = match path {
                Ok(Some(p)) => {
                    let refined = refine_path(&p, map);
                    let bad = match &refined {
                        Ok(r) => {
                            r.nodes.first() != Some(&inst.start)
                                || r.nodes.last() != Some(&inst.goal)
                                || (r.cost - p.cost).abs() > COST_EPS
                        }
                        Err(_) => true,
                    };
                    (Some(p.cost), bad)
                }
                Ok(None) => (None, false),
                // a corrupted decomposition may fail mid-search
                Err(e) => {
                    error = Some(e.to_string());
                    (None, false)
                }
            };
            let agree = match (expected, found) {
                (Some(a), Some(b)) => (a - b).abs() <= COST_EPS,
                (None, None) => true,
                _ => false,
            };
            if !agree || bad_refinement || error.is_some() {
                report.mismatches.push(Mismatch {
                    start: inst.start,
                    goal: inst.goal,
                    opts,
                    expected,
                    found,
                    bad_refinement,
                    error,
                });
            }
        }
    }
    Ok(report)
}
