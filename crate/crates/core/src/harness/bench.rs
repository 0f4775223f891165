//! Paired timing of reduced and plain A* with CSV output.

use std::io::Write;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::grid::GridMap;
use crate::harness::instances::Instance;
use crate::search::{astar_plain_with, astar_rsr_with, SearchContext, SearchOptions};
use crate::COST_EPS;

/// One benchmarked query. Times are microseconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub map: String,
    pub conn: String,
    pub sx: u32,
    pub sy: u32,
    pub gx: u32,
    pub gy: u32,
    pub cost_rsr: f64,
    pub cost_plain: f64,
    pub expanded_rsr: u64,
    pub expanded_plain: u64,
    pub time_rsr_us: u64,
    pub time_plain_us: u64,
    #[serde(with = "flag")]
    pub same_rect: bool,
    /// Plain time over reduced time for this row.
    pub speedup: f64,
}

/// Booleans as `0`/`1` columns.
mod flag {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &bool, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u8(*v as u8)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<bool, D::Error> {
        match u8::deserialize(d)? {
            0 => Ok(false),
            1 => Ok(true),
            v => Err(serde::de::Error::custom(format!("expected 0 or 1, got {v}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BenchSummary {
    pub queries: usize,
    /// Queries answered without search; excluded from the aggregates below.
    pub same_rect: usize,
    /// Summed plain time over summed reduced time.
    pub speedup: f64,
    pub mean_expanded_rsr: f64,
    pub mean_expanded_plain: f64,
    /// Largest absolute cost difference seen.
    pub max_cost_gap: f64,
}

/// Runs both searches on every instance. Unreachable instances are skipped;
/// a cost disagreement aborts with an error.
pub fn run_bench(
    name: &str,
    map: &GridMap,
    decomp: &Decomposition,
    instances: &[Instance],
    opts: SearchOptions,
) -> Result<Vec<BenchRecord>> {
    let mut rsr_ctx = SearchContext::new();
    let mut plain_ctx = SearchContext::new();
    let mut out = Vec::with_capacity(instances.len());
    for inst in instances {
        let rsr = astar_rsr_with(&mut rsr_ctx, map, decomp, inst.start, inst.goal, opts)?;
        let plain = astar_plain_with(&mut plain_ctx, map, inst.start, inst.goal)?;
        let (rsr, plain) = match (rsr, plain) {
            (Some(a), Some(b)) => (a, b),
            (None, None) => continue,
            _ => {
                return Err(Error::Invalid(format!(
                    "reachability disagrees for {} -> {}",
                    inst.start, inst.goal
                )))
            }
        };
        if (rsr.cost - plain.cost).abs() > COST_EPS {
            return Err(Error::Invalid(format!(
                "cost mismatch for {} -> {}: {} vs {}",
                inst.start, inst.goal, rsr.cost, plain.cost
            )));
        }
        let same_rect = decomp.rect_id(inst.start) == decomp.rect_id(inst.goal);
        let ns = |d: Duration| d.as_nanos().max(1) as f64;
        out.push(BenchRecord {
            map: name.to_string(),
            conn: map.conn().to_string(),
            sx: inst.start.x,
            sy: inst.start.y,
            gx: inst.goal.x,
            gy: inst.goal.y,
            cost_rsr: rsr.cost,
            cost_plain: plain.cost,
            expanded_rsr: rsr.stats.expanded,
            expanded_plain: plain.stats.expanded,
            time_rsr_us: rsr.stats.elapsed.as_micros() as u64,
            time_plain_us: plain.stats.elapsed.as_micros() as u64,
            same_rect,
            speedup: ns(plain.stats.elapsed) / ns(rsr.stats.elapsed),
        });
    }
    Ok(out)
}

pub fn summarize(records: &[BenchRecord]) -> BenchSummary {
    let mut s = BenchSummary {
        queries: records.len(),
        ..Default::default()
    };
    let mut n = 0usize;
    let (mut t_rsr, mut t_plain) = (0u64, 0u64);
    for r in records {
        s.max_cost_gap = s.max_cost_gap.max((r.cost_rsr - r.cost_plain).abs());
        if r.same_rect {
            s.same_rect += 1;
            continue;
        }
        n += 1;
        t_rsr += r.time_rsr_us;
        t_plain += r.time_plain_us;
        s.mean_expanded_rsr += r.expanded_rsr as f64;
        s.mean_expanded_plain += r.expanded_plain as f64;
    }
    if n > 0 {
        let n = n as f64;
        s.mean_expanded_rsr /= n;
        s.mean_expanded_plain /= n;
        s.speedup = t_plain as f64 / t_rsr.max(1) as f64;
    }
    s
}

/// Writes `records` as CSV with a header row.
pub fn write_csv(records: &[BenchRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(input: impl std::io::Read) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_reader(input);
    r.deserialize().map(|rec| rec.map_err(Error::from)).collect()
}
