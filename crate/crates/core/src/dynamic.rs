//! Local repair of a decomposition when single cells change.
//!
//! Blocking a cell retiles the rest of the one rectangle that contained it.
//! Freeing a cell retiles it together with every rectangle touching it.
//! In both cases only rectangles within one cell of the retiled region are
//! reclassified, and all other rectangles keep their ids.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::search::{astar_plain, astar_rsr, SearchOptions};
use crate::COST_EPS;
use crate::grid::{Cell, Connectivity, GridMap};
use crate::rect::Rectangle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellChange {
    Block(Cell),
    Free(Cell),
}

impl CellChange {
    pub fn cell(self) -> Cell {
        match self {
            CellChange::Block(c) | CellChange::Free(c) => c,
        }
    }
}

/// What one repair touched.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RepairStats {
    pub removed: Vec<u32>,
    pub added: Vec<u32>,
    /// Surviving rectangles whose perimeter classes were recomputed.
    pub refreshed: Vec<u32>,
}

/// Applies `change` to `map` and repairs `decomp` in place.
pub fn apply_change(map: &mut GridMap, decomp: &mut Decomposition, change: CellChange) -> Result<RepairStats> {
    let c = change.cell();
    if !map.contains(c) {
        return Err(Error::OutOfBounds(c));
    }
    let block = matches!(change, CellChange::Block(_));
    if map.is_free(c) != block {
        return Err(Error::NoOpChange(c));
    }

    let mut removed: Vec<Rectangle> = Vec::new();
    if block {
        let id = decomp.rect_id(c).ok_or(Error::Invalid(format!("free cell {c} not covered")))?;
        removed.extend(decomp.remove_rect(id));
        map.set_free(c, false)?;
        decomp.clear_cell(c);
    } else {
        map.set_free(c, true)?;
        let mut ids = BTreeSet::new();
        let reach: &[(i64, i64)] = match map.conn() {
            Connectivity::Four => &[(0, -1), (-1, 0), (1, 0), (0, 1)],
            Connectivity::Eight => &[(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)],
        };
        for &(dx, dy) in reach {
            let (x, y) = (c.x as i64 + dx, c.y as i64 + dy);
            if x < 0 || y < 0 || x >= map.width() as i64 || y >= map.height() as i64 {
                continue;
            }
            if let Some(id) = decomp.rect_id(Cell::new(x as u32, y as u32)) {
                ids.insert(id);
            }
        }
        for id in ids {
            removed.extend(decomp.remove_rect(id));
        }
    }

    let (mut x0, mut y0, mut x1, mut y1) = (c.x, c.y, c.x, c.y);
    for r in &removed {
        x0 = x0.min(r.x0);
        y0 = y0.min(r.y0);
        x1 = x1.max(r.x1());
        y1 = y1.max(r.y1());
    }
    // every free cell in the box other than the region is still covered
    let added = decomp.tile(map, (x0, y0, x1, y1), |_| true);
    for &id in &added {
        decomp.refresh(map, id);
    }

    let mut near = BTreeSet::new();
    let (ex0, ey0) = (x0.saturating_sub(1), y0.saturating_sub(1));
    let (ex1, ey1) = ((x1 + 1).min(map.width() - 1), (y1 + 1).min(map.height() - 1));
    for y in ey0..=ey1 {
        for x in ex0..=ex1 {
            if let Some(id) = decomp.rect_id(Cell::new(x, y)) {
                if !added.contains(&id) {
                    near.insert(id);
                }
            }
        }
    }
    for &id in &near {
        decomp.refresh(map, id);
    }
    Ok(RepairStats {
        removed: removed.iter().map(|r| r.id).collect(),
        added,
        refreshed: near.into_iter().collect(),
    })
}

/// Checks a repaired decomposition: it must validate, and every query must
/// cost the same on it, on a fresh decomposition and under plain A*.
/// Returns a description of the first problem found.
pub fn repair_consistency_check(
    map: &GridMap,
    decomp: &Decomposition,
    queries: &[(Cell, Cell)],
) -> Result<std::result::Result<(), String>> {
    if let Err(v) = decomp.validate(map) {
        return Ok(Err(v.to_string()));
    }
    let fresh = crate::decompose(map);
    let opts = SearchOptions::default();
    for &(s, g) in queries {
        let a = astar_rsr(map, decomp, s, g, opts)?.map(|p| p.cost);
        let b = astar_rsr(map, &fresh, s, g, opts)?.map(|p| p.cost);
        let c = astar_plain(map, s, g)?.map(|p| p.cost);
        let agree = match (a, b, c) {
            (Some(a), Some(b), Some(c)) => (a - c).abs() <= COST_EPS && (b - c).abs() <= COST_EPS,
            (None, None, None) => true,
            _ => false,
        };
        if !agree {
            return Ok(Err(format!("{s} -> {g}: repaired {a:?}, fresh {b:?}, plain {c:?}")));
        }
    }
    Ok(Ok(()))
}

/// A map and its decomposition shared by reference. Changes copy the
/// underlying data only while an older snapshot is still held.
#[derive(Debug, Clone)]
pub struct DynamicMap {
    map: Arc<GridMap>,
    decomp: Arc<Decomposition>,
}

impl DynamicMap {
    pub fn new(map: GridMap) -> Self {
        let decomp = crate::decompose(&map);
        DynamicMap {
            map: Arc::new(map),
            decomp: Arc::new(decomp),
        }
    }

    pub fn map(&self) -> &GridMap {
        &self.map
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomp
    }

    /// A consistent pair that later changes do not affect.
    pub fn snapshot(&self) -> (Arc<GridMap>, Arc<Decomposition>) {
        (Arc::clone(&self.map), Arc::clone(&self.decomp))
    }

    pub fn apply(&mut self, change: CellChange) -> Result<RepairStats> {
        let c = change.cell();
        if !self.map.contains(c) {
            return Err(Error::OutOfBounds(c));
        }
        if self.map.is_free(c) != matches!(change, CellChange::Block(_)) {
            return Err(Error::NoOpChange(c));
        }
        let map = Arc::make_mut(&mut self.map);
        let decomp = Arc::make_mut(&mut self.decomp);
        apply_change(map, decomp, change)
    }
}
