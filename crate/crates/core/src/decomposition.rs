//! Offline tiling of free space into empty rectangles, perimeter
//! classification and pruned-component bookkeeping.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::grid::{metric_distance, Cell, Connectivity, GridMap};
use crate::macro_graph::edges::for_each_intra;
use crate::macro_graph::{EdgeKind, MacroEdge};
use crate::rect::Rectangle;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeClass {
    /// Strictly inside its rectangle; never expanded.
    Interior,
    /// Perimeter node with no grid edge into another rectangle.
    PerimeterPruned,
    PerimeterActive,
}

/// Pruned perimeter nodes of one rectangle grouped into connected components
/// of the macro graph, and which active nodes touch which component.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct PrunedComponents {
    /// Component id per perimeter index, `NONE` for active nodes. Empty when
    /// the rectangle has no pruned node.
    comp_of: Vec<u32>,
    /// CSR offsets into `links`, per perimeter index.
    link_start: Vec<u32>,
    links: Vec<u32>,
    /// Active nodes macro-adjacent to each component, sorted.
    comp_actives: Vec<Vec<Cell>>,
}

impl PrunedComponents {
    pub(crate) fn is_empty(&self) -> bool {
        self.comp_actives.is_empty()
    }

    #[inline]
    pub(crate) fn links(&self, perimeter_index: usize) -> &[u32] {
        if self.link_start.is_empty() {
            return &[];
        }
        let (a, b) = (
            self.link_start[perimeter_index] as usize,
            self.link_start[perimeter_index + 1] as usize,
        );
        &self.links[a..b]
    }

    #[inline]
    pub(crate) fn actives(&self, comp: u32) -> &[Cell] {
        &self.comp_actives[comp as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RectInfo {
    pub(crate) rect: Rectangle,
    pub(crate) pruned: PrunedComponents,
    pub(crate) pruned_count: u32,
    pub(crate) active_count: u32,
}

/// Counts reported by [`Decomposition::stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DecompStats {
    pub rectangles: usize,
    pub interior: usize,
    pub pruned: usize,
    pub active: usize,
}

/// A tiling of the free cells of a map into disjoint empty rectangles.
///
/// Storage is one rectangle id and one [`NodeClass`] per cell plus a
/// per-rectangle table; macro-edges are derived from geometry on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    conn: Connectivity,
    width: u32,
    height: u32,
    rect_of: Vec<u32>,
    class_of: Vec<Option<NodeClass>>,
    rects: Vec<Option<RectInfo>>,
    free_ids: Vec<u32>,
}

/// Tiles the free cells of `map` and classifies every perimeter node.
pub fn decompose(map: &GridMap) -> Decomposition {
    let mut d = Decomposition::empty(map);
    let all = (0, 0, map.width() - 1, map.height() - 1);
    let ids = d.tile(map, all, |_| true);
    for id in ids {
        d.refresh(map, id);
    }
    d
}

/// Classification of one cell of `rect` against the current `rect_of`.
pub(crate) fn classify_cell(map: &GridMap, rect_of: &[u32], rect: &Rectangle, c: Cell) -> NodeClass {
    if rect.is_interior(c) {
        return NodeClass::Interior;
    }
    let mut external = false;
    map.for_each_neighbour(c, |n, _| {
        external |= rect_of[map.index(n)] != rect.id;
    });
    if external {
        NodeClass::PerimeterActive
    } else {
        NodeClass::PerimeterPruned
    }
}

/// Groups the pruned nodes of `rect` into macro-graph components.
pub(crate) fn pruned_components(
    rect: &Rectangle,
    conn: Connectivity,
    is_pruned: impl Fn(Cell) -> bool,
) -> PrunedComponents {
    let p = rect.perimeter_len();
    let pruned: Vec<bool> = (0..p).map(|i| is_pruned(rect.perimeter_cell(i))).collect();
    if !pruned.iter().any(|&b| b) {
        return PrunedComponents::default();
    }

    let mut parent: Vec<u32> = (0..p as u32).collect();
    fn find(parent: &mut [u32], mut i: u32) -> u32 {
        while parent[i as usize] != i {
            parent[i as usize] = parent[parent[i as usize] as usize];
            i = parent[i as usize];
        }
        i
    }
    let mut raw_links: Vec<(u32, u32)> = Vec::new(); // (active idx, pruned idx)
    for i in 0..p {
        if !pruned[i] {
            continue;
        }
        let c = rect.perimeter_cell(i);
        for_each_intra(rect, c, conn, |t, _| {
            let j = rect.perimeter_index(t).expect("macro target on perimeter");
            if pruned[j] {
                let (a, b) = (find(&mut parent, i as u32), find(&mut parent, j as u32));
                if a != b {
                    parent[a.max(b) as usize] = a.min(b);
                }
            } else {
                raw_links.push((j as u32, i as u32));
            }
        });
    }

    let mut comp_id = vec![NONE; p];
    let mut comp_of = vec![NONE; p];
    let mut next = 0u32;
    for i in 0..p {
        if pruned[i] {
            let root = find(&mut parent, i as u32) as usize;
            if comp_id[root] == NONE {
                comp_id[root] = next;
                next += 1;
            }
            comp_of[i] = comp_id[root];
        }
    }

    let mut per_active: Vec<Vec<u32>> = vec![Vec::new(); p];
    let mut comp_actives: Vec<Vec<Cell>> = vec![Vec::new(); next as usize];
    for (a, q) in raw_links {
        let comp = comp_of[q as usize];
        per_active[a as usize].push(comp);
        comp_actives[comp as usize].push(rect.perimeter_cell(a as usize));
    }
    let mut link_start = Vec::with_capacity(p + 1);
    let mut links = Vec::new();
    for l in per_active.iter_mut() {
        l.sort_unstable();
        l.dedup();
        link_start.push(links.len() as u32);
        links.extend_from_slice(l);
    }
    link_start.push(links.len() as u32);
    for a in comp_actives.iter_mut() {
        a.sort_unstable();
        a.dedup();
    }
    PrunedComponents {
        comp_of,
        link_start,
        links,
        comp_actives,
    }
}

/// Row-major anchor order by descending size of the largest free square
/// anchored at the cell, then the largest-area rectangle grown from each
/// anchor over still-uncovered cells. Returns `(x0, y0, w, h)` in emission
/// order. `in_region` restricts the candidate cells (map indices).
fn tile_cells(
    map: &GridMap,
    bbox: (u32, u32, u32, u32),
    in_region: impl Fn(usize) -> bool,
) -> Vec<(u32, u32, u32, u32)> {
    let (bx0, by0, bx1, by1) = bbox;
    let bw = (bx1 - bx0 + 1) as usize;
    let bh = (by1 - by0 + 1) as usize;
    let mut avail = vec![false; bw * bh];
    for ly in 0..bh {
        for lx in 0..bw {
            let c = Cell::new(bx0 + lx as u32, by0 + ly as u32);
            let gi = map.index(c);
            avail[ly * bw + lx] = map.is_free(c) && in_region(gi);
        }
    }

    let mut square = vec![0u32; bw * bh];
    for ly in (0..bh).rev() {
        for lx in (0..bw).rev() {
            let i = ly * bw + lx;
            if !avail[i] {
                continue;
            }
            let right = if lx + 1 < bw { square[i + 1] } else { 0 };
            let down = if ly + 1 < bh { square[i + bw] } else { 0 };
            let diag = if lx + 1 < bw && ly + 1 < bh {
                square[i + bw + 1]
            } else {
                0
            };
            square[i] = 1 + right.min(down).min(diag);
        }
    }
    let mut anchors: Vec<u32> = (0..(bw * bh) as u32).filter(|&i| avail[i as usize]).collect();
    anchors.sort_by_key(|&i| (std::cmp::Reverse(square[i as usize]), i));

    let mut out = Vec::new();
    for a in anchors {
        let a = a as usize;
        if !avail[a] {
            continue;
        }
        let (ax, ay) = (a % bw, a / bw);
        let run = |avail: &[bool], y: usize, limit: usize| {
            let row = &avail[y * bw + ax..y * bw + ax + limit];
            row.iter().take_while(|&&b| b).count()
        };
        let mut limit = run(&avail, ay, bw - ax);
        let (mut best_w, mut best_h, mut best_area) = (limit, 1, limit);
        let mut y = ay + 1;
        while y < bh {
            limit = run(&avail, y, limit);
            if limit == 0 {
                break;
            }
            let h = y - ay + 1;
            if limit * h > best_area {
                (best_w, best_h, best_area) = (limit, h, limit * h);
            }
            y += 1;
        }
        for yy in ay..ay + best_h {
            avail[yy * bw + ax..yy * bw + ax + best_w].fill(false);
        }
        out.push((bx0 + ax as u32, by0 + ay as u32, best_w as u32, best_h as u32));
    }
    out
}

impl Decomposition {
    fn empty(map: &GridMap) -> Self {
        Decomposition {
            conn: map.conn(),
            width: map.width(),
            height: map.height(),
            rect_of: vec![NONE; map.len()],
            class_of: vec![None; map.len()],
            rects: Vec::new(),
            free_ids: Vec::new(),
        }
    }

    /// Builds a decomposition from an explicit tiling. Rectangle ids must be
    /// unique; they index the rectangle table.
    pub fn from_tiling(map: &GridMap, rects: &[Rectangle]) -> Result<Self> {
        let mut d = Decomposition::empty(map);
        for r in rects {
            let slot = r.id as usize;
            if d.rects.len() <= slot {
                d.rects.resize(slot + 1, None);
            }
            if d.rects[slot].is_some() {
                return Err(Error::Invalid(format!("duplicate rectangle id {}", r.id)));
            }
            if r.x1() >= map.width() || r.y1() >= map.height() {
                return Err(Error::Invalid(format!("rectangle {} exceeds the map", r.id)));
            }
            for c in r.cells() {
                let i = map.index(c);
                if !map.is_free(c) {
                    return Err(Error::Invalid(format!("rectangle {} covers blocked {c}", r.id)));
                }
                if d.rect_of[i] != NONE {
                    return Err(Error::Invalid(format!("rectangles overlap at {c}")));
                }
                d.rect_of[i] = r.id;
            }
            d.rects[slot] = Some(RectInfo {
                rect: *r,
                pruned: PrunedComponents::default(),
                pruned_count: 0,
                active_count: 0,
            });
        }
        if let Some(c) = map.free_cells().find(|&c| d.rect_of[map.index(c)] == NONE) {
            return Err(Error::Invalid(format!("free cell {c} is not covered")));
        }
        d.free_ids = (0..d.rects.len() as u32)
            .rev()
            .filter(|&i| d.rects[i as usize].is_none())
            .collect();
        for r in rects {
            d.refresh(map, r.id);
        }
        Ok(d)
    }

    #[inline]
    pub fn conn(&self) -> Connectivity {
        self.conn
    }

    #[inline]
    fn index(&self, c: Cell) -> usize {
        c.y as usize * self.width as usize + c.x as usize
    }

    #[inline]
    fn contains(&self, c: Cell) -> bool {
        c.x < self.width && c.y < self.height
    }

    #[inline]
    pub fn rect_id(&self, c: Cell) -> Option<u32> {
        if !self.contains(c) {
            return None;
        }
        match self.rect_of[self.index(c)] {
            NONE => None,
            id => Some(id),
        }
    }

    #[inline]
    pub fn rect(&self, id: u32) -> Option<&Rectangle> {
        self.info(id).map(|i| &i.rect)
    }

    #[inline]
    pub(crate) fn info(&self, id: u32) -> Option<&RectInfo> {
        self.rects.get(id as usize).and_then(|r| r.as_ref())
    }

    pub fn rect_containing(&self, c: Cell) -> Option<&Rectangle> {
        self.rect_id(c).and_then(|id| self.rect(id))
    }

    #[inline]
    pub fn class_of(&self, c: Cell) -> Option<NodeClass> {
        if !self.contains(c) {
            return None;
        }
        self.class_of[self.index(c)]
    }

    pub fn rects(&self) -> impl Iterator<Item = &Rectangle> + '_ {
        self.rects.iter().flatten().map(|i| &i.rect)
    }

    pub fn rect_count(&self) -> usize {
        self.rects.iter().flatten().count()
    }

    /// Number of pruned perimeter nodes of rectangle `id`.
    pub fn pruned_count(&self, id: u32) -> u32 {
        self.info(id).map_or(0, |i| i.pruned_count)
    }

    pub fn active_count(&self, id: u32) -> u32 {
        self.info(id).map_or(0, |i| i.active_count)
    }

    /// Pruned perimeter nodes of rectangle `id`, one list per component.
    pub fn pruned_components(&self, id: u32) -> Vec<Vec<Cell>> {
        let Some(info) = self.info(id) else {
            return Vec::new();
        };
        let pc = &info.pruned;
        let mut out = vec![Vec::new(); pc.comp_actives.len()];
        for (i, &comp) in pc.comp_of.iter().enumerate() {
            if comp != NONE {
                out[comp as usize].push(info.rect.perimeter_cell(i));
            }
        }
        out
    }

    /// Component ids of the own rectangle that active node `c` is
    /// macro-adjacent to.
    pub fn adjacent_components(&self, c: Cell) -> &[u32] {
        let Some(info) = self.rect_id(c).and_then(|id| self.info(id)) else {
            return &[];
        };
        match info.rect.perimeter_index(c) {
            Some(i) => info.pruned.links(i),
            None => &[],
        }
    }

    /// Active nodes of rectangle `id` macro-adjacent to component `comp`.
    pub fn component_actives(&self, id: u32, comp: u32) -> &[Cell] {
        self.info(id)
            .filter(|i| (comp as usize) < i.pruned.comp_actives.len())
            .map_or(&[], |i| i.pruned.actives(comp))
    }

    pub fn stats(&self) -> DecompStats {
        let mut s = DecompStats {
            rectangles: self.rect_count(),
            ..Default::default()
        };
        for c in self.class_of.iter().flatten() {
            match c {
                NodeClass::Interior => s.interior += 1,
                NodeClass::PerimeterPruned => s.pruned += 1,
                NodeClass::PerimeterActive => s.active += 1,
            }
        }
        s
    }

    /// Edges that replace the contracted pruned nodes: from active `n` to
    /// every other active node sharing a pruned component with it, at
    /// metric cost.
    pub fn contracted_active_edges(&self, rect_id: u32, n: Cell) -> Result<Vec<MacroEdge>> {
        let info = self
            .info(rect_id)
            .filter(|i| i.rect.contains(n))
            .ok_or(Error::NotPerimeter { cell: n, rect: rect_id })?;
        if self.class_of(n) != Some(NodeClass::PerimeterActive) {
            return Err(Error::NotActive(n));
        }
        let mut out: Vec<MacroEdge> = Vec::new();
        self.for_each_contracted(info, n, |to| {
            if !out.iter().any(|e| e.to == to) {
                out.push(MacroEdge {
                    from: n,
                    to,
                    cost: metric_distance(self.conn, n, to),
                    kind: EdgeKind::Contracted,
                });
            }
        });
        Ok(out)
    }

    /// Targets of contracted edges from active `n`; may repeat a target.
    #[inline]
    pub(crate) fn for_each_contracted(&self, info: &RectInfo, n: Cell, mut f: impl FnMut(Cell)) {
        if info.pruned.is_empty() {
            return;
        }
        let Some(i) = info.rect.perimeter_index(n) else {
            return;
        };
        for &comp in info.pruned.links(i) {
            for &a in info.pruned.actives(comp) {
                if a != n {
                    f(a);
                }
            }
        }
    }

    /// Text dump: one `rect <id> <x0> <y0> <w> <h>` line per rectangle, then
    /// `pruned <id> <count>` for every rectangle with pruned nodes.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for r in self.rects() {
            let _ = writeln!(out, "rect {} {} {} {} {}", r.id, r.x0, r.y0, r.w, r.h);
        }
        for info in self.rects.iter().flatten() {
            if info.pruned_count > 0 {
                let _ = writeln!(out, "pruned {} {}", info.rect.id, info.pruned_count);
            }
        }
        out
    }

    fn alloc_id(&mut self) -> u32 {
        match self.free_ids.pop() {
            Some(id) => id,
            None => {
                self.rects.push(None);
                self.rects.len() as u32 - 1
            }
        }
    }

    /// Tiles the free cells inside `bbox` that satisfy `in_region` and are
    /// not yet covered. Returns the new rectangle ids (not yet classified).
    pub(crate) fn tile(
        &mut self,
        map: &GridMap,
        bbox: (u32, u32, u32, u32),
        in_region: impl Fn(usize) -> bool,
    ) -> Vec<u32> {
        let rect_of = &self.rect_of;
        let tiles = tile_cells(map, bbox, |i| rect_of[i] == NONE && in_region(i));
        let mut ids = Vec::with_capacity(tiles.len());
        for (x0, y0, w, h) in tiles {
            let id = self.alloc_id();
            let rect = Rectangle::new(id, x0, y0, w, h);
            for c in rect.cells() {
                let i = self.index(c);
                self.rect_of[i] = id;
            }
            self.rects[id as usize] = Some(RectInfo {
                rect,
                pruned: PrunedComponents::default(),
                pruned_count: 0,
                active_count: 0,
            });
            ids.push(id);
        }
        ids
    }

    /// Drops rectangle `id`, leaving its cells uncovered.
    pub(crate) fn remove_rect(&mut self, id: u32) -> Option<Rectangle> {
        let info = self.rects.get_mut(id as usize)?.take()?;
        for c in info.rect.cells() {
            let i = self.index(c);
            self.rect_of[i] = NONE;
            self.class_of[i] = None;
        }
        self.free_ids.push(id);
        Some(info.rect)
    }

    pub(crate) fn clear_cell(&mut self, c: Cell) {
        let i = self.index(c);
        self.rect_of[i] = NONE;
        self.class_of[i] = None;
    }

    /// Recomputes node classes and pruned components of rectangle `id`.
    pub(crate) fn refresh(&mut self, map: &GridMap, id: u32) {
        let Some(rect) = self.rect(id).copied() else {
            return;
        };
        let (mut pruned, mut active) = (0, 0);
        for c in rect.cells() {
            let class = classify_cell(map, &self.rect_of, &rect, c);
            match class {
                NodeClass::PerimeterPruned => pruned += 1,
                NodeClass::PerimeterActive => active += 1,
                NodeClass::Interior => {}
            }
            let i = self.index(c);
            self.class_of[i] = Some(class);
        }
        let components = if pruned > 0 {
            pruned_components(&rect, self.conn, |c| {
                self.class_of[self.index(c)] == Some(NodeClass::PerimeterPruned)
            })
        } else {
            PrunedComponents::default()
        };
        let info = self.rects[id as usize].as_mut().expect("live rectangle");
        info.pruned = components;
        info.pruned_count = pruned;
        info.active_count = active;
    }

    /// Checks every structural invariant against `map`.
    pub fn validate(&self, map: &GridMap) -> std::result::Result<(), Violation> {
        if (self.width, self.height, self.conn) != (map.width(), map.height(), map.conn()) {
            return Err(Violation::ShapeMismatch);
        }
        let mut owner = vec![NONE; map.len()];
        for info in self.rects.iter().flatten() {
            let r = &info.rect;
            if r.w == 0 || r.h == 0 || r.x1() >= self.width || r.y1() >= self.height {
                return Err(Violation::OutOfBounds(r.id));
            }
            for c in r.cells() {
                let i = map.index(c);
                if !map.is_free(c) {
                    return Err(Violation::CoversBlocked { rect: r.id, cell: c });
                }
                if owner[i] != NONE {
                    return Err(Violation::Overlap {
                        a: owner[i],
                        b: r.id,
                        cell: c,
                    });
                }
                owner[i] = r.id;
            }
        }
        for (i, &own) in owner.iter().enumerate() {
            let c = map.cell(i);
            if map.is_free(c) {
                let id = self.rect_of[i];
                let ok = id != NONE && own == id && self.rect(id).is_some_and(|r| r.contains(c));
                if !ok {
                    return Err(Violation::NotCovered(c));
                }
            } else if self.rect_of[i] != NONE || self.class_of[i].is_some() {
                return Err(Violation::BlockedAssigned(c));
            }
        }
        for info in self.rects.iter().flatten() {
            let r = &info.rect;
            let (mut pruned, mut active) = (0, 0);
            for c in r.cells() {
                let expected = classify_cell(map, &self.rect_of, r, c);
                let found = self.class_of[map.index(c)];
                if found != Some(expected) {
                    return Err(Violation::ClassMismatch {
                        cell: c,
                        expected,
                        found,
                    });
                }
                match expected {
                    NodeClass::PerimeterPruned => pruned += 1,
                    NodeClass::PerimeterActive => active += 1,
                    NodeClass::Interior => {}
                }
            }
            let comps = pruned_components(r, self.conn, |c| {
                self.class_of[map.index(c)] == Some(NodeClass::PerimeterPruned)
            });
            if comps != info.pruned || pruned != info.pruned_count || active != info.active_count {
                return Err(Violation::Components(r.id));
            }
        }
        Ok(())
    }

    /// Demotes every active node to pruned without updating components.
    /// Exists to exercise verification failure paths.
    #[doc(hidden)]
    pub fn corrupt_for_testing(&mut self) {
        for c in self.class_of.iter_mut() {
            if *c == Some(NodeClass::PerimeterActive) {
                *c = Some(NodeClass::PerimeterPruned);
            }
        }
    }

    /// Per-rectangle table keyed by id, for tests that compare snapshots.
    pub fn rect_table(&self) -> HashMap<u32, Rectangle> {
        self.rects().map(|r| (r.id, *r)).collect()
    }
}

/// First invariant violation found by [`Decomposition::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ShapeMismatch,
    OutOfBounds(u32),
    CoversBlocked { rect: u32, cell: Cell },
    Overlap { a: u32, b: u32, cell: Cell },
    NotCovered(Cell),
    BlockedAssigned(Cell),
    ClassMismatch {
        cell: Cell,
        expected: NodeClass,
        found: Option<NodeClass>,
    },
    Components(u32),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ShapeMismatch => write!(f, "decomposition does not match the map shape"),
            Violation::OutOfBounds(id) => write!(f, "rectangle {id} out of bounds"),
            Violation::CoversBlocked { rect, cell } => {
                write!(f, "rectangle {rect} covers blocked cell {cell}")
            }
            Violation::Overlap { a, b, cell } => write!(f, "overlap of rectangles {a} and {b} at {cell}"),
            Violation::NotCovered(c) => write!(f, "cell not covered by its rectangle: {c}"),
            Violation::BlockedAssigned(c) => write!(f, "blocked cell {c} has a rectangle"),
            Violation::ClassMismatch {
                cell,
                expected,
                found,
            } => write!(f, "class of {cell} is {found:?}, expected {expected:?}"),
            Violation::Components(id) => write!(f, "stale pruned components in rectangle {id}"),
        }
    }
}

impl std::error::Error for Violation {}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(r: &[&str], conn: Connectivity) -> GridMap {
        GridMap::from_rows(r, conn).unwrap()
    }

    #[test]
    fn empty_map_is_one_rectangle() {
        let map = GridMap::new(5, 3, Connectivity::Eight);
        let d = decompose(&map);
        assert_eq!(d.rect_count(), 1);
        assert_eq!(d.rects().next().unwrap().area(), 15);
        assert_eq!(d.validate(&map), Ok(()));
        let s = d.stats();
        assert_eq!((s.interior, s.pruned, s.active), (3, 12, 0));
    }

    #[test]
    fn fully_blocked_map_is_empty() {
        let map = rows(&["@@", "@@"], Connectivity::Four);
        let d = decompose(&map);
        assert_eq!(d.rect_count(), 0);
        assert_eq!(d.validate(&map), Ok(()));
    }

    /// 9×9 map: a walled 7×7 room whose right wall has a door at row 4.
    fn walled_room_with_door(conn: Connectivity) -> GridMap {
        let mut r = vec!["@@@@@@@@@".to_string()];
        for y in 1..8 {
            r.push(format!("@.......{}", if y == 4 { '.' } else { '@' }));
        }
        r.push("@@@@@@@@@".to_string());
        let refs: Vec<&str> = r.iter().map(|s| s.as_str()).collect();
        GridMap::from_rows(&refs, conn).unwrap()
    }

    #[test]
    fn single_door_room_prunes_all_but_door_neighbours() {
        for conn in [Connectivity::Four, Connectivity::Eight] {
            let map = walled_room_with_door(conn);
            let d = decompose(&map);
            d.validate(&map).unwrap();
            let room = *d.rect_containing(Cell::new(1, 1)).unwrap();
            assert_eq!((room.x0, room.y0, room.w, room.h), (1, 1, 7, 7));
            let door = Cell::new(8, 4);
            for c in room.perimeter() {
                let adjacent = map.neighbours(c).unwrap().iter().any(|(n, _)| *n == door);
                let expected = if adjacent {
                    NodeClass::PerimeterActive
                } else {
                    NodeClass::PerimeterPruned
                };
                assert_eq!(d.class_of(c), Some(expected), "{conn} {c}");
            }
            let active = room.perimeter().filter(|&c| d.class_of(c) == Some(NodeClass::PerimeterActive)).count();
            // corner cutting keeps the diagonals through the door closed
            assert_eq!(active, 1);
        }
    }

    #[test]
    fn walled_room_without_doors_is_fully_pruned() {
        let map = rows(&["@@@@@", "@...@", "@...@", "@@@@@"], Connectivity::Eight);
        let d = decompose(&map);
        assert_eq!(d.rect_count(), 1);
        let s = d.stats();
        assert_eq!((s.pruned, s.active), (6, 0));
    }

    #[test]
    fn full_seam_is_active() {
        let map = GridMap::new(6, 3, Connectivity::Four);
        let tiling = [Rectangle::new(0, 0, 0, 3, 3), Rectangle::new(1, 3, 0, 3, 3)];
        let d = Decomposition::from_tiling(&map, &tiling).unwrap();
        d.validate(&map).unwrap();
        for y in 0..3 {
            assert_eq!(d.class_of(Cell::new(2, y)), Some(NodeClass::PerimeterActive));
            assert_eq!(d.class_of(Cell::new(3, y)), Some(NodeClass::PerimeterActive));
            assert_eq!(d.class_of(Cell::new(0, y)), Some(NodeClass::PerimeterPruned));
        }
        assert_eq!(d.class_of(Cell::new(1, 1)), Some(NodeClass::Interior));
    }

    #[test]
    fn diagonal_corner_contact_counts_in_eight_mode_only() {
        // two rectangles touching only at a corner through free flanks
        let map = GridMap::new(4, 4, Connectivity::Eight);
        let tiling = [
            Rectangle::new(0, 0, 0, 2, 2),
            Rectangle::new(1, 2, 0, 2, 2),
            Rectangle::new(2, 0, 2, 2, 2),
            Rectangle::new(3, 2, 2, 2, 2),
        ];
        let d = Decomposition::from_tiling(&map, &tiling).unwrap();
        assert_eq!(d.class_of(Cell::new(0, 0)), Some(NodeClass::PerimeterPruned));
        assert_eq!(d.class_of(Cell::new(1, 1)), Some(NodeClass::PerimeterActive));
    }

    #[test]
    fn thin_rectangles_have_no_interior() {
        let map = rows(&["@@@@@@", "@....@", "@@@@@@"], Connectivity::Eight);
        let d = decompose(&map);
        assert_eq!(d.stats().interior, 0);
        let map = rows(&["@@@@", "@..@", "@..@", "@..@", "@@@@"], Connectivity::Eight);
        assert_eq!(decompose(&map).stats().interior, 0);
    }

    #[test]
    fn corrupted_rect_of_is_reported() {
        let map = rows(&["...@...", "...@...", "...@..."], Connectivity::Eight);
        let mut d = decompose(&map);
        assert_eq!(d.rect_count(), 2);
        let c = Cell::new(0, 0);
        let other = d.rect_id(Cell::new(6, 0)).unwrap();
        let i = map.index(c);
        d.rect_of[i] = other;
        let v = d.validate(&map).unwrap_err();
        assert!(v.to_string().contains("cell not covered by its rectangle"), "{v}");
    }

    #[test]
    fn injected_overlap_is_reported() {
        let map = GridMap::new(4, 4, Connectivity::Eight);
        let mut d = decompose(&map);
        d.rects.push(Some(RectInfo {
            rect: Rectangle::new(1, 1, 1, 2, 2),
            pruned: PrunedComponents::default(),
            pruned_count: 0,
            active_count: 0,
        }));
        let v = d.validate(&map).unwrap_err();
        assert!(v.to_string().contains("overlap"), "{v}");
    }

    #[test]
    fn stale_class_is_reported() {
        let map = rows(&["....", ".@..", "...."], Connectivity::Eight);
        let mut d = decompose(&map);
        d.corrupt_for_testing();
        assert!(matches!(d.validate(&map), Err(Violation::ClassMismatch { .. })));
    }

    #[test]
    fn two_door_room_contracts_across() {
        // 7x7 room, doors in the left and right walls at row 3 (room coords)
        let mut grid = vec![vec![b'@'; 11]; 9];
        for row in grid.iter_mut().take(8).skip(1) {
            for c in row.iter_mut().take(9).skip(2) {
                *c = b'.';
            }
        }
        grid[4][0] = b'.';
        grid[4][1] = b'.';
        grid[4][9] = b'.';
        grid[4][10] = b'.';
        let rows_s: Vec<String> = grid.into_iter().map(|r| String::from_utf8(r).unwrap()).collect();
        let refs: Vec<&str> = rows_s.iter().map(|s| s.as_str()).collect();
        let map = GridMap::from_rows(&refs, Connectivity::Eight).unwrap();
        let d = decompose(&map);
        d.validate(&map).unwrap();
        let room_id = d.rect_id(Cell::new(5, 4)).unwrap();
        let room = *d.rect(room_id).unwrap();
        assert_eq!((room.w, room.h), (7, 7));
        let left: Vec<Cell> = room
            .perimeter()
            .filter(|&c| c.x == 2 && d.class_of(c) == Some(NodeClass::PerimeterActive))
            .collect();
        let right: Vec<Cell> = room
            .perimeter()
            .filter(|&c| c.x == 8 && d.class_of(c) == Some(NodeClass::PerimeterActive))
            .collect();
        assert_eq!(left, vec![Cell::new(2, 4)]);
        assert_eq!(right, vec![Cell::new(8, 4)]);
        assert_eq!(d.pruned_components(room_id).len(), 1);
        let e = d.contracted_active_edges(room_id, Cell::new(2, 4)).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].to, Cell::new(8, 4));
        assert_eq!(e[0].cost, 6.0);
        assert!(d.contracted_active_edges(room_id, Cell::new(2, 2)).is_err());
    }

    #[test]
    fn no_pruned_nodes_means_no_contracted_edges() {
        let map = GridMap::new(6, 2, Connectivity::Eight);
        let d = Decomposition::from_tiling(
            &map,
            &[Rectangle::new(0, 0, 0, 3, 2), Rectangle::new(1, 3, 0, 3, 2)],
        )
        .unwrap();
        // only the x = 2 column touches the seam
        assert_eq!(d.pruned_count(0), 4);
        let e = d.contracted_active_edges(0, Cell::new(2, 0)).unwrap();
        assert!(e.iter().all(|e| e.kind == EdgeKind::Contracted));
        let map = GridMap::new(2, 2, Connectivity::Eight);
        let d = Decomposition::from_tiling(
            &map,
            &[
                Rectangle::new(0, 0, 0, 1, 2),
                Rectangle::new(1, 1, 0, 1, 2),
            ],
        )
        .unwrap();
        assert_eq!(d.pruned_count(0), 0);
        assert!(d.contracted_active_edges(0, Cell::new(0, 0)).unwrap().is_empty());
    }

    #[test]
    fn dump_format() {
        let map = rows(&["..@", "..@"], Connectivity::Eight);
        let d = decompose(&map);
        assert_eq!(d.dump(), "rect 0 0 0 2 2\npruned 0 4\n");
    }

    #[test]
    fn decompose_is_deterministic() {
        let map = rows(&["..@....", "....@..", "@......", "...@..."], Connectivity::Eight);
        assert_eq!(decompose(&map), decompose(&map));
    }
}
