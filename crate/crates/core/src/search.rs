//! A* over the reduced graph and over the raw grid, Dijkstra distance
//! fields, and expansion of macro paths into grid paths.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::decomposition::Decomposition;
use crate::error::{Error, Result};
use crate::grid::{metric_distance, Cell, Connectivity, Cost, GridMap, SQRT2};
use crate::macro_graph::{for_each_successor, same_rectangle_shortcut, InsertionOverlay};

const NONE: u32 = u32::MAX;

/// Flags for [`astar_rsr`]. Both reductions are on by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SearchOptions {
    /// Skip opposite-side successors of nodes reached from inside their own
    /// rectangle.
    pub online_pruning: bool,
    /// Contract perimeter nodes that have no grid edge leaving the rectangle.
    pub perimeter_reduction: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            online_pruning: true,
            perimeter_reduction: true,
        }
    }
}

impl SearchOptions {
    /// The four flag combinations.
    pub fn matrix() -> [SearchOptions; 4] {
        let o = |perimeter_reduction, online_pruning| SearchOptions {
            online_pruning,
            perimeter_reduction,
        };
        [o(true, true), o(true, false), o(false, true), o(false, false)]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Nodes removed from the open list and expanded.
    pub expanded: u64,
    /// Successor relaxations that improved a g-value.
    pub generated: u64,
    pub elapsed: Duration,
}

/// A path as a list of waypoints. Consecutive waypoints of an
/// [`astar_rsr`] path are joined by macro-edges; use [`refine_path`] to get
/// single grid steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub nodes: Vec<Cell>,
    pub cost: Cost,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OpenEntry {
    f: Cost,
    g: Cost,
    node: u32,
}

impl Eq for OpenEntry {}

impl Ord for OpenEntry {
    // BinaryHeap pops the greatest: lowest f, then highest g, then lowest index.
    fn cmp(&self, o: &Self) -> Ordering {
        o.f.total_cmp(&self.f)
            .then(self.g.total_cmp(&o.g))
            .then(o.node.cmp(&self.node))
    }
}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Reusable node table for repeated searches over maps of similar size.
/// Entries are invalidated by bumping an epoch, not by clearing.
#[derive(Debug, Default)]
pub struct SearchContext {
    g: Vec<Cost>,
    parent: Vec<u32>,
    tag: Vec<u32>,
    seen: Vec<u32>,
    closed: Vec<u32>,
    epoch: u32,
    open: BinaryHeap<OpenEntry>,
    scratch: Vec<(u32, Cost)>,
}

struct Outcome {
    goal_reached: bool,
    expanded: u64,
    generated: u64,
}

impl SearchContext {
    pub fn new() -> Self {
        Self::default()
    }

    fn begin(&mut self, n: usize) {
        if self.g.len() < n {
            self.g.resize(n, 0.0);
            self.parent.resize(n, NONE);
            self.tag.resize(n, NONE);
            self.seen.resize(n, 0);
            self.closed.resize(n, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.fill(0);
            self.closed.fill(0);
            self.epoch = 1;
        }
        self.open.clear();
    }

    /// Best-first search from `start`. `expand(node, tag, out)` pushes
    /// `(successor, edge cost)` pairs and returns the tag stored with
    /// successors it improves. Stops when `goal` is closed.
    fn run(
        &mut self,
        n: usize,
        start: u32,
        goal: Option<u32>,
        h: impl Fn(u32) -> Cost,
        mut expand: impl FnMut(u32, u32, &mut Vec<(u32, Cost)>) -> Result<u32>,
    ) -> Result<Outcome> {
        self.begin(n);
        let e = self.epoch;
        let s = start as usize;
        self.g[s] = 0.0;
        self.parent[s] = NONE;
        self.tag[s] = NONE;
        self.seen[s] = e;
        self.open.push(OpenEntry {
            f: h(start),
            g: 0.0,
            node: start,
        });
        let (mut expanded, mut generated) = (0u64, 0u64);
        let mut scratch = std::mem::take(&mut self.scratch);
        let mut goal_reached = false;
        while let Some(top) = self.open.pop() {
            let u = top.node as usize;
            if self.closed[u] == e || top.g > self.g[u] {
                continue;
            }
            self.closed[u] = e;
            if Some(top.node) == goal {
                goal_reached = true;
                break;
            }
            expanded += 1;
            let gu = self.g[u];
            let hu = h(top.node);
            scratch.clear();
            let child_tag = match expand(top.node, self.tag[u], &mut scratch) {
                Ok(t) => t,
                Err(err) => {
                    self.scratch = scratch;
                    return Err(err);
                }
            };
            for &(v, c) in &scratch {
                let vi = v as usize;
                let ng = gu + c;
                let hv = h(v);
                debug_assert!(hu <= c + hv + 1e-9, "inconsistent heuristic");
                if self.closed[vi] == e {
                    debug_assert!(ng + 1e-9 >= self.g[vi], "closed node improved");
                    continue;
                }
                if self.seen[vi] != e || ng < self.g[vi] {
                    self.seen[vi] = e;
                    self.g[vi] = ng;
                    self.parent[vi] = top.node;
                    self.tag[vi] = child_tag;
                    self.open.push(OpenEntry {
                        f: ng + hv,
                        g: ng,
                        node: v,
                    });
                    generated += 1;
                }
            }
        }
        self.scratch = scratch;
        Ok(Outcome {
            goal_reached,
            expanded,
            generated,
        })
    }

    fn trace(&self, map: &GridMap, goal: u32) -> Vec<Cell> {
        let mut nodes = Vec::new();
        let mut v = goal;
        while v != NONE {
            nodes.push(map.cell(v as usize));
            v = self.parent[v as usize];
        }
        nodes.reverse();
        nodes
    }
}

fn check_endpoint(map: &GridMap, c: Cell) -> Result<()> {
    if !map.contains(c) {
        return Err(Error::OutOfBounds(c));
    }
    if !map.is_free(c) {
        return Err(Error::Blocked(c));
    }
    Ok(())
}

/// Optimal path from `start` to `goal` over the symmetry-reduced graph.
/// `Ok(None)` when the goal is unreachable.
pub fn astar_rsr(
    map: &GridMap,
    decomp: &Decomposition,
    start: Cell,
    goal: Cell,
    opts: SearchOptions,
) -> Result<Option<Path>> {
    astar_rsr_with(&mut SearchContext::new(), map, decomp, start, goal, opts)
}

pub fn astar_rsr_with(
    ctx: &mut SearchContext,
    map: &GridMap,
    decomp: &Decomposition,
    start: Cell,
    goal: Cell,
    opts: SearchOptions,
) -> Result<Option<Path>> {
    check_endpoint(map, start)?;
    check_endpoint(map, goal)?;
    if decomp.conn() != map.conn() || decomp.rect_id(start).is_none() || decomp.rect_id(goal).is_none() {
        return Err(Error::Invalid("decomposition does not match the map".into()));
    }
    let t0 = Instant::now();
    if let Some(mut p) = same_rectangle_shortcut(decomp, start, goal) {
        p.stats.elapsed = t0.elapsed();
        return Ok(Some(p));
    }
    let mut overlay = InsertionOverlay::new();
    overlay.insert(map, decomp, start, opts)?;
    overlay.insert(map, decomp, goal, opts)?;

    let conn = map.conn();
    let h = |v: u32| metric_distance(conn, map.cell(v as usize), goal);
    let out = ctx.run(
        map.len(),
        map.index(start) as u32,
        Some(map.index(goal) as u32),
        h,
        |v, parent_rect, out| {
            let n = map.cell(v as usize);
            let pr = (parent_rect != NONE).then_some(parent_rect);
            for_each_successor(map, decomp, &overlay, n, pr, opts, |e, _| {
                out.push((map.index(e.to) as u32, e.cost))
            })?;
            Ok(decomp.rect_id(n).unwrap_or(NONE))
        },
    )?;
    Ok(finish(ctx, map, goal, out, t0))
}

fn finish(ctx: &SearchContext, map: &GridMap, goal: Cell, out: Outcome, t0: Instant) -> Option<Path> {
    let elapsed = t0.elapsed();
    if !out.goal_reached {
        return None;
    }
    let gi = map.index(goal);
    Some(Path {
        nodes: ctx.trace(map, gi as u32),
        cost: ctx.g[gi],
        stats: SearchStats {
            expanded: out.expanded,
            generated: out.generated,
            elapsed,
        },
    })
}

/// Plain A* over every grid cell with the octile or Manhattan heuristic.
pub fn astar_plain(map: &GridMap, start: Cell, goal: Cell) -> Result<Option<Path>> {
    astar_plain_with(&mut SearchContext::new(), map, start, goal)
}

pub fn astar_plain_with(ctx: &mut SearchContext, map: &GridMap, start: Cell, goal: Cell) -> Result<Option<Path>> {
    check_endpoint(map, start)?;
    check_endpoint(map, goal)?;
    let t0 = Instant::now();
    let conn = map.conn();
    let h = |v: u32| metric_distance(conn, map.cell(v as usize), goal);
    let out = ctx.run(
        map.len(),
        map.index(start) as u32,
        Some(map.index(goal) as u32),
        h,
        |v, _, out| {
            map.for_each_neighbour(map.cell(v as usize), |t, c| out.push((map.index(t) as u32, c)));
            Ok(NONE)
        },
    )?;
    Ok(finish(ctx, map, goal, out, t0))
}

/// Exact grid distances from one source.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    width: u32,
    height: u32,
    dist: Vec<Cost>,
}

impl DistanceField {
    /// `None` for unreachable, blocked or out-of-bounds cells.
    pub fn get(&self, c: Cell) -> Option<Cost> {
        if c.x >= self.width || c.y >= self.height {
            return None;
        }
        let d = self.dist[(c.y * self.width + c.x) as usize];
        d.is_finite().then_some(d)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct DijkstraEntry(Cost, usize);

impl Eq for DijkstraEntry {}

impl Ord for DijkstraEntry {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

impl PartialOrd for DijkstraEntry {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Single-source Dijkstra over the raw grid.
pub fn dijkstra_plain(map: &GridMap, source: Cell) -> Result<DistanceField> {
    check_endpoint(map, source)?;
    let mut dist = vec![Cost::INFINITY; map.len()];
    let mut heap = BinaryHeap::new();
    let s = map.index(source);
    dist[s] = 0.0;
    heap.push(DijkstraEntry(0.0, s));
    while let Some(DijkstraEntry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        map.for_each_neighbour(map.cell(u), |t, c| {
            let v = map.index(t);
            if d + c < dist[v] {
                dist[v] = d + c;
                heap.push(DijkstraEntry(d + c, v));
            }
        });
    }
    Ok(DistanceField {
        width: map.width(),
        height: map.height(),
        dist,
    })
}

/// Replaces each macro step of `path` with grid steps: diagonal moves first,
/// then straight ones (8-connected), or horizontal then vertical
/// (4-connected). Fails if a produced step is not a legal grid move.
pub fn refine_path(path: &Path, map: &GridMap) -> Result<Path> {
    let Some(&first) = path.nodes.first() else {
        return Ok(path.clone());
    };
    let mut nodes = vec![first];
    let mut cost = 0.0;
    for w in path.nodes.windows(2) {
        let (mut cur, to) = (w[0], w[1]);
        while cur != to {
            let sx = (to.x as i64 - cur.x as i64).signum();
            let sy = (to.y as i64 - cur.y as i64).signum();
            let (dx, dy) = match map.conn() {
                Connectivity::Eight => (sx, sy),
                Connectivity::Four if sx != 0 => (sx, 0),
                Connectivity::Four => (0, sy),
            };
            let next = Cell::new((cur.x as i64 + dx) as u32, (cur.y as i64 + dy) as u32);
            let mut legal = false;
            map.for_each_neighbour(cur, |t, _| legal |= t == next);
            if !legal {
                return Err(Error::Invalid(format!("illegal step {cur} -> {next}")));
            }
            cost += if dx != 0 && dy != 0 { SQRT2 } else { 1.0 };
            nodes.push(next);
            cur = next;
        }
    }
    Ok(Path {
        nodes,
        cost,
        stats: path.stats,
    })
}
