//! Successor generation over the symmetry-reduced graph.
//!
//! A node's successors are its grid edges into other rectangles, the
//! constructive macro-edges of its own rectangle restricted to active
//! targets, edges replacing contracted pruned nodes, and any temporary edges
//! of inserted start/goal nodes.

mod clique;
pub(crate) mod edges;

use std::collections::HashMap;

pub use clique::{clique_oracle, CliqueEdge, CLIQUE_PERIMETER_LIMIT};
pub use edges::{
    fan_across, fan_neighbours, fan_neighbours_4, intra_neighbours, orthogonal_neighbours,
    same_side_neighbours, EdgeKind, MacroEdge,
};

use crate::decomposition::{Decomposition, NodeClass, RectInfo};
use crate::error::{Error, Result};
use crate::grid::{metric_distance, Cell, Connectivity, Cost, GridMap};
use crate::rect::Side;
use crate::search::{Path, SearchOptions, SearchStats};
use edges::{distance_to_side, for_each_intra, for_each_on_side, is_secondary};

/// Successors of one node, split for online pruning.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuccessorSet {
    pub primary: Vec<MacroEdge>,
    /// Opposite-side (non-corner) targets; empty when they were filtered.
    pub secondary: Vec<MacroEdge>,
}

impl SuccessorSet {
    pub fn len(&self) -> usize {
        self.primary.len() + self.secondary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &MacroEdge> {
        self.primary.iter().chain(self.secondary.iter())
    }

    pub fn targets(&self) -> Vec<Cell> {
        let mut t: Vec<Cell> = self.iter().map(|e| e.to).collect();
        t.sort();
        t
    }

    fn add(&mut self, e: MacroEdge, secondary: bool) {
        for list in [&mut self.primary, &mut self.secondary] {
            if let Some(old) = list.iter_mut().find(|o| o.to == e.to) {
                if e.cost < old.cost {
                    *old = e;
                }
                return;
            }
        }
        if secondary {
            self.secondary.push(e);
        } else {
            self.primary.push(e);
        }
    }
}

/// A start or goal node temporarily connected to its rectangle's perimeter.
#[derive(Debug, Clone, PartialEq)]
pub struct InsertedNode {
    pub cell: Cell,
    pub rect: u32,
    pub edges: Vec<MacroEdge>,
    targets: HashMap<Cell, Cost>,
}

/// Search-local edges for up to two inserted endpoints; the decomposition
/// itself is never modified.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InsertionOverlay {
    nodes: Vec<InsertedNode>,
}

impl InsertionOverlay {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `c` if it is not already an expandable perimeter node.
    pub fn insert(&mut self, map: &GridMap, decomp: &Decomposition, c: Cell, opts: SearchOptions) -> Result<()> {
        if self.nodes.iter().any(|n| n.cell == c) {
            return Ok(());
        }
        if let Some(node) = insert_endpoint(map, decomp, c, opts)? {
            self.nodes.push(node);
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[InsertedNode] {
        &self.nodes
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.nodes.iter().any(|n| n.cell == c)
    }

    /// Overlay edges leaving `n`, in either direction of an inserted edge.
    #[inline]
    pub fn for_each_edge_from(&self, n: Cell, mut f: impl FnMut(&MacroEdge)) {
        for node in &self.nodes {
            if node.cell == n {
                node.edges.iter().for_each(&mut f);
            } else if let Some(&cost) = node.targets.get(&n) {
                f(&MacroEdge {
                    from: n,
                    to: node.cell,
                    cost,
                    kind: EdgeKind::Insertion,
                });
            }
        }
    }
}

#[inline]
fn is_active(class: Option<NodeClass>, opts: SearchOptions) -> bool {
    match class {
        Some(NodeClass::PerimeterActive) => true,
        Some(NodeClass::PerimeterPruned) => !opts.perimeter_reduction,
        _ => false,
    }
}

#[inline]
fn has_pruned(info: &RectInfo, opts: SearchOptions) -> bool {
    opts.perimeter_reduction && info.pruned_count > 0
}

/// Edges connecting `c` to its rectangle's perimeter, or `None` when `c` is
/// already an expandable perimeter node.
///
/// In a rectangle without pruned nodes `c` gets four fans, one per side
/// (8-connected) or the four orthogonal projections (4-connected). In a
/// rectangle with pruned nodes it is linked to every active node directly.
pub fn insert_endpoint(
    map: &GridMap,
    decomp: &Decomposition,
    c: Cell,
    opts: SearchOptions,
) -> Result<Option<InsertedNode>> {
    if !map.contains(c) {
        return Err(Error::OutOfBounds(c));
    }
    if !map.is_free(c) {
        return Err(Error::Blocked(c));
    }
    if is_active(decomp.class_of(c), opts) {
        return Ok(None);
    }
    let rid = decomp.rect_id(c).ok_or(Error::Blocked(c))?;
    let info = decomp.info(rid).expect("live rectangle");
    let rect = info.rect;
    let conn = decomp.conn();

    let mut targets: Vec<Cell> = Vec::new();
    if has_pruned(info, opts) {
        targets.extend(
            rect.perimeter()
                .filter(|&p| p != c && decomp.class_of(p) == Some(NodeClass::PerimeterActive)),
        );
    } else {
        for side in Side::ALL {
            let spread = match conn {
                Connectivity::Eight => distance_to_side(&rect, c, side),
                Connectivity::Four => 0,
            };
            for_each_on_side(&rect, c, side, spread, |t| targets.push(t));
        }
    }
    let mut edges: Vec<MacroEdge> = Vec::with_capacity(targets.len());
    let mut map_t = HashMap::with_capacity(targets.len());
    for t in targets {
        if map_t.contains_key(&t) {
            continue;
        }
        let cost = metric_distance(conn, c, t);
        map_t.insert(t, cost);
        edges.push(MacroEdge {
            from: c,
            to: t,
            cost,
            kind: EdgeKind::Insertion,
        });
    }
    Ok(Some(InsertedNode {
        cell: c,
        rect: rid,
        edges,
        targets: map_t,
    }))
}

/// Calls `f(edge, is_secondary)` for every successor of `n`. Secondary edges
/// are skipped when online pruning is on and `parent_rect` is `n`'s own
/// rectangle. Returns an error when `n` cannot be expanded.
#[inline]
pub(crate) fn for_each_successor(
    map: &GridMap,
    decomp: &Decomposition,
    overlay: &InsertionOverlay,
    n: Cell,
    parent_rect: Option<u32>,
    opts: SearchOptions,
    mut f: impl FnMut(MacroEdge, bool),
) -> Result<()> {
    let rid = decomp.rect_id(n).ok_or(Error::Blocked(n))?;
    let info = decomp.info(rid).expect("live rectangle");
    let rect = &info.rect;

    let inserted = overlay.contains(n);
    overlay.for_each_edge_from(n, |e| f(*e, false));

    if !is_active(decomp.class_of(n), opts) {
        return if inserted {
            Ok(())
        } else {
            Err(Error::NotExpandable(n))
        };
    }

    let rect_of = |c: Cell| decomp.rect_id(c);
    map.for_each_neighbour(n, |t, cost| {
        if rect_of(t) != Some(rid) {
            f(
                MacroEdge {
                    from: n,
                    to: t,
                    cost,
                    kind: EdgeKind::Grid,
                },
                false,
            );
        }
    });

    let conn = decomp.conn();
    let sides = rect.sides_of(n);
    let drop_secondary = opts.online_pruning && parent_rect == Some(rid);
    let mut emit = |t: Cell, kind: EdgeKind| {
        let secondary = is_secondary(rect, sides, t);
        if secondary && drop_secondary {
            return;
        }
        f(
            MacroEdge {
                from: n,
                to: t,
                cost: metric_distance(conn, n, t),
                kind,
            },
            secondary,
        );
    };
    for_each_intra(rect, n, conn, |t, kind| {
        if is_active(decomp.class_of(t), opts) {
            emit(t, kind);
        }
    });
    if opts.perimeter_reduction {
        decomp.for_each_contracted(info, n, |t| emit(t, EdgeKind::Contracted));
    }
    Ok(())
}

/// Successors of `n` over the reduced graph, deduplicated by target.
pub fn successors(
    map: &GridMap,
    decomp: &Decomposition,
    overlay: &InsertionOverlay,
    n: Cell,
    parent_rect: Option<u32>,
    opts: SearchOptions,
) -> Result<SuccessorSet> {
    if !map.is_free(n) {
        return Err(Error::Blocked(n));
    }
    let mut set = SuccessorSet::default();
    for_each_successor(map, decomp, overlay, n, parent_rect, opts, |e, sec| set.add(e, sec))?;
    Ok(set)
}

/// Answers a query whose endpoints share a rectangle without search.
pub fn same_rectangle_shortcut(decomp: &Decomposition, s: Cell, g: Cell) -> Option<Path> {
    let rs = decomp.rect_id(s)?;
    if decomp.rect_id(g)? != rs {
        return None;
    }
    let nodes = if s == g { vec![s] } else { vec![s, g] };
    Some(Path {
        nodes,
        cost: metric_distance(decomp.conn(), s, g),
        stats: SearchStats::default(),
    })
}
