//! Constructive macro-edges inside one empty rectangle.
//!
//! Edges are never stored: every rule below is a constant-time function of
//! the rectangle geometry and the node position.

use crate::error::{Error, Result};
use crate::grid::{metric_distance, Cell, Connectivity, Cost};
use crate::rect::{Rectangle, Side, Sides};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    SameSide,
    Orthogonal,
    Fan,
    Contracted,
    Insertion,
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroEdge {
    pub from: Cell,
    pub to: Cell,
    pub cost: Cost,
    pub kind: EdgeKind,
}

/// Sides of `n` with duplicates removed for 1-thick rectangles (where the
/// top row is also the bottom row, or the left column the right one).
#[inline]
pub(crate) fn distinct_sides(r: &Rectangle, n: Cell) -> impl Iterator<Item = Side> {
    let (h1, w1) = (r.h == 1, r.w == 1);
    r.sides_of(n)
        .iter()
        .filter(move |&s| !(s == Side::Bottom && h1) && !(s == Side::Right && w1))
}

fn perimeter_sides(r: &Rectangle, n: Cell) -> Result<Sides> {
    let s = r.sides_of(n);
    if s.is_empty() {
        Err(Error::NotPerimeter { cell: n, rect: r.id })
    } else {
        Ok(s)
    }
}

/// Adjacent cells along each side `n` lies on.
#[inline]
pub(crate) fn for_each_same_side(r: &Rectangle, n: Cell, mut f: impl FnMut(Cell)) {
    for s in distinct_sides(r, n) {
        if s.is_horizontal() {
            if n.x > r.x0 {
                f(Cell::new(n.x - 1, n.y));
            }
            if n.x < r.x1() {
                f(Cell::new(n.x + 1, n.y));
            }
        } else {
            if n.y > r.y0 {
                f(Cell::new(n.x, n.y - 1));
            }
            if n.y < r.y1() {
                f(Cell::new(n.x, n.y + 1));
            }
        }
    }
}

/// Cells of an orthogonal side reached from `n` by a pure 45° diagonal.
#[inline]
pub(crate) fn for_each_orthogonal(r: &Rectangle, n: Cell, mut f: impl FnMut(Cell)) {
    let (x0, y0, x1, y1) = (r.x0, r.y0, r.x1(), r.y1());
    for s in distinct_sides(r, n) {
        match s {
            Side::Top | Side::Bottom => {
                let down = s == Side::Top;
                let step = |k: u32| if down { n.y + k } else { n.y - k };
                let room = r.h - 1;
                let kl = n.x - x0;
                if kl > 0 && kl <= room {
                    f(Cell::new(x0, step(kl)));
                }
                let kr = x1 - n.x;
                if kr > 0 && kr <= room {
                    f(Cell::new(x1, step(kr)));
                }
            }
            Side::Left | Side::Right => {
                let right = s == Side::Left;
                let step = |k: u32| if right { n.x + k } else { n.x - k };
                let room = r.w - 1;
                let kt = n.y - y0;
                if kt > 0 && kt <= room {
                    f(Cell::new(step(kt), y0));
                }
                let kb = y1 - n.y;
                if kb > 0 && kb <= room {
                    f(Cell::new(step(kb), y1));
                }
            }
        }
    }
}

/// Cells of `side` within `spread` of the orthogonal projection of `from`,
/// clipped to the rectangle, nearest first and then alternating outward.
/// `from` itself is skipped.
#[inline]
pub(crate) fn for_each_on_side(r: &Rectangle, from: Cell, side: Side, spread: u32, mut f: impl FnMut(Cell)) {
    let (lo, hi, centre) = if side.is_horizontal() {
        (r.x0, r.x1(), from.x)
    } else {
        (r.y0, r.y1(), from.y)
    };
    let line = match side {
        Side::Top => r.y0,
        Side::Bottom => r.y1(),
        Side::Left => r.x0,
        Side::Right => r.x1(),
    };
    let at = |v: u32| {
        if side.is_horizontal() {
            Cell::new(v, line)
        } else {
            Cell::new(line, v)
        }
    };
    let mut emit = |c: Cell| {
        if c != from {
            f(c)
        }
    };
    emit(at(centre));
    for k in 1..=spread {
        let (left_ok, right_ok) = (centre >= lo + k, centre + k <= hi);
        if !left_ok && !right_ok {
            break;
        }
        if left_ok {
            emit(at(centre - k));
        }
        if right_ok {
            emit(at(centre + k));
        }
    }
}

/// Distance in cells from `c` to the line of `side`.
#[inline]
pub(crate) fn distance_to_side(r: &Rectangle, c: Cell, side: Side) -> u32 {
    match side {
        Side::Top => c.y - r.y0,
        Side::Bottom => r.y1() - c.y,
        Side::Left => c.x - r.x0,
        Side::Right => r.x1() - c.x,
    }
}

/// The fan of a node lying on `side`: cells of the opposite side no further
/// along than the distance across, i.e. up to the 45° diagonals or the
/// corners, whichever comes first.
#[inline]
pub(crate) fn for_each_fan_across(r: &Rectangle, n: Cell, side: Side, f: impl FnMut(Cell)) {
    let d = r.thickness(side);
    if d > 0 {
        for_each_on_side(r, n, side.opposite(), d, f);
    }
}

/// The single closest cell on the opposite side (4-connected rule).
#[inline]
pub(crate) fn for_each_opposite(r: &Rectangle, n: Cell, side: Side, f: impl FnMut(Cell)) {
    if r.thickness(side) > 0 {
        for_each_on_side(r, n, side.opposite(), 0, f);
    }
}

/// Every constructive macro-edge target of perimeter node `n` under `conn`.
#[inline]
pub(crate) fn for_each_intra(r: &Rectangle, n: Cell, conn: Connectivity, mut f: impl FnMut(Cell, EdgeKind)) {
    for_each_same_side(r, n, |c| f(c, EdgeKind::SameSide));
    match conn {
        Connectivity::Eight => {
            for_each_orthogonal(r, n, |c| f(c, EdgeKind::Orthogonal));
            for s in distinct_sides(r, n) {
                for_each_fan_across(r, n, s, |c| f(c, EdgeKind::Fan));
            }
        }
        Connectivity::Four => {
            for s in distinct_sides(r, n) {
                for_each_opposite(r, n, s, |c| f(c, EdgeKind::Fan));
            }
        }
    }
}

/// Whether `target` is a secondary neighbour of `n`: `n` lies on exactly one
/// side and `target` lies only on the side opposite to it.
#[inline]
pub(crate) fn is_secondary(r: &Rectangle, n_sides: Sides, target: Cell) -> bool {
    match n_sides.single() {
        Some(s) => r.sides_of(target).single() == Some(s.opposite()),
        None => false,
    }
}

fn edges(from: Cell, kind: EdgeKind, conn: Connectivity, targets: Vec<Cell>) -> Vec<MacroEdge> {
    let mut out: Vec<MacroEdge> = Vec::with_capacity(targets.len());
    for to in targets {
        if out.iter().any(|e| e.to == to) {
            continue;
        }
        out.push(MacroEdge {
            from,
            to,
            cost: metric_distance(conn, from, to),
            kind,
        });
    }
    out
}

/// Perimeter neighbours along the side(s) of `n`, at cost 1.
pub fn same_side_neighbours(r: &Rectangle, n: Cell) -> Result<Vec<MacroEdge>> {
    perimeter_sides(r, n)?;
    let mut t = Vec::new();
    for_each_same_side(r, n, |c| t.push(c));
    Ok(edges(n, EdgeKind::SameSide, Connectivity::Four, t))
}

/// 45° diagonal hits on the sides orthogonal to the side(s) of `n`
/// (8-connected maps only).
pub fn orthogonal_neighbours(r: &Rectangle, n: Cell) -> Result<Vec<MacroEdge>> {
    perimeter_sides(r, n)?;
    let mut t = Vec::new();
    for_each_orthogonal(r, n, |c| t.push(c));
    Ok(edges(n, EdgeKind::Orthogonal, Connectivity::Eight, t))
}

/// The fans of `n` towards the side opposite each side it lies on (a corner
/// has two fans).
pub fn fan_neighbours(r: &Rectangle, n: Cell) -> Result<Vec<MacroEdge>> {
    perimeter_sides(r, n)?;
    let mut t = Vec::new();
    for s in distinct_sides(r, n) {
        for_each_fan_across(r, n, s, |c| t.push(c));
    }
    Ok(edges(n, EdgeKind::Fan, Connectivity::Eight, t))
}

/// The fan of `n` seen as a node of `side`.
pub fn fan_across(r: &Rectangle, n: Cell, side: Side) -> Result<Vec<MacroEdge>> {
    if !perimeter_sides(r, n)?.contains(side) {
        return Err(Error::NotPerimeter { cell: n, rect: r.id });
    }
    let mut t = Vec::new();
    for_each_fan_across(r, n, side, |c| t.push(c));
    Ok(edges(n, EdgeKind::Fan, Connectivity::Eight, t))
}

/// 4-connected fan: the directly opposite cell across each side of `n`.
pub fn fan_neighbours_4(r: &Rectangle, n: Cell) -> Result<Vec<MacroEdge>> {
    perimeter_sides(r, n)?;
    let mut t = Vec::new();
    for s in distinct_sides(r, n) {
        for_each_opposite(r, n, s, |c| t.push(c));
    }
    Ok(edges(n, EdgeKind::Fan, Connectivity::Four, t))
}

/// All constructive macro-edges of `n`, deduplicated by target.
pub fn intra_neighbours(r: &Rectangle, n: Cell, conn: Connectivity) -> Result<Vec<MacroEdge>> {
    perimeter_sides(r, n)?;
    let mut out: Vec<MacroEdge> = Vec::new();
    for_each_intra(r, n, conn, |to, kind| {
        let cost = if kind == EdgeKind::SameSide {
            1.0
        } else {
            metric_distance(conn, n, to)
        };
        if let Some(e) = out.iter_mut().find(|e| e.to == to) {
            if cost < e.cost {
                e.cost = cost;
                e.kind = kind;
            }
        } else {
            out.push(MacroEdge { from: n, to, cost, kind });
        }
    });
    Ok(out)
}
