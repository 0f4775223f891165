//! Axis-aligned empty rectangles and their perimeter geometry.

use crate::grid::Cell;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rectangle {
    pub id: u32,
    pub x0: u32,
    pub y0: u32,
    pub w: u32,
    pub h: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Top,
    Bottom,
    Left,
    Right,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::Top, Side::Bottom, Side::Left, Side::Right];

    pub fn opposite(self) -> Side {
        match self {
            Side::Top => Side::Bottom,
            Side::Bottom => Side::Top,
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Side::Top | Side::Bottom)
    }

    fn bit(self) -> u8 {
        match self {
            Side::Top => 1,
            Side::Bottom => 2,
            Side::Left => 4,
            Side::Right => 8,
        }
    }
}

/// The set of rectangle sides a cell lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Sides(u8);

impl Sides {
    pub fn contains(self, s: Side) -> bool {
        self.0 & s.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    /// The only side, if the cell lies on exactly one.
    pub fn single(self) -> Option<Side> {
        if self.count() == 1 {
            Side::ALL.into_iter().find(|&s| self.contains(s))
        } else {
            None
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Side> {
        Side::ALL.into_iter().filter(move |&s| self.contains(s))
    }
}

impl Rectangle {
    pub fn new(id: u32, x0: u32, y0: u32, w: u32, h: u32) -> Self {
        debug_assert!(w >= 1 && h >= 1);
        Rectangle { id, x0, y0, w, h }
    }

    #[inline]
    pub fn x1(&self) -> u32 {
        self.x0 + self.w - 1
    }

    #[inline]
    pub fn y1(&self) -> u32 {
        self.y0 + self.h - 1
    }

    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    #[inline]
    pub fn contains(&self, c: Cell) -> bool {
        c.x >= self.x0 && c.x <= self.x1() && c.y >= self.y0 && c.y <= self.y1()
    }

    pub fn overlaps(&self, o: &Rectangle) -> bool {
        self.x0 <= o.x1() && o.x0 <= self.x1() && self.y0 <= o.y1() && o.y0 <= self.y1()
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (self.y0..=self.y1()).flat_map(move |y| (self.x0..=self.x1()).map(move |x| Cell::new(x, y)))
    }

    #[inline]
    pub fn sides_of(&self, c: Cell) -> Sides {
        if !self.contains(c) {
            return Sides(0);
        }
        let mut b = 0;
        if c.y == self.y0 {
            b |= Side::Top.bit();
        }
        if c.y == self.y1() {
            b |= Side::Bottom.bit();
        }
        if c.x == self.x0 {
            b |= Side::Left.bit();
        }
        if c.x == self.x1() {
            b |= Side::Right.bit();
        }
        Sides(b)
    }

    #[inline]
    pub fn on_perimeter(&self, c: Cell) -> bool {
        !self.sides_of(c).is_empty()
    }

    /// Strictly inside; only rectangles at least 3×3 have such cells.
    #[inline]
    pub fn is_interior(&self, c: Cell) -> bool {
        self.contains(c) && self.sides_of(c).is_empty()
    }

    pub fn perimeter_len(&self) -> usize {
        if self.w == 1 || self.h == 1 {
            (self.w * self.h) as usize
        } else {
            2 * (self.w + self.h) as usize - 4
        }
    }

    /// Dense index in `0..perimeter_len()`: top row, bottom row, then the
    /// left and right columns without their end cells.
    #[inline]
    pub fn perimeter_index(&self, c: Cell) -> Option<usize> {
        if !self.contains(c) {
            return None;
        }
        let (w, h) = (self.w as usize, self.h as usize);
        let (dx, dy) = ((c.x - self.x0) as usize, (c.y - self.y0) as usize);
        if dy == 0 {
            Some(dx)
        } else if dy == h - 1 {
            Some(w + dx)
        } else if dx == 0 {
            Some(2 * w + dy - 1)
        } else if dx == w - 1 {
            Some(2 * w + (h - 2) + dy - 1)
        } else {
            None
        }
    }

    pub fn perimeter_cell(&self, i: usize) -> Cell {
        let (w, h) = (self.w as usize, self.h as usize);
        let (dx, dy) = if i < w {
            (i, 0)
        } else if h > 1 && i < 2 * w {
            (i - w, h - 1)
        } else if w == 1 || i < 2 * w + (h - 2) {
            (0, i - 2 * w + 1)
        } else {
            (w - 1, i - 2 * w - (h - 2) + 1)
        };
        Cell::new(self.x0 + dx as u32, self.y0 + dy as u32)
    }

    pub fn perimeter(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.perimeter_len()).map(move |i| self.perimeter_cell(i))
    }

    /// Distance in cells from `side` to the opposite side.
    #[inline]
    pub fn thickness(&self, side: Side) -> u32 {
        if side.is_horizontal() {
            self.h - 1
        } else {
            self.w - 1
        }
    }

    /// The cells of `side`, in increasing coordinate order.
    pub fn side_cells(&self, side: Side) -> impl Iterator<Item = Cell> + '_ {
        let (fixed_x, fixed_y) = match side {
            Side::Top => (None, Some(self.y0)),
            Side::Bottom => (None, Some(self.y1())),
            Side::Left => (Some(self.x0), None),
            Side::Right => (Some(self.x1()), None),
        };
        let len = if side.is_horizontal() { self.w } else { self.h };
        (0..len).map(move |i| match (fixed_x, fixed_y) {
            (None, Some(y)) => Cell::new(self.x0 + i, y),
            (Some(x), _) => Cell::new(x, self.y0 + i),
            _ => unreachable!(),
        })
    }
}
