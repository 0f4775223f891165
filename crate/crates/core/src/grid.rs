//! Grid map model and movement metric.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Path cost. Straight steps cost 1, diagonal steps cost [`SQRT2`].
pub type Cost = f64;

pub const SQRT2: Cost = std::f64::consts::SQRT_2;

/// A grid location; `x` grows rightward, `y` grows downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub x: u32,
    pub y: u32,
}

impl Cell {
    pub const fn new(x: u32, y: u32) -> Self {
        Cell { x, y }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    pub fn degree(self) -> u8 {
        match self {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.degree())
    }
}

impl FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4" | "four" => Ok(Connectivity::Four),
            "8" | "eight" => Ok(Connectivity::Eight),
            other => Err(Error::Invalid(format!("unknown connectivity `{other}`"))),
        }
    }
}

/// Manhattan distance for [`Connectivity::Four`], octile distance for
/// [`Connectivity::Eight`]. Both are exact on an obstacle-free grid.
#[inline]
pub fn metric_distance(conn: Connectivity, a: Cell, b: Cell) -> Cost {
    let dx = a.x.abs_diff(b.x) as f64;
    let dy = a.y.abs_diff(b.y) as f64;
    match conn {
        Connectivity::Four => dx + dy,
        Connectivity::Eight => dx.max(dy) + (SQRT2 - 1.0) * dx.min(dy),
    }
}

/// Terrain bytes treated as traversable.
pub(crate) fn is_free_terrain(b: u8) -> bool {
    matches!(b, b'.' | b'G')
}

pub(crate) fn is_known_terrain(b: u8) -> bool {
    matches!(b, b'.' | b'G' | b'@' | b'O' | b'T' | b'S' | b'W')
}

const ORTHO: [(i32, i32); 4] = [(0, -1), (1, 0), (0, 1), (-1, 0)];
const DIAG: [(i32, i32); 4] = [(1, -1), (1, 1), (-1, 1), (-1, -1)];

/// Width × height traversability bitmap plus connectivity mode.
///
/// The original terrain bytes are retained so that a parsed map serializes
/// back to the identical text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    width: u32,
    height: u32,
    free: Vec<bool>,
    terrain: Vec<u8>,
    conn: Connectivity,
}

impl GridMap {
    /// An obstacle-free map.
    pub fn new(width: u32, height: u32, conn: Connectivity) -> Self {
        assert!(width >= 1 && height >= 1, "map must be at least 1x1");
        let n = width as usize * height as usize;
        GridMap {
            width,
            height,
            free: vec![true; n],
            terrain: vec![b'.'; n],
            conn,
        }
    }

    /// Builds a map from terrain bytes (row-major). Fails on unknown terrain.
    pub fn from_terrain(width: u32, height: u32, terrain: Vec<u8>, conn: Connectivity) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Invalid("map must be at least 1x1".into()));
        }
        if terrain.len() != width as usize * height as usize {
            return Err(Error::Invalid(format!(
                "expected {} terrain cells, got {}",
                width as usize * height as usize,
                terrain.len()
            )));
        }
        if let Some(&b) = terrain.iter().find(|&&b| !is_known_terrain(b)) {
            return Err(Error::Invalid(format!(
                "unknown terrain character `{}`",
                b.escape_ascii()
            )));
        }
        let free = terrain.iter().map(|&b| is_free_terrain(b)).collect();
        Ok(GridMap {
            width,
            height,
            free,
            terrain,
            conn,
        })
    }

    /// Convenience constructor from rows of terrain characters.
    pub fn from_rows(rows: &[&str], conn: Connectivity) -> Result<Self> {
        let height = rows.len() as u32;
        let width = rows.first().map_or(0, |r| r.len()) as u32;
        if rows.iter().any(|r| r.len() as u32 != width) {
            return Err(Error::Invalid("rows differ in length".into()));
        }
        let terrain = rows.iter().flat_map(|r| r.bytes()).collect();
        Self::from_terrain(width, height, terrain, conn)
    }

    pub fn with_conn(mut self, conn: Connectivity) -> Self {
        self.conn = conn;
        self
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn conn(&self) -> Connectivity {
        self.conn
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.free.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.free.is_empty()
    }

    #[inline]
    pub fn index(&self, c: Cell) -> usize {
        c.y as usize * self.width as usize + c.x as usize
    }

    #[inline]
    pub fn cell(&self, idx: usize) -> Cell {
        Cell::new((idx % self.width as usize) as u32, (idx / self.width as usize) as u32)
    }

    #[inline]
    pub fn contains(&self, c: Cell) -> bool {
        c.x < self.width && c.y < self.height
    }

    /// Traversability; out-of-bounds cells are blocked.
    #[inline]
    pub fn is_free(&self, c: Cell) -> bool {
        self.contains(c) && self.free[self.index(c)]
    }

    #[inline]
    pub(crate) fn is_free_at(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && x < self.width as i64
            && y < self.height as i64
            && self.free[y as usize * self.width as usize + x as usize]
    }

    pub fn terrain(&self, c: Cell) -> u8 {
        self.terrain[self.index(c)]
    }

    pub(crate) fn terrain_bytes(&self) -> &[u8] {
        &self.terrain
    }

    pub fn free_count(&self) -> usize {
        self.free.iter().filter(|&&f| f).count()
    }

    pub fn free_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.free
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(i, _)| self.cell(i))
    }

    /// Marks `c` as free (`.`) or blocked (`@`).
    pub fn set_free(&mut self, c: Cell, free: bool) -> Result<()> {
        if !self.contains(c) {
            return Err(Error::OutOfBounds(c));
        }
        let i = self.index(c);
        self.free[i] = free;
        self.terrain[i] = if free { b'.' } else { b'@' };
        Ok(())
    }

    /// Calls `f` for every grid edge leaving `c`. Diagonal moves require both
    /// flanking orthogonal cells to be free.
    #[inline]
    pub fn for_each_neighbour(&self, c: Cell, mut f: impl FnMut(Cell, Cost)) {
        let (x, y) = (c.x as i64, c.y as i64);
        for (dx, dy) in ORTHO {
            let (nx, ny) = (x + dx as i64, y + dy as i64);
            if self.is_free_at(nx, ny) {
                f(Cell::new(nx as u32, ny as u32), 1.0);
            }
        }
        if self.conn == Connectivity::Eight {
            for (dx, dy) in DIAG {
                let (nx, ny) = (x + dx as i64, y + dy as i64);
                if self.is_free_at(nx, ny) && self.is_free_at(nx, y) && self.is_free_at(x, ny) {
                    f(Cell::new(nx as u32, ny as u32), SQRT2);
                }
            }
        }
    }

    /// Grid edges leaving a free cell.
    pub fn neighbours(&self, c: Cell) -> Result<Vec<(Cell, Cost)>> {
        if !self.contains(c) {
            return Err(Error::OutOfBounds(c));
        }
        if !self.is_free(c) {
            return Err(Error::Blocked(c));
        }
        let mut out = Vec::with_capacity(8);
        self.for_each_neighbour(c, |n, cost| out.push((n, cost)));
        Ok(out)
    }

    /// Replaces every cell by a `k`×`k` block of the same terrain.
    pub fn scale(&self, k: u32) -> Result<GridMap> {
        if k == 0 {
            return Err(Error::ZeroScale);
        }
        let (w, h) = (self.width * k, self.height * k);
        let mut terrain = Vec::with_capacity(w as usize * h as usize);
        for y in 0..h {
            for x in 0..w {
                terrain.push(self.terrain(Cell::new(x / k, y / k)));
            }
        }
        let free = terrain.iter().map(|&b| is_free_terrain(b)).collect();
        Ok(GridMap {
            width: w,
            height: h,
            free,
            terrain,
            conn: self.conn,
        })
    }
}
