//! Seeded synthetic map generators.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{Cell, Connectivity, GridMap};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenKind {
    Empty,
    /// Each cell blocked independently with probability `density` in [0, 1).
    Random { density: f64 },
    /// Square rooms of side `room` (at least 3) separated by one-cell walls. The rooms are
    /// connected by a random spanning tree of doors; every other wall segment
    /// gets a door with probability `door_p`.
    Rooms { room: u32, door_p: f64 },
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenKind::Empty => write!(f, "empty"),
            GenKind::Random { density } => write!(f, "random:{density}"),
            GenKind::Rooms { room, door_p } => write!(f, "rooms:{room}:{door_p}"),
        }
    }
}

/// Parses `empty`, `random:<density>` or `rooms:<room>[:<door_p>]`.
impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::Invalid(format!("bad generator `{s}`"));
        let prob = |v: &str, max_inclusive: bool| -> Result<f64> {
            let p: f64 = v.parse().map_err(|_| bad())?;
            if p >= 0.0 && (p < 1.0 || (max_inclusive && p == 1.0)) {
                Ok(p)
            } else {
                Err(bad())
            }
        };
        match parts.as_slice() {
            ["empty"] => Ok(GenKind::Empty),
            ["random", d] => Ok(GenKind::Random { density: prob(d, false)? }),
            ["rooms", r] | ["rooms", r, _] => {
                let room: u32 = r.parse().map_err(|_| bad())?;
                if room < 3 {
                    return Err(bad());
                }
                let door_p = match parts.get(2) {
                    Some(p) => prob(p, true)?,
                    None => 0.5,
                };
                Ok(GenKind::Rooms { room, door_p })
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub width: u32,
    pub height: u32,
    pub kind: GenKind,
    /// Every generated cell becomes a `scale`×`scale` block.
    pub scale: u32,
    pub seed: u64,
    pub conn: Connectivity,
}

impl GenSpec {
    pub fn new(width: u32, height: u32, kind: GenKind) -> Self {
        GenSpec {
            width,
            height,
            kind,
            scale: 1,
            seed: 0,
            conn: Connectivity::Eight,
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn conn(mut self, conn: Connectivity) -> Self {
        self.conn = conn;
        self
    }

    pub fn scale(mut self, k: u32) -> Self {
        self.scale = k;
        self
    }
}

/// Builds the map described by `spec`; identical specs give identical maps.
pub fn generate(spec: &GenSpec) -> Result<GridMap> {
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::Invalid("map dimensions must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut map = GridMap::new(spec.width, spec.height, spec.conn);
    match spec.kind {
        GenKind::Empty => {}
        GenKind::Random { density } => {
            for y in 0..spec.height {
                for x in 0..spec.width {
                    if rng.gen_bool(density) {
                        map.set_free(Cell::new(x, y), false)?;
                    }
                }
            }
        }
        GenKind::Rooms { room, door_p } => rooms(&mut map, room, door_p, &mut rng)?,
    }
    if spec.scale != 1 {
        map = map.scale(spec.scale)?;
    }
    Ok(map)
}

fn rooms(map: &mut GridMap, room: u32, door_p: f64, rng: &mut ChaCha8Rng) -> Result<()> {
    let (w, h) = (map.width(), map.height());
    let period = room + 1;
    let is_wall = |i: u32| (i + 1).is_multiple_of(period);
    for y in 0..h {
        for x in 0..w {
            if is_wall(x) || is_wall(y) {
                map.set_free(Cell::new(x, y), false)?;
            }
        }
    }
    // room grid; a trailing partial room exists when the size is not a
    // multiple of the period
    let cols = w.div_ceil(period);
    let rows = h.div_ceil(period);
    let room_exists = |rx: u32, ry: u32| rx * period < w && ry * period < h;

    // wall segments between horizontally or vertically adjacent rooms
    #[derive(Clone, Copy)]
    struct Segment {
        a: usize,
        b: usize,
        cells: (Cell, u32, bool), // start, length, vertical wall
    }
    let mut segs = Vec::new();
    for ry in 0..rows {
        for rx in 0..cols {
            if !room_exists(rx, ry) {
                continue;
            }
            let (x0, y0) = (rx * period, ry * period);
            let len_x = room.min(w - x0);
            let len_y = room.min(h - y0);
            let wall_x = x0 + room;
            if rx + 1 < cols && room_exists(rx + 1, ry) && wall_x < w {
                segs.push(Segment {
                    a: (ry * cols + rx) as usize,
                    b: (ry * cols + rx + 1) as usize,
                    cells: (Cell::new(wall_x, y0), len_y, true),
                });
            }
            let wall_y = y0 + room;
            if ry + 1 < rows && room_exists(rx, ry + 1) && wall_y < h {
                segs.push(Segment {
                    a: (ry * cols + rx) as usize,
                    b: ((ry + 1) * cols + rx) as usize,
                    cells: (Cell::new(x0, wall_y), len_x, false),
                });
            }
        }
    }
    segs.shuffle(rng);

    let mut parent: Vec<usize> = (0..(rows * cols) as usize).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for s in segs {
        let (ra, rb) = (find(&mut parent, s.a), find(&mut parent, s.b));
        let door = if ra != rb {
            parent[ra] = rb;
            true
        } else {
            rng.gen_bool(door_p)
        };
        if door {
            let (start, len, vertical) = s.cells;
            let k = rng.gen_range(0..len);
            let c = if vertical {
                Cell::new(start.x, start.y + k)
            } else {
                Cell::new(start.x + k, start.y)
            };
            map.set_free(c, true)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::instances::components;

    #[test]
    fn parse_kinds() {
        assert_eq!("empty".parse::<GenKind>().unwrap(), GenKind::Empty);
        assert_eq!(
            "random:0.25".parse::<GenKind>().unwrap(),
            GenKind::Random { density: 0.25 }
        );
        assert_eq!(
            "rooms:7".parse::<GenKind>().unwrap(),
            GenKind::Rooms { room: 7, door_p: 0.5 }
        );
        assert!("random:1.5".parse::<GenKind>().is_err());
        assert!("random:1".parse::<GenKind>().is_err());
        assert!("rooms:2".parse::<GenKind>().is_err());
        assert!("rooms:7:1".parse::<GenKind>().is_ok());
        assert!("maze".parse::<GenKind>().is_err());
    }

    #[test]
    fn deterministic() {
        let spec = GenSpec::new(40, 30, GenKind::Random { density: 0.3 }).seed(5);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = generate(&spec.seed(6)).unwrap();
        assert_ne!(generate(&spec).unwrap(), other);
    }

    #[test]
    fn rooms_are_connected() {
        for (w, h) in [(127, 127), (50, 33), (8, 8)] {
            let spec = GenSpec::new(w, h, GenKind::Rooms { room: 7, door_p: 0.0 }).seed(3);
            let map = generate(&spec).unwrap();
            let (_, count) = components(&map);
            assert_eq!(count, 1, "{w}x{h}");
            // wall lines run through the map
            assert!(!map.is_free(Cell::new(7, 7)));
        }
    }

    #[test]
    fn scale_multiplies_dimensions() {
        let spec = GenSpec::new(10, 6, GenKind::Random { density: 0.2 }).seed(1).scale(3);
        let base = generate(&spec.scale(1)).unwrap();
        let big = generate(&spec).unwrap();
        assert_eq!((big.width(), big.height()), (30, 18));
        assert_eq!(big.free_count(), 9 * base.free_count());
    }
}
