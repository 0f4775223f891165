//! Octile map and scenario text formats.
//!
//! Map files:
//!
//! ```text
//! type octile
//! height <H>
//! width <W>
//! map
//! <H rows of exactly W terrain characters>
//! ```
//!
//! Scenario files start with `version 1`; every further non-empty line is
//! `<bucket> <map-path> <W> <H> <sx> <sy> <gx> <gy> <optimal-cost>`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{is_known_terrain, Cell, Connectivity, GridMap};

impl GridMap {
    /// Parses the octile map format. The connectivity defaults to
    /// [`Connectivity::Eight`]; use [`GridMap::with_conn`] to change it.
    pub fn parse(text: &str) -> Result<GridMap> {
        let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));

        let header = |lines: &mut dyn Iterator<Item = &str>, line: usize, key: &str| {
            let l = lines
                .next()
                .ok_or_else(|| Error::parse(line, "malformed header: file ends early"))?;
            let mut parts = l.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(k), Some(v), None) if k == key => Ok(v.to_string()),
                _ => Err(Error::parse(line, format!("malformed header: expected `{key} <value>`"))),
            }
        };

        header(&mut lines, 1, "type")?;
        let height: u32 = header(&mut lines, 2, "height")?
            .parse()
            .map_err(|_| Error::parse(2, "malformed header: bad height"))?;
        let width: u32 = header(&mut lines, 3, "width")?
            .parse()
            .map_err(|_| Error::parse(3, "malformed header: bad width"))?;
        if width == 0 || height == 0 {
            return Err(Error::parse(2, "malformed header: zero dimension"));
        }
        match lines.next() {
            Some(l) if l.trim() == "map" => {}
            _ => return Err(Error::parse(4, "malformed header: expected `map`")),
        }

        let mut terrain = Vec::with_capacity(width as usize * height as usize);
        let mut rows = 0u32;
        for (i, row) in lines.enumerate() {
            let line = i + 5;
            if rows == height {
                if row.trim().is_empty() {
                    continue;
                }
                return Err(Error::parse(line, "row count mismatch"));
            }
            if row.len() != width as usize {
                return Err(Error::parse(line, "row length mismatch"));
            }
            if let Some(b) = row.bytes().find(|&b| !is_known_terrain(b)) {
                return Err(Error::parse(
                    line,
                    format!("unknown terrain character `{}`", b.escape_ascii()),
                ));
            }
            terrain.extend_from_slice(row.as_bytes());
            rows += 1;
        }
        if rows != height {
            return Err(Error::parse(4 + rows as usize, "row count mismatch"));
        }
        GridMap::from_terrain(width, height, terrain, Connectivity::Eight)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<GridMap> {
        GridMap::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_map_string(&self) -> String {
        let mut out = String::with_capacity(self.len() + self.height() as usize + 40);
        let _ = write!(
            out,
            "type octile\nheight {}\nwidth {}\nmap\n",
            self.height(),
            self.width()
        );
        for row in self.terrain_bytes().chunks(self.width() as usize) {
            out.extend(row.iter().map(|&b| b as char));
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_map_string())?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioEntry {
    pub bucket: u32,
    pub map: String,
    pub width: u32,
    pub height: u32,
    pub start: Cell,
    pub goal: Cell,
    /// As recorded in the file; not trusted.
    pub optimal_cost: f64,
}

pub fn parse_scenario(text: &str) -> Result<Vec<ScenarioEntry>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.split_whitespace().next() == Some("version") => {}
        _ => return Err(Error::parse(1, "expected `version` line")),
    }
    let mut out = Vec::new();
    for (i, l) in lines {
        let line = i + 1;
        if l.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = l.split_whitespace().collect();
        if f.len() != 9 {
            return Err(Error::parse(line, format!("expected 9 fields, got {}", f.len())));
        }
        let num = |s: &str| -> Result<u32> {
            s.parse()
                .map_err(|_| Error::parse(line, format!("bad integer `{s}`")))
        };
        out.push(ScenarioEntry {
            bucket: num(f[0])?,
            map: f[1].to_string(),
            width: num(f[2])?,
            height: num(f[3])?,
            start: Cell::new(num(f[4])?, num(f[5])?),
            goal: Cell::new(num(f[6])?, num(f[7])?),
            optimal_cost: f[8]
                .parse()
                .map_err(|_| Error::parse(line, format!("bad cost `{}`", f[8])))?,
        });
    }
    Ok(out)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Vec<ScenarioEntry>> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

pub fn write_scenario(entries: &[ScenarioEntry]) -> String {
    let mut out = String::from("version 1\n");
    for e in entries {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.8}",
            e.bucket, e.map, e.width, e.height, e.start.x, e.start.y, e.goal.x, e.goal.y, e.optimal_cost
        );
    }
    out
}
