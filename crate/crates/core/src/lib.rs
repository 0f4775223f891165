//! Rectangular symmetry reduction for optimal pathfinding on uniform-cost grids.
//!
//! The free space of a [`GridMap`] is tiled offline into empty rectangles
//! ([`decompose`]). Search then only visits rectangle perimeters: interior
//! nodes are skipped via macro-edges generated on the fly from rectangle
//! geometry, perimeter nodes with no link to a neighbouring rectangle are
//! contracted away, and opposite-side successors are skipped whenever a node
//! was reached from inside its own rectangle. [`astar_rsr`] returns paths of
//! the same cost as plain A* ([`astar_plain`]) over the raw grid.
//!
//! ```
//! use rsr_core::{astar_rsr, decompose, Cell, Connectivity, GridMap, SearchOptions};
//!
//! let map = GridMap::parse("type octile\nheight 3\nwidth 5\nmap\n.....\n..@..\n.....\n")
//!     .unwrap()
//!     .with_conn(Connectivity::Eight);
//! let decomp = decompose(&map);
//! let path = astar_rsr(&map, &decomp, Cell::new(0, 1), Cell::new(4, 1), SearchOptions::default())
//!     .unwrap()
//!     .expect("reachable");
//! assert!((path.cost - (2.0 + 2.0 * std::f64::consts::SQRT_2)).abs() < 1e-9);
//! ```

pub mod decomposition;
pub mod dynamic;
mod error;
pub mod grid;
pub mod harness;
pub mod macro_graph;
pub mod movingai;
pub mod rect;
pub mod search;

pub use decomposition::{decompose, DecompStats, Decomposition, NodeClass, Violation};
pub use dynamic::{apply_change, repair_consistency_check, CellChange, DynamicMap, RepairStats};
pub use error::{Error, Result};
pub use grid::{metric_distance, Cell, Connectivity, Cost, GridMap, SQRT2};
pub use macro_graph::{EdgeKind, InsertionOverlay, MacroEdge, SuccessorSet};
pub use rect::{Rectangle, Side};
pub use search::{
    astar_plain, astar_plain_with, astar_rsr, astar_rsr_with, dijkstra_plain, refine_path,
    DistanceField, Path, SearchContext, SearchOptions, SearchStats,
};

/// Absolute tolerance used when comparing path costs.
pub const COST_EPS: f64 = 1e-6;
