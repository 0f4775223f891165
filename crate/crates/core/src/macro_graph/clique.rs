//! Reference labelling of the complete perimeter graph of an empty rectangle.

use crate::error::{Error, Result};
use crate::grid::{metric_distance, Cell, Connectivity, Cost};
use crate::rect::Rectangle;

/// Largest perimeter the oracle accepts; it is quartic in the perimeter.
pub const CLIQUE_PERIMETER_LIMIT: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CliqueEdge {
    pub a: Cell,
    pub b: Cell,
    pub weight: Cost,
    /// Every other path between `a` and `b` through the clique is strictly
    /// longer than `weight`.
    pub strictly_non_dominated: bool,
}

/// All perimeter pairs of `r` with their metric weight, each labelled by
/// running a shortest-path search over the clique with that edge removed.
pub fn clique_oracle(r: &Rectangle, conn: Connectivity) -> Result<Vec<CliqueEdge>> {
    let p = r.perimeter_len();
    if p > CLIQUE_PERIMETER_LIMIT {
        return Err(Error::PerimeterTooLarge(p));
    }
    let cells: Vec<Cell> = r.perimeter().collect();
    let w: Vec<Vec<Cost>> = cells
        .iter()
        .map(|&a| cells.iter().map(|&b| metric_distance(conn, a, b)).collect())
        .collect();

    let mut out = Vec::with_capacity(p * p.saturating_sub(1) / 2);
    let mut dist = vec![0.0; p];
    let mut done = vec![false; p];
    for i in 0..p {
        for j in i + 1..p {
            // dense Dijkstra from i without the edge (i, j)
            dist.fill(Cost::INFINITY);
            done.fill(false);
            dist[i] = 0.0;
            loop {
                let mut u = usize::MAX;
                for k in 0..p {
                    if !done[k] && dist[k].is_finite() && (u == usize::MAX || dist[k] < dist[u]) {
                        u = k;
                    }
                }
                if u == usize::MAX || u == j {
                    break;
                }
                done[u] = true;
                for v in 0..p {
                    if done[v] || (u == i && v == j) || (u == j && v == i) {
                        continue;
                    }
                    let nd = dist[u] + w[u][v];
                    if nd < dist[v] {
                        dist[v] = nd;
                    }
                }
            }
            out.push(CliqueEdge {
                a: cells[i],
                b: cells[j],
                weight: w[i][j],
                strictly_non_dominated: dist[j] > w[i][j] + 1e-9,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refuses_large_perimeters() {
        assert!(matches!(
            clique_oracle(&Rectangle::new(0, 0, 0, 12, 12), Connectivity::Eight),
            Err(Error::PerimeterTooLarge(44))
        ));
    }

    #[test]
    fn two_by_two() {
        let e = clique_oracle(&Rectangle::new(0, 0, 0, 2, 2), Connectivity::Eight).unwrap();
        assert_eq!(e.len(), 6);
        // every edge of a 2x2 block is a single grid step and nothing shorter exists
        assert!(e.iter().all(|e| e.strictly_non_dominated));
        let e4 = clique_oracle(&Rectangle::new(0, 0, 0, 2, 2), Connectivity::Four).unwrap();
        let diag: Vec<_> = e4.iter().filter(|e| e.weight == 2.0).collect();
        assert_eq!(diag.len(), 2);
        assert!(diag.iter().all(|e| !e.strictly_non_dominated));
    }

    #[test]
    fn three_by_three_labels() {
        let e = clique_oracle(&Rectangle::new(0, 0, 0, 3, 3), Connectivity::Eight).unwrap();
        let find = |a: Cell, b: Cell| *e.iter().find(|e| (e.a, e.b) == (a, b) || (e.b, e.a) == (a, b)).unwrap();
        let top = find(Cell::new(0, 0), Cell::new(2, 0));
        assert_eq!(top.weight, 2.0);
        assert!(!top.strictly_non_dominated);
        assert!(find(Cell::new(0, 0), Cell::new(0, 1)).strictly_non_dominated);
        // equal-cost two-hop alternative via (0,1)
        assert!(!find(Cell::new(0, 0), Cell::new(1, 2)).strictly_non_dominated);
    }

    #[test]
    fn collinear_edges_are_dominated() {
        let e = clique_oracle(&Rectangle::new(0, 0, 0, 4, 1), Connectivity::Eight).unwrap();
        let long = e
            .iter()
            .find(|e| e.a == Cell::new(0, 0) && e.b == Cell::new(3, 0))
            .unwrap();
        assert!(!long.strictly_non_dominated);
        let short = e
            .iter()
            .find(|e| e.a == Cell::new(0, 0) && e.b == Cell::new(1, 0))
            .unwrap();
        assert!(short.strictly_non_dominated);
    }
}
