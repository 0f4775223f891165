//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use rsr_core::harness::{generate, GenKind, GenSpec};
use rsr_core::macro_graph::intra_neighbours;
use rsr_core::{metric_distance, Cell, Connectivity, Cost, Decomposition, GridMap, NodeClass, Rectangle};

pub const INF: Cost = f64::INFINITY;

/// Floyd-Warshall over a dense weight matrix (in place).
#[allow(clippy::needless_range_loop)]
pub fn floyd(w: &mut [Vec<Cost>]) {
    let n = w.len();
    for k in 0..n {
        for i in 0..n {
            let wik = w[i][k];
            if wik == INF {
                continue;
            }
            for j in 0..n {
                let via = wik + w[k][j];
                if via < w[i][j] {
                    w[i][j] = via;
                }
            }
        }
    }
}

fn empty_matrix(n: usize) -> Vec<Vec<Cost>> {
    let mut w = vec![vec![INF; n]; n];
    for (i, row) in w.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    w
}

/// Perimeter cells of `r` and the weight matrix of its constructive macro
/// graph (no shortest paths taken yet).
pub fn constructive_matrix(r: &Rectangle, conn: Connectivity) -> (Vec<Cell>, Vec<Vec<Cost>>) {
    let cells: Vec<Cell> = r.perimeter().collect();
    let mut w = empty_matrix(cells.len());
    for (i, &c) in cells.iter().enumerate() {
        for e in intra_neighbours(r, c, conn).expect("perimeter node") {
            let j = r.perimeter_index(e.to).expect("perimeter target");
            w[i][j] = w[i][j].min(e.cost);
        }
    }
    (cells, w)
}

/// Removes pruned nodes one at a time, wiring each pair of the removed
/// node's current neighbours at metric weight, then returns all-pairs
/// distances among the remaining (active) nodes.
pub fn iterative_contraction(
    r: &Rectangle,
    conn: Connectivity,
    pruned: &dyn Fn(Cell) -> bool,
) -> (Vec<Cell>, Vec<Vec<Cost>>) {
    let (cells, mut w) = constructive_matrix(r, conn);
    let n = cells.len();
    let mut alive = vec![true; n];
    for p in 0..n {
        if !pruned(cells[p]) {
            continue;
        }
        let nbrs: Vec<usize> = (0..n).filter(|&u| u != p && alive[u] && w[p][u] < INF).collect();
        for &u in &nbrs {
            for &v in &nbrs {
                if u != v {
                    let m = metric_distance(conn, cells[u], cells[v]);
                    w[u][v] = w[u][v].min(m);
                }
            }
        }
        alive[p] = false;
    }
    let keep: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let mut sub: Vec<Vec<Cost>> = keep.iter().map(|&i| keep.iter().map(|&j| w[i][j]).collect()).collect();
    floyd(&mut sub);
    (keep.iter().map(|&i| cells[i]).collect(), sub)
}

/// All-pairs distances among active nodes using only macro edges between
/// actives plus the library's contracted edges.
pub fn closed_form_active_apsp(d: &Decomposition, id: u32) -> (Vec<Cell>, Vec<Vec<Cost>>) {
    let r = *d.rect(id).unwrap();
    let conn = d.conn();
    let actives: Vec<Cell> = r
        .perimeter()
        .filter(|&c| d.class_of(c) == Some(NodeClass::PerimeterActive))
        .collect();
    let pos = |c: Cell| actives.iter().position(|&a| a == c);
    let mut w = empty_matrix(actives.len());
    for (i, &a) in actives.iter().enumerate() {
        for e in intra_neighbours(&r, a, conn).unwrap() {
            if let Some(j) = pos(e.to) {
                w[i][j] = w[i][j].min(e.cost);
            }
        }
        for e in d.contracted_active_edges(id, a).unwrap() {
            let j = pos(e.to).expect("contracted target is active");
            w[i][j] = w[i][j].min(e.cost);
        }
    }
    floyd(&mut w);
    (actives, w)
}

/// Dijkstra from `source` over an explicit adjacency list.
pub fn dijkstra_list(adj: &[Vec<(usize, Cost)>], source: usize) -> Vec<Cost> {
    let n = adj.len();
    let mut dist = vec![INF; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;
    for _ in 0..n {
        let Some(u) = (0..n).filter(|&u| !done[u] && dist[u] < INF).min_by(|&a, &b| dist[a].total_cmp(&dist[b])) else {
            break;
        };
        done[u] = true;
        for &(v, c) in &adj[u] {
            if dist[u] + c < dist[v] {
                dist[v] = dist[u] + c;
            }
        }
    }
    dist
}

/// The fixed map families used by the equivalence checks.
pub fn benchmark_maps(conn: Connectivity) -> Vec<(String, GridMap)> {
    let specs = [
        ("empty64", GenSpec::new(64, 64, GenKind::Empty)),
        ("random64-0.1", GenSpec::new(64, 64, GenKind::Random { density: 0.1 }).seed(11)),
        ("random64-0.3", GenSpec::new(64, 64, GenKind::Random { density: 0.3 }).seed(12)),
        (
            "rooms127",
            GenSpec::new(127, 127, GenKind::Rooms { room: 7, door_p: 0.5 }).seed(13),
        ),
    ];
    specs
        .into_iter()
        .map(|(name, spec)| (format!("{name}/{conn}"), generate(&spec.conn(conn)).unwrap()))
        .collect()
}

/// A mixed bag of seeded random maps for structural checks.
pub fn random_maps(count: usize, size: u32, conn: Connectivity) -> Vec<GridMap> {
    (0..count as u64)
        .map(|i| {
            let kind = match i % 4 {
                0 => GenKind::Random { density: 0.1 },
                1 => GenKind::Random { density: 0.25 },
                2 => GenKind::Random { density: 0.4 },
                _ => GenKind::Rooms { room: 5 + (i % 3) as u32, door_p: 0.4 },
            };
            generate(&GenSpec::new(size, size, kind).seed(1000 + i).conn(conn)).unwrap()
        })
        .collect()
}
