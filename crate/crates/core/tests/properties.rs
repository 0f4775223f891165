mod common;

use common::*;
use proptest::prelude::*;
use rsr_core::harness::{sample_instances, verify};
use rsr_core::macro_graph::{insert_endpoint, intra_neighbours};
use rsr_core::{
    apply_change, astar_plain, astar_rsr, decompose, dijkstra_plain, metric_distance, refine_path, Cell,
    CellChange, Connectivity, Decomposition, GridMap, NodeClass, Rectangle, SearchOptions, COST_EPS,
};

fn conn_strategy() -> impl Strategy<Value = Connectivity> {
    prop_oneof![Just(Connectivity::Four), Just(Connectivity::Eight)]
}

/// Random maps up to 24x24 with a random obstacle density.
fn map_strategy() -> impl Strategy<Value = GridMap> {
    (2u32..24, 2u32..24, 0.0f64..0.45, conn_strategy()).prop_flat_map(|(w, h, p, conn)| {
        proptest::collection::vec(proptest::bool::weighted(p), (w * h) as usize).prop_map(move |blocked| {
            let terrain = blocked.iter().map(|&b| if b { b'@' } else { b'.' }).collect();
            GridMap::from_terrain(w, h, terrain, conn).unwrap()
        })
    })
}

fn cell_in(w: u32, h: u32) -> impl Strategy<Value = Cell> {
    (0..w, 0..h).prop_map(|(x, y)| Cell::new(x, y))
}

#[test]
fn metric_is_a_metric() {
    for conn in [Connectivity::Four, Connectivity::Eight] {
        let cells: Vec<Cell> = (0..16).flat_map(|y| (0..16).map(move |x| Cell::new(x, y))).step_by(5).collect();
        for &a in &cells {
            assert_eq!(metric_distance(conn, a, a), 0.0);
            for &b in &cells {
                let ab = metric_distance(conn, a, b);
                assert_eq!(ab, metric_distance(conn, b, a));
                assert!(a == b || ab > 0.0);
                for &c in &cells {
                    assert!(ab <= metric_distance(conn, a, c) + metric_distance(conn, c, b) + 1e-12);
                }
            }
        }
    }
}

#[test]
fn metric_equals_dijkstra_on_open_grid() {
    for conn in [Connectivity::Four, Connectivity::Eight] {
        let map = GridMap::new(12, 12, conn);
        for s in map.free_cells() {
            let field = dijkstra_plain(&map, s).unwrap();
            for g in map.free_cells() {
                assert!((field.get(g).unwrap() - metric_distance(conn, s, g)).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn macro_edges_are_symmetric_and_metric() {
    for conn in [Connectivity::Four, Connectivity::Eight] {
        for w in 1..=9 {
            for h in 1..=9 {
                let r = Rectangle::new(0, 2, 3, w, h);
                for a in r.perimeter() {
                    for e in intra_neighbours(&r, a, conn).unwrap() {
                        assert_eq!(e.cost, metric_distance(conn, a, e.to));
                        let back = intra_neighbours(&r, e.to, conn).unwrap();
                        assert!(back.iter().any(|b| b.to == a && b.cost == e.cost), "{w}x{h} {a}->{}", e.to);
                    }
                }
            }
        }
    }
}

#[test]
fn insertion_reaches_every_perimeter_node_at_metric_cost() {
    let no_pr = SearchOptions {
        perimeter_reduction: false,
        ..SearchOptions::default()
    };
    for conn in [Connectivity::Four, Connectivity::Eight] {
        for w in 3..=10 {
            for h in 3..=10 {
                let map = GridMap::new(w, h, conn);
                let r = Rectangle::new(0, 0, 0, w, h);
                let d = Decomposition::from_tiling(&map, &[r]).unwrap();
                let per: Vec<Cell> = r.perimeter().collect();
                for m in r.cells().filter(|&c| r.is_interior(c)) {
                    // node 0 is m, node i+1 is per[i]
                    let mut adj = vec![Vec::new(); per.len() + 1];
                    let node = insert_endpoint(&map, &d, m, no_pr).unwrap().unwrap();
                    for e in &node.edges {
                        let j = r.perimeter_index(e.to).unwrap() + 1;
                        adj[0].push((j, e.cost));
                    }
                    for (i, &a) in per.iter().enumerate() {
                        for e in intra_neighbours(&r, a, conn).unwrap() {
                            adj[i + 1].push((r.perimeter_index(e.to).unwrap() + 1, e.cost));
                        }
                    }
                    let dist = dijkstra_list(&adj, 0);
                    for (i, &n) in per.iter().enumerate() {
                        let gap = (dist[i + 1] - metric_distance(conn, m, n)).abs();
                        assert!(gap < 1e-9, "{conn} {w}x{h} {m}->{n}: {}", dist[i + 1]);
                    }
                }
            }
        }
    }
}

#[test]
fn random_maps_verify_across_the_flag_matrix() {
    for conn in [Connectivity::Four, Connectivity::Eight] {
        for map in random_maps(12, 48, conn) {
            let d = decompose(&map);
            let inst = sample_instances(&map, 60, 5);
            let report = verify(&map, &d, &inst, &SearchOptions::matrix()).unwrap();
            assert!(report.ok(), "{:?}", report.mismatches.first().map(|m| m.to_string()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tiling_covers_free_cells_exactly(map in map_strategy()) {
        let d = decompose(&map);
        prop_assert!(d.validate(&map).is_ok());
        let area: u64 = d.rects().map(|r| r.area()).sum();
        prop_assert_eq!(area, map.free_count() as u64);
        for c in map.free_cells() {
            let r = d.rect_containing(c).unwrap();
            prop_assert!(r.contains(c));
        }
    }

    #[test]
    fn classification_matches_grid_edges(map in map_strategy()) {
        let d = decompose(&map);
        for c in map.free_cells() {
            let r = d.rect_containing(c).unwrap();
            let mut external = false;
            for (n, _) in map.neighbours(c).unwrap() {
                external |= !r.contains(n);
            }
            let class = d.class_of(c).unwrap();
            match class {
                NodeClass::Interior => prop_assert!(r.is_interior(c) && !external),
                NodeClass::PerimeterPruned => prop_assert!(!external),
                NodeClass::PerimeterActive => prop_assert!(external),
            }
        }
    }

    #[test]
    fn decompose_is_deterministic(map in map_strategy()) {
        prop_assert_eq!(decompose(&map), decompose(&map.clone()));
    }

    #[test]
    fn neighbour_relation_is_symmetric(map in map_strategy()) {
        for c in map.free_cells() {
            for (n, cost) in map.neighbours(c).unwrap() {
                let back = map.neighbours(n).unwrap();
                prop_assert!(back.iter().any(|&(m, k)| m == c && k == cost));
            }
        }
    }

    #[test]
    fn scaling_multiplies_free_cells(map in map_strategy(), k in 1u32..4) {
        prop_assert_eq!(map.scale(k).unwrap().free_count(), (k * k) as usize * map.free_count());
    }

    #[test]
    fn rsr_cost_equals_plain_cost(
        map in map_strategy(),
        pairs in proptest::collection::vec((0u32..24, 0u32..24, 0u32..24, 0u32..24), 8),
    ) {
        let d = decompose(&map);
        for (sx, sy, gx, gy) in pairs {
            let (s, g) = (Cell::new(sx % map.width(), sy % map.height()), Cell::new(gx % map.width(), gy % map.height()));
            if !map.is_free(s) || !map.is_free(g) {
                continue;
            }
            let plain = astar_plain(&map, s, g).unwrap();
            for opts in SearchOptions::matrix() {
                let rsr = astar_rsr(&map, &d, s, g, opts).unwrap();
                match (&plain, rsr) {
                    (Some(a), Some(b)) => {
                        prop_assert!((a.cost - b.cost).abs() <= COST_EPS, "{s}->{g} {opts:?}");
                        let refined = refine_path(&b, &map).unwrap();
                        prop_assert!((refined.cost - b.cost).abs() < 1e-9);
                    }
                    (None, None) => {}
                    other => prop_assert!(false, "reachability differs: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn repair_matches_fresh_decomposition(
        map in map_strategy(),
        toggles in proptest::collection::vec((0u32..24, 0u32..24), 1..12),
        s in cell_in(24, 24),
        g in cell_in(24, 24),
    ) {
        let mut map = map;
        let mut d = decompose(&map);
        for (x, y) in toggles {
            let c = Cell::new(x % map.width(), y % map.height());
            let ch = if map.is_free(c) { CellChange::Block(c) } else { CellChange::Free(c) };
            apply_change(&mut map, &mut d, ch).unwrap();
            prop_assert!(d.validate(&map).is_ok());
        }
        let (s, g) = (Cell::new(s.x % map.width(), s.y % map.height()), Cell::new(g.x % map.width(), g.y % map.height()));
        if map.is_free(s) && map.is_free(g) {
            let fresh = decompose(&map);
            let a = astar_rsr(&map, &d, s, g, SearchOptions::default()).unwrap().map(|p| p.cost);
            let b = astar_rsr(&map, &fresh, s, g, SearchOptions::default()).unwrap().map(|p| p.cost);
            let c = astar_plain(&map, s, g).unwrap().map(|p| p.cost);
            match (a, b, c) {
                (Some(a), Some(b), Some(c)) => {
                    prop_assert!((a - c).abs() <= COST_EPS && (b - c).abs() <= COST_EPS);
                }
                (None, None, None) => {}
                other => prop_assert!(false, "{other:?}"),
            }
        }
    }

    #[test]
    fn repair_preserves_distant_rectangles(
        map in map_strategy(),
        x in 0u32..24,
        y in 0u32..24,
    ) {
        let mut map = map;
        let mut d = decompose(&map);
        let c = Cell::new(x % map.width(), y % map.height());
        let before = d.rect_table();
        let ch = if map.is_free(c) { CellChange::Block(c) } else { CellChange::Free(c) };
        let stats = apply_change(&mut map, &mut d, ch).unwrap();
        let after = d.rect_table();
        for (id, r) in &before {
            if !stats.removed.contains(id) {
                prop_assert_eq!(after.get(id), Some(r));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn decompose_validates(map in map_strategy()) {
        prop_assert!(decompose(&map).validate(&map).is_ok());
    }
}
