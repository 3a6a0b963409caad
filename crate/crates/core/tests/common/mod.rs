#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use subspec::graph::{analyze, Graph};

/// Random connected graph on `n` vertices: a random tree plus each remaining
/// pair with probability `p`.
pub fn random_connected(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("tree plus edges is connected")
}

/// Random connected bipartite graph on `n >= 2` vertices.
pub fn random_bipartite(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let side: Vec<bool> = (0..n).map(|v| v % 2 == 1).collect();
    let mut edges = Vec::new();
    for v in 1..n {
        let candidates: Vec<usize> = (0..v).filter(|&u| side[u] != side[v]).collect();
        edges.push((candidates[rng.random_range(0..candidates.len())], v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if side[u] != side[v] && !edges.contains(&(u.min(v), u.max(v))) && !edges.contains(&(u, v)) && rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::new(n, edges).expect("valid bipartite graph");
    assert!(analyze(&g).is_bipartite);
    g
}

/// Random connected graph with at least one odd cycle.
pub fn random_non_bipartite(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    loop {
        let g = random_connected(n, p, rng);
        if analyze(&g).has_odd_cycle {
            return g;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Named graphs used across the integration suites.
pub fn corpus() -> Vec<(&'static str, Graph)> {
    let petersen = Graph::new(
        10,
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9), (5, 7), (7, 9), (9, 6), (6, 8), (8, 5)],
    )
    .unwrap();
    let house = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)]).unwrap();
    vec![
        ("K2", Graph::complete(2).unwrap()),
        ("K3", Graph::complete(3).unwrap()),
        ("K4", Graph::complete(4).unwrap()),
        ("K5", Graph::complete(5).unwrap()),
        ("C4", Graph::cycle(4).unwrap()),
        ("C5", Graph::cycle(5).unwrap()),
        ("C6", Graph::cycle(6).unwrap()),
        ("P4", Graph::path(4).unwrap()),
        ("star3", Graph::star(3).unwrap()),
        ("K2,3", Graph::complete_bipartite(2, 3).unwrap()),
        ("house", house),
        ("petersen", petersen),
    ]
}
