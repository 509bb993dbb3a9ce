#![allow(dead_code)]

use lapsep::{DimVector, Graph, VertexLabeling};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn dims(v: &[usize]) -> DimVector {
    DimVector::new(v.to_vec()).unwrap()
}

/// Erdos-Renyi graph with edge probability `p`.
pub fn gnp(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for v in 1..n {
        for u in 0..v {
            if rng.random_bool(p) {
                g.set_weight(u, v, 1.0).unwrap();
            }
        }
    }
    g
}

/// Random graph with weights in (0, 1].
pub fn weighted(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for v in 1..n {
        for u in 0..v {
            if rng.random_bool(p) {
                g.set_weight(u, v, rng.random_range(0.05..=1.0)).unwrap();
            }
        }
    }
    g
}

pub fn random_labeling(rng: &mut impl Rng, dims: &DimVector) -> VertexLabeling {
    let mut cells: Vec<usize> = (0..dims.product()).collect();
    cells.shuffle(rng);
    VertexLabeling::new(dims.clone(), cells).unwrap()
}

pub fn catalog(name: &str) -> Vec<(String, Graph)> {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    lapsep::io::parse_graph6_catalog(&text).unwrap()
}
