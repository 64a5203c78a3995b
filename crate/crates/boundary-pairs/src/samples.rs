//! Seeded sample models: the hand-checked oracle graphs plus reproducible
//! random graphs and random matrix pairs, shared by the test suites and the
//! CLI's `verify random` subcommand.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{graph_pair, Edge, GraphModel, Vertex};
use crate::numcore::{CMatrix, WeightedSpace};
use crate::pair::FiniteBoundaryPair;

fn vertex(id: &str, mu: f64) -> Vertex {
    Vertex { id: id.into(), mu }
}

fn edge(a: &str, b: &str, rho: f64) -> Edge {
    Edge {
        a: a.into(),
        b: b.into(),
        rho,
    }
}

/// The 3-path `a - b - c` with unit weights and boundary `{a, c}`.
pub fn path3_graph() -> GraphModel {
    GraphModel {
        vertices: vec![vertex("a", 1.0), vertex("b", 1.0), vertex("c", 1.0)],
        edges: vec![edge("a", "b", 1.0), edge("b", "c", 1.0)],
        boundary: vec!["a".into(), "c".into()],
    }
}

pub fn path3_pair() -> FiniteBoundaryPair {
    graph_pair(&path3_graph()).expect("path3 is a valid model")
}

/// A single edge with boundary `{a}`; its DtN vanishes at `z = 0`.
pub fn single_edge_graph() -> GraphModel {
    GraphModel {
        vertices: vec![vertex("a", 1.0), vertex("b", 1.0)],
        edges: vec![edge("a", "b", 1.0)],
        boundary: vec!["a".into()],
    }
}

pub fn single_edge_pair() -> FiniteBoundaryPair {
    graph_pair(&single_edge_graph()).expect("single edge is a valid model")
}

/// A connected random graph with `n` vertices (`m < n` of them boundary),
/// spanning tree plus extra edges, and weights in `[0.5, 2]`.
pub fn random_graph(n: usize, m: usize, rng: &mut ChaCha8Rng) -> GraphModel {
    assert!(n >= 2 && m >= 1 && m < n, "need 1 <= m < n and n >= 2");
    let vertices: Vec<Vertex> = (0..n)
        .map(|i| vertex(&format!("v{i}"), rng.random_range(0.5..2.0)))
        .collect();
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        edges.push(edge(
            &format!("v{i}"),
            &format!("v{j}"),
            rng.random_range(0.5..2.0),
        ));
    }
    for _ in 0..n / 2 {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i != j {
            edges.push(edge(
                &format!("v{i}"),
                &format!("v{j}"),
                rng.random_range(0.5..2.0),
            ));
        }
    }
    // Boundary: the first m of a seeded shuffle.
    let mut ids: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        ids.swap(i, j);
    }
    let boundary = ids[..m].iter().map(|i| format!("v{i}")).collect();
    GraphModel {
        vertices,
        edges,
        boundary,
    }
}

pub fn random_graph_pair(n: usize, m: usize, seed: u64) -> FiniteBoundaryPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    graph_pair(&random_graph(n, m, &mut rng)).expect("random graphs are valid models")
}

/// A random matrix pair: `N = G° G + diag(jitter)` for a random complex `G`
/// (guarantees a `mu`-self-adjoint, positive definite Neumann operator) and a
/// random full-rank `Gamma`.
pub fn random_matrix_pair(n: usize, m: usize, seed: u64) -> FiniteBoundaryPair {
    assert!(m <= n && n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..16 {
        let state = WeightedSpace::new((0..n).map(|_| rng.random_range(0.5..2.0)).collect())
            .expect("positive weights");
        let boundary = WeightedSpace::new((0..m).map(|_| rng.random_range(0.5..2.0)).collect())
            .expect("positive weights");
        let g = CMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let g_adj = crate::numcore::weighted_adjoint(&g, &state, &state).expect("square");
        let mut neumann = g_adj * &g;
        for i in 0..n {
            neumann[(i, i)] += Complex64::new(rng.random_range(0.1..0.4), 0.0);
        }
        let gamma = CMatrix::from_fn(m, n, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        if let Ok(pair) = FiniteBoundaryPair::new(state, boundary, neumann, gamma) {
            return pair;
        }
    }
    unreachable!("a random full-rank gamma appears within a few draws")
}

/// Two random graphs sharing the boundary ids `b0..b{m-1}` with disjoint
/// inner vertices, ready for Neumann gluing. Each side is a spanning tree
/// over its own vertices plus a few extra edges.
pub fn random_glueable(m: usize, inner1: usize, inner2: usize, seed: u64) -> (GraphModel, GraphModel) {
    assert!(m >= 1 && inner1 >= 1 && inner2 >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut side = |prefix: &str, inner: usize| -> GraphModel {
        let mut vertices: Vec<Vertex> = (0..m)
            .map(|i| vertex(&format!("b{i}"), rng.random_range(0.5..2.0)))
            .collect();
        vertices.extend(
            (0..inner).map(|i| vertex(&format!("{prefix}{i}"), rng.random_range(0.5..2.0))),
        );
        let ids: Vec<String> = vertices.iter().map(|v| v.id.clone()).collect();
        let mut edges = Vec::new();
        for i in 1..ids.len() {
            let j = rng.random_range(0..i);
            edges.push(edge(&ids[i], &ids[j], rng.random_range(0.5..2.0)));
        }
        for _ in 0..inner / 2 {
            let i = rng.random_range(0..ids.len());
            let j = rng.random_range(0..ids.len());
            if i != j {
                edges.push(edge(&ids[i], &ids[j], rng.random_range(0.5..2.0)));
            }
        }
        GraphModel {
            vertices,
            edges,
            boundary: (0..m).map(|i| format!("b{i}")).collect(),
        }
    };
    let g1 = side("p", inner1);
    let g2 = side("q", inner2);
    (g1, g2)
}

/// A complex sample point with distance at least `min_dist` from both the
/// Dirichlet and the Neumann spectrum of the pair.
pub fn random_z_off_spectra(pair: &FiniteBoundaryPair, rng: &mut ChaCha8Rng, min_dist: f64) -> Complex64 {
    let hi = pair
        .neumann_eigenvalues()
        .last()
        .copied()
        .unwrap_or(1.0)
        .max(1.0);
    loop {
        let z = Complex64::new(rng.random_range(-2.0..hi + 1.0), rng.random_range(-2.0..2.0));
        if pair.dist_to_dirichlet(z) >= min_dist && pair.dist_to_neumann(z) >= min_dist {
            return z;
        }
    }
}
