//! Weighted discrete graphs with marked boundary vertices, and the boundary
//! pair they generate: the Neumann operator is the weighted graph Laplacian
//! `(H f)(v) = (1/mu(v)) sum_{e at v} rho(e) (f(v) - f(v_e))`, the boundary
//! map is coordinate restriction to the boundary vertices, and the boundary
//! weights are `mu` restricted to the boundary.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::numcore::{CMatrix, WeightedSpace};
use crate::pair::FiniteBoundaryPair;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub mu: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Edge {
    pub a: String,
    pub b: String,
    pub rho: f64,
}

/// A finite weighted graph with a marked, proper, nonempty boundary set.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GraphModel {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub boundary: Vec<String>,
}

impl GraphModel {
    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::InvalidModel("graph has no vertices".into()));
        }
        let mut seen = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.mu.is_finite() || v.mu <= 0.0 {
                return Err(Error::InvalidModel(format!(
                    "vertex '{}' has non-positive mu {}",
                    v.id, v.mu
                )));
            }
            if seen.insert(v.id.clone(), i).is_some() {
                return Err(Error::InvalidModel(format!("duplicate vertex id '{}'", v.id)));
            }
        }
        for e in &self.edges {
            if !e.rho.is_finite() || e.rho <= 0.0 {
                return Err(Error::InvalidModel(format!(
                    "edge {}-{} has non-positive rho {}",
                    e.a, e.b, e.rho
                )));
            }
            if e.a == e.b {
                return Err(Error::InvalidModel(format!("self-loop at '{}'", e.a)));
            }
            for end in [&e.a, &e.b] {
                if !seen.contains_key(end) {
                    return Err(Error::InvalidModel(format!(
                        "edge endpoint '{end}' is not a vertex"
                    )));
                }
            }
        }
        if self.boundary.is_empty() {
            return Err(Error::InvalidModel("boundary set is empty".into()));
        }
        let mut bset = HashMap::new();
        for b in &self.boundary {
            if !seen.contains_key(b) {
                return Err(Error::InvalidModel(format!(
                    "boundary id '{b}' is not a vertex"
                )));
            }
            if bset.insert(b.clone(), ()).is_some() {
                return Err(Error::InvalidModel(format!("duplicate boundary id '{b}'")));
            }
        }
        if self.boundary.len() == self.vertices.len() {
            return Err(Error::InvalidModel(
                "boundary must be a proper subset of the vertices".into(),
            ));
        }
        Ok(())
    }

    /// Vertex ids in boundary-first order: boundary vertices in the order of
    /// the boundary list, then the inner vertices in vertex-list order.
    pub fn boundary_first_order(&self) -> Vec<&str> {
        let is_boundary: HashMap<&str, ()> =
            self.boundary.iter().map(|b| (b.as_str(), ())).collect();
        let mut order: Vec<&str> = self.boundary.iter().map(|b| b.as_str()).collect();
        order.extend(
            self.vertices
                .iter()
                .filter(|v| !is_boundary.contains_key(v.id.as_str()))
                .map(|v| v.id.as_str()),
        );
        order
    }
}

/// Builds the boundary pair of a graph model in boundary-first coordinates:
/// `N` is the weighted graph Laplacian, `Gamma = [I | 0]`, `nu = mu` on the
/// boundary block.
pub fn graph_pair(g: &GraphModel) -> Result<FiniteBoundaryPair> {
    g.validate()?;
    let order = g.boundary_first_order();
    let index: HashMap<&str, usize> = order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mu_of: HashMap<&str, f64> = g.vertices.iter().map(|v| (v.id.as_str(), v.mu)).collect();

    let n = order.len();
    let m = g.boundary.len();
    let mut lap = CMatrix::zeros(n, n);
    for e in &g.edges {
        let i = index[e.a.as_str()];
        let j = index[e.b.as_str()];
        let rho = Complex64::new(e.rho, 0.0);
        lap[(i, i)] += rho;
        lap[(j, j)] += rho;
        lap[(i, j)] -= rho;
        lap[(j, i)] -= rho;
    }
    // Divide row v by mu(v): the operator of the form w.r.t. l2(V, mu).
    for (i, v) in order.iter().enumerate() {
        let mu = mu_of[v];
        for j in 0..n {
            lap[(i, j)] /= mu;
        }
    }

    let mut gamma = CMatrix::zeros(m, n);
    for i in 0..m {
        gamma[(i, i)] = Complex64::ONE;
    }

    let state = WeightedSpace::new(order.iter().map(|v| mu_of[v]).collect())?;
    let boundary = WeightedSpace::new(order[..m].iter().map(|v| mu_of[v]).collect())?;
    FiniteBoundaryPair::new(state, boundary, lap, gamma)
}
