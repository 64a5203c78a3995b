//! The boundary-pair calculus: Robin perturbation of the form, Neumann
//! gluing of two graphs along a shared boundary, Dirichlet coupling at the
//! NtD level, direct sums, and the bounded modification that renorms the
//! boundary space so that `Lambda(-1)` becomes the identity.

use num_complex::Complex64;
use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{graph_pair, Edge, GraphModel, Vertex};
use crate::numcore::{eigenvalues_self_adjoint, solve, weighted_adjoint, CMatrix, WeightedSpace};
use crate::pair::{hermitian_inv_sqrt, FiniteBoundaryPair};

/// A validated non-negative Robin constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinParameter(f64);

impl RobinParameter {
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::NegativeRobinParameter(a));
        }
        Ok(Self(a))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// The Robin perturbation: same spaces and boundary map, Neumann operator
/// replaced by the operator of the form `h(f) + a ||Gamma f||_nu^2`, i.e.
/// `N + a Gamma° Gamma`. The Dirichlet operator and the solution operator
/// stay fixed while `Lambda_a(z) = Lambda(z) + a Id`.
pub fn robin(p: &FiniteBoundaryPair, a: RobinParameter) -> Result<FiniteBoundaryPair> {
    let gamma_adjoint = weighted_adjoint(p.gamma(), p.state(), p.boundary())?;
    let perturbed = p.neumann_op() + gamma_adjoint * p.gamma() * Complex64::new(a.value(), 0.0);
    FiniteBoundaryPair::new(
        p.state().clone(),
        p.boundary().clone(),
        perturbed,
        p.gamma().clone(),
    )
    .map(|q| q.with_delta(p.delta()))
}

/// Glues two graphs along their boundary sets (identified by vertex id).
/// Shared boundary vertices add their `mu` weights; edges and inner vertices
/// stay side by side, so inner ids must not collide.
pub fn glue_graphs(g1: &GraphModel, g2: &GraphModel) -> Result<GraphModel> {
    g1.validate()?;
    g2.validate()?;
    let b1: HashSet<&str> = g1.boundary.iter().map(|s| s.as_str()).collect();
    let b2: HashSet<&str> = g2.boundary.iter().map(|s| s.as_str()).collect();
    if b1 != b2 {
        return Err(Error::BoundaryMismatch(format!(
            "boundary id sets differ: {:?} vs {:?}",
            g1.boundary, g2.boundary
        )));
    }
    let inner1: HashSet<&str> = g1
        .vertices
        .iter()
        .map(|v| v.id.as_str())
        .filter(|id| !b1.contains(id))
        .collect();
    for v in &g2.vertices {
        if !b2.contains(v.id.as_str()) && inner1.contains(v.id.as_str()) {
            return Err(Error::BoundaryMismatch(format!(
                "inner vertex id '{}' appears on both sides; inner structures must be disjoint",
                v.id
            )));
        }
    }

    let mu2: HashMap<&str, f64> = g2.vertices.iter().map(|v| (v.id.as_str(), v.mu)).collect();
    let mut vertices: Vec<Vertex> = g1
        .vertices
        .iter()
        .map(|v| {
            let mut mu = v.mu;
            if b1.contains(v.id.as_str()) {
                mu += mu2[v.id.as_str()];
            }
            Vertex {
                id: v.id.clone(),
                mu,
            }
        })
        .collect();
    vertices.extend(
        g2.vertices
            .iter()
            .filter(|v| !b2.contains(v.id.as_str()))
            .cloned(),
    );
    let mut edges: Vec<Edge> = g1.edges.clone();
    edges.extend(g2.edges.iter().cloned());
    Ok(GraphModel {
        vertices,
        edges,
        boundary: g1.boundary.clone(),
    })
}

/// The Neumann-glued boundary pair of two graph models: boundary vertices
/// are identified, `mu` adds up there, both Laplacians assemble into one.
/// The glued DtN satisfies `Lambda(z) = Lambda_1(z) + Lambda_2(z)` once the
/// part DtN matrices are read against the glued boundary weights.
pub fn glue_neumann(g1: &GraphModel, g2: &GraphModel) -> Result<FiniteBoundaryPair> {
    graph_pair(&glue_graphs(g1, g2)?)
}

/// The two graph-pair parts of a gluing, re-weighted with the glued boundary
/// measure so their DtN matrices add up to the glued one.
pub fn glued_parts(
    g1: &GraphModel,
    g2: &GraphModel,
) -> Result<(FiniteBoundaryPair, FiniteBoundaryPair)> {
    let glued = glue_graphs(g1, g2)?;
    let mu: HashMap<&str, f64> = glued
        .vertices
        .iter()
        .map(|v| (v.id.as_str(), v.mu))
        .collect();
    let part = |g: &GraphModel| -> Result<FiniteBoundaryPair> {
        let pair = graph_pair(g)?;
        let nu = WeightedSpace::new(g.boundary.iter().map(|b| mu[b.as_str()]).collect())?;
        pair.with_boundary_weights(nu)
    };
    Ok((part(g1)?, part(g2)?))
}

/// The Dirichlet-coupled pair built directly: decoupled form `h_1 + h_2` on
/// the disjoint union with boundary map `Gamma f = Gamma_1 f_1 - Gamma_2 f_2`.
/// Its Neumann operator is `N_1 (+) N_2` (decoupled) while the Dirichlet
/// operator is the Neumann-coupled one.
pub fn dirichlet_coupled_pair(
    p1: &FiniteBoundaryPair,
    p2: &FiniteBoundaryPair,
) -> Result<FiniteBoundaryPair> {
    let m = p1.boundary_dim();
    if p2.boundary_dim() != m {
        return Err(Error::BoundaryMismatch(format!(
            "boundary dimensions differ: {m} vs {}",
            p2.boundary_dim()
        )));
    }
    let nu1 = p1.boundary().weights();
    let nu2 = p2.boundary().weights();
    for i in 0..m {
        if (nu1[i] - nu2[i]).abs() > 1e-14 * nu1[i].abs() {
            return Err(Error::BoundaryMismatch(
                "boundary weights must agree for Dirichlet coupling".into(),
            ));
        }
    }
    let (n1, n2) = (p1.state_dim(), p2.state_dim());
    let mut neumann = CMatrix::zeros(n1 + n2, n1 + n2);
    neumann.view_mut((0, 0), (n1, n1)).copy_from(p1.neumann_op());
    neumann.view_mut((n1, n1), (n2, n2)).copy_from(p2.neumann_op());
    let mut gamma = CMatrix::zeros(m, n1 + n2);
    gamma.view_mut((0, 0), (m, n1)).copy_from(p1.gamma());
    gamma.view_mut((0, n1), (m, n2)).copy_from(&(-p2.gamma()));
    let state = WeightedSpace::new(
        p1.state()
            .weights()
            .iter()
            .chain(p2.state().weights().iter())
            .cloned()
            .collect(),
    )?;
    FiniteBoundaryPair::new(state, p1.boundary().clone(), neumann, gamma)
}

/// The direct sum: block-diagonal operators, concatenated weights, and
/// `Lambda(z) = Lambda_1(z) (+) Lambda_2(z)`.
pub fn direct_sum(p1: &FiniteBoundaryPair, p2: &FiniteBoundaryPair) -> Result<FiniteBoundaryPair> {
    let (n1, n2) = (p1.state_dim(), p2.state_dim());
    let (m1, m2) = (p1.boundary_dim(), p2.boundary_dim());
    let mut neumann = CMatrix::zeros(n1 + n2, n1 + n2);
    neumann.view_mut((0, 0), (n1, n1)).copy_from(p1.neumann_op());
    neumann.view_mut((n1, n1), (n2, n2)).copy_from(p2.neumann_op());
    let mut gamma = CMatrix::zeros(m1 + m2, n1 + n2);
    gamma.view_mut((0, 0), (m1, n1)).copy_from(p1.gamma());
    gamma.view_mut((m1, n1), (m2, n2)).copy_from(p2.gamma());
    let state = WeightedSpace::new(
        p1.state()
            .weights()
            .iter()
            .chain(p2.state().weights().iter())
            .cloned()
            .collect(),
    )?;
    let boundary = WeightedSpace::new(
        p1.boundary()
            .weights()
            .iter()
            .chain(p2.boundary().weights().iter())
            .cloned()
            .collect(),
    )?;
    FiniteBoundaryPair::new(state, boundary, neumann, gamma)
}

/// The bounded modification of a pair: the boundary space is renormed with
/// `||phi||_{1/2} = ||S(-1) phi||_{H^1}`, which turns the DtN family into
/// `Lambda~(z) = Lambda(-1)^{-1} Lambda(z)` with `Lambda~(-1) = Id` and
/// `||Lambda~(z)||_{1/2} <= L(z) = 1 + |z+1| ||S(z)||_{1/2 -> 1}`.
#[derive(Debug, Clone)]
pub struct BoundedModification {
    pair: FiniteBoundaryPair,
    lambda_m1: CMatrix,
    /// Gram matrix of the 1/2-norm on the boundary: `S(-1)^H W_1 S(-1)`.
    half_gram: CMatrix,
    h1_gram: CMatrix,
}

impl BoundedModification {
    pub fn new(pair: &FiniteBoundaryPair) -> Result<Self> {
        let minus_one = Complex64::new(-1.0, 0.0);
        let lambda_m1 = pair.dtn(minus_one)?;
        let h1_gram = pair.h1_gram();
        let s_m1 = pair.solution_operator(minus_one)?;
        let half_gram = {
            let g = s_m1.adjoint() * &h1_gram * &s_m1;
            (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
        };
        Ok(Self {
            pair: pair.clone(),
            lambda_m1,
            half_gram,
            h1_gram,
        })
    }

    /// `Lambda~(z) = Lambda(-1)^{-1} Lambda(z)`.
    pub fn dtn(&self, z: Complex64) -> Result<CMatrix> {
        let lam = self.pair.dtn(z)?;
        solve(&self.lambda_m1, &lam)
    }

    /// Operator norm of `Lambda~(z)` w.r.t. the 1/2-norm.
    pub fn dtn_half_norm(&self, z: Complex64) -> Result<f64> {
        let tilde = self.dtn(z)?;
        gram_operator_norm(&tilde, &self.half_gram, &self.half_gram)
    }

    /// `||S(z)||_{1/2 -> 1}`: boundary 1/2-norm to the H^1 norm on states.
    pub fn solution_half_to_one_norm(&self, z: Complex64) -> Result<f64> {
        let s = self.pair.solution_operator(z)?;
        gram_operator_norm(&s, &self.half_gram, &self.h1_gram)
    }

    /// The bound `L(z) = 1 + |z + 1| ||S(z)||_{1/2 -> 1}`.
    pub fn norm_bound(&self, z: Complex64) -> Result<f64> {
        Ok(1.0 + (z + Complex64::ONE).norm() * self.solution_half_to_one_norm(z)?)
    }

    /// Largest eigenvalue magnitude of `Lambda~(lambda)` for real `lambda`,
    /// where `Lambda(-1)^{-1} Lambda(lambda)` is similar to a Hermitian
    /// matrix via the positive square root of `W_nu Lambda(-1)`.
    pub fn spectral_radius(&self, lambda: f64) -> Result<f64> {
        let tilde = self.pair.dtn(Complex64::new(lambda, 0.0))?;
        let wnu = CMatrix::from_diagonal(
            &self
                .pair
                .boundary()
                .weights()
                .map(|x| Complex64::new(x, 0.0)),
        );
        let a = {
            let a = &wnu * &self.lambda_m1;
            (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
        };
        let b = {
            let b = &wnu * &tilde;
            (&b + b.adjoint()) * Complex64::new(0.5, 0.0)
        };
        let a_inv_sqrt = hermitian_inv_sqrt(&a)?;
        let sim = &a_inv_sqrt * b * &a_inv_sqrt;
        let sim = (&sim + sim.adjoint()) * Complex64::new(0.5, 0.0);
        let eigs = eigenvalues_self_adjoint(&sim, &WeightedSpace::unit(sim.nrows()))?;
        Ok(eigs.iter().map(|l| l.abs()).fold(0.0, f64::max))
    }
}

/// Operator norm w.r.t. Hermitian positive definite Gram matrices on the
/// domain and codomain: the largest generalized singular value.
fn gram_operator_norm(a: &CMatrix, gram_in: &CMatrix, gram_out: &CMatrix) -> Result<f64> {
    let in_inv_sqrt = hermitian_inv_sqrt(gram_in)?;
    let t = a * &in_inv_sqrt;
    let m = t.adjoint() * gram_out * &t;
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eigs = eigenvalues_self_adjoint(&m, &WeightedSpace::unit(m.nrows()))?;
    Ok(eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}


/// Residual of Krein's resolvent formula for the glued pair, with every
/// right-hand-side object assembled from the two parts only: the part
/// Dirichlet resolvents (embedded block-diagonally), the part solution
/// operators stacked over the shared boundary, and the part DtN sum.
/// Measures `(N - z)^{-1} - R^D_1 (+) R^D_2 - S (Lambda_1 + Lambda_2)^{-1} S(conj z)°`
/// in the `mu`-weighted operator norm of the glued state space.
pub fn coupled_krein_residual(g1: &GraphModel, g2: &GraphModel, z: Complex64) -> Result<f64> {
    let glued = glue_neumann(g1, g2)?;
    let (p1, p2) = glued_parts(g1, g2)?;
    let n = glued.state_dim();
    let m = glued.boundary_dim();
    let (k1, k2) = (p1.state_dim() - m, p2.state_dim() - m);

    let shifted = glued.neumann_op() - CMatrix::identity(n, n) * z;
    let rn = solve(&shifted, &CMatrix::identity(n, n))?;

    // Glued coordinates are (boundary, inner1, inner2).
    let mut rd = CMatrix::zeros(n, n);
    let rd1 = p1.dirichlet_resolvent(z)?;
    let rd2 = p2.dirichlet_resolvent(z)?;
    rd.view_mut((m, m), (k1, k1)).copy_from(&rd1.view((m, m), (k1, k1)));
    rd.view_mut((m + k1, m + k1), (k2, k2))
        .copy_from(&rd2.view((m, m), (k2, k2)));

    let stack = |za: Complex64| -> Result<CMatrix> {
        let s1 = p1.solution_operator(za)?;
        let s2 = p2.solution_operator(za)?;
        let mut s = CMatrix::zeros(n, m);
        s.view_mut((0, 0), (m, m)).copy_from(&CMatrix::identity(m, m));
        s.view_mut((m, 0), (k1, m)).copy_from(&s1.view((m, 0), (k1, m)));
        s.view_mut((m + k1, 0), (k2, m))
            .copy_from(&s2.view((m, 0), (k2, m)));
        Ok(s)
    };
    let s = stack(z)?;
    let sc = stack(z.conj())?;
    let sc_adj = weighted_adjoint(&sc, glued.boundary(), glued.state())?;
    let lam = p1.dtn(z)? + p2.dtn(z)?;
    let rhs = &rd + &s * solve(&lam, &sc_adj)?;
    Ok(crate::numcore::weighted_operator_norm(
        &(rn - rhs),
        glued.state(),
        glued.state(),
    ))
}

/// Bounded modification of a pair as a free function.
pub fn bounded_modification(p: &FiniteBoundaryPair) -> Result<BoundedModification> {
    BoundedModification::new(p)
}
