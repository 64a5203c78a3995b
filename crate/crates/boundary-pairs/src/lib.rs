//! Finite-dimensional boundary pairs and their boundary calculus.
//!
//! A boundary pair couples a non-negative quadratic form `h(f) = <Nf, f>` on a
//! weighted space with a surjective boundary map `Gamma`. From those two
//! ingredients the crate derives the Neumann and Dirichlet operators, the
//! Dirichlet solution operator `S(z)`, the Dirichlet-to-Neumann family
//! `Lambda(z)`, Krein's resolvent formula, and the spectral relation that
//! recovers Neumann eigenvalues as zeros of the DtN pencil.
//!
//! Modules:
//! - [`numcore`]: weighted inner products, adjoints, Hermitian eigensolves,
//!   complex linear solves.
//! - [`pair`]: the boundary pair itself and its derived operators.
//! - [`graph`]: weighted-graph boundary pairs (Schur-complement DtN).
//! - [`constructions`]: Robin perturbation, gluing, Dirichlet coupling,
//!   direct sums, bounded modification.
//! - [`analytic`]: closed-form interval and interval-chain pairs plus a
//!   finite-difference oracle.
//! - [`spectral`]: the DtN-pencil eigenvalue solver and verification suites.
//! - [`report`]: machine-readable check/spectrum reports.
//!
//! ```
//! use boundary_pairs::graph::{graph_pair, Edge, GraphModel, Vertex};
//! use boundary_pairs::spectral::find_neumann_eigenvalues;
//! use num_complex::Complex64;
//!
//! // The 3-path a - b - c with boundary {a, c}.
//! let model = GraphModel {
//!     vertices: ["a", "b", "c"]
//!         .map(|id| Vertex { id: id.into(), mu: 1.0 })
//!         .to_vec(),
//!     edges: vec![
//!         Edge { a: "a".into(), b: "b".into(), rho: 1.0 },
//!         Edge { a: "b".into(), b: "c".into(), rho: 1.0 },
//!     ],
//!     boundary: vec!["a".into(), "c".into()],
//! };
//! let pair = graph_pair(&model)?;
//!
//! // Krein's resolvent formula holds to machine precision...
//! assert!(pair.krein_residual(Complex64::new(-1.0, 0.0))? < 1e-12);
//!
//! // ...and the Neumann eigenvalues {0, 1, 3} are the zeros of the pencil.
//! let scan = find_neumann_eigenvalues(&pair, (-0.5, 4.0), 256, 1e-10)?;
//! let zeros: Vec<f64> = scan.hits.iter().map(|h| h.lambda).collect();
//! assert_eq!(zeros.len(), 3);
//! assert!((zeros[1] - 1.0).abs() < 1e-9 && (zeros[2] - 3.0).abs() < 1e-9);
//! # Ok::<(), boundary_pairs::Error>(())
//! ```

pub mod analytic;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod numcore;
pub mod pair;
pub mod report;
pub mod samples;
pub mod spectral;

pub use error::{Error, Result};
pub use numcore::{CMatrix, CVector, WeightedSpace};
pub use pair::FiniteBoundaryPair;

