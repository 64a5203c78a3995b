//! Weighted linear-algebra substrate: weighted inner products and adjoints,
//! Hermitian eigendecomposition w.r.t. a weighted inner product, and complex
//! linear solves. Everything else in the crate is built on top of this module.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative tolerance for the self-adjointness check in [`eig_self_adjoint`].
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Weighted orthonormality tolerance for eigenvector columns.
pub const ORTHONORMALITY_TOL: f64 = 1e-12;
/// Relative residual required from [`solve`].
pub const SOLVE_TOL: f64 = 1e-10;
/// Condition-number estimate above which [`solve`] refuses to answer.
pub const CONDITION_LIMIT: f64 = 1e14;

/// A finite-dimensional Hilbert space with a strictly positive diagonal weight:
/// `<u, v> = sum_k w_k * u_k * conj(v_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSpace {
    weights: DVector<f64>,
}

impl WeightedSpace {
    /// A space with the given diagonal weights. All weights must be strictly
    /// positive and finite. The empty space (`dim == 0`) is allowed; it shows
    /// up as the boundary of the trivial pair and in direct-sum identities.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidModel(
                "weights must be strictly positive and finite".into(),
            ));
        }
        Ok(Self {
            weights: DVector::from_vec(weights),
        })
    }

    /// The space `C^dim` with all weights equal to one.
    pub fn unit(dim: usize) -> Self {
        Self {
            weights: DVector::from_element(dim, 1.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &DVector<f64> {
        &self.weights
    }

    /// `<u, v> = sum_k w_k u_k conj(v_k)` (linear in the first argument).
    pub fn inner(&self, u: &CVector, v: &CVector) -> Complex64 {
        assert_eq!(u.len(), self.dim(), "inner: dimension mismatch");
        assert_eq!(v.len(), self.dim(), "inner: dimension mismatch");
        let mut acc = Complex64::ZERO;
        for k in 0..self.dim() {
            acc += self.weights[k] * u[k] * v[k].conj();
        }
        acc
    }

    pub fn norm(&self, u: &CVector) -> f64 {
        self.inner(u, u).re.max(0.0).sqrt()
    }

    /// Left-multiplies by the diagonal weight matrix `W`.
    pub fn scale_rows(&self, a: &CMatrix) -> CMatrix {
        let mut out = a.clone();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                out[(i, j)] *= self.weights[i];
            }
        }
        out
    }

    /// `W^{1/2} A W^{-1/2}`, the similarity that turns a self-adjoint operator
    /// w.r.t. this space into an ordinary Hermitian matrix.
    pub fn symmetrize(&self, a: &CMatrix) -> CMatrix {
        let s: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        let mut out = a.clone();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                out[(i, j)] *= s[i] / s[j];
            }
        }
        out
    }

    /// `W^{-1/2} u` applied columnwise (inverse of the symmetrizing map).
    pub fn unsymmetrize_cols(&self, a: &CMatrix) -> CMatrix {
        let mut out = a.clone();
        for i in 0..a.nrows() {
            let s = self.weights[i].sqrt();
            for j in 0..a.ncols() {
                out[(i, j)] /= s;
            }
        }
        out
    }
}

/// Full eigendecomposition of an operator that is self-adjoint w.r.t. a
/// weighted space: real ascending eigenvalues and weighted-orthonormal
/// eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: CMatrix,
}

impl HermitianSpectrum {
    /// Reconstructs `sum_k lambda_k v_k <., v_k>` as a matrix; equals the
    /// original operator up to rounding.
    pub fn reconstruct(&self, sp: &WeightedSpace) -> CMatrix {
        let v = &self.eigenvectors;
        let mut lam_vh_w = v.adjoint() * from_real_diag(sp.weights());
        for (k, mut row) in lam_vh_w.row_iter_mut().enumerate() {
            let lam = Complex64::new(self.eigenvalues[k], 0.0);
            for e in row.iter_mut() {
                *e *= lam;
            }
        }
        v * lam_vh_w
    }
}

fn from_real_diag(d: &DVector<f64>) -> CMatrix {
    CMatrix::from_diagonal(&d.map(|x| Complex64::new(x, 0.0)))
}

pub fn all_finite(a: &CMatrix) -> bool {
    a.iter().all(|e| e.re.is_finite() && e.im.is_finite())
}

/// Largest singular value (ordinary 2-norm).
pub fn spectral_norm(a: &CMatrix) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    nalgebra::linalg::SVD::new_unordered(a.clone(), false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Operator norm of `A : sp_in -> sp_out` w.r.t. the weighted norms.
pub fn weighted_operator_norm(a: &CMatrix, sp_in: &WeightedSpace, sp_out: &WeightedSpace) -> f64 {
    let mut scaled = a.clone();
    for i in 0..a.nrows() {
        let so = sp_out.weights()[i].sqrt();
        for j in 0..a.ncols() {
            scaled[(i, j)] *= so / sp_in.weights()[j].sqrt();
        }
    }
    spectral_norm(&scaled)
}

/// Full weighted eigendecomposition of an operator `A` that is self-adjoint
/// w.r.t. `sp`, i.e. `<Au, v> = <u, Av>` for the weighted inner product.
///
/// The problem is reduced to an ordinary Hermitian one through the similarity
/// `W^{1/2} A W^{-1/2}`, which keeps the weighted orthonormality of the
/// returned eigenvector columns exact up to rounding.
pub fn eig_self_adjoint(a: &CMatrix, sp: &WeightedSpace) -> Result<HermitianSpectrum> {
    let n = sp.dim();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "eig_self_adjoint: operator is {}x{}, space has dim {}",
            a.nrows(),
            a.ncols(),
            n
        )));
    }
    if n == 0 {
        return Ok(HermitianSpectrum {
            eigenvalues: DVector::zeros(0),
            eigenvectors: CMatrix::zeros(0, 0),
        });
    }
    // Self-adjointness w.r.t. the weights means W*A is Hermitian.
    let wa = sp.scale_rows(a);
    let sym_residual = spectral_norm(&(&wa - wa.adjoint()));
    let scale = spectral_norm(&wa).max(f64::MIN_POSITIVE);
    if sym_residual > SYMMETRY_TOL * scale {
        return Err(Error::NotSelfAdjoint {
            residual: sym_residual / scale,
            tolerance: SYMMETRY_TOL,
        });
    }

    let b = sp.symmetrize(a);
    let b = (&b + b.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = nalgebra::linalg::SymmetricEigen::new(b);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    // Undo the similarity so the columns are orthonormal w.r.t. sp.
    let eigenvectors = sp.unsymmetrize_cols(&eigenvectors);

    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only, ascending.
pub fn eigenvalues_self_adjoint(a: &CMatrix, sp: &WeightedSpace) -> Result<Vec<f64>> {
    Ok(eig_self_adjoint(a, sp)?.eigenvalues.iter().cloned().collect())
}

/// The weighted adjoint `A°` of `A : sp_in -> sp_out`, characterized by
/// `<A u, w>_out = <u, A° w>_in`. Entrywise `A° = W_in^{-1} A^H W_out`.
pub fn weighted_adjoint(a: &CMatrix, sp_in: &WeightedSpace, sp_out: &WeightedSpace) -> Result<CMatrix> {
    if a.ncols() != sp_in.dim() || a.nrows() != sp_out.dim() {
        return Err(Error::DimensionMismatch(format!(
            "weighted_adjoint: operator is {}x{}, expected {}x{}",
            a.nrows(),
            a.ncols(),
            sp_out.dim(),
            sp_in.dim()
        )));
    }
    let mut out = a.adjoint();
    for i in 0..out.nrows() {
        for j in 0..out.ncols() {
            out[(i, j)] *= sp_out.weights()[j] / sp_in.weights()[i];
        }
    }
    Ok(out)
}

/// Solves `A X = B` for square `A` by LU with partial pivoting plus one step
/// of iterative refinement.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "solve: matrix is {}x{}, must be square",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.ncols() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "solve: lhs is {0}x{0} but rhs has {1} rows",
            a.nrows(),
            b.nrows()
        )));
    }
    if a.nrows() == 0 {
        return Ok(b.clone());
    }
    let lu = nalgebra::linalg::LU::new(a.clone());
    let diag = lu.u().diagonal();
    let max_pivot = diag.iter().map(|d| d.norm()).fold(0.0, f64::max);
    let min_pivot = diag.iter().map(|d| d.norm()).fold(f64::INFINITY, f64::min);
    let cond_estimate = if min_pivot == 0.0 {
        f64::INFINITY
    } else {
        max_pivot / min_pivot
    };
    if cond_estimate > CONDITION_LIMIT {
        return Err(Error::Singular { cond_estimate });
    }
    let mut x = lu
        .solve(b)
        .ok_or(Error::Singular { cond_estimate })?;
    // One refinement pass tightens the residual toward machine precision.
    let r = b - a * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    Ok(x)
}

/// `A^{-1}` through [`solve`] against the identity.
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    solve(a, &CMatrix::identity(a.nrows(), a.nrows()))
}

/// Full Householder QR of an `n x m` matrix with `m <= n`, returning the
/// square unitary factor. Used for orthonormal null-space bases, where the
/// eigensolver route would lose half the significant digits.
fn householder_q_full(a: &CMatrix) -> (CMatrix, CMatrix) {
    let (n, m) = (a.nrows(), a.ncols());
    assert!(m <= n, "householder_q_full: expected a tall matrix");
    let mut r = a.clone();
    let mut reflectors: Vec<CVector> = Vec::with_capacity(m);
    for j in 0..m {
        let mut v = CVector::zeros(n - j);
        for i in j..n {
            v[i - j] = r[(i, j)];
        }
        let norm = v.norm();
        if norm <= f64::MIN_POSITIVE {
            reflectors.push(CVector::zeros(n - j));
            continue;
        }
        let phase = if v[0].norm() > 0.0 {
            v[0] / v[0].norm()
        } else {
            Complex64::ONE
        };
        let alpha = -phase * norm;
        v[0] -= alpha;
        let vnorm2 = v.norm_squared();
        if vnorm2 > 0.0 {
            // Apply H = I - 2 v v^H / |v|^2 to the trailing block of R.
            for col in j..m {
                let mut dot = Complex64::ZERO;
                for i in j..n {
                    dot += v[i - j].conj() * r[(i, col)];
                }
                let f = 2.0 * dot / vnorm2;
                for i in j..n {
                    let upd = f * v[i - j];
                    r[(i, col)] -= upd;
                }
            }
        }
        reflectors.push(v);
    }
    // Q = H_0 H_1 ... H_{m-1}; build it by applying the reflectors in
    // reverse order to the identity.
    let mut q = CMatrix::identity(n, n);
    for j in (0..m).rev() {
        let v = &reflectors[j];
        let vnorm2 = v.norm_squared();
        if vnorm2 <= 0.0 {
            continue;
        }
        for col in 0..n {
            let mut dot = Complex64::ZERO;
            for i in j..n {
                dot += v[i - j].conj() * q[(i, col)];
            }
            let f = 2.0 * dot / vnorm2;
            for i in j..n {
                let upd = f * v[i - j];
                q[(i, col)] -= upd;
            }
        }
    }
    (q, r)
}

/// A weighted-orthonormal basis of `ker G` for a surjective `G : sp -> C^m`,
/// returned as an `n x (n-m)` matrix of columns. Errors with
/// [`Error::GammaNotSurjective`] when `G` is rank deficient.
pub fn weighted_null_basis(g: &CMatrix, sp: &WeightedSpace) -> Result<CMatrix> {
    let (m, n) = (g.nrows(), g.ncols());
    if n != sp.dim() {
        return Err(Error::DimensionMismatch(format!(
            "weighted_null_basis: map has {} columns, space has dim {}",
            n,
            sp.dim()
        )));
    }
    // Work with B = G W^{-1/2}: ker(B) = W^{1/2} ker(G) and B's kernel is
    // orthonormal in the ordinary sense.
    let mut b = g.clone();
    for j in 0..n {
        let s = sp.weights()[j].sqrt();
        for i in 0..m {
            b[(i, j)] /= s;
        }
    }
    let (q, r) = householder_q_full(&b.adjoint());
    let max_diag = (0..m).map(|j| r[(j, j)].norm()).fold(0.0, f64::max);
    let rank = (0..m)
        .filter(|&j| r[(j, j)].norm() > 1e-12 * max_diag.max(f64::MIN_POSITIVE))
        .count();
    if rank < m {
        return Err(Error::GammaNotSurjective { rank, expected: m });
    }
    let mut basis = CMatrix::zeros(n, n - m);
    for k in 0..n - m {
        basis.set_column(k, &q.column(m + k));
    }
    // Undo the similarity: columns of W^{-1/2} Q are sp-orthonormal.
    Ok(sp.unsymmetrize_cols(&basis))
}
