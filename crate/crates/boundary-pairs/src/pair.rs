//! The finite-dimensional boundary pair and its derived operators.
//!
//! A pair consists of a state space with weights `mu`, a boundary space with
//! weights `nu`, a Neumann operator `N` (self-adjoint w.r.t. `mu`, positive
//! semidefinite) and a surjective boundary map `Gamma`. In finite dimension
//! `ker Gamma` is never dense unless `Gamma = 0`, so every nontrivial pair
//! here is a boundary pair with large boundary space: the Dirichlet operator
//! lives on `ker Gamma` and its resolvent is extended by zero on the
//! `mu`-orthogonal complement.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numcore::{
    self, eig_self_adjoint, eigenvalues_self_adjoint, solve, spectral_norm, weighted_adjoint,
    weighted_null_basis, weighted_operator_norm, CMatrix, CVector, WeightedSpace,
};

/// Default pole-exclusion radius around the Dirichlet and Neumann spectra.
pub const DEFAULT_DELTA: f64 = 1e-8;
/// Relative kernel threshold: eigenvalues of `Lambda(z)` with magnitude below
/// `KERNEL_REL * (1 + ||Lambda||)` count as kernel directions.
pub const KERNEL_REL: f64 = 1e-8;

/// Diagnostics produced when validating a candidate pair.
#[derive(Debug, Clone)]
pub struct PairDiagnostics {
    /// Relative symmetry residual of `N` w.r.t. the `mu` inner product.
    pub symmetry_residual: f64,
    /// Smallest eigenvalue of `N` (the PSD margin).
    pub psd_margin: f64,
    /// Numerical rank of `Gamma`.
    pub gamma_rank: usize,
}

/// The `mu`-orthonormal description of `ker Gamma` and the Dirichlet operator
/// compressed to it.
#[derive(Debug, Clone)]
pub struct DirichletDecomposition {
    /// `n x (n-m)` matrix whose columns are a `mu`-orthonormal basis of `ker Gamma`.
    pub kernel_basis: CMatrix,
    /// Matrix of the Dirichlet operator in that basis; Hermitian PSD.
    pub dirichlet_op: CMatrix,
    /// Eigenvalues of `dirichlet_op`, ascending. Empty when `m = n`.
    pub dirichlet_spectrum: Vec<f64>,
}

/// The Neumann-to-Dirichlet map at a point, together with the flag telling
/// whether the point sits inside the excised Dirichlet set (the NtD map
/// extends continuously there while the DtN does not).
#[derive(Debug, Clone)]
pub struct NtdMap {
    pub matrix: CMatrix,
    pub on_dirichlet_spectrum: bool,
}

/// Ellipticity and positivity constants of a pair. In finite dimension both
/// bounds always exist; they are reported as concrete numbers.
#[derive(Debug, Clone)]
pub struct ClassificationConstants {
    /// `min ||S(-1) phi||_mu` over `nu`-unit boundary vectors (uniform positivity).
    pub c_pos: f64,
    /// `max ||S(-1) phi||_mu` over `nu`-unit boundary vectors (elliptic regularity).
    pub c_ell: f64,
    /// `||Gamma||_{1->0}` from the H^1 operator norm.
    pub gamma_norm_h1: f64,
    /// `||Gamma||_{1->0}` as `1/sqrt(min eig Lambda(-1))`.
    pub gamma_norm_dtn: f64,
}

impl ClassificationConstants {
    pub fn gamma_norm(&self) -> f64 {
        self.gamma_norm_dtn
    }

    pub fn gamma_norm_rel_diff(&self) -> f64 {
        (self.gamma_norm_h1 - self.gamma_norm_dtn).abs()
            / self.gamma_norm_dtn.abs().max(f64::MIN_POSITIVE)
    }
}

#[derive(Debug, Clone)]
pub struct FiniteBoundaryPair {
    state: WeightedSpace,
    boundary: WeightedSpace,
    neumann_op: CMatrix,
    gamma: CMatrix,
    delta: f64,
    // Derived at construction:
    lift: CMatrix,
    lift_adjoint: CMatrix,
    dirichlet: DirichletDecomposition,
    neumann_spectrum: Vec<f64>,
}

/// Validates the four pieces of a candidate pair and reports diagnostics.
/// Errors mirror the pair invariants: `NotSelfAdjoint`, `NotPsd`,
/// `GammaNotSurjective`, plus dimension checks.
pub fn validate_pair(
    state: &WeightedSpace,
    boundary: &WeightedSpace,
    neumann_op: &CMatrix,
    gamma: &CMatrix,
) -> Result<PairDiagnostics> {
    let n = state.dim();
    let m = boundary.dim();
    if neumann_op.nrows() != n || neumann_op.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "neumann_op is {}x{}, state has dim {n}",
            neumann_op.nrows(),
            neumann_op.ncols()
        )));
    }
    if gamma.nrows() != m || gamma.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "gamma is {}x{}, expected {m}x{n}",
            gamma.nrows(),
            gamma.ncols()
        )));
    }
    if m > n {
        return Err(Error::DimensionMismatch(format!(
            "boundary dim {m} exceeds state dim {n}"
        )));
    }
    if !numcore::all_finite(neumann_op) || !numcore::all_finite(gamma) {
        return Err(Error::InvalidModel("matrix entries must be finite".into()));
    }

    let wn = state.scale_rows(neumann_op);
    let scale = spectral_norm(&wn).max(f64::MIN_POSITIVE);
    let symmetry_residual = spectral_norm(&(&wn - wn.adjoint())) / scale;
    if symmetry_residual > numcore::SYMMETRY_TOL {
        return Err(Error::NotSelfAdjoint {
            residual: symmetry_residual,
            tolerance: numcore::SYMMETRY_TOL,
        });
    }

    let eigs = eigenvalues_self_adjoint(neumann_op, state)?;
    let psd_margin = eigs.first().copied().unwrap_or(0.0);
    let eig_scale = eigs.last().map(|l| l.abs()).unwrap_or(0.0);
    if psd_margin < -1e-10 * (1.0 + eig_scale) {
        return Err(Error::NotPsd {
            min_eigenvalue: psd_margin,
        });
    }

    let gamma_rank = gamma_rank(gamma, state);
    if gamma_rank < m {
        return Err(Error::GammaNotSurjective {
            rank: gamma_rank,
            expected: m,
        });
    }

    Ok(PairDiagnostics {
        symmetry_residual,
        psd_margin,
        gamma_rank,
    })
}

fn gamma_rank(gamma: &CMatrix, state: &WeightedSpace) -> usize {
    let m = gamma.nrows();
    if m == 0 {
        return 0;
    }
    let mut scaled = gamma.clone();
    for j in 0..gamma.ncols() {
        let s = state.weights()[j].sqrt();
        for i in 0..m {
            scaled[(i, j)] /= s;
        }
    }
    let sv = nalgebra::linalg::SVD::new_unordered(scaled, false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter()
        .filter(|s| **s > 1e-12 * max.max(f64::MIN_POSITIVE))
        .count()
}

impl FiniteBoundaryPair {
    /// Builds and validates a pair; computes the Dirichlet decomposition, the
    /// minimum-norm lift and the Neumann spectrum once, up front.
    pub fn new(
        state: WeightedSpace,
        boundary: WeightedSpace,
        neumann_op: CMatrix,
        gamma: CMatrix,
    ) -> Result<Self> {
        validate_pair(&state, &boundary, &neumann_op, &gamma)?;
        let n = state.dim();
        let m = boundary.dim();

        let kernel_basis = if m == 0 {
            // ker Gamma is everything; pick the mu-orthonormal coordinate basis.
            let mut k = CMatrix::zeros(n, n);
            for j in 0..n {
                k[(j, j)] = Complex64::new(1.0 / state.weights()[j].sqrt(), 0.0);
            }
            k
        } else {
            weighted_null_basis(&gamma, &state)?
        };
        let kernel_adjoint = kernel_basis.adjoint()
            * CMatrix::from_diagonal(&state.weights().map(|w| Complex64::new(w, 0.0)));
        let dirichlet_op = {
            let d = &kernel_adjoint * &neumann_op * &kernel_basis;
            (&d + d.adjoint()) * Complex64::new(0.5, 0.0)
        };
        let dirichlet_spectrum =
            eigenvalues_self_adjoint(&dirichlet_op, &WeightedSpace::unit(n - m))?;

        let lift = min_norm_lift(&gamma, &state)?;
        let lift_adjoint = weighted_adjoint(&lift, &boundary, &state)?;

        let neumann_spectrum = eigenvalues_self_adjoint(&neumann_op, &state)?;

        Ok(Self {
            state,
            boundary,
            neumann_op,
            gamma,
            delta: DEFAULT_DELTA,
            lift,
            lift_adjoint,
            dirichlet: DirichletDecomposition {
                kernel_basis,
                dirichlet_op,
                dirichlet_spectrum,
            },
            neumann_spectrum,
        })
    }

    /// Overrides the pole-exclusion radius around both spectra.
    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta.abs().max(f64::MIN_POSITIVE);
        self
    }

    pub fn state(&self) -> &WeightedSpace {
        &self.state
    }

    pub fn boundary(&self) -> &WeightedSpace {
        &self.boundary
    }

    pub fn state_dim(&self) -> usize {
        self.state.dim()
    }

    pub fn boundary_dim(&self) -> usize {
        self.boundary.dim()
    }

    pub fn neumann_op(&self) -> &CMatrix {
        &self.neumann_op
    }

    pub fn gamma(&self) -> &CMatrix {
        &self.gamma
    }

    /// The default lift: the minimum-`mu`-norm right inverse of `Gamma`.
    pub fn lift(&self) -> &CMatrix {
        &self.lift
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn diagnostics(&self) -> PairDiagnostics {
        validate_pair(&self.state, &self.boundary, &self.neumann_op, &self.gamma)
            .expect("a constructed pair stays valid")
    }

    pub fn dirichlet_decomposition(&self) -> &DirichletDecomposition {
        &self.dirichlet
    }

    /// Eigenvalues of the Dirichlet operator, ascending (empty when `m = n`).
    pub fn dirichlet_spectrum(&self) -> &[f64] {
        &self.dirichlet.dirichlet_spectrum
    }

    /// Eigenvalues of the Neumann operator, ascending.
    pub fn neumann_eigenvalues(&self) -> &[f64] {
        &self.neumann_spectrum
    }

    pub fn dist_to_dirichlet(&self, z: Complex64) -> f64 {
        dist_to_real_set(z, &self.dirichlet.dirichlet_spectrum)
    }

    pub fn dist_to_neumann(&self, z: Complex64) -> f64 {
        dist_to_real_set(z, &self.neumann_spectrum)
    }

    fn guard_dirichlet(&self, z: Complex64) -> Result<()> {
        let dist = self.dist_to_dirichlet(z);
        if dist < self.delta {
            return Err(Error::TooCloseToDirichletSpectrum {
                z,
                dist,
                delta: self.delta,
            });
        }
        Ok(())
    }

    fn guard_neumann(&self, z: Complex64) -> Result<()> {
        let dist = self.dist_to_neumann(z);
        if dist < self.delta {
            return Err(Error::TooCloseToNeumannSpectrum {
                z,
                dist,
                delta: self.delta,
            });
        }
        Ok(())
    }

    /// The extended Dirichlet resolvent `R^D(z)`: `(H^D - z)^{-1}` on
    /// `ker Gamma`, zero on its `mu`-orthogonal complement.
    pub fn dirichlet_resolvent(&self, z: Complex64) -> Result<CMatrix> {
        self.guard_dirichlet(z)?;
        let n = self.state_dim();
        let k = &self.dirichlet.kernel_basis;
        let dim_ker = k.ncols();
        if dim_ker == 0 {
            return Ok(CMatrix::zeros(n, n));
        }
        let shifted = &self.dirichlet.dirichlet_op - CMatrix::identity(dim_ker, dim_ker) * z;
        let x = solve(&shifted, &self.kernel_adjoint())?;
        Ok(k * x)
    }

    fn kernel_adjoint(&self) -> CMatrix {
        self.dirichlet.kernel_basis.adjoint()
            * CMatrix::from_diagonal(&self.state.weights().map(|w| Complex64::new(w, 0.0)))
    }

    /// The Dirichlet solution operator `S(z)`: `Gamma S(z) = Id` and every
    /// column is a weak solution, i.e. `(N - z) S(z) phi` is `mu`-orthogonal
    /// to `ker Gamma`. The result does not depend on the lift.
    pub fn solution_operator(&self, z: Complex64) -> Result<CMatrix> {
        self.solution_from_lift(z, &self.lift)
    }

    /// Same as [`Self::solution_operator`] but with a caller-supplied right
    /// inverse of `Gamma` (used to exercise lift independence).
    pub fn solution_from_lift(&self, z: Complex64, lift: &CMatrix) -> Result<CMatrix> {
        self.guard_dirichlet(z)?;
        let n = self.state_dim();
        let shifted = &self.neumann_op - CMatrix::identity(n, n) * z;
        let rd = self.dirichlet_resolvent(z)?;
        Ok(lift - rd * (shifted * lift))
    }

    /// The transfer isomorphism `U(z, w) = Id + (z - w) R^D(z)`, mapping weak
    /// solutions at `w` to weak solutions at `z` and fixing `ker Gamma` setwise.
    pub fn transfer(&self, z: Complex64, w: Complex64) -> Result<CMatrix> {
        self.guard_dirichlet(w)?;
        let n = self.state_dim();
        Ok(CMatrix::identity(n, n) + self.dirichlet_resolvent(z)? * (z - w))
    }

    /// The projection `P(z) = S(z) Gamma` onto the weak solution space along
    /// `ker Gamma`; orthogonal w.r.t. the H^1 inner product at `z = -1`.
    pub fn projection(&self, z: Complex64) -> Result<CMatrix> {
        Ok(self.solution_operator(z)? * &self.gamma)
    }

    /// The Dirichlet-to-Neumann matrix `Lambda(z)`: the `nu`-representing
    /// matrix of the form `(phi, psi) -> <(N - z) S(z) phi, L psi>_mu`. The
    /// value is independent of the lift `L`.
    pub fn dtn(&self, z: Complex64) -> Result<CMatrix> {
        self.dtn_from_lift(z, &self.lift, &self.lift_adjoint)
    }

    /// DtN through an arbitrary right inverse of `Gamma` (lift independence).
    pub fn dtn_with_lift(&self, z: Complex64, lift: &CMatrix) -> Result<CMatrix> {
        let lift_adjoint = weighted_adjoint(lift, &self.boundary, &self.state)?;
        self.dtn_from_lift(z, lift, &lift_adjoint)
    }

    fn dtn_from_lift(
        &self,
        z: Complex64,
        lift: &CMatrix,
        lift_adjoint: &CMatrix,
    ) -> Result<CMatrix> {
        let n = self.state_dim();
        let s = self.solution_from_lift(z, lift)?;
        let shifted = &self.neumann_op - CMatrix::identity(n, n) * z;
        Ok(lift_adjoint * (shifted * s))
    }

    /// The Schur-complement route to the DtN matrix, available for pairs in
    /// boundary-first block coordinates (`Gamma = [I | 0]`, `nu = mu` on the
    /// boundary block): `Lambda(z) = (A - z) - B (D - z)^{-1} C`. Kept as an
    /// independent code path against [`Self::dtn`].
    pub fn schur_dtn(&self, z: Complex64) -> Result<CMatrix> {
        if !self.is_block_structured() {
            return Err(Error::NotBlockStructured);
        }
        self.guard_dirichlet(z)?;
        let n = self.state_dim();
        let m = self.boundary_dim();
        let a = self.neumann_op.view((0, 0), (m, m)).into_owned();
        let a_shift = a - CMatrix::identity(m, m) * z;
        if n == m {
            return Ok(a_shift);
        }
        let b = self.neumann_op.view((0, m), (m, n - m)).into_owned();
        let c = self.neumann_op.view((m, 0), (n - m, m)).into_owned();
        let d = self.neumann_op.view((m, m), (n - m, n - m)).into_owned();
        let x = solve(&(d - CMatrix::identity(n - m, n - m) * z), &c)?;
        Ok(a_shift - b * x)
    }

    /// True when the pair carries boundary-first block coordinates.
    pub fn is_block_structured(&self) -> bool {
        let n = self.state_dim();
        let m = self.boundary_dim();
        for i in 0..m {
            for j in 0..n {
                let want = if i == j { Complex64::ONE } else { Complex64::ZERO };
                if (self.gamma[(i, j)] - want).norm() > 1e-14 {
                    return false;
                }
            }
        }
        for i in 0..m {
            let (nu, mu) = (self.boundary.weights()[i], self.state.weights()[i]);
            if (nu - mu).abs() > 1e-14 * mu.abs() {
                return false;
            }
        }
        true
    }

    /// The Neumann-to-Dirichlet matrix `Lambda(z)^{-1} = Gamma (N - z)^{-1} Gamma°`.
    /// Requires `z` off the Neumann spectrum; unlike the DtN it extends
    /// continuously into the Dirichlet spectrum, which is reported in the flag.
    pub fn ntd(&self, z: Complex64) -> Result<NtdMap> {
        self.guard_neumann(z)?;
        let n = self.state_dim();
        let gamma_adjoint = weighted_adjoint(&self.gamma, &self.state, &self.boundary)?;
        let shifted = &self.neumann_op - CMatrix::identity(n, n) * z;
        let x = solve(&shifted, &gamma_adjoint)?;
        Ok(NtdMap {
            matrix: &self.gamma * x,
            on_dirichlet_spectrum: self.dist_to_dirichlet(z) < self.delta,
        })
    }

    /// The matrix of the weak normal derivative `Gamma'`: the unique
    /// `nu`-representative of `psi -> h(f, L psi) - <i* N f, i* L psi>_mu`
    /// where `i*` is the `mu`-orthogonal projection onto `ker Gamma`. For
    /// graph pairs in block coordinates this is the boundary block row
    /// `[A | B]` of the Neumann operator.
    pub fn gamma_prime(&self) -> CMatrix {
        let n = self.state_dim();
        let k = &self.dirichlet.kernel_basis;
        let proj_ker = k * self.kernel_adjoint();
        let q = CMatrix::identity(n, n) - proj_ker;
        &self.lift_adjoint * (q * &self.neumann_op)
    }

    /// Applies `Gamma'` to a state vector.
    pub fn gamma_prime_apply(&self, f: &CVector) -> CVector {
        CVector::from(self.gamma_prime() * f)
    }

    /// Green's identity residual `h(f,g) - <i*Nf, i*g>_mu - <Gamma'f, Gamma g>_nu`
    /// for given vectors; zero up to rounding for every pair.
    pub fn green_residual(&self, f: &CVector, g: &CVector) -> f64 {
        let nf = &self.neumann_op * f;
        let h_fg = self.state.inner(&nf, g);
        let k = &self.dirichlet.kernel_basis;
        let ka = self.kernel_adjoint();
        let proj_nf = k * (&ka * &nf);
        let proj_g = k * (&ka * g);
        let bulk = self.state.inner(&proj_nf, &proj_g);
        let bdry = self
            .boundary
            .inner(&self.gamma_prime_apply(f), &CVector::from(&self.gamma * g));
        (h_fg - bulk - bdry).norm()
    }

    /// Spectral-norm residual of Krein's resolvent formula
    /// `(N - z)^{-1} - R^D(z) - S(z) Lambda(z)^{-1} S(conj z)°` at `z`,
    /// measured in the `mu`-weighted operator norm.
    pub fn krein_residual(&self, z: Complex64) -> Result<f64> {
        self.guard_dirichlet(z)?;
        self.guard_neumann(z)?;
        let n = self.state_dim();
        let shifted = &self.neumann_op - CMatrix::identity(n, n) * z;
        let rn = solve(&shifted, &CMatrix::identity(n, n))?;
        let rd = self.dirichlet_resolvent(z)?;
        let s = self.solution_operator(z)?;
        let s_conj = self.solution_operator(z.conj())?;
        let s_conj_adj = weighted_adjoint(&s_conj, &self.boundary, &self.state)?;
        let lambda = self.dtn(z)?;
        let coupling = s * solve(&lambda, &s_conj_adj)?;
        let diff = rn - rd - coupling;
        Ok(weighted_operator_norm(&diff, &self.state, &self.state))
    }

    /// The Gram matrix of the H^1 inner product `<u,v>_mu + <Nu,v>_mu`.
    pub fn h1_gram(&self) -> CMatrix {
        let w = CMatrix::from_diagonal(&self.state.weights().map(|x| Complex64::new(x, 0.0)));
        let g = &w + &w * &self.neumann_op;
        (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
    }

    /// Ellipticity/positivity constants and the boundary-map norm computed
    /// along two independent routes (H^1 operator norm and the smallest
    /// eigenvalue of `Lambda(-1)`).
    pub fn classification_constants(&self) -> Result<ClassificationConstants> {
        let m = self.boundary_dim();
        if m == 0 {
            return Err(Error::OutOfDomain(
                "classification constants need a nonempty boundary".into(),
            ));
        }
        let minus_one = Complex64::new(-1.0, 0.0);
        let s = self.solution_operator(minus_one)?;
        let s_adj = weighted_adjoint(&s, &self.boundary, &self.state)?;
        let q = {
            let q = s_adj * &s;
            (&q + weighted_adjoint(&q, &self.boundary, &self.boundary)?) * Complex64::new(0.5, 0.0)
        };
        let q_eigs = eigenvalues_self_adjoint(&q, &self.boundary)?;
        let c_pos = q_eigs.first().copied().unwrap_or(0.0).max(0.0).sqrt();
        let c_ell = q_eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt();

        let lambda_m1 = self.dtn(minus_one)?;
        let lam_sym = (&lambda_m1
            + weighted_adjoint(&lambda_m1, &self.boundary, &self.boundary)?)
            * Complex64::new(0.5, 0.0);
        let lam_eigs = eigenvalues_self_adjoint(&lam_sym, &self.boundary)?;
        let min_lam = lam_eigs.first().copied().unwrap_or(f64::NAN);
        let gamma_norm_dtn = 1.0 / min_lam.sqrt();

        // Independent route: largest generalized eigenvalue of
        // Gamma^H W_nu Gamma against the H^1 Gram matrix.
        let w1 = self.h1_gram();
        let w1_inv_sqrt = hermitian_inv_sqrt(&w1)?;
        let wnu = CMatrix::from_diagonal(&self.boundary.weights().map(|x| Complex64::new(x, 0.0)));
        let g_gram = self.gamma.adjoint() * wnu * &self.gamma;
        let t = &w1_inv_sqrt * g_gram * &w1_inv_sqrt;
        let t = (&t + t.adjoint()) * Complex64::new(0.5, 0.0);
        let t_eigs = eigenvalues_self_adjoint(&t, &WeightedSpace::unit(self.state_dim()))?;
        let gamma_norm_h1 = t_eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt();

        Ok(ClassificationConstants {
            c_pos,
            c_ell,
            gamma_norm_h1,
            gamma_norm_dtn,
        })
    }

    /// Replaces the boundary weights, keeping everything else. Used when two
    /// pairs are glued and the parts must be re-read against the glued
    /// boundary measure.
    pub fn with_boundary_weights(&self, boundary: WeightedSpace) -> Result<Self> {
        if boundary.dim() != self.boundary_dim() {
            return Err(Error::DimensionMismatch(
                "with_boundary_weights: boundary dimension must not change".into(),
            ));
        }
        Self::new(
            self.state.clone(),
            boundary,
            self.neumann_op.clone(),
            self.gamma.clone(),
        )
        .map(|p| p.with_delta(self.delta))
    }
}

/// The minimum-`mu`-norm right inverse `L = W^{-1} Gamma^H (Gamma W^{-1} Gamma^H)^{-1}`.
fn min_norm_lift(gamma: &CMatrix, state: &WeightedSpace) -> Result<CMatrix> {
    let m = gamma.nrows();
    let n = gamma.ncols();
    if m == 0 {
        return Ok(CMatrix::zeros(n, 0));
    }
    let mut winv_gh = gamma.adjoint();
    for i in 0..n {
        for j in 0..m {
            winv_gh[(i, j)] /= state.weights()[i];
        }
    }
    let gram = gamma * &winv_gh;
    let y = solve(&gram, &CMatrix::identity(m, m))?;
    Ok(winv_gh * y)
}

/// `K^{-1/2}` of a Hermitian positive definite matrix via its eigensystem.
pub(crate) fn hermitian_inv_sqrt(k: &CMatrix) -> Result<CMatrix> {
    let n = k.nrows();
    let spec = eig_self_adjoint(k, &WeightedSpace::unit(n))?;
    if spec.eigenvalues.iter().any(|l| *l <= 0.0) {
        return Err(Error::NotPsd {
            min_eigenvalue: spec.eigenvalues[0],
        });
    }
    let v = &spec.eigenvectors;
    let d = CMatrix::from_diagonal(&DVector::from_iterator(
        n,
        spec.eigenvalues.iter().map(|l| Complex64::new(1.0 / l.sqrt(), 0.0)),
    ));
    Ok(v * d * v.adjoint())
}

pub(crate) fn dist_to_real_set(z: Complex64, set: &[f64]) -> f64 {
    set.iter()
        .map(|l| (z - Complex64::new(*l, 0.0)).norm())
        .fold(f64::INFINITY, f64::min)
}
