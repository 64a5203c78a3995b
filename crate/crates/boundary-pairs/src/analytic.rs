//! Semi-analytic boundary pairs with closed-form DtN matrices: the single
//! interval `[0, l]` with both endpoints as boundary, and finite interval
//! chains whose DtN is a Jacobi (tridiagonal) matrix. A second-order finite
//! difference discretization serves as an independent spectral oracle.
//!
//! All trigonometric expressions are even functions of `sqrt(z)`, so the
//! branch of the complex square root never matters; near `z = 0` the
//! removable singularities are evaluated by truncated series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::CMatrix;
use crate::pair::{dist_to_real_set, DEFAULT_DELTA};

/// Series evaluation kicks in once `|z| l^2` drops below this threshold.
/// The coefficients are validated against direct trig evaluation at
/// `|z| l^2 = 1e-2` in the tests before anything relies on them.
pub const SERIES_THRESHOLD: f64 = 1e-3;

/// An interval `[0, l]` with boundary map `f -> (f(0), f(l))`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct IntervalPair {
    pub length: f64,
}

impl IntervalPair {
    pub fn new(length: f64) -> Result<Self> {
        if !length.is_finite() || length <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "interval length must be positive and finite, got {length}"
            )));
        }
        Ok(Self { length })
    }

    /// Dirichlet eigenvalues `(k pi / l)^2 <= cutoff`, ascending.
    pub fn dirichlet_spectrum_below(&self, cutoff: f64) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 1u64;
        loop {
            let lam = (k as f64 * std::f64::consts::PI / self.length).powi(2);
            if lam > cutoff {
                break;
            }
            out.push(lam);
            k += 1;
        }
        out
    }
}

/// `sqrt(z) * cot(sqrt(z) * l)`, an even function of `sqrt(z)`.
pub fn sqrt_cot(z: Complex64, l: f64) -> Complex64 {
    if z.norm() * l * l < SERIES_THRESHOLD {
        // (1/l) * x cot x with x^2 = z l^2:
        // x cot x = 1 - u/3 - u^2/45 - 2u^3/945 - u^4/4725, u = x^2.
        let u = z * (l * l);
        let series = Complex64::ONE
            - u / 3.0
            - u.powu(2) / 45.0
            - u.powu(3) * (2.0 / 945.0)
            - u.powu(4) / 4725.0;
        series / l
    } else {
        let s = z.sqrt();
        s * (s * l).cos() / (s * l).sin()
    }
}

/// `sqrt(z) / sin(sqrt(z) * l)`, an even function of `sqrt(z)`.
pub fn sqrt_over_sin(z: Complex64, l: f64) -> Complex64 {
    if z.norm() * l * l < SERIES_THRESHOLD {
        // (1/l) * x/sin x: x/sin x = 1 + u/6 + 7u^2/360 + 31u^3/15120
        //                            + 127u^4/604800, u = x^2.
        let u = z * (l * l);
        let series = Complex64::ONE
            + u / 6.0
            + u.powu(2) * (7.0 / 360.0)
            + u.powu(3) * (31.0 / 15120.0)
            + u.powu(4) * (127.0 / 604800.0);
        series / l
    } else {
        let s = z.sqrt();
        s / (s * l).sin()
    }
}

fn guard_dirichlet(z: Complex64, spectrum_near: &[f64], delta: f64) -> Result<()> {
    let dist = dist_to_real_set(z, spectrum_near);
    if dist < delta {
        return Err(Error::TooCloseToDirichletSpectrum { z, dist, delta });
    }
    Ok(())
}

/// The 2x2 DtN matrix of the interval:
/// `Lambda(z) = sqrt(z)/sin(sqrt(z) l) * [[cos(sqrt(z) l), -1], [-1, cos(sqrt(z) l)]]`.
pub fn interval_dtn(length: f64, z: Complex64) -> Result<CMatrix> {
    interval_dtn_delta(length, z, DEFAULT_DELTA)
}

pub fn interval_dtn_delta(length: f64, z: Complex64, delta: f64) -> Result<CMatrix> {
    let iv = IntervalPair::new(length)?;
    let near = iv.dirichlet_spectrum_below(z.norm() + 2.0 * delta + 1.0);
    guard_dirichlet(z, &near, delta)?;
    let diag = sqrt_cot(z, length);
    let off = -sqrt_over_sin(z, length);
    Ok(CMatrix::from_row_slice(2, 2, &[diag, off, off, diag]))
}

/// The weak solution `h(s)` of `-h'' = z h` on `[0, l]` with `h(0) = phi_0`,
/// `h(l) = phi_1`:
/// `h(s) = phi_0 sin(sqrt z (l-s))/sin(sqrt z l) + phi_1 sin(sqrt z s)/sin(sqrt z l)`.
pub fn interval_solution(
    length: f64,
    z: Complex64,
    phi: (Complex64, Complex64),
    s: f64,
) -> Result<Complex64> {
    interval_solution_delta(length, z, phi, s, DEFAULT_DELTA)
}

pub fn interval_solution_delta(
    length: f64,
    z: Complex64,
    phi: (Complex64, Complex64),
    s: f64,
    delta: f64,
) -> Result<Complex64> {
    let iv = IntervalPair::new(length)?;
    if !(0.0..=length).contains(&s) {
        return Err(Error::OutOfDomain(format!(
            "evaluation point {s} outside [0, {length}]"
        )));
    }
    let near = iv.dirichlet_spectrum_below(z.norm() + 2.0 * delta + 1.0);
    guard_dirichlet(z, &near, delta)?;
    // sin(sqrt z a)/sin(sqrt z l) = (a/l) * sinc(z a^2)/sinc(z l^2) with the
    // even series sinc(u) = sin(sqrt u)/sqrt u; both factors are series-safe.
    let ratio = |a: f64| -> Complex64 {
        if z.norm() * length * length < SERIES_THRESHOLD {
            let sinc = |u: Complex64| {
                Complex64::ONE - u / 6.0 + u.powu(2) / 120.0 - u.powu(3) / 5040.0
                    + u.powu(4) / 362880.0
            };
            (sinc(z * (a * a)) / sinc(z * (length * length))) * (a / length)
        } else {
            let sq = z.sqrt();
            (sq * a).sin() / (sq * length).sin()
        }
    };
    Ok(phi.0 * ratio(length - s) + phi.1 * ratio(s))
}

/// A partitioned interval: lengths `l_0 .. l_{N-1}` between the boundary
/// points `x_1 .. x_N` (with `x_0 = 0` carrying a fixed Dirichlet condition
/// and a free Neumann end at `x_N`), plus one weight `rho_n` per boundary
/// point entering the boundary map `(Gamma f)_n = rho_n^{1/2} f(x_n)`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ChainPair {
    pub lengths: Vec<f64>,
    pub rhos: Vec<f64>,
}

impl ChainPair {
    pub fn new(lengths: Vec<f64>, rhos: Vec<f64>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidModel("chain needs at least one interval".into()));
        }
        if lengths.len() != rhos.len() {
            return Err(Error::InvalidModel(format!(
                "chain has {} lengths but {} rhos; need one rho per boundary point",
                lengths.len(),
                rhos.len()
            )));
        }
        if lengths.iter().any(|l| !l.is_finite() || *l <= 0.0) {
            return Err(Error::InvalidModel("lengths must be positive".into()));
        }
        if rhos.iter().any(|r| !r.is_finite() || *r <= 0.0) {
            return Err(Error::InvalidModel("rhos must be positive".into()));
        }
        Ok(Self { lengths, rhos })
    }

    /// Number of boundary points `x_1 .. x_N`.
    pub fn boundary_points(&self) -> usize {
        self.lengths.len()
    }

    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// All Dirichlet eigenvalues `(k pi / l_n)^2 <= cutoff` over all
    /// subintervals, sorted, with multiplicity.
    pub fn dirichlet_spectrum_below(&self, cutoff: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for &l in &self.lengths {
            let mut k = 1u64;
            loop {
                let lam = (k as f64 * std::f64::consts::PI / l).powi(2);
                if lam > cutoff {
                    break;
                }
                out.push(lam);
                k += 1;
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }
}

/// Sorted Dirichlet eigenvalues of the chain below `cutoff`, with multiplicity.
pub fn chain_dirichlet_spectrum(c: &ChainPair, cutoff: f64) -> Result<Vec<f64>> {
    if cutoff.is_nan() || cutoff <= 0.0 {
        return Err(Error::OutOfDomain(format!(
            "cutoff must be positive, got {cutoff}"
        )));
    }
    Ok(c.dirichlet_spectrum_below(cutoff))
}

/// The tridiagonal (Jacobi-type) DtN matrix of the chain:
/// off-diagonal `a_n(z) = -(sqrt z / sin(sqrt z l_n)) (rho_n rho_{n+1})^{-1/2}`,
/// diagonal `b_n(z) = sqrt z (cot(sqrt z l_{n-1}) + cot(sqrt z l_n)) / rho_n`
/// for interior points and `b_N(z) = sqrt z cot(sqrt z l_{N-1}) / rho_N` at
/// the free Neumann end.
pub fn chain_dtn(c: &ChainPair, z: Complex64) -> Result<CMatrix> {
    chain_dtn_delta(c, z, DEFAULT_DELTA)
}

pub fn chain_dtn_delta(c: &ChainPair, z: Complex64, delta: f64) -> Result<CMatrix> {
    let near = c.dirichlet_spectrum_below(z.norm() + 2.0 * delta + 1.0);
    guard_dirichlet(z, &near, delta)?;
    let n = c.boundary_points();
    let mut lam = CMatrix::zeros(n, n);
    // One-based boundary points x_1..x_N; slot k holds x_{k+1}.
    for k in 0..n {
        let rho = c.rhos[k];
        let left = sqrt_cot(z, c.lengths[k]);
        let mut diag = left / rho;
        if k + 1 < n {
            diag += sqrt_cot(z, c.lengths[k + 1]) / rho;
            let coupling =
                -sqrt_over_sin(z, c.lengths[k + 1]) / (c.rhos[k] * c.rhos[k + 1]).sqrt();
            lam[(k, k + 1)] = coupling;
            lam[(k + 1, k)] = coupling;
        }
        lam[(k, k)] = diag;
    }
    Ok(lam)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    Dirichlet,
    Neumann,
}

/// Eigenvalues of the second-order central-difference discretization of
/// `-d^2/ds^2` on `[0, L]` with the given endpoint conditions; O(h^2)
/// accurate. The oracle stays independent of the dense eigensolver: the
/// discretization is a real symmetric tridiagonal matrix whose eigenvalues
/// are extracted by Sturm-sequence bisection.
pub fn fd_oracle(
    total_length: f64,
    left: BoundaryCondition,
    right: BoundaryCondition,
    mesh_points: usize,
    count: usize,
) -> Result<Vec<f64>> {
    if !total_length.is_finite() || total_length <= 0.0 {
        return Err(Error::OutOfDomain("length must be positive".into()));
    }
    if mesh_points < 16 {
        return Err(Error::OutOfDomain(format!(
            "need at least 16 mesh points, got {mesh_points}"
        )));
    }
    // mesh_points interior nodes plus the two endpoints.
    let h = total_length / (mesh_points as f64 + 1.0);
    let inv_h2 = 1.0 / (h * h);

    // Dirichlet ends drop the endpoint node; a Neumann end keeps it with the
    // ghost-point row (2, -2)/h^2, which the half-weight at the boundary node
    // symmetrizes to an off-diagonal entry -sqrt(2)/h^2.
    let total = mesh_points
        + usize::from(left == BoundaryCondition::Neumann)
        + usize::from(right == BoundaryCondition::Neumann);
    let diag = vec![2.0 * inv_h2; total];
    let mut off = vec![-inv_h2; total - 1];
    if left == BoundaryCondition::Neumann {
        off[0] = -std::f64::consts::SQRT_2 * inv_h2;
    }
    if right == BoundaryCondition::Neumann {
        *off.last_mut().expect("total >= 17") = -std::f64::consts::SQRT_2 * inv_h2;
    }

    let count = count.min(diag.len());
    Ok(tridiagonal_smallest_eigenvalues(&diag, &off, count))
}

/// Sturm-sequence bisection for the `count` smallest eigenvalues of a real
/// symmetric tridiagonal matrix.
fn tridiagonal_smallest_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Vec<f64> {
    let n = diag.len();
    assert_eq!(off.len() + 1, n);
    // Number of eigenvalues strictly below x, via the sign count of the
    // LDL^T pivots of (T - x).
    let count_below = |x: f64| -> usize {
        let mut negatives = 0usize;
        let mut d = diag[0] - x;
        if d < 0.0 {
            negatives += 1;
        }
        for i in 1..n {
            let denom = if d.abs() < 1e-300 {
                1e-300_f64.copysign(d)
            } else {
                d
            };
            d = diag[i] - x - off[i - 1] * off[i - 1] / denom;
            if d < 0.0 {
                negatives += 1;
            }
        }
        negatives
    };
    // Gershgorin bounds.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let mut radius = 0.0;
        if i > 0 {
            radius += off[i - 1].abs();
        }
        if i < n - 1 {
            radius += off[i].abs();
        }
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let (mut a, mut b) = (lo, hi);
        // Invariant: count_below(a) <= k < count_below(b).
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if count_below(mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
            if b - a <= 1e-14 * (1.0 + a.abs().max(b.abs())) {
                break;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}
