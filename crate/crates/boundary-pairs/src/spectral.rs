//! The spectral relation engine: Neumann eigenvalues are located as zeros of
//! the DtN pencil `Lambda(.)` by tracking every ordered eigenvalue branch of
//! the Hermitian family across each Dirichlet-free gap. Branches are
//! non-increasing in the spectral parameter (min-max with the pointwise
//! ordering of the forms), so per-branch sign changes are reliable and each
//! branch crosses zero at most once per gap.
//!
//! Zeros sitting exactly on an excised Dirichlet point (one branch poles,
//! another crosses zero, as for the interval pair where the Neumann points
//! `k^2 pi^2` coincide with Dirichlet ones) are recovered by a collision
//! probe: the smallest eigenvalue magnitude decays linearly in the distance
//! to the point iff a branch crosses there.

use num_complex::Complex64;

use crate::analytic::{chain_dtn_delta, interval_dtn_delta, ChainPair, IntervalPair};
use crate::constructions::BoundedModification;
use crate::error::{Error, Result};
use crate::numcore::{
    eigenvalues_self_adjoint, solve, spectral_norm, weighted_adjoint, CMatrix, WeightedSpace,
};
use crate::pair::{dist_to_real_set, FiniteBoundaryPair, DEFAULT_DELTA, KERNEL_REL};

/// Anything that can produce the DtN matrix `Lambda(z)` off an excised real
/// Dirichlet set.
pub trait DtnProvider: Sync {
    fn boundary_space(&self) -> &WeightedSpace;

    fn boundary_dim(&self) -> usize {
        self.boundary_space().dim()
    }

    /// `Lambda(z)`; errors inside the pole-exclusion tube.
    fn dtn(&self, z: Complex64) -> Result<CMatrix>;

    /// Dirichlet spectrum locations within `[lo, hi]`, ascending.
    fn dirichlet_points_in(&self, lo: f64, hi: f64) -> Vec<f64>;

    /// Pole-exclusion radius.
    fn delta(&self) -> f64 {
        DEFAULT_DELTA
    }

    /// Exact Neumann eigenvalues when the provider knows them (matrix pairs).
    fn neumann_points(&self) -> Option<Vec<f64>> {
        None
    }
}

impl DtnProvider for FiniteBoundaryPair {
    fn boundary_space(&self) -> &WeightedSpace {
        self.boundary()
    }

    fn dtn(&self, z: Complex64) -> Result<CMatrix> {
        FiniteBoundaryPair::dtn(self, z)
    }

    fn dirichlet_points_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .dirichlet_spectrum()
            .iter()
            .cloned()
            .filter(|l| *l >= lo && *l <= hi)
            .collect();
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * (1.0 + a.abs()));
        pts
    }

    fn delta(&self) -> f64 {
        FiniteBoundaryPair::delta(self)
    }

    fn neumann_points(&self) -> Option<Vec<f64>> {
        Some(self.neumann_eigenvalues().to_vec())
    }
}

/// The interval pair as a DtN provider.
#[derive(Debug, Clone)]
pub struct IntervalProvider {
    interval: IntervalPair,
    delta: f64,
    boundary: WeightedSpace,
}

impl IntervalProvider {
    pub fn new(interval: IntervalPair) -> Self {
        Self {
            interval,
            delta: DEFAULT_DELTA,
            boundary: WeightedSpace::unit(2),
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta.abs().max(f64::MIN_POSITIVE);
        self
    }

    pub fn length(&self) -> f64 {
        self.interval.length
    }
}

impl DtnProvider for IntervalProvider {
    fn boundary_space(&self) -> &WeightedSpace {
        &self.boundary
    }

    fn dtn(&self, z: Complex64) -> Result<CMatrix> {
        interval_dtn_delta(self.interval.length, z, self.delta)
    }

    fn dirichlet_points_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.interval
            .dirichlet_spectrum_below(hi.max(0.0))
            .into_iter()
            .filter(|l| *l >= lo)
            .collect()
    }

    fn delta(&self) -> f64 {
        self.delta
    }
}

/// A finite interval chain as a DtN provider (tridiagonal pencil).
#[derive(Debug, Clone)]
pub struct ChainProvider {
    chain: ChainPair,
    delta: f64,
    boundary: WeightedSpace,
}

impl ChainProvider {
    pub fn new(chain: ChainPair) -> Self {
        let m = chain.boundary_points();
        Self {
            chain,
            delta: DEFAULT_DELTA,
            boundary: WeightedSpace::unit(m),
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta.abs().max(f64::MIN_POSITIVE);
        self
    }

    pub fn chain(&self) -> &ChainPair {
        &self.chain
    }
}

impl DtnProvider for ChainProvider {
    fn boundary_space(&self) -> &WeightedSpace {
        &self.boundary
    }

    fn dtn(&self, z: Complex64) -> Result<CMatrix> {
        chain_dtn_delta(&self.chain, z, self.delta)
    }

    fn dirichlet_points_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .chain
            .dirichlet_spectrum_below(hi.max(0.0))
            .into_iter()
            .filter(|l| *l >= lo)
            .collect();
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * (1.0 + a.abs()));
        pts
    }

    fn delta(&self) -> f64 {
        self.delta
    }
}

/// The Dirichlet-coupled provider: `Lambda~(z)^{-1} = Lambda_1(z)^{-1} +
/// Lambda_2(z)^{-1}`. Evaluation needs both parts invertible, so the
/// excluded set is the union of the parts' Dirichlet and Neumann points.
pub struct CoupledNtdProvider<'a, A: DtnProvider + ?Sized, B: DtnProvider + ?Sized> {
    first: &'a A,
    second: &'a B,
    boundary: WeightedSpace,
}

impl<'a, A: DtnProvider + ?Sized, B: DtnProvider + ?Sized> CoupledNtdProvider<'a, A, B> {
    pub fn new(first: &'a A, second: &'a B) -> Result<Self> {
        if first.boundary_dim() != second.boundary_dim() {
            return Err(Error::BoundaryMismatch(format!(
                "boundary dimensions differ: {} vs {}",
                first.boundary_dim(),
                second.boundary_dim()
            )));
        }
        let w1 = first.boundary_space().weights();
        let w2 = second.boundary_space().weights();
        for i in 0..first.boundary_dim() {
            if (w1[i] - w2[i]).abs() > 1e-14 * w1[i].abs() {
                return Err(Error::BoundaryMismatch(
                    "boundary weights must agree for Dirichlet coupling".into(),
                ));
            }
        }
        Ok(Self {
            first,
            second,
            boundary: first.boundary_space().clone(),
        })
    }
}

impl<A: DtnProvider + ?Sized, B: DtnProvider + ?Sized> DtnProvider
    for CoupledNtdProvider<'_, A, B>
{
    fn boundary_space(&self) -> &WeightedSpace {
        &self.boundary
    }

    fn dtn(&self, z: Complex64) -> Result<CMatrix> {
        let m = self.boundary_dim();
        let id = CMatrix::identity(m, m);
        let inv1 = solve(&self.first.dtn(z)?, &id)?;
        let inv2 = solve(&self.second.dtn(z)?, &id)?;
        solve(&(inv1 + inv2), &id).map_err(|_| Error::SingularSum { z })
    }

    fn dirichlet_points_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        let mut pts = self.first.dirichlet_points_in(lo, hi);
        pts.extend(self.second.dirichlet_points_in(lo, hi));
        for part_neumann in [self.first.neumann_points(), self.second.neumann_points()]
            .into_iter()
            .flatten()
        {
            pts.extend(part_neumann.into_iter().filter(|l| *l >= lo && *l <= hi));
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * (1.0 + a.abs()));
        pts
    }

    fn delta(&self) -> f64 {
        self.first.delta().max(self.second.delta())
    }
}

/// The bounded modification as a provider: `Lambda~(z) = Lambda(-1)^{-1} Lambda(z)`.
pub struct BoundedModProvider {
    modification: BoundedModification,
    pair_spectrum: Vec<f64>,
    delta: f64,
    boundary: WeightedSpace,
}

impl BoundedModProvider {
    pub fn new(pair: &FiniteBoundaryPair) -> Result<Self> {
        Ok(Self {
            modification: BoundedModification::new(pair)?,
            pair_spectrum: pair.dirichlet_spectrum().to_vec(),
            delta: pair.delta(),
            boundary: pair.boundary().clone(),
        })
    }

    pub fn modification(&self) -> &BoundedModification {
        &self.modification
    }
}

impl DtnProvider for BoundedModProvider {
    fn boundary_space(&self) -> &WeightedSpace {
        &self.boundary
    }

    fn dtn(&self, z: Complex64) -> Result<CMatrix> {
        self.modification.dtn(z)
    }

    fn dirichlet_points_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.pair_spectrum
            .iter()
            .cloned()
            .filter(|l| *l >= lo && *l <= hi)
            .collect()
    }

    fn delta(&self) -> f64 {
        self.delta
    }
}

/// A located zero of the DtN pencil.
#[derive(Debug, Clone)]
pub struct SpectralHit {
    pub lambda: f64,
    pub multiplicity: usize,
    /// Smallest eigenvalue magnitude at the reported point (for ordinary
    /// hits) or at the innermost probe radius (for hits on Dirichlet points).
    pub min_eig_residual: f64,
    pub bracket: (f64, f64),
    /// True when the zero sits on an excised Dirichlet point and was
    /// recovered by the collision probe.
    pub on_dirichlet_point: bool,
}

/// The result of scanning a window for pencil zeros.
#[derive(Debug, Clone, Default)]
pub struct SpectralScan {
    pub hits: Vec<SpectralHit>,
    /// Excised subintervals around Dirichlet points.
    pub excised: Vec<(f64, f64)>,
    pub warnings: Vec<String>,
}

fn sorted_weighted_eigenvalues(m: &CMatrix, space: &WeightedSpace) -> Result<Vec<f64>> {
    let sym = hermitian_part(m, space)?;
    eigenvalues_self_adjoint(&sym, space)
}

/// `(M + M°)/2` w.r.t. the weighted adjoint; collapses rounding asymmetry of
/// a numerically self-adjoint matrix.
pub fn hermitian_part(m: &CMatrix, space: &WeightedSpace) -> Result<CMatrix> {
    let adj = weighted_adjoint(m, space, space)?;
    Ok((m + adj) * Complex64::new(0.5, 0.0))
}

/// `(M - M°)/(2i)` w.r.t. the weighted adjoint; the imaginary part of an
/// operator family, itself self-adjoint w.r.t. the space.
pub fn imaginary_part(m: &CMatrix, space: &WeightedSpace) -> Result<CMatrix> {
    let adj = weighted_adjoint(m, space, space)?;
    Ok((m - adj) * Complex64::new(0.0, -0.5))
}

/// Smallest singular value of the operator in the weighted metric.
pub fn sigma_min(m: &CMatrix, space: &WeightedSpace) -> f64 {
    let mut scaled = m.clone();
    for i in 0..m.nrows() {
        let si = space.weights()[i].sqrt();
        for j in 0..m.ncols() {
            scaled[(i, j)] *= si / space.weights()[j].sqrt();
        }
    }
    nalgebra::linalg::SVD::new_unordered(scaled, false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

fn thread_cap() -> usize {
    let available = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    match std::env::var("BOUNDARY_PAIRS_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|n| *n >= 1)
            .unwrap_or(1)
            .min(available),
        Err(_) => available,
    }
}

/// Samples the sorted eigenvalue branches of `Lambda` at the given real
/// points; output order follows the input no matter how the work is split.
fn sample_branches(provider: &dyn DtnProvider, points: &[f64]) -> Result<Vec<Vec<f64>>> {
    let threads = thread_cap().min(points.len().max(1));
    if threads <= 1 || points.len() < 32 {
        return points
            .iter()
            .map(|l| {
                let lam = provider.dtn(Complex64::new(*l, 0.0))?;
                sorted_weighted_eigenvalues(&lam, provider.boundary_space())
            })
            .collect();
    }
    let chunk = points.len().div_ceil(threads);
    let results: Vec<Result<Vec<Vec<f64>>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|l| {
                            let lam = provider.dtn(Complex64::new(*l, 0.0))?;
                            sorted_weighted_eigenvalues(&lam, provider.boundary_space())
                        })
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampling thread panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(points.len());
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Finds the zeros of the DtN pencil within the window: Dirichlet points are
/// excised with radius `delta`, every ordered branch is sampled on `grid`
/// points per gap, sign changes are bisected to `|s| <= tol`, and excised
/// points are probed for zero/pole collisions.
pub fn find_neumann_eigenvalues(
    provider: &dyn DtnProvider,
    window: (f64, f64),
    grid: usize,
    tol: f64,
) -> Result<SpectralScan> {
    let (lo, hi) = window;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::OutOfDomain(format!(
            "window [{lo}, {hi}] must satisfy lo < hi"
        )));
    }
    if grid < 16 {
        return Err(Error::OutOfDomain(format!("grid must be >= 16, got {grid}")));
    }
    let delta = provider.delta();
    let points = provider.dirichlet_points_in(lo - delta, hi + delta);

    // Merge overlapping tubes and carve the window into gaps; window
    // endpoints inside a tube are shrunk inward, never silently skipped.
    // The carving radius is marginally wider than the guard radius so gap
    // endpoints never trip the pole-exclusion check through rounding.
    let excise = delta * (1.0 + 1e-6);
    let mut tubes: Vec<(f64, f64)> = points.iter().map(|p| (p - excise, p + excise)).collect();
    tubes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for t in tubes {
        match merged.last_mut() {
            Some(last) if t.0 <= last.1 => last.1 = last.1.max(t.1),
            _ => merged.push(t),
        }
    }
    let mut gaps: Vec<(f64, f64)> = Vec::new();
    let mut cursor = lo;
    for (a, b) in &merged {
        if *a > cursor {
            gaps.push((cursor, (*a).min(hi)));
        }
        cursor = cursor.max(*b);
        if cursor >= hi {
            break;
        }
    }
    if cursor < hi {
        gaps.push((cursor, hi));
    }
    gaps.retain(|(a, b)| b > a);
    if gaps.is_empty() && merged.iter().any(|(a, b)| *a <= lo && *b >= hi) {
        return Err(Error::WindowInsideDirichletPoint { lo, hi });
    }

    let mut scan = SpectralScan {
        hits: Vec::new(),
        excised: merged
            .iter()
            .cloned()
            .filter(|(a, b)| *b >= lo && *a <= hi)
            .collect(),
        warnings: Vec::new(),
    };

    if provider.boundary_dim() == 0 {
        return Ok(scan);
    }

    for &(a, b) in &gaps {
        scan_gap(provider, (a, b), grid, tol, &mut scan)?;
    }

    // Collision probes at excised Dirichlet points inside the window.
    for &p in points.iter().filter(|p| **p >= lo && **p <= hi) {
        if let Some(hit) = probe_dirichlet_point(provider, p, &points)? {
            scan.hits.push(hit);
        }
    }

    scan.hits.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
    Ok(scan)
}

fn scan_gap(
    provider: &dyn DtnProvider,
    gap: (f64, f64),
    grid: usize,
    tol: f64,
    scan: &mut SpectralScan,
) -> Result<()> {
    let (a, b) = gap;
    let m = provider.boundary_dim();
    let step = (b - a) / (grid as f64 - 1.0);
    let points: Vec<f64> = (0..grid).map(|i| a + step * i as f64).collect();
    let branches = sample_branches(provider, &points)?;

    // Refinement warning: a branch moving much faster than its running
    // median between samples may skip over narrow features.
    for k in 0..m {
        let mut deltas: Vec<f64> = Vec::with_capacity(grid - 1);
        for i in 0..grid - 1 {
            deltas.push((branches[i + 1][k] - branches[i][k]).abs());
        }
        let mut sorted = deltas.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2].max(f64::MIN_POSITIVE);
        if let Some((i, d)) = deltas.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)) {
            if *d > 10.0 * median && *d > tol {
                scan.warnings.push(format!(
                    "branch {k} moves by {d:.3e} between {:.6} and {:.6} (over 10x its running median); consider a denser grid",
                    points[i],
                    points[i + 1]
                ));
            }
        }
    }

    // A sampled branch value is only trustworthy down to the eigensolver
    // noise floor eps * ||Lambda||; near a pole the matrix blows up and tiny
    // branch values are pure cancellation noise, never a certified root.
    let resolvable = |i: usize| -> bool {
        let scale = branches[i].iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
        f64::EPSILON * scale <= tol
    };

    let mut raw_roots: Vec<(f64, f64)> = Vec::new(); // (lambda, |s|)
    for k in 0..m {
        for i in 0..grid - 1 {
            let (s0, s1) = (branches[i][k], branches[i + 1][k]);
            if s0.abs() <= tol {
                if resolvable(i) {
                    raw_roots.push((points[i], s0.abs()));
                }
                continue;
            }
            if s0 > 0.0 && s1 <= 0.0 {
                if let Some(root) = bisect_branch(provider, k, (points[i], points[i + 1]), tol)? {
                    raw_roots.push(root);
                }
            }
        }
        let last = branches[grid - 1][k];
        if last.abs() <= tol && resolvable(grid - 1) {
            raw_roots.push((points[grid - 1], last.abs()));
        }
    }

    // Merge roots from different branches (or duplicate detections) that
    // coincide; multiplicities come from the kernel count at the point.
    raw_roots.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut clusters: Vec<(f64, f64)> = Vec::new();
    for (lam, s) in raw_roots {
        match clusters.last_mut() {
            Some((cl, cs)) if (lam - *cl).abs() <= 1e-7 * (1.0 + cl.abs()) => {
                if s < *cs {
                    *cl = lam;
                    *cs = s;
                }
            }
            _ => clusters.push((lam, s)),
        }
    }
    for (lam, s) in clusters {
        let matrix = provider.dtn(Complex64::new(lam, 0.0))?;
        let eigs = sorted_weighted_eigenvalues(&matrix, provider.boundary_space())?;
        let scale = eigs.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
        if f64::EPSILON * scale > tol {
            scan.warnings.push(format!(
                "candidate root near {lam:.9} discarded: eigensolver noise floor {:.3e} exceeds tol",
                f64::EPSILON * scale
            ));
            continue;
        }
        let threshold = KERNEL_REL * (1.0 + scale);
        let multiplicity = eigs.iter().filter(|e| e.abs() <= threshold).count().max(1);
        let halo = 1e-7 * (1.0 + lam.abs());
        scan.hits.push(SpectralHit {
            lambda: lam,
            multiplicity,
            min_eig_residual: s,
            bracket: (lam - halo, lam + halo),
            on_dirichlet_point: false,
        });
    }
    Ok(())
}

fn bisect_branch(
    provider: &dyn DtnProvider,
    branch: usize,
    bracket: (f64, f64),
    tol: f64,
) -> Result<Option<(f64, f64)>> {
    let (mut lo, mut hi) = bracket;
    let eval = |l: f64| -> Result<f64> {
        let lam = provider.dtn(Complex64::new(l, 0.0))?;
        Ok(sorted_weighted_eigenvalues(&lam, provider.boundary_space())?[branch])
    };
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let s = eval(mid)?;
        if s > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * (1.0 + mid.abs()) {
            break;
        }
    }
    let s = eval(mid)?;
    if s.abs() <= tol {
        Ok(Some((mid, s.abs())))
    } else {
        // A jump discontinuity across zero, not a root: report nothing
        // rather than inventing one.
        Ok(None)
    }
}

/// Probes an excised Dirichlet point for a zero/pole collision: a branch of
/// `Lambda` extends continuously through `p` and crosses zero there iff the
/// smallest eigenvalue magnitude decays linearly in the distance to `p` on
/// both sides. Probe radii adapt to the surrounding gap and every value must
/// sit well above the eigensolver noise floor before it counts.
fn probe_dirichlet_point(
    provider: &dyn DtnProvider,
    p: f64,
    all_points: &[f64],
) -> Result<Option<SpectralHit>> {
    let delta = provider.delta();
    let nearest_other = all_points
        .iter()
        .filter(|q| (**q - p).abs() > delta)
        .map(|q| (q - p).abs())
        .fold(f64::INFINITY, f64::min);
    let r_max = if nearest_other.is_finite() {
        nearest_other / 8.0
    } else {
        1e-2 * (1.0 + p.abs())
    };
    if r_max < 16.0 * delta {
        return Ok(None);
    }
    // Ascending ladder of radii, a factor 4 apart.
    let mut radii: Vec<f64> = (0..6).map(|j| r_max / 4f64.powi(5 - j)).collect();
    radii.retain(|r| *r >= 16.0 * delta);
    if radii.len() < 4 {
        return Ok(None);
    }

    let eval = |l: f64| -> Result<(f64, f64, Vec<f64>)> {
        let lam = provider.dtn(Complex64::new(l, 0.0))?;
        let eigs = sorted_weighted_eigenvalues(&lam, provider.boundary_space())?;
        let v = eigs.iter().fold(f64::INFINITY, |acc, e| acc.min(e.abs()));
        let scale = eigs.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
        Ok((v, f64::EPSILON * scale, eigs))
    };

    let mut innermost = f64::INFINITY;
    let mut outer_eigs: Vec<f64> = Vec::new();
    let mut outer_min = 0.0;
    for side in [-1.0, 1.0] {
        let mut rows = Vec::with_capacity(radii.len());
        for &r in &radii {
            rows.push(eval(p + side * r)?);
        }
        // Usable suffix: radii where the signal clears the noise floor.
        let start = (0..rows.len())
            .find(|&i| rows[i..].iter().all(|(v, noise, _)| *v >= 100.0 * noise))
            .unwrap_or(rows.len());
        if rows.len() - start < 4 {
            return Ok(None);
        }
        // Linear decay toward p: each 4x radius step scales the smallest
        // magnitude by roughly 4.
        for i in start..rows.len() - 1 {
            let q = rows[i + 1].0 / rows[i].0.max(f64::MIN_POSITIVE);
            if !(2.2..=7.0).contains(&q) {
                return Ok(None);
            }
        }
        innermost = innermost.min(rows[start].0);
        let (v, _, eigs) = rows.last().cloned().expect("nonempty ladder");
        outer_eigs = eigs;
        outer_min = v;
    }
    let multiplicity = outer_eigs
        .iter()
        .filter(|e| e.abs() <= 5.0 * outer_min)
        .count()
        .max(1);
    let r0 = radii[0];
    Ok(Some(SpectralHit {
        lambda: p,
        multiplicity,
        min_eig_residual: innermost,
        bracket: (p - r0, p + r0),
        on_dirichlet_point: true,
    }))
}

/// Monotonicity of the ordered eigenvalue branches over a Dirichlet-free
/// real interval.
#[derive(Debug, Clone)]
pub struct MonotonicityReport {
    /// Largest increase between consecutive samples across all branches
    /// (negative when every branch strictly decreases).
    pub max_violation: f64,
    pub samples: usize,
    pub branches: usize,
}

pub fn monotonicity_suite(
    provider: &dyn DtnProvider,
    interval: (f64, f64),
    samples: usize,
) -> Result<MonotonicityReport> {
    let (a, b) = interval;
    if a.is_nan() || b.is_nan() || a >= b || samples < 2 {
        return Err(Error::OutOfDomain(
            "monotonicity needs an interval with a < b and at least 2 samples".into(),
        ));
    }
    let delta = provider.delta();
    if !provider.dirichlet_points_in(a - delta, b + delta).is_empty() {
        return Err(Error::OutOfDomain(format!(
            "interval [{a}, {b}] is not Dirichlet-free with margin {delta:.1e}"
        )));
    }
    let step = (b - a) / (samples as f64 - 1.0);
    let points: Vec<f64> = (0..samples).map(|i| a + step * i as f64).collect();
    let branches = sample_branches(provider, &points)?;
    let m = provider.boundary_dim();
    let mut max_violation = f64::NEG_INFINITY;
    for k in 0..m {
        for i in 0..samples - 1 {
            max_violation = max_violation.max(branches[i + 1][k] - branches[i][k]);
        }
    }
    Ok(MonotonicityReport {
        max_violation,
        samples,
        branches: m,
    })
}

/// Herglotz sign checks at one upper-half-plane sample.
#[derive(Debug, Clone)]
pub struct HerglotzSample {
    pub z: Complex64,
    /// Largest eigenvalue of `Im Lambda(z)`; <= 0 up to rounding.
    pub dtn_im_max: f64,
    /// Smallest eigenvalue of `Im Lambda(z)^{-1}`; >= 0 up to rounding.
    pub ntd_im_min: f64,
}

#[derive(Debug, Clone)]
pub struct HerglotzReport {
    pub rows: Vec<HerglotzSample>,
    pub worst_dtn_im_max: f64,
    pub worst_ntd_im_min: f64,
}

pub fn herglotz_suite(
    provider: &dyn DtnProvider,
    z_samples: &[Complex64],
) -> Result<HerglotzReport> {
    let space = provider.boundary_space();
    let mut rows = Vec::with_capacity(z_samples.len());
    let mut worst_max = f64::NEG_INFINITY;
    let mut worst_min = f64::INFINITY;
    for &z in z_samples {
        if z.im <= 0.0 {
            return Err(Error::OutOfDomain(format!(
                "herglotz samples need Im z > 0, got {z}"
            )));
        }
        let lam = provider.dtn(z)?;
        let im = imaginary_part(&lam, space)?;
        let dtn_eigs = eigenvalues_self_adjoint(&im, space)?;
        let dtn_im_max = dtn_eigs.last().copied().unwrap_or(0.0);

        let inv = solve(&lam, &CMatrix::identity(lam.nrows(), lam.ncols()))?;
        let im_inv = imaginary_part(&inv, space)?;
        let ntd_eigs = eigenvalues_self_adjoint(&im_inv, space)?;
        let ntd_im_min = ntd_eigs.first().copied().unwrap_or(0.0);

        worst_max = worst_max.max(dtn_im_max);
        worst_min = worst_min.min(ntd_im_min);
        rows.push(HerglotzSample {
            z,
            dtn_im_max,
            ntd_im_min,
        });
    }
    Ok(HerglotzReport {
        rows,
        worst_dtn_im_max: worst_max,
        worst_ntd_im_min: worst_min,
    })
}

/// One radius of a pole probe.
#[derive(Debug, Clone)]
pub struct PoleProbeRow {
    pub radius: f64,
    pub inverse_norm: f64,
    /// `radius * ||Lambda(lambda + radius)^{-1}||`; flat for a first-order pole.
    pub product: f64,
}

#[derive(Debug, Clone)]
pub struct PoleProbeReport {
    pub rows: Vec<PoleProbeRow>,
    /// The products stay bounded as the radius shrinks (first-order pole).
    pub bounded: bool,
    /// The products stay bounded away from zero (a pole is present at all).
    pub pole_detected: bool,
}

pub fn pole_probe(provider: &dyn DtnProvider, lambda: f64, radii: &[f64]) -> Result<PoleProbeReport> {
    if radii.is_empty() || radii.windows(2).any(|w| w[1] >= w[0]) || radii.iter().any(|r| *r <= 0.0)
    {
        return Err(Error::OutOfDomain(
            "pole probe needs a strictly decreasing list of positive radii".into(),
        ));
    }
    let delta = provider.delta();
    let r_max = radii[0];
    let nearby = provider.dirichlet_points_in(lambda - 2.0 * r_max, lambda + 2.0 * r_max);
    if !nearby.is_empty() {
        return Err(Error::NotAnIsolatedHit {
            lambda,
            reason: format!("Dirichlet point at {:.6} inside the probe range", nearby[0]),
        });
    }
    if let Some(neumann) = provider.neumann_points() {
        if neumann
            .iter()
            .any(|l| (*l - lambda).abs() > delta && (*l - lambda).abs() <= r_max)
        {
            return Err(Error::NotAnIsolatedHit {
                lambda,
                reason: "another Neumann eigenvalue inside the probe range".into(),
            });
        }
    }
    let space = provider.boundary_space();
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let lam = provider.dtn(Complex64::new(lambda + r, 0.0))?;
        let inv = solve(&lam, &CMatrix::identity(lam.nrows(), lam.ncols()))?;
        let mut scaled = inv;
        for i in 0..scaled.nrows() {
            let si = space.weights()[i].sqrt();
            for j in 0..scaled.ncols() {
                scaled[(i, j)] *= si / space.weights()[j].sqrt();
            }
        }
        let norm = spectral_norm(&scaled);
        rows.push(PoleProbeRow {
            radius: r,
            inverse_norm: norm,
            product: r * norm,
        });
    }
    let first = rows.first().map(|r| r.product).unwrap_or(0.0);
    let last = rows.last().map(|r| r.product).unwrap_or(0.0);
    let max = rows.iter().map(|r| r.product).fold(0.0, f64::max);
    let bounded = max <= 10.0 * first.max(f64::MIN_POSITIVE);
    let pole_detected = last >= 0.1 * first;
    Ok(PoleProbeReport {
        rows,
        bounded,
        pole_detected,
    })
}

#[derive(Debug, Clone)]
pub struct IsolationReport {
    /// Minimum of the smallest singular value of `Lambda(z)` over the ring.
    pub ring_min_sigma: f64,
    /// Smallest singular value at the center (when the center is off the
    /// Dirichlet set); small iff `lambda` lies in the pencil spectrum.
    pub center_sigma: Option<f64>,
    /// A strictly positive ring minimum certifies `lambda` is isolated in
    /// the pencil spectrum.
    pub isolated: bool,
}

pub fn isolation_probe(
    provider: &dyn DtnProvider,
    lambda: f64,
    ring_radius: f64,
    ring_samples: usize,
) -> Result<IsolationReport> {
    if ring_radius.is_nan() || ring_radius <= 0.0 || ring_samples < 4 {
        return Err(Error::OutOfDomain(
            "isolation probe needs a positive radius and at least 4 ring samples".into(),
        ));
    }
    let delta = provider.delta();
    let near =
        provider.dirichlet_points_in(lambda - ring_radius - delta, lambda + ring_radius + delta);
    for q in &near {
        // The ring |z - lambda| = r must stay off the excised set; a point
        // whose distance to the center is within delta of r touches it.
        let d = (q - lambda).abs();
        if (d - ring_radius).abs() < delta {
            return Err(Error::RingTouchesDirichlet {
                lambda,
                radius: ring_radius,
            });
        }
    }
    let space = provider.boundary_space();
    let mut ring_min = f64::INFINITY;
    let mut scale = 0.0f64;
    for i in 0..ring_samples {
        let angle = 2.0 * std::f64::consts::PI * i as f64 / ring_samples as f64;
        let z = Complex64::new(lambda, 0.0) + Complex64::from_polar(ring_radius, angle);
        let lam = provider.dtn(z)?;
        ring_min = ring_min.min(sigma_min(&lam, space));
        scale = scale.max(spectral_norm(&lam));
    }
    let center_sigma = if dist_to_real_set(Complex64::new(lambda, 0.0), &near) >= delta {
        let lam = provider.dtn(Complex64::new(lambda, 0.0))?;
        Some(sigma_min(&lam, space))
    } else {
        None
    };
    Ok(IsolationReport {
        ring_min_sigma: ring_min,
        center_sigma,
        isolated: ring_min > KERNEL_REL * (1.0 + scale),
    })
}

/// One named residual check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self {
            pass: residual.is_finite() && residual <= threshold,
            name: name.into(),
            residual,
            threshold,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct IdentityReport {
    pub checks: Vec<CheckOutcome>,
}

impl IdentityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn worst(&self) -> Option<&CheckOutcome> {
        self.checks
            .iter()
            .max_by(|a, b| (a.residual / a.threshold).total_cmp(&(b.residual / b.threshold)))
    }
}

/// Runs the identity battery on a pair at the given sample points: transfer
/// laws, projection idempotency, DtN difference and derivative formulas, the
/// NtD difference formula, Green's identity, and Krein's resolvent formula.
/// Thresholds are fixed here, once.
pub fn identity_suite(
    pair: &FiniteBoundaryPair,
    z_samples: &[Complex64],
    seed: u64,
) -> Result<IdentityReport> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let n = pair.state_dim();
    let id_n = CMatrix::identity(n, n);

    let usable: Vec<Complex64> = z_samples
        .iter()
        .cloned()
        .filter(|z| pair.dist_to_dirichlet(*z) >= pair.delta())
        .collect();
    if usable.len() < 2 {
        return Err(Error::OutOfDomain(
            "identity suite needs at least two samples off the Dirichlet spectrum".into(),
        ));
    }

    let mut u_inverse = 0.0f64;
    let mut u_transport = 0.0f64;
    let mut proj_idem = 0.0f64;
    let mut dtn_diff = 0.0f64;
    let mut ntd_diff = 0.0f64;
    let mut derivative = 0.0f64;
    let mut green = 0.0f64;
    let mut krein = 0.0f64;

    for (i, &z) in usable.iter().enumerate() {
        let w = usable[(i + 1) % usable.len()];

        // Transfer laws, measured relative to the operator scales (the
        // product residual grows like ||U||^2 near the excised set).
        let u_zw = pair.transfer(z, w)?;
        let u_wz = pair.transfer(w, z)?;
        let u_scale = 1.0 + spectral_norm(&u_zw) * spectral_norm(&u_wz);
        u_inverse = u_inverse.max(spectral_norm(&(&u_zw * &u_wz - &id_n)) / u_scale);
        let s_w = pair.solution_operator(w)?;
        let s_z = pair.solution_operator(z)?;
        let t_scale = 1.0 + spectral_norm(&u_zw) * spectral_norm(&s_w);
        u_transport = u_transport.max(spectral_norm(&(&u_zw * &s_w - &s_z)) / t_scale);

        // Projection idempotency.
        let proj = pair.projection(z)?;
        proj_idem = proj_idem.max(spectral_norm(&(&proj * &proj - &proj)));

        // DtN difference formula:
        // Lambda(z) - Lambda(w) = -(z - w) S(conj z)° S(w).
        let lam_z = pair.dtn(z)?;
        let lam_w = pair.dtn(w)?;
        let s_zc = pair.solution_operator(z.conj())?;
        let s_zc_adj = weighted_adjoint(&s_zc, pair.boundary(), pair.state())?;
        let diff = &lam_z - &lam_w + (&s_zc_adj * &s_w) * (z - w);
        dtn_diff = dtn_diff.max(spectral_norm(&diff));

        // NtD difference formula when both points are off the Neumann set:
        // Lambda(z)^{-1} - Lambda(w)^{-1} = (z-w) Gamma R^N(w) (Gamma R^N(conj z))°.
        if pair.dist_to_neumann(z) >= pair.delta() && pair.dist_to_neumann(w) >= pair.delta() {
            let ntd_z = pair.ntd(z)?.matrix;
            let ntd_w = pair.ntd(w)?.matrix;
            let shifted_w = pair.neumann_op() - &id_n * w;
            let grn_w = pair.gamma() * solve(&shifted_w, &id_n)?;
            let shifted_zc = pair.neumann_op() - &id_n * z.conj();
            let grn_zc = pair.gamma() * solve(&shifted_zc, &id_n)?;
            let grn_zc_adj = weighted_adjoint(&grn_zc, pair.state(), pair.boundary())?;
            let resid = &ntd_z - &ntd_w - (grn_w * grn_zc_adj) * (z - w);
            ntd_diff = ntd_diff.max(spectral_norm(&resid));

            krein = krein.max(pair.krein_residual(z)?);
        }

        // Analytic derivative vs central differences along the real axis:
        // Lambda'(z) = -S(conj z)° S(z).
        let h = 1e-5;
        let dz = Complex64::new(h, 0.0);
        if pair.dist_to_dirichlet(z + dz) >= pair.delta()
            && pair.dist_to_dirichlet(z - dz) >= pair.delta()
        {
            let analytic = -(&s_zc_adj * &s_z);
            let fd = (pair.dtn(z + dz)? - pair.dtn(z - dz)?) / Complex64::new(2.0 * h, 0.0);
            let rel =
                spectral_norm(&(&fd - &analytic)) / spectral_norm(&analytic).max(f64::MIN_POSITIVE);
            derivative = derivative.max(rel);
        }

        // Green's identity on random unit vectors.
        for _ in 0..4 {
            let f = crate::numcore::CVector::from_fn(n, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let g = crate::numcore::CVector::from_fn(n, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let f = f.scale(1.0 / f.norm());
            let g = g.scale(1.0 / g.norm());
            green = green.max(pair.green_residual(&f, &g));
        }
    }

    checks.push(CheckOutcome::new("transfer_inverse_law", u_inverse, 1e-13));
    checks.push(CheckOutcome::new(
        "transfer_transports_solutions",
        u_transport,
        1e-12,
    ));
    checks.push(CheckOutcome::new("projection_idempotent", proj_idem, 1e-12));
    checks.push(CheckOutcome::new("dtn_difference_formula", dtn_diff, 1e-11));
    checks.push(CheckOutcome::new("ntd_difference_formula", ntd_diff, 1e-11));
    checks.push(CheckOutcome::new(
        "dtn_derivative_vs_central_difference",
        derivative,
        1e-6,
    ));
    checks.push(CheckOutcome::new("green_identity", green, 1e-12));
    checks.push(CheckOutcome::new("krein_resolvent_formula", krein, 1e-10));
    Ok(IdentityReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::eig_self_adjoint;
    use crate::samples;
    use std::f64::consts::PI;

    #[test]
    fn path3_scan_finds_exact_spectrum() {
        let p = samples::path3_pair();
        let scan = find_neumann_eigenvalues(&p, (-0.5, 4.0), 256, 1e-10).unwrap();
        let want = [0.0, 1.0, 3.0];
        assert_eq!(scan.hits.len(), 3, "hits: {:?}", scan.hits);
        for (hit, want) in scan.hits.iter().zip(want) {
            assert!((hit.lambda - want).abs() < 1e-9, "{} vs {want}", hit.lambda);
            assert_eq!(hit.multiplicity, 1);
            assert!(hit.min_eig_residual <= 1e-10);
            assert!(!hit.on_dirichlet_point);
        }
        // One excised tube around the Dirichlet point 2.
        assert_eq!(scan.excised.len(), 1);
        assert!((scan.excised[0].0 - 2.0).abs() < 1e-6);
    }

    #[test]
    fn single_chain_roots_match_cot_zeros() {
        let c = ChainPair::new(vec![1.0], vec![1.0]).unwrap();
        let provider = ChainProvider::new(c);
        let scan = find_neumann_eigenvalues(&provider, (0.0, 60.0), 256, 1e-10).unwrap();
        let want = [(0.5 * PI).powi(2), (1.5 * PI).powi(2)];
        assert_eq!(scan.hits.len(), 2, "hits: {:?}", scan.hits);
        for (hit, want) in scan.hits.iter().zip(want) {
            assert!((hit.lambda - want).abs() < 1e-8 * want);
        }
    }

    #[test]
    fn window_inside_tube_is_an_error() {
        let p = samples::path3_pair();
        let err = find_neumann_eigenvalues(&p, (2.0 - 1e-9, 2.0 + 1e-9), 16, 1e-10).unwrap_err();
        assert!(matches!(err, Error::WindowInsideDirichletPoint { .. }));
    }

    #[test]
    fn degenerate_eigenvalues_get_multiplicity() {
        // Direct sum of two copies of the 3-path: every eigenvalue doubles.
        let p = samples::path3_pair();
        let sum = crate::constructions::direct_sum(&p, &p).unwrap();
        let scan = find_neumann_eigenvalues(&sum, (-0.5, 4.0), 256, 1e-10).unwrap();
        assert_eq!(scan.hits.len(), 3);
        for hit in &scan.hits {
            assert_eq!(hit.multiplicity, 2, "at {}", hit.lambda);
        }
    }

    #[test]
    fn interval_scan_recovers_neumann_points_on_dirichlet_set() {
        // The interval's Neumann eigenvalues k^2 pi^2 (k >= 1) coincide with
        // Dirichlet points; the collision probe must recover them while the
        // determinant det Lambda(lambda) = -lambda only vanishes at zero.
        let provider = IntervalProvider::new(IntervalPair::new(1.0).unwrap());
        let scan = find_neumann_eigenvalues(&provider, (-0.5, 100.0), 512, 1e-10).unwrap();
        let want = [0.0, PI * PI, 4.0 * PI * PI, 9.0 * PI * PI];
        assert_eq!(scan.hits.len(), 4, "hits: {:?}", scan.hits);
        for (hit, want) in scan.hits.iter().zip(want) {
            assert!(
                (hit.lambda - want).abs() < 1e-6 * (1.0 + want),
                "{} vs {}",
                hit.lambda,
                want
            );
        }
        assert!(!scan.hits[0].on_dirichlet_point);
        assert!(scan.hits[1..].iter().all(|h| h.on_dirichlet_point));
    }

    #[test]
    fn monotonicity_on_oracle_providers() {
        let p = samples::path3_pair();
        let rep = monotonicity_suite(&p, (-1.0, -0.1), 64).unwrap();
        assert!(rep.max_violation <= 1e-10);
        assert_eq!(rep.branches, 2);

        let provider = IntervalProvider::new(IntervalPair::new(1.0).unwrap());
        let rep = monotonicity_suite(&provider, (-2.0, -0.1), 64).unwrap();
        assert!(rep.max_violation <= 1e-10);

        // Negative lambda makes the DtN PSD.
        let lam = provider.dtn(Complex64::new(-1.0, 0.0)).unwrap();
        let eigs = sorted_weighted_eigenvalues(&lam, provider.boundary_space()).unwrap();
        assert!(eigs[0] > 0.0);
    }

    #[test]
    fn monotonicity_rejects_intervals_with_dirichlet_points() {
        let p = samples::path3_pair();
        assert!(monotonicity_suite(&p, (1.5, 2.5), 16).is_err());
    }

    #[test]
    fn herglotz_signs_on_path3_and_interval() {
        let p = samples::path3_pair();
        let rep = herglotz_suite(
            &p,
            &[
                Complex64::new(0.0, 1.0),
                Complex64::new(1.0, 1.0),
                Complex64::new(3.0, 0.5),
            ],
        )
        .unwrap();
        assert!(rep.worst_dtn_im_max <= 1e-12);
        assert!(rep.worst_ntd_im_min >= -1e-12);

        let provider = IntervalProvider::new(IntervalPair::new(1.0).unwrap());
        let rep = herglotz_suite(&provider, &[Complex64::new(2.0, 0.5)]).unwrap();
        assert!(rep.worst_dtn_im_max <= 1e-12);
    }

    #[test]
    fn herglotz_conjugate_antisymmetry() {
        let p = samples::path3_pair();
        let z = Complex64::new(0.7, 0.9);
        let space = p.boundary();
        let im_up = imaginary_part(&p.dtn(z).unwrap(), space).unwrap();
        let im_down = imaginary_part(&p.dtn(z.conj()).unwrap(), space).unwrap();
        assert!(spectral_norm(&(im_up + im_down)) < 1e-12);
    }

    #[test]
    fn herglotz_rejects_lower_half_plane() {
        let p = samples::path3_pair();
        assert!(herglotz_suite(&p, &[Complex64::new(1.0, -0.5)]).is_err());
    }

    #[test]
    fn pole_probe_flat_at_eigenvalues() {
        let p = samples::path3_pair();
        let radii = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
        for lambda in [0.0, 1.0] {
            let rep = pole_probe(&p, lambda, &radii).unwrap();
            assert!(rep.bounded, "bounded at {lambda}");
            assert!(rep.pole_detected, "pole at {lambda}");
        }
        // Not an eigenvalue: products decay linearly, no pole.
        let rep = pole_probe(&p, 0.5, &radii).unwrap();
        assert!(rep.bounded);
        assert!(!rep.pole_detected);

        // Single-interval chain (Dirichlet at 0, Neumann at 1): first
        // eigenvalue of the pencil branch sqrt(z) cot(sqrt(z)) is (pi/2)^2;
        // the products stay bounded there.
        let chain = ChainProvider::new(ChainPair::new(vec![1.0], vec![1.0]).unwrap());
        let rep = pole_probe(&chain, (0.5 * PI).powi(2), &radii).unwrap();
        assert!(rep.bounded && rep.pole_detected);
    }

    #[test]
    fn pole_probe_rejects_radii_spanning_dirichlet_points() {
        let p = samples::path3_pair();
        assert!(pole_probe(&p, 3.0, &[1e-2, 1e-4]).is_ok());
        assert!(matches!(
            pole_probe(&p, 3.0, &[1.5, 1e-4]),
            Err(Error::NotAnIsolatedHit { .. })
        ));
    }

    #[test]
    fn isolation_probe_certifies_gaps() {
        let p = samples::path3_pair();
        let rep = isolation_probe(&p, 1.0, 0.25, 16).unwrap();
        assert!(rep.isolated);
        assert!(rep.ring_min_sigma > 0.01);
        let center = rep.center_sigma.unwrap();
        assert!(center < 1e-12, "center sits in the pencil spectrum");

        // 0.5 is not in the pencil spectrum: ring positive AND center positive.
        let rep = isolation_probe(&p, 0.5, 0.25, 16).unwrap();
        assert!(rep.isolated);
        assert!(rep.center_sigma.unwrap() > 0.01);
    }

    #[test]
    fn isolation_probe_rejects_rings_touching_dirichlet() {
        let p = samples::path3_pair();
        let err = isolation_probe(&p, 1.0, 1.0, 16).unwrap_err();
        assert!(matches!(err, Error::RingTouchesDirichlet { .. }));
    }

    #[test]
    fn identity_suite_on_path3() {
        let p = samples::path3_pair();
        let zs = [
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.5, 1.0),
            Complex64::new(2.0, 1.0),
        ];
        let rep = identity_suite(&p, &zs, 7).unwrap();
        assert!(rep.all_pass(), "failing: {:?}", rep.worst());
    }

    #[test]
    fn identity_suite_on_trivial_pair() {
        let p = FiniteBoundaryPair::new(
            WeightedSpace::unit(1),
            WeightedSpace::unit(1),
            CMatrix::from_row_slice(1, 1, &[Complex64::new(0.5, 0.0)]),
            CMatrix::identity(1, 1),
        )
        .unwrap();
        let zs = [Complex64::new(-1.0, 0.0), Complex64::new(0.2, 0.8)];
        let rep = identity_suite(&p, &zs, 3).unwrap();
        assert!(rep.all_pass());
        for c in &rep.checks {
            if c.name != "dtn_derivative_vs_central_difference" {
                assert!(c.residual < 1e-13, "{}: {}", c.name, c.residual);
            }
        }
    }

    #[test]
    fn identity_suite_on_random_graph_pairs() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for seed in 0..100u64 {
            let n = 5 + (seed as usize * 5) % 36;
            let m = 1 + (seed as usize) % (n - 1).min(8);
            let p = samples::random_graph_pair(n, m, seed);
            let zs: Vec<Complex64> = (0..5)
                .map(|_| samples::random_z_off_spectra(&p, &mut rng, 0.1))
                .collect();
            let rep = identity_suite(&p, &zs, seed).unwrap();
            assert!(rep.all_pass(), "seed {seed}: {:?}", rep.worst());
        }
    }

    #[test]
    fn kernel_transport_at_hits() {
        // For each pencil zero, S(lambda) maps near-kernel vectors of
        // Lambda(lambda) into near-kernel vectors of N - lambda.
        let p = samples::path3_pair();
        for lambda in [0.0, 1.0, 3.0] {
            let z = Complex64::new(lambda, 0.0);
            let lam = p.dtn(z).unwrap();
            let spec =
                eig_self_adjoint(&hermitian_part(&lam, p.boundary()).unwrap(), p.boundary())
                    .unwrap();
            let s = p.solution_operator(z).unwrap();
            let n = p.state_dim();
            let shifted = p.neumann_op() - CMatrix::identity(n, n) * z;
            let mut found = 0;
            for k in 0..p.boundary_dim() {
                if spec.eigenvalues[k].abs() <= 1e-8 {
                    let phi = spec.eigenvectors.column(k).into_owned();
                    let transported = &s * &phi;
                    let resid = (&shifted * &transported).norm();
                    assert!(resid <= 1e-8, "residual {resid} at {lambda}");
                    found += 1;
                }
            }
            assert_eq!(found, 1);
        }
    }

    #[test]
    fn scan_matches_direct_eigensolve_on_random_pairs() {
        // Completeness at desk scale: the multiset of pencil zeros off the
        // Dirichlet set equals the Neumann spectrum there.
        for seed in [5u64, 6, 7] {
            let p = samples::random_graph_pair(10, 3, seed);
            let lo = -0.5;
            let hi = p.neumann_eigenvalues().last().unwrap() + 0.5;
            let scan = find_neumann_eigenvalues(&p, (lo, hi), 512, 1e-9).unwrap();
            let mut expected: Vec<f64> = Vec::new();
            for &l in p.neumann_eigenvalues() {
                if dist_to_real_set(Complex64::new(l, 0.0), p.dirichlet_spectrum()) > 1e-6 {
                    expected.push(l);
                }
            }
            let mut got: Vec<f64> = Vec::new();
            for h in &scan.hits {
                for _ in 0..h.multiplicity {
                    got.push(h.lambda);
                }
            }
            assert_eq!(got.len(), expected.len(), "seed {seed}: {scan:?}");
            for (g, e) in got.iter().zip(&expected) {
                assert!((g - e).abs() < 1e-7 * (1.0 + e.abs()), "seed {seed}");
            }
        }
    }

    #[test]
    fn coupled_ntd_provider_matches_direct_pair() {
        let p1 = samples::path3_pair();
        let mut g2 = samples::path3_graph();
        g2.edges[1].rho = 1.4;
        let p2 = crate::graph::graph_pair(&g2).unwrap();
        let coupled = CoupledNtdProvider::new(&p1, &p2).unwrap();
        let direct = crate::constructions::dirichlet_coupled_pair(&p1, &p2).unwrap();
        let z = Complex64::new(-1.0, 0.0);
        let a = coupled.dtn(z).unwrap();
        let b = direct.dtn(z).unwrap();
        assert!(spectral_norm(&(a - b)) < 1e-11);
    }

    #[test]
    fn equal_parts_halve_the_dtn() {
        let p = samples::path3_pair();
        let coupled = CoupledNtdProvider::new(&p, &p).unwrap();
        let z = Complex64::new(-1.0, 0.0);
        let got = coupled.dtn(z).unwrap();
        let want = p.dtn(z).unwrap() * Complex64::new(0.5, 0.0);
        assert!(spectral_norm(&(got - want)) < 1e-12);
    }

    #[test]
    fn bounded_mod_provider_shares_pencil_zeros() {
        let p = samples::path3_pair();
        let provider = BoundedModProvider::new(&p).unwrap();
        let scan = find_neumann_eigenvalues(&provider, (-0.5, 4.0), 256, 1e-9).unwrap();
        let want = [0.0, 1.0, 3.0];
        assert_eq!(scan.hits.len(), 3);
        for (hit, want) in scan.hits.iter().zip(want) {
            assert!((hit.lambda - want).abs() < 1e-7);
        }
    }
}
