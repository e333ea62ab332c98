//! The Dirac operator `D = −i d/dθ + A` on S¹ in a truncated Fourier basis:
//! spectra, spectral slices, `Det` window dimensions and spectral flow.

use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::liealg::{c, hermiticity_defect, identity, CMat, C64, I};
use crate::random::SeededRng;

/// Hermitian `p × p` potential `θ ↦ A(θ)`.
pub type Potential = Arc<dyn Fn(f64) -> CMat + Send + Sync>;

/// Unitary loop with its θ-derivative.
pub type GaugeLoop = Arc<dyn Fn(f64) -> (CMat, CMat) + Send + Sync>;

pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues closer than this are one cluster when measuring gaps.
pub const CLUSTER_TOL: f64 = 1e-9;
const MAX_BISECTION_DEPTH: u32 = 24;

/// `D_A` with modes `−N..=N`; block `(m, n)` is `m δ_{mn} + Â_{m−n}`.
#[derive(Debug, Clone)]
pub struct FourierDirac {
    truncation: usize,
    p: usize,
    matrix: CMat,
    eigenvalues: Vec<f64>,
}

impl FourierDirac {
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvalues with `|λ| ≤ N/2`, away from truncation artefacts.
    pub fn central(&self) -> Vec<f64> {
        let w = self.truncation as f64 / 2.0;
        self.eigenvalues.iter().copied().filter(|x| x.abs() <= w).collect()
    }

    pub fn count_below(&self, level: f64) -> usize {
        count_below(&self.eigenvalues, level)
    }

    /// Distance from `level` to the nearest eigenvalue.
    pub fn distance_to_spectrum(&self, level: f64) -> f64 {
        self.eigenvalues
            .iter()
            .map(|x| (x - level).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

fn count_below(sorted: &[f64], level: f64) -> usize {
    sorted.partition_point(|&x| x < level)
}

/// Assemble `D_A` from the Fourier coefficients of `A`, sampled on `8N + 8` nodes.
pub fn assemble(a: &Potential, p: usize, n: usize) -> Result<FourierDirac> {
    let m = 8 * n + 8;
    let samples: Vec<CMat> = (0..m).map(|j| a(2.0 * PI * j as f64 / m as f64)).collect();
    for s in &samples {
        if s.nrows() != p || s.ncols() != p {
            return Err(Error::DimensionMismatch(format!(
                "potential is {}x{}, expected {p}x{p}",
                s.nrows(),
                s.ncols()
            )));
        }
        let d = hermiticity_defect(s);
        if d > HERMITIAN_TOL {
            return Err(Error::NonHermitian(d));
        }
    }
    // Â_k for k ∈ [−2N, 2N]
    let coeff = |k: i64| -> CMat {
        let mut acc = CMat::zeros(p, p);
        for (j, s) in samples.iter().enumerate() {
            let phase = C64::from_polar(1.0, -2.0 * PI * (k * j as i64) as f64 / m as f64);
            acc += s * phase;
        }
        acc / c(m as f64)
    };
    let coeffs: Vec<CMat> = (-2 * n as i64..=2 * n as i64).map(coeff).collect();
    let modes = 2 * n + 1;
    let mut matrix = CMat::zeros(modes * p, modes * p);
    for r in 0..modes {
        for s in 0..modes {
            let block = &coeffs[(r as i64 - s as i64 + 2 * n as i64) as usize];
            matrix.view_mut((r * p, s * p), (p, p)).copy_from(block);
        }
        let k = r as f64 - n as f64;
        for i in 0..p {
            matrix[(r * p + i, r * p + i)] += c(k);
        }
    }
    // symmetrize away rounding in the coefficient sums
    let matrix = (&matrix + matrix.adjoint()) * c(0.5);
    let mut eigenvalues: Vec<f64> = matrix.clone().symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    Ok(FourierDirac {
        truncation: n,
        p,
        matrix,
        eigenvalues,
    })
}

pub fn constant_potential(m: CMat) -> Potential {
    Arc::new(move |_| m.clone())
}

/// `A(θ) = a + b cos θ` (times the identity).
pub fn cosine_potential(p: usize, a: f64, b: f64) -> Potential {
    Arc::new(move |t| identity(p) * c(a + b * t.cos()))
}

/// A random smooth Hermitian potential with a few low harmonics.
pub fn random_potential(rng: &mut SeededRng, p: usize, harmonics: usize, scale: f64) -> Potential {
    let mut herm = || {
        let mut h = CMat::zeros(p, p);
        for i in 0..p {
            for j in i..p {
                let z = if i == j {
                    c(rng.random_range(-scale..scale))
                } else {
                    C64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
                };
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        h
    };
    let terms: Vec<(CMat, CMat)> = (0..=harmonics).map(|_| (herm(), herm())).collect();
    Arc::new(move |t| {
        let mut acc = CMat::zeros(p, p);
        for (k, (ck, sk)) in terms.iter().enumerate() {
            let kt = k as f64 * t;
            acc += ck * c(kt.cos());
            if k > 0 {
                acc += sk * c(kt.sin());
            }
        }
        acc
    })
}

/// `A^g = g⁻¹Ag − i g⁻¹g′`.
pub fn gauge_transform(a: &Potential, g: &GaugeLoop) -> Potential {
    let (a, g) = (a.clone(), g.clone());
    Arc::new(move |t| {
        let (gv, dg) = g(t);
        let gi = gv.adjoint();
        let m = &gi * a(t) * &gv - &gi * dg * I;
        (&m + m.adjoint()) * c(0.5)
    })
}

/// `g(θ) = exp(i(nθ + φ(θ)))·1_p` with `φ = Σ_k (α_k cos kθ + β_k sin kθ)`.
pub fn phase_loop(p: usize, winding: i64, harmonics: Vec<(f64, f64)>) -> GaugeLoop {
    Arc::new(move |t| {
        let mut phi = winding as f64 * t;
        let mut dphi = winding as f64;
        for (k, (al, be)) in harmonics.iter().enumerate() {
            let k = (k + 1) as f64;
            phi += al * (k * t).cos() + be * (k * t).sin();
            dphi += k * (-al * (k * t).sin() + be * (k * t).cos());
        }
        let g = identity(p) * C64::from_polar(1.0, phi);
        let dg = &g * (I * dphi);
        (g, dg)
    })
}

/// `t ↦ A + t n` — the straight path from `A` to `A^g` for `g = e^{inθ}`.
pub fn winding_path(a: &Potential, p: usize, n: i64) -> impl Fn(f64) -> Potential + Sync {
    let a = a.clone();
    move |t| {
        let a = a.clone();
        Arc::new(move |th| a(th) + identity(p) * c(t * n as f64)) as Potential
    }
}

/// `(lambda_ref, below, above)` for the truncated spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSlice {
    pub lambda_ref: f64,
    pub below: usize,
    pub above: usize,
}

pub fn spectral_slice(op: &FourierDirac, lambda_ref: f64, gap_tol: f64) -> Result<SpectralSlice> {
    let gap = op.distance_to_spectrum(lambda_ref);
    if gap < gap_tol {
        return Err(Error::ReferenceOnSpectrum {
            reference: lambda_ref,
            gap,
        });
    }
    let below = op.count_below(lambda_ref);
    Ok(SpectralSlice {
        lambda_ref,
        below,
        above: op.eigenvalues.len() - below,
    })
}

/// Midpoints of the `count` widest gaps among eigenvalues in `|λ| ≤ window`, ascending.
pub fn gap_midpoints(op: &FourierDirac, window: f64, count: usize) -> Vec<f64> {
    let ev: Vec<f64> = op.eigenvalues.iter().copied().filter(|x| x.abs() <= window).collect();
    let mut gaps: Vec<(f64, f64)> = ev.windows(2).map(|w| (w[1] - w[0], 0.5 * (w[0] + w[1]))).collect();
    gaps.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.total_cmp(&y.1)));
    let mut mids: Vec<f64> = gaps.into_iter().take(count).map(|g| g.1).collect();
    mids.sort_by(f64::total_cmp);
    mids
}

/// Window dimensions `dim V_{λη}`, `dim V_{ημ}`, `dim V_{λμ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetCocycle {
    pub lambda_eta: usize,
    pub eta_mu: usize,
    pub lambda_mu: usize,
}

impl DetCocycle {
    pub fn additive(&self) -> bool {
        self.lambda_eta + self.eta_mu == self.lambda_mu
    }
}

pub fn det_dimension_cocycle(op: &FourierDirac, lambda: f64, eta: f64, mu: f64, gap_tol: f64) -> Result<DetCocycle> {
    if !(lambda <= eta && eta <= mu) {
        return Err(Error::InvalidConfig(format!(
            "need λ ≤ η ≤ μ, got {lambda}, {eta}, {mu}"
        )));
    }
    for r in [lambda, eta, mu] {
        spectral_slice(op, r, gap_tol)?;
    }
    let dim = |lo: f64, hi: f64| op.count_below(hi) - op.count_below(lo);
    Ok(DetCocycle {
        lambda_eta: dim(lambda, eta),
        eta_mu: dim(eta, mu),
        lambda_mu: dim(lambda, mu),
    })
}

/// Smallest spacing between the clusters on either side of `level` (two each).
fn local_gap(sorted: &[f64], level: f64) -> f64 {
    let mut clusters: Vec<f64> = Vec::new();
    for &x in sorted {
        if clusters.last().is_none_or(|&l| x - l > CLUSTER_TOL) {
            clusters.push(x);
        }
    }
    let k = count_below(&clusters, level);
    let lo = k.saturating_sub(2);
    let hi = (k + 2).min(clusters.len());
    clusters[lo..hi]
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min)
}

fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowReport {
    pub flow: i64,
    pub diagonalizations: usize,
    pub refinements: usize,
}

/// Signed count of eigenvalues crossing `lambda_ref` (downward crossings count +1) along
/// `t ∈ [0, 1]`: `Σ (#below at t_k − #below at t_{k+1})`. Steps whose sorted
/// matching distance exceeds half the local gap are bisected.
pub fn spectral_flow<F>(path: F, p: usize, n: usize, lambda_ref: f64, steps: usize) -> Result<FlowReport>
where
    F: Fn(f64) -> Potential + Sync,
{
    let steps = steps.max(1);
    let spectrum = |t: f64| -> Result<Vec<f64>> { Ok(assemble(&path(t), p, n)?.eigenvalues) };
    let ts: Vec<f64> = (0..=steps).map(|k| k as f64 / steps as f64).collect();
    let spectra: Vec<Vec<f64>> = ts.par_iter().map(|&t| spectrum(t)).collect::<Result<_>>()?;
    let mut report = FlowReport {
        flow: 0,
        diagonalizations: spectra.len(),
        refinements: 0,
    };
    for k in 0..steps {
        report.flow += step_flow(
            &spectrum,
            lambda_ref,
            (ts[k], &spectra[k]),
            (ts[k + 1], &spectra[k + 1]),
            0,
            &mut report,
        )?;
    }
    Ok(report)
}

fn step_flow(
    spectrum: &dyn Fn(f64) -> Result<Vec<f64>>,
    level: f64,
    (t0, s0): (f64, &[f64]),
    (t1, s1): (f64, &[f64]),
    depth: u32,
    report: &mut FlowReport,
) -> Result<i64> {
    let d = sup_distance(s0, s1);
    let gap = local_gap(s0, level).min(local_gap(s1, level));
    if d <= 0.5 * gap {
        return Ok(count_below(s0, level) as i64 - count_below(s1, level) as i64);
    }
    if depth >= MAX_BISECTION_DEPTH {
        return Err(Error::GapResolution { t0, t1 });
    }
    let tm = 0.5 * (t0 + t1);
    let sm = spectrum(tm)?;
    report.diagonalizations += 1;
    report.refinements += 1;
    Ok(step_flow(spectrum, level, (t0, s0), (tm, &sm), depth + 1, report)?
        + step_flow(spectrum, level, (tm, &sm), (t1, s1), depth + 1, report)?)
}

/// Nearest-eigenvalue distance between the central windows of `D_{A^g}` and `D_A`, both ways.
pub fn gauge_covariance_check(a: &Potential, p: usize, g: &GaugeLoop, n: usize) -> Result<f64> {
    let d = assemble(a, p, n)?;
    let dg = assemble(&gauge_transform(a, g), p, n)?;
    Ok(window_match(&d, &dg).max(window_match(&dg, &d)))
}

/// Largest distance from an eigenvalue of `a` in its inner window (`|λ| ≤ N/2 − 1`)
/// to the full spectrum of `b`.
fn window_match(a: &FourierDirac, b: &FourierDirac) -> f64 {
    let w = a.truncation as f64 / 2.0 - 1.0;
    a.eigenvalues
        .iter()
        .filter(|x| x.abs() <= w)
        .map(|&x| b.distance_to_spectrum(x))
        .fold(0.0, f64::max)
}

/// Sup distance of central eigenvalues between truncations `N` and `2N`.
pub fn truncation_drift(a: &Potential, p: usize, n: usize) -> Result<f64> {
    let coarse = assemble(a, p, n)?;
    let fine = assemble(a, p, 2 * n)?;
    Ok(window_match(&coarse, &fine))
}
