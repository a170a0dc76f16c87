//! Eigendecomposition of `H`, assumption checks, and kernel-aware solves.

use faer::{Col, Mat};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{norm, Fourier};
use crate::linalg::{axpy, dot, DenseMatrix};
use crate::operators::OperatorH;

/// Classification tolerances, relative to the spectral scale
/// `max(|λ_min|, 1e-8·max|λ|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub zero_tol_rel: f64,
    pub gap_tol_rel: f64,
    pub b_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { zero_tol_rel: 1e-6, gap_tol_rel: 1e-4, b_tol: 1e-6 }
    }
}

/// Eigenpairs with eigenvectors orthonormal in the grid inner product.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    vectors: Mat<f64>,
    weight: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        let s = 1.0 / self.weight.sqrt();
        self.vectors.col(j).iter().map(|x| x * s).collect()
    }

    /// Grid inner products `⟨v, v_j⟩` for every eigenvector.
    pub fn coefficients(&self, v: &[f64]) -> Vec<f64> {
        let x = Col::from_fn(v.len(), |i| v[i]);
        let c = self.vectors.transpose() * &x;
        let s = self.weight.sqrt();
        c.iter().map(|y| y * s).collect()
    }

    /// `Σ c_j v_j`.
    pub fn synthesize(&self, coeffs: &[f64]) -> Vec<f64> {
        let x = Col::from_fn(coeffs.len(), |i| coeffs[i]);
        let y = &self.vectors * &x;
        let s = 1.0 / self.weight.sqrt();
        y.iter().map(|v| v * s).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Scale that the relative tolerances multiply.
    pub fn classification_scale(&self) -> f64 {
        let lo = self.eigenvalues.first().copied().unwrap_or(0.0).abs();
        lo.max(1e-8 * self.max_abs())
    }
}

pub fn eigendecompose_matrix(m: &DenseMatrix, weight: f64) -> Result<Spectrum> {
    if !m.is_symmetric() {
        return invalid("eigendecompose: matrix is not flagged symmetric");
    }
    let (eigenvalues, vectors) = m.symmetric_eigen()?;
    Ok(Spectrum { eigenvalues, vectors, weight })
}

/// Spectrum of the gauge-shifted operator [`OperatorH::effective`].
pub fn eigendecompose(op: &OperatorH) -> Result<Spectrum> {
    eigendecompose_matrix(op.effective(), op.grid.spacing())
}

/// Quantities of the spectral assumptions: ground state, kernel, gap, pairing.
#[derive(Clone, Debug)]
pub struct SpectralReport {
    pub delta_sq: f64,
    pub phi: Vec<f64>,
    pub psi0: Vec<f64>,
    pub sigma_sq: f64,
    pub n_negative: usize,
    pub kernel_dim: usize,
    pub assumption_a: bool,
    pub b_pairing: f64,
    pub assumption_b: bool,
    pub zero_tol: f64,
    pub gap_tol: f64,
    pub tol: Tolerances,
    pub negative_index: Option<usize>,
    pub kernel_index: Option<usize>,
    pub weight: f64,
    pub notes: Vec<String>,
}

impl SpectralReport {
    fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.weight * dot(a, b)
    }

    pub fn delta(&self) -> f64 {
        self.delta_sq.sqrt()
    }
}

/// Classify eigenvalues and extract `δ²`, `φ`, `ψ₀`, `σ²`. `reference` orients `ψ₀`.
pub fn check_assumption_a(spec: &Spectrum, tol: &Tolerances, reference: Option<&[f64]>) -> SpectralReport {
    let scale = spec.classification_scale();
    let zero_tol = tol.zero_tol_rel * scale;
    let gap_tol = tol.gap_tol_rel * scale;
    let ev = &spec.eigenvalues;
    let negatives: Vec<usize> = (0..ev.len()).filter(|&j| ev[j] < -zero_tol).collect();
    let kernel: Vec<usize> = (0..ev.len()).filter(|&j| ev[j].abs() <= zero_tol).collect();
    let sigma_sq = ev.iter().copied().find(|&x| x > zero_tol).unwrap_or(f64::INFINITY);
    let dim = ev.len();
    let negative_index = negatives.first().copied();
    let kernel_index = kernel.first().copied();
    let phi = negative_index.map(|j| spec.vector(j)).unwrap_or_else(|| vec![0.0; dim]);
    let mut psi0 = kernel_index.map(|j| spec.vector(j)).unwrap_or_else(|| vec![0.0; dim]);
    if let Some(r) = reference {
        if dot(&psi0, r) < 0.0 {
            psi0.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let assumption_a = negatives.len() == 1 && kernel.len() == 1 && sigma_sq > gap_tol;
    SpectralReport {
        delta_sq: negative_index.map(|j| -ev[j]).unwrap_or(0.0),
        phi,
        psi0,
        sigma_sq,
        n_negative: negatives.len(),
        kernel_dim: kernel.len(),
        assumption_a,
        b_pairing: 0.0,
        assumption_b: false,
        zero_tol,
        gap_tol,
        tol: *tol,
        negative_index,
        kernel_index,
        weight: spec.weight,
        notes: vec!["assumption E: finite-dimensional: automatic".to_string()],
    }
}

/// Compute `⟨φ′, ψ₀⟩`, orient `φ` so that it is nonnegative, and set the flag.
pub fn check_assumption_b(report: &mut SpectralReport, op: &OperatorH) -> f64 {
    let dphi = op.derivative(&report.phi);
    let mut b = report.inner(&dphi, &report.psi0);
    if b < 0.0 {
        report.phi.iter_mut().for_each(|x| *x = -*x);
        b = -b;
    }
    report.b_pairing = b;
    report.assumption_b = report.assumption_a && b > report.tol.b_tol;
    b
}

/// Eigendecompose `op` and run both assumption checks.
pub fn analyze(op: &OperatorH, tol: &Tolerances) -> Result<(Spectrum, SpectralReport)> {
    let spec = eigendecompose(op)?;
    let mut report = check_assumption_a(&spec, tol, op.reference_kernel());
    check_assumption_b(&mut report, op);
    Ok((spec, report))
}

/// Solve `Hx = rhs` on `{ψ₀}^⊥` by inverting the nonzero eigenvalues.
pub fn kernel_pseudo_solve(spec: &Spectrum, report: &SpectralReport, rhs: &[f64]) -> Result<Vec<f64>> {
    let rn = (report.weight * dot(rhs, rhs)).sqrt();
    let along = report.inner(rhs, &report.psi0);
    if along.abs() > 1e-8 * rn {
        return invalid(format!("rhs not orthogonal to the kernel: <rhs, psi0> = {along:.3e}, |rhs| = {rn:.3e}"));
    }
    let mut coeffs = spec.coefficients(rhs);
    for (j, cj) in coeffs.iter_mut().enumerate() {
        let mu = spec.eigenvalues[j];
        *cj = if mu.abs() <= report.zero_tol { 0.0 } else { *cj / mu };
    }
    Ok(spec.synthesize(&coeffs))
}

/// `P₀v = v − ⟨v,φ⟩φ`.
pub fn project_p0(report: &SpectralReport, v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    axpy(&mut out, -report.inner(v, &report.phi), &report.phi);
    out
}

/// `P₁v = v − ⟨v,φ⟩φ − ⟨v,ψ₀⟩ψ₀`.
pub fn project_p1(report: &SpectralReport, v: &[f64]) -> Vec<f64> {
    let mut out = project_p0(report, v);
    axpy(&mut out, -report.inner(v, &report.psi0), &report.psi0);
    out
}

/// Kernel data and index obtained from the factorization `H = BᵀKB`.
#[derive(Clone, Debug)]
pub struct ReducedIndex {
    /// Kernel vector of `H` lifted from `ker K`, decaying at `x = ±L`.
    pub psi0_line: Vec<f64>,
    /// `⟨K⁻¹s, s⟩`, equal to `⟨H⁻¹ψ₀′, ψ₀′⟩`.
    pub q_index: f64,
    pub n_negative: usize,
    pub kernel_dim: usize,
}

/// Index through the reduced operator `K`.
///
/// With `H = BᵀKB` and `Bᵀs = ψ₀′`, `⟨H⁻¹ψ₀′, ψ₀′⟩ = ⟨K⁻¹s, s⟩`. `K` has a
/// spectral gap above its kernel on the line, so this route carries no
/// `O(1/L)` bias from the undifferentiated gauge components.
pub fn reduced_index(op: &OperatorH, tol: &Tolerances) -> Result<Option<ReducedIndex>> {
    let Some(red) = op.reduced() else { return Ok(None) };
    let grid = &op.grid;
    let n = grid.n_points();
    let spec = eigendecompose_matrix(&red.k, grid.spacing())?;
    let rep = check_assumption_a(&spec, tol, None);
    let Some(kidx) = rep.kernel_index.filter(|_| rep.kernel_dim == 1) else {
        return Err(Error::Assumption(format!("reduced operator: kernel dimension {} (expected 1)", rep.kernel_dim)));
    };
    let kappa = spec.vector(kidx);
    let fourier = Fourier::new(grid);
    let mut psi = Vec::with_capacity(kappa.len());
    for (b, chunk) in kappa.chunks(n).enumerate() {
        if red.gauge_blocks[b] {
            let mut anti = fourier.antiderivative(chunk);
            let edge = anti[0];
            anti.iter_mut().for_each(|x| *x -= edge);
            psi.extend(anti);
        } else {
            psi.extend_from_slice(chunk);
        }
    }
    let nrm = norm(grid, &psi);
    psi.iter_mut().for_each(|x| *x /= nrm);
    if let Some(r) = op.reference_kernel() {
        if dot(&psi, r) < 0.0 {
            psi.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let mut s = op.derivative(&psi);
    for (b, chunk) in s.chunks_mut(n).enumerate() {
        if red.gauge_blocks[b] {
            for (x, y) in chunk.iter_mut().zip(&psi[b * n..(b + 1) * n]) {
                *x = -y;
            }
        }
    }
    let coeffs = spec.coefficients(&s);
    let s_norm = norm(grid, &s);
    if coeffs[kidx].abs() > 1e-6 * s_norm {
        return Err(Error::Anomaly(format!("reduced index: source not orthogonal to ker K ({:.3e})", coeffs[kidx])));
    }
    let q: f64 = coeffs
        .iter()
        .zip(&spec.eigenvalues)
        .enumerate()
        .filter(|(j, _)| *j != kidx)
        .map(|(_, (cj, mu))| cj * cj / mu)
        .sum();
    Ok(Some(ReducedIndex { psi0_line: psi, q_index: q, n_negative: rep.n_negative, kernel_dim: rep.kernel_dim }))
}
