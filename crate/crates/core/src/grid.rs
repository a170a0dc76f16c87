//! Periodic collocation grids and Fourier differentiation.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Result};
use crate::linalg::DenseMatrix;

/// Equispaced periodic grid on `[-L, L)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    half_length: f64,
    n_points: usize,
    spacing: f64,
    nodes: Vec<f64>,
}

pub fn make_grid(half_length: f64, n_points: usize) -> Result<Grid> {
    if !(half_length > 0.0) || !half_length.is_finite() {
        return invalid(format!("half_length must be positive, got {half_length}"));
    }
    if n_points % 2 != 0 {
        return invalid(format!("n_points must be even, got {n_points}"));
    }
    if n_points < 16 {
        return invalid(format!("n_points must be at least 16, got {n_points}"));
    }
    let spacing = 2.0 * half_length / n_points as f64;
    let nodes = (0..n_points).map(|j| -half_length + j as f64 * spacing).collect();
    Ok(Grid { half_length, n_points, spacing, nodes })
}

impl Grid {
    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Angular wavenumbers in FFT order; index `N/2` holds the Nyquist value `+πN/(2L)`.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n_points as i64;
        (0..n)
            .map(|m| {
                let k = if m <= n / 2 { m } else { m - n };
                k as f64 * PI / self.half_length
            })
            .collect()
    }

    /// Index of the node at `-x_j` (periodically, `-(-L) ≡ -L`).
    pub fn mirror_index(&self, j: usize) -> usize {
        (self.n_points - j) % self.n_points
    }

    /// Average `f(x)` and `f(-x)` on every scalar block.
    pub fn symmetrize_even(&self, f: &mut [f64]) {
        let n = self.n_points;
        for block in f.chunks_mut(n) {
            let orig = block.to_vec();
            for j in 0..n {
                block[j] = 0.5 * (orig[j] + orig[self.mirror_index(j)]);
            }
        }
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }
}

/// Grid inner product `h·Σ f_j g_j`; accepts scalar or two-block vectors.
pub fn inner_product(grid: &Grid, f: &[f64], g: &[f64]) -> Result<f64> {
    let n = grid.n_points;
    if f.len() != g.len() || (f.len() != n && f.len() != 2 * n) {
        return invalid(format!("inner_product length mismatch: {} vs {} on N={n}", f.len(), g.len()));
    }
    Ok(grid.spacing * crate::linalg::dot(f, g))
}

pub fn norm(grid: &Grid, f: &[f64]) -> f64 {
    (grid.spacing * crate::linalg::dot(f, f)).sqrt()
}

/// Fourier-spectral differentiation matrix of order 1, 2 or 4.
///
/// Built as a circulant from the inverse FFT of the symbol. The Nyquist mode
/// is zeroed for order 1 and kept (`-k_N²`, `k_N⁴`) for orders 2 and 4.
pub fn diff_matrix(grid: &Grid, order: u32) -> Result<DenseMatrix> {
    if !matches!(order, 1 | 2 | 4) {
        return invalid(format!("unsupported differentiation order {order}"));
    }
    let n = grid.n_points;
    let k = grid.wavenumbers();
    let symbol: Vec<Complex64> = k
        .iter()
        .enumerate()
        .map(|(m, &km)| match order {
            1 if m == n / 2 => Complex64::new(0.0, 0.0),
            1 => Complex64::new(0.0, km),
            2 => Complex64::new(-km * km, 0.0),
            _ => Complex64::new(km.powi(4), 0.0),
        })
        .collect();
    let fourier = Fourier::new(grid);
    let mut col = fourier.inverse(symbol);
    let odd = order == 1;
    col[0] = if odd { 0.0 } else { col[0] };
    for d in 1..=n / 2 {
        let (a, b) = (col[d], col[n - d]);
        if odd {
            let v = 0.5 * (a - b);
            col[d] = v;
            col[n - d] = -v;
        } else {
            let v = 0.5 * (a + b);
            col[d] = v;
            col[n - d] = v;
        }
    }
    let m = DenseMatrix::from_fn(n, |i, j| col[(i + n - j) % n]);
    if odd {
        Ok(m)
    } else {
        m.into_symmetric()
    }
}

/// Cached forward/inverse FFT plans for a grid.
#[derive(Clone)]
pub struct Fourier {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    k: Vec<f64>,
}

impl Fourier {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.n_points;
        let mut planner = FftPlanner::new();
        Self { n, fwd: planner.plan_fft_forward(n), inv: planner.plan_fft_inverse(n), k: grid.wavenumbers() }
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.k
    }

    pub fn forward(&self, f: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.fwd.process(&mut buf);
        buf
    }

    /// Normalized inverse transform, real part.
    pub fn inverse(&self, mut c: Vec<Complex64>) -> Vec<f64> {
        self.inv.process(&mut c);
        let s = 1.0 / self.n as f64;
        c.into_iter().map(|z| z.re * s).collect()
    }

    pub fn derivative(&self, f: &[f64]) -> Vec<f64> {
        let mut c = self.forward(f);
        for (m, z) in c.iter_mut().enumerate() {
            *z = if m == self.n / 2 { Complex64::new(0.0, 0.0) } else { *z * Complex64::new(0.0, self.k[m]) };
        }
        self.inverse(c)
    }

    /// Mean-free antiderivative (inverse of the order-1 derivative on mean-free,
    /// Nyquist-free data).
    pub fn antiderivative(&self, f: &[f64]) -> Vec<f64> {
        let mut c = self.forward(f);
        for (m, z) in c.iter_mut().enumerate() {
            *z = if m == 0 || m == self.n / 2 { Complex64::new(0.0, 0.0) } else { *z / Complex64::new(0.0, self.k[m]) };
        }
        self.inverse(c)
    }
}
