//! Time integration of `u_tt + 2ωu_tx + Hu = 0` and growth-rate fits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::grid::{norm, Grid};
use crate::linalg::{axpy, dot};
use crate::operators::OperatorH;

/// Norm history of one run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub norms: Vec<f64>,
    /// `‖u_t‖² + ⟨Hu, u⟩`, conserved by the exact flow.
    pub energies: Vec<f64>,
    pub fitted_rate: f64,
    pub fit_quality: f64,
    pub dt: f64,
    pub retries: usize,
}

impl Trajectory {
    /// CSV with columns `t,norm`, one row every `stride` samples.
    pub fn to_csv(&self, stride: usize) -> String {
        let mut out = String::from("t,norm\n");
        for i in (0..self.times.len()).step_by(stride.max(1)) {
            out.push_str(&format!("{:e},{:e}\n", self.times[i], self.norms[i]));
        }
        out
    }
}

/// `0.5/√‖H‖_∞`.
pub fn default_dt(op: &OperatorH) -> f64 {
    0.5 / op.effective().row_sum_norm().sqrt()
}

/// Shift making `H + σ` nonnegative, from Gershgorin discs.
fn gershgorin_shift(op: &OperatorH) -> f64 {
    let h = op.effective();
    let n = h.dim();
    let mut lower = f64::INFINITY;
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| h.get(i, j).abs()).sum();
        lower = lower.min(h.get(i, i) - off);
    }
    (-lower).max(0.0)
}

struct Monitor<'a> {
    op: &'a OperatorH,
    grid: &'a Grid,
    shift: f64,
}

impl Monitor<'_> {
    fn measure(&self, u: &[f64], v: &[f64]) -> (f64, f64) {
        let hu = self.op.apply(u);
        let h = self.grid.spacing();
        let uu = h * dot(u, u);
        let huu = h * dot(&hu, u);
        let vv = h * dot(v, v);
        ((vv + huu + self.shift * uu + uu).sqrt(), vv + huu)
    }
}

fn rhs(op: &OperatorH, omega: f64, u: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut a = op.apply(u);
    axpy(&mut a, 2.0 * omega, &op.derivative(v));
    a.iter_mut().for_each(|x| *x = -*x);
    (v.to_vec(), a)
}

fn integrate(op: &OperatorH, omega: f64, u0: &[f64], v0: &[f64], dt: f64, steps: usize, mon: &Monitor) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let (mut u, mut v) = (u0.to_vec(), v0.to_vec());
    let mut times = Vec::with_capacity(steps + 1);
    let mut norms = Vec::with_capacity(steps + 1);
    let mut energies = Vec::with_capacity(steps + 1);
    let (n0, e0) = mon.measure(&u, &v);
    times.push(0.0);
    norms.push(n0);
    energies.push(e0);
    let stage = |base: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        let mut out = base.to_vec();
        axpy(&mut out, s, k);
        out
    };
    for step in 1..=steps {
        let (k1u, k1v) = rhs(op, omega, &u, &v);
        let (k2u, k2v) = rhs(op, omega, &stage(&u, &k1u, 0.5 * dt), &stage(&v, &k1v, 0.5 * dt));
        let (k3u, k3v) = rhs(op, omega, &stage(&u, &k2u, 0.5 * dt), &stage(&v, &k2v, 0.5 * dt));
        let (k4u, k4v) = rhs(op, omega, &stage(&u, &k3u, dt), &stage(&v, &k3v, dt));
        for i in 0..u.len() {
            u[i] += dt / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
            v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        let (nrm, en) = mon.measure(&u, &v);
        if !nrm.is_finite() || nrm > 1e300 {
            return None;
        }
        times.push(step as f64 * dt);
        norms.push(nrm);
        energies.push(en);
    }
    Some((times, norms, energies))
}

/// RK4 integration of the companion system from `init`.
///
/// `init` holds `u(0)` (then `u_t(0) = 0`) or the stacked state `(u, u_t)`.
/// `dt = None` uses [`default_dt`]; an overflow halves `dt` once.
pub fn linearized_evolve(op: &OperatorH, omega: f64, init: &[f64], dt: Option<f64>, t_end: f64) -> Result<Trajectory> {
    let n = op.dim();
    let (u0, v0) = match init.len() {
        l if l == n => (init.to_vec(), vec![0.0; n]),
        l if l == 2 * n => (init[..n].to_vec(), init[n..].to_vec()),
        l => return invalid(format!("initial state has length {l}, expected {n} or {}", 2 * n)),
    };
    let mut dt = dt.unwrap_or_else(|| default_dt(op));
    if !(dt > 0.0) || t_end < 50.0 * dt {
        return invalid(format!("need dt > 0 and t_end >= 50 dt (dt = {dt:e}, t_end = {t_end})"));
    }
    let mon = Monitor { op, grid: &op.grid, shift: gershgorin_shift(op) };
    for retries in 0..2 {
        let steps = (t_end / dt).round() as usize;
        if let Some((times, norms, energies)) = integrate(op, omega, &u0, &v0, dt, steps, &mon) {
            let (fitted_rate, fit_quality) = fit_growth(&times, &norms);
            return Ok(Trajectory { times, norms, energies, fitted_rate, fit_quality, dt, retries });
        }
        dt *= 0.5;
    }
    Err(Error::Solver("time integration overflowed after halving dt".to_string()))
}

/// Least-squares slope of `ln(norm)` against `t` over the final half, and its R².
pub fn fit_growth(times: &[f64], norms: &[f64]) -> (f64, f64) {
    let start = times.len() / 2;
    let t = &times[start..];
    let y: Vec<f64> = norms[start..].iter().map(|x| x.ln()).collect();
    let m = t.len() as f64;
    let tm = t.iter().sum::<f64>() / m;
    let ym = y.iter().sum::<f64>() / m;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (ti, yi) in t.iter().zip(&y) {
        sxy += (ti - tm) * (yi - ym);
        sxx += (ti - tm) * (ti - tm);
        syy += (yi - ym) * (yi - ym);
    }
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, r2)
}

/// Smooth random field: Fourier modes with a Gaussian envelope of width
/// `k0`, independent per block, normalized to unit grid norm.
pub fn smooth_random_init(grid: &Grid, blocks: usize, k0: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k_step = std::f64::consts::PI / grid.half_length();
    let modes = ((4.0 * k0 / k_step).ceil() as usize).clamp(1, grid.n_points() / 2 - 1);
    let mut out = Vec::with_capacity(blocks * grid.n_points());
    for _ in 0..blocks {
        let coeffs: Vec<(f64, f64, f64)> = (0..=modes)
            .map(|m| {
                let k = m as f64 * k_step;
                let env = (-(k / k0).powi(2)).exp();
                (k, env * rng.random_range(-1.0..1.0), env * rng.random_range(-1.0..1.0))
            })
            .collect();
        out.extend(grid.nodes().iter().map(|&x| coeffs.iter().map(|&(k, a, b)| a * (k * x).cos() + b * (k * x).sin()).sum::<f64>()));
    }
    let nrm = norm(grid, &out) / (blocks as f64).sqrt();
    out.iter_mut().for_each(|x| *x /= nrm);
    out
}
