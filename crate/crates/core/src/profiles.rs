//! Traveling-wave profiles: explicit Boussinesq and KGZ solitons, and a
//! Petviashvili solver for the beam equation.

use std::fmt;
use std::str::FromStr;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::{diff_matrix, Fourier, Grid};
use crate::linalg::norm_max;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Boussinesq,
    Kgz,
    Beam,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Boussinesq => "boussinesq",
            Model::Kgz => "kgz",
            Model::Beam => "beam",
        }
    }

    /// Upper bound on `|c|`.
    pub fn max_speed(self) -> f64 {
        match self {
            Model::Boussinesq | Model::Kgz => 1.0,
            Model::Beam => std::f64::consts::SQRT_2,
        }
    }

    pub fn check_params(self, c: f64, p: f64) -> Result<()> {
        if !c.is_finite() || c.abs() >= self.max_speed() {
            return invalid(format!("{}: speed |c| = {} outside (0, {})", self.name(), c.abs(), self.max_speed()));
        }
        match self {
            Model::Boussinesq if !(p >= 2.0) => invalid(format!("boussinesq: power p = {p} must be >= 2")),
            Model::Beam if !(p >= 3.0 && p.fract() == 0.0 && (p as i64) % 2 == 1) => {
                invalid(format!("beam: power p = {p} must be an odd integer >= 3"))
            }
            _ => Ok(()),
        }
    }

    /// Exponential decay rate of the profile tails.
    pub fn decay_rate(self, c: f64) -> f64 {
        match self {
            Model::Boussinesq => (1.0 - c * c).sqrt(),
            Model::Kgz => 1.0 / (1.0 - c * c).sqrt(),
            // roots of k⁴ − c²k² + 1 lie on the unit circle at angle θ/2, cos θ = c²/2
            Model::Beam => ((1.0 - 0.5 * c * c) / 2.0).sqrt(),
        }
    }

    /// Half-length keeping the tails below about `e^{-30}` of the peak. The
    /// beam tail oscillates and both periodic images add up at `x = ±L`, so it
    /// gets a few more decay lengths.
    pub fn default_half_length(self, c: f64) -> f64 {
        let lengths = if self == Model::Beam { 34.0 } else { 30.0 };
        (lengths / self.decay_rate(c)).max(30.0)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "boussinesq" => Ok(Model::Boussinesq),
            "kgz" => Ok(Model::Kgz),
            "beam" => Ok(Model::Beam),
            other => invalid(format!("unknown model '{other}' (boussinesq|kgz|beam)")),
        }
    }
}

/// Sampled wave profile `φ_c` (plus `ψ` for KGZ).
#[derive(Clone, Debug)]
pub struct WaveProfile {
    pub model: Model,
    pub c: f64,
    pub p: f64,
    pub values: Vec<f64>,
    pub companion: Option<Vec<f64>>,
    pub grid: Grid,
    pub residual: f64,
}

impl WaveProfile {
    pub fn amplitude(&self) -> f64 {
        norm_max(&self.values)
    }

    /// `φ(0)`.
    pub fn center_value(&self) -> f64 {
        self.values[self.grid.n_points() / 2]
    }
}

/// Petviashvili iteration settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOpts {
    pub max_iter: usize,
    pub tol: f64,
    pub gamma: Option<f64>,
}

impl Default for SolverOpts {
    fn default() -> Self {
        Self { max_iter: 500, tol: 1e-12, gamma: None }
    }
}

const DECAY_TOL: f64 = 1e-12;

fn check_decay(values: &[f64], grid: &Grid) -> Result<()> {
    let peak = norm_max(values);
    let n = grid.n_points();
    let edge = values[0].abs().max(values[n - 1].abs());
    if edge > DECAY_TOL * peak {
        return invalid(format!(
            "grid too short or too coarse: |phi(±L)| = {edge:.3e} exceeds {DECAY_TOL:e}·max (L = {}, N = {n})",
            grid.half_length()
        ));
    }
    Ok(())
}

pub fn boussinesq_profile(c: f64, p: f64, grid: &Grid) -> Result<WaveProfile> {
    Model::Boussinesq.check_params(c, p)?;
    let w = 1.0 - c * c;
    let amp = ((p + 1.0) / 2.0 * w).powf(1.0 / (p - 1.0));
    let kappa = w.sqrt() * (p - 1.0) / 2.0;
    let expo = 2.0 / (p - 1.0);
    let values = grid.sample(|x| amp * (1.0 / (kappa * x).cosh()).powf(expo));
    check_decay(&values, grid)?;
    let mut prof = WaveProfile { model: Model::Boussinesq, c, p, values, companion: None, grid: grid.clone(), residual: 0.0 };
    prof.residual = profile_residual(&prof);
    Ok(prof)
}

/// Exact `∂_c φ_c` from the explicit Boussinesq formula.
pub fn boussinesq_c_derivative_exact(c: f64, p: f64, grid: &Grid) -> Result<Vec<f64>> {
    let prof = boussinesq_profile(c, p, grid)?;
    let w = 1.0 - c * c;
    let kappa = w.sqrt() * (p - 1.0) / 2.0;
    let dkappa = -c * (p - 1.0) / (2.0 * w.sqrt());
    let dlog_amp = -2.0 * c / ((p - 1.0) * w);
    let expo = 2.0 / (p - 1.0);
    Ok(grid
        .nodes()
        .iter()
        .zip(&prof.values)
        .map(|(&x, &phi)| phi * (dlog_amp - expo * (kappa * x).tanh() * x * dkappa))
        .collect())
}

pub fn kgz_profile(c: f64, grid: &Grid) -> Result<WaveProfile> {
    Model::Kgz.check_params(c, 3.0)?;
    let mu = (1.0 - c * c).sqrt();
    let values = grid.sample(|x| 2.0 * mu / (x / mu).cosh());
    let psi = grid.sample(|x| -2.0 / (x / mu).cosh().powi(2));
    check_decay(&values, grid)?;
    let mut prof = WaveProfile { model: Model::Kgz, c, p: 3.0, values, companion: Some(psi), grid: grid.clone(), residual: 0.0 };
    prof.residual = profile_residual(&prof);
    Ok(prof)
}

/// Ground state of `c²φ″ + φ⁗ + φ − |φ|^{p−1}φ = 0` by Petviashvili iteration.
pub fn beam_profile(c: f64, p: f64, grid: &Grid, opts: &SolverOpts) -> Result<WaveProfile> {
    Model::Beam.check_params(c, p)?;
    let fourier = Fourier::new(grid);
    let symbol: Vec<f64> = fourier.wavenumbers().iter().map(|&k| k.powi(4) - c * c * k * k + 1.0).collect();
    let gamma = opts.gamma.unwrap_or(p / (p - 1.0));
    let nonlin = |u: &[f64]| -> Vec<f64> { u.iter().map(|&x| x.abs().powf(p - 1.0) * x).collect() };

    let mut u = grid.sample(|x| 2.0 / x.cosh());
    let mut converged = false;
    for _ in 0..opts.max_iter {
        let uh = fourier.forward(&u);
        let nh = fourier.forward(&nonlin(&u));
        let num: f64 = uh.iter().zip(&symbol).map(|(z, m)| m * z.norm_sqr()).sum();
        let den: f64 = nh.iter().zip(&uh).map(|(a, b)| (a * b.conj()).re).sum();
        let s = num / den;
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::Solver(format!("beam profile: stabilizing factor degenerate ({s})")));
        }
        let factor = s.powf(gamma);
        let next: Vec<Complex64> = nh.iter().zip(&symbol).map(|(z, m)| z * (factor / m)).collect();
        let mut v = fourier.inverse(next);
        grid.symmetrize_even(&mut v);
        let peak = norm_max(&v);
        if !peak.is_finite() || peak < 0.1 {
            return Err(Error::Solver(format!("beam profile: iteration collapsed (max |phi| = {peak:.3e})")));
        }
        let change = v.iter().zip(&u).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / peak;
        u = v;
        if change <= opts.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Solver(format!("beam profile: no convergence in {} iterations", opts.max_iter)));
    }
    check_decay(&u, grid)?;
    let mut prof = WaveProfile { model: Model::Beam, c, p, values: u, companion: None, grid: grid.clone(), residual: 0.0 };
    prof.residual = profile_residual(&prof);
    if prof.residual > 1e-8 * prof.amplitude() {
        return Err(Error::Solver(format!("beam profile: residual {:.3e} too large", prof.residual)));
    }
    Ok(prof)
}

/// Build the profile for any model.
pub fn make_profile(model: Model, c: f64, p: f64, grid: &Grid, opts: &SolverOpts) -> Result<WaveProfile> {
    match model {
        Model::Boussinesq => boussinesq_profile(c, p, grid),
        Model::Kgz => kgz_profile(c, grid),
        Model::Beam => beam_profile(c, p, grid, opts),
    }
}

/// Max-norm of the model's profile ODE evaluated with spectral derivatives.
pub fn profile_residual(profile: &WaveProfile) -> f64 {
    let grid = &profile.grid;
    let phi = &profile.values;
    let (c, p) = (profile.c, profile.p);
    let d2 = diff_matrix(grid, 2).expect("order 2 is supported").matvec(phi);
    let r: Vec<f64> = match profile.model {
        Model::Boussinesq => (0..phi.len()).map(|j| d2[j] - (1.0 - c * c) * phi[j] + phi[j].abs().powf(p - 1.0) * phi[j]).collect(),
        Model::Kgz => {
            let mu2 = 1.0 - c * c;
            (0..phi.len()).map(|j| -mu2 * d2[j] + phi[j] - phi[j].powi(3) / (2.0 * mu2)).collect()
        }
        Model::Beam => {
            let d4 = diff_matrix(grid, 4).expect("order 4 is supported").matvec(phi);
            (0..phi.len()).map(|j| c * c * d2[j] + d4[j] + phi[j] - phi[j].abs().powf(p - 1.0) * phi[j]).collect()
        }
    };
    norm_max(&r)
}

/// Central difference `(φ_{c+δ} − φ_{c−δ})/(2δ)` on a fixed grid.
pub fn profile_c_derivative(model: Model, c: f64, p: f64, grid: &Grid, delta_c: f64, opts: &SolverOpts) -> Result<Vec<f64>> {
    if !(delta_c > 0.0) {
        return invalid("delta_c must be positive");
    }
    model.check_params(c - delta_c, p)?;
    model.check_params(c + delta_c, p)?;
    let plus = make_profile(model, c + delta_c, p, grid, opts)?;
    let minus = make_profile(model, c - delta_c, p, grid, opts)?;
    Ok(plus.values.iter().zip(&minus.values).map(|(a, b)| (a - b) / (2.0 * delta_c)).collect())
}
