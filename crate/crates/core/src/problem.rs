//! One model instance: profile, operator, spectrum and report.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::make_grid;
use crate::operators::{build_h, OperatorH};
use crate::pencil::{Pencil, StabilityVerdict};
use crate::profiles::{make_profile, Model, SolverOpts, WaveProfile};
use crate::spectral::{analyze, SpectralReport, Spectrum, Tolerances};

/// Grid choice: `N` and optionally `L` (default per model and speed).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_points: usize,
    pub half_length: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { n_points: 512, half_length: None }
    }
}

impl GridSpec {
    pub fn new(n_points: usize) -> Self {
        Self { n_points, half_length: None }
    }

    pub fn with_half_length(n_points: usize, half_length: f64) -> Self {
        Self { n_points, half_length: Some(half_length) }
    }

    pub fn resolve(&self, model: Model, c: f64) -> f64 {
        self.half_length.unwrap_or_else(|| model.default_half_length(c))
    }
}

#[derive(Clone, Debug)]
pub struct StabilityProblem {
    pub profile: WaveProfile,
    pub op: OperatorH,
    pub spectrum: Spectrum,
    pub report: SpectralReport,
}

impl StabilityProblem {
    pub fn new(model: Model, c: f64, p: f64, grid: &GridSpec, tol: &Tolerances, solver: &SolverOpts) -> Result<Self> {
        model.check_params(c, p)?;
        let g = make_grid(grid.resolve(model, c), grid.n_points)?;
        let profile = make_profile(model, c, p, &g, solver)?;
        Self::from_profile(profile, tol)
    }

    /// Default tolerances and solver settings.
    pub fn with_defaults(model: Model, c: f64, p: f64, grid: &GridSpec) -> Result<Self> {
        Self::new(model, c, p, grid, &Tolerances::default(), &SolverOpts::default())
    }

    pub fn from_profile(profile: WaveProfile, tol: &Tolerances) -> Result<Self> {
        let op = build_h(&profile)?;
        let (spectrum, report) = analyze(&op, tol)?;
        Ok(Self { profile, op, spectrum, report })
    }

    pub fn pencil(&self) -> Result<Pencil<'_>> {
        Pencil::new(&self.op, &self.spectrum, &self.report)
    }

    /// Model verdict at `ω = |c|`.
    pub fn verdict(&self) -> Result<StabilityVerdict> {
        self.pencil()?.verdict(self.profile.c.abs())
    }
}
