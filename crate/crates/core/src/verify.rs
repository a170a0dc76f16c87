//! Closed-form indices and threshold scans.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::grid::{diff_matrix, make_grid, norm};
use crate::problem::{GridSpec, StabilityProblem};
use crate::profiles::{make_profile, Model, SolverOpts};
use crate::spectral::Tolerances;

/// `ω* = √((p−1)(1−c²))/√(5−p)`, `+∞` for `p ≥ 5`.
pub fn boussinesq_closed_form_index(c: f64, p: f64) -> Result<f64> {
    Model::Boussinesq.check_params(c, p)?;
    if p >= 5.0 {
        return Ok(f64::INFINITY);
    }
    Ok(((p - 1.0) * (1.0 - c * c)).sqrt() / (5.0 - p).sqrt())
}

/// `⟨H⁻¹ψ₀′, ψ₀′⟩ = (p−5)/(4(p−1)(1−c²))`.
pub fn boussinesq_closed_form_q(c: f64, p: f64) -> Result<f64> {
    Model::Boussinesq.check_params(c, p)?;
    Ok((p - 5.0) / (4.0 * (p - 1.0) * (1.0 - c * c)))
}

/// Stability threshold `√(p−1)/2` in `|c|`, none for `p ≥ 5`.
pub fn boussinesq_threshold(p: f64) -> Option<f64> {
    (p < 5.0).then(|| (p - 1.0).sqrt() / 2.0)
}

/// `ω* = √(1−c²)`.
pub fn kgz_closed_form_index(c: f64) -> Result<f64> {
    Model::Kgz.check_params(c, 3.0)?;
    Ok((1.0 - c * c).sqrt())
}

/// `⟨H⁻¹ψ₀′, ψ₀′⟩ = −1/(4(1−c²))`.
pub fn kgz_closed_form_q(c: f64) -> Result<f64> {
    Model::Kgz.check_params(c, 3.0)?;
    Ok(-1.0 / (4.0 * (1.0 - c * c)))
}

/// Beam threshold `‖φ′‖/(−2∂_c‖φ′‖)`, `+∞` when `∂_c‖φ′‖ ≥ 0`.
pub fn beam_closed_form_index(_c: f64, norm_dphi: f64, d_c_norm_dphi: f64) -> Result<f64> {
    if !(norm_dphi > 0.0) {
        return invalid(format!("norm_dphi must be positive, got {norm_dphi}"));
    }
    if d_c_norm_dphi >= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(norm_dphi / (-2.0 * d_c_norm_dphi))
}

/// `‖φ′_c‖` and its central-difference `c`-derivative on one fixed grid.
pub fn beam_dphi_norm(c: f64, p: f64, grid: &GridSpec, delta_c: f64, opts: &SolverOpts) -> Result<(f64, f64)> {
    let g = make_grid(grid.resolve(Model::Beam, c), grid.n_points)?;
    let d1 = diff_matrix(&g, 1)?;
    let measure = |cc: f64| -> Result<f64> {
        let prof = make_profile(Model::Beam, cc, p, &g, opts)?;
        Ok(norm(&g, &d1.matvec(&prof.values)))
    };
    let center = measure(c)?;
    let plus = measure(c + delta_c)?;
    let minus = measure(c - delta_c)?;
    Ok((center, (plus - minus) / (2.0 * delta_c)))
}

/// One row of a threshold scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub c: f64,
    pub q_index: f64,
    pub omega_star: f64,
    pub stable: bool,
    pub lambda0: Option<f64>,
    pub residual: Option<f64>,
    pub flags: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanConfig {
    pub grid: GridSpec,
    pub tol: Tolerances,
    pub solver: SolverOpts,
    /// Locate `λ₀` for unstable rows (costs one root search per row).
    pub with_roots: bool,
    pub jobs: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { grid: GridSpec::default(), tol: Tolerances::default(), solver: SolverOpts::default(), with_roots: true, jobs: 1 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanTable {
    pub model: Model,
    pub p: f64,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    /// First `c` classified stable.
    pub fn detected_threshold(&self) -> Option<f64> {
        self.rows.iter().find(|r| r.stable).map(|r| r.c)
    }

    /// Adjacent rows `(unstable, stable)` around the first stability switch,
    /// skipping rows whose computation failed.
    pub fn bracket(&self) -> Option<(f64, f64)> {
        self.rows
            .windows(2)
            .find(|w| !w[0].stable && w[1].stable && !w[0].q_index.is_nan() && !w[1].q_index.is_nan())
            .map(|w| (w[0].c, w[1].c))
    }
}

fn row_for(model: Model, p: f64, c: f64, cfg: &ScanConfig) -> ScanRow {
    let fail = |flag: String| ScanRow { c, q_index: f64::NAN, omega_star: f64::NAN, stable: false, lambda0: None, residual: None, flags: vec![flag] };
    let prob = match StabilityProblem::new(model, c, p, &cfg.grid, &cfg.tol, &cfg.solver) {
        Ok(pr) => pr,
        Err(e) => return fail(format!("setup: {e}")),
    };
    let pencil = match prob.pencil() {
        Ok(pe) => pe,
        Err(e) => return fail(format!("assumptions: {e}")),
    };
    if cfg.with_roots {
        match pencil.verdict(c.abs()) {
            Ok(v) => ScanRow {
                c,
                q_index: v.q_index,
                omega_star: v.omega_star,
                stable: v.stable,
                lambda0: v.lambda0,
                residual: v.pencil_residual,
                flags: v.flags,
            },
            Err(e) => fail(format!("verdict: {e}")),
        }
    } else {
        match pencil.stability_index() {
            Ok(ix) => {
                let stable = c.abs() >= ix.omega_star;
                let mut flags = Vec::new();
                if stable != (c.abs() >= ix.omega_star_periodic) {
                    flags.push("domain_sensitive".to_string());
                }
                ScanRow { c, q_index: ix.q_index, omega_star: ix.omega_star, stable, lambda0: None, residual: None, flags }
            }
            Err(e) => fail(format!("index: {e}")),
        }
    }
}

fn speeds(c_lo: f64, c_hi: f64, dc: f64) -> Vec<f64> {
    let steps = ((c_hi - c_lo) / dc + 1e-9).floor() as usize;
    (0..=steps).map(|i| c_lo + i as f64 * dc).collect()
}

/// Evaluate the verdict at `c = c_lo, c_lo + dc, …, c_hi`. Rows are independent
/// and computed on `cfg.jobs` threads; output order follows `c`.
pub fn threshold_scan(model: Model, p: f64, c_lo: f64, c_hi: f64, dc: f64, cfg: &ScanConfig) -> Result<ScanTable> {
    if !(dc > 0.0) || !(c_hi >= c_lo) {
        return invalid(format!("scan needs dc > 0 and c_hi >= c_lo (got dc = {dc}, [{c_lo}, {c_hi}])"));
    }
    model.check_params(c_lo, p)?;
    model.check_params(c_hi, p)?;
    let cs = speeds(c_lo, c_hi, dc);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| crate::Error::Solver(format!("thread pool: {e}")))?;
    let rows = pool.install(|| cs.par_iter().map(|&c| row_for(model, p, c, cfg)).collect());
    Ok(ScanTable { model, p, rows })
}

/// Bisection on the sign of `|c| − ω*(H_c)` between an unstable `lo` and a stable `hi`.
pub fn bisect_threshold(model: Model, p: f64, lo: f64, hi: f64, c_tol: f64, cfg: &ScanConfig) -> Result<f64> {
    let index_cfg = ScanConfig { with_roots: false, ..cfg.clone() };
    let is_stable = |c: f64| -> Result<bool> {
        let row = row_for(model, p, c, &index_cfg);
        if row.q_index.is_nan() {
            return Err(crate::Error::Assumption(format!("bisection at c = {c}: {}", row.flags.join("; "))));
        }
        Ok(row.stable)
    };
    let (mut a, mut b) = (lo, hi);
    if is_stable(a)? || !is_stable(b)? {
        return invalid(format!("bisection needs unstable c = {lo} and stable c = {hi}"));
    }
    while b - a > c_tol {
        let m = 0.5 * (a + b);
        if is_stable(m)? {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(0.5 * (a + b))
}
