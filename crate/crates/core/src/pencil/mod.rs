//! The quadratic pencil `λ² + 2ωλ∂ₓ + H`: the function `G(ω, λ)`, the
//! stability index `ω*(H)`, Laurent coefficients at `λ = 0`, and the search
//! for the unstable eigenvalue.

pub mod companion;
mod trace;

use roots::{find_root_brent, SimpleConvergency};

use crate::error::{invalid, Error, Result};
use crate::grid::norm;
use crate::linalg::{axpy, dot, DenseMatrix};
use crate::operators::OperatorH;
use crate::spectral::{kernel_pseudo_solve, project_p0, project_p1, reduced_index, SpectralReport, Spectrum};

pub use companion::{companion_matrix, companion_spectrum, CompanionSummary};
pub use trace::Trace;

/// One evaluation of `G`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PencilEval {
    pub omega: f64,
    pub lambda: f64,
    pub g_value: f64,
    pub solve_residual: f64,
}

/// Coefficients of `G(ω, ε) = D₋₂ε⁻² + D₋₁ε⁻¹ + O(1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaurentCoeffs {
    pub d_minus2: f64,
    pub d_minus1: f64,
    pub a_coef: f64,
    pub b_coef: f64,
    /// `‖H^{-1/2}P₀ψ₀′‖²`.
    pub n_sq: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexRoute {
    /// `⟨H⁻¹ψ₀′, ψ₀′⟩` from the spectrum of `H` on the periodic grid.
    Periodic,
    /// Through the factorization `H = BᵀKB`.
    Reduced,
}

/// `q = ⟨H⁻¹ψ₀′, ψ₀′⟩` and `ω*`, both for the reported route and for the
/// periodic operator that `G` is evaluated on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IndexReport {
    pub q_index: f64,
    pub omega_star: f64,
    pub route: IndexRoute,
    pub q_periodic: f64,
    pub omega_star_periodic: f64,
}

pub fn omega_star_from_q(q: f64) -> f64 {
    if q >= 0.0 {
        f64::INFINITY
    } else {
        1.0 / (2.0 * (-q).sqrt())
    }
}

/// Unstable eigenpair of the pencil.
#[derive(Clone, Debug)]
pub struct UnstableEigen {
    pub lambda0: f64,
    pub eigvec: Vec<f64>,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct StabilityVerdict {
    pub omega: f64,
    pub index: IndexReport,
    pub q_index: f64,
    pub omega_star: f64,
    pub stable: bool,
    pub lambda0: Option<f64>,
    pub eigvec: Option<Vec<f64>>,
    pub pencil_residual: Option<f64>,
    pub flags: Vec<String>,
    pub trace: Trace,
}

/// Pencil bound to an operator and its spectral data.
///
/// `G` is evaluated through the restricted system
/// `(P₀(H+λ²)P₀ + 2ωλP₀D₁P₀ + s·φ⟨φ,·⟩)x = P₀φ′`; the penalty makes the full
/// matrix invertible and leaves the `{φ}^⊥` component exact.
pub struct Pencil<'a> {
    op: &'a OperatorH,
    spec: &'a Spectrum,
    report: &'a SpectralReport,
    phi_prime: Vec<f64>,
    rhs: Vec<f64>,
    base: DenseMatrix,
    drift: DenseMatrix,
    weight: f64,
}

/// `PAP` with `P = I − h·u·uᵀ`.
fn project_both(a: &DenseMatrix, u: &[f64], h: f64) -> DenseMatrix {
    let au = a.matvec(u);
    let uta = a.transpose().matvec(u);
    let alpha = dot(u, &au);
    let mut out = a.clone();
    out.add_rank_one(-h, u, &uta);
    out.add_rank_one(-h, &au, u);
    out.add_rank_one(h * h * alpha, u, u);
    out
}

impl<'a> Pencil<'a> {
    pub fn new(op: &'a OperatorH, spec: &'a Spectrum, report: &'a SpectralReport) -> Result<Self> {
        if !report.assumption_a {
            return Err(Error::Assumption(format!(
                "assumption A fails: {} negative, kernel dimension {}, gap {:.3e}",
                report.n_negative, report.kernel_dim, report.sigma_sq
            )));
        }
        if !report.assumption_b {
            return Err(Error::Assumption(format!("assumption B fails: <phi', psi0> = {:.3e}", report.b_pairing)));
        }
        let h = op.grid.spacing();
        let phi = &report.phi;
        let phi_prime = op.derivative(phi);
        let rhs = project_p0(report, &phi_prime);
        let stiffness = op.effective().trace_abs() / op.dim() as f64;
        let mut base = project_both(op.effective(), phi, h);
        base.add_rank_one(stiffness * h, phi, phi);
        let drift = project_both(op.d1(), phi, h);
        Ok(Self { op, spec, report, phi_prime, rhs, base, drift, weight: h })
    }

    pub fn operator(&self) -> &OperatorH {
        self.op
    }

    pub fn report(&self) -> &SpectralReport {
        self.report
    }

    fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.weight * dot(a, b)
    }

    fn system(&self, omega: f64, lambda: f64) -> DenseMatrix {
        let (l2, wl) = (lambda * lambda, 2.0 * omega * lambda);
        let phi = &self.report.phi;
        let hl2 = self.weight * l2;
        DenseMatrix::from_fn(self.base.dim(), |i, j| {
            let diag = if i == j { l2 } else { 0.0 };
            self.base.get(i, j) + wl * self.drift.get(i, j) + diag - hl2 * phi[i] * phi[j]
        })
    }

    /// Solve the restricted system with right-hand side `P₀g`.
    pub fn restricted_solve(&self, omega: f64, lambda: f64, g: &[f64]) -> Result<(Vec<f64>, f64)> {
        if !(lambda > 0.0) || !lambda.is_finite() || !omega.is_finite() {
            return invalid(format!("restricted solve needs lambda > 0 (got {lambda}) and finite omega"));
        }
        let m = self.system(omega, lambda);
        let b = project_p0(self.report, g);
        let x = m.lu().solve(&b);
        let mut r = m.matvec(&x);
        axpy(&mut r, -1.0, &b);
        let bn = norm(&self.op.grid, &b);
        let res = if bn > 0.0 { norm(&self.op.grid, &r) / bn } else { norm(&self.op.grid, &r) };
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::Solver(format!("restricted solve produced non-finite values at lambda = {lambda}")));
        }
        Ok((x, res))
    }

    /// `G(ω,λ) = ⟨[H+λ²+2ωλP₀∂P₀]⁻¹φ′, φ′⟩ + (λ²−δ²)/(4ω²λ²)`.
    pub fn eval_g(&self, omega: f64, lambda: f64) -> Result<PencilEval> {
        if !(omega > 0.0) {
            return invalid(format!("G needs omega > 0, got {omega}"));
        }
        let (x, res) = self.restricted_solve(omega, lambda, &self.rhs)?;
        let l2 = lambda * lambda;
        let g = self.inner(&x, &self.phi_prime) + (l2 - self.report.delta_sq) / (4.0 * omega * omega * l2);
        Ok(PencilEval { omega, lambda, g_value: g, solve_residual: res })
    }

    /// `G` on a list of λ values.
    pub fn g_trace(&self, omega: f64, lambdas: &[f64]) -> Result<Vec<f64>> {
        lambdas.iter().map(|&l| self.eval_g(omega, l).map(|e| e.g_value)).collect()
    }

    /// Periodic `q = ⟨H⁻¹ψ₀′, ψ₀′⟩`.
    pub fn periodic_q(&self) -> Result<f64> {
        let psi0 = &self.report.psi0;
        let dpsi = self.op.derivative(psi0);
        let along = self.inner(&dpsi, psi0);
        if along.abs() > 1e-6 * norm(&self.op.grid, &dpsi) {
            return Err(Error::Anomaly(format!("psi0' not orthogonal to psi0 ({along:.3e})")));
        }
        let mut clean = dpsi;
        axpy(&mut clean, -along, psi0);
        let x = kernel_pseudo_solve(self.spec, self.report, &clean)?;
        Ok(self.inner(&x, &clean))
    }

    /// `ω*(H) = 1/(2√(−q))`, `+∞` when `q ≥ 0`.
    ///
    /// When the operator carries a reduced form the reported index comes from
    /// [`reduced_index`]; the periodic value is kept alongside since it is the
    /// one `G` and the companion matrix see.
    pub fn stability_index(&self) -> Result<IndexReport> {
        let q_periodic = self.periodic_q()?;
        let (q_index, route) = match reduced_index(self.op, &self.report.tol)? {
            Some(r) => (r.q_index, IndexRoute::Reduced),
            None => (q_periodic, IndexRoute::Periodic),
        };
        Ok(IndexReport {
            q_index,
            omega_star: omega_star_from_q(q_index),
            route,
            q_periodic,
            omega_star_periodic: omega_star_from_q(q_periodic),
        })
    }

    /// Closed-form `D₋₂`, `D₋₁`, `A`, `B` from the spectral decomposition.
    pub fn laurent_coeffs(&self, omega: f64) -> LaurentCoeffs {
        let rep = self.report;
        let ev = &self.spec.eigenvalues;
        let positive = |j: usize| ev[j] > rep.zero_tol;
        let dpsi = self.op.derivative(&rep.psi0);
        let r = project_p0(rep, &dpsi);
        let f = project_p1(rep, &self.phi_prime);
        let cr = self.spec.coefficients(&r);
        let cf = self.spec.coefficients(&f);
        let cpsi = self.spec.coefficients(&dpsi);
        let cphi = self.spec.coefficients(&self.phi_prime);
        let (mut n_sq, mut h1_f_psi, mut h1_r_phi) = (0.0, 0.0, 0.0);
        for j in (0..ev.len()).filter(|&j| positive(j)) {
            n_sq += cr[j] * cr[j] / ev[j];
            h1_f_psi += cf[j] * cpsi[j] / ev[j];
            h1_r_phi += cr[j] * cphi[j] / ev[j];
        }
        let b = rep.b_pairing;
        let den = 1.0 + 4.0 * omega * omega * n_sq;
        let a_coef = b / den;
        let b_coef = 2.0 * omega * h1_f_psi / den;
        LaurentCoeffs {
            d_minus2: a_coef * b - rep.delta_sq / (4.0 * omega * omega),
            d_minus1: b_coef * b - 2.0 * a_coef * omega * h1_r_phi,
            a_coef,
            b_coef,
            n_sq,
        }
    }

    /// Reconstruct `ψ = φ − 2ωλ[H+λ²+2ωλP₀∂P₀]⁻¹φ′`.
    pub fn eigenvector(&self, omega: f64, lambda: f64) -> Result<Vec<f64>> {
        let (x, _) = self.restricted_solve(omega, lambda, &self.rhs)?;
        let mut psi = self.report.phi.clone();
        axpy(&mut psi, -2.0 * omega * lambda, &x);
        Ok(psi)
    }

    /// Unique positive root of `G(ω,·)`, if any.
    pub fn find_unstable_lambda(&self, omega: f64) -> Result<Option<UnstableEigen>> {
        self.find_unstable_lambda_traced(omega, &mut Trace::new(omega))
    }

    pub fn find_unstable_lambda_traced(&self, omega: f64, trace: &mut Trace) -> Result<Option<UnstableEigen>> {
        let omega = omega.abs();
        let delta = self.report.delta();
        if omega == 0.0 {
            let psi = self.report.phi.clone();
            let residual = pencil_residual(self.op, 0.0, delta, &psi);
            return Ok(Some(UnstableEigen { lambda0: delta, eigvec: psi, residual }));
        }
        let lam_min = 1e-3 * delta.min(1.0);
        let mut lam_max = 10.0 * (delta + omega + 1.0);
        let mut grid = log_space(lam_min, lam_max, 48);
        let mut values = self.g_trace(omega, &grid)?;
        if sign_changes(&values).is_empty() {
            let ext = log_space(lam_max, 10.0 * lam_max, 13);
            values.extend(self.g_trace(omega, &ext[1..])?);
            grid.extend_from_slice(&ext[1..]);
            lam_max *= 10.0;
        }
        trace.record_samples(&grid, &values);
        let changes = sign_changes(&values);
        match changes.len() {
            0 => {
                let closest = values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
                if closest < 1e-10 {
                    return Err(Error::Anomaly(format!("G touches zero without changing sign (min |G| = {closest:.3e})")));
                }
                trace.note(format!("no sign change on [{lam_min:.3e}, {lam_max:.3e}]"));
                Ok(None)
            }
            1 => {
                let i = changes[0];
                let (a, b) = (grid[i], grid[i + 1]);
                trace.record_bracket(a, b);
                let failure = std::cell::RefCell::new(None);
                let f = |l: f64| match self.eval_g(omega, l) {
                    Ok(e) => e.g_value,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        f64::NAN
                    }
                };
                let mut conv = SimpleConvergency { eps: 1e-12, max_iter: 200 };
                let root = find_root_brent(a, b, &f, &mut conv);
                if let Some(e) = failure.into_inner() {
                    return Err(e);
                }
                let lam = root.map_err(|e| Error::Solver(format!("Brent iteration failed: {e}")))?;
                trace.note(format!("root {lam:.15e}"));
                Ok(Some(self.refine(omega, lam)?))
            }
            k => Err(Error::Anomaly(format!("G has {k} sign changes; at most one positive root is possible"))),
        }
    }

    /// Rayleigh-quotient refinement `λ² = −⟨Hψ,ψ⟩/‖ψ‖²`, kept only if it lowers the residual.
    fn refine(&self, omega: f64, lambda: f64) -> Result<UnstableEigen> {
        let psi = self.eigenvector(omega, lambda)?;
        let residual = pencil_residual(self.op, omega, lambda, &psi);
        let mut best = UnstableEigen { lambda0: lambda, eigvec: psi, residual };
        let hpsi = self.op.apply(&best.eigvec);
        let rq = -dot(&hpsi, &best.eigvec) / dot(&best.eigvec, &best.eigvec);
        if rq > 0.0 {
            let lr = rq.sqrt();
            if let Ok(psi_r) = self.eigenvector(omega, lr) {
                let res_r = pencil_residual(self.op, omega, lr, &psi_r);
                if res_r < best.residual {
                    best = UnstableEigen { lambda0: lr, eigvec: psi_r, residual: res_r };
                }
            }
        }
        Ok(best)
    }

    /// Stability decision at `ω`: stable iff `|ω| ≥ ω*`.
    pub fn verdict(&self, omega: f64) -> Result<StabilityVerdict> {
        let w = omega.abs();
        let index = self.stability_index()?;
        let mut trace = Trace::new(w);
        let root = self.find_unstable_lambda_traced(w, &mut trace)?;
        let stable = w >= index.omega_star;
        let mut flags = Vec::new();

        let expect_root = w < index.omega_star_periodic;
        let near_periodic = (w - index.omega_star_periodic).abs() <= 1e-3 * index.omega_star_periodic;
        if root.is_some() != expect_root {
            if near_periodic {
                flags.push("near_threshold".to_string());
            } else {
                return Err(Error::Anomaly(format!(
                    "root search ({}) disagrees with periodic index omega* = {:.6e} at omega = {w:.6e}",
                    if root.is_some() { "root found" } else { "no root" },
                    index.omega_star_periodic
                )));
            }
        }
        if stable != (w >= index.omega_star_periodic) {
            flags.push("domain_sensitive".to_string());
        }
        if stable && (w - index.omega_star) <= 1e-9 * index.omega_star.max(1.0) {
            flags.push("marginal".to_string());
        }
        if let Some(r) = &root {
            if r.residual > 1e-6 {
                flags.push("large_residual".to_string());
            }
        }
        Ok(StabilityVerdict {
            omega: w,
            index,
            q_index: index.q_index,
            omega_star: index.omega_star,
            stable,
            lambda0: root.as_ref().map(|r| r.lambda0),
            pencil_residual: root.as_ref().map(|r| r.residual),
            eigvec: root.map(|r| r.eigvec),
            flags,
            trace,
        })
    }
}

/// `‖λ²ψ + 2ωλ∂ψ + Hψ‖ / ‖ψ‖` in the grid norm.
pub fn pencil_residual(op: &OperatorH, omega: f64, lambda: f64, psi: &[f64]) -> f64 {
    let mut r = op.apply(psi);
    axpy(&mut r, lambda * lambda, psi);
    if omega != 0.0 {
        axpy(&mut r, 2.0 * omega * lambda, &op.derivative(psi));
    }
    norm(&op.grid, &r) / norm(&op.grid, psi)
}

/// `n` logarithmically spaced points from `a` to `b` inclusive.
pub fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Indices `i` with `v[i]` and `v[i+1]` of strictly opposite sign.
pub fn sign_changes(v: &[f64]) -> Vec<usize> {
    (0..v.len().saturating_sub(1)).filter(|&i| v[i] * v[i + 1] < 0.0).collect()
}
