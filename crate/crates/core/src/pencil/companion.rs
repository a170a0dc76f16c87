//! First-order companion form `T = [[0, I], [−H, −2ωD₁]]`.

use faer::c64;

use crate::error::Result;
use crate::linalg::DenseMatrix;
use crate::operators::OperatorH;

/// `√‖H‖_∞`, the magnitude of the companion spectrum.
pub fn companion_scale(op: &OperatorH) -> f64 {
    op.effective().row_sum_norm().sqrt()
}

/// Companion matrix conjugated by `diag(I, sI)`, `s` = [`companion_scale`],
/// which balances the blocks without changing the spectrum.
pub fn companion_matrix(op: &OperatorH, omega: f64) -> DenseMatrix {
    let n = op.dim();
    let s = companion_scale(op).max(1.0);
    let h = op.effective();
    let d1 = op.d1();
    DenseMatrix::from_fn(2 * n, |i, j| match (i < n, j < n) {
        (true, true) => 0.0,
        (true, false) => {
            if i == j - n {
                s
            } else {
                0.0
            }
        }
        (false, true) => -h.get(i - n, j) / s,
        (false, false) => -2.0 * omega * d1.get(i - n, j - n),
    })
}

/// All eigenvalues of the companion matrix, sorted by real part.
pub fn companion_spectrum(op: &OperatorH, omega: f64) -> Result<Vec<c64>> {
    let mut ev = companion_matrix(op, omega).eigenvalues()?;
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ev)
}

/// Real-axis content of a companion spectrum at tolerance `tol` on `Re`.
#[derive(Clone, Debug)]
pub struct CompanionSummary {
    pub tol: f64,
    pub max_abs_re: f64,
    /// Eigenvalues with `Re > tol`.
    pub unstable: Vec<c64>,
    /// Eigenvalues with `Re < −tol`.
    pub mirror: Vec<c64>,
}

impl CompanionSummary {
    pub fn new(eigs: &[c64], tol: f64) -> Self {
        Self {
            tol,
            max_abs_re: eigs.iter().fold(0.0, |m, z| m.max(z.re.abs())),
            unstable: eigs.iter().copied().filter(|z| z.re > tol).collect(),
            mirror: eigs.iter().copied().filter(|z| z.re < -tol).collect(),
        }
    }

    pub fn is_stable(&self) -> bool {
        self.unstable.is_empty()
    }

    /// The single unstable eigenvalue, when there is exactly one.
    pub fn lambda0(&self) -> Option<c64> {
        (self.unstable.len() == 1).then(|| self.unstable[0])
    }

    /// Distance from `−λ` to the nearest eigenvalue with negative real part.
    pub fn mirror_distance(&self, lambda: c64) -> f64 {
        self.mirror.iter().map(|z| (z + lambda).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Tolerance on `Re λ` used for stability classification of the companion spectrum.
pub fn default_re_tol(op: &OperatorH) -> f64 {
    1e-6 * companion_scale(op)
}
