//! Dense realizations of the linearized operators `H` and the Hill operator `L`.

use crate::error::{invalid, Result};
use crate::grid::{diff_matrix, Grid};
use crate::linalg::DenseMatrix;
use crate::profiles::{Model, WaveProfile};

/// Shift applied to gauge directions (see [`OperatorH::effective`]).
pub const GAUGE_SHIFT: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    BoussinesqH,
    HillL,
    KgzH,
    BeamH,
    Custom,
}

/// Factorization `H = Bᵀ K B` where `B` differentiates the flagged blocks
/// and is the identity on the rest.
#[derive(Clone, Debug)]
pub struct ReducedForm {
    pub k: DenseMatrix,
    pub gauge_blocks: Vec<bool>,
}

/// Symmetric operator together with the structure the pencil needs: the
/// blockwise derivative, gauge directions and the model's analytic kernel.
#[derive(Clone, Debug)]
pub struct OperatorH {
    /// The operator exactly as assembled.
    pub matrix: DenseMatrix,
    pub kind: OperatorKind,
    pub model: Option<Model>,
    pub c: f64,
    pub p: f64,
    pub grid: Grid,
    pub block: bool,
    effective: DenseMatrix,
    d1: DenseMatrix,
    gauge: Vec<Vec<f64>>,
    reduced: Option<ReducedForm>,
    reference_kernel: Option<Vec<f64>>,
}

impl OperatorH {
    /// Wrap an arbitrary symmetric matrix (scalar or two-block) on `grid`.
    pub fn custom(matrix: DenseMatrix, grid: &Grid) -> Result<Self> {
        let n = grid.n_points();
        let block = match matrix.dim() {
            d if d == n => false,
            d if d == 2 * n => true,
            d => return invalid(format!("matrix dimension {d} does not match grid N={n}")),
        };
        let matrix = matrix.into_symmetric()?;
        let d1 = block_d1(grid, block)?;
        Ok(Self::assemble(matrix, OperatorKind::Custom, None, 0.0, 0.0, grid, block, d1, vec![], None, None))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        matrix: DenseMatrix,
        kind: OperatorKind,
        model: Option<Model>,
        c: f64,
        p: f64,
        grid: &Grid,
        block: bool,
        d1: DenseMatrix,
        gauge: Vec<Vec<f64>>,
        reduced: Option<ReducedForm>,
        reference_kernel: Option<Vec<f64>>,
    ) -> Self {
        let mut effective = matrix.clone();
        let h = grid.spacing();
        for g in &gauge {
            effective.add_rank_one(GAUGE_SHIFT * h, g, g);
        }
        Self { matrix, kind, model, c, p, grid: grid.clone(), block, effective, d1, gauge, reduced, reference_kernel }
    }

    /// `H + s·Σ g⟨g,·⟩` over the gauge directions. On the periodic grid the
    /// Boussinesq and KGZ operators annihilate constants (and, for Boussinesq,
    /// the Nyquist mode) because of the outer derivatives; these directions
    /// are decoupled from the pencil and are lifted to eigenvalue `s`.
    pub fn effective(&self) -> &DenseMatrix {
        &self.effective
    }

    /// Blockwise first-derivative matrix.
    pub fn d1(&self) -> &DenseMatrix {
        &self.d1
    }

    pub fn derivative(&self, v: &[f64]) -> Vec<f64> {
        self.d1.matvec(v)
    }

    pub fn gauge_vectors(&self) -> &[Vec<f64>] {
        &self.gauge
    }

    pub fn reduced(&self) -> Option<&ReducedForm> {
        self.reduced.as_ref()
    }

    pub fn reference_kernel(&self) -> Option<&[f64]> {
        self.reference_kernel.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.effective.matvec(v)
    }
}

fn block_d1(grid: &Grid, block: bool) -> Result<DenseMatrix> {
    let d1 = diff_matrix(grid, 1)?;
    if block {
        let z = DenseMatrix::zeros(grid.n_points());
        Ok(DenseMatrix::block2(&d1, &z, &z, &d1))
    } else {
        Ok(d1)
    }
}

fn require(profile: &WaveProfile, model: Model) -> Result<()> {
    if profile.model != model {
        return invalid(format!("expected a {model} profile, got {}", profile.model));
    }
    Ok(())
}

/// Constant and Nyquist vectors with unit grid norm.
fn constant_and_nyquist(grid: &Grid) -> (Vec<f64>, Vec<f64>) {
    let n = grid.n_points();
    let a = 1.0 / (2.0 * grid.half_length()).sqrt();
    (vec![a; n], (0..n).map(|j| if j % 2 == 0 { a } else { -a }).collect())
}

fn hill_matrix(profile: &WaveProfile) -> Result<DenseMatrix> {
    let (c, p) = (profile.c, profile.p);
    let grid = &profile.grid;
    let mut l = diff_matrix(grid, 2)?.scaled(-1.0);
    let v: Vec<f64> = profile.values.iter().map(|&f| (1.0 - c * c) - p * f.powf(p - 1.0)).collect();
    l.add_diagonal(&v);
    l.into_symmetric()
}

/// `L = −∂² + (1−c²) − pφ^{p−1}`.
pub fn build_hill_l(profile: &WaveProfile) -> Result<OperatorH> {
    require(profile, Model::Boussinesq)?;
    let grid = &profile.grid;
    let l = hill_matrix(profile)?;
    let d1 = diff_matrix(grid, 1)?;
    let kernel = d1.matvec(&profile.values);
    Ok(OperatorH::assemble(l, OperatorKind::HillL, Some(Model::Boussinesq), profile.c, profile.p, grid, false, d1, vec![], None, Some(kernel)))
}

/// Boussinesq `H = −D1·L·D1`.
pub fn build_boussinesq_h(profile: &WaveProfile) -> Result<OperatorH> {
    require(profile, Model::Boussinesq)?;
    let grid = &profile.grid;
    let l = hill_matrix(profile)?;
    let d1 = diff_matrix(grid, 1)?;
    let h = d1.matmul(&l).matmul(&d1).scaled(-1.0).into_symmetric()?;
    let (cst, nyq) = constant_and_nyquist(grid);
    Ok(OperatorH::assemble(
        h,
        OperatorKind::BoussinesqH,
        Some(Model::Boussinesq),
        profile.c,
        profile.p,
        grid,
        false,
        d1,
        vec![cst, nyq],
        Some(ReducedForm { k: l, gauge_blocks: vec![true] }),
        Some(profile.values.clone()),
    ))
}

/// Direct assembly `D4 − (1−c²)D2 + D1·diag(pφ^{p−1})·D1`. Agrees with
/// [`build_boussinesq_h`] away from the Nyquist mode.
pub fn build_boussinesq_h_direct(profile: &WaveProfile) -> Result<DenseMatrix> {
    require(profile, Model::Boussinesq)?;
    let (c, p) = (profile.c, profile.p);
    let grid = &profile.grid;
    let d1 = diff_matrix(grid, 1)?;
    let pot: Vec<f64> = profile.values.iter().map(|&f| p * f.powf(p - 1.0)).collect();
    let mid = d1.matmul(&DenseMatrix::diagonal(&pot)).matmul(&d1);
    diff_matrix(grid, 4)?.sub(&diff_matrix(grid, 2)?.scaled(1.0 - c * c)).add(&mid).into_symmetric()
}

/// KGZ block operator `[[H₁, A], [Aᵀ, H₂]]` with `A = diag(φ)·D1`.
pub fn build_kgz_h(profile: &WaveProfile) -> Result<OperatorH> {
    require(profile, Model::Kgz)?;
    if profile.companion.is_none() {
        return invalid("kgz profile is missing its companion psi");
    }
    let grid = &profile.grid;
    let n = grid.n_points();
    let mu2 = 1.0 - profile.c * profile.c;
    let phi = &profile.values;
    let d1 = diff_matrix(grid, 1)?;
    let d2 = diff_matrix(grid, 2)?;
    let mut h1 = d2.scaled(-mu2);
    let pot: Vec<f64> = phi.iter().map(|&f| 1.0 - f * f / (2.0 * mu2)).collect();
    h1.add_diagonal(&pot);
    let h2 = d2.scaled(-mu2);
    let a = DenseMatrix::diagonal(phi).matmul(&d1);
    let h = DenseMatrix::block2(&h1, &a, &a.transpose(), &h2).into_symmetric()?;

    let coupling = DenseMatrix::diagonal(phi);
    let far = DenseMatrix::identity(n).scaled(mu2);
    let k = DenseMatrix::block2(&h1, &coupling, &coupling, &far).into_symmetric()?;

    let (cst, _) = constant_and_nyquist(grid);
    let mut gauge = vec![0.0; 2 * n];
    gauge[n..].copy_from_slice(&cst);
    let dphi = d1.matvec(phi);
    let mut kernel = dphi;
    kernel.extend(phi.iter().map(|&f| -f * f / (2.0 * mu2)));
    Ok(OperatorH::assemble(
        h,
        OperatorKind::KgzH,
        Some(Model::Kgz),
        profile.c,
        profile.p,
        grid,
        true,
        block_d1(grid, true)?,
        vec![gauge],
        Some(ReducedForm { k, gauge_blocks: vec![false, true] }),
        Some(kernel),
    ))
}

/// Beam `H = D4 + c²D2 + I − diag(pφ^{p−1})`.
pub fn build_beam_h(profile: &WaveProfile) -> Result<OperatorH> {
    require(profile, Model::Beam)?;
    let (c, p) = (profile.c, profile.p);
    let grid = &profile.grid;
    let mut h = diff_matrix(grid, 4)?.add(&diff_matrix(grid, 2)?.scaled(c * c));
    let pot: Vec<f64> = profile.values.iter().map(|&f| 1.0 - p * f.abs().powf(p - 1.0)).collect();
    h.add_diagonal(&pot);
    let h = h.into_symmetric()?;
    let d1 = diff_matrix(grid, 1)?;
    let kernel = d1.matvec(&profile.values);
    Ok(OperatorH::assemble(h, OperatorKind::BeamH, Some(Model::Beam), c, p, grid, false, d1, vec![], None, Some(kernel)))
}

/// Model operator `H` for a profile.
pub fn build_h(profile: &WaveProfile) -> Result<OperatorH> {
    match profile.model {
        Model::Boussinesq => build_boussinesq_h(profile),
        Model::Kgz => build_kgz_h(profile),
        Model::Beam => build_beam_h(profile),
    }
}
