//! Thin dense-matrix layer over `faer`.

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::{Col, Mat, MatRef, Side};

pub use faer::c64;

use crate::error::{Error, Result};

/// Square real matrix with a symmetry flag.
#[derive(Clone, Debug)]
pub struct DenseMatrix {
    data: Mat<f64>,
    symmetric: bool,
}

impl DenseMatrix {
    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        Self { data: Mat::from_fn(n, n, f), symmetric: false }
    }

    pub fn from_mat(data: Mat<f64>) -> Self {
        assert_eq!(data.nrows(), data.ncols(), "matrix must be square");
        Self { data, symmetric: false }
    }

    pub fn zeros(n: usize) -> Self {
        Self { data: Mat::zeros(n, n), symmetric: true }
    }

    pub fn identity(n: usize) -> Self {
        Self { data: Mat::identity(n, n), symmetric: true }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self { data: Mat::from_fn(n, n, |i, j| if i == j { d[i] } else { 0.0 }), symmetric: true }
    }

    /// Assemble `[[a, b], [c, d]]` from four equally sized blocks.
    pub fn block2(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let n = a.dim();
        assert!(b.dim() == n && c.dim() == n && d.dim() == n);
        let data = Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => a.data[(i, j)],
            (true, false) => b.data[(i, j - n)],
            (false, true) => c.data[(i - n, j)],
            (false, false) => d.data[(i - n, j - n)],
        });
        Self { data, symmetric: false }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    pub fn as_ref(&self) -> MatRef<'_, f64> {
        self.data.as_ref()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// `‖M − Mᵀ‖_max / ‖M‖_max`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..j {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)]).abs());
            }
        }
        let scale = self.max_abs();
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    /// Set the symmetry flag after checking the defect, averaging away roundoff.
    pub fn into_symmetric(mut self) -> Result<Self> {
        let defect = self.symmetry_defect();
        if defect > 1e-12 {
            return Err(Error::InvalidParameter(format!("matrix not symmetric (defect {defect:.3e})")));
        }
        let n = self.dim();
        for j in 0..n {
            for i in 0..j {
                let m = 0.5 * (self.data[(i, j)] + self.data[(j, i)]);
                self.data[(i, j)] = m;
                self.data[(j, i)] = m;
            }
        }
        self.symmetric = true;
        Ok(self)
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for j in 0..self.dim() {
            for &x in self.data.col(j).iter() {
                m = m.max(x.abs());
            }
        }
        m
    }

    pub fn row_sum_norm(&self) -> f64 {
        let n = self.dim();
        let mut sums = vec![0.0; n];
        for j in 0..n {
            for (i, &x) in self.data.col(j).iter().enumerate() {
                sums[i] += x.abs();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    pub fn trace_abs(&self) -> f64 {
        (0..self.dim()).map(|i| self.data[(i, i)].abs()).sum()
    }

    pub fn is_finite(&self) -> bool {
        (0..self.dim()).all(|j| self.data.col(j).iter().all(|x| x.is_finite()))
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim(), "matvec length mismatch");
        let x = Col::from_fn(v.len(), |i| v[i]);
        let y = &self.data * &x;
        y.iter().copied().collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self { data: &self.data * &other.data, symmetric: false }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { data: &self.data + &other.data, symmetric: self.symmetric && other.symmetric }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { data: &self.data - &other.data, symmetric: self.symmetric && other.symmetric }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { data: Mat::from_fn(self.dim(), self.dim(), |i, j| s * self.data[(i, j)]), symmetric: self.symmetric }
    }

    pub fn transpose(&self) -> Self {
        Self { data: self.data.transpose().to_owned(), symmetric: self.symmetric }
    }

    pub fn add_diagonal(&mut self, d: &[f64]) {
        assert_eq!(d.len(), self.dim());
        for (i, &x) in d.iter().enumerate() {
            self.data[(i, i)] += x;
        }
    }

    pub fn add_identity(&mut self, s: f64) {
        for i in 0..self.dim() {
            self.data[(i, i)] += s;
        }
    }

    /// `M += s·u·vᵀ`. Keeps the symmetry flag only when `u == v`.
    pub fn add_rank_one(&mut self, s: f64, u: &[f64], v: &[f64]) {
        let n = self.dim();
        for j in 0..n {
            let sv = s * v[j];
            if sv == 0.0 {
                continue;
            }
            for i in 0..n {
                self.data[(i, j)] += u[i] * sv;
            }
        }
        if !std::ptr::eq(u, v) && u != v {
            self.symmetric = false;
        }
    }

    /// Symmetric eigendecomposition; eigenvalues ascending, eigenvectors as
    /// Euclidean-orthonormal columns.
    pub fn symmetric_eigen(&self) -> Result<(Vec<f64>, Mat<f64>)> {
        let evd = self
            .data
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Solver(format!("symmetric eigensolver: {e:?}")))?;
        let values: Vec<f64> = evd.S().column_vector().iter().copied().collect();
        Ok((values, evd.U().to_owned()))
    }

    pub fn eigenvalues(&self) -> Result<Vec<faer::c64>> {
        self.data.eigenvalues().map_err(|e| Error::Solver(format!("eigensolver: {e:?}")))
    }

    pub fn lu(&self) -> Lu {
        Lu { inner: self.data.partial_piv_lu() }
    }
}

/// LU factorization with partial pivoting.
pub struct Lu {
    inner: PartialPivLu<f64>,
}

impl Lu {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let b = Col::from_fn(rhs.len(), |i| rhs[i]);
        let x = self.inner.solve(&b);
        x.iter().copied().collect()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_max(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `a += s·b`.
pub fn axpy(a: &mut [f64], s: f64, b: &[f64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += s * y;
    }
}
