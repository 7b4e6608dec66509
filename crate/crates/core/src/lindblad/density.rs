use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;

/// A density matrix in the number basis `|0⟩ … |dim−1⟩`.
///
/// Construction checks Hermiticity, unit trace and positive semidefiniteness
/// (each up to its tolerance constant).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        check_state(&m)?;
        Ok(Self { m })
    }

    /// Skips validation; callers guarantee the invariants.
    pub(crate) fn from_matrix_unchecked(m: DMatrix<Complex64>) -> Self {
        Self { m }
    }

    /// `|n⟩⟨n|` in a `dim`-level space.
    pub fn number_state(dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::Structural(format!(
                "level {n} outside a {dim}-dimensional space"
            )));
        }
        let mut m = DMatrix::zeros(dim, dim);
        m[(n, n)] = Complex64::new(1.0, 0.0);
        Ok(Self { m })
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let dim = populations.len();
        let mut m = DMatrix::zeros(dim, dim);
        for (i, &p) in populations.iter().enumerate() {
            m[(i, i)] = Complex64::new(p, 0.0);
        }
        Self::new(m)
    }

    /// Fermionic `diag(1−n, n)`.
    pub fn fermion_diagonal(n: f64) -> Result<Self> {
        Self::diagonal(&[1.0 - n, n])
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_hermitian_eigenvalue(&self.m)
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }
}

/// `Tr(n̂ρ)` with `n̂ = diag(0, 1, …)`; real part.
pub fn occupation(rho: &DensityMatrix) -> f64 {
    number_expectation(rho.matrix()).re
}

pub(crate) fn number_expectation(m: &DMatrix<Complex64>) -> Complex64 {
    (0..m.nrows()).map(|i| m[(i, i)] * i as f64).sum()
}

pub(crate) fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn min_hermitian_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    // symmetrize first so tiny anti-Hermitian noise does not leak in
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn check_state(m: &DMatrix<Complex64>) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::Structural(format!(
            "density matrix must be square and non-empty, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericalInstability(
            "density matrix has non-finite entries".into(),
        ));
    }
    let herm = hermiticity_defect(m);
    if herm > HERMITICITY_TOL {
        return Err(Error::Domain(format!(
            "density matrix not Hermitian (defect {herm:e})"
        )));
    }
    let tr = m.trace();
    if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(Error::Domain(format!("trace {tr} differs from 1")));
    }
    let min_eig = min_hermitian_eigenvalue(m);
    if min_eig < -POSITIVITY_TOL {
        return Err(Error::Domain(format!(
            "density matrix not positive (min eigenvalue {min_eig:e})"
        )));
    }
    Ok(())
}
