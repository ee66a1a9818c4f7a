//! Multimode Gaussian states in the vacuum-variance-1/4 convention.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen, Vector2};

use crate::error::{Error, Result};
use crate::symplectic::omega;

/// Variance of either vacuum quadrature.
pub const VACUUM_VARIANCE: f64 = 0.25;

/// Mean vector and covariance matrix over `n_modes` optical modes, ordered
/// `(x1, p1, x2, p2, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state from raw moments, checking symmetry and the
    /// uncertainty relation.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 {
            return Err(Error::NoModes);
        }
        if !dim.is_multiple_of(2) {
            return Err(Error::Dimension {
                expected: dim + 1,
                got: dim,
            });
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: cov.nrows(),
            });
        }
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("state moments"));
        }
        let scale = cov.amax().max(1.0);
        let asym = (&cov - cov.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::Asymmetric(asym));
        }
        let state = Self::from_parts_symmetrized(mean, cov);
        let nu_min = state.min_symplectic_eigenvalue();
        // Absolute floor plus the round-off inherent in forming V Ω V.
        let tol = 1e-10 + 1e3 * f64::EPSILON * scale * scale;
        if nu_min.is_nan() || nu_min < VACUUM_VARIANCE - tol {
            return Err(Error::Unphysical(nu_min));
        }
        Ok(state)
    }

    /// Trusted constructor for results of symplectic or additive-noise
    /// updates, which cannot leave the physical set.
    pub(crate) fn from_parts_symmetrized(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        let cov = (&cov + cov.transpose()) * 0.5;
        GaussianState { mean, cov }
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Mean of a single-mode state.
    pub fn mean2(&self) -> Result<Vector2<f64>> {
        self.require_single_mode()?;
        Ok(Vector2::new(self.mean[0], self.mean[1]))
    }

    /// Covariance of a single-mode state.
    pub fn cov2(&self) -> Result<Matrix2<f64>> {
        self.require_single_mode()?;
        Ok(Matrix2::new(
            self.cov[(0, 0)],
            self.cov[(0, 1)],
            self.cov[(1, 0)],
            self.cov[(1, 1)],
        ))
    }

    pub(crate) fn require_single_mode(&self) -> Result<()> {
        match self.n_modes() {
            1 => Ok(()),
            n => Err(Error::NotSingleMode(n)),
        }
    }

    pub(crate) fn check_mode(&self, index: usize) -> Result<()> {
        if index < self.n_modes() {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange {
                index,
                n_modes: self.n_modes(),
            })
        }
    }

    /// Product state `self ⊗ other`; `other`'s modes are appended.
    pub fn tensor(&self, other: &GaussianState) -> GaussianState {
        let (a, b) = (self.mean.len(), other.mean.len());
        let mut mean = DVector::zeros(a + b);
        mean.rows_mut(0, a).copy_from(&self.mean);
        mean.rows_mut(a, b).copy_from(&other.mean);
        let mut cov = DMatrix::zeros(a + b, a + b);
        cov.view_mut((0, 0), (a, a)).copy_from(&self.cov);
        cov.view_mut((a, a), (b, b)).copy_from(&other.cov);
        GaussianState { mean, cov }
    }

    /// Reduced state of one mode (partial trace).
    pub fn reduced(&self, mode: usize) -> Result<GaussianState> {
        self.check_mode(mode)?;
        let i = 2 * mode;
        Ok(GaussianState {
            mean: self.mean.rows(i, 2).into_owned(),
            cov: self.cov.view((i, i), (2, 2)).into_owned(),
        })
    }

    /// Symplectic eigenvalues in ascending order; all are `>= 1/4` for a
    /// physical state, with equality throughout for a pure state.
    ///
    /// Uses the real symmetric matrix `V^{1/2} Ωᵀ V Ω V^{1/2}`, whose
    /// eigenvalues are the squared symplectic eigenvalues, each twice.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let n = self.n_modes();
        if n == 1 {
            let c = &self.cov;
            let det = c[(0, 0)] * c[(1, 1)] - c[(0, 1)] * c[(1, 0)];
            return vec![det.max(0.0).sqrt()];
        }
        let eig = SymmetricEigen::new(self.cov.clone());
        if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
            // Not positive definite: certainly unphysical.
            return vec![0.0; n];
        }
        let sqrt_vals = eig.eigenvalues.map(f64::sqrt);
        let root = &eig.eigenvectors
            * DMatrix::from_diagonal(&sqrt_vals)
            * eig.eigenvectors.transpose();
        let w = omega(n);
        let m = &root * w.transpose() * &self.cov * &w * &root;
        let m = (&m + m.transpose()) * 0.5;
        let mut sq: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        sq.sort_by(f64::total_cmp);
        sq.chunks(2)
            .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
            .collect()
    }

    pub fn min_symplectic_eigenvalue(&self) -> f64 {
        self.symplectic_eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Mean and variance of a linear quadrature combination.
    pub fn quadrature_stats(&self, obs: &QuadratureObservable) -> Result<(f64, f64)> {
        quadrature_stats(self, obs)
    }
}

/// Vacuum on `n_modes` modes: zero mean, covariance `I/4`.
pub fn make_vacuum(n_modes: usize) -> Result<GaussianState> {
    if n_modes == 0 {
        return Err(Error::NoModes);
    }
    Ok(GaussianState {
        mean: DVector::zeros(2 * n_modes),
        cov: DMatrix::identity(2 * n_modes, 2 * n_modes) * VACUUM_VARIANCE,
    })
}

/// Displaced vacuum with the given quadrature means.
pub fn make_coherent(mean_x: f64, mean_p: f64) -> Result<GaussianState> {
    if !mean_x.is_finite() || !mean_p.is_finite() {
        return Err(Error::NonFinite("coherent amplitude"));
    }
    let mut state = make_vacuum(1)?;
    state.mean[0] = mean_x;
    state.mean[1] = mean_p;
    Ok(state)
}

/// Adds independent classical Gaussian noise (absolute variance units) to
/// the `x` and `p` quadratures of one mode.
pub fn add_classical_noise(
    state: &GaussianState,
    mode: usize,
    var_x: f64,
    var_p: f64,
) -> Result<GaussianState> {
    state.check_mode(mode)?;
    for (what, value) in [("x", var_x), ("p", var_p)] {
        if !value.is_finite() {
            return Err(Error::NonFinite("classical noise variance"));
        }
        if value < 0.0 {
            return Err(Error::NegativeVariance { what, value });
        }
    }
    let mut out = state.clone();
    out.cov[(2 * mode, 2 * mode)] += var_x;
    out.cov[(2 * mode + 1, 2 * mode + 1)] += var_p;
    Ok(out)
}

/// A generalized quadrature `c · (x1, p1, x2, p2, ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureObservable {
    coefficients: DVector<f64>,
}

impl QuadratureObservable {
    pub fn new(coefficients: DVector<f64>) -> Result<Self> {
        if coefficients.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("observable coefficients"));
        }
        if coefficients.iter().all(|&v| v == 0.0) {
            return Err(Error::Config("observable coefficients are all zero".into()));
        }
        Ok(QuadratureObservable { coefficients })
    }

    /// `cos θ · x + sin θ · p` on `mode`.
    pub fn homodyne(mode: usize, theta: f64, n_modes: usize) -> Result<Self> {
        if mode >= n_modes {
            return Err(Error::ModeOutOfRange { index: mode, n_modes });
        }
        if !theta.is_finite() {
            return Err(Error::NonFinite("homodyne angle"));
        }
        let mut c = DVector::zeros(2 * n_modes);
        let (s, co) = theta.sin_cos();
        c[2 * mode] = co;
        c[2 * mode + 1] = s;
        Ok(QuadratureObservable { coefficients: c })
    }

    pub fn coefficients(&self) -> &DVector<f64> {
        &self.coefficients
    }
}

/// `(c · mean, cᵀ cov c)`.
pub fn quadrature_stats(state: &GaussianState, obs: &QuadratureObservable) -> Result<(f64, f64)> {
    let c = &obs.coefficients;
    if c.len() != state.mean.len() {
        return Err(Error::Dimension {
            expected: state.mean.len(),
            got: c.len(),
        });
    }
    let mean = c.dot(&state.mean);
    let var = (c.transpose() * &state.cov * c)[(0, 0)];
    Ok((mean, var))
}
