//! Linear quadrature maps that preserve the symplectic form.
//!
//! Matrices act on interleaved quadrature vectors `(x1, p1, x2, p2, ...)`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::state::GaussianState;

/// Block-diagonal symplectic form with `[[0, 1], [-1, 0]]` blocks.
pub fn omega(n_modes: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        w[(2 * k, 2 * k + 1)] = 1.0;
        w[(2 * k + 1, 2 * k)] = -1.0;
    }
    w
}

/// A symplectic matrix together with a human-readable tag.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticOp {
    matrix: DMatrix<f64>,
    label: String,
}

impl SymplecticOp {
    /// Wraps an arbitrary matrix, checking `S Ω Sᵀ = Ω` to `1e-10`.
    pub fn new(matrix: DMatrix<f64>, label: impl Into<String>) -> Result<Self> {
        if !matrix.is_square() || !matrix.nrows().is_multiple_of(2) || matrix.nrows() == 0 {
            return Err(Error::Dimension {
                expected: 2 * (matrix.nrows() / 2).max(1),
                got: matrix.ncols(),
            });
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("symplectic matrix"));
        }
        let op = SymplecticOp {
            matrix,
            label: label.into(),
        };
        let residual = op.symplectic_residual();
        if residual > 1e-10 {
            return Err(Error::InvalidPlan(format!(
                "matrix '{}' is not symplectic (residual {residual:e})",
                op.label
            )));
        }
        Ok(op)
    }

    fn from_parts(matrix: DMatrix<f64>, label: String) -> Self {
        SymplecticOp { matrix, label }
    }

    pub fn identity(n_modes: usize) -> Self {
        Self::from_parts(DMatrix::identity(2 * n_modes, 2 * n_modes), "identity".into())
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    /// `max |S Ω Sᵀ − Ω|`.
    pub fn symplectic_residual(&self) -> f64 {
        let w = omega(self.n_modes());
        (&self.matrix * &w * self.matrix.transpose() - w).amax()
    }

    /// Lifts a single-mode operation onto `mode` of an `n_modes` register.
    pub fn embed(&self, mode: usize, n_modes: usize) -> Result<Self> {
        if self.n_modes() != 1 {
            return Err(Error::NotSingleMode(self.n_modes()));
        }
        if mode >= n_modes {
            return Err(Error::ModeOutOfRange { index: mode, n_modes });
        }
        let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
        m.view_mut((2 * mode, 2 * mode), (2, 2)).copy_from(&self.matrix);
        Ok(Self::from_parts(m, format!("{}@{mode}", self.label)))
    }

    /// Lifts a `k`-mode operation onto the listed modes of an `n_modes`
    /// register, in the listed order.
    pub fn embed_modes(&self, modes: &[usize], n_modes: usize) -> Result<Self> {
        if modes.len() != self.n_modes() {
            return Err(Error::Dimension {
                expected: self.n_modes(),
                got: modes.len(),
            });
        }
        for (i, &mode) in modes.iter().enumerate() {
            if mode >= n_modes {
                return Err(Error::ModeOutOfRange { index: mode, n_modes });
            }
            if modes[..i].contains(&mode) {
                return Err(Error::SameMode(mode));
            }
        }
        let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
        for (i, &a) in modes.iter().enumerate() {
            for (j, &b) in modes.iter().enumerate() {
                m.view_mut((2 * a, 2 * b), (2, 2))
                    .copy_from(&self.matrix.view((2 * i, 2 * j), (2, 2)));
            }
        }
        Ok(Self::from_parts(m, format!("{}@{modes:?}", self.label)))
    }

    /// `other` applied after `self`, i.e. the matrix `other · self`.
    pub fn then(&self, other: &SymplecticOp) -> Result<Self> {
        if self.matrix.nrows() != other.matrix.nrows() {
            return Err(Error::Dimension {
                expected: self.matrix.nrows(),
                got: other.matrix.nrows(),
            });
        }
        Ok(Self::from_parts(
            &other.matrix * &self.matrix,
            format!("{} ∘ {}", other.label, self.label),
        ))
    }

    pub fn apply(&self, state: &GaussianState) -> Result<GaussianState> {
        apply(self, state)
    }
}

/// `diag(e^r, e^-r)`: stretches `x`, squeezes `p` for `r > 0`.
pub fn single_mode_squeezer(r: f64) -> Result<SymplecticOp> {
    if !r.is_finite() {
        return Err(Error::NonFinite("squeezing parameter"));
    }
    let m = DMatrix::from_row_slice(2, 2, &[r.exp(), 0.0, 0.0, (-r).exp()]);
    Ok(SymplecticOp::from_parts(m, format!("squeeze({r})")))
}

/// Phase-space rotation by `theta`; `theta = π/2` is the Fourier gate.
pub fn phase_rotation(theta: f64) -> Result<SymplecticOp> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("rotation angle"));
    }
    let (s, c) = theta.sin_cos();
    let m = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
    Ok(SymplecticOp::from_parts(m, format!("rotate({theta})")))
}

/// Fourier transform `x -> p`, `p -> -x` built from exact entries.
pub fn fourier() -> SymplecticOp {
    SymplecticOp::from_parts(
        DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]),
        "fourier".into(),
    )
}

/// Balanced beamsplitter: mode `a` receives `(a + b)/√2`, mode `b` receives
/// `(a − b)/√2`, with the same signs on both quadratures.
pub fn beamsplitter_50_50(mode_a: usize, mode_b: usize, n_modes: usize) -> Result<SymplecticOp> {
    if mode_a == mode_b {
        return Err(Error::SameMode(mode_a));
    }
    for index in [mode_a, mode_b] {
        if index >= n_modes {
            return Err(Error::ModeOutOfRange { index, n_modes });
        }
    }
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for q in 0..2 {
        let (ia, ib) = (2 * mode_a + q, 2 * mode_b + q);
        m[(ia, ia)] = FRAC_1_SQRT_2;
        m[(ia, ib)] = FRAC_1_SQRT_2;
        m[(ib, ia)] = FRAC_1_SQRT_2;
        m[(ib, ib)] = -FRAC_1_SQRT_2;
    }
    Ok(SymplecticOp::from_parts(m, format!("bs({mode_a},{mode_b})")))
}

/// Gaussian update: `mean -> S mean`, `cov -> S cov Sᵀ`.
pub fn apply(op: &SymplecticOp, state: &GaussianState) -> Result<GaussianState> {
    let dim = 2 * state.n_modes();
    if op.matrix.nrows() != dim {
        return Err(Error::Dimension {
            expected: dim,
            got: op.matrix.nrows(),
        });
    }
    let mean = &op.matrix * state.mean();
    let cov = &op.matrix * state.cov() * op.matrix.transpose();
    Ok(GaussianState::from_parts_symmetrized(mean, cov))
}
