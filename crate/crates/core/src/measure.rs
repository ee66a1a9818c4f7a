//! Homodyne measurement with linear feedforward onto a surviving mode.
//!
//! Because the displacement applied to the surviving mode is a fixed linear
//! function of the homodyne outcomes, the unconditional output is obtained
//! from a single linear map over the pre-measurement quadratures; no
//! conditioning step is needed.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::state::GaussianState;

/// Which modes are homodyned, at which angles, and how the outcomes displace
/// the surviving mode.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementPlan {
    measured_modes: Vec<usize>,
    angles: Vec<f64>,
    surviving_mode: usize,
    /// 2 × M; row 0 drives `x`, row 1 drives `p`.
    gain: DMatrix<f64>,
}

impl MeasurementPlan {
    pub fn new(
        measured_modes: Vec<usize>,
        angles: Vec<f64>,
        surviving_mode: usize,
        gain: DMatrix<f64>,
    ) -> Result<Self> {
        let m = measured_modes.len();
        if angles.len() != m {
            return Err(Error::InvalidPlan(format!(
                "{m} measured modes but {} angles",
                angles.len()
            )));
        }
        if gain.nrows() != 2 || gain.ncols() != m {
            return Err(Error::InvalidPlan(format!(
                "gain must be 2x{m}, got {}x{}",
                gain.nrows(),
                gain.ncols()
            )));
        }
        if gain.iter().chain(angles.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidPlan("non-finite gain or angle".into()));
        }
        for (i, &mode) in measured_modes.iter().enumerate() {
            if mode == surviving_mode {
                return Err(Error::InvalidPlan(format!(
                    "mode {mode} is both measured and surviving"
                )));
            }
            if measured_modes[..i].contains(&mode) {
                return Err(Error::InvalidPlan(format!("mode {mode} measured twice")));
            }
        }
        Ok(MeasurementPlan {
            measured_modes,
            angles,
            surviving_mode,
            gain,
        })
    }

    pub fn measured_modes(&self) -> &[usize] {
        &self.measured_modes
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn surviving_mode(&self) -> usize {
        self.surviving_mode
    }

    pub fn gain(&self) -> &DMatrix<f64> {
        &self.gain
    }

    /// Same plan with every gain entry multiplied by `factor`.
    pub fn with_scaled_gain(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.measured_modes.clone(),
            self.angles.clone(),
            self.surviving_mode,
            &self.gain * factor,
        )
    }

    fn check(&self, n_modes: usize) -> Result<()> {
        for &index in self.measured_modes.iter().chain([&self.surviving_mode]) {
            if index >= n_modes {
                return Err(Error::ModeOutOfRange { index, n_modes });
            }
        }
        Ok(())
    }

    /// The 2 × 2N matrix sending pre-measurement quadratures to
    /// `(x_s, p_s) + G · outcomes`.
    pub fn output_map(&self, n_modes: usize) -> Result<DMatrix<f64>> {
        self.check(n_modes)?;
        let mut map = DMatrix::zeros(2, 2 * n_modes);
        map[(0, 2 * self.surviving_mode)] = 1.0;
        map[(1, 2 * self.surviving_mode + 1)] = 1.0;
        for (i, (&mode, &theta)) in self.measured_modes.iter().zip(&self.angles).enumerate() {
            let (s, c) = theta.sin_cos();
            for row in 0..2 {
                let g = self.gain[(row, i)];
                map[(row, 2 * mode)] += g * c;
                map[(row, 2 * mode + 1)] += g * s;
            }
        }
        Ok(map)
    }
}

/// Unconditional single-mode state of the surviving mode after measuring and
/// feeding forward.
pub fn measure_and_feedforward(state: &GaussianState, plan: &MeasurementPlan) -> Result<GaussianState> {
    let map = plan.output_map(state.n_modes())?;
    let mean: DVector<f64> = &map * state.mean();
    let cov = &map * state.cov() * map.transpose();
    Ok(GaussianState::from_parts_symmetrized(mean, cov))
}
