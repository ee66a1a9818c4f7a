//! Excess noise of the same single-mode gates when driven by a four-mode
//! linear cluster state instead of an EPR pair.
//!
//! Only the output-noise formulas of the cluster protocol are modelled. With
//! `V = 10^{a/10}` for a target of `a` dB (negative for phase squeezing,
//! positive for amplitude squeezing), the excess quadratures are linear in
//! four vacuum phase quadratures `p1..p4`, each of variance 1/4:
//!
//! ```text
//! V <= 3/2:  δx = e^{-r}(p1/√2 − √(5/2) p2)
//!            δp = e^{-r}(−√(5/2) p3 + p4/√2)
//! V >  3/2:  δx = e^{-r}[3 p1/V − 2√5 p2 + √(2V−3)(√5 p3 + p4)/V] / (2√2)
//!            δp = e^{-r}[√(2V−3) p1 − √5 p3 + p4] / √2
//! ```

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::state::VACUUM_VARIANCE;

/// Cluster resource with squeezing parameter `r_c` on each of its four
/// squeezed inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterNoiseModel {
    r_c: f64,
}

/// Threshold on `V` between the two noise branches.
pub const BRANCH_POINT: f64 = 1.5;

impl ClusterNoiseModel {
    pub fn new(r_c: f64) -> Result<Self> {
        if !r_c.is_finite() {
            return Err(Error::NonFinite("cluster squeezing parameter"));
        }
        if r_c < 0.0 {
            return Err(Error::NegativeSqueezing(r_c));
        }
        Ok(ClusterNoiseModel { r_c })
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Self::new(crate::units::r_from_squeezing_db(db))
    }

    pub fn r_c(&self) -> f64 {
        self.r_c
    }

    /// Full 2x2 excess covariance for a target of `a` dB, choosing the
    /// branch from `V = 10^{a/10}`.
    ///
    /// The `V > 3/2` branch correlates `δx` and `δp` through `p1`, `p3` and
    /// `p4`; [`cluster_excess_variance`] reports only the diagonal.
    pub fn excess_cov(&self, a: f64) -> Result<Matrix2<f64>> {
        if !a.is_finite() {
            return Err(Error::NonFinite("target squeezing"));
        }
        let v = 10f64.powf(a / 10.0);
        if v <= BRANCH_POINT {
            Ok(self.low_branch_cov())
        } else {
            self.high_branch_cov(v)
        }
    }

    fn scale(&self) -> f64 {
        (-2.0 * self.r_c).exp() * VACUUM_VARIANCE
    }

    /// Excess covariance of the `V <= 3/2` branch: squared coefficients
    /// `1/2 + 5/2` on each quadrature, no cross term.
    pub fn low_branch_cov(&self) -> Matrix2<f64> {
        let k = self.scale();
        Matrix2::new(3.0 * k, 0.0, 0.0, 3.0 * k)
    }

    /// Excess covariance of the `V > 3/2` branch, evaluated at any
    /// `V >= 3/2` (the square root needs `2V − 3 >= 0`).
    pub fn high_branch_cov(&self, v: f64) -> Result<Matrix2<f64>> {
        if !v.is_finite() || v < BRANCH_POINT {
            return Err(Error::Config(format!(
                "high-V branch needs V >= {BRANCH_POINT}, got {v}"
            )));
        }
        let k = self.scale();
        let w = 2.0 * v - 3.0;
        // Σ c_i² for δx: [9/V² + 20 + 6(2V − 3)/V²] / 8.
        let xx = (9.0 / (v * v) + 20.0 + 6.0 * w / (v * v)) / 8.0;
        // Σ d_i² for δp: [(2V − 3) + 5 + 1] / 2.
        let pp = (w + 6.0) / 2.0;
        // Σ c_i d_i: √(2V−3)(3 − 5 + 1) / (4V).
        let xp = -w.sqrt() / (4.0 * v);
        Ok(Matrix2::new(k * xx, k * xp, k * xp, k * pp))
    }
}

/// `(Var δx, Var δp)` of the cluster gate's excess noise for a target of
/// `a` dB.
pub fn cluster_excess_variance(model: &ClusterNoiseModel, a: f64) -> Result<(f64, f64)> {
    let c = model.excess_cov(a)?;
    Ok((c[(0, 0)], c[(1, 1)]))
}

/// EPR excess variance over cluster excess variance at equal resource
/// squeezing, in the phase-squeezing regime: `(e^{-2r}/2) / (3 e^{-2r}/4)`.
pub fn excess_ratio_epr_vs_cluster(r: f64) -> Result<f64> {
    let model = ClusterNoiseModel::new(r)?;
    let epr = crate::epr::make_epr(r)?.correlation_variance();
    let (cluster, _) = cluster_excess_variance(&model, 0.0)?;
    Ok(epr / cluster)
}
