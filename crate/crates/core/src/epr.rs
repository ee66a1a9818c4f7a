//! Two-mode EPR resource built from two orthogonally squeezed vacua.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::state::{make_vacuum, GaussianState};
use crate::symplectic::{beamsplitter_50_50, single_mode_squeezer, SymplecticOp};
use crate::units::{r_from_squeezing_db, squeezing_db_from_r};

/// EPR pair with amplitude anti-correlation and phase correlation:
/// `Var(x1 + x2) = Var(p1 − p2) = e^{-2r}/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct EprResource {
    r: f64,
    state: GaussianState,
}

/// Builds the EPR resource with squeezing parameter `r >= 0`.
pub fn make_epr(r: f64) -> Result<EprResource> {
    if !r.is_finite() {
        return Err(Error::NonFinite("EPR squeezing parameter"));
    }
    if r < 0.0 {
        return Err(Error::NegativeSqueezing(r));
    }
    let squeezed = squeezed_pair(r)?;
    let state = epr_beamsplitter().apply(&squeezed)?;
    Ok(EprResource { r, state })
}

/// Product of an `x`-squeezed and a `p`-squeezed vacuum: the resource
/// before it is entangled.
pub(crate) fn squeezed_pair(r: f64) -> Result<GaussianState> {
    let a = single_mode_squeezer(-r)?.apply(&make_vacuum(1)?)?;
    let b = single_mode_squeezer(r)?.apply(&make_vacuum(1)?)?;
    Ok(a.tensor(&b))
}

pub(crate) fn epr_beamsplitter() -> SymplecticOp {
    beamsplitter_50_50(0, 1, 2).expect("fixed valid modes")
}

impl EprResource {
    /// Resource whose correlation variance is `db` relative to shot noise
    /// (e.g. `-4.0`).
    pub fn from_db(db: f64) -> Result<Self> {
        make_epr(r_from_squeezing_db(db))
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn squeezing_db(&self) -> f64 {
        squeezing_db_from_r(self.r)
    }

    pub fn state(&self) -> &GaussianState {
        &self.state
    }

    /// `e^{-2r}/2`, the variance of both `x1 + x2` and `p1 − p2`.
    pub fn correlation_variance(&self) -> f64 {
        (-2.0 * self.r).exp() / 2.0
    }

    /// Covariance of the unentangled squeezed pair, diagonal
    /// `(e^{-2r}, e^{2r}, e^{2r}, e^{-2r}) / 4`.
    pub(crate) fn squeezed_cov(&self) -> DMatrix<f64> {
        let lo = (-2.0 * self.r).exp() / 4.0;
        let hi = (2.0 * self.r).exp() / 4.0;
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![lo, hi, hi, lo]))
    }
}
