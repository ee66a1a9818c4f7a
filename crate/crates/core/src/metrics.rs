//! Shot-noise-referenced noise powers, local-oscillator sweeps and the
//! single-mode Gaussian fidelity.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::gates::{run_gate, GateConfig, GateReport};
use crate::state::{GaussianState, VACUUM_VARIANCE};

pub use crate::units::noise_power_db;

/// Noise power against local-oscillator phase.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpectrum {
    /// `(phase in radians, power in dB above shot noise)`.
    pub points: Vec<(f64, f64)>,
    /// Shot-noise variance the powers are referenced to.
    pub reference: f64,
}

impl NoiseSpectrum {
    pub fn powers(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|&(_, db)| db)
    }
}

/// Second moment of `cos φ · x + sin φ · p` in dB, including the squared
/// mean projection as a spectrum analyser would.
pub fn homodyne_power_db(state: &GaussianState, phi: f64) -> Result<f64> {
    let m = state.mean2()?;
    let c = state.cov2()?;
    let (s, co) = phi.sin_cos();
    let u = Vector2::new(co, s);
    let var = (u.transpose() * c * u)[(0, 0)];
    let proj = u.dot(&m);
    noise_power_db(var + proj * proj)
}

/// Sweeps the homodyne phase over `n_points` evenly spaced angles in `[0, π]`.
pub fn lo_sweep(state: &GaussianState, n_points: usize) -> Result<NoiseSpectrum> {
    state.require_single_mode()?;
    if n_points < 2 {
        return Err(Error::InvalidSweep(format!(
            "an LO sweep needs at least 2 points, got {n_points}"
        )));
    }
    let step = PI / (n_points - 1) as f64;
    let points = (0..n_points)
        .map(|k| {
            let phi = k as f64 * step;
            homodyne_power_db(state, phi).map(|db| (phi, db))
        })
        .collect::<Result<_>>()?;
    Ok(NoiseSpectrum {
        points,
        reference: VACUUM_VARIANCE,
    })
}

/// Covariance rescaled so that vacuum is the identity.
pub fn covariance_for_fidelity(state: &GaussianState) -> Result<Matrix2<f64>> {
    Ok(state.cov2()? * (1.0 / VACUUM_VARIANCE))
}

/// Mean amplitude in the units matching [`covariance_for_fidelity`]: the
/// exponent `βᵀ(A1 + A2)⁻¹β` then equals `½ dᵀ(V1 + V2)⁻¹ d` for a raw mean
/// difference `d`, which reproduces the coherent-state overlap
/// `exp(−|Δα|²)`.
pub fn amplitude_for_fidelity(state: &GaussianState) -> Result<Vector2<f64>> {
    Ok(state.mean2()? * SQRT_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityResult {
    pub fidelity: f64,
    /// `det(A1 + A2)`.
    pub delta: f64,
    /// `(det A1 − 1)(det A2 − 1)`.
    pub sigma: f64,
    /// `α2 − α1`.
    pub beta: Vector2<f64>,
}

/// Fidelity of two single-mode Gaussian states,
/// `F = 2 / (√(Δ + σ) − √σ) · exp(−βᵀ(A1 + A2)⁻¹β)`.
pub fn gaussian_fidelity(state1: &GaussianState, state2: &GaussianState) -> Result<FidelityResult> {
    let a1 = covariance_for_fidelity(state1)?;
    let a2 = covariance_for_fidelity(state2)?;
    let beta = amplitude_for_fidelity(state2)? - amplitude_for_fidelity(state1)?;
    let sum = a1 + a2;
    let delta = sum.determinant();
    let inv = sum
        .try_inverse()
        .filter(|_| delta > 0.0)
        .ok_or(Error::Fidelity("A1 + A2 is singular"))?;
    let mut sigma = (a1.determinant() - 1.0) * (a2.determinant() - 1.0);
    if sigma.abs() < 1e-12 {
        sigma = 0.0;
    }
    if sigma < 0.0 {
        return Err(Error::Fidelity("a covariance has det A < 1 (unphysical state)"));
    }
    if delta + sigma < 0.0 {
        return Err(Error::Fidelity("Δ + σ is negative"));
    }
    let exponent = (beta.transpose() * inv * beta)[(0, 0)];
    let fidelity = 2.0 / ((delta + sigma).sqrt() - sigma.sqrt()) * (-exponent).exp();
    Ok(FidelityResult {
        fidelity,
        delta,
        sigma,
        beta,
    })
}

/// Resource used for the realistic output in [`fidelity_vs_ideal`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Benchmark {
    /// The configured EPR pair.
    Epr,
    /// Two vacua in place of the EPR pair (the classical limit).
    Classical,
}

/// Output of `transform` acting on `input` plus additive `excess` noise.
pub fn linear_output(
    transform: &Matrix2<f64>,
    input: &GaussianState,
    excess: &Matrix2<f64>,
) -> Result<GaussianState> {
    let mean = transform * input.mean2()?;
    let cov = transform * input.cov2()? * transform.transpose() + excess;
    GaussianState::new(
        nalgebra::DVector::from_column_slice(mean.as_slice()),
        nalgebra::DMatrix::from_column_slice(2, 2, cov.as_slice()),
    )
}

/// Fidelity between the ideal output (`transform` applied with no added
/// noise) and the output carrying `excess`.
pub fn fidelity_with_excess(
    transform: &Matrix2<f64>,
    input: &GaussianState,
    excess: &Matrix2<f64>,
) -> Result<FidelityResult> {
    let ideal = linear_output(transform, input, &Matrix2::zeros())?;
    let real = linear_output(transform, input, excess)?;
    gaussian_fidelity(&ideal, &real)
}

/// Fidelity of the gate output against its ideal counterpart.
pub fn fidelity_vs_ideal(
    config: &GateConfig,
    input: &GaussianState,
    benchmark: Benchmark,
) -> Result<FidelityResult> {
    let report: GateReport = match benchmark {
        Benchmark::Epr => run_gate(config, input)?,
        Benchmark::Classical => {
            let classical = GateConfig::new(config.kind, crate::epr::make_epr(0.0)?)?;
            run_gate(&classical, input)?
        }
    };
    let ideal = linear_output(&config.kind.ideal_transform(), input, &Matrix2::zeros())?;
    gaussian_fidelity(&ideal, &report.output)
}
