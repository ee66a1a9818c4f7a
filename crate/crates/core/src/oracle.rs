//! Monte Carlo cross-check of the analytic gate engine.
//!
//! Trajectories are simulated one shot at a time from the homodyne outcome
//! formulas with scalar arithmetic only: draw the input fluctuation and the
//! two squeezed vacua behind the EPR pair, mix them, form the two detector
//! readings, apply the feedforward gain. None of the covariance machinery in
//! [`crate::state`] or [`crate::measure`] is used here.
//!
//! Streams are ChaCha8 keyed by the seed, with one stream per block of
//! [`BLOCK_SIZE`] samples, so batches are identical whatever the number of
//! worker threads.

use std::f64::consts::SQRT_2;

use nalgebra::{Matrix2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::cluster::{ClusterNoiseModel, BRANCH_POINT};
use crate::error::{Error, Result};
use crate::gates::{GateConfig, GateKind, GateReport};
use crate::state::GaussianState;

/// Samples per independent random stream.
pub const BLOCK_SIZE: usize = 1 << 14;

/// Pass threshold on every standardized deviation.
pub const Z_THRESHOLD: f64 = 4.0;

/// Smallest batch [`verify_against_analytic`] accepts.
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryBatch {
    pub n_samples: usize,
    pub seed: u64,
    /// Output `(x, p)` per shot.
    pub samples: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleVerdict {
    pub estimated_mean: Vector2<f64>,
    pub estimated_cov: Matrix2<f64>,
    pub analytic_mean: Vector2<f64>,
    pub analytic_cov: Matrix2<f64>,
    /// `[mean x, mean p, cov xx, cov xp, cov pp]`.
    pub z_scores: [f64; 5],
    pub pass: bool,
}

impl OracleVerdict {
    pub fn max_abs_z(&self) -> f64 {
        self.z_scores.iter().fold(0.0, |m, z| m.max(z.abs()))
    }
}

fn sample_blocks<F>(n: usize, seed: u64, shot: F) -> Vec<[f64; 2]>
where
    F: Fn(&mut ChaCha8Rng) -> [f64; 2] + Sync,
{
    let blocks = n.div_ceil(BLOCK_SIZE);
    let parts: Vec<Vec<[f64; 2]>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let len = BLOCK_SIZE.min(n - b * BLOCK_SIZE);
            (0..len).map(|_| shot(&mut rng)).collect()
        })
        .collect();
    parts.concat()
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Feedforward gains straight from the gate definitions, multiplied by
/// `scale`, as `[[g11, g12], [g21, g22]]`.
fn scalar_gain(kind: &GateKind, scale: f64) -> [[f64; 2]; 2] {
    let g = match *kind {
        GateKind::Squeeze { theta1 } => {
            let s = 1.0 / (SQRT_2 * theta1.sin());
            let c = 1.0 / (SQRT_2 * theta1.cos());
            [[s, s], [c, -c]]
        }
        GateKind::Fourier => [[0.0, SQRT_2], [SQRT_2, 0.0]],
        GateKind::Cascade { theta1 } => {
            let s = 1.0 / (SQRT_2 * theta1.sin());
            let c = 1.0 / (SQRT_2 * theta1.cos());
            [[-c, c], [s, s]]
        }
    };
    g.map(|row| row.map(|v| v * scale))
}

/// Draws `n` output shots of the gate for `input`.
pub fn sample_gate_trajectories(
    config: &GateConfig,
    input: &GaussianState,
    n: usize,
    seed: u64,
) -> Result<TrajectoryBatch> {
    sample_gate_trajectories_with_gain(config, input, n, seed, 1.0)
}

/// As [`sample_gate_trajectories`], with every feedforward gain multiplied
/// by `gain_scale` (a deliberate fault for negative controls).
pub fn sample_gate_trajectories_with_gain(
    config: &GateConfig,
    input: &GaussianState,
    n: usize,
    seed: u64,
    gain_scale: f64,
) -> Result<TrajectoryBatch> {
    if n == 0 {
        return Err(Error::TooFewSamples { min: 1, got: 0 });
    }
    if !gain_scale.is_finite() {
        return Err(Error::NonFinite("gain scale"));
    }
    let config = GateConfig::new(config.kind, config.resource.clone())?;
    let m = input.mean2()?;
    let c = input.cov2()?;
    // Cholesky factor of the input covariance.
    let l11 = c[(0, 0)].sqrt();
    let l21 = c[(1, 0)] / l11;
    let l22 = (c[(1, 1)] - l21 * l21).max(0.0).sqrt();
    let (mx, mp) = (m[0], m[1]);

    let r = config.resource.r();
    let sd_lo = (-r).exp() / 2.0;
    let sd_hi = r.exp() / 2.0;
    let g = scalar_gain(&config.kind, gain_scale);
    let kind = config.kind;

    let samples = sample_blocks(n, seed, |rng| {
        let (z1, z2) = (normal(rng), normal(rng));
        let x_in = mx + l11 * z1;
        let p_in = mp + l21 * z1 + l22 * z2;
        // Squeezed vacua: A squeezed in x, B squeezed in p.
        let (xa, pa) = (sd_lo * normal(rng), sd_hi * normal(rng));
        let (xb, pb) = (sd_hi * normal(rng), sd_lo * normal(rng));
        let x1 = (xa + xb) / SQRT_2;
        let p1 = (pa + pb) / SQRT_2;
        let x2 = (xa - xb) / SQRT_2;
        let p2 = (pa - pb) / SQRT_2;

        let (d1, d2) = match kind {
            GateKind::Squeeze { theta1 } => {
                let (s, c) = theta1.sin_cos();
                // Input meets E1 with a quarter-wave offset; second detector at −θ1.
                (
                    (c * (x_in - p1) + s * (p_in + x1)) / SQRT_2,
                    (c * (x_in + p1) - s * (p_in - x1)) / SQRT_2,
                )
            }
            GateKind::Fourier => (
                // Detectors at 0 and −π/2.
                (x_in - p1) / SQRT_2,
                -(p_in - x1) / SQRT_2,
            ),
            GateKind::Cascade { theta1 } => {
                let (s, c) = theta1.sin_cos();
                // Zero coupling phase.
                (
                    (c * (x_in - x1) + s * (p_in - p1)) / SQRT_2,
                    (c * (x_in + x1) - s * (p_in + p1)) / SQRT_2,
                )
            }
        };
        [
            x2 + g[0][0] * d1 + g[0][1] * d2,
            p2 + g[1][0] * d1 + g[1][1] * d2,
        ]
    });
    Ok(TrajectoryBatch {
        n_samples: n,
        seed,
        samples,
    })
}

fn sample_moments(samples: &[[f64; 2]]) -> (Vector2<f64>, Matrix2<f64>) {
    let n = samples.len() as f64;
    let (sx, sp) = samples
        .iter()
        .fold((0.0, 0.0), |(a, b), s| (a + s[0], b + s[1]));
    let mean = Vector2::new(sx / n, sp / n);
    let (mut cxx, mut cxp, mut cpp) = (0.0, 0.0, 0.0);
    for s in samples {
        let dx = s[0] - mean[0];
        let dp = s[1] - mean[1];
        cxx += dx * dx;
        cxp += dx * dp;
        cpp += dp * dp;
    }
    let d = n - 1.0;
    (mean, Matrix2::new(cxx / d, cxp / d, cxp / d, cpp / d))
}

/// Standardized deviations of sample moments from a Gaussian hypothesis.
///
/// Mean errors use `σ²/n`; covariance errors use the Gaussian fourth-moment
/// result `Var(s_ij) = (σ_ii σ_jj + σ_ij²) / (n − 1)`.
fn judge(samples: &[[f64; 2]], mean: Vector2<f64>, cov: Matrix2<f64>) -> Result<OracleVerdict> {
    let n = samples.len();
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            got: n,
        });
    }
    let (est_mean, est_cov) = sample_moments(samples);
    let nf = n as f64;
    let z = |diff: f64, var: f64| {
        if var > 0.0 {
            diff / var.sqrt()
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    };
    let cov_se = |i: usize, j: usize| (cov[(i, i)] * cov[(j, j)] + cov[(i, j)].powi(2)) / (nf - 1.0);
    let z_scores = [
        z(est_mean[0] - mean[0], cov[(0, 0)] / nf),
        z(est_mean[1] - mean[1], cov[(1, 1)] / nf),
        z(est_cov[(0, 0)] - cov[(0, 0)], cov_se(0, 0)),
        z(est_cov[(0, 1)] - cov[(0, 1)], cov_se(0, 1)),
        z(est_cov[(1, 1)] - cov[(1, 1)], cov_se(1, 1)),
    ];
    let pass = z_scores.iter().all(|v| v.abs() < Z_THRESHOLD);
    Ok(OracleVerdict {
        estimated_mean: est_mean,
        estimated_cov: est_cov,
        analytic_mean: mean,
        analytic_cov: cov,
        z_scores,
        pass,
    })
}

/// Compares a sampled batch with the analytic output of the same gate.
pub fn verify_against_analytic(batch: &TrajectoryBatch, report: &GateReport) -> Result<OracleVerdict> {
    judge(&batch.samples, report.output_mean(), report.output_cov())
}

/// Samples the four vacuum phase quadratures feeding the cluster gate's
/// excess noise and checks the resulting covariance against
/// [`ClusterNoiseModel::excess_cov`].
pub fn verify_cluster_noise(
    model: &ClusterNoiseModel,
    a: f64,
    n: usize,
    seed: u64,
) -> Result<OracleVerdict> {
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            got: n,
        });
    }
    let analytic = model.excess_cov(a)?;
    let v = 10f64.powf(a / 10.0);
    let e = (-model.r_c()).exp();
    let sqrt5 = 5f64.sqrt();
    let samples = sample_blocks(n, seed, |rng| {
        // Vacuum quadratures have standard deviation 1/2.
        let p = [(); 4].map(|_| 0.5 * normal(rng));
        if v <= BRANCH_POINT {
            [
                e * (p[0] / SQRT_2 - (2.5f64).sqrt() * p[1]),
                e * (-(2.5f64).sqrt() * p[2] + p[3] / SQRT_2),
            ]
        } else {
            let w = (2.0 * v - 3.0).sqrt();
            [
                e * (3.0 * p[0] / v - 2.0 * sqrt5 * p[1] + w * (sqrt5 * p[2] + p[3]) / v)
                    / (2.0 * SQRT_2),
                e * (w * p[0] - sqrt5 * p[2] + p[3]) / SQRT_2,
            ]
        }
    });
    judge(&samples, Vector2::zeros(), analytic)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epr::{make_epr, EprResource};
    use crate::gates::{angle_for_squeezing_db, run_gate, Quadrature};
    use crate::state::{make_coherent, make_vacuum};

    #[test]
    fn single_shot_is_reproducible() {
        let cfg = GateConfig::new(
            GateKind::Squeeze { theta1: 45f64.to_radians() },
            make_epr(0.5).unwrap(),
        )
        .unwrap();
        let v = make_vacuum(1).unwrap();
        let a = sample_gate_trajectories(&cfg, &v, 1, 7).unwrap();
        let b = sample_gate_trajectories(&cfg, &v, 1, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.samples[0].iter().all(|x| x.is_finite()));
        let c = sample_gate_trajectories(&cfg, &v, 1, 8).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn block_boundaries_do_not_change_prefix() {
        let cfg = GateConfig::new(GateKind::Fourier, make_epr(0.2).unwrap()).unwrap();
        let v = make_vacuum(1).unwrap();
        let long = sample_gate_trajectories(&cfg, &v, 3 * BLOCK_SIZE + 5, 3).unwrap();
        let short = sample_gate_trajectories(&cfg, &v, BLOCK_SIZE + 1, 3).unwrap();
        assert_eq!(&long.samples[..BLOCK_SIZE + 1], &short.samples[..]);
    }

    #[test]
    fn residual_phase_variance_of_twelve_db_gate() {
        let theta = angle_for_squeezing_db(-12.0, Quadrature::Phase).unwrap();
        let cfg = GateConfig::new(
            GateKind::Squeeze { theta1: theta },
            EprResource::from_db(-4.0).unwrap(),
        )
        .unwrap();
        let v = make_vacuum(1).unwrap();
        let batch = sample_gate_trajectories(&cfg, &v, 1_000_000, 11).unwrap();
        let verdict = verify_against_analytic(&batch, &run_gate(&cfg, &v).unwrap()).unwrap();
        assert!(verdict.pass, "{verdict:?}");
        assert!((verdict.estimated_cov[(1, 1)] - 0.2148).abs() < 4.0 * (2.0f64 * 0.2148 * 0.2148 / 1e6).sqrt() + 1e-4);
    }

    #[test]
    fn fourier_mean_map() {
        let cfg = GateConfig::new(GateKind::Fourier, EprResource::from_db(-4.0).unwrap()).unwrap();
        let input = make_coherent(2.0, 3.0).unwrap();
        let batch = sample_gate_trajectories(&cfg, &input, 1_000_000, 5).unwrap();
        let verdict = verify_against_analytic(&batch, &run_gate(&cfg, &input).unwrap()).unwrap();
        assert!(verdict.pass, "{verdict:?}");
        assert!((verdict.analytic_mean - Vector2::new(-3.0, 2.0)).amax() < 1e-12);
    }

    #[test]
    fn wrong_gain_fails_and_bias_grows_with_n() {
        let cfg = GateConfig::new(
            GateKind::Squeeze { theta1: 32.25f64.to_radians() },
            EprResource::from_db(-4.0).unwrap(),
        )
        .unwrap();
        let input = make_coherent(1.0, 0.5).unwrap();
        let report = run_gate(&cfg, &input).unwrap();
        let big = sample_gate_trajectories_with_gain(&cfg, &input, 1_000_000, 1, 0.9).unwrap();
        let v_big = verify_against_analytic(&big, &report).unwrap();
        assert!(!v_big.pass);
        let small = sample_gate_trajectories_with_gain(&cfg, &input, 10_000, 1, 0.9).unwrap();
        let v_small = verify_against_analytic(&small, &report).unwrap();
        // Fixed bias: z grows like √n (×10 here), up to sampling noise.
        let ratio = v_big.max_abs_z() / v_small.max_abs_z();
        assert!(ratio > 7.0 && ratio < 13.0, "ratio {ratio}");
    }

    #[test]
    fn too_few_samples_rejected() {
        let cfg = GateConfig::new(GateKind::Fourier, make_epr(0.2).unwrap()).unwrap();
        let v = make_vacuum(1).unwrap();
        let batch = sample_gate_trajectories(&cfg, &v, 99, 0).unwrap();
        assert!(matches!(
            verify_against_analytic(&batch, &run_gate(&cfg, &v).unwrap()),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(sample_gate_trajectories(&cfg, &v, 0, 0).is_err());
        let m = ClusterNoiseModel::new(0.0).unwrap();
        assert!(verify_cluster_noise(&m, 0.0, 50, 0).is_err());
    }

    #[test]
    fn cluster_sampling_matches_formulas() {
        let m = ClusterNoiseModel::new(0.0).unwrap();
        let v = verify_cluster_noise(&m, -4.0, 1_000_000, 42).unwrap();
        assert!(v.pass, "{v:?}");
        assert!((v.analytic_cov[(0, 0)] - 0.75).abs() < 1e-15);
        let two = verify_cluster_noise(&m, 10.0 * 2f64.log10(), 1_000_000, 43).unwrap();
        assert!(two.pass, "{two:?}");
    }
}
