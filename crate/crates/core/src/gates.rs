//! Squeezing, Fourier and cascaded gates driven by an EPR pair.
//!
//! Mode layout of every protocol: 0 is the input, 1 is the EPR half that
//! meets the input on the beamsplitter, 2 is the EPR half that receives the
//! feedforward and becomes the output.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use nalgebra::{DMatrix, Matrix2, Vector2};

use crate::epr::{epr_beamsplitter, squeezed_pair, EprResource};
use crate::error::{Error, Result};
use crate::measure::MeasurementPlan;
use crate::state::GaussianState;
use crate::symplectic::{beamsplitter_50_50, fourier, SymplecticOp};

pub const INPUT_MODE: usize = 0;
pub const COUPLED_MODE: usize = 1;
pub const OUTPUT_MODE: usize = 2;

/// Which quadrature a target squeezing level refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Amplitude,
    Phase,
}

/// Homodyne angle `θ1` that scales the chosen quadrature's variance by
/// `10^{a/10}` (so `a < 0` squeezes it).
///
/// Phase: `tan θ1 = 10^{a/20}`. Amplitude: `cot θ1 = 10^{a/20}`.
pub fn angle_for_squeezing_db(a: f64, quadrature: Quadrature) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::NonFinite("target squeezing"));
    }
    let ratio = 10f64.powf(a / 20.0);
    let theta = match quadrature {
        Quadrature::Phase => ratio.atan(),
        Quadrature::Amplitude => ratio.recip().atan(),
    };
    check_theta(theta)?;
    Ok(theta)
}

fn check_theta(theta: f64) -> Result<()> {
    let s = theta.sin();
    let c = theta.cos();
    if !(theta > 0.0 && theta < FRAC_PI_2) || s < 1e-12 || c < 1e-12 {
        return Err(Error::DegenerateAngle(theta));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    /// `diag(cot θ1, tan θ1)`.
    Squeeze { theta1: f64 },
    /// `x -> -p`, `p -> x`.
    Fourier,
    /// Squeeze followed by Fourier, done in one step with zero coupling phase.
    Cascade { theta1: f64 },
}

impl GateKind {
    pub fn theta1(&self) -> Option<f64> {
        match *self {
            GateKind::Squeeze { theta1 } | GateKind::Cascade { theta1 } => Some(theta1),
            GateKind::Fourier => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Squeeze { .. } => "squeeze",
            GateKind::Fourier => "fourier",
            GateKind::Cascade { .. } => "cascade",
        }
    }

    /// Transform the gate implements with an ideal (infinitely squeezed)
    /// resource.
    pub fn ideal_transform(&self) -> Matrix2<f64> {
        let f = Matrix2::new(0.0, -1.0, 1.0, 0.0);
        match *self {
            GateKind::Squeeze { theta1 } => squeeze_matrix(theta1),
            GateKind::Fourier => f,
            GateKind::Cascade { theta1 } => f * squeeze_matrix(theta1),
        }
    }

    /// Measurement plan with the gain matrix for this gate.
    pub fn plan(&self) -> Result<MeasurementPlan> {
        match *self {
            GateKind::Squeeze { theta1 } => build_squeeze_plan(theta1),
            GateKind::Fourier => Ok(build_fourier_plan()),
            GateKind::Cascade { theta1 } => build_cascade_plan(theta1),
        }
    }

    /// Interference of input and resource before the homodyne detectors.
    ///
    /// Squeeze and Fourier couple the input with a quarter-wave offset,
    /// realised as a Fourier rotation of mode 1 ahead of the beamsplitter.
    pub fn coupling(&self) -> SymplecticOp {
        let bs = beamsplitter_50_50(INPUT_MODE, COUPLED_MODE, 3).expect("fixed valid modes");
        match self {
            GateKind::Squeeze { .. } | GateKind::Fourier => fourier()
                .embed(COUPLED_MODE, 3)
                .and_then(|rot| rot.then(&bs))
                .expect("fixed valid modes"),
            GateKind::Cascade { .. } => bs,
        }
    }
}

/// `diag(cot θ, tan θ)`.
pub fn squeeze_matrix(theta1: f64) -> Matrix2<f64> {
    Matrix2::new(1.0 / theta1.tan(), 0.0, 0.0, theta1.tan())
}

/// Homodyne the two beamsplitter outputs at `(θ1, −θ1)` and feed forward with
/// `G_S = [[1/(√2 sin), 1/(√2 sin)], [1/(√2 cos), −1/(√2 cos)]]`.
pub fn build_squeeze_plan(theta1: f64) -> Result<MeasurementPlan> {
    check_theta(theta1)?;
    let s = 1.0 / (SQRT_2 * theta1.sin());
    let c = 1.0 / (SQRT_2 * theta1.cos());
    MeasurementPlan::new(
        vec![INPUT_MODE, COUPLED_MODE],
        vec![theta1, -theta1],
        OUTPUT_MODE,
        DMatrix::from_row_slice(2, 2, &[s, s, c, -c]),
    )
}

/// Angles `(0, −π/2)` with `G_F = [[0, √2], [√2, 0]]`.
pub fn build_fourier_plan() -> MeasurementPlan {
    MeasurementPlan::new(
        vec![INPUT_MODE, COUPLED_MODE],
        vec![0.0, -FRAC_PI_2],
        OUTPUT_MODE,
        DMatrix::from_row_slice(2, 2, &[0.0, SQRT_2, SQRT_2, 0.0]),
    )
    .expect("fixed valid plan")
}

/// Zero coupling phase, angles `(θ1, −θ1)` and
/// `G_FS = [[−1/(√2 cos), 1/(√2 cos)], [1/(√2 sin), 1/(√2 sin)]]`.
///
/// The first detector sees the difference port `(in − E1)/√2`, which the
/// beamsplitter leaves on mode 1.
pub fn build_cascade_plan(theta1: f64) -> Result<MeasurementPlan> {
    check_theta(theta1)?;
    let s = 1.0 / (SQRT_2 * theta1.sin());
    let c = 1.0 / (SQRT_2 * theta1.cos());
    MeasurementPlan::new(
        vec![COUPLED_MODE, INPUT_MODE],
        vec![theta1, -theta1],
        OUTPUT_MODE,
        DMatrix::from_row_slice(2, 2, &[-c, c, s, s]),
    )
}

/// A gate together with the resource it consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct GateConfig {
    pub kind: GateKind,
    pub resource: EprResource,
}

impl GateConfig {
    pub fn new(kind: GateKind, resource: EprResource) -> Result<Self> {
        if let Some(theta1) = kind.theta1() {
            check_theta(theta1)?;
        }
        Ok(GateConfig { kind, resource })
    }
}

/// Output of one gate application.
#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    /// Single-mode output state.
    pub output: GaussianState,
    /// Linear map from input quadratures to output quadratures.
    pub transform: Matrix2<f64>,
    /// Noise added by the finitely squeezed resource.
    pub excess_cov: Matrix2<f64>,
}

/// Full linear map from `(input, squeezed A, squeezed B)` quadratures to the
/// output quadratures.
///
/// The resource enters as its two unentangled squeezed vacua with the EPR
/// beamsplitter folded into the map; the large antisqueezed variances then
/// meet coefficients that vanish exactly rather than cancel numerically.
pub fn gate_output_map(kind: &GateKind) -> Result<DMatrix<f64>> {
    let plan = kind.plan()?;
    let epr_bs = epr_beamsplitter().embed_modes(&[COUPLED_MODE, OUTPUT_MODE], 3)?;
    let pre = epr_bs.then(&kind.coupling())?;
    Ok(plan.output_map(3)? * pre.matrix())
}

/// Runs `config` on a single-mode input and reports the output state,
/// effective transform and excess noise.
pub fn run_gate(config: &GateConfig, input: &GaussianState) -> Result<GateReport> {
    input.require_single_mode()?;
    let map = gate_output_map(&config.kind)?;
    let joint = input.tensor(&squeezed_pair(config.resource.r())?);
    let mean = &map * joint.mean();
    let cov = &map * joint.cov() * map.transpose();
    let output = GaussianState::from_parts_symmetrized(mean, cov);

    let t = map.columns(0, 2);
    let transform = Matrix2::new(t[(0, 0)], t[(0, 1)], t[(1, 0)], t[(1, 1)]);
    let res = map.columns(2, 4);
    let e = res * config.resource.squeezed_cov() * res.transpose();
    let excess_cov = Matrix2::new(e[(0, 0)], 0.5 * (e[(0, 1)] + e[(1, 0)]), 0.5 * (e[(0, 1)] + e[(1, 0)]), e[(1, 1)]);
    Ok(GateReport {
        output,
        transform,
        excess_cov,
    })
}

impl GateReport {
    pub fn output_mean(&self) -> Vector2<f64> {
        self.output.mean2().expect("gate output is single-mode")
    }

    pub fn output_cov(&self) -> Matrix2<f64> {
        self.output.cov2().expect("gate output is single-mode")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epr::make_epr;
    use crate::measure::measure_and_feedforward;
    use crate::state::{add_classical_noise, make_coherent, make_vacuum};

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn angle_table() {
        let cases = [(-4.0, 32.25), (-8.0, 21.70), (-12.0, 14.10)];
        for (a, expected) in cases {
            let t = angle_for_squeezing_db(a, Quadrature::Phase).unwrap().to_degrees();
            assert!((t - expected).abs() < 0.01, "{a} dB -> {t}");
        }
        let t = angle_for_squeezing_db(0.0, Quadrature::Phase).unwrap();
        assert!((t.to_degrees() - 45.0).abs() < 1e-12);
        let amp = angle_for_squeezing_db(-4.0, Quadrature::Amplitude).unwrap();
        assert!((1.0 / amp.tan() - 10f64.powf(-0.2)).abs() < 1e-12);
        assert!(angle_for_squeezing_db(-800.0, Quadrature::Phase).is_err());
        assert!(angle_for_squeezing_db(800.0, Quadrature::Phase).is_err());
    }

    #[test]
    fn squeeze_gain_matrix() {
        let plan = build_squeeze_plan(deg(45.0)).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0]);
        assert!((plan.gain() - expected).amax() < 1e-15);
        let plan = build_squeeze_plan(deg(14.10)).unwrap();
        assert!((plan.gain()[(0, 0)] - 2.902).abs() < 1e-3);
        assert_eq!(plan.angles(), &[deg(14.10), -deg(14.10)]);
        assert!(build_squeeze_plan(1e-14).is_err());
        assert!(build_squeeze_plan(0.0).is_err());
        assert!(build_squeeze_plan(FRAC_PI_2).is_err());
    }

    #[test]
    fn fourier_gain_matrix() {
        let plan = build_fourier_plan();
        assert_eq!(
            plan.gain(),
            &DMatrix::from_row_slice(2, 2, &[0.0, SQRT_2, SQRT_2, 0.0])
        );
        assert_eq!(plan.angles(), &[0.0, -FRAC_PI_2]);
    }

    #[test]
    fn ideal_transforms_match_closed_forms() {
        let e = make_epr(8.0).unwrap();
        for kind in [
            GateKind::Squeeze { theta1: deg(14.10) },
            GateKind::Squeeze { theta1: deg(60.0) },
            GateKind::Fourier,
            GateKind::Cascade { theta1: deg(32.25) },
        ] {
            let cfg = GateConfig::new(kind, e.clone()).unwrap();
            let rep = run_gate(&cfg, &make_vacuum(1).unwrap()).unwrap();
            assert!((rep.transform - kind.ideal_transform()).amax() < 1e-12, "{kind:?}");
            assert!((rep.transform.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cascade_at_45_degrees_is_fourier() {
        let t = GateKind::Cascade { theta1: deg(45.0) }.ideal_transform();
        assert!((t - Matrix2::new(0.0, -1.0, 1.0, 0.0)).amax() < 1e-15);
    }

    #[test]
    fn fourier_rotates_mean() {
        let cfg = GateConfig::new(GateKind::Fourier, make_epr(8.0).unwrap()).unwrap();
        let rep = run_gate(&cfg, &make_coherent(2.0, 3.0).unwrap()).unwrap();
        assert!((rep.output_mean() - Vector2::new(-3.0, 2.0)).amax() < 1e-12);
    }

    #[test]
    fn residual_squeezing_of_twelve_db_gate() {
        let theta = angle_for_squeezing_db(-12.0, Quadrature::Phase).unwrap();
        let cfg = GateConfig::new(GateKind::Squeeze { theta1: theta }, EprResource::from_db(-4.0).unwrap()).unwrap();
        let rep = run_gate(&cfg, &make_vacuum(1).unwrap()).unwrap();
        let vp = rep.output_cov()[(1, 1)];
        let expected = 0.25 * theta.tan().powi(2) + 0.5 * 10f64.powf(-0.4);
        assert!((vp - expected).abs() < 1e-12);
        assert!((vp - 0.2148).abs() < 1e-3);
    }

    #[test]
    fn near_ideal_identity_gate() {
        let cfg = GateConfig::new(GateKind::Squeeze { theta1: deg(45.0) }, make_epr(4.0).unwrap()).unwrap();
        let rep = run_gate(&cfg, &make_vacuum(1).unwrap()).unwrap();
        let expected = 0.25 + (-8.0f64).exp() / 2.0;
        let c = rep.output_cov();
        assert!((c[(0, 0)] - expected).abs() < 1e-12);
        assert!((c[(1, 1)] - expected).abs() < 1e-12);
        assert!(c[(0, 1)].abs() < 1e-12);
    }

    #[test]
    fn matches_explicit_measurement_on_entangled_state() {
        // Same protocol assembled literally: input ⊗ EPR, coupling, then
        // measure_and_feedforward on the joint state.
        let input = add_classical_noise(&make_coherent(0.4, -1.1).unwrap(), 0, 0.2, 3.0).unwrap();
        for r in [0.0, 0.46, 1.5] {
            let e = make_epr(r).unwrap();
            for kind in [
                GateKind::Squeeze { theta1: deg(21.70) },
                GateKind::Fourier,
                GateKind::Cascade { theta1: deg(60.0) },
            ] {
                let joint = input.tensor(e.state());
                let coupled = kind.coupling().apply(&joint).unwrap();
                let direct = measure_and_feedforward(&coupled, &kind.plan().unwrap()).unwrap();
                let rep = run_gate(&GateConfig::new(kind, e.clone()).unwrap(), &input).unwrap();
                assert!((direct.cov() - rep.output.cov()).amax() < 1e-10);
                assert!((direct.mean() - rep.output.mean()).amax() < 1e-12);
            }
        }
    }

    #[test]
    fn excess_is_diagonal_correlation_variance() {
        for r in [0.0, 0.23, 0.46, 8.0] {
            let e = make_epr(r).unwrap();
            let v = e.correlation_variance();
            for kind in [
                GateKind::Squeeze { theta1: deg(32.25) },
                GateKind::Fourier,
                GateKind::Cascade { theta1: deg(14.10) },
            ] {
                let rep = run_gate(&GateConfig::new(kind, e.clone()).unwrap(), &make_vacuum(1).unwrap()).unwrap();
                let x = rep.excess_cov;
                assert!((x[(0, 0)] - v).abs() < 1e-9 * v.max(1e-300) + 1e-15, "{kind:?} r={r}");
                assert!((x[(1, 1)] - v).abs() < 1e-9 * v.max(1e-300) + 1e-15, "{kind:?} r={r}");
                assert!(x[(0, 1)].abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let e = make_epr(0.5).unwrap();
        assert!(GateConfig::new(GateKind::Squeeze { theta1: 0.0 }, e.clone()).is_err());
        assert!(GateConfig::new(GateKind::Cascade { theta1: FRAC_PI_2 }, e.clone()).is_err());
        let cfg = GateConfig::new(GateKind::Fourier, e).unwrap();
        assert_eq!(run_gate(&cfg, &make_vacuum(2).unwrap()), Err(Error::NotSingleMode(2)));
    }
}
