//! Drivers that regenerate each figure and table as a [`ResultTable`].

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;

use crate::cluster::{cluster_excess_variance, ClusterNoiseModel};
use crate::epr::{make_epr, EprResource};
use crate::error::{Error, Result};
use crate::gates::{angle_for_squeezing_db, run_gate, GateConfig, GateKind, Quadrature};
use crate::metrics::{fidelity_vs_ideal, fidelity_with_excess, homodyne_power_db, Benchmark};
use crate::oracle::{sample_gate_trajectories_with_gain, verify_against_analytic};
use crate::state::{add_classical_noise, make_coherent, make_vacuum, GaussianState};
use crate::symplectic::fourier;
use crate::table::ResultTable;
use crate::units::{modulation_variance, noise_power_db, r_from_squeezing_db, variance_from_db};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Cascade,
    Angles,
    Verify,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Fig2,
        Experiment::Fig3,
        Experiment::Fig4,
        Experiment::Fig5,
        Experiment::Cascade,
        Experiment::Angles,
        Experiment::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig2 => "fig2",
            Experiment::Fig3 => "fig3",
            Experiment::Fig4 => "fig4",
            Experiment::Fig5 => "fig5",
            Experiment::Cascade => "cascade",
            Experiment::Angles => "angles",
            Experiment::Verify => "verify",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Vacuum,
    Coherent,
    Modulated,
}

impl InputKind {
    pub fn name(self) -> &'static str {
        match self {
            InputKind::Vacuum => "vacuum",
            InputKind::Coherent => "coherent",
            InputKind::Modulated => "modulated",
        }
    }
}

impl FromStr for InputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vacuum" => Ok(InputKind::Vacuum),
            "coherent" => Ok(InputKind::Coherent),
            "modulated" => Ok(InputKind::Modulated),
            other => Err(Error::Config(format!("unknown input kind '{other}'"))),
        }
    }
}

/// Inclusive evenly spaced grid `min, ..., max` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidSweep("bounds must be finite".into()));
        }
        if steps < 2 {
            return Err(Error::InvalidSweep(format!("need at least 2 steps, got {steps}")));
        }
        Ok(Sweep { min, max, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        let span = self.max - self.min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| match k {
                0 => self.min,
                k if k == self.steps - 1 => self.max,
                k => self.min + span * k as f64 / last,
            })
            .collect()
    }
}

impl FromStr for Sweep {
    type Err = Error;

    /// Parses `min:max:steps`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, steps] = parts.as_slice() else {
            return Err(Error::InvalidSweep(format!("expected min:max:steps, got '{s}'")));
        };
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidSweep(format!("bad number '{v}'")))
        };
        let steps = steps
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidSweep(format!("bad step count '{steps}'")))?;
        Sweep::new(num(min)?, num(max)?, steps)
    }
}

impl fmt::Display for Sweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.steps)
    }
}

/// Fully resolved parameters of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    /// EPR correlation variance relative to shot noise, in dB (`<= 0`).
    pub resource_db: f64,
    /// Squeezing of each cluster input, in dB (`<= 0`).
    pub cluster_resource_db: f64,
    /// Target dB (fig2/3/4), LO phase in degrees (fig5), `θ1` in degrees
    /// (cascade) or extra targets (angles).
    pub sweep: Option<Sweep>,
    pub input_kind: InputKind,
    pub modulation_x_db: f64,
    pub modulation_p_db: f64,
    /// Quadrature means of the coherent input.
    pub coherent_mean: (f64, f64),
    pub seed: u64,
    pub samples: usize,
    /// Restricts cascade/verify to a single `θ1`.
    pub theta1_deg: Option<f64>,
    /// Multiplies the sampled feedforward gain in `verify` (1 = no fault).
    pub fault_gain: f64,
}

impl ExperimentConfig {
    /// Defaults for `experiment`.
    pub fn defaults(experiment: Experiment) -> Self {
        let base = ExperimentConfig {
            experiment,
            resource_db: -4.0,
            cluster_resource_db: -4.0,
            sweep: None,
            input_kind: InputKind::Vacuum,
            modulation_x_db: 0.0,
            modulation_p_db: 0.0,
            coherent_mean: (1.0, 0.5),
            seed: 42,
            samples: 1_000_000,
            theta1_deg: None,
            fault_gain: 1.0,
        };
        let sweep = |a, b, n| Some(Sweep { min: a, max: b, steps: n });
        match experiment {
            Experiment::Fig2 => ExperimentConfig {
                resource_db: -5.3,
                cluster_resource_db: -5.3,
                sweep: sweep(0.0, 12.0, 101),
                ..base
            },
            Experiment::Fig3 => ExperimentConfig {
                sweep: sweep(0.0, -14.0, 101),
                modulation_p_db: 20.0,
                ..base
            },
            Experiment::Fig4 => ExperimentConfig {
                sweep: sweep(0.0, -14.0, 101),
                ..base
            },
            Experiment::Fig5 => ExperimentConfig {
                sweep: sweep(0.0, 180.0, 181),
                input_kind: InputKind::Modulated,
                modulation_x_db: 4.0,
                modulation_p_db: 20.0,
                ..base
            },
            Experiment::Cascade => ExperimentConfig {
                sweep: sweep(5.0, 85.0, 81),
                ..base
            },
            Experiment::Angles => base,
            Experiment::Verify => ExperimentConfig {
                input_kind: InputKind::Coherent,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (what, db) in [
            ("resource_db", self.resource_db),
            ("cluster_resource_db", self.cluster_resource_db),
        ] {
            if !db.is_finite() || db > 0.0 {
                return Err(Error::Config(format!(
                    "{what} must be a finite squeezing level <= 0 dB, got {db}"
                )));
            }
        }
        if let Some(s) = self.sweep {
            Sweep::new(s.min, s.max, s.steps)?;
        }
        for v in [self.modulation_x_db, self.modulation_p_db, self.coherent_mean.0, self.coherent_mean.1, self.fault_gain] {
            if !v.is_finite() {
                return Err(Error::Config("non-finite parameter".into()));
            }
        }
        if self.experiment == Experiment::Verify && self.samples < 10_000 {
            return Err(Error::TooFewSamples {
                min: 10_000,
                got: self.samples,
            });
        }
        Ok(())
    }

    fn sweep_points(&self) -> Result<Vec<f64>> {
        self.sweep
            .map(|s| s.points())
            .ok_or_else(|| Error::InvalidSweep(format!("{} needs a sweep", self.experiment)))
    }

    fn resource(&self) -> Result<EprResource> {
        EprResource::from_db(self.resource_db)
    }

    /// Input state selected by `input_kind`.
    pub fn input_state(&self) -> Result<GaussianState> {
        match self.input_kind {
            InputKind::Vacuum => make_vacuum(1),
            InputKind::Coherent => make_coherent(self.coherent_mean.0, self.coherent_mean.1),
            InputKind::Modulated => modulated_input(self.modulation_x_db, self.modulation_p_db),
        }
    }

    fn metadata(&self, table: &mut ResultTable) {
        let f = |v: f64| crate::table::format_sig9(v);
        table.meta("experiment", self.experiment);
        table.meta("resource_db", f(self.resource_db));
        table.meta("resource_r", f(r_from_squeezing_db(self.resource_db)));
        table.meta("cluster_resource_db", f(self.cluster_resource_db));
        table.meta(
            "sweep",
            self.sweep.map_or_else(|| "none".to_string(), |s| s.to_string()),
        );
        table.meta("input", self.input_kind.name());
        table.meta("mod_x_db", f(self.modulation_x_db));
        table.meta("mod_p_db", f(self.modulation_p_db));
        table.meta(
            "coherent_mean",
            format!("{},{}", f(self.coherent_mean.0), f(self.coherent_mean.1)),
        );
        table.meta("seed", self.seed);
        table.meta("samples", self.samples);
        table.meta(
            "theta1_deg",
            self.theta1_deg.map_or_else(|| "none".to_string(), f),
        );
        table.meta("fault_gain", f(self.fault_gain));
        table.meta("shot_noise_variance", f(crate::state::VACUUM_VARIANCE));
    }
}

/// Vacuum plus classical modulation putting `x` and `p` at the given dB
/// above shot noise (0 dB leaves a quadrature at vacuum).
pub fn modulated_input(x_db: f64, p_db: f64) -> Result<GaussianState> {
    add_classical_noise(
        &make_vacuum(1)?,
        0,
        modulation_variance(x_db),
        modulation_variance(p_db),
    )
}

fn power(var: f64) -> Result<f64> {
    noise_power_db(var)
}

fn squeeze_config(target_db: f64, quadrature: Quadrature, resource: &EprResource) -> Result<GateConfig> {
    let theta1 = angle_for_squeezing_db(target_db, quadrature)?;
    GateConfig::new(GateKind::Squeeze { theta1 }, resource.clone())
}

/// Output noise of the amplitude-squeezing gate against target, for the EPR
/// gate and for the cluster gate at the same resource squeezing.
///
/// A target of `a` dB (`a > 0`) squeezes the amplitude variance by `a` dB.
pub fn run_fig2(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let resource = cfg.resource()?;
    let cluster = ClusterNoiseModel::from_db(cfg.cluster_resource_db)?;
    let input = make_vacuum(1)?;
    let mut t = ResultTable::new([
        "target_db",
        "epr_squeezed_db",
        "epr_antisqueezed_db",
        "cluster_squeezed_db",
        "cluster_antisqueezed_db",
    ]);
    cfg.metadata(&mut t);
    for a in cfg.sweep_points()? {
        let rep = run_gate(&squeeze_config(-a, Quadrature::Amplitude, &resource)?, &input)?;
        let c = rep.output_cov();
        let (cx, cp) = cluster_excess_variance(&cluster, a)?;
        let ideal_x = variance_from_db(-a);
        let ideal_p = variance_from_db(a);
        t.push(vec![
            a,
            power(c[(0, 0)])?,
            power(c[(1, 1)])?,
            power(ideal_x + cx)?,
            power(ideal_p + cp)?,
        ])?;
    }
    Ok(t)
}

/// Merges `extra` into `grid`, keeping the grid's direction and dropping
/// near-duplicates.
fn with_anchors(mut grid: Vec<f64>, extra: &[f64]) -> Vec<f64> {
    let descending = grid.first() > grid.last();
    for &e in extra {
        if !grid.iter().any(|g| (g - e).abs() < 1e-9) {
            grid.push(e);
        }
    }
    grid.sort_by(f64::total_cmp);
    if descending {
        grid.reverse();
    }
    grid
}

/// Phase-squeezing gate output noise for a vacuum input and a
/// phase-modulated coherent input.
pub fn run_fig3(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let resource = cfg.resource()?;
    let vac = make_vacuum(1)?;
    let pcoh = modulated_input(cfg.modulation_x_db, cfg.modulation_p_db)?;
    let mut t = ResultTable::new([
        "target_db",
        "vac_squeezed_db",
        "vac_antisqueezed_db",
        "pcoh_squeezed_db",
        "pcoh_antisqueezed_db",
    ]);
    cfg.metadata(&mut t);
    for a in with_anchors(cfg.sweep_points()?, &[-4.0, -8.0, -12.0]) {
        let gate = squeeze_config(a, Quadrature::Phase, &resource)?;
        let v = run_gate(&gate, &vac)?.output_cov();
        let m = run_gate(&gate, &pcoh)?.output_cov();
        t.push(vec![
            a,
            power(v[(1, 1)])?,
            power(v[(0, 0)])?,
            power(m[(1, 1)])?,
            power(m[(0, 0)])?,
        ])?;
    }
    Ok(t)
}

/// Fidelity of the phase-squeezing gate for a vacuum input with the EPR and
/// cluster resources and their classical (unsqueezed) counterparts.
pub fn run_fig4(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let resource = cfg.resource()?;
    let cluster = ClusterNoiseModel::from_db(cfg.cluster_resource_db)?;
    let cluster_classical = ClusterNoiseModel::new(0.0)?;
    let input = make_vacuum(1)?;
    let mut t = ResultTable::new([
        "target_db",
        "f_epr",
        "f_epr_classical",
        "f_cluster",
        "f_cluster_classical",
    ]);
    cfg.metadata(&mut t);
    for a in cfg.sweep_points()? {
        let gate = squeeze_config(a, Quadrature::Phase, &resource)?;
        let ideal = gate.kind.ideal_transform();
        let f_epr = fidelity_vs_ideal(&gate, &input, Benchmark::Epr)?.fidelity;
        let f_epr_c = fidelity_vs_ideal(&gate, &input, Benchmark::Classical)?.fidelity;
        let f_cl = fidelity_with_excess(&ideal, &input, &cluster.excess_cov(a)?)?.fidelity;
        let f_cl_c = fidelity_with_excess(&ideal, &input, &cluster_classical.excess_cov(a)?)?.fidelity;
        t.push(vec![a, f_epr, f_epr_c, f_cl, f_cl_c])?;
    }
    Ok(t)
}

/// Fourier gate on a modulated input: LO-phase sweeps before and after, and
/// the `x`/`p` noise powers as summary values.
pub fn run_fig5(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let gate = GateConfig::new(GateKind::Fourier, cfg.resource()?)?;
    let input = cfg.input_state()?;
    let output = run_gate(&gate, &input)?.output;
    let mut t = ResultTable::new(["lo_phase_deg", "input_db", "output_db"]);
    cfg.metadata(&mut t);
    for phi in cfg.sweep_points()? {
        let rad = phi.to_radians();
        t.push(vec![
            phi,
            homodyne_power_db(&input, rad)?,
            homodyne_power_db(&output, rad)?,
        ])?;
    }
    let (ic, oc) = (input.cov2()?, output.cov2()?);
    t.summary = vec![
        ("input_x_db".into(), power(ic[(0, 0)])?),
        ("input_p_db".into(), power(ic[(1, 1)])?),
        ("output_x_db".into(), power(oc[(0, 0)])?),
        ("output_p_db".into(), power(oc[(1, 1)])?),
    ];
    Ok(t)
}

fn theta_grid(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    match cfg.theta1_deg {
        Some(t) => Ok(vec![t]),
        None => cfg.sweep_points(),
    }
}

/// Cascaded squeeze-then-Fourier gate over `θ1`: transform entries, excess
/// noise and the residual against Fourier composed with the squeeze gate.
pub fn run_cascade(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let resource = cfg.resource()?;
    let input = make_vacuum(1)?;
    let f = fourier();
    let f = Matrix2::new(f.matrix()[(0, 0)], f.matrix()[(0, 1)], f.matrix()[(1, 0)], f.matrix()[(1, 1)]);
    let mut t = ResultTable::new([
        "theta1_deg",
        "t_xx",
        "t_xp",
        "t_px",
        "t_pp",
        "excess_var_x",
        "excess_var_p",
        "residual",
    ]);
    cfg.metadata(&mut t);
    for deg in theta_grid(cfg)? {
        let theta1 = deg.to_radians();
        let cascade = run_gate(&GateConfig::new(GateKind::Cascade { theta1 }, resource.clone())?, &input)?;
        let squeeze = run_gate(&GateConfig::new(GateKind::Squeeze { theta1 }, resource.clone())?, &input)?;
        let residual = (cascade.transform - f * squeeze.transform).amax();
        let m = cascade.transform;
        t.push(vec![
            deg,
            m[(0, 0)],
            m[(0, 1)],
            m[(1, 0)],
            m[(1, 1)],
            cascade.excess_cov[(0, 0)],
            cascade.excess_cov[(1, 1)],
            residual,
        ])?;
    }
    Ok(t)
}

/// Homodyne angles for phase-squeezing targets: always −4, −8, −12 dB, plus
/// the sweep points when a sweep is given.
pub fn run_angles(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let mut targets = vec![-4.0, -8.0, -12.0];
    if let Some(s) = cfg.sweep {
        targets.extend(s.points());
    }
    let mut t = ResultTable::new(["target_db", "theta1_deg", "theta2_deg"]);
    cfg.metadata(&mut t);
    for a in targets {
        let deg = angle_for_squeezing_db(a, Quadrature::Phase)?.to_degrees();
        t.push(vec![a, deg, -deg])?;
    }
    Ok(t)
}

/// `θ1` values (degrees) of the default verification grid.
pub const VERIFY_THETAS_DEG: [f64; 5] = [14.10, 21.70, 32.25, 45.0, 60.0];
/// Resource squeezing parameters of the default verification grid.
pub const VERIFY_RESOURCE_R: [f64; 4] = [0.0, 0.23, 0.46, 8.0];

/// Gate kind codes used in the `kind` column of the verify table.
pub fn kind_code(kind: &GateKind) -> f64 {
    match kind {
        GateKind::Squeeze { .. } => 0.0,
        GateKind::Fourier => 1.0,
        GateKind::Cascade { .. } => 2.0,
    }
}

/// Monte Carlo check of every (gate, `θ1`, `r_E`) grid point against the
/// analytic engine. Every grid point draws its own seed from `cfg.seed`.
pub fn run_verify(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let input = cfg.input_state()?;
    let thetas = match cfg.theta1_deg {
        Some(t) => vec![t],
        None => VERIFY_THETAS_DEG.to_vec(),
    };
    let mut t = ResultTable::new([
        "kind",
        "theta1_deg",
        "r_e",
        "z_mean_x",
        "z_mean_p",
        "z_cov_xx",
        "z_cov_xp",
        "z_cov_pp",
        "max_abs_z",
        "pass",
    ]);
    cfg.metadata(&mut t);
    t.meta("kind_codes", "0=squeeze,1=fourier,2=cascade");
    t.meta("z_threshold", crate::oracle::Z_THRESHOLD);
    let mut index: u64 = 0;
    for make_kind in [
        (|theta1| GateKind::Squeeze { theta1 }) as fn(f64) -> GateKind,
        |_| GateKind::Fourier,
        |theta1| GateKind::Cascade { theta1 },
    ] {
        for &deg in &thetas {
            for &r in &VERIFY_RESOURCE_R {
                let kind = make_kind(deg.to_radians());
                let gate = GateConfig::new(kind, make_epr(r)?)?;
                let seed = cfg.seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                index += 1;
                let batch = sample_gate_trajectories_with_gain(&gate, &input, cfg.samples, seed, cfg.fault_gain)?;
                let v = verify_against_analytic(&batch, &run_gate(&gate, &input)?)?;
                let z = v.z_scores;
                t.push(vec![
                    kind_code(&kind),
                    deg,
                    r,
                    z[0],
                    z[1],
                    z[2],
                    z[3],
                    z[4],
                    v.max_abs_z(),
                    if v.pass { 1.0 } else { 0.0 },
                ])?;
            }
        }
    }
    Ok(t)
}

/// True when every row of a verify table passed.
pub fn verify_passed(table: &ResultTable) -> bool {
    table
        .column("pass")
        .is_some_and(|c| c.iter().all(|&p| p == 1.0))
}

pub fn run(cfg: &ExperimentConfig) -> Result<ResultTable> {
    match cfg.experiment {
        Experiment::Fig2 => run_fig2(cfg),
        Experiment::Fig3 => run_fig3(cfg),
        Experiment::Fig4 => run_fig4(cfg),
        Experiment::Fig5 => run_fig5(cfg),
        Experiment::Cascade => run_cascade(cfg),
        Experiment::Angles => run_angles(cfg),
        Experiment::Verify => run_verify(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_parsing() {
        let s: Sweep = "0:-14:101".parse().unwrap();
        assert_eq!(s, Sweep { min: 0.0, max: -14.0, steps: 101 });
        let p = s.points();
        assert_eq!(p.len(), 101);
        assert_eq!(p[0], 0.0);
        assert_eq!(p[100], -14.0);
        assert!((p[50] + 7.0).abs() < 1e-12);
        assert!("1:2".parse::<Sweep>().is_err());
        assert!("1:2:1".parse::<Sweep>().is_err());
        assert!("a:2:5".parse::<Sweep>().is_err());
    }

    #[test]
    fn anchors_are_merged_in_order() {
        let g = with_anchors(vec![0.0, -5.0, -10.0, -15.0], &[-4.0, -5.0, -12.0]);
        assert_eq!(g, vec![0.0, -4.0, -5.0, -10.0, -12.0, -15.0]);
    }

    #[test]
    fn config_validation() {
        let mut c = ExperimentConfig::defaults(Experiment::Fig2);
        assert!(c.validate().is_ok());
        c.resource_db = 1.0;
        assert!(c.validate().is_err());
        let mut v = ExperimentConfig::defaults(Experiment::Verify);
        v.samples = 9_999;
        assert!(matches!(run_verify(&v), Err(Error::TooFewSamples { .. })));
    }

    #[test]
    fn fig3_identity_row_is_symmetric() {
        let t = run_fig3(&ExperimentConfig::defaults(Experiment::Fig3)).unwrap();
        let row = &t.rows[0];
        assert_eq!(row[0], 0.0);
        assert!((row[1] - row[2]).abs() < 1e-12);
    }

    #[test]
    fn fig2_identity_row_closed_form() {
        let t = run_fig2(&ExperimentConfig::defaults(Experiment::Fig2)).unwrap();
        let expected = 10.0 * ((0.25 + 0.5 * 10f64.powf(-0.53)) / 0.25).log10();
        assert!((t.rows[0][1] - expected).abs() < 1e-12);
    }

    #[test]
    fn tables_are_deterministic() {
        for e in [Experiment::Fig2, Experiment::Fig4, Experiment::Cascade] {
            let c = ExperimentConfig::defaults(e);
            assert_eq!(run(&c).unwrap().to_csv(), run(&c).unwrap().to_csv());
        }
    }
}
