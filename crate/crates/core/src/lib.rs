//! Linear-Gaussian simulation of single-mode gates for measurement-based
//! continuous-variable quantum computing driven by an EPR pair.
//!
//! An input mode interferes with one half of an EPR pair on a balanced
//! beamsplitter; both outputs are homodyned and the outcomes are fed forward
//! onto the other half. The homodyne angles select the gate: a squeezer
//! `diag(cot θ1, tan θ1)`, the Fourier rotation, or (with zero coupling
//! phase) the two composed. Finite resource squeezing adds noise of
//! variance `e^{-2r}/2` to each output quadrature.
//!
//! Quadratures follow `x = (a + a†)/2`, so vacuum variance is `1/4` and all
//! noise powers are quoted in dB against that level.
//!
//! ```
//! use cvgate::{angle_for_squeezing_db, make_vacuum, noise_power_db, run_gate};
//! use cvgate::{EprResource, GateConfig, GateKind, Quadrature};
//!
//! let theta1 = angle_for_squeezing_db(-12.0, Quadrature::Phase)?;
//! let gate = GateConfig::new(GateKind::Squeeze { theta1 }, EprResource::from_db(-4.0)?)?;
//! let report = run_gate(&gate, &make_vacuum(1)?)?;
//! let db = noise_power_db(report.output_cov()[(1, 1)])?;
//! assert!((db + 0.66).abs() < 0.01);
//! # Ok::<(), cvgate::Error>(())
//! ```

pub mod cluster;
pub mod epr;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod measure;
pub mod metrics;
pub mod oracle;
pub mod state;
pub mod symplectic;
pub mod table;
pub mod units;

pub use cluster::{cluster_excess_variance, excess_ratio_epr_vs_cluster, ClusterNoiseModel};
pub use epr::{make_epr, EprResource};
pub use error::{Error, Result};
pub use gates::{
    angle_for_squeezing_db, build_cascade_plan, build_fourier_plan, build_squeeze_plan, run_gate,
    GateConfig, GateKind, GateReport, Quadrature,
};
pub use measure::{measure_and_feedforward, MeasurementPlan};
pub use metrics::{
    covariance_for_fidelity, fidelity_vs_ideal, gaussian_fidelity, lo_sweep, Benchmark,
    FidelityResult, NoiseSpectrum,
};
pub use oracle::{
    sample_gate_trajectories, verify_against_analytic, verify_cluster_noise, OracleVerdict,
    TrajectoryBatch,
};
pub use state::{
    add_classical_noise, make_coherent, make_vacuum, quadrature_stats, GaussianState,
    QuadratureObservable, VACUUM_VARIANCE,
};
pub use symplectic::{apply, beamsplitter_50_50, phase_rotation, single_mode_squeezer, SymplecticOp};
pub use units::noise_power_db;

/// The guide's chapters, compiled as doc-tests so the snippets stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quadratures.md")]
    mod quadratures {}
    #[doc = include_str!("../../../book/src/epr.md")]
    mod epr {}
    #[doc = include_str!("../../../book/src/gates.md")]
    mod gates {}
    #[doc = include_str!("../../../book/src/cluster.md")]
    mod cluster {}
    #[doc = include_str!("../../../book/src/fidelity.md")]
    mod fidelity {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
