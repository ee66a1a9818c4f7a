use cvgate::experiments::{
    run, run_angles, run_cascade, run_fig2, run_fig3, run_fig4, Experiment, ExperimentConfig, Sweep,
};
use cvgate::units::squeezing_db_from_r;

fn cfg(e: Experiment) -> ExperimentConfig {
    ExperimentConfig::defaults(e)
}

fn row_at(t: &cvgate::table::ResultTable, target: f64) -> &[f64] {
    t.rows
        .iter()
        .find(|r| (r[0] - target).abs() < 1e-9)
        .unwrap_or_else(|| panic!("no row for {target}"))
}

#[test]
fn fig2_identity_point_has_the_closed_form() {
    let t = run_fig2(&cfg(Experiment::Fig2)).unwrap();
    let expected = 10.0 * ((0.25 + 0.5 * 10f64.powf(-0.53)) / 0.25).log10();
    assert!((row_at(&t, 0.0)[1] - expected).abs() < 1e-12);
}

#[test]
fn fig2_epr_trace_is_below_the_cluster_trace() {
    let t = run_fig2(&cfg(Experiment::Fig2)).unwrap();
    for r in &t.rows {
        assert!(r[1] < r[3] && r[2] < r[4], "row {r:?}");
    }
}

#[test]
fn fig2_with_an_ideal_resource_tracks_the_target() {
    let c = ExperimentConfig {
        resource_db: squeezing_db_from_r(8.0),
        ..cfg(Experiment::Fig2)
    };
    // The e^{-16}/2 residual is ~1.5e-5 dB against the deepest squeezed trace.
    for r in run_fig2(&c).unwrap().rows {
        assert!((r[1] + r[0]).abs() < 1e-4, "row {r:?}");
        assert!((r[2] - r[0]).abs() < 1e-4, "row {r:?}");
    }
}

#[test]
fn fig3_contains_the_anchor_targets_and_is_symmetric_at_zero() {
    let t = run_fig3(&cfg(Experiment::Fig3)).unwrap();
    for a in [-4.0, -8.0, -12.0] {
        row_at(&t, a);
    }
    let zero = row_at(&t, 0.0);
    assert!((zero[1] - zero[2]).abs() < 1e-12);
    let targets = t.column("target_db").unwrap();
    assert!(targets.windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn fig4_with_an_ideal_resource_is_near_perfect() {
    let c = ExperimentConfig {
        resource_db: squeezing_db_from_r(8.0),
        ..cfg(Experiment::Fig4)
    };
    let t = run_fig4(&c).unwrap();
    assert!(t.column("f_epr").unwrap().iter().all(|&f| f >= 0.9999));
}

#[test]
fn cascade_table_matches_fourier_after_squeeze() {
    let t = run_cascade(&cfg(Experiment::Cascade)).unwrap();
    assert_eq!(t.rows.len(), 81);
    assert!(t.column("residual").unwrap().iter().all(|&r| r < 1e-9));
    let r45 = row_at(&t, 45.0);
    // [[0, −1], [1, 0]] at 45°.
    assert!((r45[1]).abs() < 1e-12 && (r45[2] + 1.0).abs() < 1e-12);
    assert!((r45[3] - 1.0).abs() < 1e-12 && r45[4].abs() < 1e-12);
}

#[test]
fn angles_table_lists_the_standard_targets() {
    let t = run_angles(&cfg(Experiment::Angles)).unwrap();
    let deg = t.column("theta1_deg").unwrap();
    for (got, want) in deg.iter().zip([32.25, 21.70, 14.10]) {
        assert!((got - want).abs() < 0.01);
    }
}

#[test]
fn csv_is_reproducible_and_echoes_the_configuration() {
    let c = cfg(Experiment::Fig3);
    let a = run(&c).unwrap().to_csv();
    assert_eq!(a, run(&c).unwrap().to_csv());
    assert!(a.contains("# experiment=fig3"));
    assert!(a.contains("# resource_db=-4"));
}

#[test]
fn invalid_configurations_are_rejected() {
    assert!("0:1".parse::<Sweep>().is_err());
    assert!("0:1:1".parse::<Sweep>().is_err());
    let amplifying = ExperimentConfig {
        resource_db: 1.0,
        ..cfg(Experiment::Fig4)
    };
    assert!(run(&amplifying).is_err());
}
