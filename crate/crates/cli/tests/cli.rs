use std::fs;
use std::process::{Command, Output};

fn cvgate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvgate"))
        .args(args)
        .env_remove("CVGATE_OUT_DIR")
        .output()
        .expect("spawn cvgate")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn angles_prints_csv_to_stdout() {
    let o = cvgate(&["angles"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# experiment=angles"));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "target_db,theta1_deg,theta2_deg");
    assert!(text.contains("-12,14.1003236,"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = cvgate(&["verify", "--samples", "20000", "--theta1-deg", "30", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn metadata_echoes_overrides() {
    let o = cvgate(&["fig3", "--resource-db", "-6", "--sweep", "0:-10:5", "--mod-p-db", "15"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for needle in ["# resource_db=-6", "# sweep=0:-10:5", "# mod_p_db=15"] {
        assert!(text.contains(needle), "missing {needle} in\n{text}");
    }
}

#[test]
fn out_dir_environment_variable_names_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cvgate"))
        .args(["fig5", "--plot-script", dir.path().join("fig5.gp").to_str().unwrap()])
        .env("CVGATE_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = fs::read_to_string(dir.path().join("fig5.csv")).unwrap();
    assert!(csv.contains("# summary.output_x_db="));
    let gp = fs::read_to_string(dir.path().join("fig5.gp")).unwrap();
    assert!(gp.contains("fig5.csv"));
}

#[test]
fn bad_input_exits_with_usage_error() {
    for args in [
        &["fig2", "--resource-db", "2"][..],
        &["fig4", "--sweep", "0:1"],
        &["fig3", "--input", "squeezed"],
        &["fig4", "--fault-gain", "0.9"],
        &["nonsense"],
    ] {
        let o = cvgate(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn faulty_feedforward_fails_verification() {
    let o = cvgate(&["verify", "--fault-gain", "0.9", "--samples", "100000", "--theta1-deg", "30"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("verification failed"));
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(cvgate(&["--help"]).status.code(), Some(0));
}
