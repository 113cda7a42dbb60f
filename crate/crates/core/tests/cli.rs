use std::process::{Command, Output};

const TMSV: &str = r#"{"kind":"tmsv_noisy","r":0.5,"b0":0}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvtele")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value_after(text: &str, prefix: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(prefix)).unwrap_or_else(|| panic!("no {prefix} in {text}"));
    line[prefix.len()..].trim().parse().unwrap()
}

fn assert_single_line_error(o: &Output) {
    assert!(!o.status.success());
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert_eq!(err.lines().count(), 1, "stderr: {err}");
    assert!(err.starts_with("error: "), "stderr: {err}");
}

#[test]
fn fidelity_examples() {
    let o = run(&["fidelity", "--channel", TMSV, "--swap"]);
    assert!(o.status.success());
    let f = value_after(&stdout(&o), "swap F = ");
    assert!((f - std::f64::consts::E).abs() < 1e-9);

    let o = run(&["fidelity", "--channel", TMSV, "--input", "coherent", "--verify"]);
    assert!(o.status.success());
    let f = value_after(&stdout(&o), "F = ");
    assert!((f - 1.0 / (1.0 + (-1.0f64).exp())).abs() < 1e-9);
    assert!(stdout(&o).contains("verify F"));

    let vacuum = r#"{"kind":"explicit","gamma":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#;
    let o = run(&["--channel", vacuum, "fidelity"]);
    assert_eq!(value_after(&stdout(&o), "F = "), 0.5);
}

#[test]
fn channel_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ch.json");
    std::fs::write(&path, TMSV).unwrap();
    let arg = format!("@{}", path.display());
    let o = run(&["fidelity", "--channel", &arg, "--swap"]);
    assert!(o.status.success());
    assert!(run(&["fidelity", "--channel", "@/nonexistent/ch.json"]).status.code() == Some(1));
}

#[test]
fn optimize_examples() {
    let o = run(&["optimize", "--channel", r#"{"kind":"tmsv_noisy","r":0.2,"b0":0.5}"#, "--verify"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let winner = text.lines().find(|l| l.starts_with("winner:")).unwrap();
    assert!(winner.contains("interior_root"), "{winner}");
    assert!(winner.contains("0.70688"), "{winner}");

    let o = run(&["optimize", "--channel", r#"{"kind":"tmsv_noisy","r":0.6,"b0":0.5}"#]);
    let text = stdout(&o);
    let winner = text.lines().find(|l| l.starts_with("winner:")).unwrap();
    assert!(winner.contains("identity") || winner.contains("boundary_root"), "{winner}");

    let o = run(&[
        "optimize",
        "--channel",
        r#"{"kind":"tmsv_noisy","r":0,"b0":0.4}"#,
        "--target",
        "swap",
        "--side",
        "both",
    ]);
    let text = stdout(&o);
    let winner = text.lines().find(|l| l.starts_with("winner:")).unwrap();
    assert!(winner.contains("vacuum_replacement"), "{winner}");
    assert!(winner.contains("F = 1.00000000000"), "{winner}");
}

#[test]
fn failures_are_single_line_errors() {
    assert_single_line_error(&run(&["fidelity", "--channel", r#"{"kind":"tmsv_noisy","r":0.5}"#]));
    assert_single_line_error(&run(&["fidelity", "--channel", "{\"kind\":\n\"tmsv_noisy\","]));
    let unphysical = r#"{"kind":"explicit","gamma":[[0.5,0,0,0],[0,0.5,0,0],[0,0,1,0],[0,0,0,1]]}"#;
    let o = run(&["fidelity", "--channel", unphysical]);
    assert_single_line_error(&o);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not physical"));
    assert_single_line_error(&run(&["fidelity"]));
    assert_single_line_error(&run(&["frobnicate"]));
    assert_single_line_error(&run(&["optimize", "--channel", TMSV, "--side", "both"]));
    assert_single_line_error(&run(&["sweep", "--r-steps", "1"]));
    assert_single_line_error(&run(&["sweep", "--out", "/nonexistent/dir/out.csv"]));
}

#[test]
fn sweep_output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&["sweep", "--b0", "0.5", "--r-steps", "101", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let csv = std::fs::read(&a).unwrap();
    assert_eq!(csv, std::fs::read(&b).unwrap());
    let text = String::from_utf8(csv).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "r,fidelity_optimal_cp,fidelity_symplectic_only,fidelity_no_op,winner_kind,x_opt,y_opt"
    );
    let rs: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(rs.len(), 101);
    assert!(rs.windows(2).all(|w| w[0] < w[1]));

    let sidecar: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(a.with_extension("json")).unwrap()).unwrap();
    let r_th = sidecar["r_th"].as_f64().unwrap();
    assert!((r_th - 2f64.ln() / 2.0).abs() < 1e-15);
    assert_eq!(sidecar["config"]["r_steps"], 101);
}

#[test]
fn noiseless_sweep_curves_coincide() {
    let o = run(&["sweep", "--b0", "0", "--r-min", "0.01", "--r-steps", "50"]);
    assert!(o.status.success());
    for line in stdout(&o).lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (opt, sym): (f64, f64) = (f[1].parse().unwrap(), f[2].parse().unwrap());
        assert!((opt - sym).abs() < 1e-10, "{line}");
    }
}

#[test]
fn sweep_modes_select_columns() {
    let o = run(&["sweep", "--r-steps", "3", "--modes", "none", "--target", "swap"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().nth(2).unwrap();
    let f: Vec<&str> = row.split(',').collect();
    assert_eq!(f.len(), 7);
    assert!(f[1].is_empty() && f[2].is_empty() && !f[3].is_empty());
}
