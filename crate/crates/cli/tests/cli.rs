use std::path::PathBuf;
use std::process::Command;

use homotopy_gauge_cli::{run, Report, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_PASS, EXIT_USAGE};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn hgauge(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hgauge"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("hgauge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn sphere_gauge_symmetry() {
    let (code, out, _) = hgauge(&[
        "homology",
        "--input",
        &data("tetra-boundary.txt"),
        "--coeff",
        "Z/3",
        "--which",
        "ext-config",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.lines().any(|l| l == "H_1 = Z/3"), "{out}");
}

#[test]
fn edge_local_complex() {
    let (code, out, _) = hgauge(&[
        "homology",
        "--input",
        &data("edge.txt"),
        "--coeff",
        "Z/2",
        "--which",
        "local",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.lines().any(|l| l == "H_1 = Z/2"), "{out}");
}

#[test]
fn empty_file_is_rejected() {
    let p = scratch("empty.txt", "# nothing here\n");
    let (code, out, err) = hgauge(&["homology", "--input", &p, "--coeff", "Z"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains("no simplices"), "{err}");
}

#[test]
fn parse_errors_carry_line_numbers() {
    let p = scratch("bad.txt", "a b\nc c\n");
    let (code, _, err) = hgauge(&["homology", "--input", &p, "--coeff", "Z"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        hgauge(&["homology", "--input", &data("edge.txt"), "--coeff", "Z/1"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        hgauge(&["homology", "--input", &data("edge.txt"), "--coeff", "Q"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        hgauge(&["verify", "--input", &data("edge.txt"), "--coeff", "Z/2"]).0,
        EXIT_USAGE
    );
    assert_eq!(hgauge(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(
        hgauge(&["homology", "--input", "/nonexistent/file", "--coeff", "Z"]).0,
        EXIT_USAGE
    );
    assert_eq!(hgauge(&["--help"]).0, EXIT_PASS);
}

#[test]
fn eta_suite_on_triangle() {
    let (code, out, _) = hgauge(&[
        "verify",
        "--input",
        &data("triangle.txt"),
        "--coeff",
        "Z/2",
        "--suite",
        "eta",
    ]);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert!(out.ends_with("verify eta: pass\n"));
}

#[test]
fn zeta_and_engine_suites() {
    for (file, suite) in [
        ("tetrahedron.txt", "zeta"),
        ("umbrella.txt", "zeta"),
        ("path.txt", "engine-vs-hand"),
    ] {
        let (code, out, _) = hgauge(&[
            "verify",
            "--input",
            &data(file),
            "--coeff",
            "Z/6",
            "--suite",
            suite,
        ]);
        assert_eq!(code, EXIT_PASS, "{file} {suite}: {out}");
    }
}

#[test]
fn eta_on_a_non_cone_is_an_error() {
    let (code, _, err) = hgauge(&[
        "verify",
        "--input",
        &data("tetra-boundary.txt"),
        "--coeff",
        "Z/2",
        "--suite",
        "eta",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("no top star"), "{err}");
}

#[test]
fn deligne_compare_on_sphere() {
    let (code, out, _) = hgauge(&[
        "verify",
        "--input",
        &data("tetra-boundary.txt"),
        "--coeff",
        "Z/2",
        "--suite",
        "deligne-compare",
    ]);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert!(out.contains("[pass] H(Deligne) = H(Čech–Deligne)"));
}

#[test]
fn pairing_needs_cyclic_coefficients() {
    let (code, _, err) = hgauge(&[
        "verify",
        "--input",
        &data("tetra-boundary.txt"),
        "--coeff",
        "Z",
        "--suite",
        "pairing",
    ]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("undefined for G = Z"), "{err}");
}

#[test]
fn constant_sheaf_tables() {
    let (code, out, _) = hgauge(&[
        "constant-sheaf",
        "--input",
        &data("tetra-boundary.txt"),
        "--coeff",
        "Z",
        "--degree",
        "2",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(
        out,
        "H_0 = Z    H^2 = Z    match\nH_1 = 0    H^1 = 0    match\nH_2 = Z    H^0 = Z    match\nconstant-sheaf degree 2: pass\n"
    );
    let (code, out, _) = hgauge(&[
        "constant-sheaf",
        "--input",
        &data("torus7.txt"),
        "--coeff",
        "Z",
        "--degree",
        "2",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("H_0 = Z    H^2 = Z    match\nH_1 = Z^2    H^1 = Z^2    match\nH_2 = Z    H^0 = Z    match\n"), "{out}");
    let (code, out, _) = hgauge(&[
        "constant-sheaf",
        "--input",
        &data("components.txt"),
        "--coeff",
        "Z",
        "--degree",
        "0",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert!(
        out.starts_with("H_0 = Z^3    H^0 = Z^3    match\n"),
        "{out}"
    );
}

#[test]
fn separation_exit_codes() {
    let (code, out, _) = hgauge(&[
        "verify",
        "--input",
        &data("edge.txt"),
        "--coeff",
        "Z/2",
        "--suite",
        "separation",
    ]);
    assert_eq!(code, EXIT_PASS, "{out}");
    let args = [
        "verify",
        "--input",
        &data("tetra-boundary.txt"),
        "--coeff",
        "Z/2",
        "--suite",
        "separation",
        "--budget",
        "10",
    ];
    let (code, out, _) = hgauge(&args);
    assert_eq!(code, EXIT_INCONCLUSIVE, "{out}");
    assert!(out.contains("[inconclusive]"));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "verify",
        "--input",
        &data("tetra-boundary.txt"),
        "--coeff",
        "Z/2",
        "--suite",
        "separation",
        "--seed",
        "11",
    ];
    let a = hgauge(&args);
    let b = hgauge(&args);
    assert_eq!(a, b);
    let json: Vec<&str> = args.iter().copied().chain(["--format", "json"]).collect();
    assert_eq!(hgauge(&json), hgauge(&json));
}

#[test]
fn json_round_trips() {
    let runs: [&[&str]; 3] = [
        &[
            "hgauge",
            "homology",
            "--input",
            &data("path.txt"),
            "--coeff",
            "Z/2",
            "--which",
            "ext-obs",
            "--format",
            "json",
        ],
        &[
            "hgauge",
            "verify",
            "--input",
            &data("path.txt"),
            "--coeff",
            "Z/2",
            "--suite",
            "pairing",
            "--format",
            "json",
        ],
        &[
            "hgauge",
            "constant-sheaf",
            "--input",
            &data("path.txt"),
            "--coeff",
            "Z/4",
            "--degree",
            "1",
            "--format",
            "json",
        ],
    ];
    for args in runs {
        let (code, out, err) = run(args.iter().copied());
        assert_eq!(code, EXIT_PASS, "{err}");
        let report: Report = serde_json::from_str(&out).unwrap();
        assert_eq!(report.to_json(), out);
        assert_eq!(
            serde_json::from_str::<Report>(&report.to_json()).unwrap(),
            report
        );
    }
}

#[test]
fn failing_reports_exit_one() {
    let mut r: Report =
        serde_json::from_str(r#"{"command":"verify eta","coeff":"Z/2","status":"fail"}"#).unwrap();
    assert_eq!(r.exit_code(), EXIT_FAIL);
    r.status = homotopy_gauge_cli::Status::Inconclusive;
    assert_eq!(r.exit_code(), EXIT_INCONCLUSIVE);
}
