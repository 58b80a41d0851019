use std::path::Path;

use exact_recovery::cli::run;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("exact-recovery").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn cheeger_on_k4() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "k4.graph");
    let (code, _, err) = cli(&["generate", "--family", "complete", "--n", "4", "--out", &g]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = cli(&["cheeger", "--graph", &g]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("phi=2 (|S|=2, cut=4)"));
    assert_eq!(out.lines().nth(1), Some("S=0 1"));
}

#[test]
fn cheeger_falls_back_to_spectral_for_large_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "c30.graph");
    cli(&["generate", "--family", "cycle", "--n", "30", "--out", &g]);
    let (code, out, _) = cli(&["cheeger", "--graph", &g]);
    assert_eq!(code, 0);
    assert!(out.starts_with("phi in ["), "{out}");
    assert!(out.contains("spectral"));
}

#[test]
fn noiseless_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "g.graph");
    let obs = path(dir.path(), "g.obs");
    let truth = path(dir.path(), "truth.labels");
    let labels = path(dir.path(), "out.labels");
    assert_eq!(
        cli(&["generate", "--family", "grid", "--rows", "3", "--cols", "3", "--out", &g]).0,
        0
    );
    let (code, out, err) = cli(&[
        "observe",
        "--graph",
        &g,
        "--p",
        "0",
        "--q",
        "0",
        "--seed",
        "5",
        "--out",
        &obs,
        "--truth-out",
        &truth,
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("(0 flipped)"));
    let (code, out, err) = cli(&[
        "recover", "--graph", &g, "--obs", &obs, "--truth", &truth, "--out", &labels,
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("certified=yes"), "{out}");
    assert!(out.lines().any(|l| l == "hamming=0"), "{out}");
    assert_eq!(
        std::fs::read_to_string(&labels).unwrap(),
        std::fs::read_to_string(&truth).unwrap()
    );
    let (code, out, _) = cli(&["certify", "--graph", &g, "--obs", &obs, "--labels", &labels]);
    assert_eq!(code, 0);
    assert!(out.starts_with("certified=yes"));
}

#[test]
fn recover_reports_full_score_with_noise_levels() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "g.graph");
    let obs = path(dir.path(), "g.obs");
    cli(&[
        "generate", "--family", "regular", "--n", "10", "--d", "3", "--seed", "4", "--out", &g,
    ]);
    cli(&[
        "observe", "--graph", &g, "--p", "0.1", "--q", "0.2", "--seed", "1", "--out", &obs,
    ]);
    let (code, out, err) = cli(&[
        "recover", "--graph", &g, "--obs", &obs, "--p", "0.1", "--q", "0.2",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("score_full="));
    assert!(out.contains("alpha="));
    let (code, _, _) = cli(&["recover", "--graph", &g, "--obs", &obs, "--p", "0.1"]);
    assert_eq!(code, 1);
}

#[test]
fn bounds_table_flags_vacuity() {
    let (code, out, err) = cli(&[
        "bounds",
        "--n",
        "100",
        "--p",
        "0.1",
        "--q",
        "0.1",
        "--complete",
    ]);
    assert_eq!(code, 0, "{err}");
    let row = out.lines().nth(1).unwrap();
    assert!(row.trim_end().ends_with("yes"), "{row}");
    let (code, out, _) = cli(&[
        "bounds",
        "--n",
        "1000,100000",
        "--p",
        "0.05,0.1",
        "--q",
        "0.1",
        "--phi",
        "50",
        "--dmax",
        "99",
        "--smoothed-epsilon",
        "8",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.contains("smoothed")).count(), 2);
    assert_eq!(out.lines().count(), 1 + 4 + 2);
    let (code, _, err) = cli(&["bounds", "--n", "10", "--p", "0.1", "--q", "0.1"]);
    assert_eq!(code, 2);
    assert!(err.contains("--phi"));
}

#[test]
fn sweep_reproduces_golden_csv() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = path(dir.path(), "k12");
    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/k12.json");
    let (code, out, err) = cli(&["sweep", config, "--out", &prefix]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("wrote"));
    let golden = std::fs::read(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/k12.golden.csv"
    ))
    .unwrap();
    assert_eq!(std::fs::read(format!("{prefix}.csv")).unwrap(), golden);
    assert!(Path::new(&format!("{prefix}.svg")).exists());
    assert!(Path::new(&format!("{prefix}.json")).exists());
}

#[test]
fn exit_codes() {
    let (code, _, err) = cli(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(err.contains("Usage"), "{err}");
    let (code, _, _) = cli(&["cheeger", "--bogus"]);
    assert_eq!(code, 1);
    let (code, out, _) = cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("sweep"));
    let (code, _, err) = cli(&["cheeger", "--graph", "/nonexistent/g.graph"]);
    assert_eq!(code, 2);
    assert!(err.contains("/nonexistent/g.graph"));
    let (code, _, err) = cli(&[
        "generate", "--family", "regular", "--n", "10", "--out", "/tmp/x",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("--d"));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "bad.graph");
    std::fs::write(&g, "3 2\n0 1\n1 x\n").unwrap();
    let (code, _, err) = cli(&["cheeger", "--graph", &g]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}
