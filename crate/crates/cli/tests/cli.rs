use std::path::Path;
use std::process::{Command, Output};

use qwalk_cli::read_csv;
use qwalk_core::{Distribution, LatticeGeometry};

fn qwalk(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .env_remove("QWALK_OUT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn distribution(path: &Path, side: usize) -> Distribution {
    let text = std::fs::read_to_string(path).unwrap();
    Distribution::from_csv(LatticeGeometry::new(side).unwrap(), &text).unwrap()
}

#[test]
fn zero_steps_returns_initial_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwalk(dir.path(), &["evolve", "--side", "5", "--steps", "0", "--x0", "2", "--y0", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let d = distribution(&dir.path().join("evolve_side5_t0_distribution.csv"), 5);
    let g = LatticeGeometry::new(5).unwrap();
    assert_eq!(d, Distribution::point_mass(g, 2, 3).unwrap());
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn csv_files_carry_manifest_hash() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwalk(dir.path(), &["mixing", "--side", "9", "--epsilon", "0.2", "--horizon", "500"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h1, trace) = read_csv(&dir.path().join("mixing_grover_side9_trace.csv")).unwrap();
    let (h2, times) = read_csv(&dir.path().join("mixing_grover_side9_times.csv")).unwrap();
    assert_eq!(h1, h2);
    assert_eq!(h1.len(), 64);
    assert_eq!(trace[0], "t,tv_avg_to_pi,tv_inst_to_pi,tv_avg_to_uniform");
    assert_eq!(trace.len(), 501);
    assert_eq!(times[0], "N,epsilon,M_eps,I_eps,reached");
    assert!(times[1].starts_with("81,0.2,"));
    let manifest = std::fs::read_to_string(dir.path().join("mixing_grover_side9.manifest")).unwrap();
    assert!(manifest.contains("side=9\n") && manifest.contains("horizon=500\n"));
}

#[test]
fn manifest_hash_tracks_parameters() {
    let dir = tempfile::tempdir().unwrap();
    qwalk(dir.path(), &["search", "--side", "11", "--t-max", "50"]);
    let (a, _) = read_csv(&dir.path().join("search_side11_trace.csv")).unwrap();
    qwalk(dir.path(), &["search", "--side", "11", "--t-max", "60"]);
    let (b, lines) = read_csv(&dir.path().join("search_side11_trace.csv")).unwrap();
    assert_ne!(a, b);
    assert_eq!(lines[0], "t,p_marked");
    assert_eq!(lines.len(), 62);
}

#[test]
fn fig1_peaks_at_shifted_origin() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwalk(dir.path(), &["reproduce", "fig1", "--side", "41"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("argmax=20:20"));
    let pi = distribution(&dir.path().join("fig1_side41_pi.csv"), 41);
    assert_eq!(pi.argmax(), (20, 20));
}

#[test]
fn fig3_emits_snapshot_and_average() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwalk(dir.path(), &["reproduce", "fig3", "--side", "41"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let snap = distribution(&dir.path().join("fig3_side41_snapshot_t80.csv"), 41);
    let avg = distribution(&dir.path().join("fig3_side41_average.csv"), 41);
    assert_eq!(snap.argmax(), (0, 0));
    assert_eq!(avg.argmax(), (0, 0));
}

#[test]
fn snapshot_dump() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwalk(dir.path(), &["search", "--side", "7", "--t-max", "30", "--dump-snapshot-at", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let d = distribution(&dir.path().join("search_side7_snapshot_t4.csv"), 7);
    assert!((d.total_mass() - 1.0).abs() < 1e-12);
}

#[test]
fn spectrum_rows_cover_every_mode() {
    let dir = tempfile::tempdir().unwrap();
    let o = qwalk(dir.path(), &["spectrum", "--side", "5"]);
    assert!(o.status.success());
    let (_, lines) = read_csv(&dir.path().join("spectrum_side5_eigenvalues.csv")).unwrap();
    assert_eq!(lines[0], "kx,ky,label,re_lambda,im_lambda,theta");
    assert_eq!(lines.len(), 1 + 4 * 25);
    assert!(stdout(&o).contains("gap="));
}

#[test]
fn invalid_parameters_exit_with_distinct_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let bad_side = qwalk(dir.path(), &["evolve", "--side", "1", "--steps", "3"]);
    assert_eq!(bad_side.status.code(), Some(3));
    assert!(stderr(&bad_side).contains("side"));

    let bad_eps = qwalk(dir.path(), &["mixing", "--side", "5", "--epsilon=-0.1"]);
    assert_eq!(bad_eps.status.code(), Some(3));
    assert!(stderr(&bad_eps).contains("epsilon"));

    let even = qwalk(dir.path(), &["mixing", "--side", "6"]);
    assert_eq!(even.status.code(), Some(3));
    assert!(stderr(&even).contains("odd side"));

    let out_of_range = qwalk(dir.path(), &["search", "--side", "5", "--marked-x", "9"]);
    assert_eq!(out_of_range.status.code(), Some(3));

    let unknown = qwalk(dir.path(), &["evolve", "--side", "5", "--steps", "1", "--bogus"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stderr(&unknown).contains("--bogus"));

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let unwritable = qwalk(&blocker.join("sub"), &["spectrum", "--side", "3"]);
    assert_eq!(unwritable.status.code(), Some(4));
    assert!(stderr(&unwritable).contains("output directory"));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(["spectrum", "--side", "3"])
        .env("QWALK_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(dir.path().join("spectrum_side3_eigenvalues.csv").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["scaling", "--sides", "5,7,9,11", "--epsilons", "0.2,0.4", "--horizon", "2000"];
    assert!(qwalk(a.path(), &args).status.success());
    let mut with_threads = args.to_vec();
    with_threads.extend(["--threads", "2"]);
    assert!(qwalk(b.path(), &with_threads).status.success());
    for name in ["scaling_grover_times.csv", "scaling_grover_fits.csv"] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap()
        );
    }
}
