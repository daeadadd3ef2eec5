use std::path::Path;
use std::process::{Command, Output};

fn blayer(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blayer")).args(args).arg("--out").arg(out).output().unwrap()
}

fn summary(out: &Path) -> String {
    std::fs::read_to_string(out.join("summary.toml")).unwrap()
}

#[test]
fn patch_test_straight_passes_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = blayer(&["patch-test", "--variant", "straight", "--strict"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(dir.path());
    assert!(s.contains("status = \"pass\""));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("[PASS] straight: max |sigma_yy - p|/|p|"));
    assert!(!stdout.contains("curved"));
    let files: Vec<String> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert!(files.iter().any(|f| f.ends_with(".vtk")) && files.iter().any(|f| f.ends_with(".csv")), "{files:?}");
}

#[test]
fn default_config_round_trips_through_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_blayer")).args(["default-config", "bending-beam"]).output().unwrap();
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("id = \"bending-beam\""));
    let cfg = dir.path().join("beam.toml");
    std::fs::write(&cfg, &text).unwrap();
    let o = blayer(&["run", cfg.to_str().unwrap(), "--strict"], &dir.path().join("out"));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let csv = std::fs::read_dir(dir.path().join("out")).unwrap().filter_map(|e| e.ok()).find(|e| e.file_name().to_string_lossy().contains("traction"));
    let csv = std::fs::read_to_string(csv.unwrap().path()).unwrap();
    let row = csv.lines().nth(1).unwrap();
    // 17 significant digits: one leading digit and 16 after the point.
    assert!(row.split(',').any(|v| v.contains('e') && v.split('e').next().unwrap().trim_start_matches('-').len() == 18), "{row}");
}

#[test]
fn config_errors_exit_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "version = 1\n[benchmark]\nid = \"patch-test\"\nE = -1.0\n").unwrap();
    let o = blayer(&["run", cfg.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    let o = blayer(&["run", dir.path().join("missing.toml").to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_blayer")).args(["default-config", "nope"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn geometry_errors_and_strict_acceptance_gate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tight.toml");
    // A geometry error: offset distance beyond the curvature radius of the curve.
    std::fs::write(&cfg, "version = 1\n[benchmark]\nid = \"offset-validate\"\ndistances = [5.0]\nsurface = false\narc_exactness = false\n").unwrap();
    let o = blayer(&["run", cfg.to_str().unwrap()], &dir.path().join("geo"));
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(summary(&dir.path().join("geo")).contains("category = \"geometry\""));
    // A deep curved interface exceeds the curved patch-test bound.
    let cfg = dir.path().join("fail.toml");
    std::fs::write(&cfg, "version = 1\n[benchmark]\nid = \"patch-test\"\nvariants = [\"curved\"]\nlayer_depth = 2.0\n").unwrap();
    let lenient = blayer(&["run", cfg.to_str().unwrap()], &dir.path().join("a"));
    let strict = blayer(&["run", cfg.to_str().unwrap(), "--strict"], &dir.path().join("b"));
    assert_eq!(lenient.status.code(), Some(0));
    assert_eq!(strict.status.code(), Some(5));
    let s = summary(&dir.path().join("b"));
    assert!(s.contains("status = \"fail\"") && s.contains("category = \"acceptance\""), "{s}");
}
