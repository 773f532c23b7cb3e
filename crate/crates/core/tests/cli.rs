use std::process::Command;

fn oamem() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oamem"))
}

#[test]
fn help_lists_csv_columns() {
    let out = oamem().arg("--help").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for s in ["scan", "meridian", "decay", "tomo", "bounds", "render", "t_s,eta,f_rel,f_abs", "Exit codes"] {
        assert!(text.contains(s), "missing `{s}`");
    }
}

#[test]
fn bounds_writes_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let status = oamem()
        .args(["bounds", "--seed", "4", "--parallel", "2", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("bounds.csv")).unwrap();
    assert!(csv.starts_with("t_s,eta,f_classical,band_low,band_high\n"));
    assert_eq!(csv.lines().count(), 7);
    let manifest = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
    assert!(manifest.contains("bounds.csv") && manifest.contains("\"seed\": 4"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing_seed = oamem().args(["decay", "--out"]).arg(dir.path()).status().unwrap();
    assert_eq!(missing_seed.code(), Some(2));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "seed = 1\n[grid]\nsize = 64\n").unwrap();
    let unknown_key = oamem().args(["decay", "--config"]).arg(&bad).status().unwrap();
    assert_eq!(unknown_key.code(), Some(2));

    let wrong_kind = dir.path().join("wrong.toml");
    std::fs::write(&wrong_kind, "experiment = \"tomography\"\nseed = 1\n").unwrap();
    let mismatch = oamem().args(["scan", "--config"]).arg(&wrong_kind).status().unwrap();
    assert_eq!(mismatch.code(), Some(2));

    let no_file = oamem().args(["bounds", "--seed", "1", "--config", "/nonexistent/x.toml"]).status().unwrap();
    assert_eq!(no_file.code(), Some(2));
}

#[test]
fn shipped_config_runs_from_cli() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/qutrit_tomo.toml");
    let status = oamem().args(["tomo", "--config", cfg, "--out"]).arg(dir.path()).status().unwrap();
    assert_eq!(status.code(), Some(0));
    for f in ["tomo_counts_0.csv", "rho_2.csv", "report.txt", "manifest.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}
