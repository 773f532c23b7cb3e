use std::path::Path;

use oam_memory::harness::{run, ExperimentConfig, ExperimentKind};

fn load(name: &str) -> ExperimentConfig {
    ExperimentConfig::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)).unwrap()
}

#[test]
fn shipped_configs_parse() {
    let expected = [
        ("decay.toml", ExperimentKind::StorageDecay),
        ("magnetic.toml", ExperimentKind::StorageDecay),
        ("qutrit_tomo.toml", ExperimentKind::Tomography),
        ("scan.toml", ExperimentKind::InterferenceScan),
        ("bounds.toml", ExperimentKind::BoundsTable),
        ("render.toml", ExperimentKind::FieldRender),
    ];
    for (name, kind) in expected {
        let cfg = load(name);
        assert_eq!(cfg.experiment, kind, "{name}");
        let again = ExperimentConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap();
        assert_eq!(again, cfg, "{name}");
    }
}

#[test]
fn magnetic_config_collapses_qutrit() {
    let mut cfg = load("magnetic.toml");
    cfg.counting.noiseless = true;
    cfg.grid.n = 64;
    let out = run(&cfg).unwrap();
    let text = String::from_utf8(out.output("decay.csv").unwrap().bytes.clone()).unwrap();
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!(last[3] < 0.9, "F_abs at 100 us = {}", last[3]);
}

#[test]
fn scan_config_visibility() {
    let out = run(&load("scan.toml")).unwrap();
    let text = String::from_utf8(out.output("scan_fit.csv").unwrap().bytes.clone()).unwrap();
    let v: f64 = text.lines().nth(1).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!(v > 0.95, "V = {v}");
}

#[test]
fn hologram_qutrit_matches_its_configured_state() {
    let mut cfg = load("qutrit_tomo.toml");
    cfg.counting.noiseless = true;
    cfg.storage_times = vec![0.0];
    let out = run(&cfg).unwrap();
    let oam_memory::harness::Summary::Tomography(points) = &out.summary else {
        panic!("tomography summary expected");
    };
    assert!(points[0].f_abs > 0.9999, "F = {}", points[0].f_abs);
}
