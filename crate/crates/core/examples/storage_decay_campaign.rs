// A config-driven storage-time campaign, as the `oamem decay` command runs it.

use oam_memory::harness::{run, ExperimentConfig, Summary};

const CONFIG: &str = r#"
experiment = "storage_decay"
seed = 2024
storage_times = [0.0, 100e-6, 200e-6, 300e-6, 400e-6]

[qudit]
l = 1
coefficients = [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]]

[grid]
n = 64

[counting]
detections_per_basis = 2e4
"#;

pub fn run_example() -> oam_memory::Result<()> {
    let cfg = ExperimentConfig::from_toml_str(CONFIG)?;
    let result = run(&cfg)?;
    if let Summary::Decay(rows) = &result.summary {
        println!("   t_us     eta    F_rel   F_abs   F_classical  band_high");
        for r in rows {
            println!(
                "{:>7.0}  {:.4}  {:.4}  {:.4}  {:.4}       {:.4}",
                r.t_s * 1e6,
                r.eta,
                r.f_rel,
                r.f_abs,
                r.f_classical,
                r.band.1
            );
        }
    }

    let again = run(&cfg)?;
    assert_eq!(result.outputs, again.outputs);
    println!("\nsame seed, same bytes; manifest:\n{}", result.manifest_json()?);

    let dir = std::env::temp_dir().join("oam_memory_decay_example");
    result.write_to(&dir)?;
    println!("written to {}", dir.display());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
