// Writes PGM images of a hologram, its diffracted field and the field after
// 500 us of storage.

use oam_memory::harness::{run, ExperimentConfig, ExperimentKind, Source};

pub fn run_example() -> oam_memory::Result<()> {
    let mut cfg = ExperimentConfig::new(ExperimentKind::FieldRender, 1);
    cfg.qudit.source = Source::Hologram { w_in: 1.05e-3, focal: 0.5 };
    cfg.storage_times = vec![0.0, 500e-6];
    let result = run(&cfg)?;
    let dir = std::env::temp_dir().join("oam_memory_render_example");
    result.write_to(&dir)?;
    for o in &result.outputs {
        println!("{:<18} {:>8} bytes", o.name, o.bytes.len());
    }
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
