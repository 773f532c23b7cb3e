// Writing a signal field into the ensemble and reading it back.

use oam_memory::fieldgrid::{overlap, GridSpec};
use oam_memory::modes::{qubit_state, synthesize};
use oam_memory::polariton::{group_velocity, mixing_angle, polariton_trajectory, read, write, MemoryParams};

pub fn run_example() -> oam_memory::Result<()> {
    let params = MemoryParams::default();
    params.validate()?;

    println!("group velocity with coupling on: {:.0} m/s", group_velocity(&params, -1e-6));
    let times: Vec<f64> = (0..=5).map(|k| k as f64 * 50e-9).collect();
    for (t, p) in times.iter().zip(polariton_trajectory(&params, &times, 1.0)) {
        println!(
            "t = {:>5.0} ns  theta = {:.4}  photon part {:.4}  atom part {:.4}",
            t * 1e9,
            p.theta,
            p.field_part,
            p.matter_part
        );
    }
    println!("theta after switch-off: {:.6} (pi/2 = {:.6})", mixing_angle(&params, 1e-6), std::f64::consts::FRAC_PI_2);

    let w0 = 120e-6;
    let grid = GridSpec::for_modes(128, w0, 2)?;
    let input = synthesize(&qubit_state(1.0, 0.5, 2)?, w0, grid, params.signal_wavelength)?;
    let sw = write(&input, &params);
    let d = sw.diffraction();
    println!("diffraction phase q²D/k = {:.2e} (flagged: {})", d.max_phase, d.flagged);
    let out = read(&sw, &params);
    println!("read(write(f)) overlap = {:.15}", overlap(&input, &out)?);

    // a tilted coupling beam gives the spin wave a longitudinal wave vector
    let tilted = MemoryParams {
        beam_angle: 2e-3,
        ..params
    };
    println!("delta k at 2 mrad: {:.1} rad/m", tilted.delta_k());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
