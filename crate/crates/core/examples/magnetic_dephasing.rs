// Clock versus field-sensitive storage in a residual quadrupole field.

use num_complex::Complex64;
use oam_memory::decoherence::{diffuse, magnetic_dephase, DiffusionParams, FieldMap, MagneticModel};
use oam_memory::fieldgrid::{overlap, GridSpec};
use oam_memory::modes::{synthesize, QuditState};
use oam_memory::polariton::{write, MemoryParams};

pub fn run_example() -> oam_memory::Result<()> {
    let params = MemoryParams::default();
    let w0 = 120e-6;
    let grid = GridSpec::for_modes(128, w0, 1)?;
    let one = Complex64::new(1.0, 0.0);
    let state = QuditState::qutrit(one, one, one, 1)?;
    let stored = write(&synthesize(&state, w0, grid, params.signal_wavelength)?, &params);

    let clock = MagneticModel::default();
    let sensitive = clock.clone().non_clock();
    let tilted = MagneticModel {
        field_map: FieldMap::LinearGradient { gx: 1e-3, gy: 0.0 },
        ..sensitive.clone()
    };
    let diffusion = DiffusionParams::default();

    println!("   t_us   clock   m_F=1   m_F=1+gradient   diffusion");
    for t in [0.0, 5e-6, 10e-6, 20e-6, 50e-6, 100e-6] {
        let o = |m: &MagneticModel| -> oam_memory::Result<f64> {
            overlap(stored.as_field(), magnetic_dephase(&stored, m, t)?.as_field())
        };
        let d = overlap(stored.as_field(), diffuse(&stored, &diffusion, t)?.as_field())?;
        println!(
            "{:>7.0}  {:.4}  {:.4}  {:.4}           {:.4}",
            t * 1e6,
            o(&clock)?,
            o(&sensitive)?,
            o(&tilted)?,
            d
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
