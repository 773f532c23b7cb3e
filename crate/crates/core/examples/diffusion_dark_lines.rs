// Thermal diffusion blurs the stored pattern: the qubit dark lines stay put,
// the qutrit nodal line drifts toward -x.

use std::f64::consts::PI;

use num_complex::Complex64;
use oam_memory::decoherence::{diffuse, nodal_line_position, qutrit_nodal_shift, DiffusionParams};
use oam_memory::fieldgrid::{overlap, GridSpec};
use oam_memory::modes::{qubit_state, synthesize, QuditState};
use oam_memory::polariton::{write, MemoryParams};

pub fn run_example() -> oam_memory::Result<()> {
    let params = MemoryParams::default();
    let p = DiffusionParams::default();
    let w0 = 120e-6;
    let grid = GridSpec::new(256, 2e-3)?;
    let lambda = params.signal_wavelength;

    let qubit = write(&synthesize(&qubit_state(PI / 2.0, 0.0, 2)?, w0, grid, lambda)?, &params);
    let one = Complex64::new(1.0, 0.0);
    let qutrit = write(&synthesize(&QuditState::qutrit(one, one, one, 1)?, w0, grid, lambda)?, &params);
    println!("qutrit nodal line at t=0: {:.2} um", nodal_line_position(qutrit.as_field())? * 1e6);

    for t in [100e-6, 200e-6, 300e-6, 400e-6, 500e-6] {
        let q = diffuse(&qubit, &p, t)?;
        // intensity on the diagonal dark line relative to the peak
        let f = q.as_field();
        let peak = f.intensity().into_iter().fold(0.0, f64::max);
        let dark = (0..grid.n)
            .map(|k| f.at(k, k).norm_sqr())
            .fold(0.0, f64::max);
        let shift = qutrit_nodal_shift(&qutrit, &diffuse(&qutrit, &p, t)?)?;
        println!(
            "t = {:>3.0} us  sigma = {:>5.1} um  qubit dark/peak = {:.1e}  overlap {:.4}  qutrit shift {:+.2} um",
            t * 1e6,
            p.variance(t).sqrt() * 1e6,
            dark / peak,
            overlap(qubit.as_field(), f)?,
            shift * 1e6
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
