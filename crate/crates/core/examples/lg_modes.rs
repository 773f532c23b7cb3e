// Laguerre-Gaussian modes, qudit synthesis and decomposition.
//
// ```text
// cargo run --example lg_modes
// ```

use std::f64::consts::PI;

use num_complex::Complex64;
use oam_memory::fieldgrid::{inner_product, GridSpec};
use oam_memory::modes::{decompose, lg_field, qubit_state, synthesize, LgModeSpec, QuditState};

const LAMBDA: f64 = 795e-9;

pub fn run_example() -> oam_memory::Result<()> {
    let w0 = 120e-6;
    let grid = GridSpec::for_modes(128, w0, 2)?;
    println!("grid: {} px, {:.3} mm, pitch {:.2} um", grid.n, grid.extent * 1e3, grid.pitch() * 1e6);

    // Gram matrix of l = -2..=2
    let modes: Vec<_> = (-2..=2)
        .map(|l| lg_field(LgModeSpec::new(l, w0)?, grid, LAMBDA))
        .collect::<Result<_, _>>()?;
    let mut worst = 0.0f64;
    for (i, a) in modes.iter().enumerate() {
        for (j, b) in modes.iter().enumerate() {
            let ip = inner_product(a, b)?;
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - Complex64::new(want, 0.0)).norm());
        }
    }
    println!("max |<LG_i|LG_j> - delta_ij| = {worst:.2e}");

    let psi = qubit_state(PI / 3.0, PI / 4.0, 2)?;
    let field = synthesize(&psi, w0, grid, LAMBDA)?;
    let amps = decompose(&field, w0, &psi.charges())?;
    for (c, a) in psi.coeffs().iter().zip(&amps) {
        println!("coefficient {c:.6}  recovered {a:.6}");
    }

    let i = Complex64::i();
    let qutrit = QuditState::qutrit(Complex64::new(1.0, 0.0), i, Complex64::new(-1.0, 0.0), 1)?;
    let f3 = synthesize(&qutrit, w0, GridSpec::for_modes(128, w0, 1)?, LAMBDA)?;
    println!("qutrit field norm² = {:.9}", f3.norm_sqr());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
