// Binary phase holograms diffracted by a lens into OAM superpositions.
//
// The qubit hologram turns a Gaussian into `|L⟩ + |R⟩`; the qutrit hologram
// mixes in `|G⟩`. Both print their mode content and conversion efficiency.

use std::f64::consts::PI;

use oam_memory::holography::{
    diffract_gaussian, matched_input_grid, mode_content, output_waist, qubit_hologram, qutrit_hologram,
};
use oam_memory::modes::qubit_state;
use oam_memory::tomography::{fidelity, DensityMatrix};

const LAMBDA: f64 = 795e-9;
const FOCAL: f64 = 0.5;
const W_IN: f64 = 1.05e-3;

pub fn run_example() -> oam_memory::Result<()> {
    let w_out = output_waist(W_IN, FOCAL, LAMBDA);
    println!("Fourier-plane waist {:.1} um", w_out * 1e6);

    let grid = matched_input_grid(256, W_IN, FOCAL, LAMBDA)?;
    let holo = qubit_hologram(2, grid)?;
    let out = diffract_gaussian(&holo, W_IN, FOCAL, LAMBDA)?;
    let content = mode_content(&out, w_out, 2)?;
    let got = DensityMatrix::pure(&content.qubit_state(2)?);
    let want = DensityMatrix::pure(&qubit_state(PI / 2.0, 0.0, 2)?);
    println!(
        "l=2 qubit: power in {{L,G,R}} {:.3}, |G| {:.1e}, fidelity to L+R {:.6}",
        content.efficiency,
        content.amplitudes[1].norm(),
        fidelity(&got, &want)?
    );

    let holo3 = qutrit_hologram(1, W_IN, grid)?;
    let out3 = diffract_gaussian(&holo3, W_IN, FOCAL, LAMBDA)?;
    let c3 = mode_content(&out3, w_out, 1)?;
    let s = c3.state(1)?;
    println!("l=1 qutrit: power in {{L,G,R}} {:.3}", c3.efficiency);
    for (label, a) in ["L", "G", "R"].iter().zip(s.coeffs()) {
        println!("  {label}: |a| = {:.4}, arg = {:+.4} rad", a.norm(), a.arg());
    }

    let pixelated = holo.pixelated(grid.pitch() * 4.0)?;
    let coarse = mode_content(&diffract_gaussian(&pixelated, W_IN, FOCAL, LAMBDA)?, w_out, 2)?;
    println!("4x coarser SLM pixels: power in subspace {:.3}", coarse.efficiency);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
