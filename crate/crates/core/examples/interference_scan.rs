// Projection counting: equatorial interference fringes, the meridian sweep and
// the background/transmittance corrections.

use std::f64::consts::PI;

use oam_memory::measurement::{
    correct_transmittance, deviation_variance, fit_visibility, interference_scan, meridian_point, standard_betas,
    subtract_background, CountConfig, TransmittanceTable,
};
use oam_memory::modes::equator_state;
use oam_memory::rng::StreamSeed;

pub fn run_example() -> oam_memory::Result<()> {
    let state = equator_state(0.0, 2)?;
    let noiseless = CountConfig {
        noiseless: true,
        ..CountConfig::default()
    };
    let fit = fit_visibility(&interference_scan(&state, &standard_betas(), &noiseless, StreamSeed::new(1, &[0]))?)?;
    println!("noiseless: V = {:.6}, delta = {:.2e}", fit.visibility, fit.delta);

    let noisy = CountConfig {
        mean_photons: 1.6,
        efficiency: 0.05,
        pulses: 200_000,
        background_rate: 2e-4,
        ..CountConfig::default()
    };
    let raw = interference_scan(&state, &standard_betas(), &noisy, StreamSeed::new(1, &[1]))?;
    let corrected = subtract_background(&raw);
    println!(
        "with background: raw V = {:.4}, corrected V = {:.4}",
        fit_visibility(&raw)?.visibility,
        fit_visibility(&corrected)?.visibility
    );

    // uneven projection optics, undone by relative transmittance
    let table = TransmittanceTable::new(
        corrected
            .iter()
            .enumerate()
            .map(|(k, r)| (r.basis_id.clone(), 1.0 - 0.02 * (k % 3) as f64)),
    )?;
    let fixed = correct_transmittance(&corrected, &table)?;
    println!("after transmittance correction: V = {:.4}", fit_visibility(&fixed)?.visibility);

    let sweep = |pulses: u64, seed: u64| -> oam_memory::Result<Vec<(f64, f64)>> {
        let cfg = CountConfig { pulses, ..noisy };
        (1..12)
            .map(|k| meridian_point(k as f64 * PI / 12.0, 2, &cfg, StreamSeed::new(seed, &[k])))
            .collect()
    };
    for pulses in [20_000, 200_000, 2_000_000] {
        println!("meridian, {pulses:>9} pulses: var(gamma_r - gamma_w) = {:.2e}", deviation_variance(&sweep(pulses, 9)?));
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
