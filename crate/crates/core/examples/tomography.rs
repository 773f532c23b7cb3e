// Qubit and qutrit state tomography from simulated counts.

use num_complex::Complex64;
use oam_memory::measurement::{simulate_counts, CountConfig};
use oam_memory::modes::QuditState;
use oam_memory::rng::StreamSeed;
use oam_memory::tomography::{
    fidelity, fidelity_spread, probabilities, reconstruct_detailed, report, trace_distance, DensityMatrix,
    ProjectionSet, ReconstructOptions,
};

fn tomograph(state: &QuditState, pulses: u64, seed: u64, ml: bool) -> oam_memory::Result<()> {
    let set = ProjectionSet::for_dim(state.dim())?;
    let truth = DensityMatrix::pure(state);
    let cfg = CountConfig {
        mean_photons: 1.0,
        efficiency: 1.0,
        pulses,
        ..CountConfig::default()
    };
    let records = probabilities(&truth, &set)?
        .into_iter()
        .enumerate()
        .map(|(i, p)| simulate_counts(set.labels()[i].clone(), p, &cfg, StreamSeed::new(seed, &[i as u64])))
        .collect::<oam_memory::Result<Vec<_>>>()?;
    let opts = ReconstructOptions {
        max_likelihood: ml,
        ..Default::default()
    };
    let rec = reconstruct_detailed(&records, &set, opts)?;
    println!("{}", report(&set, &rec, Some(&truth))?);
    println!("trace distance {:.2e}", trace_distance(&rec.rho, &truth)?);
    let (mean, sd) = fidelity_spread(&records, &set, &truth, opts, 50, StreamSeed::new(seed, &[99]))?;
    println!("resampled fidelity {mean:.5} ± {sd:.5}\n");
    Ok(())
}

pub fn run_example() -> oam_memory::Result<()> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    tomograph(&QuditState::new(vec![one, i], 2)?, 20_000, 3, false)?;
    tomograph(&QuditState::qutrit(one, -one, one, 1)?, 20_000, 4, true)?;

    let mixed = DensityMatrix::maximally_mixed(2)?;
    println!("F(I/2, |L>) = {:.6}", fidelity(&mixed, &DensityMatrix::pure(&QuditState::new(vec![one, 0.0 * one], 1)?))?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
