// Classical (measure-and-resend) fidelity limits for weak coherent pulses.

use oam_memory::bounds::{classical_limit, nmin, poisson_weighted_limit, threshold_band, PhotonStatistics};
use oam_memory::decoherence::{retrieval_efficiency, EfficiencyModel};

pub fn run_example() -> oam_memory::Result<()> {
    for nbar in [1e-6, 0.5, 1.0, 1.6, 2.0] {
        println!("n = {nbar:<6}  F_co = {:.6}", poisson_weighted_limit(nbar)?);
    }

    let model = EfficiencyModel::measured();
    println!("\nefficiency fit: eta0 = {:.4}, tau = {:.1} us", model.eta0, model.tau * 1e6);
    let stats = PhotonStatistics::new(1.6, 0.4)?;
    println!("  t_us     eta   N_min  F_classical  band");
    for t in [10e-6, 100e-6, 200e-6, 300e-6, 400e-6, 500e-6] {
        let eta = retrieval_efficiency(&model, t);
        let b = classical_limit(stats.mean, eta)?;
        let (lo, hi) = threshold_band(stats, eta)?;
        println!(
            "{:>6.0}  {:.4}  {:>5}  {:.4}       [{:.4}, {:.4}]",
            t * 1e6,
            eta,
            nmin(stats.mean, eta)?,
            b.f_classical,
            lo,
            hi
        );
    }
    let r = retrieval_efficiency(&model, 400e-6) / retrieval_efficiency(&model, 10e-6);
    println!("eta(400 us)/eta(10 us) = {r:.4}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(e.exit_code());
    }
}
