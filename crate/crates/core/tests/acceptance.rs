// Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use oam_memory::bounds::{classical_limit, poisson_weighted_limit, threshold_band, PhotonStatistics};
use oam_memory::decoherence::{
    diffuse, diffuse_field, nodal_line_position, qutrit_nodal_shift, retrieval_efficiency, DiffusionParams,
    EfficiencyModel,
};
use oam_memory::fieldgrid::{overlap, GridSpec, TransverseField};
use oam_memory::harness::{run, ExperimentConfig, ExperimentKind, Summary, DEFAULT_WAIST};
use oam_memory::measurement::{fit_visibility, interference_scan, simulate_counts, standard_betas, CountConfig};
use oam_memory::modes::{equator_state, lg_field, qubit_state, synthesize, LgModeSpec, QuditState};
use oam_memory::polariton::{read, write, MemoryParams};
use oam_memory::rng::StreamSeed;
use oam_memory::tomography::{
    fidelity, probabilities, random_state, reconstruct, DensityMatrix, ProjectionSet, ReconstructOptions,
};
use rand::Rng;

type Check = Result<String, String>;

struct Outcome {
    id: &'static str,
    passed: bool,
}

fn criterion(id: &'static str, budget: Duration, f: impl FnOnce() -> Check) -> Outcome {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if elapsed > budget {
        passed = false;
        detail = format!("{detail}; over budget");
    }
    println!(
        "criterion {id}: {}  {detail}  [{:.3} s / {:.3} s]",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs_f64()
    );
    Outcome { id, passed }
}

fn check(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: oam_memory::Error) -> String {
    format!("error: {e}")
}

fn eta(t: f64) -> f64 {
    retrieval_efficiency(&EfficiencyModel::measured(), t)
}

// Independent brute-force limit: 200 Poisson terms from log-factorials.
fn brute_classical(nbar: f64, eta: f64) -> f64 {
    let p: Vec<f64> = (0..200)
        .map(|n| {
            let lf: f64 = (1..=n).map(|k| (k as f64).ln()).sum();
            (-nbar + n as f64 * nbar.ln() - lf).exp()
        })
        .collect();
    let budget = eta * (1.0 - p[0]);
    let tail = |k: usize| p[k + 1..].iter().sum::<f64>();
    let nmin = (0..199).find(|&k| tail(k) <= budget).unwrap();
    let cf = |n: usize| (n as f64 + 1.0) / (n as f64 + 2.0);
    let upper: f64 = (nmin + 1..200).map(|n| cf(n) * p[n]).sum();
    (cf(nmin) * (budget - tail(nmin)) + upper) / budget
}

fn c1() -> Check {
    let f = poisson_weighted_limit(1e-6).map_err(err)?;
    check((f - 2.0 / 3.0).abs() < 1e-6, format!("F_co(1e-6) = {f:.9}"))
}

fn c2() -> Check {
    let e = eta(500e-6);
    let f = classical_limit(1.6, e).map_err(err)?.f_classical;
    let oracle = brute_classical(1.6, e);
    if (f - oracle).abs() > 1e-12 {
        return Err(format!("F_classical {f} disagrees with brute force {oracle}"));
    }
    check(
        (0.865..=0.875).contains(&f),
        format!("F_classical(1.6, eta(500 us) = {e:.5}) = {f:.5}, brute force {oracle:.5}, target [0.865, 0.875]"),
    )
}

fn c2_context() {
    let stats = PhotonStatistics::new(1.6, 0.4).unwrap();
    for t in [400e-6, 500e-6] {
        let e = eta(t);
        let (lo, hi) = threshold_band(stats, e).unwrap();
        println!(
            "  note: t = {:.0} us  eta = {e:.5}  F_classical(1.6) = {:.5}  band(1.6 ± 0.4) = [{lo:.5}, {hi:.5}]",
            t * 1e6,
            classical_limit(1.6, e).unwrap().f_classical
        );
    }
}

fn c3() -> Check {
    let mut cfg = ExperimentConfig::new(ExperimentKind::StorageDecay, 400);
    cfg.storage_times = vec![400e-6];
    cfg.decoherence.magnetic = false;
    cfg.photons = PhotonStatistics::new(1.6, 0.4).map_err(err)?;
    cfg.counting.detections_per_basis = 1e4;
    let result = run(&cfg).map_err(err)?;
    let Summary::Decay(rows) = &result.summary else {
        return Err("no decay rows".into());
    };
    let r = rows[0];
    let (_, high) = threshold_band(cfg.photons, cfg.eta(400e-6)).map_err(err)?;
    check(
        r.f_abs >= high + 0.01 && (r.band.1 - high).abs() < 1e-12,
        format!("F(400 us) = {:.5}, band high = {high:.5}, margin {:+.5}", r.f_abs, r.f_abs - high),
    )
}

// Real-space convolution with the periodic Gaussian kernel, truncated at 10σ.
fn convolve_direct(field: &TransverseField, sigma: f64) -> TransverseField {
    let g = *field.grid();
    let n = g.n as isize;
    let h = g.pitch();
    let reach = ((10.0 * sigma / h).ceil() as isize).min(n / 2);
    let norm = h * h / (2.0 * PI * sigma * sigma);
    let kernel: Vec<f64> = (-reach..=reach)
        .map(|d| (-((d as f64 * h).powi(2)) / (2.0 * sigma * sigma)).exp())
        .collect();
    let src = field.values();
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    for r in 0..n {
        for c in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for dr in -reach..=reach {
                let kr = kernel[(dr + reach) as usize];
                let rr = (r - dr).rem_euclid(n) as usize;
                for dc in -reach..=reach {
                    let cc = (c - dc).rem_euclid(n) as usize;
                    acc += src[rr * g.n + cc] * (kr * kernel[(dc + reach) as usize]);
                }
            }
            out[(r * n + c) as usize] = acc * norm;
        }
    }
    TransverseField::new(g, out, field.wavelength()).unwrap()
}

fn c4() -> Check {
    let grid = GridSpec::new(128, 1.024e-3).map_err(err)?;
    let field = lg_field(LgModeSpec::new(2, 80e-6).map_err(err)?, grid, 795e-9).map_err(err)?;
    let p = DiffusionParams {
        temperature: 100e-6,
        ..DiffusionParams::default()
    };
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for t in [100e-6, 500e-6] {
        let spectral = diffuse_field(&field, &p, t).map_err(err)?;
        let direct = convolve_direct(&field, p.variance(t).sqrt());
        let diff: f64 = spectral
            .values()
            .iter()
            .zip(direct.values())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let rel = (diff / direct.norm_sqr() * direct.grid().pixel_area()).sqrt();
        worst = worst.max(rel);
        parts.push(format!("t = {:.0} us: {rel:.2e}", t * 1e6));
    }
    check(worst < 1e-6, format!("relative L2 {}", parts.join(", ")))
}

fn c5() -> Check {
    let params = MemoryParams::default();
    let p = DiffusionParams::default();
    let lambda = params.signal_wavelength;
    let grid = GridSpec::for_modes(128, DEFAULT_WAIST, 2).map_err(err)?;
    let qubit = write(
        &synthesize(&qubit_state(PI / 2.0, 0.0, 2).map_err(err)?, DEFAULT_WAIST, grid, lambda).map_err(err)?,
        &params,
    );
    let after = diffuse(&qubit, &p, 500e-6).map_err(err)?;
    let f = after.as_field();
    let peak = f.intensity().into_iter().fold(0.0, f64::max);
    // the l = 2 dark lines of |L⟩+|R⟩ lie on both diagonals through the axis
    let (c, _) = grid.center_index();
    let dark = (1..grid.n)
        .flat_map(|k| [f.at(k, k), f.at(k, 2 * c - k)])
        .map(|v| v.norm_sqr())
        .fold(0.0, f64::max);
    let ratio = dark / peak;

    let qgrid = GridSpec::for_modes(128, DEFAULT_WAIST, 1).map_err(err)?;
    let one = Complex64::new(1.0, 0.0);
    let qutrit = write(
        &synthesize(&QuditState::qutrit(one, one, one, 1).map_err(err)?, DEFAULT_WAIST, qgrid, lambda)
            .map_err(err)?,
        &params,
    );
    let x0 = nodal_line_position(qutrit.as_field()).map_err(err)?;
    let shift = qutrit_nodal_shift(&qutrit, &diffuse(&qutrit, &p, 500e-6).map_err(err)?).map_err(err)?;
    check(
        ratio < 1e-6 && shift < 0.0,
        format!(
            "qubit dark/peak = {ratio:.1e}; qutrit nodal line {:.2} um moves {:+.2} um",
            x0 * 1e6,
            shift * 1e6
        ),
    )
}

fn c6() -> Check {
    let params = MemoryParams::default();
    let mut rng = StreamSeed::new(6, &[]).rng();
    let mut worst: f64 = 1.0;
    for k in 0..20 {
        let dim = 2 + k % 2;
        let l = rng.random_range(1..=3);
        let w0 = rng.random_range(60e-6..160e-6);
        let state = random_state(dim, l, &mut rng).map_err(err)?;
        let grid = GridSpec::for_modes(128, w0, l).map_err(err)?;
        let field = synthesize(&state, w0, grid, params.signal_wavelength).map_err(err)?;
        let back = read(&write(&field, &params), &params);
        worst = worst.min(overlap(&field, &back).map_err(err)?);
    }
    check(worst >= 1.0 - 1e-10, format!("min overlap over 20 fields = 1 - {:.1e}", 1.0 - worst))
}

fn tomograph(truth: &DensityMatrix, set: &ProjectionSet, cfg: &CountConfig, seed: StreamSeed) -> Result<f64, String> {
    let records = probabilities(truth, set)
        .map_err(err)?
        .into_iter()
        .enumerate()
        .map(|(i, p)| simulate_counts(set.labels()[i].clone(), p, cfg, seed.child(i as u64)))
        .collect::<oam_memory::Result<Vec<_>>>()
        .map_err(err)?;
    let rho = reconstruct(&records, set, ReconstructOptions::default()).map_err(err)?;
    fidelity(&rho, truth).map_err(err)
}

fn c7() -> Check {
    let mut rng = StreamSeed::new(7, &[0]).rng();
    let base = CountConfig {
        mean_photons: 1.0,
        efficiency: 1.0,
        pulses: 100_000,
        ..CountConfig::default()
    };
    let noiseless = CountConfig { noiseless: true, ..base };
    let mut parts = Vec::new();
    let mut ok = true;
    for dim in [2, 3] {
        let set = ProjectionSet::for_dim(dim).map_err(err)?;
        let mut clean = f64::INFINITY;
        let mut noisy = Vec::new();
        for k in 0..100u64 {
            let truth = DensityMatrix::pure(&random_state(dim, 1, &mut rng).map_err(err)?);
            let seed = StreamSeed::new(7, &[dim as u64, k]);
            clean = clean.min(tomograph(&truth, &set, &noiseless, seed)?);
            noisy.push(tomograph(&truth, &set, &base, seed)?);
        }
        noisy.sort_by(f64::total_cmp);
        let median = 0.5 * (noisy[49] + noisy[50]);
        ok &= clean >= 0.9999 && median >= 0.99;
        parts.push(format!("d = {dim}: noiseless min F {clean:.6}, Poisson median F {median:.5}"));
    }
    check(ok, parts.join("; "))
}

fn c8() -> Check {
    let cfg = CountConfig {
        noiseless: true,
        ..CountConfig::default()
    };
    let state = equator_state(0.0, 2).map_err(err)?;
    let records = interference_scan(&state, &standard_betas(), &cfg, StreamSeed::new(8, &[])).map_err(err)?;
    let fit = fit_visibility(&records).map_err(err)?;
    let scale = cfg.expected(0.5);
    let rms = (records
        .iter()
        .map(|r| (r.counts / scale - (1.0 + r.beta.unwrap().cos())).powi(2))
        .sum::<f64>()
        / records.len() as f64)
        .sqrt();

    let mut mcfg = ExperimentConfig::new(ExperimentKind::MeridianSweep, 8);
    mcfg.counting.noiseless = true;
    let Summary::Meridian(rows) = run(&mcfg).map_err(err)?.summary else {
        return Err("no meridian rows".into());
    };
    let dev = rows.iter().map(|r| (r.gamma_r - r.gamma_w).abs()).fold(0.0, f64::max);

    let mut scfg = ExperimentConfig::new(ExperimentKind::InterferenceScan, 8);
    scfg.counting.noiseless = true;
    let Summary::Scan { fit: hfit, .. } = run(&scfg).map_err(err)?.summary else {
        return Err("no scan fit".into());
    };
    check(
        fit.visibility >= 0.999 && rms < 1e-9 && dev < 1e-12 && hfit.visibility >= 0.999,
        format!(
            "V = {:.9} (stored field {:.6}), shape RMS {rms:.1e}, max |gamma_r - gamma_w| = {dev:.1e} over {} points",
            fit.visibility,
            hfit.visibility,
            rows.len()
        ),
    )
}

fn c9() -> Check {
    let r = eta(400e-6) / eta(10e-6);
    check((r - 0.44).abs() < 1e-3, format!("eta(400 us)/eta(10 us) = {r:.5}"))
}

fn c10() -> Check {
    let kinds = [
        ExperimentKind::InterferenceScan,
        ExperimentKind::MeridianSweep,
        ExperimentKind::StorageDecay,
        ExperimentKind::Tomography,
        ExperimentKind::BoundsTable,
        ExperimentKind::FieldRender,
    ];
    let mut files = 0;
    for kind in kinds {
        let mut cfg = ExperimentConfig::new(kind, 10);
        if kind == ExperimentKind::Tomography {
            cfg.qudit.l = 1;
            cfg.qudit.coefficients = vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]];
        }
        let a = run(&cfg).map_err(err)?;
        let b = run(&cfg).map_err(err)?;
        if a.outputs != b.outputs || a.manifest_json().map_err(err)? != b.manifest_json().map_err(err)? {
            return Err(format!("{} differs between runs", kind.name()));
        }
        files += a.outputs.len();
    }
    Ok(format!("6 campaigns, {files} files byte-identical on re-run"))
}

fn main() {
    let ms = Duration::from_millis;
    let outcomes = [
        criterion("1", ms(1), c1),
        criterion("2", ms(1000), c2),
        {
            c2_context();
            criterion("3", ms(120_000), c3)
        },
        criterion("4", ms(10_000), c4),
        criterion("5", ms(10_000), c5),
        criterion("6", ms(5_000), c6),
        criterion("7", ms(60_000), c7),
        criterion("8", ms(10_000), c8),
        criterion("9", ms(1), c9),
        criterion("10", ms(300_000), c10),
    ];
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!(
        "acceptance: {} of {} criteria pass",
        outcomes.len() - failed.len(),
        outcomes.len()
    );
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
