//! Photon counting and the reductions applied to count data: interference
//! visibility, polar-angle retrieval, background subtraction and transmittance
//! correction.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::{Read, Write};

use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modes::{equator_state, OamBasis, QuditState};
use crate::rng::StreamSeed;

/// Integrated detector counts for one projection setting.
#[derive(Debug, Clone, PartialEq)]
pub struct CountRecord {
    pub basis_id: String,
    /// Equatorial phase of the projector for interference scans.
    pub beta: Option<f64>,
    /// Counts; integral when raw, fractional after corrections.
    pub counts: f64,
    pub background: f64,
    /// Acquisition time, seconds.
    pub acquisition: f64,
    /// Set when background subtraction had to clamp a negative result to zero.
    pub clamped: bool,
}

impl CountRecord {
    pub fn new(basis_id: impl Into<String>, counts: f64, background: f64, acquisition: f64) -> Self {
        Self {
            basis_id: basis_id.into(),
            beta: None,
            counts,
            background,
            acquisition,
            clamped: false,
        }
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }
}

/// Source brightness, memory efficiency and detection settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountConfig {
    /// Mean photon number per pulse.
    pub mean_photons: f64,
    /// End-to-end efficiency applied to every pulse.
    pub efficiency: f64,
    pub pulses: u64,
    /// Background counts per pulse.
    #[serde(default)]
    pub background_rate: f64,
    /// Pulse repetition rate, Hz; only used to report acquisition times.
    #[serde(default = "default_rep_rate")]
    pub repetition_rate: f64,
    /// Report expected counts instead of Poisson draws.
    #[serde(default)]
    pub noiseless: bool,
}

fn default_rep_rate() -> f64 {
    1e4
}

impl Default for CountConfig {
    fn default() -> Self {
        Self {
            mean_photons: 1.6,
            efficiency: 1.0,
            pulses: 1_000_000,
            background_rate: 0.0,
            repetition_rate: default_rep_rate(),
            noiseless: false,
        }
    }
}

impl CountConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.efficiency >= 0.0 && self.efficiency <= 1.0) {
            return Err(Error::Domain(format!("efficiency {} not in [0, 1]", self.efficiency)));
        }
        if !(self.mean_photons.is_finite() && self.mean_photons >= 0.0) {
            return Err(Error::Domain("mean photon number must be >= 0".into()));
        }
        if !(self.background_rate.is_finite() && self.background_rate >= 0.0) {
            return Err(Error::Domain("background rate must be >= 0".into()));
        }
        if !(self.repetition_rate.is_finite() && self.repetition_rate > 0.0) {
            return Err(Error::Domain("repetition rate must be > 0".into()));
        }
        Ok(())
    }

    pub fn acquisition(&self) -> f64 {
        self.pulses as f64 / self.repetition_rate
    }

    /// Expected signal-plus-background counts for projection probability `prob`.
    pub fn expected(&self, prob: f64) -> f64 {
        self.pulses as f64 * (self.mean_photons * self.efficiency * prob + self.background_rate)
    }
}

fn poisson(mean: f64, rng: &mut impl rand::Rng) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    Poisson::new(mean).map(|d| d.sample(rng)).unwrap_or(0.0)
}

/// Counts `~ Poisson(pulses·(n̄·η·p + bg))` plus an independent background run of
/// the same length, both drawn from `seed`'s stream.
pub fn simulate_counts(
    basis_id: impl Into<String>,
    prob: f64,
    cfg: &CountConfig,
    seed: StreamSeed,
) -> Result<CountRecord> {
    if !(0.0..=1.0 + 1e-12).contains(&prob) {
        return Err(Error::Domain(format!("probability {prob} not in [0, 1]")));
    }
    cfg.validate()?;
    let prob = prob.min(1.0);
    let bg_mean = cfg.pulses as f64 * cfg.background_rate;
    let (counts, background) = if cfg.noiseless {
        (cfg.expected(prob), bg_mean)
    } else {
        let mut rng = seed.rng();
        let c = poisson(cfg.expected(prob), &mut rng);
        let b = poisson(bg_mean, &mut rng);
        (c, b)
    };
    Ok(CountRecord::new(basis_id, counts, background, cfg.acquisition()))
}

/// Born probability of projecting `state` onto `target`.
pub fn projection_probability(state: &QuditState, target: &QuditState) -> Result<f64> {
    Ok(target.inner(state)?.norm_sqr())
}

/// `β = k·π/6` for `k = 0..12`.
pub fn standard_betas() -> Vec<f64> {
    (0..12).map(|k| k as f64 * PI / 6.0).collect()
}

/// Counts for projectors `(|L⟩ + e^{iβ}|R⟩)/√2` scanned over `betas`.
pub fn interference_scan(
    state: &QuditState,
    betas: &[f64],
    cfg: &CountConfig,
    seed: StreamSeed,
) -> Result<Vec<CountRecord>> {
    if state.dim() != 2 {
        return Err(Error::DimMismatch(state.dim(), 2));
    }
    betas
        .iter()
        .enumerate()
        .map(|(k, &beta)| {
            let target = equator_state(beta, state.charge())?;
            let p = projection_probability(state, &target)?;
            Ok(simulate_counts(format!("beta{k:02}"), p, cfg, seed.child(k as u64))?.with_beta(beta))
        })
        .collect()
}

/// Least-squares fit of `N(β) = N₀(1 + δ + cos β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityFit {
    pub n0: f64,
    pub delta: f64,
    /// `1/(1+δ)`, clamped to `[0, 1]`.
    pub visibility: f64,
    /// RMS of the fit residuals, counts.
    pub residual: f64,
}

pub fn fit_visibility(records: &[CountRecord]) -> Result<VisibilityFit> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|r| {
            r.beta
                .map(|b| (b, r.counts))
                .ok_or_else(|| Error::FitDegenerate(format!("record `{}` has no β", r.basis_id)))
        })
        .collect::<Result<_>>()?;
    let mut distinct: Vec<f64> = pts.iter().map(|p| p.0.rem_euclid(2.0 * PI)).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if distinct.len() < 4 {
        return Err(Error::FitDegenerate(format!(
            "{} distinct β values, need 4",
            distinct.len()
        )));
    }
    // linear model N = a + b·cos β with a = N₀(1+δ), b = N₀
    let n = pts.len() as f64;
    let (mut sc, mut scc, mut sy, mut scy) = (0.0, 0.0, 0.0, 0.0);
    for &(beta, y) in &pts {
        let c = beta.cos();
        sc += c;
        scc += c * c;
        sy += y;
        scy += c * y;
    }
    let det = n * scc - sc * sc;
    if det.abs() <= 1e-12 * n * scc.max(1.0) {
        return Err(Error::FitDegenerate("cos β does not vary".into()));
    }
    let a = (scc * sy - sc * scy) / det;
    let b = (n * scy - sc * sy) / det;
    let residual = (pts
        .iter()
        .map(|&(beta, y)| (y - a - b * beta.cos()).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let (delta, visibility) = if b > 0.0 {
        (a / b - 1.0, (b / a).clamp(0.0, 1.0))
    } else {
        (f64::INFINITY, 0.0)
    };
    Ok(VisibilityFit {
        n0: b,
        delta,
        visibility,
        residual,
    })
}

/// `γ_r = 2·arctan√(N_R/N_L)`, in `[0, π]`.
pub fn polar_retrieve(n_r: f64, n_l: f64) -> Result<f64> {
    if n_r < 0.0 || n_l < 0.0 {
        return Err(Error::Domain("negative counts".into()));
    }
    if n_r + n_l <= 0.0 {
        return Err(Error::NoCounts);
    }
    if n_l == 0.0 {
        return Ok(PI);
    }
    Ok(2.0 * (n_r / n_l).sqrt().atan())
}

/// Simulated meridian point: store `qubit_state(γ_w, 0)`, count on `|L⟩` and `|R⟩`,
/// and retrieve the polar angle.
pub fn meridian_point(
    gamma_w: f64,
    l: i32,
    cfg: &CountConfig,
    seed: StreamSeed,
) -> Result<(f64, f64)> {
    let state = crate::modes::qubit_state(gamma_w, 0.0, l)?;
    let pl = projection_probability(&state, &QuditState::basis(2, OamBasis::L, l)?)?;
    let pr = projection_probability(&state, &QuditState::basis(2, OamBasis::R, l)?)?;
    let nl = simulate_counts("L", pl, cfg, seed.child(0))?;
    let nr = simulate_counts("R", pr, cfg, seed.child(1))?;
    Ok((gamma_w, polar_retrieve(nr.counts, nl.counts)?))
}

/// Variance of `γ_r − γ_w` about zero over a sweep.
pub fn deviation_variance(points: &[(f64, f64)]) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    points.iter().map(|(w, r)| (r - w).powi(2)).sum::<f64>() / points.len() as f64
}

/// Per-basis transmittance of the projection optics.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TransmittanceTable {
    pub entries: BTreeMap<String, f64>,
}

impl TransmittanceTable {
    pub fn new(entries: impl IntoIterator<Item = (String, f64)>) -> Result<Self> {
        let entries: BTreeMap<_, _> = entries.into_iter().collect();
        for (k, &t) in &entries {
            if !(t > 0.0 && t <= 1.0) {
                return Err(Error::Domain(format!("transmittance of `{k}` = {t} not in (0, 1]")));
            }
        }
        Ok(Self { entries })
    }

    /// `T_i / max_j T_j`.
    pub fn relative(&self, basis_id: &str) -> Result<f64> {
        let t = self
            .entries
            .get(basis_id)
            .ok_or_else(|| Error::MissingBasis(basis_id.to_string()))?;
        let max = self.entries.values().cloned().fold(0.0, f64::max);
        Ok(t / max)
    }
}

/// Subtracts each record's background, clamping negatives to zero and flagging them.
pub fn subtract_background(records: &[CountRecord]) -> Vec<CountRecord> {
    records
        .iter()
        .map(|r| {
            let raw = r.counts - r.background;
            CountRecord {
                counts: raw.max(0.0),
                background: 0.0,
                clamped: r.clamped || raw < 0.0,
                ..r.clone()
            }
        })
        .collect()
}

/// Divides counts (and any remaining background) by the relative transmittance.
/// Apply after [`subtract_background`].
pub fn correct_transmittance(
    records: &[CountRecord],
    table: &TransmittanceTable,
) -> Result<Vec<CountRecord>> {
    records
        .iter()
        .map(|r| {
            let t = table.relative(&r.basis_id)?;
            Ok(CountRecord {
                counts: r.counts / t,
                background: r.background / t,
                ..r.clone()
            })
        })
        .collect()
}

/// Writes `basis_id,beta_or_label,counts,background,acquisition_s`.
pub fn write_records<W: Write>(w: W, records: &[CountRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["basis_id", "beta_or_label", "counts", "background", "acquisition_s"])?;
    for r in records {
        let setting = match r.beta {
            Some(b) => format!("{b:.12}"),
            None => r.basis_id.clone(),
        };
        out.write_record(&[
            r.basis_id.clone(),
            setting,
            format!("{}", r.counts),
            format!("{}", r.background),
            format!("{}", r.acquisition),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(r: R) -> Result<Vec<CountRecord>> {
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        if row.len() != 5 {
            return Err(Error::Config(format!("count record with {} columns", row.len())));
        }
        let num = |i: usize| -> Result<f64> {
            row[i]
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad number `{}`", &row[i])))
        };
        let mut rec = CountRecord::new(&row[0], num(2)?, num(3)?, num(4)?);
        rec.beta = row[1].trim().parse().ok();
        out.push(rec);
    }
    Ok(out)
}
