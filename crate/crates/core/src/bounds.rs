//! Fidelity limits of a measure-and-resend memory fed with attenuated coherent
//! pulses.
//!
//! A pulse with `N` photons can be copied with fidelity at most `(N+1)/(N+2)`.
//! Averaging over the Poisson photon number gives [`poisson_weighted_limit`];
//! letting the attacker discard pulses to mimic a memory efficiency `η` gives
//! [`classical_limit`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Remaining normalized tail mass at which the Poisson series is cut.
pub const TAIL_TOLERANCE: f64 = 1e-15;
const MAX_MEAN: f64 = 500.0;

/// Mean photon number per pulse and its absolute uncertainty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhotonStatistics {
    pub mean: f64,
    pub uncertainty: f64,
}

impl Default for PhotonStatistics {
    fn default() -> Self {
        Self {
            mean: 1.6,
            uncertainty: 0.4,
        }
    }
}

impl PhotonStatistics {
    pub fn new(mean: f64, uncertainty: f64) -> Result<Self> {
        let s = Self { mean, uncertainty };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_mean(self.mean)?;
        if !(self.uncertainty.is_finite() && self.uncertainty >= 0.0) {
            return Err(Error::Domain(format!("uncertainty {} must be >= 0", self.uncertainty)));
        }
        if self.mean - self.uncertainty <= 0.0 {
            return Err(Error::Domain(format!(
                "mean - uncertainty = {} must be > 0",
                self.mean - self.uncertainty
            )));
        }
        Ok(())
    }
}

fn check_mean(nbar: f64) -> Result<()> {
    if !(nbar > 0.0 && nbar <= MAX_MEAN) {
        return Err(Error::Domain(format!("mean photon number {nbar} not in (0, {MAX_MEAN}]")));
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!("efficiency {eta} not in (0, 1]")));
    }
    Ok(())
}

/// Poisson probabilities up to a certified cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonSeries {
    pub mean: f64,
    /// `P(0..=cutoff)`.
    pub p: Vec<f64>,
    /// `1 − P(0)`, computed without cancellation.
    pub nonvacuum: f64,
    /// `tail[k] = Σ_{N ≥ k+1} P(N)`, summed from the top; `tail[0] = 1 − P(0)`.
    tail: Vec<f64>,
    /// Upper bound on the mass beyond the cutoff.
    pub remainder_bound: f64,
}

impl PoissonSeries {
    /// Series cut where the remaining mass relative to `1 − P(0)` is below `tol`.
    pub fn new(mean: f64, tol: f64) -> Result<Self> {
        check_mean(mean)?;
        let nonvacuum = -(-mean).exp_m1();
        let mut p = vec![(-mean).exp()];
        let remainder_bound = loop {
            let n = p.len();
            let next = p[n - 1] * mean / n as f64;
            p.push(next);
            // Σ_{k > n} P(k) ≤ P(n+1)/(1 − n̄/(n+2)) once n+2 > n̄
            let k = n as f64;
            if k + 2.0 > mean {
                let bound = next * mean / (k + 1.0) / (1.0 - mean / (k + 2.0));
                if bound < tol * nonvacuum {
                    break bound;
                }
            }
        };
        let cutoff = p.len() - 1;
        let mut tail = vec![0.0; cutoff + 1];
        for k in (0..cutoff).rev() {
            tail[k] = tail[k + 1] + p[k + 1];
        }
        tail[0] = nonvacuum;
        Ok(Self {
            mean,
            p,
            nonvacuum,
            tail,
            remainder_bound,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.p.len() - 1
    }

    /// `Σ_{N ≥ k+1} P(N)` (zero beyond the cutoff).
    pub fn tail_above(&self, k: usize) -> f64 {
        self.tail.get(k).copied().unwrap_or(0.0)
    }
}

/// Maximum copy fidelity `(N+1)/(N+2)` for an `N`-photon pulse.
pub fn copy_fidelity(n: usize) -> f64 {
    (n as f64 + 1.0) / (n as f64 + 2.0)
}

/// Average of `(N+1)/(N+2)` over the non-vacuum Poisson distribution.
pub fn poisson_weighted_limit(nbar: f64) -> Result<f64> {
    let s = PoissonSeries::new(nbar, TAIL_TOLERANCE)?;
    Ok(weighted_from(&s, 1))
}

/// `Σ_{N ≥ from} (N+1)/(N+2)·P(N) / (1 − P(0))`, summed smallest terms first.
fn weighted_from(s: &PoissonSeries, from: usize) -> f64 {
    (from..s.p.len())
        .rev()
        .map(|n| copy_fidelity(n) * s.p[n])
        .sum::<f64>()
        / s.nonvacuum
}

/// Smallest `k ≥ 0` with `Σ_{N ≥ k+1} P(N) ≤ η(1 − P(0))`.
pub fn nmin(nbar: f64, eta: f64) -> Result<usize> {
    check_eta(eta)?;
    Ok(nmin_in(&series_for(nbar, eta)?, eta))
}

fn series_for(nbar: f64, eta: f64) -> Result<PoissonSeries> {
    // the cutoff must resolve tails well below the efficiency
    PoissonSeries::new(nbar, TAIL_TOLERANCE.min(eta * 1e-6))
}

fn nmin_in(s: &PoissonSeries, eta: f64) -> usize {
    let budget = eta * s.nonvacuum;
    (0..=s.cutoff()).find(|&k| s.tail_above(k) <= budget).unwrap_or(s.cutoff())
}

/// Classical fidelity limits for one `(n̄, η)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub mean: f64,
    pub efficiency: f64,
    /// Limit at unit efficiency.
    pub f_co: f64,
    /// Limit at efficiency `η`.
    pub f_classical: f64,
    pub n_min: usize,
    /// Weight given to the `N_min`-photon pulses.
    pub weight: f64,
    /// Sum of the weights of the resent pulses; equals `η(1 − P(0))`.
    pub denominator: f64,
    /// `(low, high)`; degenerate unless produced by [`classical_limit_band`].
    pub band: (f64, f64),
}

pub fn classical_limit(nbar: f64, eta: f64) -> Result<BoundResult> {
    check_eta(eta)?;
    let s = series_for(nbar, eta)?;
    let n_min = nmin_in(&s, eta);
    let tail = s.tail_above(n_min);
    let weight = (eta * s.nonvacuum - tail).max(0.0);
    let upper: f64 = (n_min + 1..s.p.len())
        .rev()
        .map(|n| copy_fidelity(n) * s.p[n])
        .sum();
    let denominator = weight + tail;
    let f_classical = (copy_fidelity(n_min) * weight + upper) / denominator;
    let f_co = weighted_from(&s, 1);
    Ok(BoundResult {
        mean: nbar,
        efficiency: eta,
        f_co,
        f_classical,
        n_min,
        weight,
        denominator,
        band: (f_classical, f_classical),
    })
}

/// Range of [`classical_limit`] over `n̄ ∈ [n̄−u, n̄+u]`: both endpoints plus nine
/// interior points.
pub fn threshold_band(stats: PhotonStatistics, eta: f64) -> Result<(f64, f64)> {
    stats.validate()?;
    check_eta(eta)?;
    let lo = stats.mean - stats.uncertainty;
    let span = 2.0 * stats.uncertainty;
    let mut low = f64::INFINITY;
    let mut high = f64::NEG_INFINITY;
    for k in 0..=10 {
        let n = if k == 10 { stats.mean + stats.uncertainty } else { lo + span * k as f64 / 10.0 };
        let f = classical_limit(n, eta)?.f_classical;
        low = low.min(f);
        high = high.max(f);
    }
    Ok((low, high))
}

/// [`classical_limit`] at the central `n̄` with its band filled in.
pub fn classical_limit_band(stats: PhotonStatistics, eta: f64) -> Result<BoundResult> {
    let mut r = classical_limit(stats.mean, eta)?;
    r.band = threshold_band(stats, eta)?;
    Ok(r)
}
