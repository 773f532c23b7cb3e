//! Decoherence of the stored spin wave: ballistic expansion of the cloud,
//! inhomogeneous Larmor precession, and the empirical decay of retrieval efficiency.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldgrid::TransverseField;
use crate::polariton::{SpinWave, RB85_MASS};

pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Bohr magneton over Planck's constant, Hz/T.
const MU_B_OVER_H: f64 = 1.399_624_493_61e10;
/// Differential first-order shift of the |F=2,m=1⟩ ↔ |F=3,m=1⟩ coherence of ⁸⁵Rb, rad/(s·T).
pub const RB85_MF1_SENSITIVITY: f64 = std::f64::consts::TAU * (2.0 / 3.0) * MU_B_OVER_H;
/// Quadratic shift of the ⁸⁵Rb clock coherence, 1.29 kHz/G², in rad/(s·T²).
/// Literature value; not used unless configured.
pub const RB85_CLOCK_QUADRATIC: f64 = std::f64::consts::TAU * 1.29e3 * 1e8;

/// Thermal parameters of the free-expanding cloud.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiffusionParams {
    pub temperature: f64,
    pub mass: f64,
    #[serde(default = "default_kb")]
    pub boltzmann: f64,
}

fn default_kb() -> f64 {
    BOLTZMANN
}

impl Default for DiffusionParams {
    fn default() -> Self {
        Self {
            temperature: 100e-6,
            mass: RB85_MASS,
            boltzmann: BOLTZMANN,
        }
    }
}

impl DiffusionParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("temperature", self.temperature),
            ("mass", self.mass),
            ("boltzmann", self.boltzmann),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("diffusion {name} = {v} must be > 0")));
            }
        }
        Ok(())
    }

    /// Per-axis displacement variance `k_B T t²/m` after free flight for `t` seconds.
    pub fn variance(&self, t: f64) -> f64 {
        self.boltzmann * self.temperature * t * t / self.mass
    }
}

/// Convolves a field with the ballistic-expansion kernel
/// `(m/2πk_BTt²)·exp(-m|ρ-ρ'|²/2k_BTt²)`, applied as `exp(-q²σ²/2)` on the spectrum.
pub fn diffuse_field(field: &TransverseField, p: &DiffusionParams, t_s: f64) -> Result<TransverseField> {
    if !(t_s >= 0.0) {
        return Err(Error::Domain(format!("storage time {t_s} must be >= 0")));
    }
    if t_s == 0.0 {
        return Ok(field.clone());
    }
    let var = p.variance(t_s);
    let mut spectrum = field.to_spectrum();
    spectrum.apply_radial(|q2| Complex64::new((-0.5 * q2 * var).exp(), 0.0));
    Ok(spectrum.to_field())
}

pub fn diffuse(s: &SpinWave, p: &DiffusionParams, t_s: f64) -> Result<SpinWave> {
    s.with_transverse(diffuse_field(s.as_field(), p, t_s)?)
}

/// Thermal drift along z: the `e^{iΔk z}` grating is averaged over a Gaussian
/// displacement of variance `k_BTt²/m`, giving the factor `exp(-Δk²σ_z²/2)`.
pub fn longitudinal_drift(s: &SpinWave, p: &DiffusionParams, t_s: f64) -> Result<SpinWave> {
    if !(t_s >= 0.0) {
        return Err(Error::Domain(format!("storage time {t_s} must be >= 0")));
    }
    let dk = s.delta_k();
    let factor = (-0.5 * dk * dk * p.variance(t_s)).exp();
    Ok(s.with_longitudinal_factor(Complex64::new(factor, 0.0)))
}

/// Location of the intensity minimum along the horizontal line through the grid
/// center, refined by a parabola through the three lowest samples.
pub fn nodal_line_position(field: &TransverseField) -> Result<f64> {
    const THRESHOLD: f64 = 0.1;
    let g = field.grid();
    let (row, _) = g.center_index();
    let profile: Vec<f64> = (0..g.n).map(|col| field.at(row, col).norm_sqr()).collect();
    let peak = profile.iter().cloned().fold(0.0, f64::max);
    let mut best: Option<usize> = None;
    for i in 1..g.n - 1 {
        let v = profile[i];
        if v <= profile[i - 1] && v <= profile[i + 1] && v < THRESHOLD * peak {
            // skip the flat zero tails far from the beam
            let neighbourhood_peak = profile[i.saturating_sub(g.n / 8)..(i + g.n / 8).min(g.n)]
                .iter()
                .cloned()
                .fold(0.0, f64::max);
            if neighbourhood_peak < THRESHOLD * peak {
                continue;
            }
            if best.is_none_or(|b| v < profile[b]) {
                best = Some(i);
            }
        }
    }
    let i = best.ok_or(Error::NodalLineNotFound {
        threshold: THRESHOLD,
    })?;
    let (a, b, c) = (profile[i - 1], profile[i], profile[i + 1]);
    let curvature = a - 2.0 * b + c;
    let offset = if curvature > 0.0 {
        0.5 * (a - c) / curvature
    } else {
        0.0
    };
    Ok(g.x(i) + offset * g.pitch())
}

/// Signed displacement of the nodal line between two spin waves, meters.
/// Negative means the line moved toward −x.
pub fn qutrit_nodal_shift(before: &SpinWave, after: &SpinWave) -> Result<f64> {
    Ok(nodal_line_position(after.as_field())? - nodal_line_position(before.as_field())?)
}

/// Spatial dependence of the stray field along the quantization axis, tesla.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldMap {
    Uniform {
        b: f64,
    },
    /// `B = gx·x + gy·y`, T/m.
    LinearGradient {
        gx: f64,
        gy: f64,
    },
    /// Residual trap field, `fraction·gradient·|ρ − center|`.
    Quadrupole {
        gradient: f64,
        fraction: f64,
        #[serde(default)]
        center: (f64, f64),
    },
}

impl FieldMap {
    pub fn at(&self, x: f64, y: f64) -> f64 {
        match self {
            FieldMap::Uniform { b } => *b,
            FieldMap::LinearGradient { gx, gy } => gx * x + gy * y,
            FieldMap::Quadrupole {
                gradient,
                fraction,
                center,
            } => fraction * gradient * (x - center.0).hypot(y - center.1),
        }
    }
}

/// Effective single-coherence Larmor dephasing model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MagneticModel {
    pub field_map: FieldMap,
    /// Uniform guiding field, tesla.
    pub guiding_field: f64,
    /// First-order shift of the stored coherence, rad/(s·T); zero for clock states.
    pub sensitivity: f64,
    /// Second-order shift, rad/(s·T²).
    #[serde(default)]
    pub second_order: f64,
}

impl Default for MagneticModel {
    /// Clock states in a 0.97 G guiding field with a 5% residual of a 10 G/cm trap.
    fn default() -> Self {
        Self {
            field_map: FieldMap::Quadrupole {
                gradient: 0.1,
                fraction: 0.05,
                center: (0.0, 0.0),
            },
            guiding_field: 0.97e-4,
            sensitivity: 0.0,
            second_order: 0.0,
        }
    }
}

impl MagneticModel {
    /// Same geometry with the first-order sensitivity of an `m_F = 1` coherence.
    pub fn non_clock(self) -> Self {
        Self {
            sensitivity: RB85_MF1_SENSITIVITY,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.guiding_field.is_finite() && self.guiding_field >= 0.0) {
            return Err(Error::Config("guiding_field must be >= 0".into()));
        }
        if !(self.sensitivity.is_finite() && self.second_order.is_finite()) {
            return Err(Error::Config("magnetic sensitivities must be finite".into()));
        }
        Ok(())
    }

    /// Precession frequency `κ₁·B + κ₂·B²` with `B` the total field along the axis.
    pub fn frequency(&self, x: f64, y: f64) -> f64 {
        let b = self.guiding_field + self.field_map.at(x, y);
        self.sensitivity * b + self.second_order * b * b
    }
}

/// Multiplies each pixel by `exp(i·Δω(ρ)·t_s)`; magnitudes are untouched.
pub fn magnetic_dephase(s: &SpinWave, mdl: &MagneticModel, t_s: f64) -> Result<SpinWave> {
    if !(t_s >= 0.0) {
        return Err(Error::Domain(format!("storage time {t_s} must be >= 0")));
    }
    let g = *s.grid();
    let field = s.as_field().map_with_coords(|x, y, v| {
        let phase = mdl.frequency(x + g.center.0, y + g.center.1) * t_s;
        v * Complex64::from_polar(1.0, phase)
    });
    s.with_transverse(field)
}

/// Retrieval efficiency `η(t) = η₀·exp(−t/τ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EfficiencyModel {
    pub eta0: f64,
    pub tau: f64,
}

impl EfficiencyModel {
    /// Measured anchors: 10.74% at 10 µs and 4.73% at 400 µs.
    pub const ANCHORS: [(f64, f64); 2] = [(10e-6, 0.1074), (400e-6, 0.0473)];

    pub fn new(eta0: f64, tau: f64) -> Result<Self> {
        let m = Self { eta0, tau };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta0 > 0.0 && self.eta0 <= 1.0) {
            return Err(Error::Config(format!("eta0 = {} must be in (0, 1]", self.eta0)));
        }
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::Config(format!("tau = {} must be > 0", self.tau)));
        }
        Ok(())
    }

    /// Exponential through two `(t, η)` points.
    pub fn from_anchors(a: (f64, f64), b: (f64, f64)) -> Result<Self> {
        if a.0 == b.0 || a.1 <= 0.0 || b.1 <= 0.0 {
            return Err(Error::FitDegenerate("anchors must differ in time and be positive".into()));
        }
        let tau = (b.0 - a.0) / (a.1 / b.1).ln();
        let eta0 = a.1 * (a.0 / tau).exp();
        Self::new(eta0, tau)
    }

    /// Model through the two measured anchors.
    pub fn measured() -> Self {
        Self::from_anchors(Self::ANCHORS[0], Self::ANCHORS[1]).expect("anchors are valid")
    }

    /// Least-squares fit of `ln η` against `t`.
    pub fn fit(points: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 || points.iter().any(|p| p.1 <= 0.0) {
            return Err(Error::FitDegenerate("need >= 2 positive efficiencies".into()));
        }
        let n = points.len() as f64;
        let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
        let sxx: f64 = points.iter().map(|p| (p.0 - mt).powi(2)).sum();
        let sxy: f64 = points.iter().map(|p| (p.0 - mt) * (p.1.ln() - my)).sum();
        if sxx == 0.0 {
            return Err(Error::FitDegenerate("all storage times equal".into()));
        }
        let slope = sxy / sxx;
        if slope >= 0.0 {
            return Err(Error::FitDegenerate("efficiency does not decay".into()));
        }
        Self::new((my - slope * mt).exp(), -1.0 / slope)
    }
}

pub fn retrieval_efficiency(mdl: &EfficiencyModel, t_s: f64) -> f64 {
    mdl.eta0 * (-t_s / mdl.tau).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldgrid::{overlap, GridSpec};
    use crate::modes::{lg_field, qubit_state, synthesize, LgModeSpec, QuditState};
    use crate::polariton::{write, MemoryParams};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const LAMBDA: f64 = 795e-9;

    fn store(f: &TransverseField) -> SpinWave {
        write(f, &MemoryParams::default())
    }

    #[test]
    fn zero_time_is_identity() {
        let g = GridSpec::new(64, 2e-3).unwrap();
        let f = lg_field(LgModeSpec::new(1, 1.5e-4).unwrap(), g, LAMBDA).unwrap();
        let s = store(&f);
        assert_eq!(diffuse(&s, &DiffusionParams::default(), 0.0).unwrap(), s);
        assert!(diffuse(&s, &DiffusionParams::default(), -1.0).is_err());
    }

    #[test]
    fn diffusion_spread_at_500us() {
        let p = DiffusionParams::default();
        let sigma = p.variance(500e-6).sqrt();
        assert!((sigma - 49e-6).abs() < 1e-6, "sigma {sigma}");
    }

    #[test]
    fn gaussian_broadens_analytically() {
        let p = DiffusionParams::default();
        let t = 500e-6;
        let w = 150e-6;
        let g = GridSpec::new(128, 2e-3).unwrap();
        let f = TransverseField::from_fn(g, LAMBDA, |x, y| {
            Complex64::new((-(x * x + y * y) / (w * w)).exp(), 0.0)
        })
        .unwrap();
        let out = diffuse_field(&f, &p, t).unwrap();
        // Gaussian ⊛ Gaussian: 1/e radius √(w² + 2σ²), peak scaled by w²/w'²
        let var = p.variance(t);
        let w2 = w * w + 2.0 * var;
        let expect = TransverseField::from_fn(g, LAMBDA, |x, y| {
            Complex64::new(w * w / w2 * (-(x * x + y * y) / w2).exp(), 0.0)
        })
        .unwrap();
        let err: f64 = out
            .values()
            .iter()
            .zip(expect.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn spectrum_only_shrinks() {
        let p = DiffusionParams::default();
        let g = GridSpec::new(64, 1.5e-3).unwrap();
        let f = synthesize(&qubit_state(1.0, 0.3, 2).unwrap(), 1e-4, g, LAMBDA).unwrap();
        let before = f.to_spectrum();
        let after = diffuse_field(&f, &p, 300e-6).unwrap().to_spectrum();
        let peak = before.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (a, b) in after.values().iter().zip(before.values()) {
            assert!(a.norm() <= b.norm() + 1e-14 * peak);
        }
        assert!(after.norm_sqr() < before.norm_sqr());
    }

    #[test]
    fn sequential_diffusion_adds_variances() {
        let p = DiffusionParams::default();
        let g = GridSpec::new(64, 1.5e-3).unwrap();
        let f = synthesize(&qubit_state(1.0, 0.3, 1).unwrap(), 1e-4, g, LAMBDA).unwrap();
        let (t1, t2) = (200e-6, 300e-6);
        let twice = diffuse_field(&diffuse_field(&f, &p, t1).unwrap(), &p, t2).unwrap();
        let t_eq = (t1 * t1 + t2 * t2).sqrt();
        let once = diffuse_field(&f, &p, t_eq).unwrap();
        let max_diff = |a: &TransverseField, b: &TransverseField| {
            a.values()
                .iter()
                .zip(b.values())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max)
        };
        let peak = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(max_diff(&twice, &once) < 1e-12 * peak);
        // composing by storage time instead of variance gives something else
        let summed = diffuse_field(&f, &p, t1 + t2).unwrap();
        assert!(max_diff(&twice, &summed) > 1e-3 * peak);
    }

    #[test]
    fn qubit_dark_lines_survive() {
        let g = GridSpec::new(128, 2e-3).unwrap();
        let w0 = 1.2e-4;
        let f = synthesize(&qubit_state(PI / 2.0, 0.0, 2).unwrap(), w0, g, LAMBDA).unwrap();
        let out = diffuse(&store(&f), &DiffusionParams::default(), 500e-6).unwrap();
        let inten = out.as_field().intensity();
        let peak = inten.iter().cloned().fold(0.0, f64::max);
        for i in 1..g.n {
            assert!(inten[g.index(i, i)] < 1e-6 * peak);
            assert!(inten[g.index(i, g.n - i)] < 1e-6 * peak);
        }
    }

    #[test]
    fn qutrit_line_moves_left_and_qubit_stays() {
        let g = GridSpec::new(256, 2e-3).unwrap();
        let w0 = 1.2e-4;
        let one = Complex64::new(1.0, 0.0);
        let qutrit = QuditState::qutrit(one, one, one, 1).unwrap();
        let f = synthesize(&qutrit, w0, g, LAMBDA).unwrap();
        let before = store(&f);
        let x0 = nodal_line_position(before.as_field()).unwrap();
        assert!((x0 + w0 / (2.0 * 2f64.sqrt())).abs() < 0.05 * g.pitch());
        assert_eq!(qutrit_nodal_shift(&before, &before).unwrap(), 0.0);

        let p = DiffusionParams::default();
        let after = diffuse(&before, &p, 500e-6).unwrap();
        let shift = qutrit_nodal_shift(&before, &after).unwrap();
        // (1 + a x) e^{-x²/w²} ⊛ kernel keeps its zero at -w'²/(a w²)
        let w2 = w0 * w0 + 2.0 * p.variance(500e-6);
        let expect = -(w0 / (2.0 * 2f64.sqrt())) * (w2 / (w0 * w0) - 1.0);
        assert!(shift < 0.0);
        assert!((shift - expect).abs() < 0.05 * g.pitch(), "{shift} vs {expect}");

        let qubit = synthesize(&qubit_state(PI / 2.0, 0.0, 2).unwrap(), w0, g, LAMBDA).unwrap();
        let qb = store(&qubit);
        let qa = diffuse(&qb, &p, 500e-6).unwrap();
        assert!(qutrit_nodal_shift(&qb, &qa).unwrap().abs() < g.pitch());
    }

    #[test]
    fn missing_nodal_line_is_an_error() {
        let g = GridSpec::new(64, 2e-3).unwrap();
        let f = lg_field(LgModeSpec::new(0, 1.5e-4).unwrap(), g, LAMBDA).unwrap();
        assert!(matches!(
            nodal_line_position(&f),
            Err(Error::NodalLineNotFound { .. })
        ));
    }

    #[test]
    fn clock_states_only_pick_up_global_phase() {
        let g = GridSpec::new(64, 2e-3).unwrap();
        let f = lg_field(LgModeSpec::new(2, 1.5e-4).unwrap(), g, LAMBDA).unwrap();
        let s = store(&f);
        let out = magnetic_dephase(&s, &MagneticModel::default(), 1e-3).unwrap();
        assert_relative_eq!(overlap(s.as_field(), out.as_field()).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn dephasing_preserves_magnitudes() {
        let g = GridSpec::new(64, 2e-3).unwrap();
        let f = lg_field(LgModeSpec::new(1, 1.5e-4).unwrap(), g, LAMBDA).unwrap();
        let s = store(&f);
        let out = magnetic_dephase(&s, &MagneticModel::default().non_clock(), 50e-6).unwrap();
        for (a, b) in s.values().iter().zip(out.values()) {
            assert!((a.norm() - b.norm()).abs() <= 1e-15 * a.norm().max(1e-300));
        }
    }

    #[test]
    fn linear_ramp_overlap_matches_characteristic_function() {
        let g = GridSpec::new(128, 2e-3).unwrap();
        let w = 1.5e-4;
        let f = lg_field(LgModeSpec::new(0, w).unwrap(), g, LAMBDA).unwrap();
        let s = store(&f);
        let mdl = MagneticModel {
            field_map: FieldMap::LinearGradient { gx: 5e-3, gy: 0.0 },
            guiding_field: 0.0,
            sensitivity: RB85_MF1_SENSITIVITY,
            second_order: 0.0,
        };
        let mut last = 1.0;
        for k in 1..6 {
            let t = k as f64 * 5e-6;
            let out = magnetic_dephase(&s, &mdl, t).unwrap();
            let ov = overlap(s.as_field(), out.as_field()).unwrap();
            // phase k·x on |f|² ∝ exp(-2x²/w²): ⟨e^{ikx}⟩ = exp(-k²w²/8)
            let kx = RB85_MF1_SENSITIVITY * 5e-3 * t;
            assert_relative_eq!(ov, (-kx * kx * w * w / 8.0).exp(), epsilon = 1e-10);
            assert!(ov < last);
            last = ov;
        }
    }

    #[test]
    fn ambient_field_dominates_at_short_times() {
        let g = GridSpec::new(128, 2e-3).unwrap();
        let w0 = 1.2e-4;
        let f = synthesize(&qubit_state(PI / 2.0, 0.0, 2).unwrap(), w0, g, LAMBDA).unwrap();
        let s = store(&f);
        let t = 50e-6;
        let dephased = magnetic_dephase(&s, &MagneticModel::default().non_clock(), t).unwrap();
        let diffused = diffuse(&s, &DiffusionParams::default(), t).unwrap();
        let ov_mag = overlap(s.as_field(), dephased.as_field()).unwrap();
        let ov_diff = overlap(s.as_field(), diffused.as_field()).unwrap();
        assert!(ov_mag < 0.9, "magnetic overlap {ov_mag}");
        assert!(ov_diff > 0.99, "diffusion overlap {ov_diff}");
    }

    #[test]
    fn efficiency_anchors() {
        let m = EfficiencyModel::measured();
        let r = retrieval_efficiency(&m, 400e-6) / retrieval_efficiency(&m, 10e-6);
        assert!((r - 0.44).abs() < 1e-3);
        assert_eq!(retrieval_efficiency(&m, 0.0), m.eta0);
        // two-point solve: τ = 390 µs / ln(0.1074/0.0473)
        let tau = 390e-6 / (0.1074f64 / 0.0473).ln();
        assert_relative_eq!(m.tau, tau, max_relative = 1e-12);
        assert!((m.tau - 475e-6).abs() < 1e-6);
        assert!((retrieval_efficiency(&m, 500e-6) - 0.038).abs() < 5e-4);
    }

    #[test]
    fn efficiency_fit_recovers_model() {
        let truth = EfficiencyModel::new(0.12, 300e-6).unwrap();
        let pts: Vec<_> = (0..8)
            .map(|k| {
                let t = k as f64 * 60e-6;
                (t, retrieval_efficiency(&truth, t))
            })
            .collect();
        let fit = EfficiencyModel::fit(&pts).unwrap();
        assert_relative_eq!(fit.eta0, 0.12, max_relative = 1e-10);
        assert_relative_eq!(fit.tau, 300e-6, max_relative = 1e-10);
        assert!(EfficiencyModel::new(1.5, 1.0).is_err());
    }
}
