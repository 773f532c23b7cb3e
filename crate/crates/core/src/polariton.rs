//! Dark-state-polariton storage and retrieval.
//!
//! In the adiabatic limit the bright polariton vanishes and each transverse Fourier
//! component of the dark polariton propagates at `v_g = c·cos²θ(t)` with
//! `tan²θ = g²N/Ω_c²`. Switching the coupling off rotates θ to π/2 and hands the
//! field over to the ground-state coherence without changing its transverse shape,
//! so writing is the map `E(ρ) → -√N·σ(ρ)·e^{iΔk z}` and reading is its inverse.
//! Neither the propagation PDEs nor the bright polariton are integrated here; the
//! mapping below is their adiabatic consequence, with the transverse diffraction
//! factor `exp(-i q² z / 2k_s)` dropped and checked by [`diffraction_check`].

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldgrid::{GridSpec, TransverseField};

/// Atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Mass of ⁸⁵Rb, kg.
pub const RB85_MASS: f64 = 84.911_789_738 * ATOMIC_MASS_UNIT;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Number of longitudinal slices used to track the `e^{iΔk z}` phase.
pub const Z_SAMPLES: usize = 64;
/// Threshold on `q²D/k_s` above which the diffraction factor is not negligible.
pub const DIFFRACTION_LIMIT: f64 = 0.1;

/// Coupling Rabi frequency as a function of time, rad/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CouplingSchedule {
    Constant {
        omega: f64,
    },
    /// Constant `omega` until `t_off`, then a linear ramp to zero over `ramp` seconds.
    SwitchOff {
        omega: f64,
        t_off: f64,
        ramp: f64,
    },
    /// Piecewise-linear through `(t, Ω)` points, held constant outside.
    Table {
        points: Vec<(f64, f64)>,
    },
}

impl CouplingSchedule {
    pub fn omega(&self, t: f64) -> f64 {
        match self {
            CouplingSchedule::Constant { omega } => *omega,
            CouplingSchedule::SwitchOff { omega, t_off, ramp } => {
                if t <= *t_off {
                    *omega
                } else if *ramp <= 0.0 || t >= t_off + ramp {
                    0.0
                } else {
                    omega * (1.0 - (t - t_off) / ramp)
                }
            }
            CouplingSchedule::Table { points } => {
                let Some(first) = points.first() else {
                    return 0.0;
                };
                if t <= first.0 {
                    return first.1;
                }
                for pair in points.windows(2) {
                    let ((t0, w0), (t1, w1)) = (pair[0], pair[1]);
                    if t <= t1 {
                        let s = if t1 > t0 { (t - t0) / (t1 - t0) } else { 1.0 };
                        return w0 + s * (w1 - w0);
                    }
                }
                points.last().map(|p| p.1).unwrap_or(0.0)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(format!("coupling schedule: {m}")));
        match self {
            CouplingSchedule::Constant { omega } if !(*omega >= 0.0) => bad("omega must be >= 0"),
            CouplingSchedule::SwitchOff { omega, ramp, .. } if !(*omega >= 0.0 && *ramp >= 0.0) => {
                bad("omega and ramp must be >= 0")
            }
            CouplingSchedule::Table { points } => {
                if points.iter().any(|p| !(p.1 >= 0.0)) {
                    return bad("table Rabi frequencies must be >= 0");
                }
                if points.windows(2).any(|w| w[1].0 < w[0].0) {
                    return bad("table times must be sorted");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Physical constants of the ensemble and beams.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MemoryParams {
    /// Signal wavelength λ_s, m.
    pub signal_wavelength: f64,
    /// Coupling wavelength λ_c, m.
    pub coupling_wavelength: f64,
    /// Angle between signal and coupling beams, rad.
    pub beam_angle: f64,
    /// Collective coupling g²N, rad²/s². Placeholder default; only ratios to Ω_c² matter.
    pub g2n: f64,
    pub coupling: CouplingSchedule,
    /// Ensemble diameter D, m.
    pub ensemble_diameter: f64,
    /// Temperature, K.
    pub temperature: f64,
    /// Atomic mass, kg.
    pub atomic_mass: f64,
    #[serde(default = "default_c")]
    pub speed_of_light: f64,
}

fn default_c() -> f64 {
    SPEED_OF_LIGHT
}

impl Default for MemoryParams {
    fn default() -> Self {
        let g = TAU * 10e6;
        Self {
            signal_wavelength: 795e-9,
            coupling_wavelength: 795e-9,
            beam_angle: 0.0,
            g2n: g * g,
            coupling: CouplingSchedule::SwitchOff {
                omega: TAU * 20e6,
                t_off: 0.0,
                ramp: 200e-9,
            },
            ensemble_diameter: 2e-3,
            temperature: 100e-6,
            atomic_mass: RB85_MASS,
            speed_of_light: SPEED_OF_LIGHT,
        }
    }
}

impl MemoryParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("signal_wavelength", self.signal_wavelength),
            ("coupling_wavelength", self.coupling_wavelength),
            ("g2n", self.g2n),
            ("ensemble_diameter", self.ensemble_diameter),
            ("temperature", self.temperature),
            ("atomic_mass", self.atomic_mass),
            ("speed_of_light", self.speed_of_light),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("{name} = {v} must be > 0")));
            }
        }
        if !(self.beam_angle.is_finite() && self.beam_angle >= 0.0) {
            return Err(Error::Config("beam_angle must be >= 0".into()));
        }
        self.coupling.validate()
    }

    pub fn signal_wavenumber(&self) -> f64 {
        TAU / self.signal_wavelength
    }

    pub fn coupling_wavenumber(&self) -> f64 {
        TAU / self.coupling_wavelength
    }

    /// Spin-wave wave vector `Δk = k_c(cos α − 1)`, rad/m; never positive.
    pub fn delta_k(&self) -> f64 {
        // 1 - cos α = 2 sin²(α/2) avoids cancellation at small angles
        let s = (self.beam_angle / 2.0).sin();
        -2.0 * self.coupling_wavenumber() * s * s
    }
}

/// Mixing angle `θ = arctan(√(g²N)/Ω_c)`, exactly π/2 when the coupling is off.
pub fn mixing_angle(params: &MemoryParams, t: f64) -> f64 {
    let omega = params.coupling.omega(t);
    if omega <= 0.0 {
        return FRAC_PI_2;
    }
    params.g2n.sqrt().atan2(omega)
}

/// `v_g = c·cos²θ = c/(1 + g²N/Ω_c²)`.
pub fn group_velocity(params: &MemoryParams, t: f64) -> f64 {
    let omega = params.coupling.omega(t);
    if omega <= 0.0 {
        return 0.0;
    }
    let o2 = omega * omega;
    params.speed_of_light * o2 / (o2 + params.g2n)
}

/// Split of a dark polariton of amplitude `A` into photonic and atomic parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonState {
    pub theta: f64,
    /// `A·cos θ`.
    pub field_part: f64,
    /// `A·sin θ`.
    pub matter_part: f64,
}

impl PolaritonState {
    pub fn new(theta: f64, amplitude: f64) -> Self {
        Self {
            theta,
            field_part: amplitude * theta.cos(),
            matter_part: amplitude * theta.sin(),
        }
    }

    /// Polariton number `field² + matter²`.
    pub fn number(&self) -> f64 {
        self.field_part * self.field_part + self.matter_part * self.matter_part
    }

    /// Ratio of atomic to photonic excitation, `tan²θ`.
    pub fn matter_to_field(&self) -> f64 {
        (self.matter_part * self.matter_part) / (self.field_part * self.field_part)
    }
}

/// Polariton composition along the coupling schedule at each of `times`.
pub fn polariton_trajectory(params: &MemoryParams, times: &[f64], amplitude: f64) -> Vec<PolaritonState> {
    times
        .iter()
        .map(|&t| PolaritonState::new(mixing_angle(params, t), amplitude))
        .collect()
}

/// One longitudinal slice of the ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZSample {
    /// Current position of the slice's atoms, m.
    pub z: f64,
    /// Fraction of atoms in the slice; weights sum to one.
    pub weight: f64,
    /// Coherence phase imprinted at write time, `e^{iΔk z_write}`, times any damping.
    pub phase: Complex64,
}

/// Stored collective coherence, scaled by `√N` so its norm equals the photon norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinWave {
    field: TransverseField,
    delta_k: f64,
    z_profile: Vec<ZSample>,
    diffraction: DiffractionCheck,
}

impl SpinWave {
    pub fn grid(&self) -> &GridSpec {
        self.field.grid()
    }

    /// Transverse coherence `√N·σ̃_gs` per pixel.
    pub fn values(&self) -> &[Complex64] {
        self.field.values()
    }

    /// Transverse coherence as a field on the storage grid.
    pub fn as_field(&self) -> &TransverseField {
        &self.field
    }

    pub fn delta_k(&self) -> f64 {
        self.delta_k
    }

    pub fn z_profile(&self) -> &[ZSample] {
        &self.z_profile
    }

    pub fn diffraction(&self) -> DiffractionCheck {
        self.diffraction
    }

    pub fn norm_sqr(&self) -> f64 {
        self.field.norm_sqr()
    }

    /// Replaces the transverse coherence, keeping the longitudinal record.
    pub fn with_transverse(&self, field: TransverseField) -> Result<Self> {
        if field.grid() != self.field.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            field,
            ..self.clone()
        })
    }

    /// Moves every slice by `dz` (atoms carry their imprinted phase with them).
    pub fn displaced_z(&self, dz: f64) -> Self {
        let mut out = self.clone();
        for s in &mut out.z_profile {
            s.z += dz;
        }
        out
    }

    /// Multiplies every slice phase by `factor` (ensemble-averaged dephasing).
    pub fn with_longitudinal_factor(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for s in &mut out.z_profile {
            s.phase *= factor;
        }
        out
    }

    /// Phase-matched readout amplitude `Σ w_j·phase_j·e^{-iΔk z_j}`; one when nothing moved.
    pub fn longitudinal_amplitude(&self) -> Complex64 {
        self.z_profile
            .iter()
            .map(|s| s.phase * Complex64::from_polar(s.weight, -self.delta_k * s.z))
            .sum()
    }
}

/// Gaussian density (center D/2, σ = D/4) over `[0, D]` sampled at slice midpoints.
fn z_profile(diameter: f64, delta_k: f64) -> Vec<ZSample> {
    let dz = diameter / Z_SAMPLES as f64;
    let sigma = diameter / 4.0;
    let raw: Vec<(f64, f64)> = (0..Z_SAMPLES)
        .map(|j| {
            let z = (j as f64 + 0.5) * dz;
            let u = (z - diameter / 2.0) / sigma;
            (z, (-0.5 * u * u).exp())
        })
        .collect();
    let total: f64 = raw.iter().map(|r| r.1).sum();
    raw.into_iter()
        .map(|(z, w)| ZSample {
            z,
            weight: w / total,
            phase: Complex64::from_polar(1.0, delta_k * z),
        })
        .collect()
}

/// Maps the signal envelope onto the spin wave, `√N·σ̃ = -E`, with unit efficiency.
pub fn write(field: &TransverseField, params: &MemoryParams) -> SpinWave {
    let delta_k = params.delta_k();
    SpinWave {
        field: field.scaled(Complex64::new(-1.0, 0.0)),
        delta_k,
        z_profile: z_profile(params.ensemble_diameter, delta_k),
        diffraction: diffraction_check(params, field),
    }
}

/// Forward readout, `E = -√N·σ̃` times the phase-matched longitudinal amplitude.
pub fn read(spin_wave: &SpinWave, _params: &MemoryParams) -> TransverseField {
    let factor = -spin_wave.longitudinal_amplitude();
    spin_wave.field.scaled(factor)
}

/// Largest diffraction phase `q²D/k_s` over the 99%-energy spectral support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffractionCheck {
    pub max_phase: f64,
    /// Set when `max_phase >= 0.1`, i.e. the diffraction-free mapping is doubtful.
    pub flagged: bool,
}

pub fn diffraction_check(params: &MemoryParams, field: &TransverseField) -> DiffractionCheck {
    let spectrum = field.to_spectrum();
    let q2 = field.grid().frequency_sq();
    let mut pairs: Vec<(f64, f64)> = q2
        .into_iter()
        .zip(spectrum.values())
        .map(|(q, v)| (q, v.norm_sqr()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    let mut q2_max = 0.0;
    if total > 0.0 {
        let mut acc = 0.0;
        for (q, e) in &pairs {
            acc += e;
            q2_max = *q;
            if acc >= 0.99 * total {
                break;
            }
        }
    }
    let max_phase = q2_max * params.ensemble_diameter / params.signal_wavenumber();
    DiffractionCheck {
        max_phase,
        flagged: max_phase >= DIFFRACTION_LIMIT,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldgrid::inner_product;
    use crate::modes::{lg_field, LgModeSpec};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4};

    fn params_with(omega: f64, g2n: f64) -> MemoryParams {
        MemoryParams {
            g2n,
            coupling: CouplingSchedule::Constant { omega },
            ..MemoryParams::default()
        }
    }

    #[test]
    fn mixing_angle_cases() {
        assert_relative_eq!(mixing_angle(&params_with(3.0, 9.0), 0.0), FRAC_PI_4);
        assert_relative_eq!(mixing_angle(&params_with(1.0, 3.0), 0.0), FRAC_PI_3, epsilon = 1e-15);
        assert_eq!(mixing_angle(&params_with(0.0, 3.0), 0.0), FRAC_PI_2);
        assert!(mixing_angle(&params_with(1e12, 1.0), 0.0) < 1e-11);
    }

    #[test]
    fn group_velocity_cases() {
        let c = SPEED_OF_LIGHT;
        assert_relative_eq!(group_velocity(&params_with(2.0, 4.0), 0.0), c / 2.0);
        assert_eq!(group_velocity(&params_with(0.0, 4.0), 0.0), 0.0);
        assert_relative_eq!(group_velocity(&params_with(1e9, 1.0), 0.0), c, max_relative = 1e-15);
        let mut last = 0.0;
        for k in 1..50 {
            let v = group_velocity(&params_with(k as f64 * 0.1, 1.0), 0.0);
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn switch_off_schedule_stops_light() {
        let p = MemoryParams::default();
        assert!(mixing_angle(&p, -1e-6) < FRAC_PI_2);
        assert_eq!(mixing_angle(&p, 1e-6), FRAC_PI_2);
        assert_eq!(group_velocity(&p, 1e-6), 0.0);
        let times: Vec<f64> = (0..100).map(|k| -50e-9 + k as f64 * 3e-9).collect();
        for s in polariton_trajectory(&p, &times, 1.7) {
            assert!((s.number() - 1.7 * 1.7).abs() < 1e-10);
            if s.field_part.abs() > 1e-3 {
                assert_relative_eq!(s.matter_to_field(), s.theta.tan().powi(2), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn table_schedule_interpolates() {
        let s = CouplingSchedule::Table {
            points: vec![(0.0, 2.0), (1.0, 0.0)],
        };
        assert_eq!(s.omega(-1.0), 2.0);
        assert_eq!(s.omega(0.25), 1.5);
        assert_eq!(s.omega(3.0), 0.0);
    }

    #[test]
    fn delta_k_two_degrees() {
        let p = MemoryParams {
            beam_angle: 2f64.to_radians(),
            ..MemoryParams::default()
        };
        let dk = p.delta_k();
        // k_c (cos α − 1) evaluated directly
        let direct = TAU / 795e-9 * (2f64.to_radians().cos() - 1.0);
        assert_relative_eq!(dk, direct, max_relative = 1e-9);
        assert!((dk * 1e-3 - (-4.8)).abs() < 0.05);
        assert!((dk * 2e-3 - (-9.6)).abs() < 0.1);
        assert_eq!(MemoryParams::default().delta_k(), 0.0);
    }

    fn test_field() -> TransverseField {
        let g = GridSpec::new(64, 2.4e-3).unwrap();
        lg_field(LgModeSpec::new(1, 2e-4).unwrap(), g, 795e-9).unwrap()
    }

    #[test]
    fn collinear_profile_has_constant_phase() {
        let s = write(&test_field(), &MemoryParams::default());
        assert!(s.z_profile().iter().all(|z| z.phase == Complex64::new(1.0, 0.0)));
        let w: f64 = s.z_profile().iter().map(|z| z.weight).sum();
        assert_relative_eq!(w, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn write_read_round_trip() {
        let p = MemoryParams {
            beam_angle: 2f64.to_radians(),
            ..MemoryParams::default()
        };
        let f = test_field();
        let s = write(&f, &p);
        assert_relative_eq!(s.norm_sqr(), f.norm_sqr(), max_relative = 1e-14);
        let back = read(&s, &p);
        let ip = inner_product(&f, &back).unwrap();
        assert!((ip - 1.0).norm() < 1e-10);
    }

    #[test]
    fn global_phase_keeps_intensity() {
        let p = MemoryParams::default();
        let f = test_field();
        let s = write(&f, &p);
        let turned = s
            .with_transverse(s.as_field().scaled(Complex64::from_polar(1.0, 0.7)))
            .unwrap();
        let a = read(&s, &p).intensity();
        let b = read(&turned, &p).intensity();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12 * x.max(1.0));
        }
    }

    #[test]
    fn longitudinal_drift_matters_only_with_wave_vector() {
        let f = test_field();
        let collinear = MemoryParams::default();
        let s = write(&f, &collinear).displaced_z(37e-6);
        assert!((s.longitudinal_amplitude() - 1.0).norm() < 1e-14);

        let angled = MemoryParams {
            beam_angle: 2f64.to_radians(),
            ..MemoryParams::default()
        };
        let s = write(&f, &angled);
        let moved = s.displaced_z(300e-6);
        let expect = Complex64::from_polar(1.0, -angled.delta_k() * 300e-6);
        assert!((moved.longitudinal_amplitude() - expect).norm() < 1e-12);
        assert!((moved.longitudinal_amplitude() - 1.0).norm() > 0.1);
    }

    #[test]
    fn diffraction_check_values() {
        let p = MemoryParams::default();
        let g = GridSpec::new(128, 4e-3).unwrap();
        let flat = TransverseField::from_fn(g, 795e-9, |_, _| Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(diffraction_check(&p, &flat).max_phase, 0.0);

        let lg = lg_field(LgModeSpec::new(1, 200e-6).unwrap(), g, 795e-9).unwrap();
        let c = diffraction_check(&p, &lg);
        assert!(c.max_phase < 0.1 && !c.flagged, "{c:?}");

        let g_small = GridSpec::new(128, 4e-3 / 20.0).unwrap();
        let tight = lg_field(LgModeSpec::new(1, 10e-6).unwrap(), g_small, 795e-9).unwrap();
        assert!(diffraction_check(&p, &tight).flagged);
    }
}
