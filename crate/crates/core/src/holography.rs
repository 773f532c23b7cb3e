//! Binary phase holograms, Fraunhofer diffraction and projection onto OAM modes.
//!
//! A hologram multiplies an incident field by `e^{iφ(x,y)}`; the lens that follows
//! maps it to its Fourier plane. Pixels whose center falls exactly on a 0/π boundary
//! transmit the mean of both sides, i.e. nothing, which keeps the sampled masks
//! exactly as symmetric as the continuous ones.

use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fieldgrid::{inner_product, GridSpec, TransverseField};
use crate::modes::{synthesize, LgModeSpec, QuditState};

const BINARY_TOL: f64 = 1e-9;

/// Phase-only transmission mask.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseHologram {
    grid: GridSpec,
    phase: Vec<f64>,
    on_boundary: Vec<bool>,
    binary: bool,
}

impl PhaseHologram {
    /// General hologram; phases are wrapped to `[0, 2π)`.
    pub fn new(grid: GridSpec, phase: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if phase.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} phases for a {}-pixel grid",
                phase.len(),
                grid.len()
            )));
        }
        let phase: Vec<f64> = phase.into_iter().map(|p| p.rem_euclid(TAU)).collect();
        let on_boundary = vec![false; phase.len()];
        Ok(Self::assemble(grid, phase, on_boundary))
    }

    fn assemble(grid: GridSpec, phase: Vec<f64>, on_boundary: Vec<bool>) -> Self {
        let binary = phase
            .iter()
            .all(|&p| p.abs() < BINARY_TOL || (p - PI).abs() < BINARY_TOL);
        Self {
            grid,
            phase,
            on_boundary,
            binary,
        }
    }

    /// Binary mask `Arg[g(x, y)]` from a real-valued function `g`.
    fn from_sign(grid: GridSpec, g: impl Fn(f64, f64) -> f64) -> Result<Self> {
        grid.validate()?;
        let mut phase = Vec::with_capacity(grid.len());
        let mut on_boundary = Vec::with_capacity(grid.len());
        for row in 0..grid.n {
            for col in 0..grid.n {
                let (x, y) = grid.local(row, col);
                let v = g(x, y);
                phase.push(if v < 0.0 { PI } else { 0.0 });
                on_boundary.push(v == 0.0);
            }
        }
        Ok(Self::assemble(grid, phase, on_boundary))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    pub fn is_binary(&self) -> bool {
        self.binary
    }

    /// Complex transmission of each pixel.
    pub fn transmission(&self) -> Vec<Complex64> {
        self.phase
            .iter()
            .zip(&self.on_boundary)
            .map(|(&p, &b)| {
                if b {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::from_polar(1.0, p)
                }
            })
            .collect()
    }

    /// Resamples the mask onto square device pixels of side `pitch` centered on the
    /// optical axis; each grid pixel takes the phase of the device pixel containing it.
    pub fn pixelated(&self, pitch: f64) -> Result<Self> {
        if !(pitch.is_finite() && pitch > 0.0) {
            return Err(Error::Domain(format!("device pitch {pitch} must be > 0")));
        }
        let g = self.grid;
        let n = g.n;
        let snap = |v: f64| {
            let k = (v / pitch).round();
            let idx = (k * pitch / g.pitch()).round() + (n / 2) as f64;
            idx.clamp(0.0, (n - 1) as f64) as usize
        };
        let mut phase = Vec::with_capacity(g.len());
        let mut on_boundary = Vec::with_capacity(g.len());
        for row in 0..n {
            for col in 0..n {
                let (x, y) = g.local(row, col);
                let src = g.index(snap(y), snap(x));
                phase.push(self.phase[src]);
                on_boundary.push(self.on_boundary[src]);
            }
        }
        Ok(Self::assemble(g, phase, on_boundary))
    }

    /// Applies the mask to an incident field on the same grid.
    pub fn apply(&self, field: &TransverseField) -> Result<TransverseField> {
        if field.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let values = field
            .values()
            .iter()
            .zip(self.transmission())
            .map(|(v, t)| v * t)
            .collect();
        TransverseField::new(self.grid, values, field.wavelength())
    }

    /// 8-bit PGM with phase 0 → 0 and π → 255. Non-binary masks use a 16-bit
    /// maxval of 510 so that the same mapping holds over `[0, 2π)`.
    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_pgm_to(&mut file)?;
        file.flush()?;
        Ok(())
    }

    pub fn write_pgm_to<W: Write>(&self, w: &mut W) -> Result<()> {
        let n = self.grid.n;
        let maxval = if self.binary { 255 } else { 510 };
        write!(w, "P5\n{n} {n}\n{maxval}\n")?;
        for row in (0..n).rev() {
            for col in 0..n {
                let level = (self.phase[row * n + col] / PI * 255.0)
                    .round()
                    .clamp(0.0, maxval as f64) as u16;
                if self.binary {
                    w.write_all(&[level as u8])?;
                } else {
                    w.write_all(&level.to_be_bytes())?;
                }
            }
        }
        Ok(())
    }
}

/// `Arg[cos(lφ)]`, which diffracts a Gaussian into `|L⟩ + |R⟩` of charge `±l`.
pub fn qubit_hologram(l: i32, grid: GridSpec) -> Result<PhaseHologram> {
    if l == 0 {
        return Err(Error::InvalidCharge(l));
    }
    let order = l.unsigned_abs();
    // cos(lφ)·r^l = Re[(x + iy)^l], exact zeros on the nodal lines
    PhaseHologram::from_sign(grid, |x, y| Complex64::new(x, y).powu(order).re)
}

/// `Arg[1 + 2√2·r·cosφ/w0]`, which diffracts a Gaussian into a `|L⟩,|G⟩,|R⟩`
/// superposition with charge `±1`.
pub fn qutrit_hologram(l: i32, w0: f64, grid: GridSpec) -> Result<PhaseHologram> {
    if l != 1 {
        return Err(Error::InvalidCharge(l));
    }
    if !(w0.is_finite() && w0 > 0.0) {
        return Err(Error::Domain(format!("waist {w0} must be > 0")));
    }
    let a = 2.0 * std::f64::consts::SQRT_2 / w0;
    PhaseHologram::from_sign(grid, |x, _| 1.0 + a * x)
}

/// Far field in the back focal plane of a lens of focal length `focal`.
///
/// Output coordinates are `x' = q·focal·λ/(2π)`; the output grid keeps `n` and has
/// extent `n·focal·λ/L`. The constant `-i` of a physical 2f system is dropped.
pub fn fraunhofer(field: &TransverseField, focal: f64) -> Result<TransverseField> {
    if !(focal.is_finite() && focal > 0.0) {
        return Err(Error::Domain(format!("focal length {focal} must be > 0")));
    }
    let g = field.grid();
    let lambda = field.wavelength();
    let scale_len = focal * lambda / TAU;
    let out_grid = GridSpec {
        n: g.n,
        extent: g.n as f64 * g.spectral_pitch() * scale_len,
        center: (0.0, 0.0),
    };
    out_grid.validate()?;
    let amp = 1.0 / scale_len;
    let values = field
        .to_spectrum()
        .into_values()
        .into_iter()
        .map(|v| v * amp)
        .collect();
    Ok(field.regrid(out_grid, values))
}

/// Grid in the hologram plane whose Fraunhofer image resolves modes equally well:
/// both planes span the same number of waists.
pub fn matched_input_grid(n: usize, w_in: f64, focal: f64, wavelength: f64) -> Result<GridSpec> {
    let w_out = output_waist(w_in, focal, wavelength);
    let extent = (n as f64 * focal * wavelength * w_in / w_out).sqrt();
    GridSpec::new(n, extent)
}

/// Waist of the Fourier image of a Gaussian of waist `w_in`.
pub fn output_waist(w_in: f64, focal: f64, wavelength: f64) -> f64 {
    wavelength * focal / (PI * w_in)
}

/// Fraunhofer image of a normalised Gaussian of waist `w_in` passed through `hologram`.
pub fn diffract_gaussian(
    hologram: &PhaseHologram,
    w_in: f64,
    focal: f64,
    wavelength: f64,
) -> Result<TransverseField> {
    let spec = LgModeSpec::new(0, w_in)?;
    let beam = TransverseField::from_fn(*hologram.grid(), wavelength, |x, y| spec.amplitude(x, y))?;
    fraunhofer(&hologram.apply(&beam)?, focal)
}

/// Amplitude `⟨target|f⟩` delivered to a single-mode fiber after the projection
/// hologram; detection probability is its squared modulus.
pub fn project_and_couple(
    field: &TransverseField,
    target: &QuditState,
    w0: f64,
) -> Result<Complex64> {
    let mode = synthesize(target, w0, *field.grid(), field.wavelength())?;
    inner_product(&mode, field)
}

/// Mode content of a generated field within the qudit basis of `l`.
#[derive(Debug, Clone)]
pub struct ModeContent {
    /// Amplitudes over `[L, G, R]`.
    pub amplitudes: [Complex64; 3],
    /// Fraction of the field's power inside the three modes.
    pub efficiency: f64,
}

impl ModeContent {
    /// The normalised qutrit obtained by discarding power outside the subspace.
    pub fn state(&self, l: i32) -> Result<QuditState> {
        QuditState::new(self.amplitudes.to_vec(), l)
    }

    /// The normalised qubit `[L, R]`, ignoring the `G` amplitude.
    pub fn qubit_state(&self, l: i32) -> Result<QuditState> {
        QuditState::new(vec![self.amplitudes[0], self.amplitudes[2]], l)
    }
}

pub fn mode_content(field: &TransverseField, w0: f64, l: i32) -> Result<ModeContent> {
    let amps = crate::modes::decompose(field, w0, &[l, 0, -l])?;
    let total = field.norm_sqr();
    let inside: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    Ok(ModeContent {
        amplitudes: [amps[0], amps[1], amps[2]],
        efficiency: if total > 0.0 { inside / total } else { 0.0 },
    })
}
