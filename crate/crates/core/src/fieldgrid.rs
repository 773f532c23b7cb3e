//! Transverse fields sampled on square grids and their 2-D spectra.
//!
//! Pixel `(row, col)` sits at `x = cx + (col - n/2)·pitch`, `y = cy + (row - n/2)·pitch`,
//! so the grid center falls exactly on a pixel and the sampling is symmetric under
//! `x ↔ -x`, `y ↔ -y` and `x ↔ y` about that pixel (apart from the unpaired first row
//! and column). Spectra use the continuous convention
//! `F(q) = (1/2π) ∬ f(ρ) e^{-i q·ρ} d²ρ`, discretised so that
//! `Σ|F|² dq² = Σ|f|² dx²` holds to round-off.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square sampling grid for transverse fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Samples per side, a power of two no smaller than 16.
    pub n: usize,
    /// Physical side length in meters.
    pub extent: f64,
    /// Physical position of the central pixel in meters.
    #[serde(default)]
    pub center: (f64, f64),
}

impl GridSpec {
    pub fn new(n: usize, extent: f64) -> Result<Self> {
        let grid = Self {
            n,
            extent,
            center: (0.0, 0.0),
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn with_center(mut self, cx: f64, cy: f64) -> Self {
        self.center = (cx, cy);
        self
    }

    /// Grid sized for LG modes of waist `w0` up to charge `l_max`.
    ///
    /// The extent is `max(8, 5·(1+|l_max|))·w0`, which keeps every mode inside the
    /// support condition of [`crate::modes::lg_field`].
    pub fn for_modes(n: usize, w0: f64, l_max: i32) -> Result<Self> {
        let factor = (5.0 * (1.0 + l_max.unsigned_abs() as f64)).max(8.0);
        Self::new(n, factor * w0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 16 || !self.n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {} must be a power of two >= 16",
                self.n
            )));
        }
        if !(self.extent.is_finite() && self.extent > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "extent = {} must be positive",
                self.extent
            )));
        }
        if !(self.center.0.is_finite() && self.center.1.is_finite()) {
            return Err(Error::InvalidGrid("center must be finite".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn pitch(&self) -> f64 {
        self.extent / self.n as f64
    }

    pub fn pixel_area(&self) -> f64 {
        self.pitch() * self.pitch()
    }

    /// Offset of sample `i` from the grid center in units of the pitch.
    fn offset(&self, i: usize) -> f64 {
        i as f64 - (self.n / 2) as f64
    }

    pub fn x(&self, col: usize) -> f64 {
        self.center.0 + self.offset(col) * self.pitch()
    }

    pub fn y(&self, row: usize) -> f64 {
        self.center.1 + self.offset(row) * self.pitch()
    }

    /// Local coordinates relative to the grid center.
    pub fn local(&self, row: usize, col: usize) -> (f64, f64) {
        (self.offset(col) * self.pitch(), self.offset(row) * self.pitch())
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.n + col
    }

    /// Row and column of the pixel at the grid center.
    pub fn center_index(&self) -> (usize, usize) {
        (self.n / 2, self.n / 2)
    }

    /// Spacing of the spectral grid, rad/m.
    pub fn spectral_pitch(&self) -> f64 {
        2.0 * PI / self.extent
    }

    /// Angular spatial frequency of spectral sample `k`, rad/m.
    pub fn frequency(&self, k: usize) -> f64 {
        self.offset(k) * self.spectral_pitch()
    }

    /// `|q|²` for every spectral pixel in row-major order.
    pub fn frequency_sq(&self) -> Vec<f64> {
        let q: Vec<f64> = (0..self.n).map(|k| self.frequency(k)).collect();
        let mut out = Vec::with_capacity(self.len());
        for qy in &q {
            for qx in &q {
                out.push(qx * qx + qy * qy);
            }
        }
        out
    }
}

/// Complex scalar envelope sampled on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransverseField {
    grid: GridSpec,
    values: Vec<Complex64>,
    wavelength: f64,
}

impl TransverseField {
    pub fn new(grid: GridSpec, values: Vec<Complex64>, wavelength: f64) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.n,
                grid.n
            )));
        }
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::Domain(format!("wavelength {wavelength} must be > 0")));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::Domain("field contains non-finite samples".into()));
        }
        Ok(Self {
            grid,
            values,
            wavelength,
        })
    }

    /// Samples `f(x, y)` at grid-local coordinates (relative to the grid center).
    pub fn from_fn(
        grid: GridSpec,
        wavelength: f64,
        mut f: impl FnMut(f64, f64) -> Complex64,
    ) -> Result<Self> {
        grid.validate()?;
        let mut values = Vec::with_capacity(grid.len());
        for row in 0..grid.n {
            for col in 0..grid.n {
                let (x, y) = grid.local(row, col);
                values.push(f(x, y));
            }
        }
        Self::new(grid, values, wavelength)
    }

    pub fn zeros(grid: GridSpec, wavelength: f64) -> Result<Self> {
        Self::new(grid, vec![Complex64::new(0.0, 0.0); grid.len()], wavelength)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.values[self.grid.index(row, col)]
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.pixel_area()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Same field rescaled to unit norm. A zero field is returned unchanged.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scaled(Complex64::new(1.0 / n, 0.0))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    /// Pixel-wise map keeping grid and wavelength.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
            wavelength: self.wavelength,
        }
    }

    /// Pixel-wise map with access to grid-local coordinates.
    pub fn map_with_coords(&self, f: impl Fn(f64, f64, Complex64) -> Complex64) -> Self {
        let n = self.grid.n;
        let mut values = Vec::with_capacity(self.values.len());
        for row in 0..n {
            for col in 0..n {
                let (x, y) = self.grid.local(row, col);
                values.push(f(x, y, self.values[row * n + col]));
            }
        }
        Self {
            grid: self.grid,
            values,
            wavelength: self.wavelength,
        }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: Complex64, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + c * b)
                .collect(),
            wavelength: self.wavelength,
        })
    }

    pub(crate) fn regrid(&self, grid: GridSpec, values: Vec<Complex64>) -> Self {
        Self {
            grid,
            values,
            wavelength: self.wavelength,
        }
    }

    /// Unitary 2-D Fourier transform onto the spectral grid.
    pub fn to_spectrum(&self) -> SpectrumField {
        let g = &self.grid;
        let mut data = self.values.clone();
        fft2_centered(&mut data, g.n, FftDirection::Forward);
        let scale = g.pitch() / g.spectral_pitch();
        let (cx, cy) = g.center;
        let n = g.n;
        for row in 0..n {
            let qy = g.frequency(row);
            for col in 0..n {
                let qx = g.frequency(col);
                let shift = Complex64::from_polar(scale, -(qx * cx + qy * cy));
                data[row * n + col] *= shift;
            }
        }
        SpectrumField {
            grid: self.grid,
            values: data,
            wavelength: self.wavelength,
        }
    }

    /// Writes the normalised intensity as a 16-bit binary PGM, top row = largest y.
    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        write_intensity_pgm(&mut file, self)?;
        file.flush()?;
        Ok(())
    }

    /// Writes `x,y,re,im` rows in row-major order.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        self.write_csv_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_to<W: Write>(&self, w: &mut csv::Writer<W>) -> Result<()> {
        w.write_record(["x", "y", "re", "im"])?;
        let g = &self.grid;
        for row in 0..g.n {
            for col in 0..g.n {
                let v = self.at(row, col);
                w.write_record(&[
                    format!("{:.9e}", g.x(col)),
                    format!("{:.9e}", g.y(row)),
                    format!("{:.12e}", v.re),
                    format!("{:.12e}", v.im),
                ])?;
            }
        }
        Ok(())
    }
}

/// Writes `field` intensity as a 16-bit PGM to any writer.
pub fn write_intensity_pgm<W: Write>(w: &mut W, field: &TransverseField) -> Result<()> {
    let n = field.grid.n;
    let intensity = field.intensity();
    let peak = intensity.iter().cloned().fold(0.0, f64::max);
    write!(w, "P5\n{n} {n}\n65535\n")?;
    let mut buf = Vec::with_capacity(2 * n * n);
    for row in (0..n).rev() {
        for col in 0..n {
            let v = if peak > 0.0 {
                intensity[row * n + col] / peak
            } else {
                0.0
            };
            let level = (v * 65535.0).round().clamp(0.0, 65535.0) as u16;
            buf.extend_from_slice(&level.to_be_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

/// Spectrum `F(q)` of a [`TransverseField`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumField {
    /// Spatial grid of the field this spectrum belongs to.
    grid: GridSpec,
    values: Vec<Complex64>,
    wavelength: f64,
}

impl SpectrumField {
    pub fn spatial_grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Angular spatial frequency `(qx, qy)` of spectral pixel `(row, col)`.
    pub fn q(&self, row: usize, col: usize) -> (f64, f64) {
        (self.grid.frequency(col), self.grid.frequency(row))
    }

    pub fn pixel_area(&self) -> f64 {
        let dq = self.grid.spectral_pitch();
        dq * dq
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.pixel_area()
    }

    /// Multiplies each spectral sample by `f(q²)`.
    pub fn apply_radial(&mut self, f: impl Fn(f64) -> Complex64) {
        for (v, q2) in self.values.iter_mut().zip(self.grid.frequency_sq()) {
            *v *= f(q2);
        }
    }

    /// Inverse of [`TransverseField::to_spectrum`].
    pub fn to_field(&self) -> TransverseField {
        let g = &self.grid;
        let n = g.n;
        let (cx, cy) = g.center;
        let scale = g.spectral_pitch() / g.pitch();
        let mut data = self.values.clone();
        for row in 0..n {
            let qy = g.frequency(row);
            for col in 0..n {
                let qx = g.frequency(col);
                data[row * n + col] *= Complex64::from_polar(scale, qx * cx + qy * cy);
            }
        }
        fft2_centered(&mut data, n, FftDirection::Inverse);
        TransverseField {
            grid: self.grid,
            values: data,
            wavelength: self.wavelength,
        }
    }

    pub(crate) fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// Discrete `⟨a|b⟩ = Σ conj(a)·b·dA`.
pub fn inner_product(a: &TransverseField, b: &TransverseField) -> Result<Complex64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let s: Complex64 = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(s * a.grid.pixel_area())
}

/// Normalised overlap `|⟨a|b⟩| / (‖a‖‖b‖)`, zero if either field vanishes.
pub fn overlap(a: &TransverseField, b: &TransverseField) -> Result<f64> {
    let ip = inner_product(a, b)?;
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    Ok(ip.norm() / (na * nb))
}

/// Centered unitary 2-D DFT in place: origin at index `n/2` on both axes, `1/n` scaling.
pub(crate) fn fft2_centered(data: &mut [Complex64], n: usize, direction: FftDirection) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft(n, direction);
    swap_halves(data, n);
    for row in data.chunks_exact_mut(n) {
        fft.process(row);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); n];
    for col in 0..n {
        for row in 0..n {
            column[row] = data[row * n + col];
        }
        fft.process(&mut column);
        for row in 0..n {
            data[row * n + col] = column[row];
        }
    }
    swap_halves(data, n);
    let scale = 1.0 / n as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// 2-D fftshift for even `n` (its own inverse).
fn swap_halves(data: &mut [Complex64], n: usize) {
    let h = n / 2;
    for row in 0..h {
        for col in 0..n {
            let other_col = (col + h) % n;
            data.swap(row * n + col, (row + h) * n + other_col);
        }
    }
}
