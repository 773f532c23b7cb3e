//! Laguerre-Gaussian OAM modes and qubit/qutrit superpositions.
//!
//! Basis ordering is fixed: `[L, R]` for qubits and `[L, G, R]` for qutrits, with
//! `L` carrying charge `+l`, `R` carrying `-l` and `G` the fundamental Gaussian.
//! All modes of one state share a single waist.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldgrid::{inner_product, GridSpec, TransverseField};

/// An `LG_{l,0}` mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LgModeSpec {
    pub l: i32,
    /// Beam waist (1/e field radius), meters.
    pub w0: f64,
}

impl LgModeSpec {
    pub fn new(l: i32, w0: f64) -> Result<Self> {
        if !(w0.is_finite() && w0 > 0.0) {
            return Err(Error::Domain(format!("waist {w0} must be > 0")));
        }
        Ok(Self { l, w0 })
    }

    /// Radial index; only `p = 0` modes are represented.
    pub fn p(&self) -> u32 {
        0
    }

    /// Analytic amplitude at grid-local `(x, y)`.
    pub fn amplitude(&self, x: f64, y: f64) -> Complex64 {
        let order = self.l.unsigned_abs();
        let w = self.w0;
        let norm = (2.0 / (PI * factorial(order))).sqrt() / w;
        let scale = std::f64::consts::SQRT_2 / w;
        let z = if self.l >= 0 {
            Complex64::new(x, y)
        } else {
            Complex64::new(x, -y)
        } * scale;
        let radial = (-(x * x + y * y) / (w * w)).exp();
        z.powu(order) * (norm * radial)
    }
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Samples a normalised `LG_{l,0}` mode on `grid`.
pub fn lg_field(spec: LgModeSpec, grid: GridSpec, wavelength: f64) -> Result<TransverseField> {
    let support = spec.w0 * (1.0 + spec.l.unsigned_abs() as f64);
    if support >= grid.extent / 4.0 {
        return Err(Error::GridTooSmall {
            support,
            needed: 4.0 * support,
        });
    }
    TransverseField::from_fn(grid, wavelength, |x, y| spec.amplitude(x, y))
}

/// One of the three OAM basis states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OamBasis {
    L,
    G,
    R,
}

impl OamBasis {
    pub fn charge(self, l: i32) -> i32 {
        match self {
            OamBasis::L => l,
            OamBasis::G => 0,
            OamBasis::R => -l,
        }
    }
}

/// A qubit or qutrit over the ordered OAM basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuditState {
    coeffs: Vec<Complex64>,
    l: i32,
}

impl QuditState {
    /// Builds a state from unnormalised coefficients; they are rescaled to unit norm.
    pub fn new(coeffs: Vec<Complex64>, l: i32) -> Result<Self> {
        if coeffs.len() != 2 && coeffs.len() != 3 {
            return Err(Error::Domain(format!(
                "qudit dimension {} not in {{2, 3}}",
                coeffs.len()
            )));
        }
        if l == 0 {
            return Err(Error::InvalidCharge(l));
        }
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Domain("state vector has zero norm".into()));
        }
        Ok(Self {
            coeffs: coeffs.into_iter().map(|c| c / norm).collect(),
            l,
        })
    }

    pub fn qutrit(l_coef: Complex64, g_coef: Complex64, r_coef: Complex64, l: i32) -> Result<Self> {
        Self::new(vec![l_coef, g_coef, r_coef], l)
    }

    /// The basis vector `b` of a `dim`-dimensional space.
    pub fn basis(dim: usize, b: OamBasis, l: i32) -> Result<Self> {
        let idx = Self::basis_index(dim, b).ok_or_else(|| {
            Error::Domain(format!("basis {b:?} does not exist in dimension {dim}"))
        })?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
        coeffs[idx] = Complex64::new(1.0, 0.0);
        Self::new(coeffs, l)
    }

    fn basis_index(dim: usize, b: OamBasis) -> Option<usize> {
        match (dim, b) {
            (_, OamBasis::L) => Some(0),
            (2, OamBasis::R) => Some(1),
            (3, OamBasis::G) => Some(1),
            (3, OamBasis::R) => Some(2),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn charge(&self) -> i32 {
        self.l
    }

    /// Ordered basis labels for this dimension.
    pub fn basis_order(&self) -> &'static [OamBasis] {
        basis_order(self.dim())
    }

    /// Topological charge carried by each coefficient.
    pub fn charges(&self) -> Vec<i32> {
        self.basis_order().iter().map(|b| b.charge(self.l)).collect()
    }

    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch(self.dim(), other.dim()));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

pub fn basis_order(dim: usize) -> &'static [OamBasis] {
    if dim == 2 {
        &[OamBasis::L, OamBasis::R]
    } else {
        &[OamBasis::L, OamBasis::G, OamBasis::R]
    }
}

/// `cos(γ/2)|L⟩ + sin(γ/2)e^{iβ}|R⟩`.
pub fn qubit_state(gamma: f64, beta: f64, l: i32) -> Result<QuditState> {
    QuditState::new(
        vec![
            Complex64::new((gamma / 2.0).cos(), 0.0),
            Complex64::from_polar((gamma / 2.0).sin(), beta),
        ],
        l,
    )
}

/// Equator state `(|L⟩ + e^{iβ}|R⟩)/√2`.
pub fn equator_state(beta: f64, l: i32) -> Result<QuditState> {
    qubit_state(PI / 2.0, beta, l)
}

/// Coherent sum `Σ cᵢ·LG_i` on `grid`; no renormalisation beyond the modes' own.
pub fn synthesize(
    state: &QuditState,
    w0: f64,
    grid: GridSpec,
    wavelength: f64,
) -> Result<TransverseField> {
    let specs = state
        .charges()
        .into_iter()
        .map(|l| LgModeSpec::new(l, w0))
        .collect::<Result<Vec<_>>>()?;
    for s in &specs {
        let support = s.w0 * (1.0 + s.l.unsigned_abs() as f64);
        if support >= grid.extent / 4.0 {
            return Err(Error::GridTooSmall {
                support,
                needed: 4.0 * support,
            });
        }
    }
    let coeffs = state.coeffs().to_vec();
    TransverseField::from_fn(grid, wavelength, |x, y| {
        specs
            .iter()
            .zip(&coeffs)
            .map(|(s, c)| c * s.amplitude(x, y))
            .sum()
    })
}

/// Amplitudes `⟨LG_l|f⟩` for each requested charge, all modes with waist `w0`.
pub fn decompose(field: &TransverseField, w0: f64, charges: &[i32]) -> Result<Vec<Complex64>> {
    charges
        .iter()
        .map(|&l| {
            let mode = lg_field(LgModeSpec::new(l, w0)?, *field.grid(), field.wavelength())?;
            inner_product(&mode, field)
        })
        .collect()
}
