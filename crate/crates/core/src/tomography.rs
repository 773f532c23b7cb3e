//! Density-matrix reconstruction from projective counts and state-comparison
//! metrics.
//!
//! Linear inversion is solved in a trace-fixed Gell-Mann parametrisation, then
//! projected onto the PSD cone by clipping eigenvalues. An optional
//! maximum-likelihood pass refines the result with the diluted `RρR` iteration.

use std::fmt::Write as _;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::CountRecord;
use crate::modes::{OamBasis, QuditState};
use crate::rng::StreamSeed;

const HERMITIAN_TOL: f64 = 1e-10;
const ML_TOL: f64 = 1e-10;
const ML_MAX_ITER: usize = 10_000;

type CMatrix = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Hermitian, unit-trace, positive semidefinite matrix of dimension 2 or 3.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    /// Validates `m` and wraps it.
    pub fn new(m: CMatrix) -> Result<Self> {
        let d = m.nrows();
        if m.ncols() != d {
            return Err(Error::DimMismatch(m.nrows(), m.ncols()));
        }
        if d != 2 && d != 3 {
            return Err(Error::Domain(format!("density matrix dimension {d} not in {{2, 3}}")));
        }
        let asym = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > HERMITIAN_TOL {
            return Err(Error::NotPsd(format!("not Hermitian (deviation {asym:.2e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > HERMITIAN_TOL || tr.im.abs() > HERMITIAN_TOL {
            return Err(Error::NotPsd(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eigen(&m).0.min();
        if min < -HERMITIAN_TOL {
            return Err(Error::NotPsd(format!("eigenvalue {min:.3e} < 0")));
        }
        Ok(Self { m })
    }

    pub fn pure(state: &QuditState) -> Self {
        let v = DVector::from_column_slice(state.coeffs());
        Self { m: &v * v.adjoint() }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim, dim) / c(dim as f64, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.m).0.iter().cloned().collect()
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &DVector<Complex64>) -> f64 {
        (psi.adjoint() * &self.m * psi)[(0, 0)].re
    }

    /// `UρU†`.
    pub fn transform(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.dim() {
            return Err(Error::DimMismatch(u.nrows(), self.dim()));
        }
        let m = u * &self.m * u.adjoint();
        Ok(Self {
            m: (&m + m.adjoint()) * c(0.5, 0.0),
        })
    }

    /// `row,col,re,im`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["row", "col", "re", "im"])?;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let z = self.m[(i, j)];
                out.write_record(&[i.to_string(), j.to_string(), format!("{}", z.re), format!("{}", z.im)])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

fn hermitian_eigen(m: &CMatrix) -> (DVector<f64>, CMatrix) {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    let eig = h.symmetric_eigen();
    (eig.eigenvalues, eig.eigenvectors)
}

fn from_eigen(vals: &DVector<f64>, vecs: &CMatrix) -> CMatrix {
    let d = CMatrix::from_diagonal(&vals.map(|v| c(v, 0.0)));
    vecs * d * vecs.adjoint()
}

fn sqrt_psd(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    from_eigen(&vals.map(|v| v.max(0.0).sqrt()), &vecs)
}

/// Fidelity convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityConvention {
    /// `tr√(√ρ·ρ₀·√ρ)`.
    #[default]
    SquareRoot,
    /// The square of the above.
    Squared,
}

/// Square-root fidelity `tr√(√ρ·ρ₀·√ρ)`.
pub fn fidelity(rho: &DensityMatrix, rho0: &DensityMatrix) -> Result<f64> {
    fidelity_with(rho, rho0, FidelityConvention::SquareRoot)
}

pub fn fidelity_with(rho: &DensityMatrix, rho0: &DensityMatrix, conv: FidelityConvention) -> Result<f64> {
    if rho.dim() != rho0.dim() {
        return Err(Error::DimMismatch(rho.dim(), rho0.dim()));
    }
    let s = sqrt_psd(&rho.m);
    let inner = &s * &rho0.m * &s;
    let f = hermitian_eigen(&inner)
        .0
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .sum::<f64>()
        .min(1.0);
    Ok(match conv {
        FidelityConvention::SquareRoot => f,
        FidelityConvention::Squared => f * f,
    })
}

/// `½·tr|ρ − σ|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch(rho.dim(), sigma.dim()));
    }
    Ok(0.5 * hermitian_eigen(&(&rho.m - &sigma.m)).0.iter().map(|v| v.abs()).sum::<f64>())
}

/// Labelled projector states for one tomography scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSet {
    dim: usize,
    labels: Vec<String>,
    states: Vec<DVector<Complex64>>,
    /// Indices of the projectors whose sum is the identity.
    reference: Vec<usize>,
}

impl ProjectionSet {
    /// Builds a set from `(label, unnormalised coefficients)`; `reference` names
    /// the labels used as the flux reference.
    pub fn new(dim: usize, projectors: Vec<(String, Vec<Complex64>)>, reference: &[&str]) -> Result<Self> {
        let mut labels = Vec::new();
        let mut states = Vec::new();
        for (label, coeffs) in projectors {
            if coeffs.len() != dim {
                return Err(Error::DimMismatch(coeffs.len(), dim));
            }
            if labels.contains(&label) {
                return Err(Error::Domain(format!("duplicate projector `{label}`")));
            }
            let v = DVector::from_vec(coeffs);
            let n = v.norm();
            if n == 0.0 {
                return Err(Error::Domain(format!("projector `{label}` has zero norm")));
            }
            labels.push(label);
            states.push(v / c(n, 0.0));
        }
        let reference = reference
            .iter()
            .map(|r| {
                labels
                    .iter()
                    .position(|l| l == r)
                    .ok_or_else(|| Error::MissingBasis(r.to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            dim,
            labels,
            states,
            reference,
        })
    }

    /// `{L, R, L+R, L+iR, L−R}`.
    pub fn qubit() -> Self {
        let o = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        let p = |s: &str, v: [Complex64; 2]| (s.to_string(), v.to_vec());
        Self::new(
            2,
            vec![
                p("L", [one, o]),
                p("R", [o, one]),
                p("L+R", [one, one]),
                p("L+iR", [one, i]),
                p("L-R", [one, -one]),
            ],
            &["L", "R"],
        )
        .expect("static projector set")
    }

    /// `{L, G, R, G−L, G+R, G+iL, G−iR, L+iR, L−R}`, coefficients ordered `(L, G, R)`.
    pub fn qutrit() -> Self {
        let o = c(0.0, 0.0);
        let one = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        let p = |s: &str, v: [Complex64; 3]| (s.to_string(), v.to_vec());
        Self::new(
            3,
            vec![
                p("L", [one, o, o]),
                p("G", [o, one, o]),
                p("R", [o, o, one]),
                p("G-L", [-one, one, o]),
                p("G+R", [o, one, one]),
                p("G+iL", [i, one, o]),
                p("G-iR", [o, one, -i]),
                p("L+iR", [one, o, i]),
                p("L-R", [one, o, -one]),
            ],
            &["L", "G", "R"],
        )
        .expect("static projector set")
    }

    pub fn for_dim(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(Self::qubit()),
            3 => Ok(Self::qutrit()),
            d => Err(Error::Domain(format!("no projection set for dimension {d}"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn state(&self, i: usize) -> &DVector<Complex64> {
        &self.states[i]
    }

    /// Projector `i` as a [`QuditState`] carrying charge `l`.
    pub fn qudit(&self, i: usize, l: i32) -> Result<QuditState> {
        QuditState::new(self.states[i].iter().cloned().collect(), l)
    }

    pub fn reference(&self) -> &[usize] {
        &self.reference
    }

    pub fn reference_labels(&self) -> Vec<&str> {
        self.reference.iter().map(|&i| self.labels[i].as_str()).collect()
    }

    /// Rank of the real design matrix mapping Hermitian matrices to `p_i`.
    pub fn design_rank(&self) -> usize {
        let a = self.design_matrix(true);
        let sv = a.singular_values();
        let max = sv.max();
        sv.iter().filter(|&&s| s > 1e-10 * max.max(1.0)).count()
    }

    /// Rows `⟨ψ_i|B_k|ψ_i⟩` over the orthonormal Hermitian basis; with
    /// `with_identity` the first column is the `I/√d` component.
    fn design_matrix(&self, with_identity: bool) -> DMatrix<f64> {
        let basis = hermitian_basis(self.dim);
        let skip = usize::from(!with_identity);
        let cols = basis.len() - skip;
        DMatrix::from_fn(self.len(), cols, |i, k| {
            let psi = &self.states[i];
            (psi.adjoint() * &basis[k + skip] * psi)[(0, 0)].re
        })
    }
}

/// Orthonormal (Hilbert–Schmidt) Hermitian basis: `I/√d` followed by the
/// generalized Gell-Mann matrices.
fn hermitian_basis(d: usize) -> Vec<CMatrix> {
    let mut out = vec![CMatrix::identity(d, d) / c((d as f64).sqrt(), 0.0)];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in j + 1..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(j, k)] = c(s, 0.0);
            sym[(k, j)] = c(s, 0.0);
            out.push(sym);
            let mut asym = CMatrix::zeros(d, d);
            asym[(j, k)] = c(0.0, -s);
            asym[(k, j)] = c(0.0, s);
            out.push(asym);
        }
    }
    for m in 1..d {
        let norm = ((m * (m + 1)) as f64).sqrt();
        let mut diag = CMatrix::zeros(d, d);
        for j in 0..m {
            diag[(j, j)] = c(1.0 / norm, 0.0);
        }
        diag[(m, m)] = c(-(m as f64) / norm, 0.0);
        out.push(diag);
    }
    out
}

/// Born-rule probabilities of `rho` on every projector of `set`.
pub fn probabilities(rho: &DensityMatrix, set: &ProjectionSet) -> Result<Vec<f64>> {
    if rho.dim() != set.dim() {
        return Err(Error::DimMismatch(rho.dim(), set.dim()));
    }
    Ok(set.states.iter().map(|psi| rho.expectation(psi).clamp(0.0, 1.0)).collect())
}

/// How counts are turned into probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Divide by the summed counts of the identity-resolving subset (`L+R` or `L+G+R`).
    #[default]
    ReferenceSubset,
    /// Divide by a known flux.
    Flux(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReconstructOptions {
    #[serde(default)]
    pub normalization: Normalization,
    #[serde(default)]
    pub max_likelihood: bool,
}

/// Estimate plus the intermediate quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub rho: DensityMatrix,
    /// Normalised frequencies in projector order.
    pub frequencies: Vec<f64>,
    /// Counts in projector order.
    pub counts: Vec<f64>,
    /// Total weight of eigenvalues removed by the PSD projection.
    pub clipped_mass: f64,
    /// Iterations used by the likelihood refinement (0 when disabled).
    pub ml_iterations: usize,
}

/// Orders `records` to match `set`; every projector needs exactly one record.
pub fn counts_for(records: &[CountRecord], set: &ProjectionSet) -> Result<Vec<f64>> {
    set.labels
        .iter()
        .map(|label| {
            let mut it = records.iter().filter(|r| &r.basis_id == label);
            let r = it.next().ok_or_else(|| Error::MissingBasis(label.clone()))?;
            if it.next().is_some() {
                return Err(Error::InsufficientData(format!("more than one record for `{label}`")));
            }
            Ok(r.counts)
        })
        .collect()
}

pub fn reconstruct(records: &[CountRecord], set: &ProjectionSet, opts: ReconstructOptions) -> Result<DensityMatrix> {
    Ok(reconstruct_detailed(records, set, opts)?.rho)
}

pub fn reconstruct_detailed(
    records: &[CountRecord],
    set: &ProjectionSet,
    opts: ReconstructOptions,
) -> Result<Reconstruction> {
    let counts = counts_for(records, set)?;
    reconstruct_counts(&counts, set, opts)
}

/// Reconstruction from counts already in projector order.
pub fn reconstruct_counts(counts: &[f64], set: &ProjectionSet, opts: ReconstructOptions) -> Result<Reconstruction> {
    if counts.len() != set.len() {
        return Err(Error::DimMismatch(counts.len(), set.len()));
    }
    if counts.iter().any(|&n| !(n.is_finite() && n >= 0.0)) {
        return Err(Error::Domain("counts must be finite and non-negative".into()));
    }
    let reference = match opts.normalization {
        Normalization::ReferenceSubset => set.reference.iter().map(|&i| counts[i]).sum::<f64>(),
        Normalization::Flux(f) => f,
    };
    if !(reference > 0.0) {
        return Err(Error::NoCounts);
    }
    let freqs: Vec<f64> = counts.iter().map(|n| n / reference).collect();
    let linear = linear_inversion(&freqs, set)?;
    let (mut rho, clipped_mass) = project_psd(&linear)?;
    let mut ml_iterations = 0;
    if opts.max_likelihood {
        let (r, it) = ml_refine(&rho, counts, set)?;
        rho = r;
        ml_iterations = it;
    }
    Ok(Reconstruction {
        rho,
        frequencies: freqs,
        counts: counts.to_vec(),
        clipped_mass,
        ml_iterations,
    })
}

/// Least-squares Hermitian unit-trace solution of `p_i = ⟨ψ_i|ρ|ψ_i⟩`; may have
/// negative eigenvalues.
pub fn linear_inversion(freqs: &[f64], set: &ProjectionSet) -> Result<CMatrix> {
    let d = set.dim;
    if freqs.len() != set.len() {
        return Err(Error::DimMismatch(freqs.len(), set.len()));
    }
    let rank = set.design_rank();
    if rank < d * d {
        return Err(Error::InsufficientData(format!(
            "design matrix rank {rank} < {}",
            d * d
        )));
    }
    let basis = hermitian_basis(d);
    let a = set.design_matrix(false);
    // identity part fixed by unit trace: ρ = I/d + Σ x_k G_k
    let b = DVector::from_iterator(
        set.len(),
        freqs.iter().zip(&set.states).map(|(f, psi)| f - psi.norm_squared() / d as f64),
    );
    let x = a
        .svd(true, true)
        .solve(&b, 1e-12)
        .map_err(|e| Error::InsufficientData(e.to_string()))?;
    let mut m = CMatrix::identity(d, d) / c(d as f64, 0.0);
    for (k, g) in basis.iter().skip(1).enumerate() {
        m += g * c(x[k], 0.0);
    }
    Ok(m)
}

/// Clips negative eigenvalues to zero and renormalises the trace. Returns the
/// projected matrix and the clipped mass.
pub fn project_psd(m: &CMatrix) -> Result<(DensityMatrix, f64)> {
    let (vals, vecs) = hermitian_eigen(m);
    let clipped: f64 = vals.iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
    let kept = vals.map(|v| v.max(0.0));
    let total = kept.sum();
    if !(total > 0.0) {
        return Err(Error::NotPsd("no positive eigenvalues".into()));
    }
    let out = from_eigen(&(kept / total), &vecs);
    let out = (&out + out.adjoint()) * c(0.5, 0.0);
    Ok((DensityMatrix::new(out)?, clipped))
}

fn log_likelihood(rho: &CMatrix, counts: &[f64], set: &ProjectionSet) -> f64 {
    let p: Vec<f64> = set.states.iter().map(|psi| (psi.adjoint() * rho * psi)[(0, 0)].re.max(1e-300)).collect();
    let sp: f64 = p.iter().sum();
    counts.iter().zip(&p).filter(|(n, _)| **n > 0.0).map(|(n, pi)| n * (pi / sp).ln()).sum()
}

/// `RρR` iteration for a set whose projectors do not sum to the identity:
/// `ρ ← H⁻¹RρRH⁻¹`, normalised, with `R = Σ n_i/p_i·Π_i` and `H = (Σn/Σp)·ΣΠ_i`.
fn ml_refine(start: &DensityMatrix, counts: &[f64], set: &ProjectionSet) -> Result<(DensityMatrix, usize)> {
    let d = set.dim;
    let projectors: Vec<CMatrix> = set.states.iter().map(|v| v * v.adjoint()).collect();
    let g: CMatrix = projectors.iter().fold(CMatrix::zeros(d, d), |acc, p| acc + p);
    let g_inv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InsufficientData("projectors do not span the space".into()))?;
    // keep every eigenvalue away from zero so p_i > 0 where n_i > 0
    let mut rho = start.m.clone() * c(1.0 - 1e-6, 0.0) + CMatrix::identity(d, d) * c(1e-6 / d as f64, 0.0);
    let total: f64 = counts.iter().sum();
    let mut ll = log_likelihood(&rho, counts, set);
    for it in 1..=ML_MAX_ITER {
        let p: Vec<f64> = set.states.iter().map(|psi| (psi.adjoint() * &rho * psi)[(0, 0)].re.max(1e-300)).collect();
        let sp: f64 = p.iter().sum();
        let mut r = CMatrix::zeros(d, d);
        for ((proj, n), pi) in projectors.iter().zip(counts).zip(&p) {
            r += proj * c(n / pi, 0.0);
        }
        let h_inv = &g_inv * c(sp / total, 0.0);
        let next = &h_inv * &r * &rho * &r * &h_inv;
        let next = (&next + next.adjoint()) * c(0.5, 0.0);
        let tr = next.trace().re;
        rho = next / c(tr, 0.0);
        let new_ll = log_likelihood(&rho, counts, set);
        let done = (new_ll - ll).abs() < ML_TOL;
        ll = new_ll;
        if done {
            return Ok((project_psd(&rho)?.0, it));
        }
    }
    Ok((project_psd(&rho)?.0, ML_MAX_ITER))
}

/// Haar-random pure state of dimension `dim`.
pub fn random_state(dim: usize, l: i32, rng: &mut impl Rng) -> Result<QuditState> {
    let coeffs = (0..dim)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    QuditState::new(coeffs, l)
}

/// Haar-random unitary via QR of a complex Gaussian matrix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let z = CMatrix::from_fn(dim, dim, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        (0..dim).map(|i| {
            let d = r[(i, i)];
            if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) }
        }),
    ));
    q * phases
}

/// Poisson resample of each record's counts around its observed value.
pub fn resample_counts(records: &[CountRecord], seed: StreamSeed) -> Vec<CountRecord> {
    let mut rng = seed.rng();
    records
        .iter()
        .map(|r| {
            let counts = if r.counts > 0.0 {
                Poisson::new(r.counts).map(|d| d.sample(&mut rng)).unwrap_or(0.0)
            } else {
                0.0
            };
            CountRecord { counts, ..r.clone() }
        })
        .collect()
}

/// Mean and standard deviation of the fidelity over `n` Poisson resamples.
pub fn fidelity_spread(
    records: &[CountRecord],
    set: &ProjectionSet,
    reference: &DensityMatrix,
    opts: ReconstructOptions,
    n: usize,
    seed: StreamSeed,
) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::Domain("need at least two resamples".into()));
    }
    let fs = (0..n)
        .map(|k| {
            let rs = resample_counts(records, seed.child(k as u64));
            fidelity(&reconstruct(&rs, set, opts)?, reference)
        })
        .collect::<Result<Vec<_>>>()?;
    let mean = fs.iter().sum::<f64>() / n as f64;
    let var = fs.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Ok((mean, var.sqrt()))
}

/// Plain-text summary: per-basis counts and probabilities, the matrix and the fidelity.
pub fn report(set: &ProjectionSet, rec: &Reconstruction, reference: Option<&DensityMatrix>) -> Result<String> {
    let mut s = String::new();
    let p = probabilities(&rec.rho, set)?;
    writeln!(s, "basis\tcounts\tfreq\tp_fit").unwrap();
    for (i, label) in set.labels.iter().enumerate() {
        writeln!(s, "{label}\t{}\t{:.6}\t{:.6}", rec.counts[i], rec.frequencies[i], p[i]).unwrap();
    }
    writeln!(s, "\nrho (re, im):").unwrap();
    for i in 0..set.dim {
        let row: Vec<String> = (0..set.dim)
            .map(|j| {
                let z = rec.rho.entry(i, j);
                format!("{:+.6}{:+.6}i", z.re, z.im)
            })
            .collect();
        writeln!(s, "  {}", row.join("  ")).unwrap();
    }
    writeln!(s, "clipped_mass\t{:.3e}", rec.clipped_mass).unwrap();
    if rec.ml_iterations > 0 {
        writeln!(s, "ml_iterations\t{}", rec.ml_iterations).unwrap();
    }
    if let Some(r0) = reference {
        writeln!(s, "fidelity\t{:.6}", fidelity(&rec.rho, r0)?).unwrap();
    }
    Ok(s)
}

/// Labels of the basis states in dimension `dim`, in coefficient order.
pub fn basis_labels(dim: usize) -> Vec<&'static str> {
    crate::modes::basis_order(dim)
        .iter()
        .map(|b| match b {
            OamBasis::L => "L",
            OamBasis::G => "G",
            OamBasis::R => "R",
        })
        .collect()
}
