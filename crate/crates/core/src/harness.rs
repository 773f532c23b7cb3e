//! Config-driven campaigns that chain the physics modules end to end and
//! serialize their results as CSV/PGM files plus a hash manifest.
//!
//! Randomness: point `k` of an experiment draws from
//! `StreamSeed::new(seed, &[kind.id(), k])`, and basis `i` at that point from
//! `.child(i)`. Points run in parallel but are collected in config order.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{classical_limit_band, PhotonStatistics};
use crate::decoherence::{
    diffuse, longitudinal_drift, magnetic_dephase, retrieval_efficiency, DiffusionParams, EfficiencyModel,
    MagneticModel,
};
use crate::error::{Error, Result};
use crate::fieldgrid::{write_intensity_pgm, GridSpec, TransverseField};
use crate::holography::{
    diffract_gaussian, matched_input_grid, output_waist, project_and_couple, qubit_hologram, qutrit_hologram, PhaseHologram,
};
use crate::measurement::{
    fit_visibility, polar_retrieve, simulate_counts, write_records, CountConfig, CountRecord, VisibilityFit,
};
use crate::modes::{decompose, equator_state, qubit_state, synthesize, OamBasis, QuditState};
use crate::polariton::{read, write, MemoryParams};
use crate::rng::StreamSeed;
use crate::tomography::{
    fidelity_with, reconstruct_detailed, report, DensityMatrix, FidelityConvention, ProjectionSet,
    ReconstructOptions, Reconstruction,
};

/// Ensemble-plane waist of a 1.05 mm beam focused by a 0.5 m lens at 795 nm.
pub const DEFAULT_WAIST: f64 = 795e-9 * 0.5 / (std::f64::consts::PI * 1.05e-3);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    InterferenceScan,
    MeridianSweep,
    StorageDecay,
    Tomography,
    BoundsTable,
    FieldRender,
}

impl ExperimentKind {
    /// Stable id mixed into every RNG stream of the experiment.
    pub fn id(self) -> u64 {
        match self {
            ExperimentKind::InterferenceScan => 1,
            ExperimentKind::MeridianSweep => 2,
            ExperimentKind::StorageDecay => 3,
            ExperimentKind::Tomography => 4,
            ExperimentKind::BoundsTable => 5,
            ExperimentKind::FieldRender => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::InterferenceScan => "interference_scan",
            ExperimentKind::MeridianSweep => "meridian_sweep",
            ExperimentKind::StorageDecay => "storage_decay",
            ExperimentKind::Tomography => "tomography",
            ExperimentKind::BoundsTable => "bounds_table",
            ExperimentKind::FieldRender => "field_render",
        }
    }
}

/// Where the stored field comes from.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Source {
    /// Exact LG superposition of the configured coefficients.
    #[default]
    Ideal,
    /// Fraunhofer image of a Gaussian of waist `w_in` through the binary hologram
    /// of the configured dimension; the waist follows from `w_in` and `focal`.
    Hologram { w_in: f64, focal: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuditConfig {
    pub l: i32,
    /// `[re, im]` per basis state, ordered `L, R` or `L, G, R`; normalized on use.
    pub coefficients: Vec<[f64; 2]>,
    /// Mode waist at the ensemble, m (ideal source only).
    pub waist: f64,
    pub source: Source,
}

impl Default for QuditConfig {
    fn default() -> Self {
        Self {
            l: 2,
            coefficients: vec![[1.0, 0.0], [1.0, 0.0]],
            waist: DEFAULT_WAIST,
            source: Source::Ideal,
        }
    }
}

impl QuditConfig {
    pub fn state(&self) -> Result<QuditState> {
        QuditState::new(
            self.coefficients
                .iter()
                .map(|c| num_complex::Complex64::new(c[0], c[1]))
                .collect(),
            self.l,
        )
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    pub fn effective_waist(&self, wavelength: f64) -> f64 {
        match self.source {
            Source::Ideal => self.waist,
            Source::Hologram { w_in, focal } => output_waist(w_in, focal, wavelength),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    /// Side length, m; sized from the waist and charge when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extent: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n: 128, extent: None }
    }
}

impl GridConfig {
    pub fn grid(&self, waist: f64, l: i32) -> Result<GridSpec> {
        match self.extent {
            Some(e) => GridSpec::new(self.n, e),
            None => GridSpec::for_modes(self.n, waist, l),
        }
    }
}

/// Which decoherence channels act during storage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecoherenceConfig {
    pub diffusion: bool,
    pub longitudinal: bool,
    pub magnetic: bool,
}

impl Default for DecoherenceConfig {
    fn default() -> Self {
        Self {
            diffusion: true,
            longitudinal: true,
            magnetic: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CountingConfig {
    /// Target `pulses·n̄·η` per projection setting.
    pub detections_per_basis: f64,
    /// Background counts per pulse.
    pub background_rate: f64,
    /// Pulse rate, Hz.
    pub repetition_rate: f64,
    pub noiseless: bool,
}

impl Default for CountingConfig {
    fn default() -> Self {
        Self {
            detections_per_basis: 1e4,
            background_rate: 0.0,
            repetition_rate: 1e4,
            noiseless: false,
        }
    }
}

impl CountingConfig {
    /// Counting settings at efficiency `eta`, with enough pulses for the detection target.
    pub fn count_config(&self, mean_photons: f64, eta: f64) -> CountConfig {
        CountConfig {
            mean_photons,
            efficiency: eta,
            pulses: (self.detections_per_basis / (mean_photons * eta)).ceil() as u64,
            background_rate: self.background_rate,
            repetition_rate: self.repetition_rate,
            noiseless: self.noiseless,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TomographyConfig {
    pub max_likelihood: bool,
    pub convention: FidelityConvention,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    /// Equally spaced β over one period.
    pub betas: usize,
    /// Equally spaced γ_w over `[0, π]`.
    pub meridian_points: usize,
    /// Storage time for scans and sweeps, s.
    pub storage_time: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            betas: 12,
            meridian_points: 13,
            storage_time: 0.0,
        }
    }
}

fn default_storage_times() -> Vec<f64> {
    (0..=5).map(|k| k as f64 * 100e-6).collect()
}

fn default_efficiency() -> EfficiencyModel {
    EfficiencyModel::measured()
}

/// One campaign: the experiment, its seed and every physics parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Storage times, s.
    #[serde(default = "default_storage_times")]
    pub storage_times: Vec<f64>,
    #[serde(default)]
    pub qudit: QuditConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub memory: MemoryParams,
    #[serde(default)]
    pub decoherence: DecoherenceConfig,
    #[serde(default)]
    pub diffusion: DiffusionParams,
    #[serde(default)]
    pub magnetic: MagneticModel,
    #[serde(default = "default_efficiency")]
    pub efficiency: EfficiencyModel,
    #[serde(default)]
    pub photons: PhotonStatistics,
    #[serde(default)]
    pub counting: CountingConfig,
    #[serde(default)]
    pub tomography: TomographyConfig,
    #[serde(default)]
    pub scan: ScanConfig,
}

fn as_config(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

impl ExperimentConfig {
    /// All defaults for `experiment`.
    pub fn new(experiment: ExperimentKind, seed: u64) -> Self {
        Self {
            experiment,
            seed,
            output: None,
            storage_times: default_storage_times(),
            qudit: QuditConfig::default(),
            grid: GridConfig::default(),
            memory: MemoryParams::default(),
            decoherence: DecoherenceConfig::default(),
            diffusion: DiffusionParams::default(),
            magnetic: MagneticModel::default(),
            efficiency: default_efficiency(),
            photons: PhotonStatistics::default(),
            counting: CountingConfig::default(),
            tomography: TomographyConfig::default(),
            scan: ScanConfig::default(),
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_table(t: toml::Table) -> Result<Self> {
        let cfg: Self = t.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path.as_ref())
            .map_err(|e| Error::Config(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Hex SHA-256 of the serialized config.
    pub fn hash(&self) -> Result<String> {
        Ok(hex::encode(Sha256::digest(self.to_toml_string()?.as_bytes())))
    }

    pub fn validate(&self) -> Result<()> {
        if i64::try_from(self.seed).is_err() {
            return Err(Error::Config(format!("seed {} exceeds the TOML integer range", self.seed)));
        }
        self.memory.validate().map_err(as_config)?;
        self.diffusion.validate().map_err(as_config)?;
        self.magnetic.validate().map_err(as_config)?;
        self.efficiency.validate().map_err(as_config)?;
        self.photons.validate().map_err(as_config)?;
        let state = self.qudit.state().map_err(as_config)?;
        let lambda = self.memory.signal_wavelength;
        let waist = self.qudit.effective_waist(lambda);
        if !(waist.is_finite() && waist > 0.0) {
            return Err(Error::Config(format!("waist {waist} must be > 0")));
        }
        if let Source::Hologram { w_in, focal } = self.qudit.source {
            if !(w_in > 0.0 && focal > 0.0) {
                return Err(Error::Config("hologram w_in and focal must be > 0".into()));
            }
            if state.dim() == 3 && self.qudit.l != 1 {
                return Err(Error::Config("the qutrit hologram needs l = 1".into()));
            }
        }
        self.grid.grid(waist, self.qudit.l).map_err(as_config)?;
        if self.storage_times.is_empty() {
            return Err(Error::Config("storage_times is empty".into()));
        }
        for &t in self.storage_times.iter().chain([&self.scan.storage_time]) {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Config(format!("storage time {t} must be >= 0")));
            }
        }
        let c = &self.counting;
        if !(c.detections_per_basis.is_finite() && c.detections_per_basis > 0.0) {
            return Err(Error::Config("detections_per_basis must be > 0".into()));
        }
        if !(c.background_rate >= 0.0 && c.repetition_rate > 0.0) {
            return Err(Error::Config("background_rate must be >= 0 and repetition_rate > 0".into()));
        }
        if self.scan.betas < 4 {
            return Err(Error::Config("scan.betas must be >= 4".into()));
        }
        if self.scan.meridian_points < 2 {
            return Err(Error::Config("scan.meridian_points must be >= 2".into()));
        }
        let needs_qubit = matches!(
            self.experiment,
            ExperimentKind::InterferenceScan | ExperimentKind::MeridianSweep
        );
        if needs_qubit && state.dim() != 2 {
            return Err(Error::Config(format!("{} needs a qubit", self.experiment.name())));
        }
        Ok(())
    }

    pub fn eta(&self, t_s: f64) -> f64 {
        retrieval_efficiency(&self.efficiency, t_s)
    }

    pub fn point_seed(&self, k: usize) -> StreamSeed {
        StreamSeed::new(self.seed, &[self.experiment.id(), k as u64])
    }
}

/// The prepared input field and the store/retrieve chain for one config.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub cfg: ExperimentConfig,
    pub state: QuditState,
    pub waist: f64,
    pub grid: GridSpec,
    pub input: TransverseField,
    pub hologram: Option<PhaseHologram>,
}

impl Pipeline {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let lambda = cfg.memory.signal_wavelength;
        let state = cfg.qudit.state()?;
        let waist = cfg.qudit.effective_waist(lambda);
        let grid = cfg.grid.grid(waist, cfg.qudit.l)?;
        let (input, hologram) = match cfg.qudit.source {
            Source::Ideal => (synthesize(&state, waist, grid, lambda)?, None),
            Source::Hologram { w_in, focal } => {
                // an explicit extent fixes the Fourier plane; otherwise sample both planes alike
                let in_grid = match cfg.grid.extent {
                    Some(_) => GridSpec::new(grid.n, grid.n as f64 * focal * lambda / grid.extent)?,
                    None => matched_input_grid(grid.n, w_in, focal, lambda)?,
                };
                let holo = if state.dim() == 2 {
                    qubit_hologram(cfg.qudit.l, in_grid)?
                } else {
                    qutrit_hologram(cfg.qudit.l, w_in, in_grid)?
                };
                let field = diffract_gaussian(&holo, w_in, focal, lambda)?.normalized();
                (field, Some(holo))
            }
        };
        let grid = *input.grid();
        Ok(Self {
            cfg: cfg.clone(),
            state,
            waist,
            grid,
            input,
            hologram,
        })
    }

    /// write → decoherence channels for `t_s` → read.
    pub fn retrieve_from(&self, field: &TransverseField, t_s: f64) -> Result<TransverseField> {
        let cfg = &self.cfg;
        let mut sw = write(field, &cfg.memory);
        if cfg.decoherence.diffusion {
            sw = diffuse(&sw, &cfg.diffusion, t_s)?;
        }
        if cfg.decoherence.longitudinal {
            sw = longitudinal_drift(&sw, &cfg.diffusion, t_s)?;
        }
        if cfg.decoherence.magnetic {
            sw = magnetic_dephase(&sw, &cfg.magnetic, t_s)?;
        }
        Ok(read(&sw, &cfg.memory))
    }

    pub fn retrieve(&self, t_s: f64) -> Result<TransverseField> {
        self.retrieve_from(&self.input, t_s)
    }

    /// `|⟨target|Ê⟩|²` for the unit-normalized field `Ê`.
    pub fn probabilities(&self, field: &TransverseField, targets: &[QuditState]) -> Result<Vec<f64>> {
        let norm = field.norm();
        if !(norm > 0.0) {
            return Err(Error::NoCounts);
        }
        let unit = field.normalized();
        targets
            .iter()
            .map(|t| Ok(project_and_couple(&unit, t, self.waist)?.norm_sqr().clamp(0.0, 1.0)))
            .collect()
    }

    /// Noiseless subspace projection of `field` as a pure state.
    pub fn subspace_state(&self, field: &TransverseField) -> Result<QuditState> {
        let amps = decompose(field, self.waist, &self.state.charges())?;
        QuditState::new(amps, self.state.charge())
    }

    fn count(&self, probs: &[f64], labels: &[String], eta: f64, seed: StreamSeed) -> Result<Vec<CountRecord>> {
        let cc = self.cfg.counting.count_config(self.cfg.photons.mean, eta);
        probs
            .iter()
            .zip(labels)
            .enumerate()
            .map(|(i, (&p, label))| simulate_counts(label.clone(), p, &cc, seed.child(i as u64)))
            .collect()
    }

    /// Tomography of the field retrieved after `t_s`, using stream `seed`.
    pub fn tomography_point(&self, t_s: f64, seed: StreamSeed, reference: &DensityMatrix) -> Result<TomographyPoint> {
        let set = ProjectionSet::for_dim(self.state.dim())?;
        let targets = (0..set.len())
            .map(|i| set.qudit(i, self.state.charge()))
            .collect::<Result<Vec<_>>>()?;
        let field = self.retrieve(t_s)?;
        let eta = self.cfg.eta(t_s);
        let probs = self.probabilities(&field, &targets)?;
        let records = self.count(&probs, set.labels(), eta, seed)?;
        let opts = ReconstructOptions {
            max_likelihood: self.cfg.tomography.max_likelihood,
            ..Default::default()
        };
        let rec = reconstruct_detailed(&records, &set, opts)?;
        let conv = self.cfg.tomography.convention;
        let f_abs = fidelity_with(&rec.rho, &DensityMatrix::pure(&self.state), conv)?;
        let f_rel = fidelity_with(&rec.rho, reference, conv)?;
        Ok(TomographyPoint {
            t_s,
            eta,
            records,
            reconstruction: rec,
            f_abs,
            f_rel,
            stream: seed.stream,
        })
    }

    /// Noiseless retrieval at zero storage time, projected into the qudit subspace.
    pub fn relative_reference(&self) -> Result<DensityMatrix> {
        Ok(DensityMatrix::pure(&self.subspace_state(&self.retrieve(0.0)?)?))
    }
}

#[derive(Debug, Clone)]
pub struct TomographyPoint {
    pub t_s: f64,
    pub eta: f64,
    pub records: Vec<CountRecord>,
    pub reconstruction: Reconstruction,
    /// Fidelity to the configured state.
    pub f_abs: f64,
    /// Fidelity to the noiseless zero-delay retrieval.
    pub f_rel: f64,
    pub stream: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub t_s: f64,
    pub eta: f64,
    pub f_rel: f64,
    pub f_abs: f64,
    pub f_classical: f64,
    pub band: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeridianRow {
    pub gamma_w: f64,
    pub gamma_r: f64,
    pub n_l: f64,
    pub n_r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsRow {
    pub t_s: f64,
    pub eta: f64,
    pub f_classical: f64,
    pub band: (f64, f64),
}

#[derive(Debug, Clone)]
pub enum Summary {
    Scan { records: Vec<CountRecord>, fit: VisibilityFit },
    Meridian(Vec<MeridianRow>),
    Decay(Vec<DecayRow>),
    Tomography(Vec<TomographyPoint>),
    Bounds(Vec<BoundsRow>),
    Render,
}

/// One output file held in memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub name: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamRecord {
    pub label: String,
    pub master: u64,
    pub stream: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub package: String,
    pub version: String,
    pub experiment: ExperimentKind,
    pub config_hash: String,
    pub seed: u64,
    /// Per-point streams; basis `i` uses the child stream `i`.
    pub streams: Vec<StreamRecord>,
    pub files: Vec<FileRecord>,
}

#[derive(Debug, Clone)]
pub struct CampaignResult {
    pub kind: ExperimentKind,
    pub outputs: Vec<Output>,
    pub manifest: Manifest,
    pub summary: Summary,
}

impl CampaignResult {
    fn new(cfg: &ExperimentConfig, outputs: Vec<Output>, streams: Vec<StreamRecord>, summary: Summary) -> Result<Self> {
        let files = outputs
            .iter()
            .map(|o| FileRecord {
                name: o.name.clone(),
                sha256: hex::encode(Sha256::digest(&o.bytes)),
                bytes: o.bytes.len(),
            })
            .collect();
        Ok(Self {
            kind: cfg.experiment,
            outputs,
            manifest: Manifest {
                package: env!("CARGO_PKG_NAME").into(),
                version: env!("CARGO_PKG_VERSION").into(),
                experiment: cfg.experiment,
                config_hash: cfg.hash()?,
                seed: cfg.seed,
                streams,
                files,
            },
            summary,
        })
    }

    pub fn output(&self, name: &str) -> Option<&Output> {
        self.outputs.iter().find(|o| o.name == name)
    }

    pub fn manifest_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&self.manifest).map_err(|e| Error::Config(e.to_string()))
    }

    /// Writes every output and `manifest.json` into `dir`, creating it if needed.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        for o in &self.outputs {
            fs::write(dir.join(&o.name), &o.bytes)?;
        }
        fs::write(dir.join("manifest.json"), self.manifest_json()? + "\n")?;
        Ok(())
    }
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.iter().map(|v| format!("{v}")))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

fn streams_for(cfg: &ExperimentConfig, n: usize, label: &str) -> Vec<StreamRecord> {
    (0..n)
        .map(|k| StreamRecord {
            label: format!("{label}{k}"),
            master: cfg.seed,
            stream: cfg.point_seed(k).stream,
        })
        .collect()
}

/// Counts on equatorial projectors of the field retrieved after `scan.storage_time`.
pub fn run_interference_scan(cfg: &ExperimentConfig) -> Result<CampaignResult> {
    let p = Pipeline::new(cfg)?;
    let l = p.state.charge();
    let t = cfg.scan.storage_time;
    let betas: Vec<f64> = (0..cfg.scan.betas)
        .map(|k| k as f64 * std::f64::consts::TAU / cfg.scan.betas as f64)
        .collect();
    let targets = betas.iter().map(|&b| equator_state(b, l)).collect::<Result<Vec<_>>>()?;
    let labels: Vec<String> = (0..betas.len()).map(|k| format!("beta{k:02}")).collect();
    let probs = p.probabilities(&p.retrieve(t)?, &targets)?;
    let records: Vec<CountRecord> = p
        .count(&probs, &labels, cfg.eta(t), cfg.point_seed(0))?
        .into_iter()
        .zip(&betas)
        .map(|(r, &b)| r.with_beta(b))
        .collect();
    let fit = fit_visibility(&records)?;
    let mut scan = Vec::new();
    write_records(&mut scan, &records)?;
    let fit_csv = csv_bytes(
        &["n0", "delta", "visibility", "residual"],
        [vec![fit.n0, fit.delta, fit.visibility, fit.residual]],
    )?;
    let outputs = vec![
        Output { name: "scan.csv".into(), bytes: scan },
        Output { name: "scan_fit.csv".into(), bytes: fit_csv },
    ];
    CampaignResult::new(cfg, outputs, streams_for(cfg, 1, "scan"), Summary::Scan { records, fit })
}

/// Stores `cosγ/2|L⟩ + sinγ/2|R⟩` for γ on a grid over `[0, π]` and retrieves γ from
/// the `L`/`R` counts.
pub fn run_meridian_sweep(cfg: &ExperimentConfig) -> Result<CampaignResult> {
    let p = Pipeline::new(cfg)?;
    let l = p.state.charge();
    let lambda = cfg.memory.signal_wavelength;
    let t = cfg.scan.storage_time;
    let m = cfg.scan.meridian_points;
    let targets = [QuditState::basis(2, OamBasis::L, l)?, QuditState::basis(2, OamBasis::R, l)?];
    let labels = ["L".to_string(), "R".to_string()];
    let rows = (0..m)
        .into_par_iter()
        .map(|k| {
            let gamma_w = k as f64 * std::f64::consts::PI / (m - 1) as f64;
            let input = synthesize(&qubit_state(gamma_w, 0.0, l)?, p.waist, p.grid, lambda)?;
            let probs = p.probabilities(&p.retrieve_from(&input, t)?, &targets)?;
            let rec = p.count(&probs, &labels, cfg.eta(t), cfg.point_seed(k))?;
            Ok(MeridianRow {
                gamma_w,
                gamma_r: polar_retrieve(rec[1].counts, rec[0].counts)?,
                n_l: rec[0].counts,
                n_r: rec[1].counts,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let csv = csv_bytes(
        &["gamma_w", "gamma_r", "n_l", "n_r"],
        rows.iter().map(|r| vec![r.gamma_w, r.gamma_r, r.n_l, r.n_r]),
    )?;
    let outputs = vec![Output { name: "meridian.csv".into(), bytes: csv }];
    CampaignResult::new(cfg, outputs, streams_for(cfg, m, "gamma"), Summary::Meridian(rows))
}

fn tomography_points(cfg: &ExperimentConfig) -> Result<(Pipeline, Vec<TomographyPoint>)> {
    let p = Pipeline::new(cfg)?;
    let reference = p.relative_reference()?;
    let points = cfg
        .storage_times
        .par_iter()
        .enumerate()
        .map(|(k, &t)| p.tomography_point(t, cfg.point_seed(k), &reference))
        .collect::<Result<Vec<_>>>()?;
    Ok((p, points))
}

/// Fidelity and efficiency against storage time, with the classical limit and band.
pub fn run_storage_decay(cfg: &ExperimentConfig) -> Result<CampaignResult> {
    let (_, points) = tomography_points(cfg)?;
    let rows = points
        .iter()
        .map(|pt| {
            let b = classical_limit_band(cfg.photons, pt.eta)?;
            Ok(DecayRow {
                t_s: pt.t_s,
                eta: pt.eta,
                f_rel: pt.f_rel,
                f_abs: pt.f_abs,
                f_classical: b.f_classical,
                band: b.band,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let csv = csv_bytes(
        &["t_s", "eta", "f_rel", "f_abs", "f_classical", "band_low", "band_high"],
        rows.iter()
            .map(|r| vec![r.t_s, r.eta, r.f_rel, r.f_abs, r.f_classical, r.band.0, r.band.1]),
    )?;
    let outputs = vec![Output { name: "decay.csv".into(), bytes: csv }];
    let n = rows.len();
    CampaignResult::new(cfg, outputs, streams_for(cfg, n, "t"), Summary::Decay(rows))
}

/// Full tomography records, density matrices and a text report per storage time.
pub fn run_tomography(cfg: &ExperimentConfig) -> Result<CampaignResult> {
    let (p, points) = tomography_points(cfg)?;
    let set = ProjectionSet::for_dim(p.state.dim())?;
    let reference = DensityMatrix::pure(&p.state);
    let mut outputs = Vec::new();
    let mut text = String::new();
    for (k, pt) in points.iter().enumerate() {
        let mut counts = Vec::new();
        write_records(&mut counts, &pt.records)?;
        outputs.push(Output { name: format!("tomo_counts_{k}.csv"), bytes: counts });
        let mut rho = Vec::new();
        pt.reconstruction.rho.write_csv(&mut rho)?;
        outputs.push(Output { name: format!("rho_{k}.csv"), bytes: rho });
        writeln!(text, "# t_s = {} s, eta = {:.6}, f_rel = {:.6}", pt.t_s, pt.eta, pt.f_rel).unwrap();
        text.push_str(&report(&set, &pt.reconstruction, Some(&reference))?);
        text.push('\n');
    }
    outputs.push(Output { name: "report.txt".into(), bytes: text.into_bytes() });
    let n = points.len();
    CampaignResult::new(cfg, outputs, streams_for(cfg, n, "t"), Summary::Tomography(points))
}

/// Classical limit and band along the efficiency model.
pub fn run_bounds_table(cfg: &ExperimentConfig) -> Result<CampaignResult> {
    cfg.validate()?;
    let rows = cfg
        .storage_times
        .iter()
        .map(|&t| {
            let eta = cfg.eta(t);
            let b = classical_limit_band(cfg.photons, eta)?;
            Ok(BoundsRow {
                t_s: t,
                eta,
                f_classical: b.f_classical,
                band: b.band,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let csv = csv_bytes(
        &["t_s", "eta", "f_classical", "band_low", "band_high"],
        rows.iter().map(|r| vec![r.t_s, r.eta, r.f_classical, r.band.0, r.band.1]),
    )?;
    let outputs = vec![Output { name: "bounds.csv".into(), bytes: csv }];
    CampaignResult::new(cfg, outputs, Vec::new(), Summary::Bounds(rows))
}

/// gnuplot `splot` block: `x y intensity`, one blank line between rows.
pub fn intensity_dat(field: &TransverseField) -> Vec<u8> {
    let g = field.grid();
    let mut s = String::from("# x_m y_m intensity\n");
    for row in 0..g.n {
        for col in 0..g.n {
            let (x, y) = (g.x(col), g.y(row));
            writeln!(s, "{x} {y} {}", field.at(row, col).norm_sqr()).unwrap();
        }
        s.push('\n');
    }
    s.into_bytes()
}

/// Intensity images of the input and of every retrieval, plus the hologram if any.
pub fn run_field_render(cfg: &ExperimentConfig) -> Result<CampaignResult> {
    let p = Pipeline::new(cfg)?;
    let mut outputs = Vec::new();
    let mut push_field = |stem: &str, f: &TransverseField| -> Result<()> {
        let mut pgm = Vec::new();
        write_intensity_pgm(&mut pgm, f)?;
        outputs.push(Output { name: format!("{stem}.pgm"), bytes: pgm });
        outputs.push(Output { name: format!("{stem}.dat"), bytes: intensity_dat(f) });
        Ok(())
    };
    push_field("input", &p.input)?;
    let retrieved = cfg
        .storage_times
        .par_iter()
        .map(|&t| p.retrieve(t))
        .collect::<Result<Vec<_>>>()?;
    for (k, f) in retrieved.iter().enumerate() {
        push_field(&format!("retrieved_{k}"), f)?;
    }
    if let Some(h) = &p.hologram {
        let mut pgm = Vec::new();
        h.write_pgm_to(&mut pgm)?;
        outputs.push(Output { name: "hologram.pgm".into(), bytes: pgm });
    }
    CampaignResult::new(cfg, outputs, Vec::new(), Summary::Render)
}

pub fn run(cfg: &ExperimentConfig) -> Result<CampaignResult> {
    match cfg.experiment {
        ExperimentKind::InterferenceScan => run_interference_scan(cfg),
        ExperimentKind::MeridianSweep => run_meridian_sweep(cfg),
        ExperimentKind::StorageDecay => run_storage_decay(cfg),
        ExperimentKind::Tomography => run_tomography(cfg),
        ExperimentKind::BoundsTable => run_bounds_table(cfg),
        ExperimentKind::FieldRender => run_field_render(cfg),
    }
}

/// [`run`] on a pool of `threads` workers (`0` uses the global pool).
pub fn run_parallel(cfg: &ExperimentConfig, threads: usize) -> Result<CampaignResult> {
    if threads == 0 {
        return run(cfg);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| run(cfg))
}
