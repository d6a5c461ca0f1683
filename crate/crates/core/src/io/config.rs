//! Run configuration: a TOML document with one table per experiment.
//!
//! ```toml
//! experiment = "simulate"
//! seed = 7
//!
//! [grid]
//! d = 2
//! n_per_dim = 64
//!
//! [integrator]
//! dt = 1e-3
//! t_end = 1.0
//! ```
//!
//! Every table and key is optional; unknown keys are rejected.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::System;
use crate::integrator::{IntegratorConfig, Scheme};
use crate::smoothing::{smoothing_exponents, ScanConfig, SmoothingParams};
use crate::spectral::{make_grid, Branch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Simulate,
    SmoothingScan,
    Counterexample,
    Highlow,
    Attractor,
    XsbConstant,
    ResonanceGeometry,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Simulate,
        Experiment::SmoothingScan,
        Experiment::Counterexample,
        Experiment::Highlow,
        Experiment::Attractor,
        Experiment::XsbConstant,
        Experiment::ResonanceGeometry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::SmoothingScan => "smoothing-scan",
            Experiment::Counterexample => "counterexample",
            Experiment::Highlow => "highlow",
            Experiment::Attractor => "attractor",
            Experiment::XsbConstant => "xsb-constant",
            Experiment::ResonanceGeometry => "resonance-geometry",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    #[default]
    Kgs,
    Zakharov,
}

impl From<SystemKind> for System {
    fn from(k: SystemKind) -> System {
        match k {
            SystemKind::Kgs => System::Kgs,
            SystemKind::Zakharov => System::Zakharov,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    #[default]
    ExponentialRk4,
    Strang,
}

impl From<SchemeKind> for Scheme {
    fn from(k: SchemeKind) -> Scheme {
        match k {
            SchemeKind::ExponentialRk4 => Scheme::ExponentialRk4,
            SchemeKind::Strang => Scheme::Strang,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BranchKind {
    Plus,
    #[default]
    Minus,
}

impl From<BranchKind> for Branch {
    fn from(k: BranchKind) -> Branch {
        match k {
            BranchKind::Plus => Branch::Plus,
            BranchKind::Minus => Branch::Minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub d: usize,
    pub n_per_dim: usize,
    pub box_length: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            d: 2,
            n_per_dim: 64,
            box_length: 1.0,
        }
    }
}

/// System and data regularities `(s, r)` for `simulate` and `smoothing-scan`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub kind: SystemKind,
    pub s: f64,
    pub r: f64,
}

impl Default for SystemSection {
    fn default() -> Self {
        SystemSection {
            kind: SystemKind::Kgs,
            s: 1.0,
            r: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorSection {
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub scheme: SchemeKind,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        IntegratorSection {
            dt: 1e-2,
            t_end: 1.0,
            record_every: 10,
            scheme: SchemeKind::ExponentialRk4,
        }
    }
}

impl IntegratorSection {
    pub fn to_config(&self) -> IntegratorConfig {
        IntegratorConfig {
            dt: self.dt,
            scheme: self.scheme.into(),
            t_end: self.t_end,
            record_every: self.record_every,
        }
    }
}

/// Random initial data for `simulate`, or a checkpoint to restart from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSection {
    /// Target `‖u₀‖_{H^s}`.
    pub u_amplitude: f64,
    /// Target `‖w₀⁺‖_{H^r}`.
    pub wave_amplitude: f64,
    pub checkpoint: Option<String>,
}

impl Default for InitialSection {
    fn default() -> Self {
        InitialSection {
            u_amplitude: 1.0,
            wave_amplitude: 1.0,
            checkpoint: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmoothingSection {
    /// Probe for `u`; defaults to `alpha_max - 0.05`.
    pub alpha: Option<f64>,
    /// Probe for the wave; defaults to `beta_max - 0.05`.
    pub beta: Option<f64>,
    pub b: f64,
    pub ensemble: usize,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub u_amplitude: f64,
    pub wave_amplitude: f64,
}

impl Default for SmoothingSection {
    fn default() -> Self {
        let sc = ScanConfig::default();
        SmoothingSection {
            alpha: None,
            beta: None,
            b: 0.55,
            ensemble: 8,
            dt: sc.dt,
            t_end: sc.t_end,
            record_every: sc.record_every,
            u_amplitude: sc.u_amplitude,
            wave_amplitude: sc.wave_amplitude,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CounterexampleSection {
    pub s: f64,
    pub r: f64,
    pub b: f64,
    pub alphas: Vec<f64>,
    pub n_values: Vec<f64>,
    pub cells_per_width: usize,
    pub transverse_cells: usize,
}

impl Default for CounterexampleSection {
    fn default() -> Self {
        CounterexampleSection {
            s: 0.0,
            r: 0.0,
            b: 0.55,
            alphas: vec![0.4, 0.75, 1.0],
            n_values: vec![8.0, 16.0, 32.0, 64.0, 128.0],
            cells_per_width: 8,
            transverse_cells: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HighLowSection {
    pub n_cut: f64,
    pub s: f64,
    pub r: f64,
    pub s0: f64,
    pub r0: f64,
    pub step_constant: f64,
    /// Horizon in units of the window length `δ`.
    pub windows: f64,
    pub dt: f64,
    pub gns_c1: Option<f64>,
    pub gns_c2: Option<f64>,
    pub compare_direct: bool,
    /// Target `‖u₀‖_{H^s}`.
    pub u_amplitude: f64,
    /// Target `‖w₀⁺‖_{H^r}`.
    pub wave_amplitude: f64,
}

impl Default for HighLowSection {
    fn default() -> Self {
        HighLowSection {
            n_cut: 16.0,
            s: 0.95,
            r: 0.95,
            s0: 0.55,
            r0: 0.55,
            step_constant: 0.1,
            windows: 10.0,
            dt: 1e-3,
            gns_c1: None,
            gns_c2: None,
            compare_direct: true,
            u_amplitude: 1.0,
            wave_amplitude: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DampingSection {
    pub gamma: f64,
    pub delta: f64,
    /// Defaults to `min(gamma, delta)/4`.
    pub a: Option<f64>,
    /// `L²` norms of the forcing terms.
    pub forcing_f: f64,
    pub forcing_g: f64,
    /// Sobolev decay exponent of the random forcing.
    pub forcing_regularity: f64,
    /// Squared energy norms of the initial conditions.
    pub energies: Vec<f64>,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
}

impl Default for DampingSection {
    fn default() -> Self {
        DampingSection {
            gamma: 0.5,
            delta: 1.0,
            a: None,
            forcing_f: 1.0,
            forcing_g: 1.0,
            forcing_regularity: 2.0,
            energies: vec![1.0, 10.0, 100.0],
            dt: 1e-2,
            t_end: 20.0,
            record_every: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct XsbSection {
    pub s: f64,
    pub r: f64,
    pub alpha: f64,
    pub b: f64,
    pub time_modes: usize,
    pub ensemble: usize,
    pub adversarial: bool,
}

impl Default for XsbSection {
    fn default() -> Self {
        XsbSection {
            s: 0.0,
            r: 0.0,
            alpha: 0.4,
            b: 0.55,
            time_modes: 8,
            ensemble: 16,
            adversarial: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResonanceSection {
    pub xi1: Vec<f64>,
    pub nu: f64,
    pub branch: BranchKind,
    pub count: usize,
    pub lemma_alpha: f64,
    pub lemma_beta: f64,
    pub lemma_a: Vec<f64>,
    pub lemma_b: Vec<f64>,
}

impl Default for ResonanceSection {
    fn default() -> Self {
        ResonanceSection {
            xi1: vec![16.0, 0.0],
            nu: 0.05,
            branch: BranchKind::Minus,
            count: 10_000,
            lemma_alpha: 1.5,
            lemma_beta: 1.0,
            lemma_a: vec![0.0],
            lemma_b: vec![0.0, 1.0, 3.0, 10.0, 30.0, 100.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
    pub checkpoint: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: "out".into(),
            checkpoint: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: Option<Experiment>,
    pub seed: u64,
    pub grid: GridSection,
    pub system: SystemSection,
    pub integrator: IntegratorSection,
    pub initial: InitialSection,
    pub smoothing: SmoothingSection,
    pub counterexample: CounterexampleSection,
    pub highlow: HighLowSection,
    pub damping: DampingSection,
    pub xsb: XsbSection,
    pub resonance: ResonanceSection,
    pub output: OutputSection,
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive, got {x}")))
    }
}

fn at_least_one(name: &str, k: usize) -> Result<()> {
    if k >= 1 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be >= 1")))
    }
}

impl RunConfig {
    /// Parse TOML text; defaults fill missing keys. Not yet validated.
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// The experiment to run; fails if none was set.
    pub fn experiment(&self) -> Result<Experiment> {
        self.experiment
            .ok_or_else(|| Error::Config("experiment is not set".into()))
    }

    /// Smoothing probes with defaults resolved against the thresholds.
    pub fn smoothing_params(&self) -> Result<SmoothingParams> {
        let system: System = self.system.kind.into();
        let e = smoothing_exponents(system, self.grid.d, self.system.s, self.system.r)?;
        Ok(SmoothingParams {
            system,
            d: self.grid.d,
            s: self.system.s,
            r: self.system.r,
            alpha_probe: self.smoothing.alpha.unwrap_or(e.alpha_max - 0.05),
            beta_probe: self.smoothing.beta.unwrap_or(e.beta_max - 0.05),
            b: self.smoothing.b,
        })
    }

    pub fn scan_config(&self) -> ScanConfig {
        ScanConfig {
            n_per_dim: self.grid.n_per_dim,
            box_length: self.grid.box_length,
            dt: self.smoothing.dt,
            t_end: self.smoothing.t_end,
            record_every: self.smoothing.record_every,
            u_amplitude: self.smoothing.u_amplitude,
            wave_amplitude: self.smoothing.wave_amplitude,
        }
    }

    /// Check every field the chosen experiment uses.
    pub fn validate(&self) -> Result<()> {
        let exp = self.experiment()?;
        let grid = || make_grid(self.grid.d, self.grid.n_per_dim, self.grid.box_length);
        match exp {
            Experiment::Simulate => {
                grid()?;
                if (2..=4).contains(&self.grid.d) {
                    smoothing_exponents(self.system.kind.into(), self.grid.d, self.system.s, self.system.r)?;
                }
                self.integrator.to_config().validate()?;
                if !(self.initial.u_amplitude >= 0.0 && self.initial.wave_amplitude >= 0.0) {
                    return Err(Error::Config("initial amplitudes must be nonnegative".into()));
                }
            }
            Experiment::SmoothingScan => {
                grid()?;
                self.smoothing_params()?.validate()?;
                positive("smoothing.dt", self.smoothing.dt)?;
                positive("smoothing.t_end", self.smoothing.t_end)?;
                at_least_one("smoothing.record_every", self.smoothing.record_every)?;
                at_least_one("smoothing.ensemble", self.smoothing.ensemble)?;
            }
            Experiment::Counterexample => {
                let c = &self.counterexample;
                if !(1..=4).contains(&self.grid.d) {
                    return Err(Error::Config(format!("grid.d must be in 1..=4, got {}", self.grid.d)));
                }
                if c.alphas.is_empty() || c.n_values.is_empty() {
                    return Err(Error::Config("counterexample.alphas and n_values must be nonempty".into()));
                }
                if let Some(n) = c.n_values.iter().find(|n| !(**n >= 2.0)) {
                    return Err(Error::Config(format!("counterexample.n_values entries must be >= 2, got {n}")));
                }
                at_least_one("counterexample.transverse_cells", c.transverse_cells)?;
                if c.cells_per_width < 2 {
                    return Err(Error::Resolution(format!(
                        "counterexample.cells_per_width must be >= 2, got {}",
                        c.cells_per_width
                    )));
                }
            }
            Experiment::Highlow => {
                grid()?;
                let h = &self.highlow;
                self.highlow_config(1.0)?.validate()?;
                positive("highlow.windows", h.windows)?;
            }
            Experiment::Attractor => {
                grid()?;
                let dmp = &self.damping;
                positive("damping.gamma", dmp.gamma)?;
                positive("damping.delta", dmp.delta)?;
                let a = dmp.a.unwrap_or(0.25 * dmp.gamma.min(dmp.delta));
                if !(a > 0.0 && a < dmp.delta) {
                    return Err(Error::Config(format!("damping.a must satisfy 0 < a < delta, got {a}")));
                }
                positive("damping.dt", dmp.dt)?;
                positive("damping.t_end", dmp.t_end)?;
                at_least_one("damping.record_every", dmp.record_every)?;
                if dmp.energies.is_empty() || dmp.energies.iter().any(|e| !(*e >= 0.0)) {
                    return Err(Error::Config("damping.energies must be nonempty and nonnegative".into()));
                }
                if !(dmp.forcing_f >= 0.0 && dmp.forcing_g >= 0.0) {
                    return Err(Error::Config("forcing norms must be nonnegative".into()));
                }
            }
            Experiment::XsbConstant => {
                grid()?;
                at_least_one("xsb.ensemble", self.xsb.ensemble)?;
                if self.xsb.time_modes < 2 {
                    return Err(Error::Resolution(format!(
                        "xsb.time_modes must be >= 2, got {}",
                        self.xsb.time_modes
                    )));
                }
            }
            Experiment::ResonanceGeometry => {
                let r = &self.resonance;
                if r.xi1.is_empty() || r.xi1.iter().all(|x| *x == 0.0) {
                    return Err(Error::Config("resonance.xi1 must be a nonzero vector".into()));
                }
                positive("resonance.nu", r.nu)?;
            }
        }
        Ok(())
    }

    pub fn highlow_config(&self, delta_windows: f64) -> Result<crate::highlow::HighLowConfig> {
        let h = &self.highlow;
        let mut c = crate::highlow::HighLowConfig::new(h.n_cut, h.s, h.r);
        c.s0 = h.s0;
        c.r0 = h.r0;
        c.step_constant = h.step_constant;
        c.dt = h.dt;
        c.compare_direct = h.compare_direct;
        if let Some(c1) = h.gns_c1 {
            c.gns_c1 = c1;
        }
        if let Some(c2) = h.gns_c2 {
            c.gns_c2 = c2;
        }
        c.t_end = delta_windows * c.delta()?;
        Ok(c)
    }
}

/// Read and parse a configuration file without validating it, so that
/// command line overrides can be applied first.
pub fn read_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    RunConfig::parse(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Read, parse and validate a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let cfg = read_config(path)?;
    cfg.validate()?;
    Ok(cfg)
}

/// Parse and validate inline configuration text.
pub fn load_config_str(text: &str) -> Result<RunConfig> {
    let cfg = RunConfig::parse(text)?;
    cfg.validate()?;
    Ok(cfg)
}
