//! High-low frequency splitting for KGS in the half-wave variables.
//!
//! With `u = φ + μ` and `w^± = ψ^± + λ^±` the low system is KGS for `(φ, ψ^±)`
//! and the high system carries every remaining interaction:
//!
//! * `iμ_t + Δμ = -½(Λ + Ψ)μ - ½Λφ`, `Λ = λ⁺ + λ⁻`, `Ψ = ψ⁺ + ψ⁻`
//! * `iλ^±_t ∓ Aλ^± = ∓A^{-1}(|μ|² + 2 Re μφ̄)`
//!
//! so the two systems sum to the full system. After each window of length `δ`
//! the nonlinear part of `(μ, λ^±)` is moved into `(φ, ψ^±)`.

mod gns;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::{integrate, linear_propagate, Dispersion, System, SystemState};
use crate::integrator::{
    integrate_system, FlowBlock, IntegratorConfig, LinearFlow, SemilinearSystem,
};
use crate::spectral::{
    apply_table, dealias, dealiased_abs_sq, Grid, SpectralField, Symbol, ZeroMode,
};

pub use gns::{
    gns_bracket, mass_threshold, mass_threshold_forms, sobolev_constant_d4, GnsBracket,
    MassThreshold,
};

/// `δ = c·N^{-2(1-m)/r₀ - 0.01}`.
pub fn step_rule(n_cut: f64, m: f64, r0: f64, c: f64) -> Result<f64> {
    if !(n_cut >= 1.0 && n_cut.is_finite()) {
        return Err(Error::Config(format!("N must be >= 1, got {n_cut}")));
    }
    if !(r0 > 0.0 && c > 0.0) {
        return Err(Error::Config(format!("need r0 > 0 and c > 0, got r0 = {r0}, c = {c}")));
    }
    Ok(c * n_cut.powf(-2.0 * (1.0 - m) / r0 - 0.01))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighLowConfig {
    /// Frequency cutoff `N`.
    pub n_cut: f64,
    pub s: f64,
    pub r: f64,
    pub s0: f64,
    pub r0: f64,
    /// Constant `c` of the window rule.
    pub step_constant: f64,
    /// Horizon `T`.
    pub t_end: f64,
    /// Integrator step inside a window (rounded down to divide the window).
    pub dt: f64,
    pub gns_c1: f64,
    pub gns_c2: f64,
    /// Advance a direct solve alongside with the same steps.
    pub compare_direct: bool,
}

impl HighLowConfig {
    pub fn new(n_cut: f64, s: f64, r: f64) -> Self {
        HighLowConfig {
            n_cut,
            s,
            r,
            s0: 0.55,
            r0: 0.55,
            step_constant: 0.1,
            t_end: 1.0,
            dt: 1e-3,
            gns_c1: sobolev_constant_d4(),
            gns_c2: sobolev_constant_d4().sqrt(),
            compare_direct: true,
        }
    }

    pub fn m(&self) -> f64 {
        self.s.min(self.r)
    }

    pub fn delta(&self) -> Result<f64> {
        step_rule(self.n_cut, self.m(), self.r0, self.step_constant)
    }

    pub fn validate(&self) -> Result<()> {
        self.delta()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::Config(format!("T must be nonnegative, got {}", self.t_end)));
        }
        mass_threshold(self.gns_c1, self.gns_c2)?;
        Ok(())
    }
}

/// `(φ, ψ^±)` and `(μ, λ^±)` at time `t`, after `window` completed windows.
#[derive(Debug, Clone, PartialEq)]
pub struct HighLowState {
    pub phi: SpectralField,
    pub psi_plus: SpectralField,
    pub psi_minus: SpectralField,
    pub mu: SpectralField,
    pub lambda_plus: SpectralField,
    pub lambda_minus: SpectralField,
    pub window: usize,
    pub t: f64,
}

impl HighLowState {
    fn fields(&self) -> Vec<SpectralField> {
        vec![
            self.phi.clone(),
            self.psi_plus.clone(),
            self.psi_minus.clone(),
            self.mu.clone(),
            self.lambda_plus.clone(),
            self.lambda_minus.clone(),
        ]
    }

    fn from_fields(mut f: Vec<SpectralField>, window: usize, t: f64) -> Self {
        let lambda_minus = f.pop().expect("six fields");
        let lambda_plus = f.pop().expect("six fields");
        let mu = f.pop().expect("six fields");
        let psi_minus = f.pop().expect("six fields");
        let psi_plus = f.pop().expect("six fields");
        let phi = f.pop().expect("six fields");
        HighLowState {
            phi,
            psi_plus,
            psi_minus,
            mu,
            lambda_plus,
            lambda_minus,
            window,
            t,
        }
    }

    /// `(φ + μ, ψ⁺ + λ⁺, ψ⁻ + λ⁻)` as a KGS state.
    pub fn assembled(&self) -> SystemState {
        SystemState {
            system: System::Kgs,
            u: self.phi.add(&self.mu).expect("grid"),
            wplus: self.psi_plus.add(&self.lambda_plus).expect("grid"),
            wminus: self.psi_minus.add(&self.lambda_minus).expect("grid"),
            t: self.t,
        }
    }
}

/// Low part: modes with `⟨ξ⟩ ≤ max(N, 1)`.
///
/// With this cut `⟨ξ⟩ ≤ N` on the low part and `⟨ξ⟩ > N` on the high part, so
/// `‖φ₀‖_{H¹} ≤ N^{1-s}‖u₀‖_{H^s}` and `‖μ₀‖_{H^{s₀}} ≤ N^{s₀-s}‖u₀‖_{H^s}` hold exactly.
fn split(f: &SpectralField, n_cut: f64) -> (SpectralField, SpectralField) {
    let limit = n_cut.max(1.0).powi(2) - 1.0;
    let mut low = f.clone();
    let mut high = f.clone();
    for ((lo, hi), &q) in low
        .coeffs_mut()
        .iter_mut()
        .zip(high.coeffs_mut())
        .zip(f.grid().xi_sq())
    {
        if q <= limit {
            *hi = Complex64::new(0.0, 0.0);
        } else {
            *lo = Complex64::new(0.0, 0.0);
        }
    }
    (low, high)
}

/// Split KGS data `(u₀, w₀⁺, w₀⁻)` at frequency `N`.
pub fn split_initial(
    u0: &SpectralField,
    wplus0: &SpectralField,
    wminus0: &SpectralField,
    n_cut: f64,
) -> Result<HighLowState> {
    u0.same_grid(wplus0, "initial data")?;
    u0.same_grid(wminus0, "initial data")?;
    if !(n_cut >= 0.0) {
        return Err(Error::Config(format!("N must be nonnegative, got {n_cut}")));
    }
    let (phi, mu) = split(u0, n_cut);
    let (psi_plus, lambda_plus) = split(wplus0, n_cut);
    let (psi_minus, lambda_minus) = split(wminus0, n_cut);
    Ok(HighLowState {
        phi,
        psi_plus,
        psi_minus,
        mu,
        lambda_plus,
        lambda_minus,
        window: 0,
        t: 0.0,
    })
}

/// The coupled low and high systems as one six-field system.
struct SplitSystem {
    grid: Grid,
    inv_bessel: Vec<Complex64>,
}

impl SplitSystem {
    fn new(grid: &Grid) -> Self {
        SplitSystem {
            grid: grid.clone(),
            inv_bessel: Symbol::Bessel(-1.0).table(grid).expect("nonsingular"),
        }
    }

    fn from_samples(&self, s: &[Complex64]) -> SpectralField {
        dealias(&SpectralField::from_samples(&self.grid, s).expect("grid"))
    }
}

impl SemilinearSystem for SplitSystem {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn field_names(&self) -> &[&'static str] {
        &["phi", "psi_plus", "psi_minus", "mu", "lambda_plus", "lambda_minus"]
    }

    fn linear_flow(&self, h: f64) -> LinearFlow {
        let table = |d: Dispersion| d.symbol(h).table(&self.grid).expect("nonsingular");
        let (s, p, m) = (
            table(Dispersion::Schrodinger),
            table(Dispersion::KgPlus),
            table(Dispersion::KgMinus),
        );
        LinearFlow {
            blocks: vec![
                FlowBlock::Diagonal { field: 0, table: s.clone() },
                FlowBlock::Diagonal { field: 1, table: p.clone() },
                FlowBlock::Diagonal { field: 2, table: m.clone() },
                FlowBlock::Diagonal { field: 3, table: s },
                FlowBlock::Diagonal { field: 4, table: p },
                FlowBlock::Diagonal { field: 5, table: m },
            ],
        }
    }

    fn nonlinear(&self, f: &[SpectralField]) -> Vec<SpectralField> {
        let phi = dealias(&f[0]).to_samples();
        let psi = dealias(&f[1].add(&f[2]).expect("grid")).to_samples();
        let mu = dealias(&f[3]).to_samples();
        let lam = dealias(&f[4].add(&f[5]).expect("grid")).to_samples();
        let n = phi.len();
        let mut low_prod = Vec::with_capacity(n);
        let mut high_prod = Vec::with_capacity(n);
        let mut low_src = Vec::with_capacity(n);
        let mut high_src = Vec::with_capacity(n);
        for k in 0..n {
            low_prod.push(psi[k] * phi[k]);
            high_prod.push((lam[k] + psi[k]) * mu[k] + lam[k] * phi[k]);
            low_src.push(Complex64::new(phi[k].norm_sqr(), 0.0));
            high_src.push(Complex64::new(
                mu[k].norm_sqr() + 2.0 * (mu[k] * phi[k].conj()).re,
                0.0,
            ));
        }
        let i = Complex64::new(0.0, 1.0);
        let low_src = apply_table(&self.from_samples(&low_src), &self.inv_bessel);
        let high_src = apply_table(&self.from_samples(&high_src), &self.inv_bessel);
        vec![
            self.from_samples(&low_prod).scale(0.5 * i),
            low_src.scale(i),
            low_src.scale(-i),
            self.from_samples(&high_prod).scale(0.5 * i),
            high_src.scale(i),
            high_src.scale(-i),
        ]
    }
}

/// Result of one window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowOutcome {
    /// Reassembled state for the next window.
    pub next: HighLowState,
    /// The coupled systems at the end of the window, before reassembly.
    pub end: HighLowState,
    /// `‖w(δ)‖_{H¹}`, `w = μ(δ) - e^{iδΔ}μ₀`.
    pub w_h1: f64,
    /// `max_± ‖z^±(δ)‖_{H¹}`, `z^± = λ^±(δ) - e^{∓iδA}λ^±₀`.
    pub z_h1: f64,
    /// Largest coefficient change of `φ + μ` and `ψ^± + λ^±` caused by reassembly.
    pub telescoping_error: f64,
}

fn window_config(len: f64, dt: f64) -> IntegratorConfig {
    let steps = (len / dt).ceil().max(1.0);
    let mut c = IntegratorConfig::new(len / steps, len);
    c.record_every = steps as usize;
    c
}

fn advance_by(state: &HighLowState, config: &HighLowConfig, len: f64) -> Result<WindowOutcome> {
    let grid = state.phi.grid();
    let sys = SplitSystem::new(grid);
    let traj = integrate_system(&sys, state.fields(), state.t, &window_config(len, config.dt))?;
    let last = traj.last().expect("initial snapshot");
    let end = HighLowState::from_fields(last.fields.clone(), state.window, last.t);
    let free_mu = linear_propagate(&state.mu, Dispersion::Schrodinger, len);
    let free_lp = linear_propagate(&state.lambda_plus, Dispersion::KgPlus, len);
    let free_lm = linear_propagate(&state.lambda_minus, Dispersion::KgMinus, len);
    let w = end.mu.sub(&free_mu)?;
    let zp = end.lambda_plus.sub(&free_lp)?;
    let zm = end.lambda_minus.sub(&free_lm)?;
    let next = HighLowState {
        phi: end.phi.add(&w)?,
        psi_plus: end.psi_plus.add(&zp)?,
        psi_minus: end.psi_minus.add(&zm)?,
        mu: free_mu,
        lambda_plus: free_lp,
        lambda_minus: free_lm,
        window: state.window + 1,
        t: end.t,
    };
    let (a, b) = (next.assembled(), end.assembled());
    let telescoping_error = a
        .u
        .max_abs_diff(&b.u)?
        .max(a.wplus.max_abs_diff(&b.wplus)?)
        .max(a.wminus.max_abs_diff(&b.wminus)?);
    Ok(WindowOutcome {
        w_h1: w.sobolev_norm(1.0),
        z_h1: zp.sobolev_norm(1.0).max(zm.sobolev_norm(1.0)),
        next,
        end,
        telescoping_error,
    })
}

/// Evolve both systems over one window `δ` and reassemble.
pub fn advance_window(state: &HighLowState, config: &HighLowConfig) -> Result<WindowOutcome> {
    config.validate()?;
    advance_by(state, config, config.delta()?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowEnergy {
    /// `E = ‖Aψ‖² + 2‖∇φ‖² - 2∫|φ|² v`, `v = (ψ⁺ + ψ⁻)/2`, `‖Aψ‖² = (‖Aψ⁺‖² + ‖Aψ⁻‖²)/2`.
    pub energy: f64,
    /// `‖Aψ‖² + 2‖∇φ‖²`.
    pub coercive: f64,
    pub grad_phi: f64,
    pub a_psi: f64,
}

/// Energy of the low pair; twice the KGS Hamiltonian of `(φ, ψ^±)`.
pub fn low_energy(phi: &SpectralField, psi_plus: &SpectralField, psi_minus: &SpectralField) -> Result<LowEnergy> {
    phi.same_grid(psi_plus, "low pair")?;
    phi.same_grid(psi_minus, "low pair")?;
    let a_sq = 0.5 * (psi_plus.sobolev_norm(1.0).powi(2) + psi_minus.sobolev_norm(1.0).powi(2));
    let grad = phi.homogeneous_norm(1.0, ZeroMode::Annihilate)?;
    let v = psi_plus.add(psi_minus)?.scale_real(0.5);
    let cubic = dealiased_abs_sq(phi).inner(&v.conj())?.re;
    let coercive = a_sq + 2.0 * grad * grad;
    Ok(LowEnergy {
        energy: coercive - 2.0 * cubic,
        coercive,
        grad_phi: grad,
        a_psi: a_sq.sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowRow {
    pub window: usize,
    pub t: f64,
    pub e_low: f64,
    pub mass_low: f64,
    pub w_h1: f64,
    pub z_h1: f64,
    /// Relative `L²` distance to the direct solve, `NaN` when not computed.
    pub diff_vs_direct: f64,
    pub telescoping_error: f64,
    /// `C₀ = ‖φ‖_{L²} C₁C₂² / √2`.
    pub c0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HighLowReport {
    pub delta: f64,
    pub rows: Vec<WindowRow>,
    pub final_state: HighLowState,
    pub direct_final: Option<SystemState>,
    pub threshold: MassThreshold,
    pub mass0: f64,
    /// Threshold notices; the run proceeds regardless.
    pub warnings: Vec<String>,
}

fn relative_l2(a: &SystemState, b: &SystemState) -> Result<f64> {
    let num = a.u.sub(&b.u)?.l2_norm().powi(2)
        + a.wplus.sub(&b.wplus)?.l2_norm().powi(2)
        + a.wminus.sub(&b.wminus)?.l2_norm().powi(2);
    let den = b.u.l2_norm().powi(2) + b.wplus.l2_norm().powi(2) + b.wminus.l2_norm().powi(2);
    Ok(if den == 0.0 { num.sqrt() } else { (num / den).sqrt() })
}

/// Iterate windows up to `T`; the last window is shortened to end at `T`.
pub fn run_global(
    u0: &SpectralField,
    wplus0: &SpectralField,
    wminus0: &SpectralField,
    config: &HighLowConfig,
) -> Result<HighLowReport> {
    config.validate()?;
    let delta = config.delta()?;
    let threshold = mass_threshold_forms(config.gns_c1, config.gns_c2)?;
    let mass0 = u0.l2_norm();
    let mut warnings = Vec::new();
    if mass0 >= threshold.energy_form {
        warnings.push(format!(
            "|u0|_L2 = {mass0} is not below sqrt(2)/(C1 C2^2) = {}",
            threshold.energy_form
        ));
    }
    if mass0 >= threshold.statement_form {
        warnings.push(format!(
            "|u0|_L2 = {mass0} is not below sqrt(2) C1 C2^2 = {}",
            threshold.statement_form
        ));
    }
    let c1c2 = config.gns_c1 * config.gns_c2 * config.gns_c2;
    let mut state = split_initial(u0, wplus0, wminus0, config.n_cut)?;
    let mut direct = config
        .compare_direct
        .then(|| SystemState::new(System::Kgs, u0.clone(), wplus0.clone(), wminus0.clone(), 0.0))
        .transpose()?;
    let mut rows = Vec::new();
    while state.t < config.t_end * (1.0 - 1e-12) {
        let len = delta.min(config.t_end - state.t);
        let out = advance_by(&state, config, len)?;
        let diff_vs_direct = match direct.as_mut() {
            Some(d) => {
                let traj = integrate(d, &window_config(len, config.dt))?;
                *d = traj.into_iter().last().expect("final state");
                relative_l2(&out.next.assembled(), d)?
            }
            None => f64::NAN,
        };
        let e = low_energy(&out.next.phi, &out.next.psi_plus, &out.next.psi_minus)?;
        let mass_low = out.next.phi.l2_norm();
        rows.push(WindowRow {
            window: out.next.window,
            t: out.next.t,
            e_low: e.energy,
            mass_low,
            w_h1: out.w_h1,
            z_h1: out.z_h1,
            diff_vs_direct,
            telescoping_error: out.telescoping_error,
            c0: mass_low * c1c2 / 2f64.sqrt(),
        });
        state = out.next;
    }
    Ok(HighLowReport {
        delta,
        rows,
        final_state: state,
        direct_final: direct,
        threshold,
        mass0,
        warnings,
    })
}
