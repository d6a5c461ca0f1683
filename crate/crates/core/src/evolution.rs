//! The transformed Klein-Gordon-Schrödinger and Zakharov systems in the
//! half-wave variables `w^± = v ± iA^{-1}v_t`, `A = (1-Δ)^{1/2}`:
//!
//! * KGS: `u_t = iΔu + (i/2) u (w⁺+w⁻)`, `w^±_t = ∓iA w^± ± iA^{-1}|u|²`
//! * Zakharov: `u_t = iΔu - (i/2) u (n⁺+n⁻)`,
//!   `n^±_t = ∓iA n^± ± iA^{-1}(Δ|u|² + Re n^±)`
//!
//! `w⁺` pairs with the propagator `e^{-itA}` and `w⁻` with `e^{+itA}`.

use std::fmt;

use num_complex::Complex64;

use crate::error::Result;
use crate::integrator::{
    integrate_system, FlowBlock, IntegratorConfig, LinearFlow, SemilinearSystem,
};
use crate::spectral::{
    apply_table, dealias, dealiased_abs_sq, fourier_multiplier, Branch, Grid, SpectralField,
    Symbol, ZeroMode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum System {
    Kgs,
    Zakharov,
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            System::Kgs => "kgs",
            System::Zakharov => "zakharov",
        })
    }
}

/// Free evolutions appearing in the linear parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dispersion {
    /// `e^{-it|ξ|²}`.
    Schrodinger,
    /// `e^{-it⟨ξ⟩}`.
    KgPlus,
    /// `e^{+it⟨ξ⟩}`.
    KgMinus,
}

impl Dispersion {
    pub fn symbol(self, t: f64) -> Symbol {
        match self {
            Dispersion::Schrodinger => Symbol::Schrodinger(t),
            Dispersion::KgPlus => Symbol::KleinGordon { branch: Branch::Plus, t },
            Dispersion::KgMinus => Symbol::KleinGordon { branch: Branch::Minus, t },
        }
    }
}

/// Apply the free group of `dispersion` for time `t`.
pub fn linear_propagate(field: &SpectralField, dispersion: Dispersion, t: f64) -> SpectralField {
    fourier_multiplier(field, dispersion.symbol(t)).expect("propagators are nonsingular")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    pub system: System,
    pub u: SpectralField,
    /// `v⁺` (KGS) or `n⁺` (Zakharov).
    pub wplus: SpectralField,
    /// `v⁻` (KGS) or `n⁻` (Zakharov).
    pub wminus: SpectralField,
    pub t: f64,
}

impl SystemState {
    pub fn new(
        system: System,
        u: SpectralField,
        wplus: SpectralField,
        wminus: SpectralField,
        t: f64,
    ) -> Result<Self> {
        u.same_grid(&wplus, "state")?;
        u.same_grid(&wminus, "state")?;
        Ok(SystemState {
            system,
            u,
            wplus,
            wminus,
            t,
        })
    }

    pub fn zeros(system: System, grid: &Grid) -> Self {
        let z = SpectralField::zeros(grid);
        SystemState {
            system,
            u: z.clone(),
            wplus: z.clone(),
            wminus: z,
            t: 0.0,
        }
    }

    /// Build from `(u₀, v₀, v₁)` with real-valued wave data.
    pub fn from_wave_data(
        system: System,
        u: SpectralField,
        v: &SpectralField,
        v_t: &SpectralField,
    ) -> Result<Self> {
        let (wp, wm) = join_wave(v, v_t)?;
        SystemState::new(system, u, wp, wm, 0.0)
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    pub fn fields(&self) -> Vec<SpectralField> {
        vec![self.u.clone(), self.wplus.clone(), self.wminus.clone()]
    }

    fn with_fields(&self, mut fields: Vec<SpectralField>, t: f64) -> Self {
        let wminus = fields.pop().expect("three fields");
        let wplus = fields.pop().expect("three fields");
        let u = fields.pop().expect("three fields");
        SystemState {
            system: self.system,
            u,
            wplus,
            wminus,
            t,
        }
    }

    /// Free evolution of all three components for time `t`.
    pub fn linear_propagate(&self, t: f64) -> SystemState {
        SystemState {
            system: self.system,
            u: linear_propagate(&self.u, Dispersion::Schrodinger, t),
            wplus: linear_propagate(&self.wplus, Dispersion::KgPlus, t),
            wminus: linear_propagate(&self.wminus, Dispersion::KgMinus, t),
            t: self.t + t,
        }
    }

    /// Reconstructed `(v, v_t)` (or `(n, n_t)`).
    pub fn wave(&self) -> (SpectralField, SpectralField) {
        split_wave(&self.wplus, &self.wminus).expect("state fields share a grid")
    }

    /// `‖conj(w⁺) - w⁻‖_{L²}`; zero when the wave field is real.
    pub fn reality_defect(&self) -> f64 {
        self.wplus
            .conj()
            .sub(&self.wminus)
            .expect("same grid")
            .l2_norm()
    }
}

/// `w^± = v ± iA^{-1} v_t`.
pub fn join_wave(v: &SpectralField, v_t: &SpectralField) -> Result<(SpectralField, SpectralField)> {
    v.same_grid(v_t, "wave components")?;
    let a_inv_vt = fourier_multiplier(v_t, Symbol::Bessel(-1.0))?;
    let i = Complex64::new(0.0, 1.0);
    Ok((v.axpy(i, &a_inv_vt)?, v.axpy(-i, &a_inv_vt)?))
}

/// `v = (w⁺ + w⁻)/2`, `v_t = A(w⁺ - w⁻)/(2i)`.
pub fn split_wave(wplus: &SpectralField, wminus: &SpectralField) -> Result<(SpectralField, SpectralField)> {
    let v = wplus.add(wminus)?.scale_real(0.5);
    let diff = wplus.sub(wminus)?.scale(Complex64::new(0.0, -0.5));
    Ok((v, fourier_multiplier(&diff, Symbol::Bessel(1.0))?))
}

/// Transformed KGS or Zakharov system on a grid, with cached symbol tables.
pub struct TransformedSystem {
    system: System,
    grid: Grid,
    inv_bessel: Vec<Complex64>,
    laplacian: Vec<Complex64>,
}

impl TransformedSystem {
    pub fn new(system: System, grid: &Grid) -> Self {
        TransformedSystem {
            system,
            grid: grid.clone(),
            inv_bessel: Symbol::Bessel(-1.0).table(grid).expect("nonsingular"),
            laplacian: Symbol::Laplacian.table(grid).expect("nonsingular"),
        }
    }

    pub fn system(&self) -> System {
        self.system
    }

    /// `(du, dw⁺, dw⁻)`: the non-dispersive part of the time derivative.
    pub fn rhs(&self, u: &SpectralField, wplus: &SpectralField, wminus: &SpectralField) -> [SpectralField; 3] {
        let grid = &self.grid;
        let us = dealias(u).to_samples();
        let ws = dealias(&wplus.add(wminus).expect("same grid")).to_samples();
        let prod: Vec<Complex64> = us.iter().zip(&ws).map(|(a, b)| a * b).collect();
        let prod = dealias(&SpectralField::from_samples(grid, &prod).expect("grid"));
        let abs: Vec<Complex64> = us.iter().map(|a| Complex64::new(a.norm_sqr(), 0.0)).collect();
        let rho = dealias(&SpectralField::from_samples(grid, &abs).expect("grid"));
        let i = Complex64::new(0.0, 1.0);
        match self.system {
            System::Kgs => {
                let src = apply_table(&rho, &self.inv_bessel);
                [prod.scale(0.5 * i), src.scale(i), src.scale(-i)]
            }
            System::Zakharov => {
                let lap_rho = apply_table(&rho, &self.laplacian);
                let fp = lap_rho.add(&wplus.real_part()).expect("grid");
                let fm = lap_rho.add(&wminus.real_part()).expect("grid");
                [
                    prod.scale(-0.5 * i),
                    apply_table(&fp, &self.inv_bessel).scale(i),
                    apply_table(&fm, &self.inv_bessel).scale(-i),
                ]
            }
        }
    }
}

impl SemilinearSystem for TransformedSystem {
    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn field_names(&self) -> &[&'static str] {
        &["u", "wplus", "wminus"]
    }

    fn linear_flow(&self, h: f64) -> LinearFlow {
        let table = |d: Dispersion| d.symbol(h).table(&self.grid).expect("nonsingular");
        LinearFlow {
            blocks: vec![
                FlowBlock::Diagonal { field: 0, table: table(Dispersion::Schrodinger) },
                FlowBlock::Diagonal { field: 1, table: table(Dispersion::KgPlus) },
                FlowBlock::Diagonal { field: 2, table: table(Dispersion::KgMinus) },
            ],
        }
    }

    fn nonlinear(&self, fields: &[SpectralField]) -> Vec<SpectralField> {
        self.rhs(&fields[0], &fields[1], &fields[2]).into()
    }
}

/// Non-dispersive part of the time derivative of `state`.
pub fn nonlinear_rhs(state: &SystemState) -> (SpectralField, SpectralField, SpectralField) {
    let sys = TransformedSystem::new(state.system, state.grid());
    let [du, dp, dm] = sys.rhs(&state.u, &state.wplus, &state.wminus);
    (du, dp, dm)
}

/// Integrate `state` over `[state.t, state.t + config.t_end]`.
pub fn integrate(state: &SystemState, config: &IntegratorConfig) -> Result<Vec<SystemState>> {
    let sys = TransformedSystem::new(state.system, state.grid());
    let traj = integrate_system(&sys, state.fields(), state.t, config)?;
    Ok(traj
        .into_iter()
        .map(|snap| state.with_fields(snap.fields, snap.t))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservationReport {
    /// `M(u) = ‖u‖_{L²}`.
    pub mass: f64,
    /// `E` for KGS, `Ẽ` for Zakharov.
    pub hamiltonian: f64,
    /// `L²` size of the zero mode of `n_t`, excluded from `Ẽ` (Zakharov only).
    pub zero_mode_mass_of_wave: Option<f64>,
    pub hs_u: f64,
    pub hr_wplus: f64,
    pub hr_wminus: f64,
}

/// Mass, Hamiltonian and `‖u‖_{H^s}`, `‖w^±‖_{H^r}`.
pub fn conserved_quantities(state: &SystemState, s: f64, r: f64) -> ConservationReport {
    let grid = state.grid();
    let (v, v_t) = state.wave();
    let grad_u_sq = state.u.homogeneous_norm(1.0, ZeroMode::Annihilate).expect("s > 0").powi(2);
    let rho = dealiased_abs_sq(&state.u);
    let cubic = rho.inner(&v.conj()).expect("grid").re;
    let (hamiltonian, zero) = match state.system {
        System::Kgs => {
            let v_sq = v.l2_norm().powi(2);
            let vt_sq = v_t.l2_norm().powi(2);
            let grad_v_sq = v.homogeneous_norm(1.0, ZeroMode::Annihilate).expect("s > 0").powi(2);
            (grad_u_sq + 0.5 * (v_sq + vt_sq + grad_v_sq) - cubic, None)
        }
        System::Zakharov => {
            let n_sq = v.l2_norm().powi(2);
            let nt_sq = v_t
                .homogeneous_norm(-1.0, ZeroMode::Annihilate)
                .expect("annihilated zero mode")
                .powi(2);
            let zero = v_t.zero_mode().norm() / grid.volume().sqrt();
            (grad_u_sq + 0.5 * (n_sq + nt_sq) + cubic, Some(zero))
        }
    };
    ConservationReport {
        mass: state.u.l2_norm(),
        hamiltonian,
        zero_mode_mass_of_wave: zero,
        hs_u: state.u.sobolev_norm(s),
        hr_wplus: state.wplus.sobolev_norm(r),
        hr_wminus: state.wminus.sobolev_norm(r),
    }
}

/// Relative difference `|a - b| / |b|`, or the absolute difference when `b = 0`.
pub fn relative_drift(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        (a - b).abs()
    } else {
        ((a - b) / b).abs()
    }
}
