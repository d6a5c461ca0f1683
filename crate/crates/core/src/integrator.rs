//! Time stepping for semilinear systems `y' = L y + N(y)` whose linear part is
//! diagonal in Fourier space, possibly coupling two fields per mode.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

/// Norm above which a run is declared blown up.
pub const BLOW_UP_THRESHOLD: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Fourth-order Runge-Kutta in the interaction picture (Lawson).
    #[default]
    ExponentialRk4,
    /// Second-order Strang splitting with an RK4 nonlinear substep.
    Strang,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub scheme: Scheme,
    pub t_end: f64,
    pub record_every: usize,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        IntegratorConfig {
            dt,
            scheme: Scheme::ExponentialRk4,
            t_end,
            record_every: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::Config(format!(
                "t_end must be nonnegative, got {}",
                self.t_end
            )));
        }
        if self.record_every == 0 {
            return Err(Error::Config("record_every must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of steps needed to reach `t_end`, the last one possibly shortened.
    pub fn step_count(&self) -> usize {
        let k = self.t_end / self.dt;
        let r = k.round();
        if (k - r).abs() < 1e-9 * k.max(1.0) {
            r as usize
        } else {
            k.ceil() as usize
        }
    }
}

/// Exact linear propagator over one fixed time increment.
#[derive(Debug, Clone)]
pub enum FlowBlock {
    /// `y_i ← table ⊙ y_i`.
    Diagonal { field: usize, table: Vec<Complex64> },
    /// `(y_a, y_b) ← M(ξ) (y_a, y_b)` with `M = [m00, m01; m10, m11]` per mode.
    Pair {
        fields: (usize, usize),
        table: Vec<[Complex64; 4]>,
    },
}

#[derive(Debug, Clone)]
pub struct LinearFlow {
    pub blocks: Vec<FlowBlock>,
}

impl LinearFlow {
    pub fn apply(&self, fields: &mut [SpectralField]) {
        for block in &self.blocks {
            match block {
                FlowBlock::Diagonal { field, table } => {
                    for (c, m) in fields[*field].coeffs_mut().iter_mut().zip(table) {
                        *c *= m;
                    }
                }
                FlowBlock::Pair { fields: (a, b), table } => {
                    let (fa, fb) = pair_mut(fields, *a, *b);
                    for ((x, y), m) in fa
                        .coeffs_mut()
                        .iter_mut()
                        .zip(fb.coeffs_mut().iter_mut())
                        .zip(table)
                    {
                        let (x0, y0) = (*x, *y);
                        *x = m[0] * x0 + m[1] * y0;
                        *y = m[2] * x0 + m[3] * y0;
                    }
                }
            }
        }
    }

    pub fn applied(&self, fields: &[SpectralField]) -> Vec<SpectralField> {
        let mut out = fields.to_vec();
        self.apply(&mut out);
        out
    }
}

fn pair_mut(fields: &mut [SpectralField], a: usize, b: usize) -> (&mut SpectralField, &mut SpectralField) {
    assert!(a != b);
    if a < b {
        let (lo, hi) = fields.split_at_mut(b);
        (&mut lo[a], &mut hi[0])
    } else {
        let (lo, hi) = fields.split_at_mut(a);
        (&mut hi[0], &mut lo[b])
    }
}

/// A system `y' = L y + N(y)` on a fixed grid.
pub trait SemilinearSystem: Sync {
    fn grid(&self) -> &Grid;
    /// Names of the fields, also fixing their count and order.
    fn field_names(&self) -> &[&'static str];
    /// Exact propagator `e^{hL}`.
    fn linear_flow(&self, h: f64) -> LinearFlow;
    /// Nonlinear right-hand side `N(y)`.
    fn nonlinear(&self, fields: &[SpectralField]) -> Vec<SpectralField>;
}

/// One recorded state of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub fields: Vec<SpectralField>,
}

/// Single-step driver with cached linear flows.
pub struct Stepper<'a, S: SemilinearSystem + ?Sized> {
    system: &'a S,
    scheme: Scheme,
    cache_h: f64,
    full: LinearFlow,
    half: LinearFlow,
}

impl<'a, S: SemilinearSystem + ?Sized> Stepper<'a, S> {
    pub fn new(system: &'a S, scheme: Scheme, h: f64) -> Self {
        Stepper {
            system,
            scheme,
            cache_h: h,
            full: system.linear_flow(h),
            half: system.linear_flow(0.5 * h),
        }
    }

    fn ensure(&mut self, h: f64) {
        if h != self.cache_h {
            self.cache_h = h;
            self.full = self.system.linear_flow(h);
            self.half = self.system.linear_flow(0.5 * h);
        }
    }

    /// Advance `fields` by `h`.
    pub fn step(&mut self, fields: &mut Vec<SpectralField>, h: f64) {
        self.ensure(h);
        match self.scheme {
            Scheme::ExponentialRk4 => self.lawson(fields, h),
            Scheme::Strang => {
                self.half.apply(fields);
                classical_rk4(self.system, fields, h);
                self.half.apply(fields);
            }
        }
    }

    fn lawson(&self, y: &mut Vec<SpectralField>, h: f64) {
        let sys = self.system;
        let k1 = sys.nonlinear(y);
        let mut a = combine(y, 0.5 * h, &k1);
        self.half.apply(&mut a);
        let k2 = sys.nonlinear(&a);
        let yh = self.half.applied(y);
        let b = combine(&yh, 0.5 * h, &k2);
        let k3 = sys.nonlinear(&b);
        let yf = self.full.applied(y);
        let c = combine(&yf, h, &self.half.applied(&k3));
        let k4 = sys.nonlinear(&c);

        let k1f = self.full.applied(&k1);
        let mut k23 = k2;
        accumulate(&mut k23, 1.0, &k3);
        self.half.apply(&mut k23);
        let mut out = yf;
        accumulate(&mut out, h / 6.0, &k1f);
        accumulate(&mut out, h / 3.0, &k23);
        accumulate(&mut out, h / 6.0, &k4);
        *y = out;
    }
}

fn classical_rk4<S: SemilinearSystem + ?Sized>(sys: &S, y: &mut Vec<SpectralField>, h: f64) {
    let k1 = sys.nonlinear(y);
    let k2 = sys.nonlinear(&combine(y, 0.5 * h, &k1));
    let k3 = sys.nonlinear(&combine(y, 0.5 * h, &k2));
    let k4 = sys.nonlinear(&combine(y, h, &k3));
    accumulate(y, h / 6.0, &k1);
    accumulate(y, h / 3.0, &k2);
    accumulate(y, h / 3.0, &k3);
    accumulate(y, h / 6.0, &k4);
}

/// `y + a·k` fieldwise.
pub(crate) fn combine(y: &[SpectralField], a: f64, k: &[SpectralField]) -> Vec<SpectralField> {
    let mut out = y.to_vec();
    accumulate(&mut out, a, k);
    out
}

/// `y += a·k` fieldwise.
pub(crate) fn accumulate(y: &mut [SpectralField], a: f64, k: &[SpectralField]) {
    for (yi, ki) in y.iter_mut().zip(k) {
        for (c, d) in yi.coeffs_mut().iter_mut().zip(ki.coeffs()) {
            *c += a * d;
        }
    }
}

/// Fails if any field is non-finite or has `L²` norm above [`BLOW_UP_THRESHOLD`].
pub fn check_blow_up(names: &[&str], fields: &[SpectralField], t: f64) -> Result<()> {
    for (name, f) in names.iter().zip(fields) {
        let norm = f.l2_norm();
        if !norm.is_finite() || norm > BLOW_UP_THRESHOLD {
            return Err(Error::BlowUp {
                t,
                detail: format!("|{name}|_L2 = {norm:e}"),
            });
        }
    }
    Ok(())
}

/// Integrate from `(t0, initial)` to `t0 + config.t_end`.
///
/// Records the initial state, every `record_every`-th step and the final state.
pub fn integrate_system<S: SemilinearSystem + ?Sized>(
    system: &S,
    initial: Vec<SpectralField>,
    t0: f64,
    config: &IntegratorConfig,
) -> Result<Vec<Snapshot>> {
    config.validate()?;
    if initial.len() != system.field_names().len() {
        return Err(Error::SizeMismatch(format!(
            "system expects {} fields, got {}",
            system.field_names().len(),
            initial.len()
        )));
    }
    for f in &initial {
        if f.grid() != system.grid() {
            return Err(Error::SizeMismatch("initial field on a different grid".into()));
        }
    }
    let names = system.field_names();
    check_blow_up(names, &initial, t0)?;

    let steps = config.step_count();
    let mut stepper = Stepper::new(system, config.scheme, config.dt);
    let mut y = initial;
    let mut out = vec![Snapshot {
        step: 0,
        t: t0,
        fields: y.clone(),
    }];
    for k in 1..=steps {
        let t_prev = t0 + (k - 1) as f64 * config.dt;
        let h = if k == steps {
            t0 + config.t_end - t_prev
        } else {
            config.dt
        };
        stepper.step(&mut y, h);
        let t = if k == steps {
            t0 + config.t_end
        } else {
            t0 + k as f64 * config.dt
        };
        check_blow_up(names, &y, t)?;
        if k % config.record_every == 0 || k == steps {
            out.push(Snapshot {
                step: k,
                t,
                fields: y.clone(),
            });
        }
    }
    Ok(out)
}
