//! Split-step integrator for `i∂ₜu − Δ²u = |u|⁴u`.
//!
//! The equation splits into two exactly solvable flows:
//!
//! * linear, `∂ₜû = −i|ξ|⁴û`, solved by `û ← e^{−i|ξ|⁴t}û`;
//! * nonlinear, `i∂ₜu = |u|⁴u`, which preserves `|u|` pointwise and is
//!   solved by `u ← u e^{−i|u|⁴t}`.
//!
//! The sign of the linear propagator lives only in [`propagator_phase`].
//! After each nonlinear sub-step the coefficients with
//! `max(|k₁|, |k₂|) > dealias_fraction · n/2` are zeroed.

use std::fmt;
use std::str::FromStr;

use crate::spectral::{Field2D, GridSpec};
use crate::{Error, Result, C64};

/// Phase accumulated by the free flow at frequency `|ξ|` over time `t`:
/// `e^{−i|ξ|⁴t}`. The sign follows from `i∂ₜu = Δ²u`.
pub fn propagator_phase(xi_sq: f64, t: f64) -> C64 {
    C64::from_polar(1.0, -xi_sq * xi_sq * t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `L(dt/2) N(dt) L(dt/2)`, second order
    Strang,
    /// `N(dt) L(dt)`, first order
    Lie,
    /// Yoshida triple jump of Strang steps, fourth order
    Yoshida4,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Strang => "strang",
            Scheme::Lie => "lie",
            Scheme::Yoshida4 => "yoshida4",
        }
    }

    pub fn order(self) -> u32 {
        match self {
            Scheme::Strang => 2,
            Scheme::Lie => 1,
            Scheme::Yoshida4 => 4,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strang" => Ok(Scheme::Strang),
            "lie" => Ok(Scheme::Lie),
            "yoshida4" => Ok(Scheme::Yoshida4),
            other => Err(Error::param(format!("unknown scheme `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// Retained fraction of the Nyquist index. `1/3` is alias-free for a
    /// quintic power (`2/(p+1)` with `p = 5`).
    pub dealias_fraction: f64,
    /// Record diagnostics every this many steps (the final step is always recorded).
    pub record_every: usize,
    /// Keep a copy of the field at every recorded time.
    pub keep_fields: bool,
    /// Regularity used for the `H^s` column of the diagnostics.
    pub s: f64,
}

impl SolverConfig {
    pub const DEFAULT_DEALIAS: f64 = 1.0 / 3.0;

    pub fn new(dt: f64, t_end: f64) -> Self {
        Self {
            dt,
            t_end,
            scheme: Scheme::Strang,
            dealias_fraction: Self::DEFAULT_DEALIAS,
            record_every: 1,
            keep_fields: false,
            s: 1.5,
        }
    }

    pub fn scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn dealias(mut self, fraction: f64) -> Self {
        self.dealias_fraction = fraction;
        self
    }

    pub fn record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn keep_fields(mut self, keep: bool) -> Self {
        self.keep_fields = keep;
        self
    }

    pub fn regularity(mut self, s: f64) -> Self {
        self.s = s;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::param(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::param(format!("t_end must be positive, got {}", self.t_end)));
        }
        if self.dt > self.t_end {
            return Err(Error::param(format!("dt = {} exceeds t_end = {}", self.dt, self.t_end)));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(Error::param(format!(
                "dealias fraction must lie in (0, 1], got {}",
                self.dealias_fraction
            )));
        }
        if self.record_every == 0 {
            return Err(Error::param("record_every must be positive"));
        }
        Ok(())
    }

    /// Number of full steps and the length of a trailing partial step.
    pub fn step_plan(&self) -> (usize, f64) {
        let ratio = self.t_end / self.dt;
        let full = (ratio + 1e-9).floor() as usize;
        let rem = self.t_end - full as f64 * self.dt;
        if rem > 1e-12 * self.t_end {
            (full, rem)
        } else {
            (full, 0.0)
        }
    }
}

/// Exact free flow `e^{−i|ξ|⁴t}`. Result in frequency form.
pub fn linear_propagate(f: &Field2D, t: f64) -> Field2D {
    let mut out = f.to_frequency();
    let g = *out.grid();
    let n = g.points_per_side();
    let values = out.values_mut();
    for i in 0..n {
        let a = g.frequency(i);
        for j in 0..n {
            let b = g.frequency(j);
            values[i * n + j] *= propagator_phase(a * a + b * b, t);
        }
    }
    out
}

fn phase_in_place(values: &mut [C64], dt: f64) {
    for v in values.iter_mut() {
        let a2 = v.norm_sqr();
        *v *= C64::from_polar(1.0, -a2 * a2 * dt);
    }
}

/// Exact nonlinear sub-flow `u ← u e^{−i|u|⁴dt}`. Result in physical form.
pub fn nonlinear_phase_step(f: &Field2D, dt: f64) -> Field2D {
    let mut out = f.to_physical();
    phase_in_place(out.values_mut(), dt);
    out
}

/// Retention mask for `max(|k₁|,|k₂|) ≤ fraction · n/2`.
pub fn dealias_mask(grid: &GridSpec, fraction: f64) -> Vec<bool> {
    let kmax = fraction * grid.nyquist_index() as f64;
    grid.sup_wavenumbers().into_iter().map(|k| k as f64 <= kmax + 1e-12).collect()
}

/// Zeroes the coefficients outside the dealiasing square. Result in frequency form.
pub fn dealias(f: &Field2D, fraction: f64) -> Field2D {
    let mask = dealias_mask(f.grid(), fraction);
    let mut out = f.to_frequency();
    for (v, keep) in out.values_mut().iter_mut().zip(mask) {
        if !keep {
            *v = C64::new(0.0, 0.0);
        }
    }
    out
}

/// Precomputed per-grid data for repeated stepping.
#[derive(Clone, Debug)]
pub struct Integrator {
    grid: GridSpec,
    scheme: Scheme,
    dealias_fraction: f64,
    xi_sq: Vec<f64>,
    mask: Vec<bool>,
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Linear(usize),
    Nonlinear(f64),
}

/// An [`Integrator`] bound to a step size, with propagator kernels cached.
pub struct Stepper<'a> {
    integrator: &'a Integrator,
    kernels: Vec<Vec<C64>>,
    ops: Vec<Op>,
}

impl Integrator {
    pub fn new(grid: GridSpec, scheme: Scheme, dealias_fraction: f64) -> Result<Self> {
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(Error::param(format!("dealias fraction must lie in (0, 1], got {dealias_fraction}")));
        }
        Ok(Self {
            grid,
            scheme,
            dealias_fraction,
            xi_sq: grid.frequency_table(|[a, b]| a * a + b * b),
            mask: dealias_mask(&grid, dealias_fraction),
        })
    }

    pub fn for_config(grid: GridSpec, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        Self::new(grid, cfg.scheme, cfg.dealias_fraction)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    pub fn retains(&self, index: usize) -> bool {
        self.mask[index]
    }

    fn kernel(&self, t: f64) -> Vec<C64> {
        self.xi_sq.iter().map(|&r2| propagator_phase(r2, t)).collect()
    }

    /// Binds the integrator to step size `dt` (which may be negative).
    pub fn stepper(&self, dt: f64) -> Stepper<'_> {
        let mut kernels = Vec::new();
        let mut ops = Vec::new();
        let strang = |h: f64, kernels: &mut Vec<Vec<C64>>, ops: &mut Vec<Op>| {
            kernels.push(self.kernel(0.5 * h));
            let k = kernels.len() - 1;
            ops.extend([Op::Linear(k), Op::Nonlinear(h), Op::Linear(k)]);
        };
        match self.scheme {
            Scheme::Strang => strang(dt, &mut kernels, &mut ops),
            Scheme::Lie => {
                kernels.push(self.kernel(dt));
                ops.extend([Op::Nonlinear(dt), Op::Linear(0)]);
            }
            Scheme::Yoshida4 => {
                let cbrt2 = 2f64.cbrt();
                let w1 = 1.0 / (2.0 - cbrt2);
                let w0 = -cbrt2 / (2.0 - cbrt2);
                strang(w1 * dt, &mut kernels, &mut ops);
                strang(w0 * dt, &mut kernels, &mut ops);
                ops.extend([Op::Linear(0), Op::Nonlinear(w1 * dt), Op::Linear(0)]);
            }
        }
        Stepper { integrator: self, kernels, ops }
    }

    /// One step of size `dt`. Result in frequency form.
    pub fn step(&self, f: &Field2D, dt: f64) -> Result<Field2D> {
        self.stepper(dt).step(f.clone())
    }
}

impl Stepper<'_> {
    /// Advances `f` by one step. Result in frequency form.
    pub fn step(&self, f: Field2D) -> Result<Field2D> {
        if f.grid() != self.integrator.grid() {
            return Err(Error::GridMismatch("field and integrator grids differ".into()));
        }
        let mut f = f.into_frequency();
        for op in &self.ops {
            match *op {
                Op::Linear(k) => {
                    f.values_mut().iter_mut().zip(&self.kernels[k]).for_each(|(v, &p)| *v *= p);
                }
                Op::Nonlinear(h) => {
                    let mut phys = f.into_physical();
                    phase_in_place(phys.values_mut(), h);
                    f = phys.into_frequency();
                    for (v, &keep) in f.values_mut().iter_mut().zip(&self.integrator.mask) {
                        if !keep {
                            *v = C64::new(0.0, 0.0);
                        }
                    }
                }
            }
        }
        Ok(f)
    }
}

/// One step of the configured scheme with `cfg.dt`. Result in frequency form.
pub fn step(f: &Field2D, cfg: &SolverConfig) -> Result<Field2D> {
    Integrator::for_config(*f.grid(), cfg)?.step(f, cfg.dt)
}

/// `true` if the field is already confined to the retained square.
pub fn is_dealiased(f: &Field2D, fraction: f64) -> bool {
    let fh = f.to_frequency();
    let mask = dealias_mask(fh.grid(), fraction);
    fh.values().iter().zip(mask).all(|(v, keep)| keep || *v == C64::new(0.0, 0.0))
}
