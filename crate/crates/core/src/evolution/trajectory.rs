use super::solver::{Integrator, SolverConfig};
use crate::imethod::{EnergyReport, IMultiplier};
use crate::spectral::Field2D;
use crate::{Error, Result, C64};

/// Recorded history of one run.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub reports: Vec<EnergyReport>,
    /// Present when the run was configured with `keep_fields`.
    pub fields: Option<Vec<Field2D>>,
    pub final_field: Option<Field2D>,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `max_t |M(t) − M(0)| / M(0)`.
    pub fn max_relative_mass_drift(&self) -> f64 {
        relative_drift(self.reports.iter().map(|r| r.mass))
    }

    /// `max_t |E(t) − E(0)| / |E(0)|`.
    pub fn max_relative_energy_drift(&self) -> f64 {
        relative_drift(self.reports.iter().map(|r| r.energy))
    }

    /// `sup_t |E(Iu(t)) − E(Iu(0))|`, if modified energies were recorded.
    pub fn modified_energy_increment(&self) -> Option<f64> {
        let first = self.reports.first()?.modified_energy?;
        self.reports
            .iter()
            .map(|r| r.modified_energy.map(|e| (e - first).abs()))
            .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))
    }
}

fn relative_drift(mut values: impl Iterator<Item = f64>) -> f64 {
    let Some(first) = values.next() else { return 0.0 };
    let scale = first.abs();
    let max = values.map(|v| (v - first).abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        max
    } else {
        max / scale
    }
}

/// Fraction of the spectral peak still present in the outermost retained
/// shell (two wavenumbers wide) or outside the retained square.
pub fn edge_spectrum_ratio(f: &Field2D, integ: &Integrator) -> f64 {
    let fh = f.to_frequency();
    let g = *fh.grid();
    let kmax = integ.dealias_fraction() * g.nyquist_index() as f64;
    let sup = g.sup_wavenumbers();
    let mut edge = 0.0f64;
    let mut peak = 0.0f64;
    for (v, &k) in fh.values().iter().zip(&sup) {
        let a = v.norm();
        peak = peak.max(a);
        if k as f64 > kmax - 2.0 {
            edge = edge.max(a);
        }
    }
    if peak == 0.0 {
        0.0
    } else {
        edge / peak
    }
}

/// Resolution threshold for [`edge_spectrum_ratio`].
pub const EDGE_SPECTRUM_TOLERANCE: f64 = 1e-10;

/// Runs the scheme from `f0` to `cfg.t_end`, calling `observer(t, u)` at each
/// recorded time (step 0, every `record_every` steps and the final time).
/// Returns the final field in frequency form.
pub fn evolve_observed(
    f0: &Field2D,
    cfg: &SolverConfig,
    mut observer: impl FnMut(f64, &Field2D),
) -> Result<Field2D> {
    let integ = Integrator::for_config(*f0.grid(), cfg)?;
    let (full, partial) = cfg.step_plan();
    let stepper = integ.stepper(cfg.dt);
    let mut u = f0.to_frequency();
    observer(0.0, &u);
    let mut last_good = 0.0;
    for k in 1..=full {
        u = stepper.step(u)?;
        let t = k as f64 * cfg.dt;
        if !u.is_finite() {
            return Err(Error::BlowUp { last_good_time: last_good });
        }
        last_good = t;
        if (k % cfg.record_every == 0) || (k == full && partial == 0.0) {
            observer(t, &u);
        }
    }
    if partial > 0.0 {
        u = integ.step(&u, partial)?;
        if !u.is_finite() {
            return Err(Error::BlowUp { last_good_time: last_good });
        }
        observer(cfg.t_end, &u);
    }
    Ok(u)
}

/// Runs the scheme and records an [`EnergyReport`] at every recorded time.
pub fn evolve(f0: &Field2D, cfg: &SolverConfig, m: Option<&IMultiplier>) -> Result<Trajectory> {
    let integ = Integrator::for_config(*f0.grid(), cfg)?;
    let mut traj = Trajectory::default();
    let edge = edge_spectrum_ratio(f0, &integ);
    if edge > EDGE_SPECTRUM_TOLERANCE {
        traj.warnings.push(format!(
            "initial spectrum at the dealiasing edge is {edge:.3e} of its peak (> {EDGE_SPECTRUM_TOLERANCE:e}); data under-resolved"
        ));
    }
    let mut fields = cfg.keep_fields.then(Vec::new);
    let s = m.map_or(cfg.s, IMultiplier::s);
    let last = evolve_observed(f0, cfg, |t, u| {
        traj.times.push(t);
        traj.reports.push(EnergyReport::measure(t, u, m, s));
        if let Some(fs) = fields.as_mut() {
            fs.push(u.clone());
        }
    })?;
    traj.fields = fields;
    traj.final_field = Some(last);
    Ok(traj)
}

/// How errors are measured in a [`convergence_study`].
#[derive(Clone, Debug)]
pub enum ConvergenceReference {
    /// Compare against a known solution at `t_end`.
    Exact(Field2D),
    /// Compare against a run with step `min(dts) / divisor`.
    Refined { divisor: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub dts: Vec<f64>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `log(error)` against `log(dt)`.
    pub order: f64,
}

fn final_state(f0: &Field2D, cfg: &SolverConfig) -> Result<Field2D> {
    evolve_observed(f0, cfg, |_, _| {})
}

/// Fits the global convergence order of `cfg_base.scheme` at `cfg_base.t_end`.
pub fn convergence_study(
    f0: &Field2D,
    cfg_base: &SolverConfig,
    dts: &[f64],
    reference: &ConvergenceReference,
) -> Result<ConvergenceReport> {
    if dts.len() < 3 {
        return Err(Error::param(format!("convergence study needs at least 3 step sizes, got {}", dts.len())));
    }
    if dts.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::param("step sizes must be strictly decreasing"));
    }
    let reference = match reference {
        ConvergenceReference::Exact(f) => f.clone(),
        ConvergenceReference::Refined { divisor } => {
            let mut cfg = cfg_base.clone();
            cfg.dt = dts[dts.len() - 1] / (*divisor).max(1) as f64;
            final_state(f0, &cfg)?
        }
    };
    let mut errors = Vec::with_capacity(dts.len());
    for &dt in dts {
        let mut cfg = cfg_base.clone();
        cfg.dt = dt;
        errors.push(final_state(f0, &cfg)?.relative_l2_error(&reference)?);
    }
    let order = crate::fit::loglog_slope(dts, &errors)?;
    Ok(ConvergenceReport { dts: dts.to_vec(), errors, order })
}

/// Closed-form plane wave `A e^{i(ξ₀·x − ωt)}`, `ω = |ξ₀|⁴ + |A|⁴`.
pub fn plane_wave_solution(
    grid: crate::GridSpec,
    wavenumber: [i64; 2],
    amplitude: f64,
    t: f64,
) -> Result<Field2D> {
    let dk = grid.frequency_step();
    let xi_sq = dk * dk * (wavenumber[0].pow(2) + wavenumber[1].pow(2)) as f64;
    let omega = xi_sq * xi_sq + amplitude.powi(4);
    Field2D::plane_wave(grid, wavenumber, C64::from_polar(amplitude, -omega * t))
}
