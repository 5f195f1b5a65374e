//! Almost-conservation sweeps and the rescaled energy identity.

use super::rescale::{rescale, RescaleLimits};
use crate::evolution::{evolve_observed, SolverConfig};
use crate::fit::loglog_slope;
use crate::imethod::{energy, modified_energy, IMultiplier, SEXTIC_COEFFICIENT};
use crate::spectral::{Dyadic, Field2D};
use crate::table::CsvTable;
use crate::{Error, Result, C64};
use rayon::prelude::*;

fn energy_parts(f: &Field2D, m: &IMultiplier) -> Result<(f64, f64)> {
    let g = m.apply(f);
    let kinetic = energy(&g, 0.0);
    let sextic = energy(&g, SEXTIC_COEFFICIENT) - kinetic;
    if !(kinetic.is_finite() && sextic.is_finite()) {
        return Err(Error::Data("modified energy of the data is not finite".into()));
    }
    Ok((kinetic, sextic))
}

/// Amplitude `a` with `E(I(a f)) = target`; `E(I(a f)) = a²K + a⁶S` is
/// increasing in `a`.
fn amplitude_for(kinetic: f64, sextic: f64, target: f64) -> Result<f64> {
    let e = |a: f64| a * a * kinetic + a.powi(6) * sextic;
    let mut hi = 1.0;
    while e(hi) < target {
        hi *= 2.0;
        if hi > 1e150 {
            return Err(Error::Data("cannot normalize the modified energy by amplitude scaling".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if e(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo == 0.0 {
        return Err(Error::Data("cannot normalize the modified energy by amplitude scaling".into()));
    }
    Ok(lo)
}

fn check_target(target: f64) -> Result<()> {
    if !(target > 0.0 && target.is_finite()) {
        return Err(Error::Data(format!("modified-energy target must be positive, got {target}")));
    }
    Ok(())
}

/// Scales `f` down so that `E(I f) ≤ target`; data already below are
/// returned unchanged.
pub fn normalize_modified_energy(f: &Field2D, m: &IMultiplier, target: f64) -> Result<Field2D> {
    check_target(target)?;
    let (kinetic, sextic) = energy_parts(f, m)?;
    if kinetic + sextic <= target {
        return Ok(f.clone());
    }
    Ok(f.scale(C64::new(amplitude_for(kinetic, sextic, target)?, 0.0)))
}

/// Scales `f` up or down so that `E(I f) = target` (to within bisection
/// round-off, from below). The zero field is returned unchanged.
pub fn set_modified_energy(f: &Field2D, m: &IMultiplier, target: f64) -> Result<Field2D> {
    check_target(target)?;
    let (kinetic, sextic) = energy_parts(f, m)?;
    if kinetic + sextic == 0.0 {
        return Ok(f.clone());
    }
    Ok(f.scale(C64::new(amplitude_for(kinetic, sextic, target)?, 0.0)))
}

/// How the sweep enforces the hypothesis `E(I_N u₀) ≤ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SweepNormalization {
    /// One profile for all cutoffs, already satisfying the hypothesis at the
    /// largest `N` (hence at every `N`). A single evolution serves every cutoff.
    Largest,
    /// The profile is rescaled in amplitude to `E(I_N u₀) = 1` separately for
    /// each `N`, one evolution per cutoff.
    #[default]
    PerCutoff,
}

impl SweepNormalization {
    pub fn name(self) -> &'static str {
        match self {
            Self::Largest => "largest",
            Self::PerCutoff => "per-cutoff",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "largest" => Some(Self::Largest),
            "per-cutoff" => Some(Self::PerCutoff),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub ns: Vec<Dyadic>,
    /// `sup_{t ≤ δ} |E(I_N u(t)) − E(I_N u(0))|` per cutoff.
    pub increments: Vec<f64>,
    pub initial_energies: Vec<f64>,
    pub slope: f64,
    pub seed: u64,
    pub config_digest: String,
    /// Set when the data lie where every `I_N` is the identity, so the
    /// increments only measure solver drift.
    pub trivial_regime: bool,
}

pub const SWEEP_COLUMNS: [&str; 7] = ["N", "increment", "log2N", "log_increment", "slope", "seed", "config_digest"];

impl SweepResult {
    pub fn strictly_decreasing(&self) -> bool {
        self.increments.windows(2).all(|w| w[1] < w[0])
    }

    pub fn table(&self) -> CsvTable {
        let mut t = CsvTable::new(SWEEP_COLUMNS);
        for (n, inc) in self.ns.iter().zip(&self.increments) {
            let log_inc = if *inc > 0.0 { Some(inc.ln()) } else { None };
            t.push(vec![
                n.value().into(),
                (*inc).into(),
                (n.exponent() as u64).into(),
                log_inc.into(),
                self.slope.into(),
                self.seed.into(),
                self.config_digest.clone().into(),
            ]);
        }
        t
    }
}

/// Largest `|1 − m_N(ξ)| |û(ξ)|` relative to `max |û|`.
fn multiplier_activity(m: &IMultiplier, f: &Field2D) -> f64 {
    let fh = f.to_frequency();
    let table = fh.grid().radial_frequencies();
    let peak = fh.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    fh.values().iter().zip(table).map(|(v, r)| (1.0 - m.radial(r)) * v.norm()).fold(0.0, f64::max) / peak
}

/// `E(I_k u(t))` at every recorded time; returns the sup-increments and the
/// initial values.
fn track(u0: &Field2D, ms: &[IMultiplier], solver: &SolverConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut initial: Option<Vec<f64>> = None;
    let mut sup = vec![0.0f64; ms.len()];
    evolve_observed(u0, solver, |_, u| {
        let phys = u.to_physical();
        let e: Vec<f64> = ms.iter().map(|m| modified_energy(m, &phys)).collect();
        match &initial {
            None => initial = Some(e),
            Some(e0) => {
                for k in 0..e.len() {
                    sup[k] = sup[k].max((e[k] - e0[k]).abs());
                }
            }
        }
    })?;
    Ok((sup, initial.unwrap_or_default()))
}

/// Evolves on `[0, solver.t_end]` and records
/// `sup_t |E(I_N u(t)) − E(I_N u(0))|` for every `N`.
///
/// With [`SweepNormalization::Largest`] the hypothesis `E(I_{N_max} u₀) ≤ 1`
/// is checked, not enforced; use [`normalize_modified_energy`] first.
pub fn almost_conservation_sweep(
    u0: &Field2D,
    s: f64,
    ns: &[Dyadic],
    solver: &SolverConfig,
    seed: u64,
    normalization: SweepNormalization,
) -> Result<SweepResult> {
    if ns.len() < 2 {
        return Err(Error::param("a sweep needs at least two cutoffs"));
    }
    if ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("cutoffs must be strictly increasing"));
    }
    let ms = ns.iter().map(|&n| IMultiplier::new(n, s)).collect::<Result<Vec<_>>>()?;
    let trivial_regime = multiplier_activity(&ms[0], u0) < 1e-12;

    let (increments, initial_energies) = match normalization {
        SweepNormalization::Largest => {
            let top = modified_energy(ms.last().unwrap(), u0);
            if top > 1.0 + 1e-9 {
                return Err(Error::Data(format!("E(I u0) = {top:.6e} > 1 at the largest cutoff")));
            }
            track(u0, &ms, solver)?
        }
        SweepNormalization::PerCutoff => {
            let runs: Vec<(f64, f64)> = ms
                .par_iter()
                .map(|m| {
                    let v0 = set_modified_energy(u0, m, 1.0)?;
                    let (sup, e0) = track(&v0, std::slice::from_ref(m), solver)?;
                    Ok((sup[0], e0[0]))
                })
                .collect::<Result<_>>()?;
            runs.into_iter().unzip()
        }
    };
    let xs: Vec<f64> = ns.iter().map(|n| n.as_f64()).collect();
    let slope = if increments.iter().all(|&v| v > 0.0) { loglog_slope(&xs, &increments)? } else { 0.0 };
    Ok(SweepResult {
        ns: ns.to_vec(),
        increments,
        initial_energies,
        slope,
        seed,
        config_digest: String::new(),
        trivial_regime,
    })
}

/// Which cutoff the rescaled side of the energy identity uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CutoffMode {
    /// `I_N` on both sides.
    #[default]
    Fixed,
    /// `I_N` on the original and the dilated symbol `m_N(λ·)` on `u_λ`, which
    /// makes the identity exact for the continuous flow.
    Covariant,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityReport {
    /// `E(I u(t))`.
    pub original: f64,
    /// `λ⁴ E(I u_λ(λ⁴ t))`.
    pub rescaled: f64,
    pub discrepancy: f64,
    /// `‖u_λ(0)‖ / ‖u(0)‖ − 1`.
    pub mass_defect: f64,
}

/// Compares `E(I u(t))` with `λ⁴ E(I u_λ(λ⁴t))`, both runs using the step
/// size of `solver` and the same retained wavenumbers.
pub fn rescaled_energy_identity_check(
    u0: &Field2D,
    m: &IMultiplier,
    lambda: f64,
    t: f64,
    solver: &SolverConfig,
    mode: CutoffMode,
    limits: &RescaleLimits,
) -> Result<IdentityReport> {
    let v0 = rescale(u0, lambda, limits)?;
    let mass_defect = v0.l2_norm() / u0.l2_norm() - 1.0;
    let final_at = |f: &Field2D, end: f64, dealias_fraction: f64| -> Result<Field2D> {
        if end == 0.0 {
            return Ok(f.clone());
        }
        let cfg = SolverConfig { t_end: end, dealias_fraction, ..solver.clone() };
        evolve_observed(f, &cfg, |_, _| {})
    };
    let u = final_at(u0, t, solver.dealias_fraction)?;
    let v = final_at(&v0, lambda.powi(4) * t, nested_fraction(u0, &v0, solver.dealias_fraction))?;
    let original = modified_energy(m, &u);
    let on_rescaled = match mode {
        CutoffMode::Fixed => modified_energy(m, &v),
        CutoffMode::Covariant => energy(&m.apply_scaled(&v, lambda), SEXTIC_COEFFICIENT),
    };
    let rescaled = lambda.powi(4) * on_rescaled;
    let discrepancy = (rescaled - original).abs() / original.abs().max(f64::MIN_POSITIVE);
    Ok(IdentityReport { original, rescaled, discrepancy, mass_defect })
}

/// Dealias fraction on the rescaled grid that retains the same integer
/// wavenumbers as `fraction` on the source grid.
fn nested_fraction(source: &Field2D, target: &Field2D, fraction: f64) -> f64 {
    fraction * source.grid().points_per_side() as f64 / target.grid().points_per_side() as f64
}

/// `u_λ(t)` against `λ^{−1} u(t/λ⁴, ·/λ)`: relative L² discrepancy after
/// evolving both sides with the step size of `solver`. The rescaled run keeps
/// the wavenumbers retained on the source grid.
pub fn scaling_check(u0: &Field2D, lambda: f64, t: f64, solver: &SolverConfig, limits: &RescaleLimits) -> Result<f64> {
    let v0 = rescale(u0, lambda, limits)?;
    let cfg_small = SolverConfig { t_end: t / lambda.powi(4), ..solver.clone() };
    let cfg_big = SolverConfig {
        t_end: t,
        dealias_fraction: nested_fraction(u0, &v0, solver.dealias_fraction),
        ..solver.clone()
    };
    let u = evolve_observed(u0, &cfg_small, |_, _| {})?;
    let v = evolve_observed(&v0, &cfg_big, |_, _| {})?;
    let expect = rescale(&u, lambda, limits)?;
    v.relative_l2_error(&expect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;
    use crate::spectral::{GridSpec, Representation};

    fn gaussian(g: GridSpec, amp: f64) -> Field2D {
        let [cx, cy] = g.center();
        Field2D::from_fn(g, |x, y| C64::new(amp * (-((x - cx).powi(2) + (y - cy).powi(2)) / 2.0).exp(), 0.0))
    }

    fn dyadics(v: &[u64]) -> Vec<Dyadic> {
        v.iter().map(|&n| Dyadic::new(n).unwrap()).collect()
    }

    #[test]
    fn normalization_hits_target() {
        let g = GridSpec::torus(32).unwrap();
        let mut rng = SeededRng::new(2);
        let f = Field2D::from_spectrum(g, |[a, b]| rng.complex_normal() * 10.0 * (-(a * a + b * b) / 20.0).exp());
        let m = IMultiplier::with_cutoff(4, 1.5).unwrap();
        let h = normalize_modified_energy(&f, &m, 1.0).unwrap();
        let e = modified_energy(&m, &h);
        assert!(e <= 1.0 + 1e-9 && e > 1.0 - 1e-6, "{e}");
        let small = f.scale(C64::new(1e-6, 0.0));
        assert_eq!(normalize_modified_energy(&small, &m, 1.0).unwrap().values(), small.values());
        let up = set_modified_energy(&small, &m, 1.0).unwrap();
        assert!((modified_energy(&m, &up) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_data_has_zero_increments() {
        let g = GridSpec::torus(16).unwrap();
        let z = Field2D::zeros(g, Representation::Physical);
        let r = almost_conservation_sweep(&z, 1.5, &dyadics(&[2, 4]), &SolverConfig::new(1e-3, 0.01), 1, SweepNormalization::PerCutoff).unwrap();
        assert_eq!(r.increments, vec![0.0, 0.0]);
        assert_eq!(r.slope, 0.0);
    }

    #[test]
    fn low_frequency_data_is_trivial() {
        let g = GridSpec::new(40.0, 64).unwrap();
        let u0 = gaussian(g, 0.3);
        let cfg = SolverConfig::new(1e-3, 0.02);
        let r = almost_conservation_sweep(&u0, 1.5, &dyadics(&[16, 32]), &cfg, 0, SweepNormalization::Largest).unwrap();
        assert!(r.trivial_regime);
        let drift = crate::evolution::evolve(&u0, &cfg.clone().record_every(1), None).unwrap();
        let e0 = drift.reports[0].energy;
        let plain = drift.reports.iter().map(|rep| (rep.energy - e0).abs()).fold(0.0, f64::max);
        for inc in &r.increments {
            assert!((inc - plain).abs() <= 1e-12 * e0.max(1.0));
        }
    }

    #[test]
    fn hypothesis_is_checked() {
        let g = GridSpec::torus(32).unwrap();
        let u0 = Field2D::plane_wave(g, [3, 0], C64::new(1.0, 0.0)).unwrap();
        let err = almost_conservation_sweep(&u0, 1.5, &dyadics(&[2, 4]), &SolverConfig::new(1e-3, 0.01), 0, SweepNormalization::Largest);
        assert!(matches!(err, Err(Error::Data(_))));
    }

    #[test]
    fn identity_at_time_zero() {
        let g = GridSpec::new(20.0, 64).unwrap();
        let u0 = gaussian(g, 1.0);
        let m = IMultiplier::with_cutoff(16, 1.5).unwrap();
        for lambda in [0.5, 2.0, 3.0] {
            for mode in [CutoffMode::Fixed, CutoffMode::Covariant] {
                let r = rescaled_energy_identity_check(
                    &u0,
                    &m,
                    lambda,
                    0.0,
                    &SolverConfig::new(1e-3, 0.0),
                    mode,
                    &RescaleLimits::default(),
                )
                .unwrap();
                assert!(r.discrepancy <= 1e-6, "λ={lambda} {mode:?}: {}", r.discrepancy);
                assert!(r.mass_defect.abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn identity_at_unit_lambda() {
        let g = GridSpec::new(16.0, 64).unwrap();
        let u0 = gaussian(g, 1.0);
        let m = IMultiplier::with_cutoff(4, 1.5).unwrap();
        let r = rescaled_energy_identity_check(
            &u0,
            &m,
            1.0,
            0.01,
            &SolverConfig::new(1e-3, 0.0),
            CutoffMode::Fixed,
            &RescaleLimits::default(),
        )
        .unwrap();
        assert!(r.discrepancy < 1e-12);
    }
}
