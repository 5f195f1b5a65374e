//! Empirical Strichartz constants for the free biharmonic flow.
//!
//! Two samplers:
//!
//! * [`strichartz_constant_sample`]: `‖e^{−itΔ²}φ‖_{L^q_t L^p_x([0,δ])} / ‖φ‖_{L²}`
//!   over seeded Gaussian-spectrum data.
//! * [`derivative_gain_sample`]: `N^μ ‖e^{−itΔ²}φ‖_{L^q_t L^p_x} / ‖φ‖_{X^{0,1/2+ε}_δ}`
//!   over wave packets in the shell `|ξ| ∼ N`. The packets are concentrated
//!   at `t = 0` and disperse on the time scale `N^{−4}`, so the time integral
//!   uses geometric nodes clustered at 0. The window is cut at the
//!   wrap-around horizon of the shell (see [`GainSetup::horizon`]); beyond it
//!   the periodized packet saturates at `|u| ∼ ‖φ‖/L` and the plane estimate
//!   no longer describes the box.
//!
//! For free data the windowed `X^{0,b}` norm is exactly
//! `window_constant(b) · ‖φ‖_{L²}` (same cutoff at every frequency).

use std::f64::consts::TAU;

use super::admissible::AdmissiblePair;
use super::spacetime::{mixed_norm_samples, time_norm, window_constant, SpaceTimeField, TimeWindow, DEFAULT_EPSILON};
use crate::evolution::linear_propagate;
use crate::fit::{loglog_slope, median};
use crate::rng::SeededRng;
use crate::spectral::lp::lp_symbol;
use crate::spectral::norms::lp_norm_physical;
use crate::spectral::{Dyadic, Field2D, GridSpec, LpKind};
use crate::{Error, Result, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct StrichartzReport {
    pub pair: AdmissiblePair,
    pub ratios: Vec<f64>,
    pub max: f64,
    pub median: f64,
    pub seed: u64,
}

impl StrichartzReport {
    fn from_ratios(pair: AdmissiblePair, ratios: Vec<f64>, seed: u64) -> Result<Self> {
        if ratios.is_empty() {
            return Err(Error::param("at least one trial is required"));
        }
        let max = ratios.iter().copied().fold(0.0, f64::max);
        let median = median(&ratios);
        Ok(Self { pair, ratios, max, median, seed })
    }

    pub fn max_over_median(&self) -> f64 {
        self.max / self.median
    }
}

/// `φ̂(ξ) = z(ξ) e^{−|ξ|²/(2w²)}` with `z` standard complex normal, scaled
/// to unit mass.
pub fn gaussian_spectrum_data(grid: GridSpec, width: f64, rng: &mut SeededRng) -> Field2D {
    let f = Field2D::from_spectrum(grid, |[a, b]| rng.complex_normal() * (-(a * a + b * b) / (2.0 * width * width)).exp());
    let norm = f.l2_norm();
    f.scale(C64::new(1.0 / norm, 0.0))
}

/// `Σ_p c_p P_N δ_{x_p}`: `packets` wave packets at uniform positions with
/// complex normal weights, scaled to unit mass.
pub fn shell_packet_data(grid: GridSpec, shell: Dyadic, packets: usize, rng: &mut SeededRng) -> Field2D {
    let l = grid.box_length();
    let centres: Vec<([f64; 2], C64)> =
        (0..packets.max(1)).map(|_| ([rng.uniform() * l, rng.uniform() * l], rng.complex_normal())).collect();
    let f = Field2D::from_spectrum(grid, |[a, b]| {
        let band = lp_symbol(LpKind::Band, shell, a.hypot(b));
        if band == 0.0 {
            return C64::new(0.0, 0.0);
        }
        let sum: C64 = centres.iter().map(|([x, y], c)| c * C64::from_polar(1.0, -(a * x + b * y))).sum();
        sum * band
    });
    let norm = f.l2_norm();
    f.scale(C64::new(1.0 / norm, 0.0))
}

/// `‖e^{−itΔ²}φ‖_{L^q_t L^p_x([0,δ])} / ‖φ‖_{L²}` over `trials` Gaussian-spectrum
/// data on `grid`, spectral width `nyquist/6`.
pub fn strichartz_constant_sample(
    pair: AdmissiblePair,
    trials: usize,
    seed: u64,
    grid: GridSpec,
    window: TimeWindow,
) -> Result<StrichartzReport> {
    strichartz_sample_with_width(pair, trials, seed, grid, window, grid.nyquist_frequency() / 6.0)
}

pub fn strichartz_sample_with_width(
    pair: AdmissiblePair,
    trials: usize,
    seed: u64,
    grid: GridSpec,
    window: TimeWindow,
    width: f64,
) -> Result<StrichartzReport> {
    let mut rng = SeededRng::new(seed);
    let mut ratios = Vec::with_capacity(trials);
    for _ in 0..trials {
        let phi = gaussian_spectrum_data(grid, width, &mut rng);
        let stf = SpaceTimeField::free_evolution(&phi, window);
        ratios.push(stf.mixed_norm(pair.q(), pair.p())? / phi.l2_norm());
    }
    StrichartzReport::from_ratios(pair, ratios, seed)
}

/// Parameters of the derivative-gain sampler.
#[derive(Clone, Debug, PartialEq)]
pub struct GainSetup {
    pub box_length: f64,
    pub delta: f64,
    pub packets: usize,
    pub trials: usize,
    pub seed: u64,
    /// Geometric time nodes per decade between `t_min` and the horizon.
    pub nodes_per_decade: usize,
    /// `t_min = t_min_factor · N^{−4}`.
    pub t_min_factor: f64,
    /// Grid points per `2π/L`-wavelength at the top of the shell.
    pub oversampling: f64,
    pub epsilon: f64,
    pub time_samples: usize,
}

impl Default for GainSetup {
    fn default() -> Self {
        Self {
            box_length: TAU * 4.0,
            delta: 0.05,
            packets: 3,
            trials: 8,
            seed: 0,
            nodes_per_decade: 16,
            t_min_factor: 1e-3,
            oversampling: 1.25,
            epsilon: DEFAULT_EPSILON,
            time_samples: 32,
        }
    }
}

impl GainSetup {
    /// Smallest even grid resolving `|ξ| < 2N` on each axis with the
    /// configured oversampling.
    pub fn grid_for(&self, shell: Dyadic) -> Result<GridSpec> {
        let kmax = 2.0 * shell.as_f64() * self.box_length / TAU;
        let half = (self.oversampling * kmax).ceil() as usize;
        GridSpec::new(self.box_length, (2 * half).max(8))
    }

    /// `min(δ, L / (2 v))` with `v = 4(2N)³` the largest group speed in the
    /// shell: past this time the fastest part of a packet has met its own
    /// periodic image and the box no longer stands in for the plane.
    pub fn horizon(&self, shell: Dyadic) -> f64 {
        let speed = 4.0 * (2.0 * shell.as_f64()).powi(3);
        self.delta.min(self.box_length / (2.0 * speed))
    }

    /// `0` followed by geometric nodes from `t_min` to the horizon.
    pub fn time_nodes(&self, shell: Dyadic) -> Vec<f64> {
        let end = self.horizon(shell);
        let t_min = (self.t_min_factor * shell.as_f64().powi(-4)).min(0.5 * end);
        let decades = (end / t_min).log10();
        let count = ((decades * self.nodes_per_decade as f64).ceil() as usize).max(2);
        let mut t = vec![0.0];
        t.extend((0..=count).map(|k| t_min * (end / t_min).powf(k as f64 / count as f64)));
        *t.last_mut().unwrap() = end;
        t
    }
}

/// `N^μ ‖e^{−itΔ²}φ‖_{L^q_t L^p_x([0,δ])} / ‖φ‖_{X^{0,1/2+ε}_δ}` over
/// packet data in the shell `N`.
pub fn derivative_gain_sample(pair: AdmissiblePair, shell: Dyadic, setup: &GainSetup) -> Result<StrichartzReport> {
    let grid = setup.grid_for(shell)?;
    let window = TimeWindow::new(setup.horizon(shell), setup.time_samples)?;
    let xsb_per_mass = window_constant(&window, 0.5 + setup.epsilon);
    let nodes = setup.time_nodes(shell);
    let mut rng = SeededRng::with_stream(setup.seed, shell.value());
    let mut ratios = Vec::with_capacity(setup.trials);
    for _ in 0..setup.trials {
        let phi = shell_packet_data(grid, shell, setup.packets, &mut rng);
        let spatial: Vec<f64> =
            nodes.iter().map(|&t| lp_norm_physical(&linear_propagate(&phi, t).into_physical(), pair.p())).collect();
        let mixed = time_norm(&nodes, &spatial, pair.q());
        ratios.push(shell.as_f64().powf(pair.mu()) * mixed / (xsb_per_mass * phi.l2_norm()));
    }
    StrichartzReport::from_ratios(pair, ratios, setup.seed)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GainTrend {
    pub shells: Vec<Dyadic>,
    pub reports: Vec<StrichartzReport>,
    /// Log-log slope of the per-shell medians against `N`.
    pub slope: f64,
}

pub fn derivative_gain_trend(pair: AdmissiblePair, shells: &[Dyadic], setup: &GainSetup) -> Result<GainTrend> {
    if shells.len() < 2 {
        return Err(Error::param("a trend needs at least two shells"));
    }
    let reports = shells.iter().map(|&n| derivative_gain_sample(pair, n, setup)).collect::<Result<Vec<_>>>()?;
    let ns: Vec<f64> = shells.iter().map(|n| n.as_f64()).collect();
    let medians: Vec<f64> = reports.iter().map(|r| r.median).collect();
    let slope = loglog_slope(&ns, &medians)?;
    Ok(GainTrend { shells: shells.to_vec(), reports, slope })
}

/// Same as [`SpaceTimeField::mixed_norm`] for the free flow of `phi`, on
/// arbitrary time nodes.
pub fn free_mixed_norm(phi: &Field2D, times: &[f64], q: f64, p: f64) -> Result<f64> {
    let fields: Vec<Field2D> = times.iter().map(|&t| linear_propagate(phi, t)).collect();
    mixed_norm_samples(times, &fields, q, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::lp_norm;

    #[test]
    fn single_mode_is_exact() {
        let g = GridSpec::torus(16).unwrap();
        let w = TimeWindow::new(0.2, 16).unwrap();
        let pair = AdmissiblePair::new(6.0, 6.0, 0.0).unwrap();
        let phi = Field2D::plane_wave(g, [1, 1], C64::new(2.0, 0.0)).unwrap();
        let stf = SpaceTimeField::free_evolution(&phi, w);
        let a = g.area();
        // |u| = 2 everywhere: δ^{1/6} · 2 A^{1/6} / (2 A^{1/2})
        let expect = 0.2f64.powf(1.0 / 6.0) * a.powf(1.0 / 6.0) / a.sqrt();
        let got = stf.mixed_norm(pair.q(), pair.p()).unwrap() / phi.l2_norm();
        assert!((got - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn gaussian_data_is_normalized_and_seeded() {
        let g = GridSpec::torus(32).unwrap();
        let a = gaussian_spectrum_data(g, 3.0, &mut SeededRng::new(5));
        let b = gaussian_spectrum_data(g, 3.0, &mut SeededRng::new(5));
        assert!((a.l2_norm() - 1.0).abs() < 1e-12);
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn packets_live_in_the_shell() {
        let g = GridSpec::new(TAU * 2.0, 64).unwrap();
        let n = Dyadic::new(4).unwrap();
        let f = shell_packet_data(g, n, 2, &mut SeededRng::new(1));
        let table = g.radial_frequencies();
        for (v, r) in f.values().iter().zip(table) {
            if r <= 2.0 || r >= 8.0 {
                assert_eq!(v.norm(), 0.0);
            }
        }
        assert!((f.l2_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn report_statistics() {
        let g = GridSpec::torus(16).unwrap();
        let w = TimeWindow::new(0.1, 16).unwrap();
        let pair = AdmissiblePair::new(6.0, 6.0, 0.0).unwrap();
        let r = strichartz_constant_sample(pair, 9, 3, g, w).unwrap();
        assert_eq!(r.ratios.len(), 9);
        assert!(r.max >= r.median && r.median > 0.0);
        let again = strichartz_constant_sample(pair, 9, 3, g, w).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn time_nodes_cluster_at_zero() {
        let s = GainSetup::default();
        let t = s.time_nodes(Dyadic::new(8).unwrap());
        assert_eq!(t[0], 0.0);
        assert!((t[1] - 1e-3 / 4096.0).abs() < 1e-18);
        assert_eq!(*t.last().unwrap(), s.horizon(Dyadic::new(8).unwrap()));
        assert!(t.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn free_mixed_norm_at_t0() {
        let g = GridSpec::torus(16).unwrap();
        let phi = gaussian_spectrum_data(g, 2.0, &mut SeededRng::new(8));
        let v = free_mixed_norm(&phi, &[0.0], f64::INFINITY, 4.0).unwrap();
        assert!((v - lp_norm(&phi, 4.0).unwrap()).abs() < 1e-12);
    }
}
