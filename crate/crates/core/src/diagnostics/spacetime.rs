//! Space-time samples on a window `[0, δ]` and their norms.
//!
//! A [`TimeWindow`] samples one period `[−δ/2, 3δ/2)` of the periodized
//! extension. The smooth cutoff `ψ` equals 1 on the core `[0, δ]` and vanishes
//! outside `[−δ/2, 3δ/2]`, so the windowed field `ψu` is a fixed (not optimal)
//! extension of `u|[0,δ]`: the `X^{s,b}` values computed here are upper-bound
//! surrogates for the restriction norm.
//!
//! The space-time transform is taken in the interaction picture: each
//! coefficient is demodulated by `e^{i|ξ|⁴t}` before the time DFT, so the
//! time-frequency lattice directly samples the modulation `σ = τ + |ξ|⁴` on
//! `[−Ω/2, Ω/2)`, `Ω = 2π n_t / (2δ)`. Normalization is unitary:
//! `Σ|ũ|² = Σ_j Δt ‖ψ(t_j)u(t_j)‖²_{L²}`.

use std::f64::consts::TAU;
use std::ops::RangeInclusive;

use rustfft::FftDirection;

use crate::evolution::{linear_propagate, Integrator, Trajectory};
use crate::spectral::fft::fft_batched;
use crate::spectral::norms::lp_norm_physical;
use crate::spectral::{smooth_step, Field2D, GridSpec};
use crate::{Error, Result, C64};

/// Default `ε` in `b = 1/2 + ε`.
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Energy fraction beyond `|σ| > Ω/4` above which a transform is flagged.
pub const UNDER_RESOLUTION_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeWindow {
    delta: f64,
    samples: usize,
}

impl TimeWindow {
    /// `samples` must be a multiple of 4 and at least 8.
    pub fn new(delta: f64, samples: usize) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::param(format!("window length must be positive, got {delta}")));
        }
        if samples < 8 || samples % 4 != 0 {
            return Err(Error::param(format!("time samples must be a multiple of 4 and >= 8, got {samples}")));
        }
        Ok(Self { delta, samples })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn period(&self) -> f64 {
        2.0 * self.delta
    }

    pub fn step(&self) -> f64 {
        self.period() / self.samples as f64
    }

    pub fn time(&self, j: usize) -> f64 {
        -0.5 * self.delta + j as f64 * self.step()
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.samples).map(|j| self.time(j)).collect()
    }

    /// Sample indices covering `[0, δ]`, endpoints included.
    pub fn core(&self) -> RangeInclusive<usize> {
        self.samples / 4..=3 * self.samples / 4
    }

    /// The cutoff `ψ(t)`.
    pub fn cutoff(&self, t: f64) -> f64 {
        let ramp = 0.5 * self.delta;
        if t < 0.0 {
            smooth_step((t + ramp) / ramp)
        } else if t > self.delta {
            smooth_step((self.delta + ramp - t) / ramp)
        } else {
            1.0
        }
    }

    /// `Ω`, the width of the resolved modulation band.
    pub fn bandwidth(&self) -> f64 {
        TAU * self.samples as f64 / self.period()
    }

    /// Modulation `σ_k` of the `k`-th time-frequency bin.
    pub fn modulation(&self, k: usize) -> f64 {
        let h = self.samples / 2;
        let signed = if k < h { k as i64 } else { k as i64 - self.samples as i64 };
        signed as f64 * TAU / self.period()
    }
}

/// Samples `u(t_j)` of a field on a [`TimeWindow`], stored in frequency form.
#[derive(Clone, Debug)]
pub struct SpaceTimeField {
    grid: GridSpec,
    window: TimeWindow,
    samples: Vec<Field2D>,
}

impl SpaceTimeField {
    pub fn from_samples(window: TimeWindow, samples: Vec<Field2D>) -> Result<Self> {
        if samples.len() != window.samples() {
            return Err(Error::param(format!(
                "expected {} time samples, got {}",
                window.samples(),
                samples.len()
            )));
        }
        let grid = *samples[0].grid();
        if let Some(bad) = samples.iter().find(|f| *f.grid() != grid) {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", bad.grid(), grid)));
        }
        let samples = samples.into_iter().map(Field2D::into_frequency).collect();
        Ok(Self { grid, window, samples })
    }

    pub fn from_fn(grid: GridSpec, window: TimeWindow, mut f: impl FnMut(f64) -> Field2D) -> Result<Self> {
        let samples: Vec<Field2D> = window.times().into_iter().map(&mut f).collect();
        let out = Self::from_samples(window, samples)?;
        if out.grid != grid {
            return Err(Error::GridMismatch("samples do not live on the declared grid".into()));
        }
        Ok(out)
    }

    /// `e^{−itΔ²}φ` sampled on the window.
    pub fn free_evolution(phi: &Field2D, window: TimeWindow) -> Self {
        let phi = phi.to_frequency();
        let samples = window.times().into_iter().map(|t| linear_propagate(&phi, t)).collect();
        Self { grid: *phi.grid(), window, samples }
    }

    /// Nonlinear flow from `u(0) = u0`, run forward to `3δ/2` and backward to
    /// `−δ/2` with `substeps` integrator steps between samples.
    pub fn from_flow(u0: &Field2D, window: TimeWindow, integrator: &Integrator, substeps: usize) -> Result<Self> {
        if u0.grid() != integrator.grid() {
            return Err(Error::GridMismatch("initial data and integrator grids differ".into()));
        }
        let substeps = substeps.max(1);
        let h = window.step() / substeps as f64;
        let origin = window.samples() / 4;
        let mut samples = vec![Field2D::zeros(*u0.grid(), crate::Representation::Frequency); window.samples()];
        samples[origin] = u0.to_frequency();
        for dir in [1.0, -1.0] {
            let forward = integrator.stepper(dir * h);
            let mut u = u0.to_frequency();
            let indices: Vec<usize> =
                if dir > 0.0 { (origin + 1..window.samples()).collect() } else { (0..origin).rev().collect() };
            for j in indices {
                for _ in 0..substeps {
                    u = forward.step(u)?;
                }
                samples[j] = u.to_frequency();
            }
        }
        Ok(Self { grid: *u0.grid(), window, samples })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn window(&self) -> &TimeWindow {
        &self.window
    }

    pub fn samples(&self) -> &[Field2D] {
        &self.samples
    }

    /// Applies `op` to every sample (say, `I_N`).
    pub fn map(&self, op: impl Fn(&Field2D) -> Field2D) -> Self {
        let samples = self.samples.iter().map(|f| op(f).into_frequency()).collect();
        Self { grid: self.grid, window: self.window, samples }
    }

    /// `‖u‖_{L^q_t L^p_x([0,δ] × box)}`, trapezoidal in time.
    pub fn mixed_norm(&self, q: f64, p: f64) -> Result<f64> {
        let core = self.window.core();
        let times: Vec<f64> = core.clone().map(|j| self.window.time(j)).collect();
        mixed_norm_samples(&times, &self.samples[core], q, p)
    }

    /// `‖ψu‖_{L²}` over one period, by the rectangle rule (exact for the
    /// periodic trigonometric interpolant).
    pub fn windowed_l2(&self) -> f64 {
        let h = self.window.step();
        let s: f64 = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, f)| self.window.cutoff(self.window.time(j)).powi(2) * f.norm_sq())
            .sum();
        (h * s).sqrt()
    }

    /// Discrete space-time transform of `ψu` in the interaction picture.
    pub fn spectrum(&self) -> SpaceTimeSpectrum {
        let nt = self.window.samples();
        let dk = self.grid.frequency_step();
        let kx: Vec<f64> = (0..self.grid.points_per_side()).map(|i| self.grid.wavenumber(i) as f64 * dk).collect();
        let psi: Vec<f64> = self.window.times().into_iter().map(|t| self.window.cutoff(t)).collect();
        let times = self.window.times();
        let spatial = self.grid.len();
        let n = self.grid.points_per_side();
        let mut buf = vec![C64::new(0.0, 0.0); spatial * nt];
        for idx in 0..spatial {
            let (a, b) = (kx[idx / n], kx[idx % n]);
            let r2 = a * a + b * b;
            let row = &mut buf[idx * nt..(idx + 1) * nt];
            for j in 0..nt {
                let demod = C64::from_polar(psi[j], r2 * r2 * times[j]);
                row[j] = self.samples[j].values()[idx] * demod;
            }
        }
        fft_batched(&mut buf, nt, FftDirection::Forward);
        let scale = (self.window.step() / nt as f64).sqrt();
        for v in buf.iter_mut() {
            *v *= scale;
        }
        SpaceTimeSpectrum { grid: self.grid, window: self.window, values: buf }
    }
}

/// Coefficients `ũ(σ_k, ξ)`, laid out spatial-index major with `n_t`
/// consecutive modulation bins per spatial frequency.
#[derive(Clone, Debug)]
pub struct SpaceTimeSpectrum {
    grid: GridSpec,
    window: TimeWindow,
    values: Vec<C64>,
}

impl SpaceTimeSpectrum {
    pub fn from_values(grid: GridSpec, window: TimeWindow, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() * window.samples() {
            return Err(Error::param("spectrum length does not match grid and window"));
        }
        Ok(Self { grid, window, values })
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Flat index of bin `k` at spatial frequency index `(i, j)`.
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.grid.points_per_side() + j) * self.window.samples() + k
    }

    /// `‖⟨ξ⟩^s ⟨σ⟩^b ũ‖_{ℓ²}`.
    pub fn weighted_norm(&self, s: f64, b: f64) -> f64 {
        let nt = self.window.samples();
        let bracket: Vec<f64> = (0..nt).map(|k| (1.0 + self.window.modulation(k).powi(2)).powf(0.5 * b)).collect();
        let spatial = self.grid.frequency_table(|[a, c]| (1.0 + a * a + c * c).powf(0.5 * s));
        let total: f64 = self
            .values
            .chunks_exact(nt)
            .zip(&spatial)
            .map(|(row, ws)| {
                let r: f64 = row.iter().zip(&bracket).map(|(v, wb)| (wb * v.norm()).powi(2)).sum();
                ws * ws * r
            })
            .sum();
        total.sqrt()
    }

    /// Fraction of `Σ|ũ|²` in bins with `|σ| > Ω/4`.
    pub fn outer_fraction(&self) -> f64 {
        let nt = self.window.samples();
        let limit = 0.25 * self.window.bandwidth();
        let outer: Vec<bool> = (0..nt).map(|k| self.window.modulation(k).abs() > limit).collect();
        let (mut out, mut all) = (0.0, 0.0);
        for row in self.values.chunks_exact(nt) {
            for (v, o) in row.iter().zip(&outer) {
                let e = v.norm_sqr();
                all += e;
                if *o {
                    out += e;
                }
            }
        }
        if all == 0.0 {
            0.0
        } else {
            out / all
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XsbEstimate {
    pub value: f64,
    pub outer_fraction: f64,
    pub under_resolved: bool,
}

/// Windowed `X^{s,b}` norm of `stf`, with a resolution flag.
pub fn xsb_norm(stf: &SpaceTimeField, s: f64, b: f64) -> XsbEstimate {
    let spec = stf.spectrum();
    let outer_fraction = spec.outer_fraction();
    XsbEstimate {
        value: spec.weighted_norm(s, b),
        outer_fraction,
        under_resolved: outer_fraction > UNDER_RESOLUTION_THRESHOLD,
    }
}

/// `‖⟨σ⟩^b ψ̃‖_{ℓ²}`: the free-flow constant, `xsb_norm(e^{−itΔ²}φ, 0, b) =
/// C_window · ‖φ‖_{L²}`.
pub fn window_constant(window: &TimeWindow, b: f64) -> f64 {
    let nt = window.samples();
    let mut buf: Vec<C64> = window.times().into_iter().map(|t| C64::new(window.cutoff(t), 0.0)).collect();
    fft_batched(&mut buf, nt, FftDirection::Forward);
    let scale = window.step() / nt as f64;
    let s: f64 =
        buf.iter().enumerate().map(|(k, v)| (1.0 + window.modulation(k).powi(2)).powf(b) * v.norm_sqr()).sum();
    (scale * s).sqrt()
}

fn check_norm_exponents(q: f64, p: f64) -> Result<()> {
    if !(q >= 1.0) || !(p >= 1.0) {
        return Err(Error::param(format!("mixed norm exponents must be >= 1, got q={q}, p={p}")));
    }
    Ok(())
}

/// `(∫ ‖u(t)‖_{L^p}^q dt)^{1/q}` by the trapezoidal rule on arbitrary
/// increasing nodes; `max_t ‖u(t)‖_{L^p}` for `q = ∞`.
pub fn mixed_norm_samples(times: &[f64], fields: &[Field2D], q: f64, p: f64) -> Result<f64> {
    check_norm_exponents(q, p)?;
    if times.len() != fields.len() || times.is_empty() {
        return Err(Error::param("need one field per time node"));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("time nodes must be strictly increasing"));
    }
    let spatial: Vec<f64> = fields.iter().map(|f| lp_norm_physical(&f.to_physical(), p)).collect();
    Ok(time_norm(times, &spatial, q))
}

/// `L^q` norm in time of the sampled function `values(t)`.
pub fn time_norm(times: &[f64], values: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return values.iter().copied().fold(0.0, f64::max);
    }
    let integral: f64 =
        times.windows(2).zip(values.windows(2)).map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0].powf(q) + v[1].powf(q))).sum();
    integral.powf(1.0 / q)
}

/// Mixed norm over the recorded fields of a trajectory.
pub fn mixed_norm_trajectory(traj: &Trajectory, q: f64, p: f64) -> Result<f64> {
    let fields = traj
        .fields
        .as_ref()
        .ok_or_else(|| Error::param("trajectory was recorded without fields (enable keep_fields)"))?;
    mixed_norm_samples(&traj.times, fields, q, p)
}
