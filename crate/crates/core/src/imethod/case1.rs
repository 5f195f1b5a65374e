//! Pointwise sampling of the sextic commutator symbol
//! `1 − m(ξ₂+…+ξ₆) / (m(ξ₂)⋯m(ξ₆))` in the high–high–low⁴ regime
//! `N₁ ∼ N₂ ≳ N ≫ N₃ ≥ N₄ ≥ N₅ ≥ N₆`, where it is expected to be
//! `O(N₃/N₂)`.

use std::f64::consts::TAU;

use super::IMultiplier;
use crate::rng::SeededRng;
use crate::spectral::Dyadic;

pub type Frequency = [f64; 2];

/// Bound on the sampled Case-1 ratio for `s = 1.5`, `N = 16` and the default
/// regime: the radial mean-value envelope
/// `sup_{r,t} 8|1 − m(r ± t)/m(r)| N(r)/t ≈ 9.283`, rounded up.
pub const CASE1_CONSTANT: f64 = 9.3;

/// Sampling ranges, as multiples of the cutoff `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Case1Regime {
    /// `|ξ₂|` is log-uniform in `[high_min·N, high_max·N]`.
    pub high_min: f64,
    pub high_max: f64,
    /// The four low magnitudes are log-uniform in `[low_min, low_max·N]`,
    /// then sorted so `|ξ₃| ≥ … ≥ |ξ₆|`.
    pub low_min: f64,
    pub low_max: f64,
}

impl Default for Case1Regime {
    fn default() -> Self {
        Self { high_min: 1.0, high_max: 64.0, low_min: 0.25, low_max: 0.25 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Case1Report {
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub samples: usize,
    pub seed: u64,
    /// The tuple `(ξ₁, …, ξ₆)` attaining the maximum.
    pub worst: [Frequency; 6],
}

fn add(a: Frequency, b: Frequency) -> Frequency {
    [a[0] + b[0], a[1] + b[1]]
}

fn norm(a: Frequency) -> f64 {
    a[0].hypot(a[1])
}

/// `|1 − m(ξ₂+…+ξ₆)/(m₂⋯m₆)| · N₂/N₃` with `N_j` the dyadic magnitude of `ξ_j`
/// (floored at 1). `ξ₁` does not enter; it is fixed by `Σξ = 0`.
pub fn case1_ratio(m: &IMultiplier, xi: &[Frequency; 6]) -> f64 {
    let sum = xi[1..].iter().fold([0.0, 0.0], |acc, &x| add(acc, x));
    let prod: f64 = xi[1..].iter().map(|&x| m.value(x)).product();
    let numerator = (1.0 - m.value(sum) / prod).abs();
    let n2 = Dyadic::of_magnitude(norm(xi[1])).as_f64();
    let n3 = Dyadic::of_magnitude(norm(xi[2])).as_f64();
    numerator * n2 / n3
}

fn log_uniform(rng: &mut SeededRng, lo: f64, hi: f64) -> f64 {
    (rng.uniform_in(lo.ln(), hi.ln())).exp()
}

fn polar(rng: &mut SeededRng, r: f64) -> Frequency {
    let theta = TAU * rng.uniform();
    [r * theta.cos(), r * theta.sin()]
}

/// Draws one constrained tuple: log-uniform magnitudes, uniform angles,
/// `ξ₁ = −(ξ₂ + … + ξ₆)`.
pub fn sample_tuple(m: &IMultiplier, regime: &Case1Regime, rng: &mut SeededRng) -> [Frequency; 6] {
    let n = m.n();
    let high = log_uniform(rng, regime.high_min * n, regime.high_max * n);
    let mut lows = [0.0; 4];
    for r in lows.iter_mut() {
        *r = log_uniform(rng, regime.low_min, regime.low_max * n);
    }
    lows.sort_by(|a, b| b.total_cmp(a));
    let mut xi = [[0.0; 2]; 6];
    xi[1] = polar(rng, high);
    for (k, &r) in lows.iter().enumerate() {
        xi[k + 2] = polar(rng, r);
    }
    let sum = xi[1..].iter().fold([0.0, 0.0], |acc, &x| add(acc, x));
    xi[0] = [-sum[0], -sum[1]];
    xi
}

pub fn case1_multiplier_bound(
    m: &IMultiplier,
    regime: &Case1Regime,
    sample_count: usize,
    seed: u64,
) -> Case1Report {
    let mut rng = SeededRng::new(seed);
    let mut max_ratio = 0.0;
    let mut total = 0.0;
    let mut worst = [[0.0; 2]; 6];
    for _ in 0..sample_count {
        let xi = sample_tuple(m, regime, &mut rng);
        let r = case1_ratio(m, &xi);
        total += r;
        if r > max_ratio {
            max_ratio = r;
            worst = xi;
        }
    }
    Case1Report {
        max_ratio,
        mean_ratio: if sample_count > 0 { total / sample_count as f64 } else { 0.0 },
        samples: sample_count,
        seed,
        worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_low_frequencies_give_zero() {
        let m = IMultiplier::with_cutoff(16, 1.5).unwrap();
        let xi = [[-10.0, -3.0], [6.0, 1.0], [2.0, 1.0], [1.0, 0.5], [0.5, 0.5], [0.5, 0.0]];
        assert!(norm(xi[1..].iter().fold([0.0, 0.0], |a, &x| add(a, x))) <= 16.0);
        assert_eq!(case1_ratio(&m, &xi), 0.0);
    }

    #[test]
    fn one_high_frequency_with_tiny_partners() {
        let m = IMultiplier::with_cutoff(16, 1.5).unwrap();
        let xi2 = [128.0, 0.0];
        let small = [[0.5, 0.0], [0.0, 0.5], [-0.3, 0.2], [0.1, 0.1]];
        let mut xi = [[0.0; 2]; 6];
        xi[1] = xi2;
        xi[2..].copy_from_slice(&small);
        let sum = xi[1..].iter().fold([0.0, 0.0], |a, &x| add(a, x));
        xi[0] = [-sum[0], -sum[1]];
        // direct evaluation: |1 − m(ξ₂+η)/m(ξ₂)| · 128/1
        let expect = (1.0 - m.value(sum) / m.value(xi2)).abs() * 128.0;
        let r = case1_ratio(&m, &xi);
        assert!((r - expect).abs() < 1e-12);
        assert!(r.is_finite() && r < 1.0, "{r}");
    }

    #[test]
    fn samples_respect_regime() {
        let m = IMultiplier::with_cutoff(16, 1.5).unwrap();
        let regime = Case1Regime::default();
        let mut rng = SeededRng::new(1);
        for _ in 0..1000 {
            let xi = sample_tuple(&m, &regime, &mut rng);
            let total = xi.iter().fold([0.0, 0.0], |a, &x| add(a, x));
            assert!(norm(total) < 1e-9);
            assert!(norm(xi[1]) >= 16.0 * (1.0 - 1e-12));
            for k in 2..5 {
                assert!(norm(xi[k]) >= norm(xi[k + 1]));
            }
            assert!(norm(xi[2]) <= 4.0 * (1.0 + 1e-12));
        }
    }

    /// Every low frequency is below `N`, so only `m(ξ₂)` differs from 1 and
    /// the shift `η = ξ₃+…+ξ₆` has `|η| < 8N₃`; radial shifts are extremal.
    fn radial_envelope(m: &IMultiplier, high_max: f64, shift_max: f64) -> f64 {
        let (nr, nt) = (20000, 400);
        let n = m.n();
        let mut best = 0.0f64;
        for i in 0..=nr {
            let r = n * high_max.powf(i as f64 / nr as f64);
            let d = Dyadic::of_magnitude(r).as_f64();
            for j in 1..=nt {
                let t = shift_max * j as f64 / nt as f64;
                for sgn in [-1.0, 1.0] {
                    best = best.max(8.0 * (1.0 - m.radial((r + sgn * t).abs()) / m.radial(r)).abs() * d / t);
                }
            }
        }
        best
    }

    #[test]
    fn constant_matches_the_envelope() {
        let m = IMultiplier::with_cutoff(16, 1.5).unwrap();
        let regime = Case1Regime::default();
        let envelope = radial_envelope(&m, regime.high_max, 16.0);
        assert!(envelope <= CASE1_CONSTANT && CASE1_CONSTANT <= 1.01 * envelope, "{envelope}");
        assert!(CASE1_CONSTANT <= 10.0);
        let r = case1_multiplier_bound(&m, &regime, 20_000, 5);
        assert!(r.max_ratio <= envelope);
    }

    #[test]
    fn deterministic_under_seed() {
        let m = IMultiplier::with_cutoff(8, 1.3).unwrap();
        let a = case1_multiplier_bound(&m, &Case1Regime::default(), 500, 77);
        let b = case1_multiplier_bound(&m, &Case1Regime::default(), 500, 77);
        assert_eq!(a, b);
    }
}
