//! Scaling and iteration bookkeeping of the globalization argument.
//!
//! Given `s ∈ (8/7, 2)` and a target time `T₀`:
//!
//! ```text
//!     N          = T₀^{s/(7s−8)}, rounded up to a power of two
//!     λ          = (1/2C₀)^{1/2s} N^{(4−2s)/2s} (1 + ‖u₀‖_{H^s})^{6/2s}
//!     iterations = C₁ N³
//!     ‖u(T₀)‖_{H^s} ≲ T₀^{(8−4s)/(7s−8)}
//! ```
//!
//! The arbitrarily small losses in the exponents (`N^{3−}`, `T₀^{…+}`) are
//! dropped by default. A nonzero `epsilon` reinstates them as
//! `s/(7s−8) + ε`, `N^{3−ε}` and `(8−4s)/(7s−8) + ε`.

use std::fmt;

use crate::imethod::S_MIN;
use crate::spectral::Dyadic;
use crate::table::CsvTable;
use crate::{Error, Result};

/// `C₀` in `E(I u_{0,λ}) ≤ C₀ N^{4−2s} λ^{−2s} (1 + ‖u₀‖_{H^s})⁶` at `s = 1.5`.
///
/// Over the seeded Gaussian-spectrum corpus of the calibration test the ratio
/// peaks at 0.0092 (λ = 1, N = 2, `‖u₀‖_{H^s}` ≈ 1/2). The kinetic part alone
/// is bounded by `max_h h²/(2(1+h)⁶) = 0.01097`; the constant covers both.
pub const CALIBRATED_C0: f64 = 0.011;

/// `C₁` in `iterations = C₁ N³`. Unit by default; the sweep scenario reports
/// the value implied by its measured increments.
pub const CALIBRATED_C1: f64 = 1.0;

/// Growth exponents above this are reported as diverging.
pub const DIVERGENCE_THRESHOLD: f64 = 20.0;

fn check_s(s: f64) -> Result<()> {
    if !(s > S_MIN && s < 2.0) {
        return Err(Error::param(format!(
            "regularity s = {s} outside (8/7, 2): global well-posedness is only established for s > 8/7"
        )));
    }
    Ok(())
}

/// `(8 − 4s)/(7s − 8)`.
pub fn growth_exponent(s: f64) -> Result<f64> {
    check_s(s)?;
    Ok((8.0 - 4.0 * s) / (7.0 * s - 8.0))
}

/// `s/(7s − 8)`, the exponent in `N ∼ T₀^{s/(7s−8)}`.
pub fn cutoff_exponent(s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(s / (7.0 * s - 8.0))
}

/// `λ = (1/2C₀)^{1/2s} N^{(4−2s)/2s} (1 + ‖u₀‖_{H^s})^{6/2s}`.
pub fn choose_lambda(s: f64, n: f64, hs_norm_u0: f64, c0: f64) -> Result<f64> {
    check_s(s)?;
    if !(n >= 2.0) {
        return Err(Error::param(format!("cutoff N must be >= 2, got {n}")));
    }
    if !(c0 > 0.0) {
        return Err(Error::param(format!("C0 must be positive, got {c0}")));
    }
    if !(hs_norm_u0 >= 0.0) {
        return Err(Error::param(format!("H^s norm must be nonnegative, got {hs_norm_u0}")));
    }
    let inv = 1.0 / (2.0 * s);
    Ok((1.0 / (2.0 * c0)).powf(inv) * n.powf((4.0 - 2.0 * s) * inv) * (1.0 + hs_norm_u0).powf(6.0 * inv))
}

/// Smallest power of two `≥ max(x, 2)`, tolerant of round-off just above a
/// power.
pub fn dyadic_ceil(x: f64) -> Result<Dyadic> {
    let k = (x.max(2.0).log2() - 1e-9).ceil().max(1.0);
    if !(k <= 62.0) {
        return Err(Error::Resource(format!("cutoff {x:e} exceeds 2^62")));
    }
    Ok(Dyadic::from_exponent(k as u32))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlanInputs {
    pub s: f64,
    pub t0: f64,
    pub c0: f64,
    pub c1: f64,
    pub hs_norm_u0: f64,
    pub epsilon: f64,
}

impl PlanInputs {
    pub fn new(s: f64, t0: f64) -> Self {
        Self { s, t0, c0: CALIBRATED_C0, c1: CALIBRATED_C1, hs_norm_u0: 0.0, epsilon: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlobalizationPlan {
    pub s: f64,
    pub t0: f64,
    pub n: Dyadic,
    pub lambda: f64,
    pub iterations: u64,
    pub growth_exponent: f64,
    /// `T₀^{growth_exponent}`, up to the implicit constant.
    pub predicted_hs_bound: f64,
    pub c0: f64,
    pub c1: f64,
    pub epsilon: f64,
    pub warnings: Vec<String>,
}

pub fn plan(s: f64, t0: f64, c1: f64) -> Result<GlobalizationPlan> {
    plan_with(&PlanInputs { c1, ..PlanInputs::new(s, t0) })
}

pub fn plan_with(inputs: &PlanInputs) -> Result<GlobalizationPlan> {
    let PlanInputs { s, t0, c0, c1, hs_norm_u0, epsilon } = *inputs;
    check_s(s)?;
    if !(t0 > 1.0 && t0.is_finite()) {
        return Err(Error::param(format!("target time T0 must exceed 1, got {t0}")));
    }
    if !(c1 > 0.0) {
        return Err(Error::param(format!("C1 must be positive, got {c1}")));
    }
    if !(epsilon >= 0.0 && epsilon < 1.0) {
        return Err(Error::param(format!("epsilon must lie in [0, 1), got {epsilon}")));
    }
    let n = dyadic_ceil(t0.powf(cutoff_exponent(s)? + epsilon))?;
    let lambda = choose_lambda(s, n.as_f64(), hs_norm_u0, c0)?;
    let iterations = (c1 * n.as_f64().powf(3.0 - epsilon)).round().max(1.0) as u64;
    let growth = growth_exponent(s)? + epsilon;
    let mut warnings = Vec::new();
    if epsilon == 0.0 {
        warnings.push("epsilon losses in the exponents dropped".to_string());
    }
    if growth > DIVERGENCE_THRESHOLD {
        warnings.push(format!("growth exponent {growth:.3} diverges as s -> 8/7"));
    }
    Ok(GlobalizationPlan {
        s,
        t0,
        n,
        lambda,
        iterations,
        growth_exponent: growth,
        predicted_hs_bound: t0.powf(growth),
        c0,
        c1,
        epsilon,
        warnings,
    })
}

pub const PLAN_COLUMNS: [&str; 10] =
    ["s", "T0", "N", "lambda", "iterations", "growth_exponent", "predicted_hs_bound", "C0", "C1", "epsilon"];

impl GlobalizationPlan {
    pub fn table(&self) -> CsvTable {
        let mut t = CsvTable::new(PLAN_COLUMNS);
        t.push(vec![
            self.s.into(),
            self.t0.into(),
            self.n.value().into(),
            self.lambda.into(),
            self.iterations.into(),
            self.growth_exponent.into(),
            self.predicted_hs_bound.into(),
            self.c0.into(),
            self.c1.into(),
            self.epsilon.into(),
        ]);
        t
    }
}

impl fmt::Display for GlobalizationPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<20} {}", "s", self.s)?;
        writeln!(f, "{:<20} {}", "T0", self.t0)?;
        writeln!(f, "{:<20} {}", "N", self.n.value())?;
        writeln!(f, "{:<20} {:.6}", "lambda", self.lambda)?;
        writeln!(f, "{:<20} {}", "iterations", self.iterations)?;
        writeln!(f, "{:<20} {:.6}", "growth exponent", self.growth_exponent)?;
        writeln!(f, "{:<20} {:.6e}", "H^s bound (T0^exp)", self.predicted_hs_bound)?;
        writeln!(f, "{:<20} {}", "C0", self.c0)?;
        writeln!(f, "{:<20} {}", "C1", self.c1)?;
        writeln!(f, "{:<20} {}", "epsilon", self.epsilon)?;
        for w in &self.warnings {
            writeln!(f, "note: {w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_plan() {
        let p = plan(1.5, 1024.0, 1.0).unwrap();
        assert_eq!(p.n.value(), 64);
        assert_eq!(p.iterations, 262144);
        assert!((p.growth_exponent - 0.8).abs() < 1e-12);
        assert!((cutoff_exponent(1.5).unwrap() - 0.6).abs() < 1e-15);
        assert!((plan(1.2, 1024.0, 1.0).unwrap().growth_exponent - 8.0).abs() < 1e-9);
    }

    #[test]
    fn threshold_is_enforced() {
        assert!(plan(8.0 / 7.0, 1024.0, 1.0).is_err());
        assert!(plan(1.1, 1024.0, 1.0).is_err());
        assert!(plan(2.0, 1024.0, 1.0).is_err());
        assert!(plan(1.5, 1.0, 1.0).is_err());
        let near = plan(8.0 / 7.0 + 1e-3, 1.001, 1.0).unwrap();
        assert!(matches!(plan(8.0 / 7.0 + 1e-3, 1e3, 1.0), Err(Error::Resource(_))));
        assert!(near.warnings.iter().any(|w| w.contains("diverges")));
    }

    #[test]
    fn lambda_formula() {
        let l = choose_lambda(1.5, 16.0, 0.0, 0.5).unwrap();
        assert!((l - 16f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!((l - 2.5198).abs() < 1e-4);
        assert!(choose_lambda(1.5, 32.0, 0.0, 0.5).unwrap() > l);
        assert!(choose_lambda(1.5, 1.0, 0.0, 0.5).is_err());
        assert!(choose_lambda(1.5, 16.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn monotonicity() {
        let mut last = 0;
        for t0 in [2.0, 10.0, 100.0, 1e3, 1e4, 1e6] {
            let n = plan(1.5, t0, 1.0).unwrap().n.value();
            assert!(n >= last);
            last = n;
        }
        let mut prev = f64::INFINITY;
        for k in 1..50 {
            let s = S_MIN + k as f64 * (2.0 - S_MIN) / 50.0;
            let e = growth_exponent(s).unwrap();
            assert!(e < prev);
            prev = e;
        }
    }

    #[test]
    fn dyadic_rounding() {
        assert_eq!(dyadic_ceil(64.0000000001).unwrap().value(), 64);
        assert_eq!(dyadic_ceil(64.01).unwrap().value(), 128);
        assert_eq!(dyadic_ceil(0.3).unwrap().value(), 2);
    }

    fn corpus(seeds: std::ops::Range<u64>) -> Vec<crate::spectral::Field2D> {
        use crate::diagnostics::strichartz::gaussian_spectrum_data;
        use crate::rng::SeededRng;
        use crate::spectral::GridSpec;
        let g = GridSpec::new(GridSpec::DEFAULT_BOX_LENGTH, 64).unwrap();
        let mut out = Vec::new();
        for seed in seeds {
            let mut rng = SeededRng::new(seed);
            for w in [0.5, 1.0, 2.0] {
                let phi = gaussian_spectrum_data(g, w, &mut rng);
                for k in -8..=4 {
                    out.push(phi.scale(crate::C64::new(2f64.powf(k as f64 / 2.0), 0.0)));
                }
            }
        }
        out
    }

    #[test]
    fn c0_calibration() {
        use crate::globalizer::rescaled_modified_energy;
        use crate::imethod::IMultiplier;
        use crate::spectral::hs;
        let s = 1.5;
        let mut worst = 0.0f64;
        for u in corpus(0..8) {
            let h = hs(&u, s);
            for n in [2u64, 4, 8, 16, 32] {
                let m = IMultiplier::with_cutoff(n, s).unwrap();
                for k in 0..=24 {
                    let lam = 2f64.powf(k as f64 / 4.0);
                    let r = rescaled_modified_energy(&m, &u, lam) * lam.powf(2.0 * s)
                        / ((n as f64).powf(4.0 - 2.0 * s) * (1.0 + h).powi(6));
                    worst = worst.max(r);
                }
            }
        }
        assert!(worst <= CALIBRATED_C0 && worst > 0.5 * CALIBRATED_C0, "{worst}");
        let envelope = (0..=10000).map(|i| i as f64 * 1e-4).map(|h| 0.5 * h * h / (1.0 + h).powi(6)).fold(0.0, f64::max);
        assert!(envelope <= CALIBRATED_C0);

        // held-out seeds: the scaling choice brings E(I u_{0,λ}) below 1/2
        for u in corpus(100..104) {
            let h = hs(&u, s);
            for n in [4u64, 16, 64] {
                let m = IMultiplier::with_cutoff(n, s).unwrap();
                let lam = choose_lambda(s, n as f64, h, CALIBRATED_C0).unwrap();
                let e = rescaled_modified_energy(&m, &u, lam);
                assert!(e <= 0.5, "N={n} λ={lam} E={e}");
            }
        }
    }

    #[test]
    fn epsilon_shifts_exponents() {
        let p = plan_with(&PlanInputs { epsilon: 0.05, c1: 1.0, ..PlanInputs::new(1.5, 1024.0) }).unwrap();
        assert!((p.growth_exponent - 0.85).abs() < 1e-12);
        assert!(p.n.value() >= 64);
        assert!(!p.warnings.iter().any(|w| w.contains("dropped")));
    }
}
