//! Littlewood–Paley projections built on [`BumpProfile`].

use super::norms::{fractional_derivative, lp_norm};
use super::{BumpProfile, Field2D};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpKind {
    /// `P_N`: symbol `φ(ξ/N) − φ(2ξ/N)`, supported in `N/2 < |ξ| < 2N`.
    Band,
    /// `P_{≤N}`: symbol `φ(ξ/N)`.
    Low,
    /// `P_{>N}`: symbol `1 − φ(ξ/N)`.
    High,
}

/// A power of two `N = 2^k`, `k ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dyadic(u32);

impl Dyadic {
    pub fn from_exponent(k: u32) -> Self {
        Dyadic(k)
    }

    pub fn new(value: u64) -> Result<Self> {
        if value == 0 || !value.is_power_of_two() {
            return Err(Error::param(format!("{value} is not a power of two")));
        }
        Ok(Dyadic(value.trailing_zeros()))
    }

    /// Accepts a real value only if it is exactly a power of two.
    pub fn from_f64(value: f64) -> Result<Self> {
        if value >= 1.0 && value.fract() == 0.0 && value <= (1u64 << 62) as f64 {
            Self::new(value as u64)
        } else {
            Err(Error::param(format!("{value} is not a power of two >= 1")))
        }
    }

    pub fn exponent(self) -> u32 {
        self.0
    }

    pub fn value(self) -> u64 {
        1u64 << self.0
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }

    /// Dyadic magnitude `2^⌊log₂ r⌋` of a frequency, floored at 1.
    pub fn of_magnitude(r: f64) -> Self {
        if r < 2.0 {
            Dyadic(0)
        } else {
            Dyadic(r.log2().floor() as u32)
        }
    }
}

pub fn lp_symbol(kind: LpKind, n: Dyadic, r: f64) -> f64 {
    let phi = BumpProfile;
    let scaled = r / n.as_f64();
    match kind {
        LpKind::Low => phi.value(scaled),
        LpKind::High => 1.0 - phi.value(scaled),
        LpKind::Band => phi.value(scaled) - phi.value(2.0 * scaled),
    }
}

/// Applies `P_N`, `P_{≤N}` or `P_{>N}`. Result in frequency form.
pub fn lp_project(f: &Field2D, n: Dyadic, kind: LpKind) -> Field2D {
    f.apply_symbol(|[a, b]| lp_symbol(kind, n, a.hypot(b)))
}

/// Smallest dyadic `N_max` with `φ(ξ/N_max) = 1` on the whole grid, so that
/// `P_{≤1} + Σ_{1<N≤N_max} P_N` is the identity there.
pub fn covering_dyadic(grid: &super::GridSpec) -> Dyadic {
    let rmax = std::f64::consts::SQRT_2 * grid.nyquist_frequency();
    let mut n = Dyadic(0);
    while n.as_f64() < rmax {
        n = Dyadic(n.0 + 1);
    }
    n
}

/// The full partition `[P_{≤1} f, P_2 f, P_4 f, …, P_{N_max} f]`.
pub fn lp_decompose(f: &Field2D) -> Vec<Field2D> {
    let top = covering_dyadic(f.grid());
    let mut pieces = vec![lp_project(f, Dyadic(0), LpKind::Low)];
    for k in 1..=top.exponent() {
        pieces.push(lp_project(f, Dyadic(k), LpKind::Band));
    }
    pieces
}

/// `‖|∇|^s f‖_{L^p} / (N^s ‖f‖_{L^p})` for a field already localized to the
/// shell `|ξ| ∼ N`.
pub fn bernstein_ratio(f: &Field2D, n: Dyadic, s: f64, p: f64) -> Result<f64> {
    let base = lp_norm(f, p)?;
    if base == 0.0 {
        return Err(Error::UndefinedRatio("field has no content in the shell".into()));
    }
    let deriv = lp_norm(&fractional_derivative(f, s), p)?;
    Ok(deriv / (n.as_f64().powf(s) * base))
}
