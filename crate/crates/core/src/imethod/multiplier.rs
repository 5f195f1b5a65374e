use crate::spectral::{smooth_step, Dyadic, Field2D};
use crate::{Error, Result};

/// Lower end of the regularity range for which the almost-conservation
/// argument closes.
pub const S_MIN: f64 = 8.0 / 7.0;

/// The I-method symbol `m_N(ξ)`.
///
/// ```text
///     m(ξ) = 1                                  |ξ| ≤ N
///          = 1 − χ(ρ) + χ(ρ) ρ^{s−2},  ρ=|ξ|/N   N < |ξ| < 2N
///          = (|ξ|/N)^{s−2}                      |ξ| ≥ 2N
/// ```
///
/// `χ` is the C^∞ step rising from 0 at `ρ = 1` to 1 at `ρ = 2`. Both
/// `1 − ρ^{s−2}` and `χ` are nonnegative and nondecreasing on `(1, 2)`, so
/// `m` is nonincreasing; all derivatives of `χ` vanish at the junctions,
/// which makes `m` C¹ (in fact C^∞ on each side with matching derivatives).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IMultiplier {
    cutoff: Dyadic,
    s: f64,
}

impl IMultiplier {
    pub fn new(cutoff: Dyadic, s: f64) -> Result<Self> {
        if cutoff.value() < 2 {
            return Err(Error::param(format!("I-multiplier cutoff must be >= 2, got {}", cutoff.value())));
        }
        if !(s > S_MIN && s < 2.0) {
            return Err(Error::param(format!("regularity s must lie in (8/7, 2), got {s}")));
        }
        Ok(Self { cutoff, s })
    }

    /// Convenience constructor from a numeric cutoff (must be a power of two).
    pub fn with_cutoff(n: u64, s: f64) -> Result<Self> {
        Self::new(Dyadic::new(n)?, s)
    }

    pub fn cutoff(&self) -> Dyadic {
        self.cutoff
    }

    pub fn n(&self) -> f64 {
        self.cutoff.as_f64()
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `m` as a function of `|ξ|`.
    pub fn radial(&self, r: f64) -> f64 {
        let rho = r / self.n();
        if rho <= 1.0 {
            1.0
        } else if rho >= 2.0 {
            rho.powf(self.s - 2.0)
        } else {
            let chi = smooth_step(rho - 1.0);
            1.0 - chi + chi * rho.powf(self.s - 2.0)
        }
    }

    pub fn value(&self, xi: [f64; 2]) -> f64 {
        self.radial(xi[0].hypot(xi[1]))
    }

    /// `I f`, i.e. `m(ξ) f̂(ξ)`. Result in frequency form.
    pub fn apply(&self, f: &Field2D) -> Field2D {
        f.apply_symbol(|xi| self.value(xi))
    }

    /// Applies the dilated symbol `m(a ξ)`. Result in frequency form.
    pub fn apply_scaled(&self, f: &Field2D, a: f64) -> Field2D {
        f.apply_symbol(|[x, y]| self.radial(a * x.hypot(y)))
    }
}

/// `Î f(ξ) = m(ξ) f̂(ξ)`.
pub fn apply_i(m: &IMultiplier, f: &Field2D) -> Field2D {
    m.apply(f)
}
