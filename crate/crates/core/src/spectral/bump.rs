/// `x ↦ e^{−1/x}` for `x > 0`, else 0.
fn flat(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// C^∞ step rising from 0 (at `x ≤ 0`) to 1 (at `x ≥ 1`):
/// `B(x) = f(x) / (f(x) + f(1 − x))`.
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = flat(x);
        a / (a + flat(1.0 - x))
    }
}

/// Radial cutoff `φ` with `φ = 1` on `r ≤ 1`, `φ = 0` on `r ≥ 2` and
/// `φ(r) = B(2 − r)` in between.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BumpProfile;

impl BumpProfile {
    pub fn value(self, r: f64) -> f64 {
        smooth_step(2.0 - r)
    }

    /// `1 − φ(r)`: 0 below 1, 1 above 2.
    pub fn rise(self, r: f64) -> f64 {
        1.0 - self.value(r)
    }
}
