//! The scaling `u_λ(t, x) = λ^{−1} u(t/λ⁴, x/λ)` on periodic boxes.
//!
//! On the box `λL` the unitary Fourier coefficients of `u_λ` at integer
//! wavenumber `k` coincide with those of `u` on the box `L`; only the
//! physical frequency changes, `ξ ↦ ξ/λ`. Rescaling is therefore exact: copy
//! the coefficients and zero-pad onto a grid with at least as many points.

use crate::imethod::{IMultiplier, SEXTIC_COEFFICIENT};
use crate::spectral::{Field2D, GridSpec, Representation};
use crate::{Error, Result, C64};

/// Caps applied before any rescaled grid is allocated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RescaleLimits {
    pub max_points_per_side: usize,
    pub max_box_length: f64,
}

impl Default for RescaleLimits {
    fn default() -> Self {
        Self { max_points_per_side: 2048, max_box_length: 1e6 }
    }
}

/// Default target resolution: `λn` rounded up to even, never below `n`.
pub fn rescaled_points(n: usize, lambda: f64) -> usize {
    let target = (lambda * n as f64 - 1e-9).ceil().max(n as f64) as usize;
    target + target % 2
}

pub fn rescale(f: &Field2D, lambda: f64, limits: &RescaleLimits) -> Result<Field2D> {
    let n = rescaled_points(f.grid().points_per_side(), lambda.max(0.0));
    rescale_onto(f, lambda, n, limits)
}

/// `λ^{−1} f(·/λ)` on the box `λL` with `points` per side.
pub fn rescale_onto(f: &Field2D, lambda: f64, points: usize, limits: &RescaleLimits) -> Result<Field2D> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::param(format!("scaling parameter must be positive, got {lambda}")));
    }
    let src = f.to_frequency();
    let g = *src.grid();
    let n = g.points_per_side();
    if points < n {
        return Err(Error::param(format!("target grid {points} is coarser than the source grid {n}")));
    }
    let box_length = lambda * g.box_length();
    if points > limits.max_points_per_side || box_length > limits.max_box_length {
        return Err(Error::Resource(format!(
            "rescaled grid {points}² on box {box_length:.4} exceeds the limits ({}² points, box {})",
            limits.max_points_per_side, limits.max_box_length
        )));
    }
    let target = GridSpec::new(box_length, points)?;
    let mut out = vec![C64::new(0.0, 0.0); target.len()];
    let same = points == n;
    for i in 0..n {
        let ti = if same { i } else { target.index_of_wavenumber(g.wavenumber(i)).expect("padding keeps indices") };
        for j in 0..n {
            let tj = if same { j } else { target.index_of_wavenumber(g.wavenumber(j)).expect("padding keeps indices") };
            out[ti * points + tj] = src.values()[i * n + j];
        }
    }
    Field2D::from_values(target, Representation::Frequency, out)
}

/// `E(I_N u_λ)` evaluated without building the rescaled grid:
/// `E(I_N u_λ) = λ^{−4} E(m_N(·/λ) u)`.
pub fn rescaled_modified_energy(m: &IMultiplier, f: &Field2D, lambda: f64) -> f64 {
    let g = m.apply_scaled(f, 1.0 / lambda);
    crate::imethod::energy(&g, SEXTIC_COEFFICIENT) / lambda.powi(4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imethod::{energy, modified_energy};
    use crate::rng::SeededRng;

    fn smooth(grid: GridSpec, seed: u64) -> Field2D {
        let mut rng = SeededRng::new(seed);
        Field2D::from_spectrum(grid, |[a, b]| rng.complex_normal() * (-(a * a + b * b) / 2.0).exp())
    }

    #[test]
    fn identity_at_one() {
        let f = smooth(GridSpec::new(12.0, 32).unwrap(), 1);
        let g = rescale(&f, 1.0, &RescaleLimits::default()).unwrap();
        assert_eq!(g.grid(), f.grid());
        assert!(g.l2_distance(&f).unwrap() < 1e-14 * f.l2_norm());
    }

    #[test]
    fn pointwise_definition() {
        let g = GridSpec::new(10.0, 32).unwrap();
        let [cx, cy] = g.center();
        let u = |x: f64, y: f64| C64::new((-((x - cx).powi(2) + (y - cy).powi(2))).exp(), 0.0);
        let f = Field2D::from_fn(g, u);
        let r = rescale(&f, 2.0, &RescaleLimits::default()).unwrap().to_physical();
        assert_eq!(r.grid().points_per_side(), 64);
        let h = r.grid();
        let mut worst = 0.0f64;
        for i in 0..64 {
            for j in 0..64 {
                let [x, y] = h.position(i, j);
                let expect = u(x / 2.0, y / 2.0) / 2.0;
                worst = worst.max((r.values()[i * 64 + j] - expect).norm());
            }
        }
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn mass_and_energy_scaling() {
        let f = smooth(GridSpec::new(12.0, 64).unwrap(), 2);
        for lambda in [0.5, 1.5, 2.0, 3.0] {
            let r = rescale(&f, lambda, &RescaleLimits::default()).unwrap();
            assert!((r.l2_norm() / f.l2_norm() - 1.0).abs() < 1e-10);
            let e = energy(&f, SEXTIC_COEFFICIENT);
            let er = energy(&r, SEXTIC_COEFFICIENT);
            assert!((er * lambda.powi(4) / e - 1.0).abs() < 1e-6, "λ={lambda}");
        }
    }

    #[test]
    fn group_law() {
        let f = smooth(GridSpec::new(12.0, 32).unwrap(), 3);
        let lim = RescaleLimits::default();
        let twice = rescale(&rescale(&f, 2.0, &lim).unwrap(), 2.0, &lim).unwrap();
        let once = rescale(&f, 4.0, &lim).unwrap();
        assert_eq!(twice.grid(), once.grid());
        assert!(twice.l2_distance(&once).unwrap() < 1e-10 * f.l2_norm());
    }

    #[test]
    fn limits_are_enforced() {
        let f = smooth(GridSpec::new(12.0, 32).unwrap(), 4);
        let lim = RescaleLimits { max_points_per_side: 64, ..Default::default() };
        assert!(matches!(rescale(&f, 4.0, &lim), Err(Error::Resource(_))));
        assert!(rescale(&f, 2.0, &lim).is_ok());
        let lim = RescaleLimits { max_box_length: 20.0, ..Default::default() };
        assert!(matches!(rescale(&f, 2.0, &lim), Err(Error::Resource(_))));
        assert!(rescale(&f, -1.0, &RescaleLimits::default()).is_err());
    }

    #[test]
    fn modified_energy_without_the_big_grid() {
        let f = smooth(GridSpec::new(12.0, 64).unwrap(), 5).scale(C64::new(3.0, 0.0));
        let m = IMultiplier::with_cutoff(2, 1.5).unwrap();
        let big = rescale(&f, 2.0, &RescaleLimits::default()).unwrap();
        let direct = modified_energy(&m, &big);
        let shortcut = rescaled_modified_energy(&m, &f, 2.0);
        assert!((direct / shortcut - 1.0).abs() < 1e-10);
    }
}
