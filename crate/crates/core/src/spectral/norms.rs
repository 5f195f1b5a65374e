//! Differential multipliers and norms.

use super::Field2D;
use crate::{Error, Result};

/// `Δ²f`, the Fourier multiplier `|ξ|⁴`. Result in frequency form.
pub fn bilaplacian(f: &Field2D) -> Field2D {
    f.apply_symbol(|[a, b]| {
        let r2 = a * a + b * b;
        r2 * r2
    })
}

/// `Δf`, the Fourier multiplier `−|ξ|²`.
pub fn laplacian(f: &Field2D) -> Field2D {
    f.apply_symbol(|[a, b]| -(a * a + b * b))
}

/// `|∇|^s f`, the Fourier multiplier `|ξ|^s` (zero mode sent to 0 for `s > 0`).
pub fn fractional_derivative(f: &Field2D, s: f64) -> Field2D {
    f.apply_symbol(|[a, b]| homogeneous_weight(a.hypot(b), s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SobolevWeight {
    /// `|ξ|`
    Homogeneous,
    /// `⟨ξ⟩ = √(1 + |ξ|²)`
    Inhomogeneous,
}

fn homogeneous_weight(r: f64, s: f64) -> f64 {
    if r == 0.0 {
        // 0^0 = 1; negative powers drop the zero mode
        if s == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        r.powf(s)
    }
}

/// `(Σ w(ξ)^{2s} |û(ξ)|²)^{1/2}`.
///
/// For the homogeneous weight with `s < 0` the zero mode is excluded.
pub fn sobolev_norm(f: &Field2D, s: f64, weight: SobolevWeight) -> f64 {
    let fh = f.to_frequency();
    let grid = *fh.grid();
    let n = grid.points_per_side();
    let mut sum = 0.0;
    for i in 0..n {
        let a = grid.frequency(i);
        for j in 0..n {
            let b = grid.frequency(j);
            let r2 = a * a + b * b;
            let w = match weight {
                SobolevWeight::Homogeneous => homogeneous_weight(r2.sqrt(), 2.0 * s),
                SobolevWeight::Inhomogeneous => (1.0 + r2).powf(s),
            };
            sum += w * fh.values()[i * n + j].norm_sqr();
        }
    }
    sum.sqrt()
}

/// `‖f‖_{Ḣ^s}`
pub fn hs_dot(f: &Field2D, s: f64) -> f64 {
    sobolev_norm(f, s, SobolevWeight::Homogeneous)
}

/// `‖f‖_{H^s}`
pub fn hs(f: &Field2D, s: f64) -> f64 {
    sobolev_norm(f, s, SobolevWeight::Inhomogeneous)
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::param(format!("Lebesgue exponent must be >= 1, got {p}")));
    }
    Ok(())
}

/// `(Σ_j |u(x_j)|^p dx²)^{1/p}`, or `max_j |u(x_j)|` for `p = ∞`.
pub fn lp_norm(f: &Field2D, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let phys = f.to_physical();
    Ok(lp_norm_physical(&phys, p))
}

pub(crate) fn lp_norm_physical(phys: &Field2D, p: f64) -> f64 {
    let values = phys.values();
    if p.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let cell = phys.grid().cell_area();
    if p == 2.0 {
        let s: f64 = values.iter().map(|v| v.norm_sqr()).sum();
        return (s * cell).sqrt();
    }
    let s: f64 = values.iter().map(|v| v.norm().powf(p)).sum();
    (s * cell).powf(1.0 / p)
}

/// `sup_x |u|` over grid points.
pub fn linf_norm(f: &Field2D) -> f64 {
    lp_norm_physical(&f.to_physical(), f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{GridSpec, Representation};
    use crate::C64;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn bilaplacian_eigenvalues() {
        let g = GridSpec::torus(16).unwrap();
        for (k, eig) in [([1, 0], 1.0), ([2, 0], 16.0), ([1, 1], 4.0)] {
            let u = Field2D::plane_wave(g, k, C64::new(1.0, 0.0)).unwrap();
            let d = bilaplacian(&u).into_physical();
            let expect = u.scale(C64::new(eig, 0.0));
            assert!(d.l2_distance(&expect).unwrap() <= 1e-12 * expect.l2_norm());
        }
        let c = Field2D::from_fn(g, |_, _| C64::new(2.5, -1.0));
        assert!(bilaplacian(&c).l2_norm() < 1e-12);
    }

    #[test]
    fn sobolev_single_mode() {
        let g = GridSpec::torus(16).unwrap();
        let u = Field2D::plane_wave(g, [2, 0], C64::new(1.0, 0.0)).unwrap();
        let mass = u.l2_norm();
        assert!((hs_dot(&u, 2.0) - 4.0 * mass).abs() < 1e-11);
        assert!((hs(&u, 1.0) - 5f64.sqrt() * mass).abs() < 1e-11);
        let z = Field2D::zeros(g, Representation::Physical);
        for s in [-1.0, 0.0, 0.5, 2.0] {
            assert_eq!(hs_dot(&z, s), 0.0);
            assert_eq!(hs(&z, s), 0.0);
        }
    }

    #[test]
    fn gaussian_mass() {
        let g = GridSpec::new(24.0, 128).unwrap();
        let [cx, cy] = g.center();
        let u = Field2D::from_fn(g, |x, y| {
            C64::new((-((x - cx).powi(2) + (y - cy).powi(2)) / 2.0).exp(), 0.0)
        });
        assert!((hs_dot(&u, 0.0) - PI.sqrt()).abs() < 1e-6);
        assert!((lp_norm(&u, 2.0).unwrap() - PI.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn lebesgue_constants() {
        let g = GridSpec::new(3.0, 8).unwrap();
        let area: f64 = 9.0;
        let one = Field2D::from_fn(g, |_, _| C64::new(1.0, 0.0));
        for p in [1.0, 2.0, 3.5, 6.0] {
            assert!((lp_norm(&one, p).unwrap() - area.powf(1.0 / p)).abs() < 1e-12);
        }
        assert_eq!(lp_norm(&one, f64::INFINITY).unwrap(), 1.0);
        let c = Field2D::from_fn(g, |x, _| C64::from_polar(2.0, TAU * x));
        assert!((lp_norm(&c, 4.0).unwrap() - 2.0 * area.powf(0.25)).abs() < 1e-12);
        assert!(matches!(lp_norm(&one, 0.5), Err(Error::Parameter(_))));
    }
}
