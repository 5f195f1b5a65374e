//! Littlewood–Paley square function `S u = (Σ_N |P_N u|²)^{1/2}`.

use crate::spectral::lp_decompose;
use crate::spectral::norms::lp_norm_physical;
use crate::spectral::Field2D;
use crate::{Error, Result};

/// Pointwise `S u` in physical form (real, nonnegative values).
pub fn square_function(f: &Field2D) -> Field2D {
    let pieces: Vec<Field2D> = lp_decompose(f).into_iter().map(Field2D::into_physical).collect();
    let mut out = Field2D::zeros(*f.grid(), crate::Representation::Physical);
    for piece in &pieces {
        for (o, v) in out.values_mut().iter_mut().zip(piece.values()) {
            o.re += v.norm_sqr();
        }
    }
    out.map(|v| crate::C64::new(v.re.sqrt(), 0.0))
}

/// `‖S u‖_{L^p} / ‖u‖_{L^p}` for `1 < p < ∞`.
pub fn square_function_check(f: &Field2D, p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::param(format!("square-function equivalence needs 1 < p < ∞, got {p}")));
    }
    let base = lp_norm_physical(&f.to_physical(), p);
    if base == 0.0 {
        return Err(Error::UndefinedRatio("zero field".into()));
    }
    Ok(lp_norm_physical(&square_function(f), p) / base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::GridSpec;
    use crate::C64;

    #[test]
    fn endpoints_rejected() {
        let g = GridSpec::torus(16).unwrap();
        let f = Field2D::plane_wave(g, [1, 0], C64::new(1.0, 0.0)).unwrap();
        assert!(square_function_check(&f, 1.0).is_err());
        assert!(square_function_check(&f, f64::INFINITY).is_err());
        assert!(square_function_check(&f, 0.5).is_err());
    }

    #[test]
    fn single_mode_bracket() {
        // |ξ| = 3 sits in the overlap of P_2 and P_4: weights a, 1−a with
        // a² + (1−a)² ∈ [1/2, 1]
        let g = GridSpec::torus(32).unwrap();
        for k in [[3, 0], [5, 0], [4, 4], [1, 0]] {
            let f = Field2D::plane_wave(g, k, C64::new(1.0, 0.0)).unwrap();
            let r = square_function_check(&f, 2.0).unwrap();
            assert!((0.5f64.sqrt() - 1e-12..=2f64.sqrt()).contains(&r), "{k:?}: {r}");
        }
        let f = Field2D::plane_wave(g, [3, 0], C64::new(1.0, 0.0)).unwrap();
        let phi = crate::spectral::BumpProfile;
        let a = phi.value(3.0 / 2.0) - phi.value(3.0);
        let b = phi.value(3.0 / 4.0) - phi.value(1.5);
        let expect = (a * a + b * b).sqrt();
        assert!((square_function_check(&f, 2.0).unwrap() - expect).abs() < 1e-12);
    }
}
