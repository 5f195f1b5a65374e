//! Seeded initial data.

use super::config::DataRecipe;
use crate::evolution::dealias;
use crate::globalizer::normalize_modified_energy;
use crate::imethod::IMultiplier;
use crate::rng::SeededRng;
use crate::spectral::{Dyadic, Field2D, GridSpec};
use crate::{Error, Result, C64};

/// Regularity and cutoff context for recipes that need it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DataContext {
    pub s: f64,
    /// Largest configured cutoff, for the rough-tail normalization.
    pub largest_cutoff: Dyadic,
    pub dealias_fraction: f64,
}

/// Deterministic in `(recipe, seed, grid, context)`.
pub fn generate_data(recipe: &DataRecipe, seed: u64, grid: GridSpec, ctx: &DataContext) -> Result<Field2D> {
    match recipe {
        DataRecipe::Gaussian { amplitude, width } => {
            let [cx, cy] = grid.center();
            let w2 = 2.0 * width * width;
            Ok(Field2D::from_fn(grid, |x, y| {
                C64::new(amplitude * (-((x - cx).powi(2) + (y - cy).powi(2)) / w2).exp(), 0.0)
            }))
        }
        DataRecipe::PlaneWave { wavenumber, amplitude } => {
            Field2D::plane_wave(grid, *wavenumber, C64::new(*amplitude, 0.0))
        }
        DataRecipe::RoughTail { decay, energy_target } => {
            let exponent = -(decay.unwrap_or(ctx.s + 1.0)) / 2.0;
            let mut rng = SeededRng::new(seed);
            let f = Field2D::from_spectrum(grid, |[a, b]| rng.phase() * (1.0 + a * a + b * b).powf(exponent));
            let f = dealias(&f, ctx.dealias_fraction);
            let m = IMultiplier::new(ctx.largest_cutoff, ctx.s)?;
            normalize_modified_energy(&f, &m, *energy_target)
        }
        DataRecipe::CustomSpectrum { modes } => {
            let n = grid.points_per_side();
            let mut values = vec![C64::new(0.0, 0.0); grid.len()];
            for &([k1, k2], [re, im]) in modes {
                let (i, j) = match (grid.index_of_wavenumber(k1), grid.index_of_wavenumber(k2)) {
                    (Some(i), Some(j)) => (i, j),
                    _ => return Err(Error::Data(format!("wavenumber ({k1}, {k2}) is not on the {n}² grid"))),
                };
                values[i * n + j] += C64::new(re, im);
            }
            Field2D::from_values(grid, crate::spectral::Representation::Frequency, values)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imethod::modified_energy;

    fn ctx() -> DataContext {
        DataContext { s: 1.5, largest_cutoff: Dyadic::new(32).unwrap(), dealias_fraction: 1.0 / 3.0 }
    }

    #[test]
    fn gaussian_mass() {
        let g = GridSpec::new(40.0, 128).unwrap();
        let r = DataRecipe::Gaussian { amplitude: 1.0, width: 1.0 };
        for seed in [0, 9] {
            let u = generate_data(&r, seed, g, &ctx()).unwrap();
            assert!((u.l2_norm() - std::f64::consts::PI.sqrt()).abs() < 1e-6);
        }
    }

    #[test]
    fn rough_tail_is_normalized_and_seeded() {
        let g = GridSpec::new(std::f64::consts::TAU, 128).unwrap();
        let r = DataRecipe::RoughTail { decay: None, energy_target: 1.0 };
        let a = generate_data(&r, 4, g, &ctx()).unwrap();
        let b = generate_data(&r, 4, g, &ctx()).unwrap();
        let c = generate_data(&r, 5, g, &ctx()).unwrap();
        assert_eq!(a.values(), b.values());
        assert_ne!(a.values(), c.values());
        let m = IMultiplier::with_cutoff(32, 1.5).unwrap();
        assert!(modified_energy(&m, &a) <= 1.0 + 1e-9);
        assert!(crate::evolution::is_dealiased(&a, 1.0 / 3.0));
    }

    #[test]
    fn custom_modes() {
        let g = GridSpec::torus(16).unwrap();
        let r = DataRecipe::CustomSpectrum { modes: vec![([1, -2], [0.5, 0.25])] };
        let u = generate_data(&r, 0, g, &ctx()).unwrap();
        assert!((u.l2_norm() - (0.3125f64).sqrt()).abs() < 1e-14);
        let off = DataRecipe::CustomSpectrum { modes: vec![([9, 0], [1.0, 0.0])] };
        assert!(matches!(generate_data(&off, 0, g, &ctx()), Err(Error::Data(_))));
    }
}
