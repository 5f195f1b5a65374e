use std::fmt;
use std::ops::{Add, Mul, Sub};

use rustfft::FftDirection;

use super::fft::fft2;
use super::GridSpec;
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Frequency,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Physical => "physical",
            Representation::Frequency => "frequency",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Complex scalar field on a [`GridSpec`], stored either as point values or
/// as Fourier coefficients.
///
/// Coefficients use the orthonormal Fourier-series convention
///
/// ```text
///     û(ξ_k) = (L/n²) Σ_j u(x_j) e^{−i ξ_k·x_j}  ≈ (1/L) ∫ u e^{−iξ·x} dx
///     u(x_j) = (1/L) Σ_k û(ξ_k) e^{i ξ_k·x_j}
/// ```
///
/// so that `Σ_k |û(ξ_k)|² = Σ_j |u(x_j)|² dx²` holds with no weights, the
/// right-hand side being the midpoint quadrature of `‖u‖²_{L²}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Field2D {
    grid: GridSpec,
    repr: Representation,
    values: Vec<C64>,
}

impl Field2D {
    pub fn zeros(grid: GridSpec, repr: Representation) -> Self {
        Self { grid, repr, values: vec![C64::new(0.0, 0.0); grid.len()] }
    }

    pub fn from_values(grid: GridSpec, repr: Representation, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::param(format!(
                "expected {} values for a {n}x{n} grid, got {}",
                grid.len(),
                values.len(),
                n = grid.points_per_side()
            )));
        }
        Ok(Self { grid, repr, values })
    }

    /// Samples `f(x, y)` at the grid points.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> C64) -> Self {
        let n = grid.points_per_side();
        let mut values = Vec::with_capacity(grid.len());
        for i in 0..n {
            for j in 0..n {
                let [x, y] = grid.position(i, j);
                values.push(f(x, y));
            }
        }
        Self { grid, repr: Representation::Physical, values }
    }

    /// Builds a field from its coefficients `û(ξ)`.
    pub fn from_spectrum(grid: GridSpec, f: impl FnMut([f64; 2]) -> C64) -> Self {
        Self { grid, repr: Representation::Frequency, values: grid.frequency_table(f) }
    }

    /// `amplitude · e^{i ξ₀·x}` with `ξ₀ = 2πk/L` an exact grid frequency.
    pub fn plane_wave(grid: GridSpec, wavenumber: [i64; 2], amplitude: C64) -> Result<Self> {
        let (Some(_), Some(_)) = (
            grid.index_of_wavenumber(wavenumber[0]),
            grid.index_of_wavenumber(wavenumber[1]),
        ) else {
            return Err(Error::param(format!("wavenumber {wavenumber:?} is not on the grid")));
        };
        let dk = grid.frequency_step();
        let xi = [dk * wavenumber[0] as f64, dk * wavenumber[1] as f64];
        Ok(Self::from_fn(grid, |x, y| amplitude * C64::from_polar(1.0, xi[0] * x + xi[1] * y)))
    }

    /// Field with a single nonzero coefficient `û(ξ_k) = coefficient`.
    pub fn single_mode(grid: GridSpec, wavenumber: [i64; 2], coefficient: C64) -> Result<Self> {
        let (Some(i), Some(j)) = (
            grid.index_of_wavenumber(wavenumber[0]),
            grid.index_of_wavenumber(wavenumber[1]),
        ) else {
            return Err(Error::param(format!("wavenumber {wavenumber:?} is not on the grid")));
        };
        let mut f = Self::zeros(grid, Representation::Frequency);
        f.values[i * grid.points_per_side() + j] = coefficient;
        Ok(f)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    fn expect(&self, repr: Representation) -> Result<()> {
        if self.repr == repr {
            Ok(())
        } else {
            Err(Error::Representation { expected: repr.name(), found: self.repr.name() })
        }
    }

    /// Physical → frequency. Fails on a field already in frequency form.
    pub fn forward_transform(&self) -> Result<Field2D> {
        self.expect(Representation::Physical)?;
        Ok(self.clone().into_frequency())
    }

    /// Frequency → physical. Fails on a field already in physical form.
    pub fn inverse_transform(&self) -> Result<Field2D> {
        self.expect(Representation::Frequency)?;
        Ok(self.clone().into_physical())
    }

    pub fn into_frequency(mut self) -> Field2D {
        if self.repr == Representation::Physical {
            let n = self.grid.points_per_side();
            fft2(&mut self.values, n, FftDirection::Forward);
            let scale = self.grid.box_length() / (n * n) as f64;
            self.values.iter_mut().for_each(|v| *v *= scale);
            self.repr = Representation::Frequency;
        }
        self
    }

    pub fn into_physical(mut self) -> Field2D {
        if self.repr == Representation::Frequency {
            let n = self.grid.points_per_side();
            fft2(&mut self.values, n, FftDirection::Inverse);
            let scale = 1.0 / self.grid.box_length();
            self.values.iter_mut().for_each(|v| *v *= scale);
            self.repr = Representation::Physical;
        }
        self
    }

    pub fn to_frequency(&self) -> Field2D {
        self.clone().into_frequency()
    }

    pub fn to_physical(&self) -> Field2D {
        self.clone().into_physical()
    }

    pub fn into_representation(self, repr: Representation) -> Field2D {
        match repr {
            Representation::Physical => self.into_physical(),
            Representation::Frequency => self.into_frequency(),
        }
    }

    /// Multiplies every coefficient by `symbol(ξ)`; result in frequency form.
    pub fn apply_symbol(&self, mut symbol: impl FnMut([f64; 2]) -> f64) -> Field2D {
        let mut out = self.to_frequency();
        let n = self.grid.points_per_side();
        for i in 0..n {
            let xi0 = self.grid.frequency(i);
            for j in 0..n {
                out.values[i * n + j] *= symbol([xi0, self.grid.frequency(j)]);
            }
        }
        out
    }

    /// Multiplies coefficients elementwise by a precomputed table
    /// (buffer order, see [`GridSpec::frequency_table`]).
    pub fn apply_table(&self, table: &[f64]) -> Field2D {
        assert_eq!(table.len(), self.values.len());
        let mut out = self.to_frequency();
        out.values.iter_mut().zip(table).for_each(|(v, &m)| *v *= m);
        out
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Field2D {
        Field2D { grid: self.grid, repr: self.repr, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn scale(&self, alpha: C64) -> Field2D {
        self.map(|v| v * alpha)
    }

    fn check_grid(&self, other: &Field2D) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    /// `α·self + β·other`, computed in `self`'s representation.
    pub fn linear_combination(&self, alpha: C64, other: &Field2D, beta: C64) -> Result<Field2D> {
        self.check_grid(other)?;
        let other = other.clone().into_representation(self.repr);
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| alpha * a + beta * b).collect();
        Ok(Field2D { grid: self.grid, repr: self.repr, values })
    }

    /// `Σ|û|²`, equivalently the midpoint quadrature of `∫|u|²`.
    pub fn norm_sq(&self) -> f64 {
        let sum: f64 = self.values.iter().map(|v| v.norm_sqr()).sum();
        match self.repr {
            Representation::Frequency => sum,
            Representation::Physical => sum * self.grid.cell_area(),
        }
    }

    /// Discrete `L²` norm.
    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `‖self − other‖_{L²}`.
    pub fn l2_distance(&self, other: &Field2D) -> Result<f64> {
        Ok(self.linear_combination(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))?.l2_norm())
    }

    /// `‖self − reference‖ / ‖reference‖`.
    pub fn relative_l2_error(&self, reference: &Field2D) -> Result<f64> {
        let denom = reference.l2_norm();
        if denom == 0.0 {
            return Err(Error::DegenerateInput("reference field is zero".into()));
        }
        Ok(self.l2_distance(reference)? / denom)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

impl Add for &Field2D {
    type Output = Field2D;

    /// Panics if the grids differ.
    fn add(self, rhs: &Field2D) -> Field2D {
        self.linear_combination(C64::new(1.0, 0.0), rhs, C64::new(1.0, 0.0)).expect("grid mismatch")
    }
}

impl Sub for &Field2D {
    type Output = Field2D;

    /// Panics if the grids differ.
    fn sub(self, rhs: &Field2D) -> Field2D {
        self.linear_combination(C64::new(1.0, 0.0), rhs, C64::new(-1.0, 0.0)).expect("grid mismatch")
    }
}

impl Mul<C64> for &Field2D {
    type Output = Field2D;

    fn mul(self, rhs: C64) -> Field2D {
        self.scale(rhs)
    }
}
