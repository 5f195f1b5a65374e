use std::f64::consts::TAU;

use crate::{Error, Result};

/// Square periodic box `[0, L)²` sampled on an `n × n` uniform grid.
///
/// Grid point `(i, j)` sits at `x = (i·dx, j·dx)` with `dx = L/n`; the index
/// `i` runs along the first axis and is the slow (row) index of every value
/// buffer. Frequency index `i` corresponds to the integer wavenumber
/// `k = i` for `i < n/2` and `k = i − n` otherwise, so `−n/2 ≤ k < n/2`, and
/// to the angular frequency `ξ = 2πk/L`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    box_length: f64,
    n: usize,
}

impl GridSpec {
    /// Default box side, `2π·8`.
    pub const DEFAULT_BOX_LENGTH: f64 = TAU * 8.0;

    pub fn new(box_length: f64, points_per_side: usize) -> Result<Self> {
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::param(format!("box length must be positive, got {box_length}")));
        }
        if points_per_side < 8 || points_per_side % 2 != 0 {
            return Err(Error::param(format!(
                "points per side must be even and >= 8, got {points_per_side}"
            )));
        }
        Ok(Self { box_length, n: points_per_side })
    }

    /// The `[0, 2π)²` box.
    pub fn torus(points_per_side: usize) -> Result<Self> {
        Self::new(TAU, points_per_side)
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn points_per_side(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    pub fn cell_area(&self) -> f64 {
        let dx = self.spacing();
        dx * dx
    }

    pub fn area(&self) -> f64 {
        self.box_length * self.box_length
    }

    /// Spacing of the discrete frequency lattice, `2π/L`.
    pub fn frequency_step(&self) -> f64 {
        TAU / self.box_length
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Largest resolved angular frequency along an axis, `π n / L`.
    pub fn nyquist_frequency(&self) -> f64 {
        self.frequency_step() * self.nyquist_index() as f64
    }

    /// Signed integer wavenumber stored at buffer index `index`.
    pub fn wavenumber(&self, index: usize) -> i64 {
        let half = self.n / 2;
        if index < half {
            index as i64
        } else {
            index as i64 - self.n as i64
        }
    }

    /// Buffer index holding wavenumber `k`, if it is on the grid.
    pub fn index_of_wavenumber(&self, k: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if k < -half || k >= half {
            return None;
        }
        Some(if k >= 0 { k as usize } else { (k + self.n as i64) as usize })
    }

    pub fn frequency(&self, index: usize) -> f64 {
        self.frequency_step() * self.wavenumber(index) as f64
    }

    pub fn xi(&self, i: usize, j: usize) -> [f64; 2] {
        [self.frequency(i), self.frequency(j)]
    }

    pub fn position(&self, i: usize, j: usize) -> [f64; 2] {
        let dx = self.spacing();
        [i as f64 * dx, j as f64 * dx]
    }

    pub fn center(&self) -> [f64; 2] {
        [0.5 * self.box_length, 0.5 * self.box_length]
    }

    /// Evaluates `symbol(ξ)` on every frequency in buffer order.
    pub fn frequency_table<T>(&self, mut symbol: impl FnMut([f64; 2]) -> T) -> Vec<T> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n {
            let xi0 = self.frequency(i);
            for j in 0..self.n {
                out.push(symbol([xi0, self.frequency(j)]));
            }
        }
        out
    }

    /// `|ξ|` in buffer order.
    pub fn radial_frequencies(&self) -> Vec<f64> {
        self.frequency_table(|xi| xi[0].hypot(xi[1]))
    }

    /// `max(|k₁|, |k₂|)` in buffer order, in integer wavenumber units.
    pub fn sup_wavenumbers(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n {
            let a = self.wavenumber(i).unsigned_abs();
            for j in 0..self.n {
                out.push(a.max(self.wavenumber(j).unsigned_abs()));
            }
        }
        out
    }
}
