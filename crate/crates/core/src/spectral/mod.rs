//! Periodic-box spectral representation.

mod bump;
pub(crate) mod fft;
mod field;
mod grid;
pub mod lp;
pub mod norms;

pub use bump::{smooth_step, BumpProfile};
pub use field::{Field2D, Representation};
pub use grid::GridSpec;
pub use lp::{bernstein_ratio, lp_decompose, lp_project, Dyadic, LpKind};
pub use norms::{bilaplacian, hs, hs_dot, laplacian, linf_norm, lp_norm, sobolev_norm, SobolevWeight};
