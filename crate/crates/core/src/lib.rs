//! Pseudo-spectral laboratory for the two-dimensional defocusing quintic
//! biharmonic Schrödinger equation
//!
//! ```text
//!     i ∂ₜu − Δ²u = |u|⁴u,        x ∈ [0, L)², periodic
//! ```
//!
//! The crate bundles a split-step Fourier solver with the harmonic-analysis
//! machinery used by the I-method for this equation: Littlewood–Paley
//! projections, the smoothing multiplier `m_N`, the modified energy
//! `E(I u)`, windowed `X^{s,b}` norms, Strichartz sampling and the
//! scaling/iteration arithmetic of the globalization argument.
//!
//! Module map:
//!
//! * [`spectral`]: grids, fields, transforms, Sobolev and Lebesgue norms,
//!   Littlewood–Paley projections.
//! * [`imethod`]: the multiplier `m_N`, energy functionals and multiplier
//!   bound sampling.
//! * [`evolution`]: Strang / Lie / Yoshida splitting, trajectories and
//!   convergence studies.
//! * [`diagnostics`]: space-time norms, Strichartz and square-function checks.
//! * [`globalizer`]: rescaling, globalization plans, almost-conservation sweeps.
//! * [`harness`]: experiment configuration, seeded data, CSV/SVG output.

pub mod diagnostics;
pub mod error;
pub mod fit;
pub mod evolution;
pub mod globalizer;
pub mod harness;
pub mod imethod;
pub mod rng;
pub mod spectral;
pub mod table;

pub use error::{Error, Result};
pub use evolution::{Integrator, Scheme, SolverConfig, Trajectory};
pub use imethod::{EnergyReport, IMultiplier};
pub use spectral::{Field2D, GridSpec, Representation};

/// Complex scalar used throughout.
pub type C64 = rustfft::num_complex::Complex64;
