//! Time integration by operator splitting.

pub mod snapshot;
mod solver;
mod trajectory;

pub use solver::{
    dealias, dealias_mask, is_dealiased, linear_propagate, nonlinear_phase_step, propagator_phase, step, Integrator,
    Scheme, SolverConfig, Stepper,
};
pub use trajectory::{
    convergence_study, edge_spectrum_ratio, evolve, evolve_observed, plane_wave_solution, ConvergenceReference,
    ConvergenceReport, Trajectory, EDGE_SPECTRUM_TOLERANCE,
};
