//! Scaling, almost conservation and the iteration plan.

mod plan;
mod rescale;
mod sweep;

pub use plan::{
    choose_lambda, cutoff_exponent, dyadic_ceil, growth_exponent, plan, plan_with, GlobalizationPlan, PlanInputs,
    CALIBRATED_C0, CALIBRATED_C1, DIVERGENCE_THRESHOLD, PLAN_COLUMNS,
};
pub use rescale::{rescale, rescale_onto, rescaled_modified_energy, rescaled_points, RescaleLimits};
pub use sweep::{
    almost_conservation_sweep, normalize_modified_energy, rescaled_energy_identity_check, scaling_check,
    set_modified_energy, CutoffMode, IdentityReport, SweepNormalization, SweepResult, SWEEP_COLUMNS,
};
