//! Space-time norms, Strichartz sampling and square-function checks.

mod admissible;
mod spacetime;
mod square_function;
pub mod strichartz;

pub use admissible::{validate_admissible, Admissibility, AdmissiblePair};
pub use spacetime::{
    mixed_norm_samples, mixed_norm_trajectory, time_norm, window_constant, xsb_norm, SpaceTimeField,
    SpaceTimeSpectrum, TimeWindow, XsbEstimate, DEFAULT_EPSILON, UNDER_RESOLUTION_THRESHOLD,
};
pub use square_function::{square_function, square_function_check};
pub use strichartz::{
    derivative_gain_sample, derivative_gain_trend, strichartz_constant_sample, GainSetup, GainTrend,
    StrichartzReport,
};
