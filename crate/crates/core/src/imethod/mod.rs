//! The I-operator, energy functionals and commutator-symbol sampling.

pub mod case1;
mod energy;
mod multiplier;

pub use case1::{case1_multiplier_bound, case1_ratio, Case1Regime, Case1Report, CASE1_CONSTANT};
pub use energy::{
    energy, kinetic, mass, me_hs_sandwich_check, modified_energy, sextic, EnergyReport, SandwichReport,
    SEXTIC_COEFFICIENT,
};
pub use multiplier::{apply_i, IMultiplier, S_MIN};
