//! Evolves a plane wave and compares it with the closed-form solution
//! `A e^{i(ξ₀·x − ωt)}`, `ω = |ξ₀|⁴ + |A|⁴`.
//!
//!     cargo run --release --example plane_wave

use bnls::evolution::{evolve, plane_wave_solution};
use bnls::{Field2D, GridSpec, SolverConfig, C64};

fn main() -> bnls::Result<()> {
    let grid = GridSpec::torus(64)?;
    let (k, a) = ([1, 0], 1.0);
    let u0 = Field2D::plane_wave(grid, k, C64::new(a, 0.0))?;
    let cfg = SolverConfig::new(1e-4, 0.5).record_every(1000);
    let traj = evolve(&u0, &cfg, None)?;
    for (t, r) in traj.times.iter().zip(&traj.reports) {
        println!("t = {t:.3}  mass = {:.15}  energy = {:.15}", r.mass, r.energy);
    }
    let exact = plane_wave_solution(grid, k, a, 0.5)?;
    let err = traj.final_field.as_ref().unwrap().relative_l2_error(&exact)?;
    println!("relative L2 error at t = 0.5: {err:.3e}");
    Ok(())
}
