//! A small almost-conservation sweep: sup-increment of E(I_N u) over a short
//! window against N, for rough-tail data normalized to E(I_N u₀) = 1.
//!
//!     cargo run --release --example almost_conservation

use bnls::harness::{generate_data, DataContext, DataRecipe};
use bnls::globalizer::{almost_conservation_sweep, SweepNormalization};
use bnls::spectral::Dyadic;
use bnls::{GridSpec, SolverConfig};

fn main() -> bnls::Result<()> {
    let grid = GridSpec::torus(192)?;
    let ns: Vec<Dyadic> = [4, 8, 16].into_iter().map(Dyadic::new).collect::<bnls::Result<_>>()?;
    let ctx = DataContext { s: 1.5, largest_cutoff: ns[2], dealias_fraction: 1.0 / 3.0 };
    let recipe = DataRecipe::RoughTail { decay: None, energy_target: 1.0 };
    let solver = SolverConfig::new(5e-4, 0.05).record_every(1);
    for seed in 0..3 {
        let u0 = generate_data(&recipe, seed, grid, &ctx)?;
        let r = almost_conservation_sweep(&u0, 1.5, &ns, &solver, seed, SweepNormalization::PerCutoff)?;
        let inc: Vec<String> = r.increments.iter().map(|i| format!("{i:.3e}")).collect();
        println!("seed {seed}: increments [{}] slope {:.2}", inc.join(", "), r.slope);
    }
    Ok(())
}
