//! Scaling symmetry `u_λ(t, x) = λ^{−1} u(t/λ⁴, x/λ)` checked on nested grids.
//!
//!     cargo run --release --example scaling

use bnls::globalizer::{rescale, scaling_check, RescaleLimits};
use bnls::{Field2D, GridSpec, SolverConfig, C64};

fn main() -> bnls::Result<()> {
    let grid = GridSpec::new(16.0, 96)?;
    let [cx, cy] = grid.center();
    let u0 = Field2D::from_fn(grid, |x, y| C64::new((-((x - cx).powi(2) + (y - cy).powi(2)) / 2.0).exp(), 0.0));
    let limits = RescaleLimits::default();
    let v0 = rescale(&u0, 2.0, &limits)?;
    println!("mass defect under rescale: {:.3e}", (v0.l2_norm() / u0.l2_norm() - 1.0).abs());
    for dt in [1e-4, 5e-5] {
        let d = scaling_check(&u0, 2.0, 0.01, &SolverConfig::new(dt, 0.01), &limits)?;
        println!("dt = {dt:e}: relative discrepancy {d:.3e}");
    }
    Ok(())
}
