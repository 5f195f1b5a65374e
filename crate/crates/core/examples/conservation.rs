//! Mass and energy drift of Strang splitting on Gaussian data, and the
//! order at which the energy drift vanishes as dt decreases.
//!
//!     cargo run --release --example conservation

use bnls::fit::loglog_slope;
use bnls::imethod::energy;
use bnls::evolution::evolve_observed;
use bnls::{Field2D, GridSpec, SolverConfig, C64};

fn gaussian(grid: GridSpec) -> Field2D {
    let [cx, cy] = grid.center();
    Field2D::from_fn(grid, |x, y| C64::new((-((x - cx).powi(2) + (y - cy).powi(2)) / 2.0).exp(), 0.0))
}

fn drift(u0: &Field2D, dt: f64, t_end: f64, coefficient: f64) -> bnls::Result<(f64, f64)> {
    let (m0, e0) = (u0.norm_sq(), energy(u0, coefficient));
    let (mut dm, mut de) = (0.0f64, 0.0f64);
    evolve_observed(u0, &SolverConfig::new(dt, t_end), |_, u| {
        dm = dm.max((u.norm_sq() - m0).abs() / m0);
        de = de.max((energy(u, coefficient) - e0).abs() / e0);
    })?;
    Ok((dm, de))
}

fn main() -> bnls::Result<()> {
    let grid = GridSpec::new(16.0, 128)?;
    let u0 = gaussian(grid).scale(C64::new(2.0, 0.0));
    let (dm, _) = drift(&u0, 1e-4, 1.0, 1.0 / 6.0)?;
    println!("mass drift over 10^4 steps: {dm:.3e}");

    let dts = [4e-4, 2e-4, 1e-4, 5e-5];
    for c in [1.0 / 6.0, 1.0 / 3.0] {
        let drifts: Vec<f64> = dts.iter().map(|&dt| drift(&u0, dt, 0.1, c).map(|d| d.1)).collect::<bnls::Result<_>>()?;
        let order = loglog_slope(&dts, &drifts)?;
        let shown: Vec<String> = drifts.iter().map(|d| format!("{d:.3e}")).collect();
        println!("sextic coefficient {c:.4}: energy drifts [{}], order {order:.2}", shown.join(", "));
    }
    Ok(())
}
