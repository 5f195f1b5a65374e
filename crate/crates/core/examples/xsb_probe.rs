//! Windowed X^{s,b} norms: the free flow against its closed form, and the
//! nonlinear flow of I u.
//!
//!     cargo run --release --example xsb_probe

use bnls::diagnostics::{window_constant, xsb_norm, SpaceTimeField, TimeWindow};
use bnls::evolution::Integrator;
use bnls::{Field2D, GridSpec, IMultiplier, Scheme, C64};

fn main() -> bnls::Result<()> {
    let grid = GridSpec::new(20.0, 128)?;
    let [cx, cy] = grid.center();
    let u0 = Field2D::from_fn(grid, |x, y| C64::new((-((x - cx).powi(2) + (y - cy).powi(2)) / 2.0).exp(), 0.0));
    let window = TimeWindow::new(0.05, 64)?;
    let b = 0.51;

    let free = xsb_norm(&SpaceTimeField::free_evolution(&u0, window.clone()), 0.0, b);
    println!("free flow: {:.10} closed form {:.10}", free.value, window_constant(&window, b) * u0.l2_norm());

    let integ = Integrator::new(grid, Scheme::Strang, 1.0 / 3.0)?;
    let m = IMultiplier::with_cutoff(8, 1.5)?;
    let flow = SpaceTimeField::from_flow(&u0, window, &integ, 4)?.map(|f| m.apply(f));
    for s in [0.0, 1.0, 2.0] {
        let e = xsb_norm(&flow, s, b);
        println!("I u in X^{{{s},{b}}}: {:.6} (outer fraction {:.2e})", e.value, e.outer_fraction);
    }
    Ok(())
}
